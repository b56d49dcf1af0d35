use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use num_traits::Zero;
use qshuffle::freeword::FreeElement;
use qshuffle::linalg::{graded_block, CoordinateSystem, EchelonBasis, Matrix};
use qshuffle::operators as ops;
use qshuffle::qfield::RatFunc;
use qshuffle::qshuffle::{check_associativity, check_qserre_shuffle, shuffle};
use qshuffle::repmodule::{self as rm, ActionTable, BasisFixture, BoldUCache, GeneratorId, MatrixBlock};
use qshuffle::report::{Report, Status};
use qshuffle::series::{self, BiSeries};
use qshuffle::subalgebra::{self as sub, USubspaceCache};

/// Largest total degree any command will compute.
const HARD_CAP: usize = 12;

#[derive(Parser)]
#[command(name = "qshuffle", version, about = "Exact q-shuffle algebra and basic module computations")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory holding basic_bases.txt and generator_matrices.txt, overriding the bundled copies.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    #[value(name = "U")]
    U,
    #[value(name = "bold-U")]
    BoldU,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Intersection,
    Generation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisKind {
    /// The bundled listed bases of the basic module.
    Listed,
    /// Reduced echelon bases.
    Echelon,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Phi,
    Delta,
    P,
    Mu,
    PhiWeight,
    BoldDims,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Shuffle,
    /// Operator relations on words and on U.
    #[value(name = "appendix-a")]
    Relations,
    Intertwiners,
    Presentation,
    BasicModule,
    /// The bundled bases of the basic module.
    #[value(name = "appendix-c")]
    ListedBases,
    /// The bundled generator matrices.
    #[value(name = "appendix-d")]
    Matrices,
    /// Surjectivity, injectivity and kernel decomposition of the deletion pairs.
    #[value(name = "appendix-e")]
    Kernels,
    Series,
    All,
}

fn degree(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("{s:?} is not a degree"))?;
    if n > HARD_CAP {
        return Err(format!("degree {n} exceeds the hard cap {HARD_CAP}"));
    }
    Ok(n)
}

#[derive(Subcommand)]
enum Command {
    /// Shuffle product of two elements.
    Shuffle { a: String, b: String },
    /// Dimension table of U(r,s) or of the basic module.
    Dims {
        #[arg(long, value_enum, default_value_t = Space::U)]
        space: Space,
        /// Every (r,s) with r+s <= max.
        #[arg(long, default_value = "8", value_parser = degree)]
        max: usize,
        /// Every (r,s) with r,s <= square instead.
        #[arg(long, value_parser = degree)]
        square: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Intersection)]
        method: Method,
    },
    /// A basis of one component.
    Basis {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Space::U)]
        space: Space,
        #[arg(long, value_enum, default_value_t = BasisKind::Echelon)]
        basis: BasisKind,
    },
    /// Matrix of a generator between direct sums of components of the basic module.
    Matrix {
        #[arg(long)]
        gen: String,
        /// Domain, e.g. "2,1+1,2".
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value_t = BasisKind::Listed)]
        basis: BasisKind,
    },
    /// Expansion of a generating function.
    Genfunc {
        #[arg(value_enum)]
        series: SeriesKind,
        #[arg(long, default_value = "8", value_parser = degree)]
        max: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value = "8", value_parser = degree)]
        max: usize,
        /// Only this action row (presentation suite).
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        row: Option<u8>,
    },
    /// Apply a generator to an element.
    Apply {
        #[arg(long)]
        gen: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=3))]
        row: u8,
    },
}

struct Output {
    command: &'static str,
    params: Value,
    report: Report,
    data: Value,
    text: String,
    latex: String,
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = &cli.fixtures {
        // Read by the fixture loader; set before any worker could look.
        std::env::set_var(rm::FIXTURE_DIR_ENV, dir);
    }
    let out = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.format {
        Format::Text => print!("{}", out.text),
        Format::Latex => print!("{}", out.latex),
        Format::Json => {
            let mut v = json!({
                "command": out.command,
                "params": out.params,
                "results": out.report.results,
            });
            if !out.data.is_null() {
                v["data"] = out.data;
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    if out.report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cmd: &Command) -> Res<Output> {
    match cmd {
        Command::Shuffle { a, b } => cmd_shuffle(a, b),
        Command::Dims { space, max, square, method } => cmd_dims(*space, *max, *square, *method),
        Command::Basis { r, s, space, basis } => cmd_basis(*r, *s, *space, *basis),
        Command::Matrix { gen, from, to, basis } => cmd_matrix(gen, from, to, *basis),
        Command::Genfunc { series, max } => cmd_genfunc(*series, *max),
        Command::Verify { suite, max, row } => cmd_verify(*suite, *max, *row),
        Command::Apply { gen, to, row } => cmd_apply(gen, to, *row),
    }
}

// --- rendering -------------------------------------------------------------

/// `q^-2` becomes `q^{-2}`; `*` is dropped.
fn latex_scalar(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '^' => {
                let mut exp = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() || (d == '-' && exp.is_empty()) {
                        exp.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push_str(&format!("^{{{exp}}}"));
            }
            '*' => {}
            _ => out.push(c),
        }
    }
    out
}

fn latex_ratfunc(c: &RatFunc) -> String {
    let p = c.pretty();
    if p.starts_with('[') || p.starts_with("-[") || c.denom().is_one() {
        return latex_scalar(&p);
    }
    format!("\\frac{{{}}}{{{}}}", latex_scalar(&c.numer().to_string()), latex_scalar(&c.denom().to_string()))
}

fn latex_element(e: &FreeElement) -> String {
    latex_scalar(&e.to_string())
}

fn text_table(rows: &[Vec<Option<String>>]) -> String {
    let width = rows.iter().flatten().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> =
            row.iter().map(|c| format!("{:>width$}", c.as_deref().unwrap_or("."), width = width)).collect();
        out.push_str(cells.join(" ").trim_end());
        out.push('\n');
    }
    out
}

fn latex_matrix(rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n", body.join(" \\\\\n"))
}

fn report_output(command: &'static str, params: Value, report: Report) -> Output {
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for r in &report.results {
        match r.status {
            Status::Pass => pass += 1,
            Status::Fail => fail += 1,
            Status::Skip => skip += 1,
        }
    }
    let text = format!("{report}{pass} passed, {fail} failed, {skip} skipped\n");
    let mut latex = String::from("\\begin{tabular}{lll}\n");
    for r in &report.results {
        latex.push_str(&format!(
            "{} & {} & {} \\\\\n",
            r.name.replace('_', "\\_"),
            r.status,
            r.details.replace('_', "\\_")
        ));
    }
    latex.push_str("\\end{tabular}\n");
    Output { command, params, report, data: Value::Null, text, latex }
}

fn data_output(command: &'static str, params: Value, data: Value, text: String, latex: String) -> Output {
    Output { command, params, report: Report::new(), data, text, latex }
}

// --- commands --------------------------------------------------------------

fn cmd_shuffle(a: &str, b: &str) -> Res<Output> {
    let x: FreeElement = a.parse()?;
    let y: FreeElement = b.parse()?;
    let max = x.max_len() + y.max_len();
    if max > HARD_CAP {
        return Err(format!("total length {max} exceeds the hard cap {HARD_CAP}").into());
    }
    let p = shuffle(&x, &y);
    Ok(data_output(
        "shuffle",
        json!({"a": a, "b": b}),
        json!({"product": p.to_string()}),
        format!("{p}\n"),
        format!("{}\n", latex_element(&p)),
    ))
}

/// The `(r, s)` pairs of a table and its shape.
fn table_cells(max: usize, square: Option<usize>) -> Vec<Vec<Option<(usize, usize)>>> {
    match square {
        Some(n) => (0..=n).map(|r| (0..=n).map(|s| Some((r, s))).collect()).collect(),
        None => (0..=max).map(|r| (0..=max).map(|s| (r + s <= max).then_some((r, s))).collect()).collect(),
    }
}

fn cmd_dims(space: Space, max: usize, square: Option<usize>, method: Method) -> Res<Output> {
    let cells = table_cells(max, square);
    let top = square.map_or(max, |n| 2 * n);
    if top > HARD_CAP {
        return Err(format!("degree {top} exceeds the hard cap {HARD_CAP}").into());
    }
    let cache = USubspaceCache::new(top);
    let generated = if space == Space::BoldU && method == Method::Generation {
        Some(BoldUCache::by_generation(top, 2)?)
    } else {
        None
    };
    let mut table: Vec<Vec<Option<usize>>> = Vec::new();
    for row in &cells {
        let mut out = Vec::new();
        for cell in row {
            out.push(match cell {
                None => None,
                Some((r, s)) => Some(match (space, &generated) {
                    (Space::U, _) => cache.component(*r, *s)?.dim(),
                    (Space::BoldU, Some(g)) => g.dim(*r, *s),
                    (Space::BoldU, None) => rm::bold_u_by_intersection(&cache, *r, *s)?.dim(),
                }),
            });
        }
        table.push(out);
    }
    let strings: Vec<Vec<Option<String>>> =
        table.iter().map(|r| r.iter().map(|c| c.map(|d| d.to_string())).collect()).collect();
    let latex_rows: Vec<Vec<String>> =
        strings.iter().map(|r| r.iter().map(|c| c.clone().unwrap_or_default()).collect()).collect();
    let space_name = if space == Space::U { "U" } else { "bold-U" };
    Ok(data_output(
        "dims",
        json!({"space": space_name, "max": max, "square": square,
               "method": if method == Method::Generation { "generation" } else { "intersection" }}),
        json!({"table": table}),
        text_table(&strings),
        latex_matrix(&latex_rows),
    ))
}

fn cmd_basis(r: usize, s: usize, space: Space, kind: BasisKind) -> Res<Output> {
    if r + s > HARD_CAP {
        return Err(format!("degree {} exceeds the hard cap {HARD_CAP}", r + s).into());
    }
    let vectors: Vec<FreeElement> = match (space, kind) {
        (Space::U, BasisKind::Listed) => return Err("listed bases exist only for the basic module".into()),
        (Space::BoldU, BasisKind::Listed) => BasisFixture::load()?.vectors(r, s),
        (Space::U, BasisKind::Echelon) => USubspaceCache::new(r + s).component(r, s)?.rref().to_vec(),
        (Space::BoldU, BasisKind::Echelon) => {
            rm::bold_u_by_intersection(&USubspaceCache::new(r + s), r, s)?.rref().to_vec()
        }
    };
    let strings: Vec<String> = vectors.iter().map(ToString::to_string).collect();
    let mut text = String::new();
    for (i, v) in strings.iter().enumerate() {
        text.push_str(&format!("{}: {v}\n", i + 1));
    }
    if strings.is_empty() {
        text.push_str("(zero space)\n");
    }
    let latex = vectors.iter().map(|v| format!("{}\\\\\n", latex_element(v))).collect();
    Ok(data_output(
        "basis",
        json!({"r": r, "s": s, "space": if space == Space::U {"U"} else {"bold-U"},
               "basis": if kind == BasisKind::Listed {"listed"} else {"echelon"}}),
        json!({"dim": vectors.len(), "vectors": strings}),
        text,
        latex,
    ))
}

fn parse_sum(src: &str) -> Res<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for part in src.split('+') {
        let (r, s) = part.trim().split_once(',').ok_or_else(|| format!("bad component {part:?}"))?;
        let (r, s): (usize, usize) = (r.trim().parse()?, s.trim().parse()?);
        if r + s > HARD_CAP {
            return Err(format!("degree {} exceeds the hard cap {HARD_CAP}", r + s).into());
        }
        out.push((r, s));
    }
    Ok(out)
}

fn cmd_matrix(gen: &str, from: &str, to: &str, kind: BasisKind) -> Res<Output> {
    let g: GeneratorId = gen.parse()?;
    let dom = parse_sum(from)?;
    let cod = parse_sum(to)?;
    let m: Matrix = match kind {
        BasisKind::Listed => rm::generator_block(&BasisFixture::load()?, g, &dom, &cod)?,
        BasisKind::Echelon => {
            let top = dom.iter().chain(&cod).map(|(r, s)| r + s).max().unwrap_or(0);
            let cache = USubspaceCache::new(top);
            let bases = |parts: &[(usize, usize)]| -> Res<Vec<EchelonBasis>> {
                Ok(parts.iter().map(|&(r, s)| rm::bold_u_by_intersection(&cache, r, s)).collect::<Result<_, _>>()?)
            };
            let (db, cb) = (bases(&dom)?, bases(&cod)?);
            let dref: Vec<&dyn CoordinateSystem> = db.iter().map(|b| b as &dyn CoordinateSystem).collect();
            let cref: Vec<&dyn CoordinateSystem> = cb.iter().map(|b| b as &dyn CoordinateSystem).collect();
            let table = ActionTable::main();
            graded_block(&dref, &cref, |v| rm::act(table, g, v))?
        }
    };
    let cells: Vec<Vec<String>> = m.entries.iter().map(|r| r.iter().map(RatFunc::pretty).collect()).collect();
    let text = if m.rows == 0 || m.cols == 0 {
        format!("({}x{} matrix)\n", m.rows, m.cols)
    } else {
        text_table(&cells.iter().map(|r| r.iter().cloned().map(Some).collect()).collect::<Vec<_>>())
    };
    let latex_rows: Vec<Vec<String>> = m.entries.iter().map(|r| r.iter().map(latex_ratfunc).collect()).collect();
    Ok(data_output(
        "matrix",
        json!({"gen": g.name(), "from": from, "to": to,
               "basis": if kind == BasisKind::Listed {"listed"} else {"echelon"}}),
        json!({"rows": m.rows, "cols": m.cols, "entries": cells}),
        text,
        latex_matrix(&latex_rows),
    ))
}

fn bi_output(name: &str, max: usize, series: &BiSeries) -> (Value, String, String) {
    let mut terms = Vec::new();
    for (r, s, c) in series.entries() {
        if !c.is_zero() {
            terms.push(json!({"r": r, "s": s, "coeff": c.to_string()}));
        }
    }
    let side = max;
    let rows: Vec<Vec<Option<String>>> = (0..=side)
        .map(|r| (0..=side).map(|s| (r + s <= max).then(|| series.coeff(r, s).to_string())).collect())
        .collect();
    let latex = format!("{name}(t,u) = {}\n", series);
    (json!({"terms": terms}), format!("{series}\n\n{}", text_table(&rows)), latex)
}

fn cmd_genfunc(kind: SeriesKind, max: usize) -> Res<Output> {
    let (name, (data, text, latex)) = match kind {
        SeriesKind::Phi => ("Phi", bi_output("\\Phi", max, &series::expand_phi(max))),
        SeriesKind::Delta => ("Delta", bi_output("\\Delta", max, &series::expand_delta(max))),
        SeriesKind::PhiWeight => ("phi", bi_output("\\phi", max, &series::expand_phi_weight(max))),
        SeriesKind::BoldDims => ("p(tu)phi", bi_output("p(tu)\\phi", max, &series::bold_dimension_series(max))),
        SeriesKind::P | SeriesKind::Mu => {
            let (n, v) = if kind == SeriesKind::P { ("p", series::expand_p(max)) } else { ("mu", series::expand_mu(max)) };
            let strs: Vec<String> = v.iter().map(ToString::to_string).collect();
            let text = format!("{}\n", strs.join(" "));
            let latex = format!("{n}: {}\n", strs.join(", "));
            (n, (json!({"coefficients": strs}), text, latex))
        }
    };
    Ok(data_output("genfunc", json!({"series": name, "max": max}), data, text, latex))
}

fn cmd_apply(gen: &str, to: &str, row: u8) -> Res<Output> {
    let g: GeneratorId = gen.parse()?;
    let e: FreeElement = to.parse()?;
    if e.max_len() > HARD_CAP {
        return Err(format!("input longer than the hard cap {HARD_CAP}").into());
    }
    let table = ActionTable::row(row)?;
    let img = rm::act(table, g, &e);
    Ok(data_output(
        "apply",
        json!({"gen": g.name(), "to": to, "row": row}),
        json!({"result": img.to_string()}),
        format!("{img}\n"),
        format!("{}\n", latex_element(&img)),
    ))
}

// --- verification ----------------------------------------------------------

fn suite_report(suite: Suite, max: usize, row: Option<u8>) -> Res<Report> {
    let cache = USubspaceCache::new((max + 1).min(HARD_CAP));
    let mut rep = Report::new();
    match suite {
        Suite::Shuffle => {
            rep.extend(check_qserre_shuffle());
            rep.push(check_associativity(max.min(9)));
        }
        Suite::Relations => {
            let words = max.min(8);
            rep.extend(Report { results: ops::check_operator_relations(words) }.prefixed("words"));
            rep.extend(Report { results: ops::check_grading_relations(words) }.prefixed("grading"));
            let vectors = rm::u_vectors(&cache, max)?;
            rep.extend(Report { results: ops::check_relations_on(&vectors) }.prefixed("on U"));
            rep.extend(sub::closure_check_starred(&cache, max)?);
            rep.extend(sub::closure_check_raising(&cache, max)?);
            rep.extend(sub::eigenvalue_check(&cache, max)?);
            rep.extend(sub::symmetry_check(&cache, max)?);
        }
        Suite::Intertwiners => {
            rep.extend(Report { results: ops::check_intertwiners(max.min(8)) });
        }
        Suite::Presentation => {
            let rows: Vec<u8> = row.map_or_else(|| (0..=3).collect(), |r| vec![r]);
            for r in rows {
                rep.extend(rm::variant_action_check(&cache, r, max)?);
            }
        }
        Suite::BasicModule => {
            let int = BoldUCache::by_intersection(&cache, max)?;
            let gen = BoldUCache::by_generation(max, 2)?;
            rep.push(rm::check_generation_vs_intersection(&gen, &int));
            rep.push(rm::check_dimension_formula(&int));
            rep.push(series::check_bold_dimension_series(max, |r, s| int.dim(r, s)));
            rep.push(rm::highest_weight_check(ActionTable::main()));
            rep.extend(rm::weight_eigenvalue_check(&cache, max)?);
            rep.push(rm::reach_one_check(&int));
            rep.extend(rm::bold_v_check(max.min(8)));
            rep.push(rm::nonnilpotence_witness(4));
            rep.push(rm::nilpotence_on_bold_u(&int, 2 * max + 4));
        }
        Suite::ListedBases => {
            rep.extend(rm::verify_listed_bases(&cache, &BasisFixture::load()?, max)?);
        }
        Suite::Matrices => {
            let fixture = BasisFixture::load()?;
            let blocks: Vec<MatrixBlock> = MatrixBlock::load()?
                .into_iter()
                .filter(|b| b.domain.iter().chain(&b.codomain).all(|(r, s)| r + s <= max))
                .collect();
            rep.extend(rm::verify_matrices(&fixture, &blocks)?);
        }
        Suite::Kernels => {
            rep.extend(rm::check_kernel_decomposition(&cache, max)?);
        }
        Suite::Series => {
            rep.extend(series::check_delta_identities(max));
            rep.extend(series::check_max(max).0);
        }
        Suite::All => {
            for (name, s) in [
                ("shuffle", Suite::Shuffle),
                ("appendix-a", Suite::Relations),
                ("intertwiners", Suite::Intertwiners),
                ("presentation", Suite::Presentation),
                ("basic-module", Suite::BasicModule),
                ("appendix-c", Suite::ListedBases),
                ("appendix-d", Suite::Matrices),
                ("appendix-e", Suite::Kernels),
                ("series", Suite::Series),
            ] {
                rep.extend(suite_report(s, max, row)?.prefixed(name));
            }
        }
    }
    Ok(rep)
}

fn cmd_verify(suite: Suite, max: usize, row: Option<u8>) -> Res<Output> {
    let name = suite.to_possible_value().expect("named").get_name().to_string();
    let rep = suite_report(suite, max, row)?;
    Ok(report_output("verify", json!({"suite": name, "max": max, "row": row}), rep))
}
