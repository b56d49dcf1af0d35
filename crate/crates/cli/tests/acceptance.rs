//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test prints a single `criterion N: PASS|FAIL` line. Expected values
//! are literal tables or come from the small counting oracles below, which
//! share no code with the library.

use std::collections::HashMap;
use std::process::Command;

use serde_json::Value;

use qshuffle::freeword::{FreeElement, IntElement};
use qshuffle::linalg::rank;
use qshuffle::operators::{self as ops, apply, OperatorId};
use qshuffle::qfield::{LaurentPoly, RatFunc};
use qshuffle::qshuffle::{check_associativity, qserre_residuals};
use qshuffle::repmodule::{self as rm, ActionTable, BasisFixture, BoldUCache, GeneratorId, MatrixBlock};
use qshuffle::report::{Report, Status};
use qshuffle::series::{self, RowMax};
use qshuffle::subalgebra::USubspaceCache;

const SHUFFLE_DIMS: [[u64; 7]; 7] = [
    [1, 1, 1, 1, 1, 1, 1],
    [1, 2, 3, 3, 3, 3, 3],
    [1, 3, 6, 8, 9, 9, 9],
    [1, 3, 8, 14, 19, 21, 22],
    [1, 3, 9, 19, 32, 42, 48],
    [1, 3, 9, 21, 42, 66, 87],
    [1, 3, 9, 22, 48, 87, 134],
];

const BASIC_DIMS: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0],
    [0, 1, 2, 1, 0, 0, 0],
    [0, 0, 2, 3, 2, 0, 0],
    [0, 0, 1, 3, 5, 3, 1],
    [0, 0, 0, 1, 5, 7, 5],
    [0, 0, 0, 0, 2, 7, 11],
];

// --- oracles ---------------------------------------------------------------

/// Partitions of `n` into parts of size at most `k`, by plain recursion.
fn partitions(n: u64, k: u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
    if n == 0 {
        return 1;
    }
    if k == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&(n, k)) {
        return v;
    }
    let v = partitions(n, k - 1, memo) + if k <= n { partitions(n - k, k, memo) } else { 0 };
    memo.insert((n, k), v);
    v
}

fn p(n: i64) -> u64 {
    if n < 0 {
        0
    } else {
        partitions(n as u64, n as u64, &mut HashMap::new())
    }
}

/// Multisets of the bidegrees `(n, n-1)`, `(n, n)`, `(n-1, n)`, `n >= 1`,
/// with sum `(r, s)`: choose a multiplicity for each part in turn.
fn shuffle_dim_oracle(r: usize, s: usize) -> u64 {
    let mut parts = Vec::new();
    for n in 1..=r.max(s) + 1 {
        for (a, b) in [(n, n - 1), (n, n), (n - 1, n)] {
            if a <= r && b <= s && a + b > 0 {
                parts.push((a, b));
            }
        }
    }
    fn go(parts: &[(usize, usize)], r: usize, s: usize, memo: &mut HashMap<(usize, usize, usize), u64>) -> u64 {
        let Some((&(a, b), rest)) = parts.split_first() else {
            return u64::from(r == 0 && s == 0);
        };
        let key = (parts.len(), r, s);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0;
        let mut k = 0;
        while k * a <= r && k * b <= s {
            total += go(rest, r - k * a, s - k * b, memo);
            k += 1;
        }
        memo.insert(key, total);
        total
    }
    go(&parts, r, s, &mut HashMap::new())
}

// --- harness ---------------------------------------------------------------

fn cli(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_qshuffle"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .expect("run the binary");
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json from {args:?} (exit {code}): {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

/// `None` for cells outside the computed region.
fn table(v: &Value) -> Vec<Vec<Option<u64>>> {
    v["data"]["table"]
        .as_array()
        .expect("table")
        .iter()
        .map(|row| row.as_array().expect("row").iter().map(Value::as_u64).collect())
        .collect()
}

fn corner(t: &[Vec<Option<u64>>]) -> Vec<Vec<u64>> {
    t.iter().take(7).map(|r| r.iter().take(7).map(|c| c.expect("cell inside the square")).collect()).collect()
}

fn report_failures(rep: &Report, errs: &mut Vec<String>) {
    for f in rep.failures() {
        errs.push(format!("{}: {}", f.name, f.details));
    }
}

fn finish(n: u32, what: &str, errs: Vec<String>) {
    if errs.is_empty() {
        println!("criterion {n}: PASS  {what}");
    } else {
        println!("criterion {n}: FAIL  {what}");
        for e in &errs {
            println!("    {e}");
        }
        panic!("criterion {n} failed: {}", errs.join("; "));
    }
}

// --- criteria --------------------------------------------------------------

#[test]
fn criterion_01_shuffle_subalgebra_dimensions() {
    let mut errs = Vec::new();
    let (v, code) = cli(&["dims", "--space", "U", "--max", "8"]);
    if code != 0 {
        errs.push(format!("dims --max 8 exited {code}"));
    }
    let phi = series::expand_phi(8);
    for (r, row) in table(&v).iter().enumerate() {
        for (s, cell) in row.iter().enumerate() {
            if let Some(d) = cell {
                let oracle = shuffle_dim_oracle(r, s);
                if *d != oracle || phi.coeff(r, s) != (*d).into() {
                    errs.push(format!("({r},{s}): computed {d}, oracle {oracle}, series {}", phi.coeff(r, s)));
                }
            } else if r + s <= 8 {
                errs.push(format!("({r},{s}) missing"));
            }
        }
    }
    let (v, code) = cli(&["dims", "--space", "U", "--square", "6"]);
    if code != 0 {
        errs.push(format!("dims --square 6 exited {code}"));
    }
    let c = corner(&table(&v));
    if c != SHUFFLE_DIMS.map(|r| r.to_vec()).to_vec() {
        errs.push(format!("7x7 corner {c:?}"));
    }
    for (r, row) in SHUFFLE_DIMS.iter().enumerate() {
        for (s, d) in row.iter().enumerate() {
            if shuffle_dim_oracle(r, s) != *d {
                errs.push(format!("oracle disagrees with the literal table at ({r},{s})"));
            }
        }
    }
    finish(1, "dim U(r,s) equals the product expansion; 7x7 corner verbatim", errs);
}

#[test]
fn criterion_02_basic_module_dimensions() {
    let mut errs = Vec::new();
    let (v, code) = cli(&["dims", "--space", "bold-U", "--square", "6"]);
    if code != 0 {
        errs.push(format!("exit {code}"));
    }
    let square = table(&v);
    let c = corner(&square);
    if c != BASIC_DIMS.map(|r| r.to_vec()).to_vec() {
        errs.push(format!("7x7 corner {c:?}"));
    }
    let (v, code) = cli(&["dims", "--space", "bold-U", "--max", "8"]);
    if code != 0 {
        errs.push(format!("exit {code}"));
    }
    let tables = [table(&v), square];
    for t in &tables {
        for (r, row) in t.iter().enumerate() {
            for (s, cell) in row.iter().enumerate() {
                let Some(d) = cell else { continue };
                let (ri, si) = (r as i64, s as i64);
                let want = p(ri - (ri - si) * (ri - si));
                if *d != want {
                    errs.push(format!("({r},{s}): dim {d}, partition count {want}"));
                }
            }
        }
    }
    finish(2, "dim of the basic module components: 7x7 corner and partition formula", errs);
}

#[test]
fn criterion_03_intersection_equals_generation() {
    let mut errs = Vec::new();
    let cache = USubspaceCache::new(8);
    let int = BoldUCache::by_intersection(&cache, 8).unwrap();
    let gen = BoldUCache::by_generation(8, 2).unwrap();
    for (r, s) in USubspaceCache::bidegrees(8) {
        let a = int.get(r, s).expect("intersection component");
        let b = gen.get(r, s).expect("generated component");
        if a.rref() != b.rref() {
            errs.push(format!("({r},{s}): echelon bases differ (dims {} and {})", a.dim(), b.dim()));
        }
    }
    if gen.get(1, 1).map(|b| b.rref().to_vec()) != Some(vec!["xy".parse::<FreeElement>().unwrap()]) {
        errs.push("component (1,1) is not span{xy}".into());
    }
    finish(3, "the two constructions give identical echelon bases, r+s <= 8", errs);
}

#[test]
fn criterion_04_shuffle_serre_and_associativity() {
    let mut errs = Vec::new();
    for (i, res) in qserre_residuals().iter().enumerate() {
        if !res.is_zero() {
            errs.push(format!("cubic relation {i}: residual {res}"));
        }
    }
    let a = check_associativity(9);
    if a.status != Status::Pass {
        errs.push(a.details);
    }
    finish(4, "cubic shuffle relations vanish; associativity on all triples of total length <= 9", errs);
}

#[test]
fn criterion_05_operator_relations() {
    let mut errs = Vec::new();
    let words = Report { results: ops::check_operator_relations(6) };
    let grading = Report { results: ops::check_grading_relations(6) };
    let cache = USubspaceCache::new(7);
    let on_u = Report { results: ops::check_relations_on(&rm::u_vectors(&cache, 6).unwrap()) };
    for rep in [&words, &grading, &on_u] {
        if rep.results.is_empty() {
            errs.push("empty relation list".into());
        }
        report_failures(rep, &mut errs);
    }
    // One relation by hand: B*_L y = 1 and A*_L kills y.
    let y = IntElement::word("y".parse().unwrap());
    if apply(OperatorId::BstarL, &y) != IntElement::one() || !apply(OperatorId::AstarL, &y).is_zero() {
        errs.push("deletion maps on y".into());
    }
    finish(5, "relations on all words of length <= 6 and on U(r,s), r+s <= 6", errs);
}

#[test]
fn criterion_06_presentation_all_rows() {
    let mut errs = Vec::new();
    let cache = USubspaceCache::new(6);
    for row in 0..=3u8 {
        let rep = rm::variant_action_check(&cache, row, 6).unwrap();
        let relations = rep.results.iter().filter(|r| !r.name.contains("intertwines")).count();
        let intertwined = rep.results.iter().filter(|r| r.name.contains("intertwines")).count();
        if relations != 29 || intertwined != if row == 0 { 0 } else { 10 } {
            errs.push(format!("row {row}: {relations} relations, {intertwined} intertwiner checks"));
        }
        report_failures(&rep, &mut errs);
    }
    report_failures(&Report { results: ops::check_intertwiners(6) }, &mut errs);
    finish(6, "presentation for the main action and the three variants; intertwiners, r+s <= 6", errs);
}

#[test]
fn criterion_07_highest_weight_and_eigenvalues() {
    let mut errs = Vec::new();
    let table = ActionTable::main();
    let hw = rm::highest_weight_check(table);
    if hw.status != Status::Pass {
        errs.push(hw.details);
    }
    let one = FreeElement::one();
    let q = RatFunc::from(LaurentPoly::q_pow(1));
    let mut q_one = FreeElement::zero();
    q_one.add_scaled(&q, &one);
    let x: FreeElement = "x".parse().unwrap();
    let checks = [
        ("K0 1 = q 1", rm::act(table, GeneratorId::K0, &one) == q_one),
        ("K1 1 = 1", rm::act(table, GeneratorId::K1, &one) == one),
        ("D 1 = 1", rm::act(table, GeneratorId::D, &one) == one),
        ("E0 1 = 0", rm::act(table, GeneratorId::E0, &one).is_zero()),
        ("F0 F0 1 = 0", rm::act(table, GeneratorId::F0, &rm::act(table, GeneratorId::F0, &one)).is_zero()),
        ("E1 1 = 0", rm::act(table, GeneratorId::E1, &one).is_zero()),
        ("F1 1 = 0", rm::act(table, GeneratorId::F1, &one).is_zero()),
        ("F0 1 = x", rm::act(table, GeneratorId::F0, &one) == x),
    ];
    for (name, ok) in checks {
        if !ok {
            errs.push(name.into());
        }
    }
    let cache = USubspaceCache::new(8);
    report_failures(&rm::weight_eigenvalue_check(&cache, 8).unwrap(), &mut errs);
    finish(7, "highest weight equations and weights on every basis vector, r+s <= 8", errs);
}

#[test]
fn criterion_08_listed_bases() {
    let mut errs = Vec::new();
    let cache = USubspaceCache::new(10);
    let fixture = BasisFixture::load().unwrap();
    let rep = rm::verify_listed_bases(&cache, &fixture, 10).unwrap();
    report_failures(&rep, &mut errs);
    let mut expected_total = 0;
    for (r, s) in USubspaceCache::bidegrees(10) {
        let (ri, si) = (r as i64, s as i64);
        let want = p(ri - (ri - si) * (ri - si)) as usize;
        expected_total += want;
        let listed = fixture.vectors(r, s).len();
        if listed != want {
            errs.push(format!("({r},{s}): {listed} listed, partition count {want}"));
        }
    }
    let listed_total: usize = fixture.entries.values().map(Vec::len).sum();
    if listed_total != expected_total {
        errs.push(format!("{listed_total} listed vectors, expected {expected_total}"));
    }
    let (v, code) = cli(&["verify", "appendix-c", "--max", "10"]);
    if code != 0 {
        errs.push(format!("verify appendix-c exited {code}: {v}"));
    }
    finish(8, "listed vectors for r+s <= 10 are bases of the basic module components", errs);
}

#[test]
fn criterion_09_matrices() {
    let mut errs = Vec::new();
    let fixture = BasisFixture::load().unwrap();
    let blocks = MatrixBlock::load().unwrap();
    let rep = rm::verify_matrices(&fixture, &blocks).unwrap();
    if rep.results.len() != blocks.len() {
        errs.push("not every block was checked".into());
    }
    report_failures(&rep, &mut errs);
    let wide = [(6, 4), (5, 5), (4, 6)];
    let ten = blocks.iter().filter(|b| b.domain == wide && b.matrix.cols == 10).count();
    if ten == 0 {
        errs.push("no 10-column block at (6,4)+(5,5)+(4,6)".into());
    }
    // A block written out by hand.
    let m = rm::generator_block(&fixture, GeneratorId::F0, &[(2, 1), (1, 2)], &[(2, 2)]).unwrap();
    let three = RatFunc::from("q^2 + 1 + q^-2".parse::<LaurentPoly>().unwrap());
    let want = vec![vec![RatFunc::zero(), RatFunc::one()], vec![RatFunc::zero(), three]];
    if m.entries != want {
        errs.push("F0 from (2,1)+(1,2) to (2,2)".into());
    }
    finish(9, &format!("{} displayed matrices reproduced entrywise ({ten} ten-column)", blocks.len()), errs);
}

#[test]
fn criterion_10_kernel_decomposition() {
    let mut errs = Vec::new();
    let cache = USubspaceCache::new(8);
    let rep = rm::check_kernel_decomposition(&cache, 7).unwrap();
    if rep.results.len() != 6 {
        errs.push(format!("{} checks", rep.results.len()));
    }
    report_failures(&rep, &mut errs);
    let src = cache.component(3, 2).unwrap().int_vectors();
    let imgs: Vec<IntElement> = src.iter().map(|v| apply(OperatorId::AstarL, v)).collect();
    let rk = rank(2, 2, &imgs).unwrap();
    if rk != 6 {
        errs.push(format!("A*_L from U(3,2) has rank {rk}, expected 6"));
    }
    finish(10, "S surjective, T injective, ker S^(n+1) = V_0 + ... + V_n, r+s <= 7", errs);
}

#[test]
fn criterion_11_series_identities() {
    let mut errs = Vec::new();
    report_failures(&series::check_delta_identities(12), &mut errs);
    let (rep, rows) = series::check_max(12);
    report_failures(&rep, &mut errs);
    let mu_lit = [1u64, 3, 9, 22, 51, 108, 221];
    for r in 0..=3 {
        if !rows.contains(&RowMax::Verified { line: r, value: mu_lit[r].into() }) {
            errs.push(format!("row {r} maximum not verified as {}", mu_lit[r]));
        }
    }
    let as_u64 = |v: Vec<num_bigint::BigInt>| v.iter().map(|c| u64::try_from(c).unwrap()).collect::<Vec<_>>();
    if as_u64(series::expand_p(6)) != [1, 1, 2, 3, 5, 7, 11] {
        errs.push("p table".into());
    }
    if as_u64(series::expand_mu(6)) != mu_lit {
        errs.push("mu table".into());
    }
    let oracle_p: Vec<u64> = (0..=12).map(p).collect();
    if as_u64(series::expand_p(12)) != oracle_p {
        errs.push("p disagrees with partition counting".into());
    }
    let w = series::expand_phi_weight(12);
    let support: Vec<(usize, usize)> =
        w.entries().filter(|(_, _, c)| *c != &num_bigint::BigInt::from(0)).map(|(r, s, _)| (r, s)).collect();
    if support != [(0, 0), (1, 0), (1, 2), (4, 2), (4, 6)] {
        errs.push(format!("weight series support {support:?}"));
    }
    let (v, code) = cli(&["dims", "--space", "bold-U", "--max", "12"]);
    if code != 0 {
        errs.push(format!("dims exit {code}"));
    }
    let t = table(&v);
    let res = series::check_bold_dimension_series(12, |r, s| t[r][s].expect("in window") as usize);
    if res.status != Status::Pass {
        errs.push(res.details);
    }
    finish(11, "generating function identities to order 12", errs);
}

#[test]
fn criterion_12_nilpotence() {
    let mut errs = Vec::new();
    let w = rm::nonnilpotence_witness(4);
    if w.status != Status::Pass {
        errs.push(w.details);
    }
    let table = ActionTable::main();
    let x: FreeElement = "x".parse().unwrap();
    let f1 = |e: &FreeElement| rm::act(table, GeneratorId::F1, e);
    if f1(&f1(&x)).is_zero() || !f1(&f1(&f1(&x))).is_zero() {
        errs.push("F1^2 x != 0 and F1^3 x = 0 expected".into());
    }
    let cache = USubspaceCache::new(8);
    let int = BoldUCache::by_intersection(&cache, 8).unwrap();
    let n = rm::nilpotence_on_bold_u(&int, 20);
    if n.status != Status::Pass {
        errs.push(n.details);
    }
    let reach = rm::reach_one_check(&int);
    if reach.status != Status::Pass {
        errs.push(reach.details);
    }
    finish(12, "F0^k xx, F1^k y nonzero for k <= 4; E/F nilpotent on the basic module, r+s <= 8", errs);
}
