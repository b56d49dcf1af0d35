use qshuffle::report::Report;
use qshuffle::repmodule::*;
use qshuffle::subalgebra::USubspaceCache;

fn assert_passed(rep: &Report) {
    assert!(rep.all_passed(), "{rep}");
}

#[test]
fn listed_bases_and_matrices_up_to_degree_8() {
    let cache = USubspaceCache::new(8);
    let fixture = BasisFixture::load().unwrap();
    assert_passed(&verify_listed_bases(&cache, &fixture, 8).unwrap());
    let blocks: Vec<MatrixBlock> = MatrixBlock::load()
        .unwrap()
        .into_iter()
        .filter(|b| b.domain.iter().chain(&b.codomain).all(|(r, s)| r + s <= 8))
        .collect();
    assert!(blocks.len() > 40);
    assert_passed(&verify_matrices(&fixture, &blocks).unwrap());
}

#[test]
fn variants_small_window() {
    let cache = USubspaceCache::new(5);
    for row in 0..4 {
        assert_passed(&variant_action_check(&cache, row, 4).unwrap());
    }
}

#[test]
fn kernel_decomposition_small_window() {
    let cache = USubspaceCache::new(6);
    assert_passed(&check_kernel_decomposition(&cache, 5).unwrap());
}

#[test]
fn basic_module_small_window() {
    let cache = USubspaceCache::new(7);
    let int = BoldUCache::by_intersection(&cache, 6).unwrap();
    let gen = BoldUCache::by_generation(6, 2).unwrap();
    let mut rep = Report::new();
    rep.push(check_generation_vs_intersection(&gen, &int));
    rep.push(check_dimension_formula(&int));
    rep.push(nilpotence_on_bold_u(&int, 16));
    rep.push(reach_one_check(&int));
    rep.extend(bold_v_check(7));
    rep.extend(weight_eigenvalue_check(&cache, 6).unwrap());
    assert_passed(&rep);
}

#[test]
fn generation_without_margin_is_still_a_subspace() {
    // Without headroom the closure can only lose vectors, never gain wrong ones.
    let cache = USubspaceCache::new(6);
    let tight = BoldUCache::by_generation(6, 0).unwrap();
    for (r, s) in USubspaceCache::bidegrees(6) {
        let full = bold_u_by_intersection(&cache, r, s).unwrap();
        assert!(tight.get(r, s).unwrap().is_subspace_of(&full), "({r},{s})");
    }
}
