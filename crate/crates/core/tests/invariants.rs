use sdkit::suite::{invariants, Config};

fn run(id: &str) {
    let check = invariants().into_iter().find(|c| c.id == id).expect("known invariant");
    let o = check.run(&Config::default());
    assert!(o.passed, "{}: {:?}", o.title, o.failures);
}

macro_rules! invariant {
    ($($name:ident => $id:literal),* $(,)?) => {
        $(#[test] fn $name() { run($id) })*
    };
}

invariant! {
    corpus_claims => "claims",
    culf_maps_are_cartesian_on_the_degeneracy => "degeneracy-square",
    primed_convention => "q-prime",
    finality_is_orthogonality => "final-orthogonal",
    segal_lifts_along_right_fibrations => "segal-lifts",
    d0_square_between_segal_objects => "d0-square",
    slices_and_intervals => "slices-intervals",
    generating_pushouts_suffice => "route-a-pasting",
    subdivided_nerves_are_twisted_arrows => "twisted-arrow",
    xi_is_final => "xi-final",
    q_star_of_right_fibrations => "q-star-rfib",
    two_inverses_agree => "two-inverses",
    adjunction_counts => "adjunction",
    culf_reflection => "culf-reflection",
    random_chains => "random-chains",
    right_fibrations_compose_and_cancel => "rfib-closure",
    decalages_commute => "dec-commute",
    lambda_on_active_edges => "lambda-active-edges",
}

#[test]
fn every_invariant_is_covered() {
    assert_eq!(invariants().len(), 18);
}
