//! Every cargo example must run to completion.

macro_rules! example_test {
    ($name:ident, $path:literal) => {
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example_test!(isomorphism, "../examples/isomorphism.rs");
example_test!(fidelity_theorem, "../examples/fidelity_theorem.rs");
example_test!(teleportation, "../examples/teleportation.rs");
example_test!(twirling, "../examples/twirling.rs");
example_test!(conclusive_filtering, "../examples/conclusive_filtering.rs");
example_test!(quasi_distillation, "../examples/quasi_distillation.rs");
example_test!(threshold_search, "../examples/threshold_search.rs");
example_test!(distillation_witness, "../examples/distillation_witness.rs");
example_test!(bound_entanglement, "../examples/bound_entanglement.rs");
