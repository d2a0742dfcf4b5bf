//! Runs every example under `examples/`; each asserts its own results.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run();
        }
    };
}

example!(motivating_example, "../examples/motivating_example.rs");
example!(exact_lp, "../examples/exact_lp.rs");
example!(kernel_construction, "../examples/kernel_construction.rs");
example!(implement_action, "../examples/implement_action.rs");
example!(
    maximal_informativeness,
    "../examples/maximal_informativeness.rs"
);
example!(treatment_effects, "../examples/treatment_effects.rs");
example!(researcher_problem, "../examples/researcher_problem.rs");
