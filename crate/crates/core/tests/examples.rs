//! Every example must run to completion.

mod euler_characteristics {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/euler_characteristics.rs"));
}

#[test]
fn euler_characteristics_runs() {
    euler_characteristics::main().expect("euler_characteristics should run");
}

mod expansiveness {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/expansiveness.rs"));
}

#[test]
fn expansiveness_runs() {
    expansiveness::main().expect("expansiveness should run");
}

mod f4_counterexample {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/f4_counterexample.rs"));
}

#[test]
fn f4_counterexample_runs() {
    f4_counterexample::main().expect("f4_counterexample should run");
}

mod mahler_and_classical {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mahler_and_classical.rs"));
}

#[test]
fn mahler_and_classical_runs() {
    mahler_and_classical::main().expect("mahler_and_classical should run");
}

mod milnor_torsion {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/milnor_torsion.rs"));
}

#[test]
fn milnor_torsion_runs() {
    milnor_torsion::main().expect("milnor_torsion should run");
}

mod padic_kernels {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/padic_kernels.rs"));
}

#[test]
fn padic_kernels_runs() {
    padic_kernels::main().expect("padic_kernels should run");
}

mod principal_limit {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/principal_limit.rs"));
}

#[test]
fn principal_limit_runs() {
    principal_limit::main().expect("principal_limit should run");
}

mod vanishing_case {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/vanishing_case.rs"));
}

#[test]
fn vanishing_case_runs() {
    vanishing_case::main().expect("vanishing_case should run");
}
