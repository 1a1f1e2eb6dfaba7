//! Quasi-distillation of `σ_F`: the filter sequence drives the singlet
//! fraction toward one while the success probability falls like `1/n²`.

use qtele::distill::{make_sigma_f, quasi_distill_csv, quasi_distill_sequence, sigma_filter_sequence};

pub fn run_example() -> qtele::Result<()> {
    let rho = make_sigma_f(0.5)?;
    let reports = quasi_distill_sequence(&rho, &sigma_filter_sequence(20), 20)?;
    let csv = quasi_distill_csv(&reports);
    for line in csv.lines().take(4).chain(csv.lines().skip(20)) {
        println!("{line}");
    }
    let last = reports.last().expect("non-empty sequence");
    assert!(last.fraction.unwrap_or(0.0) > 0.99);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}
