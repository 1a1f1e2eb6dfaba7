//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;

use qtele::channels::{
    channel_fidelity_exact, channel_fidelity_mc, channel_from_state, choi, choi_matrix, depolarizing,
    entanglement_fidelity, random_channel, random_state_with_mixed_reduction, Channel,
};
use qtele::distill::{
    apply_filter, make_rho_f, make_sigma_f, quasi_distill_sequence, sigma_filter_sequence, threshold_experiment,
    verify_distillation_witness, witness_search, LocalFilter, ThresholdConfig,
};
use qtele::qmath::{basis, diag, identity, max_abs_diff, projector, r, rng_from_seed, tensor_vec, trace_distance};
use qtele::states::{
    max_entangled_embedded, max_entangled_state, noisy_singlet, product_basis, random_density_matrix, random_ppt_state,
    singlet_fraction, singlet_fraction_m, BipartiteState, NoisySinglet,
};
use qtele::teleport::{classical_fidelity, optimal_fidelity_from_fraction, standard_teleport_channel};
use qtele::twirl::{twirl_channel, twirl_state_exact, twirl_state_mc, TwirlMode};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: qtele::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Haar-average fidelity straight from the Kraus operators:
/// `(Σ|Tr K|² + d) / (d(d+1))`.
fn kraus_average_fidelity(ch: &Channel) -> f64 {
    let d = ch.d_in() as f64;
    let s: f64 = ch.kraus().iter().map(|k| k.trace().norm_sqr()).sum();
    (s + d) / (d * (d + 1.0))
}

fn fidelity_theorem() -> Outcome {
    let mut rng = rng_from_seed(1001);
    let mut worst_sigma: f64 = 0.0;
    let mut worst_exact: f64 = 0.0;
    for d in [2, 3, 4] {
        for k in 0..20 {
            let ch = random_channel(d, 1 + k % d, &mut rng);
            let target = (lib(entanglement_fidelity(&ch))? * d as f64 + 1.0) / (d as f64 + 1.0);
            let exact = lib(channel_fidelity_exact(&ch))?;
            worst_exact = worst_exact.max((exact - kraus_average_fidelity(&ch)).abs());
            let mc = lib(channel_fidelity_mc(&ch, 10_000, &mut rng))?;
            let sigmas = (mc.mean - target).abs() / mc.std_err.max(f64::MIN_POSITIVE);
            worst_sigma = worst_sigma.max(sigmas);
            ensure(mc.agrees_with(target, 4.0), || {
                format!("d={d} channel {k}: {sigmas:.2} standard errors")
            })?;
        }
    }
    ensure(worst_exact < 1e-12, || format!("exact path off by {worst_exact:.2e}"))?;
    Ok(format!(
        "60 channels, worst MC deviation {worst_sigma:.2} se, exact {worst_exact:.1e}"
    ))
}

fn isomorphism_round_trip() -> Outcome {
    let mut rng = rng_from_seed(1002);
    let (mut worst, mut worst_kraus): (f64, f64) = (0.0, 0.0);
    for d in [2, 3] {
        for _ in 0..20 {
            let rho = random_state_with_mixed_reduction(d, &mut rng);
            let ch = lib(channel_from_state(&rho))?;
            worst = worst.max(max_abs_diff(&lib(choi_matrix(&ch))?, rho.matrix()));
            worst_kraus = worst_kraus.max(max_abs_diff(&ch.kraus_sum(), &identity(d)));
        }
    }
    ensure(worst < 1e-9 && worst_kraus < 1e-9, || {
        format!("round trip {worst:.2e}, completeness {worst_kraus:.2e}")
    })?;
    Ok(format!(
        "40 states, round trip {worst:.1e}, completeness {worst_kraus:.1e}"
    ))
}

fn teleport_calibration() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2, 3] {
        let ideal = lib(standard_teleport_channel(&max_entangled_state(d)))?;
        worst = worst.max(max_abs_diff(
            &lib(choi_matrix(&ideal))?,
            &lib(choi_matrix(&Channel::identity(d)))?,
        ));
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ch = lib(standard_teleport_channel(&lib(noisy_singlet(d, p))?))?;
            let dist = max_abs_diff(&lib(choi_matrix(&ch))?, &lib(choi_matrix(&lib(depolarizing(d, p))?))?);
            ensure(dist < 1e-10, || format!("d={d} p={p}: Choi distance {dist:.2e}"))?;
            worst = worst.max(dist);
        }
    }
    ensure(worst < 1e-10, || format!("identity calibration off by {worst:.2e}"))?;
    Ok(format!("d=2,3 x 5 values of p, worst Choi distance {worst:.1e}"))
}

fn pure_state_fidelity() -> Outcome {
    let (mut worst_f, mut worst_p): (f64, f64) = (0.0, 0.0);
    for k in 1..20 {
        let a2 = k as f64 / 20.0;
        let (a, b) = (a2.sqrt(), (1.0 - a2).sqrt());
        let psi = tensor_vec(&basis(2, 0), &basis(2, 0)) * r(a) + tensor_vec(&basis(2, 1), &basis(2, 1)) * r(b);
        let rho = lib(BipartiteState::pure(&psi, 2, 2))?;
        let f = lib(channel_fidelity_exact(&lib(standard_teleport_channel(&rho))?))?;
        worst_f = worst_f.max((f - 2.0 / 3.0 * (a * a + a * b + b * b)).abs());

        let res = lib(apply_filter(&rho, &lib(LocalFilter::new(diag(&[b, a]), identity(2)))?))?;
        let fr = lib(singlet_fraction(&res.post_state))?;
        worst_p = worst_p.max((res.success_probability - 2.0 * a * a * b * b).abs());
        ensure((fr - 1.0).abs() < 1e-12, || format!("a²={a2}: filtered fraction {fr}"))?;
    }
    ensure(worst_f < 1e-10, || format!("fidelity off by {worst_f:.2e}"))?;
    ensure(worst_p < 1e-12, || format!("filter probability off by {worst_p:.2e}"))?;
    Ok(format!(
        "19-point grid, fidelity {worst_f:.1e}, filter probability {worst_p:.1e}"
    ))
}

fn twirling() -> Outcome {
    let mut rng = rng_from_seed(1005);
    let rho = random_density_matrix(2, 2, &mut rng);
    let exact = lib(twirl_state_exact(&rho))?;
    let mc = lib(twirl_state_mc(&rho, 10_000, &mut rng))?;
    let td = trace_distance(mc.matrix(), &exact.matrix());
    ensure(td < 0.02, || format!("MC twirl trace distance {td:.4}"))?;

    let (mut inv, mut diagram): (f64, f64) = (0.0, 0.0);
    for d in [2, 3] {
        for _ in 0..5 {
            let ch = random_channel(d, 2, &mut rng);
            let tw = lib(twirl_channel(&ch, TwirlMode::Exact, &mut rng))?;
            inv = inv.max((lib(entanglement_fidelity(&ch))? - lib(entanglement_fidelity(&tw))?).abs());
            inv = inv.max((lib(channel_fidelity_exact(&ch))? - lib(channel_fidelity_exact(&tw))?).abs());
            let state_side = lib(twirl_state_exact(&lib(choi(&ch))?))?.matrix();
            diagram = diagram.max(max_abs_diff(&state_side, &lib(choi_matrix(&tw))?));
        }
    }
    ensure(inv < 1e-12, || format!("F/f invariance off by {inv:.2e}"))?;
    ensure(diagram < 1e-9, || format!("diagram off by {diagram:.2e}"))?;
    Ok(format!(
        "MC distance {td:.4}, invariance {inv:.1e}, diagram {diagram:.1e}"
    ))
}

fn classical_and_ppt_bound() -> Outcome {
    ensure(
        classical_fidelity(2) == 2.0 / 3.0 && classical_fidelity(3) == 0.5,
        || {
            format!(
                "classical fidelities {} {}",
                classical_fidelity(2),
                classical_fidelity(3)
            )
        },
    )?;
    let mut rng = rng_from_seed(1006);
    let mut slack = f64::INFINITY;
    for d in [2, 3] {
        for k in 0..200 {
            let st = random_ppt_state(d, d, &mut rng);
            let fr = lib(singlet_fraction(&st))?;
            let bound = 1.0 / d as f64;
            ensure(fr <= bound + 1e-9, || format!("d={d} state {k}: fraction {fr}"))?;
            let f_max = lib(optimal_fidelity_from_fraction(d, fr.max(1.0 / (d * d) as f64)))?;
            ensure(f_max <= classical_fidelity(d) + 1e-9, || {
                format!("d={d} state {k}: f_max {f_max}")
            })?;
            slack = slack.min(bound - fr);
        }
    }
    Ok(format!("400 PPT states, minimum slack below 1/d {slack:.3e}"))
}

/// Direct evaluation of `(A_n⊗B_n) σ_F (A_n⊗B_n)†` using only the diagonal
/// filter weights and the known support of `σ_F`.
fn sigma_oracle(fraction: f64, n: usize) -> (f64, f64) {
    let mut sigma = [[0.0_f64; 9]; 9];
    for i in 0..3 {
        for j in 0..3 {
            sigma[4 * i][4 * j] += fraction / 3.0;
        }
    }
    sigma[1][1] += 1.0 - fraction;
    let inv = 1.0 / n as f64;
    let a = [inv, 1.0, 1.0];
    let b = [1.0, inv, inv];
    let w: Vec<f64> = (0..9).map(|k| a[k / 3] * b[k % 3]).collect();
    let prob: f64 = (0..9).map(|k| w[k] * w[k] * sigma[k][k]).sum();
    let overlap: f64 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| w[4 * i] * w[4 * j] * sigma[4 * i][4 * j] / 3.0)
        .sum();
    (overlap / prob, prob)
}

fn sigma_quasi_distillation() -> Outcome {
    let mut worst: f64 = 0.0;
    for f in [0.3, 0.5, 0.7] {
        let reports = lib(quasi_distill_sequence(
            &lib(make_sigma_f(f))?,
            &sigma_filter_sequence(100),
            100,
        ))?;
        let mut prev: Option<(f64, f64)> = None;
        for rep in &reports {
            let fr = rep.fraction.ok_or_else(|| format!("F={f} n={}: no fraction", rep.n))?;
            let (of, op) = sigma_oracle(f, rep.n);
            worst = worst.max((fr - of).abs()).max((rep.probability - op).abs());
            if let Some((pf, pp)) = prev {
                ensure(fr > pf && rep.probability < pp, || {
                    format!("F={f} n={}: not monotone", rep.n)
                })?;
            }
            prev = Some((fr, rep.probability));
        }
        let last = prev.ok_or("empty sequence")?;
        ensure(last.0 > 0.99, || format!("F={f}: fraction {} at n=100", last.0))?;
    }
    ensure(worst < 1e-12, || format!("oracle mismatch {worst:.2e}"))?;
    Ok(format!("F in {{0.3,0.5,0.7}}, n<=100, oracle mismatch {worst:.1e}"))
}

fn rho_threshold() -> Outcome {
    let cfg = ThresholdConfig::default();
    let rho = lib(threshold_experiment(
        &lib(make_rho_f(0.5))?,
        &cfg,
        &mut rng_from_seed(1008),
    ))?;
    ensure(rho.trace.len() == 10_000, || format!("{} trials", rho.trace.len()))?;
    ensure(rho.best_fraction < 1.0 - 1e-6, || {
        format!("rho reached {}", rho.best_fraction)
    })?;
    let gain = rho.last_decile_improvement();
    ensure(gain < 1e-3, || format!("last-decile gain {gain:.2e}"))?;
    let sigma = lib(threshold_experiment(
        &lib(make_sigma_f(0.5))?,
        &cfg,
        &mut rng_from_seed(1008),
    ))?;
    ensure(sigma.best_fraction > 0.99, || {
        format!("sigma only reached {}", sigma.best_fraction)
    })?;
    Ok(format!(
        "rho best {:.6} (gain {gain:.1e}), sigma best {:.6}",
        rho.best_fraction, sigma.best_fraction
    ))
}

fn distillation_witness() -> Outcome {
    let m = projector(&max_entangled_embedded(2, 3, 2)) * r(0.6) + projector(&product_basis(2, 3, 0, 2)) * r(0.4);
    let rho = lib(BipartiteState::new(2, 3, m))?;
    let filter = lib(verify_distillation_witness(
        &rho,
        &identity(2),
        &diag(&[1.0, 1.0, 0.0]),
        2,
    ))?
    .ok_or("no filter for the 2x3 example")?;
    let fr = lib(singlet_fraction_m(&lib(apply_filter(&rho, &filter))?.post_state, 2))?;
    ensure((fr - 1.0).abs() < 1e-9, || format!("filtered fraction {fr}"))?;
    let found = lib(witness_search(
        &lib(NoisySinglet::new(2, 0.5))?.state(),
        2,
        2_000,
        &mut rng_from_seed(1009),
    ))?;
    ensure(found.is_none(), || "witness found on a separable state".into())?;
    Ok(format!(
        "2x3 example fraction {fr:.12}, search on separable state: none"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("fidelity theorem", fidelity_theorem),
        ("isomorphism round trip", isomorphism_round_trip),
        ("teleport calibration", teleport_calibration),
        ("pure-state fidelity and filter", pure_state_fidelity),
        ("twirling", twirling),
        ("classical and PPT bound", classical_and_ppt_bound),
        ("sigma quasi-distillation", sigma_quasi_distillation),
        ("rho threshold", rho_threshold),
        ("distillation witness", distillation_witness),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
