//! Seeded property suites behind the `verify` command and the acceptance
//! tests. Each check runs a named invariant over deterministic samples
//! and reports pass counts plus a few failure details.

use crate::bell::{
    chsh_expectation, fmax_horodecki, fmax_sc2, fmax_sc2_diag, maximize_chsh,
    maximize_svetlichny, optimal_chsh_settings, optimal_svetlichny_settings, smax_sc3,
    smax_sc3_diag, svetlichny_expectation, MaximizerConfig, MeasurementDirection,
    CHSH_CLASSICAL_BOUND,
};
use crate::channels::{
    apply_product_channel, find_threshold, fmax_rho3_closed, fmax_rho3_closed_at,
    rho3_diag_params, rho6_diag_params, smax_rho6_closed, smax_rho6_closed_at,
    transverse_channel, transverse_channel_gamma, NoiseParams, TOL_KRAUS_COMPLETE,
};
use crate::entanglement::{
    concurrence_sc2, concurrence_wootters, dense_coding_capacity, fmax_from_concurrence,
    gen_concurrence_sc3, ree_sc3_closed, ree_sc3_closed_corrected, ree_sc3_direct,
    relative_entropy,
};
use crate::qmat::{
    eig_hermitian, partial_trace, partial_transpose, Complex64, DenseMatrix, DensityMatrix,
};
use crate::rng::SplitMix64;
use crate::sc_states::{
    bell_state, build_sc2, build_sc2_diag, build_sc3, build_sc3_diag, ghz_state, Sc2DiagParams,
    Sc2Params, Sc3DiagParams, Sc3Params,
};
use std::f64::consts::{PI, SQRT_2, TAU};

/// Seeded samplers over the state families and generic inputs.
pub mod sample {
    use super::*;

    pub fn direction(rng: &mut SplitMix64) -> MeasurementDirection {
        MeasurementDirection::new(rng.next_range(0.0, PI), rng.next_range(0.0, TAU))
    }

    fn coherence(rng: &mut SplitMix64, product: f64) -> Complex64 {
        let mag = rng.next_f64() * product.sqrt();
        Complex64::from_polar(mag, rng.next_range(0.0, TAU))
    }

    pub fn sc2_params(rng: &mut SplitMix64) -> Sc2Params {
        let a1 = rng.next_f64();
        let a4 = 1.0 - a1;
        let a2 = coherence(rng, a1 * a4);
        Sc2Params::new(a1, a4, a2).expect("sampled within constraints")
    }

    pub fn sc3_params(rng: &mut SplitMix64) -> Sc3Params {
        let a1 = rng.next_f64();
        let a4 = 1.0 - a1;
        let a2 = coherence(rng, a1 * a4);
        Sc3Params::new(a1, a4, a2).expect("sampled within constraints")
    }

    fn simplex<const N: usize>(rng: &mut SplitMix64) -> [f64; N] {
        let mut w = [0.0; N];
        let mut sum = 0.0;
        for v in &mut w {
            *v = -(1.0 - rng.next_f64()).ln();
            sum += *v;
        }
        for v in &mut w {
            *v /= sum;
        }
        w
    }

    pub fn sc2_diag_params(rng: &mut SplitMix64) -> Sc2DiagParams {
        let b: [f64; 4] = simplex(rng);
        let c1 = coherence(rng, b[0] * b[3]);
        Sc2DiagParams::new(b, c1).expect("sampled within constraints")
    }

    pub fn sc3_diag_params(rng: &mut SplitMix64) -> Sc3DiagParams {
        let b: [f64; 8] = simplex(rng);
        let c1 = coherence(rng, b[0] * b[7]);
        Sc3DiagParams::new(b, c1).expect("sampled within constraints")
    }

    /// Full-rank random state from a Ginibre matrix.
    pub fn density(rng: &mut SplitMix64, n_qubits: usize) -> DensityMatrix {
        let dim = 1usize << n_qubits;
        let g = DenseMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.next_gaussian(), rng.next_gaussian())
        });
        let gg = &g * &g.adjoint();
        let tr = gg.trace().re;
        DensityMatrix::new(n_qubits, gg.scale(1.0 / tr)).expect("Ginibre state is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Chsh,
    Svetlichny,
    Measures,
    Channels,
    /// qmat/sc_states structural invariants; part of `All`, not a CLI name.
    Kernel,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Suite::All),
            "chsh" => Ok(Suite::Chsh),
            "svetlichny" => Ok(Suite::Svetlichny),
            "measures" => Ok(Suite::Measures),
            "channels" => Ok(Suite::Channels),
            other => Err(format!(
                "unknown suite `{other}` (expected all, chsh, svetlichny, measures, channels)"
            )),
        }
    }
}

/// Result of one named property check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Failure details (truncated) and informational notes.
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

struct Tally {
    passed: usize,
    total: usize,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { passed: 0, total: 0, notes: Vec::new() }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.notes.len() < 8 {
            self.notes.push(detail());
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn into_outcome(self, suite: &'static str, name: &'static str) -> CheckOutcome {
        CheckOutcome {
            suite,
            name,
            passed: self.passed,
            total: self.total,
            notes: self.notes,
        }
    }
}

fn cfg_for(seed: u64, index: u64) -> MaximizerConfig {
    MaximizerConfig::with_seed(seed.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

// ---------------------------------------------------------------------------
// chsh suite
// ---------------------------------------------------------------------------

/// |fmax_sc2 − maximize_chsh| ≤ 1e-5 over random two-qubit SC states.
pub fn chsh_closed_vs_numeric(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for i in 0..samples {
        let p = sample::sc2_params(&mut rng);
        let closed = fmax_sc2(&p);
        let (numeric, _) = maximize_chsh(&build_sc2(&p), &cfg_for(seed, i as u64)).unwrap();
        tally.record((closed - numeric).abs() <= 1e-5, || {
            format!("a1={:.6} |a2|={:.6}: closed={closed:.9} numeric={numeric:.9}", p.a1(), p.a2().norm())
        });
    }
    tally.into_outcome("chsh", "closed-vs-numeric")
}

/// |fmax_sc2 − fmax_horodecki| ≤ 1e-10 over random two-qubit SC states.
pub fn chsh_closed_vs_horodecki(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let p = sample::sc2_params(&mut rng);
        let closed = fmax_sc2(&p);
        let horodecki = fmax_horodecki(&build_sc2(&p)).unwrap();
        tally.record((closed - horodecki).abs() <= 1e-10, || {
            format!("a1={:.6} |a2|={:.6}: closed={closed:.12} horodecki={horodecki:.12}", p.a1(), p.a2().norm())
        });
    }
    tally.into_outcome("chsh", "closed-vs-horodecki")
}

/// For the diagonal family the optimizer must match the Horodecki value
/// (the unrestricted maximum) within 1e-6. Deviations of the
/// fixed-orientation closed form from that maximum are counted and
/// reported as notes; they occur exactly where 2|c1| > |b1+b4−b2−b3|.
pub fn chsh_diag_adjudication(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    let mut closed_deviations = 0usize;
    for i in 0..samples {
        let p = sample::sc2_diag_params(&mut rng);
        let rho = build_sc2_diag(&p);
        let horodecki = fmax_horodecki(&rho).unwrap();
        let (numeric, _) = maximize_chsh(&rho, &cfg_for(seed, i as u64)).unwrap();
        if (fmax_sc2_diag(&p) - numeric).abs() > 1e-5 {
            closed_deviations += 1;
        }
        tally.record((numeric - horodecki).abs() <= 1e-6, || {
            format!("b={:?} |c1|={:.6}: numeric={numeric:.9} horodecki={horodecki:.9}", p.b(), p.c1().norm())
        });
    }
    if closed_deviations > 0 {
        tally.note(format!(
            "note: fixed-orientation closed form fell below the true maximum on \
             {closed_deviations}/{samples} samples (expected where 2|c1| > |b1+b4-b2-b3|)"
        ));
    }
    tally.into_outcome("chsh", "diag-numeric-vs-horodecki")
}

/// Optimal-settings constructor reproduces the closed form within 1e-9 on
/// a 20×20 (weight × phase) grid including the Im(a2) = 0 limit.
pub fn chsh_optimal_settings_grid() -> CheckOutcome {
    let mut tally = Tally::new();
    for i in 0..20 {
        let a1 = (i as f64 + 0.5) / 20.0;
        let a4 = 1.0 - a1;
        for j in 0..20 {
            // j = 0 is the singular Im(a2) = 0 case; j = 10 gives phase π.
            let chi = j as f64 * TAU / 20.0;
            let mag = 0.9 * (a1 * a4).sqrt();
            let p = Sc2Params::new(a1, a4, Complex64::from_polar(mag, chi)).unwrap();
            let settings = optimal_chsh_settings(&p);
            let value = chsh_expectation(&build_sc2(&p), &settings).unwrap();
            let closed = fmax_sc2(&p);
            tally.record((value - closed).abs() <= 1e-9, || {
                format!("a1={a1:.4} chi={chi:.4}: settings={value:.12} closed={closed:.12}")
            });
        }
        // Degenerate a2 = 0: canonical settings must reach the closed form 2.
        let p = Sc2Params::new(a1, a4, Complex64::new(0.0, 0.0)).unwrap();
        let value = chsh_expectation(&build_sc2(&p), &optimal_chsh_settings(&p)).unwrap();
        tally.record((value - 2.0).abs() <= 1e-9, || {
            format!("a1={a1:.4} a2=0: settings value {value:.12}")
        });
    }
    tally.into_outcome("chsh", "optimal-settings-grid")
}

/// fmax_sc2 depends on a2 only through |a2|.
pub fn chsh_phase_invariance(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let a1 = rng.next_f64();
        let mag = rng.next_f64() * (a1 * (1.0 - a1)).sqrt();
        let chi = rng.next_range(0.0, TAU);
        let base = Sc2Params::new(a1, 1.0 - a1, Complex64::new(mag, 0.0)).unwrap();
        let rotated = Sc2Params::new(a1, 1.0 - a1, Complex64::from_polar(mag, chi)).unwrap();
        tally.record((fmax_sc2(&base) - fmax_sc2(&rotated)).abs() <= 1e-12, || {
            format!("a1={a1:.6} mag={mag:.6} chi={chi:.6}")
        });
    }
    tally.into_outcome("chsh", "phase-invariance")
}

/// Separable SC states (a2 = 0) never exceed the classical bound.
pub fn chsh_classical_bound_separable(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for i in 0..samples {
        let a1 = rng.next_f64();
        let p = Sc2Params::new(a1, 1.0 - a1, Complex64::new(0.0, 0.0)).unwrap();
        let (numeric, _) = maximize_chsh(&build_sc2(&p), &cfg_for(seed, i as u64)).unwrap();
        tally.record(numeric <= CHSH_CLASSICAL_BOUND + 1e-6, || {
            format!("a1={a1:.6}: numeric={numeric:.9}")
        });
    }
    tally.into_outcome("chsh", "classical-bound-separable")
}

/// x·cosθ + y·sinθ ≤ √(x²+y²), equality at θ = atan2(y, x).
pub fn lemma_phase_locking() -> CheckOutcome {
    let mut rng = SplitMix64::new(0x1e55);
    let mut tally = Tally::new();
    for _ in 0..10_000 {
        let x = rng.next_range(-4.0, 4.0);
        let y = rng.next_range(-4.0, 4.0);
        let theta = rng.next_range(0.0, TAU);
        let bound = x.hypot(y);
        let value = x * theta.cos() + y * theta.sin();
        let opt = y.atan2(x);
        let at_opt = x * opt.cos() + y * opt.sin();
        tally.record(value <= bound + 1e-12 && (at_opt - bound).abs() <= 1e-12, || {
            format!("x={x:.6} y={y:.6} theta={theta:.6}")
        });
    }
    tally.into_outcome("chsh", "lemma-phase-locking")
}

/// The d, d′ pair reconstructed from optimizer output is orthogonal.
pub fn chsh_orthogonality(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for i in 0..samples.min(24) {
        let p = sample::sc2_params(&mut rng);
        let (_, s) = maximize_chsh(&build_sc2(&p), &cfg_for(seed, i as u64)).unwrap();
        let b = s.b.bloch_vector();
        let bp = s.b_prime.bloch_vector();
        let plus = [b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]];
        let minus = [b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]];
        let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let (np, nm) = (dot(plus, plus).sqrt(), dot(minus, minus).sqrt());
        if np < 1e-8 || nm < 1e-8 {
            tally.record(true, String::new);
            continue;
        }
        let cosangle = dot(plus, minus) / (np * nm);
        tally.record(cosangle.abs() <= 1e-9, || format!("d·d' = {cosangle:.3e}"));
    }
    tally.into_outcome("chsh", "d-pair-orthogonality")
}

// ---------------------------------------------------------------------------
// svetlichny suite
// ---------------------------------------------------------------------------

/// |smax_sc3 − maximize_svetlichny| ≤ 1e-4 over random three-qubit SC states.
pub fn svetlichny_closed_vs_numeric(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for i in 0..samples {
        let p = sample::sc3_params(&mut rng);
        let closed = smax_sc3(&p);
        let (numeric, _) =
            maximize_svetlichny(&build_sc3(&p), &cfg_for(seed, i as u64)).unwrap();
        tally.record((closed - numeric).abs() <= 1e-4, || {
            format!("a1={:.6} |a2|={:.6}: closed={closed:.9} numeric={numeric:.9}", p.a1(), p.a2().norm())
        });
    }
    tally.into_outcome("svetlichny", "closed-vs-numeric")
}

/// Same for the diagonal three-qubit family.
pub fn svetlichny_diag_closed_vs_numeric(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for i in 0..samples {
        let p = sample::sc3_diag_params(&mut rng);
        let closed = smax_sc3_diag(&p);
        let (numeric, _) =
            maximize_svetlichny(&build_sc3_diag(&p), &cfg_for(seed, i as u64)).unwrap();
        tally.record((closed - numeric).abs() <= 1e-4, || {
            format!("b={:?} |c1|={:.6}: closed={closed:.9} numeric={numeric:.9}", p.b(), p.c1().norm())
        });
    }
    tally.into_outcome("svetlichny", "diag-closed-vs-numeric")
}

/// Optimal-settings constructor on a 20×20 grid including Im(a2) = 0 and
/// both branches.
pub fn svetlichny_optimal_settings_grid() -> CheckOutcome {
    let mut tally = Tally::new();
    for i in 0..20 {
        let a1 = (i as f64 + 0.5) / 20.0;
        let a4 = 1.0 - a1;
        for j in 0..20 {
            let chi = j as f64 * TAU / 20.0;
            // Half strength keeps both branches represented across the grid.
            let mag = 0.5 * (a1 * a4).sqrt();
            let p = Sc3Params::new(a1, a4, Complex64::from_polar(mag, chi)).unwrap();
            let settings = optimal_svetlichny_settings(&p);
            let value = svetlichny_expectation(&build_sc3(&p), &settings).unwrap();
            let closed = smax_sc3(&p);
            tally.record((value - closed).abs() <= 1e-9, || {
                format!("a1={a1:.4} chi={chi:.4}: settings={value:.12} closed={closed:.12}")
            });
        }
        let p = Sc3Params::new(a1, a4, Complex64::new(0.0, 0.0)).unwrap();
        let value = svetlichny_expectation(&build_sc3(&p), &optimal_svetlichny_settings(&p)).unwrap();
        let closed = smax_sc3(&p);
        tally.record((value - closed).abs() <= 1e-9, || {
            format!("a1={a1:.4} a2=0: settings={value:.12} closed={closed:.12}")
        });
    }
    tally.into_outcome("svetlichny", "optimal-settings-grid")
}

/// smax_sc3 depends on a2 only through |a2|.
pub fn svetlichny_phase_invariance(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let a1 = rng.next_f64();
        let mag = rng.next_f64() * (a1 * (1.0 - a1)).sqrt();
        let chi = rng.next_range(0.0, TAU);
        let base = Sc3Params::new(a1, 1.0 - a1, Complex64::new(mag, 0.0)).unwrap();
        let rotated = Sc3Params::new(a1, 1.0 - a1, Complex64::from_polar(mag, chi)).unwrap();
        tally.record((smax_sc3(&base) - smax_sc3(&rotated)).abs() <= 1e-12, || {
            format!("a1={a1:.6} mag={mag:.6} chi={chi:.6}")
        });
    }
    tally.into_outcome("svetlichny", "phase-invariance")
}

/// x·cos²θ + y·sin²θ ≤ max(x, y), equality at θ ∈ {0, π/2}.
pub fn lemma_branch_selection() -> CheckOutcome {
    let mut rng = SplitMix64::new(0x18);
    let mut tally = Tally::new();
    let half_pi = std::f64::consts::FRAC_PI_2;
    for _ in 0..10_000 {
        let x = rng.next_range(0.0, 4.0);
        let y = rng.next_range(0.0, 4.0);
        let theta = rng.next_range(0.0, TAU);
        let eval = |t: f64| x * t.cos().powi(2) + y * t.sin().powi(2);
        let v = eval(theta);
        tally.record(
            v <= x.max(y) + 1e-12
                && (eval(0.0) - x).abs() <= 1e-12
                && (eval(half_pi) - y).abs() <= 1e-10,
            || format!("x={x:.6} y={y:.6} theta={theta:.6} v={v:.6}"),
        );
    }
    tally.into_outcome("svetlichny", "lemma-branch-selection")
}

// ---------------------------------------------------------------------------
// measures suite
// ---------------------------------------------------------------------------

/// fmax_sc2 = 2√(1 + C²) with C = 2|a2|, exactly, over a 50×50 grid.
pub fn measures_fmax_concurrence_identity() -> CheckOutcome {
    let mut tally = Tally::new();
    for i in 0..50 {
        let a1 = (i as f64 + 0.5) / 50.0;
        let a4 = 1.0 - a1;
        for j in 0..50 {
            let u = j as f64 / 49.0;
            let p = Sc2Params::new(a1, a4, Complex64::new(u * (a1 * a4).sqrt(), 0.0)).unwrap();
            let lhs = fmax_sc2(&p);
            let rhs = fmax_from_concurrence(concurrence_sc2(&p));
            tally.record((lhs - rhs).abs() <= 1e-12, || {
                format!("a1={a1:.4} u={u:.4}: lhs={lhs:.15} rhs={rhs:.15}")
            });
        }
    }
    tally.into_outcome("measures", "fmax-concurrence-identity")
}

/// Wootters concurrence equals 2|a2| for built SC states.
pub fn measures_wootters_closed(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let p = sample::sc2_params(&mut rng);
        let w = concurrence_wootters(&build_sc2(&p)).unwrap();
        tally.record((w - concurrence_sc2(&p)).abs() <= 1e-9, || {
            format!("a1={:.6} |a2|={:.6}: wootters={w:.12}", p.a1(), p.a2().norm())
        });
    }
    tally.into_outcome("measures", "wootters-closed-form")
}

/// On the in-plane branch, smax = 8·C/√3 with C = √6|a2|, to 1e-12.
pub fn measures_smax_concurrence_branch(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let p = sample::sc3_params(&mut rng);
        let in_plane = 8.0 * SQRT_2 * p.a2().norm();
        if in_plane < 4.0 * (1.0 - 2.0 * p.a1()).abs() {
            continue;
        }
        let identity = 8.0 * gen_concurrence_sc3(&p) / 3.0f64.sqrt();
        tally.record((smax_sc3(&p) - identity).abs() <= 1e-12, || {
            format!("a1={:.6} |a2|={:.6}", p.a1(), p.a2().norm())
        });
    }
    tally.into_outcome("measures", "smax-concurrence-branch")
}

/// S(ρ‖σ) ≥ 0 with equality iff the states coincide.
pub fn measures_relative_entropy_properties(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let rho = sample::density(&mut rng, 2);
        let sigma = sample::density(&mut rng, 2);
        let s = relative_entropy(&rho, &sigma).unwrap();
        let distinct = rho.mat().max_abs_diff(sigma.mat()) > 1e-9;
        let self_s = relative_entropy(&rho, &rho).unwrap();
        tally.record(s >= 0.0 && self_s <= 1e-9 && (!distinct || s > 0.0), || {
            format!("S(rho||sigma)={s:.3e} S(rho||rho)={self_s:.3e}")
        });
    }
    tally.into_outcome("measures", "relative-entropy-properties")
}

/// REE fixed points: 1 at the GHZ parameters, 0 without coherence.
pub fn measures_ree_fixed_points() -> CheckOutcome {
    let mut tally = Tally::new();
    let ghz = ree_sc3_direct(&Sc3Params::new(0.5, 0.5, Complex64::new(0.5, 0.0)).unwrap());
    tally.record((ghz - 1.0).abs() <= 1e-9, || format!("REE(GHZ) = {ghz:.12}"));
    for i in 0..20 {
        let a1 = i as f64 / 19.0;
        let p = Sc3Params::new(a1, 1.0 - a1, Complex64::new(0.0, 0.0)).unwrap();
        let v = ree_sc3_direct(&p);
        tally.record(v.abs() <= 1e-12, || format!("REE(a1={a1:.4}, a2=0) = {v:.3e}"));
    }
    tally.into_outcome("measures", "ree-fixed-points")
}

/// The corrected closed form tracks the direct computation; the verbatim
/// printed form's deviations are reported as notes.
pub fn measures_ree_closed_vs_direct(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    let mut printed_defects = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let p = sample::sc3_params(&mut rng);
        let direct = ree_sc3_direct(&p);
        let corrected = ree_sc3_closed_corrected(&p);
        let printed = ree_sc3_closed(&p);
        if printed.is_nan() || (printed - direct).abs() > 1e-9 {
            printed_defects += 1;
            if !printed.is_nan() {
                worst = worst.max((printed - direct).abs());
            }
        }
        tally.record((corrected - direct).abs() <= 1e-9, || {
            format!("a1={:.6} |a2|={:.6}: corrected={corrected:.12} direct={direct:.12}", p.a1(), p.a2().norm())
        });
    }
    tally.note(format!(
        "note: verbatim printed form deviated or was NaN on {printed_defects}/{samples} \
         samples (worst finite deviation {worst:.3e}); no tolerance imposed on it"
    ));
    tally.into_outcome("measures", "ree-corrected-vs-direct")
}

/// Dense-coding capacity strictly increases with |a2| at fixed weights.
pub fn measures_chi_monotonic() -> CheckOutcome {
    let mut tally = Tally::new();
    for i in 0..20 {
        let a1 = (i as f64 + 0.5) / 20.0;
        let a4 = 1.0 - a1;
        let cap = (a1 * a4).sqrt();
        let mut last = f64::NEG_INFINITY;
        let mut increasing = true;
        for k in 0..=25 {
            let p = Sc2Params::new(a1, a4, Complex64::new(cap * k as f64 / 25.0, 0.0)).unwrap();
            let chi = dense_coding_capacity(&build_sc2(&p)).unwrap();
            if chi <= last {
                increasing = false;
            }
            last = chi;
        }
        tally.record(increasing, || format!("a1={a1:.4}: χ not strictly increasing"));
    }
    tally.into_outcome("measures", "chi-monotonic-in-coherence")
}

/// {a2 ≠ 0} ⇔ {C > 0} ⇔ {F_max > 2} ⇔ {χ > 1} on a 50×50 grid.
pub fn measures_equivalence_chain() -> CheckOutcome {
    let mut tally = Tally::new();
    for i in 0..50 {
        let a1 = (i as f64 + 0.5) / 50.0;
        let a4 = 1.0 - a1;
        for j in 0..50 {
            let u = j as f64 / 49.0;
            let p = Sc2Params::new(a1, a4, Complex64::new(u * (a1 * a4).sqrt(), 0.0)).unwrap();
            let entangled = p.a2().norm() > 0.0;
            let conc = concurrence_sc2(&p) > 0.0;
            let viol = fmax_sc2(&p) > 2.0;
            let chi = dense_coding_capacity(&build_sc2(&p)).unwrap() > 1.0;
            tally.record(entangled == conc && conc == viol && viol == chi, || {
                format!("a1={a1:.4} u={u:.4}: a2!=0={entangled} C>0={conc} F>2={viol} chi>1={chi}")
            });
        }
    }
    tally.into_outcome("measures", "equivalence-chain")
}

// ---------------------------------------------------------------------------
// channels suite
// ---------------------------------------------------------------------------

/// ΣK†K = I for the transverse channel at random times.
pub fn channels_completeness(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let p = NoiseParams::new(rng.next_range(0.01, 5.0), rng.next_range(0.0, 4.0)).unwrap();
        let ch = transverse_channel(&p);
        let mut sum = DenseMatrix::zeros(2, 2);
        for k in ch.operators() {
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = sum.max_abs_diff(&DenseMatrix::identity(2));
        tally.record(defect <= TOL_KRAUS_COMPLETE, || {
            format!("Γt={:.6}: defect={defect:.3e}", p.gamma_t())
        });
    }
    tally.into_outcome("channels", "kraus-completeness")
}

/// Product application preserves the trace on random states.
pub fn channels_trace_preservation(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for trial in 0..samples {
        let n = 1 + trial % 3;
        let rho = sample::density(&mut rng, n);
        let ch = transverse_channel_gamma(rng.next_f64()).unwrap();
        let out = apply_product_channel(&rho, &ch).unwrap();
        let tr = out.mat().trace().re;
        tally.record((tr - 1.0).abs() <= 1e-12, || format!("n={n}: trace={tr:.15}"));
    }
    tally.into_outcome("channels", "trace-preservation")
}

/// Damped Bell/GHZ states keep the diagonal-family sparsity pattern and
/// coefficients.
pub fn channels_damped_family_structure(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let gamma = rng.next_f64();
        let ch = transverse_channel_gamma(gamma).unwrap();
        let bell_out = apply_product_channel(&bell_state(), &ch).unwrap();
        let bell_expect = build_sc2_diag(&rho3_diag_params(gamma).unwrap());
        let ghz_out = apply_product_channel(&ghz_state(), &ch).unwrap();
        let ghz_expect = build_sc3_diag(&rho6_diag_params(gamma).unwrap());
        let d2 = bell_out.mat().max_abs_diff(bell_expect.mat());
        let d3 = ghz_out.mat().max_abs_diff(ghz_expect.mat());
        tally.record(d2 <= 1e-12 && d3 <= 1e-12, || {
            format!("γ={gamma:.6}: bell defect {d2:.3e}, ghz defect {d3:.3e}")
        });
    }
    tally.into_outcome("channels", "damped-family-structure")
}

/// Wootters concurrence of the damped Bell state equals γ⁴.
pub fn channels_concurrence_gamma4(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let gamma = rng.next_f64();
        let ch = transverse_channel_gamma(gamma).unwrap();
        let out = apply_product_channel(&bell_state(), &ch).unwrap();
        let c = concurrence_wootters(&out).unwrap();
        tally.record((c - gamma.powi(4)).abs() <= 1e-9, || {
            format!("γ={gamma:.6}: C={c:.12} γ⁴={:.12}", gamma.powi(4))
        });
    }
    tally.into_outcome("channels", "concurrence-gamma-fourth")
}

/// Closed curves equal the diagonal-family formulas evaluated at the
/// damped parameters.
pub fn channels_closed_form_consistency() -> CheckOutcome {
    let mut tally = Tally::new();
    for k in 0..=200 {
        let gamma = k as f64 / 200.0;
        let f = fmax_rho3_closed(gamma);
        let f_diag = fmax_sc2_diag(&rho3_diag_params(gamma).unwrap());
        let s = smax_rho6_closed(gamma);
        let s_diag = smax_sc3_diag(&rho6_diag_params(gamma).unwrap());
        tally.record((f - f_diag).abs() <= 1e-12 && (s - s_diag).abs() <= 1e-12, || {
            format!("γ={gamma:.4}: f={f:.15} f_diag={f_diag:.15} s={s:.15} s_diag={s_diag:.15}")
        });
    }
    tally.into_outcome("channels", "closed-form-consistency")
}

/// Both closed curves have an interior local minimum on Γt ∈ [0, 3].
pub fn channels_non_monotonic_witness() -> CheckOutcome {
    let mut tally = Tally::new();
    let witness = |f: &dyn Fn(f64) -> f64| -> bool {
        let n = 300;
        let vals: Vec<f64> = (0..n).map(|k| f(3.0 * k as f64 / (n - 1) as f64)).collect();
        let mut fell = false;
        for w in vals.windows(2) {
            if w[1] < w[0] - 1e-9 {
                fell = true;
            } else if fell && w[1] > w[0] + 1e-9 {
                return true;
            }
        }
        false
    };
    tally.record(witness(&fmax_rho3_closed_at), || "fmax curve is monotonic".into());
    tally.record(witness(&smax_rho6_closed_at), || "smax curve is monotonic".into());
    tally.into_outcome("channels", "non-monotonic-witness")
}

/// Threshold values: CHSH crossing 0.265805, Svetlichny crossing (ln 2)/3,
/// branch crossover ln 2, concurrence half-life (ln 2)/2.
pub fn channels_thresholds() -> CheckOutcome {
    let mut tally = Tally::new();

    let chsh = find_threshold(fmax_rho3_closed_at, 2.0, (0.01, 1.0)).unwrap();
    tally.record((chsh - 0.265805).abs() <= 5e-5, || format!("chsh threshold {chsh:.9}"));

    let svet = find_threshold(smax_rho6_closed_at, 4.0, (0.01, 0.5)).unwrap();
    let derived = 2.0f64.ln() / 3.0;
    tally.record((svet - derived).abs() <= 1e-6, || format!("svetlichny threshold {svet:.9}"));

    let crossover = 2.0f64.ln();
    let g = (-crossover / 2.0f64).exp();
    let g2 = g * g;
    let w2 = 1.0 - g2;
    let branch1 = 2.0 * (1.0 - g2.powi(3) - 3.0 * g2 * w2 * w2 + 3.0 * g2 * g2 * w2 + w2.powi(3));
    let branch2 = 4.0 * SQRT_2 * g.powi(3);
    tally.record((branch1 - branch2).abs() <= 1e-12, || {
        format!("branch mismatch at crossover: {branch1:.15} vs {branch2:.15}")
    });

    let conc = find_threshold(|gt| (-2.0 * gt).exp(), 0.5, (0.01, 2.0)).unwrap();
    tally.record((conc - 2.0f64.ln() / 2.0).abs() <= 1e-8, || {
        format!("concurrence threshold {conc:.9}")
    });

    tally.into_outcome("channels", "thresholds")
}

// ---------------------------------------------------------------------------
// kernel suite (qmat / sc_states structural invariants)
// ---------------------------------------------------------------------------

/// Partial transpose applied twice is the identity.
pub fn kernel_pt_involution(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for trial in 0..samples {
        let n = 2 + trial % 2;
        let rho = sample::density(&mut rng, n);
        let q = trial % n;
        let once = partial_transpose(&rho, q).unwrap();
        // Re-apply on the raw matrix through a unit-trace wrapper-free path:
        // PT is linear, so transpose the same qubit of `once` directly.
        let dim = rho.dim();
        let twice = DenseMatrix::from_fn(dim, dim, |i, j| {
            let shift = n - 1 - q;
            let bi = (i >> shift) & 1;
            let bj = (j >> shift) & 1;
            let ip = (i & !(1 << shift)) | (bj << shift);
            let jp = (j & !(1 << shift)) | (bi << shift);
            once[(ip, jp)]
        });
        let defect = twice.max_abs_diff(rho.mat());
        tally.record(defect <= 1e-13, || format!("n={n} q={q}: defect {defect:.3e}"));
    }
    tally.into_outcome("kernel", "partial-transpose-involution")
}

/// Partial trace preserves the trace.
pub fn kernel_partial_trace_preserves_trace(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for trial in 0..samples {
        let n = 2 + trial % 2;
        let rho = sample::density(&mut rng, n);
        let keep: Vec<usize> = if trial % 3 == 0 { vec![0] } else { vec![n - 1] };
        let reduced = partial_trace(&rho, &keep).unwrap();
        let tr = reduced.mat().trace().re;
        tally.record((tr - 1.0).abs() <= 1e-12, || format!("n={n}: trace {tr:.15}"));
    }
    tally.into_outcome("kernel", "partial-trace-preserves-trace")
}

/// Eigenvalues of a density matrix sum to 1.
pub fn kernel_eigenvalue_sum(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for trial in 0..samples {
        let n = 1 + trial % 3;
        let rho = sample::density(&mut rng, n);
        let eig = eig_hermitian(rho.mat()).unwrap();
        let sum: f64 = eig.values.iter().sum();
        let resid = eig.reconstruct().max_abs_diff(rho.mat());
        tally.record((sum - 1.0).abs() <= 1e-10 && resid <= 1e-10, || {
            format!("n={n}: sum {sum:.15}, residual {resid:.3e}")
        });
    }
    tally.into_outcome("kernel", "eigenvalue-sum")
}

/// Construction re-validates: perturbed matrices are rejected.
pub fn kernel_validation_rejects(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for trial in 0..samples {
        let n = 1 + trial % 2;
        let rho = sample::density(&mut rng, n);
        let dim = rho.dim();
        let mut bad = rho.mat().clone();
        match trial % 3 {
            0 => {
                // Break Hermiticity.
                let z = Complex64::new(0.0, 1e-6 + rng.next_f64());
                bad[(0, dim - 1)] += z;
            }
            1 => {
                // Break the trace.
                bad = bad.scale(1.0 + 1e-6 + rng.next_f64());
            }
            _ => {
                // Break positivity while keeping the trace.
                let eps = 0.05 + rng.next_f64();
                bad[(0, 0)] -= Complex64::new(eps, 0.0);
                bad[(dim - 1, dim - 1)] += Complex64::new(eps, 0.0);
                let big = Complex64::new(1.0 + eps, 0.0);
                bad[(0, dim - 1)] = big;
                bad[(dim - 1, 0)] = big;
            }
        }
        tally.record(DensityMatrix::new(n, bad).is_err(), || {
            format!("perturbation class {} accepted", trial % 3)
        });
    }
    tally.into_outcome("kernel", "validation-rejects-non-states")
}

/// Every sampled parameter set builds a state that re-validates, and the
/// sc2 family embeds exactly into the diagonal family.
pub fn kernel_builders(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let p2 = sample::sc2_params(&mut rng);
        let rho2 = build_sc2(&p2);
        let q = Sc2DiagParams::new([p2.a1(), 0.0, 0.0, p2.a4()], p2.a2()).unwrap();
        let embed_exact = build_sc2_diag(&q).mat() == rho2.mat();

        let p2d = sample::sc2_diag_params(&mut rng);
        let rho2d = build_sc2_diag(&p2d);
        let p3 = sample::sc3_params(&mut rng);
        let rho3 = build_sc3(&p3);
        let p3d = sample::sc3_diag_params(&mut rng);
        let rho3d = build_sc3_diag(&p3d);
        let traces_ok = [&rho2, &rho2d, &rho3, &rho3d]
            .iter()
            .all(|r| (r.mat().trace().re - 1.0).abs() <= 1e-12);

        tally.record(embed_exact && traces_ok, || "builder output invalid".into());
    }
    tally.into_outcome("kernel", "builders-validate")
}

/// PPT separability holds exactly when the coherence vanishes, including
/// on the pure boundary |a2| = √(a1·a4).
pub fn kernel_ppt_iff_coherence(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed);
    let mut tally = Tally::new();
    for trial in 0..samples {
        let a1 = rng.next_f64();
        let a4 = 1.0 - a1;
        let u = match trial % 4 {
            0 => 0.0,
            1 => 1.0,
            _ => rng.next_f64(),
        };
        let a2 = Complex64::from_polar(u * (a1 * a4).sqrt(), rng.next_range(0.0, TAU));
        let p2 = Sc2Params::new(a1, a4, a2).unwrap();
        let sep2 = crate::sc_states::ppt_separable(&build_sc2(&p2), 1).unwrap();
        let p3 = Sc3Params::new(a1, a4, a2).unwrap();
        let sep3 = crate::sc_states::ppt_separable(&build_sc3(&p3), 2).unwrap();
        let expect = a2.norm() == 0.0;
        tally.record(sep2 == expect && sep3 == expect, || {
            format!("a1={a1:.6} |a2|={:.6}: sep2={sep2} sep3={sep3}", a2.norm())
        });
    }
    tally.into_outcome("kernel", "ppt-iff-coherence")
}

// ---------------------------------------------------------------------------
// suite runner
// ---------------------------------------------------------------------------

pub fn run_suite(suite: Suite, samples: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let chsh = |out: &mut Vec<CheckOutcome>| {
        out.push(chsh_closed_vs_numeric(samples, seed));
        out.push(chsh_closed_vs_horodecki(samples, seed));
        out.push(chsh_diag_adjudication(samples, seed));
        out.push(chsh_optimal_settings_grid());
        out.push(chsh_phase_invariance(samples, seed));
        out.push(chsh_classical_bound_separable(samples.min(50), seed));
        out.push(lemma_phase_locking());
        out.push(chsh_orthogonality(samples, seed));
    };
    let svetlichny = |out: &mut Vec<CheckOutcome>| {
        out.push(svetlichny_closed_vs_numeric(samples, seed));
        out.push(svetlichny_diag_closed_vs_numeric(samples, seed));
        out.push(svetlichny_optimal_settings_grid());
        out.push(svetlichny_phase_invariance(samples, seed));
        out.push(lemma_branch_selection());
    };
    let measures = |out: &mut Vec<CheckOutcome>| {
        out.push(measures_fmax_concurrence_identity());
        out.push(measures_wootters_closed(samples, seed));
        out.push(measures_smax_concurrence_branch(samples, seed));
        out.push(measures_relative_entropy_properties(samples.min(200), seed));
        out.push(measures_ree_fixed_points());
        out.push(measures_ree_closed_vs_direct(samples, seed));
        out.push(measures_chi_monotonic());
        out.push(measures_equivalence_chain());
    };
    let channels = |out: &mut Vec<CheckOutcome>| {
        out.push(channels_completeness(samples, seed));
        out.push(channels_trace_preservation(samples.min(300), seed));
        out.push(channels_damped_family_structure(samples.min(200), seed));
        out.push(channels_concurrence_gamma4(samples.min(300), seed));
        out.push(channels_closed_form_consistency());
        out.push(channels_non_monotonic_witness());
        out.push(channels_thresholds());
    };
    let kernel = |out: &mut Vec<CheckOutcome>| {
        out.push(kernel_pt_involution(samples, seed));
        out.push(kernel_partial_trace_preserves_trace(samples, seed));
        out.push(kernel_eigenvalue_sum(samples, seed));
        out.push(kernel_validation_rejects(samples, seed));
        out.push(kernel_builders(samples, seed));
        out.push(kernel_ppt_iff_coherence(samples, seed));
    };
    match suite {
        Suite::Chsh => chsh(&mut out),
        Suite::Svetlichny => svetlichny(&mut out),
        Suite::Measures => measures(&mut out),
        Suite::Channels => channels(&mut out),
        Suite::Kernel => kernel(&mut out),
        Suite::All => {
            chsh(&mut out);
            svetlichny(&mut out);
            measures(&mut out);
            channels(&mut out);
            kernel(&mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for outcome in run_suite(Suite::Kernel, 40, 5) {
            assert!(outcome.ok(), "{}/{} failed: {:?}", outcome.suite, outcome.name, outcome.notes);
        }
        for outcome in run_suite(Suite::Channels, 30, 5) {
            assert!(outcome.ok(), "{}/{} failed: {:?}", outcome.suite, outcome.name, outcome.notes);
        }
    }

    #[test]
    fn suite_parsing() {
        assert_eq!("chsh".parse::<Suite>().unwrap(), Suite::Chsh);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
