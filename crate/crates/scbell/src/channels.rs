//! Transverse-noise Kraus channel, product application across qubits,
//! closed-form violation curves for the damped Bell/GHZ states, time
//! sweeps, and bisection threshold finding.

use crate::bell::{maximize_chsh, maximize_svetlichny, BellError, MaximizerConfig};
use crate::entanglement::{concurrence_wootters, MeasureError};
use crate::qmat::{kron, Complex64, DenseMatrix, DensityMatrix, QmatError};
use crate::sc_states::{
    bell_state, ghz_state, Sc2DiagParams, Sc3DiagParams, ScStateError,
};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use thiserror::Error;

/// Completeness slack for ΣK†K = I.
pub const TOL_KRAUS_COMPLETE: f64 = 1e-12;
/// Bisection tolerance on Γt for threshold finding.
pub const THRESHOLD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("channel needs at least one Kraus operator")]
    EmptyKraus,
    #[error("Kraus operator {index} is {rows}x{cols}, expected 2x2")]
    KrausNotQubit {
        index: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Kraus completeness violated: max |ΣK†K - I| = {defect:.3e}")]
    Incomplete { defect: f64 },
    #[error("noise parameters: {reason}")]
    BadNoiseParams { reason: String },
    #[error("sweep needs steps >= 2, got {steps}")]
    TooFewSteps { steps: usize },
    #[error("sweep range: {reason}")]
    BadSweepRange { reason: String },
    #[error("sweep supports 2-qubit (Bell) or 3-qubit (GHZ) initial states, got {n_qubits} qubits")]
    UnsupportedDimension { n_qubits: usize },
    #[error("sweep initial state must be the {expected} state")]
    UnexpectedInitialState { expected: &'static str },
    #[error("curve - level does not change sign on the bracket")]
    NoSignChange,
    #[error("bracket ({lo}, {hi}) is not a valid interval")]
    BadBracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Qmat(#[from] QmatError),
    #[error(transparent)]
    Bell(#[from] BellError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    State(#[from] ScStateError),
}

/// A qubit channel in operator-sum form, completeness-checked on
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<DenseMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<DenseMatrix>) -> Result<Self, ChannelError> {
        if ops.is_empty() {
            return Err(ChannelError::EmptyKraus);
        }
        for (index, k) in ops.iter().enumerate() {
            if k.rows() != 2 || k.cols() != 2 {
                return Err(ChannelError::KrausNotQubit {
                    index,
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
        }
        let mut sum = DenseMatrix::zeros(2, 2);
        for k in &ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = sum.max_abs_diff(&DenseMatrix::identity(2));
        if defect > TOL_KRAUS_COMPLETE {
            return Err(ChannelError::Incomplete { defect });
        }
        Ok(KrausChannel { ops })
    }

    pub fn operators(&self) -> &[DenseMatrix] {
        &self.ops
    }
}

/// Decay-rate/time pair for the transverse channel. Derived quantities:
/// γ = exp(−Γt/2) ∈ (0, 1] and ω = √(1−γ²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    gamma_rate: f64,
    t: f64,
}

impl NoiseParams {
    pub fn new(gamma_rate: f64, t: f64) -> Result<Self, ChannelError> {
        if !gamma_rate.is_finite() || gamma_rate <= 0.0 {
            return Err(ChannelError::BadNoiseParams {
                reason: format!("rate must be positive and finite, got {gamma_rate}"),
            });
        }
        if !t.is_finite() || t < 0.0 {
            return Err(ChannelError::BadNoiseParams {
                reason: format!("time must be nonnegative and finite, got {t}"),
            });
        }
        Ok(NoiseParams { gamma_rate, t })
    }

    pub fn gamma_rate(&self) -> f64 {
        self.gamma_rate
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_rate * self.t
    }

    pub fn gamma(&self) -> f64 {
        (-self.gamma_t() / 2.0).exp()
    }

    pub fn omega(&self) -> f64 {
        (1.0 - self.gamma() * self.gamma()).max(0.0).sqrt()
    }
}

fn transverse_ops(gamma: f64) -> Vec<DenseMatrix> {
    let omega = (1.0 - gamma * gamma).max(0.0).sqrt();
    let z = Complex64::new(0.0, 0.0);
    let k1 = DenseMatrix::two_by_two([
        Complex64::new(gamma, 0.0),
        z,
        z,
        Complex64::new(1.0, 0.0),
    ]);
    let k2 = DenseMatrix::two_by_two([z, z, Complex64::new(omega, 0.0), z]);
    vec![k1, k2]
}

/// The transverse noise channel K1 = [[γ, 0], [0, 1]], K2 = [[0, 0], [ω, 0]].
pub fn transverse_channel(p: &NoiseParams) -> KrausChannel {
    KrausChannel::new(transverse_ops(p.gamma())).expect("γ² + ω² = 1 forces completeness")
}

/// Same channel parametrized directly by γ ∈ [0, 1].
pub fn transverse_channel_gamma(gamma: f64) -> Result<KrausChannel, ChannelError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ChannelError::BadNoiseParams {
            reason: format!("gamma must lie in [0, 1], got {gamma}"),
        });
    }
    KrausChannel::new(transverse_ops(gamma))
}

/// Apply one copy of the channel to every qubit:
/// ρ ↦ Σ (K_{i1} ⊗ … ⊗ K_{in}) ρ (…)†, evaluated qubit by qubit.
pub fn apply_product_channel(
    rho: &DensityMatrix,
    ch: &KrausChannel,
) -> Result<DensityMatrix, ChannelError> {
    let n = rho.n_qubits();
    let dim = rho.dim();
    let mut current = rho.mat().clone();
    for q in 0..n {
        let left = DenseMatrix::identity(1 << q);
        let right = DenseMatrix::identity(1 << (n - 1 - q));
        let mut next = DenseMatrix::zeros(dim, dim);
        for k in ch.operators() {
            let embedded = kron(&kron(&left, k), &right);
            next = &next + &(&(&embedded * &current) * &embedded.adjoint());
        }
        current = next;
    }
    Ok(DensityMatrix::new(n, current)?)
}

/// Closed-form CHSH value of the transverse-damped Bell state:
/// 2√((2γ⁴−2γ²+1)² + γ⁴).
///
/// Like [`crate::bell::fmax_sc2_diag`], this is the fixed-orientation
/// expression; for γ ∈ (1/√2, 1) the unrestricted maximum is 2√2·γ²
/// instead, which the optimizer and Horodecki criterion report.
pub fn fmax_rho3_closed(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    let delta = 2.0 * g2 * g2 - 2.0 * g2 + 1.0;
    2.0 * (delta * delta + g2 * g2).sqrt()
}

/// Closed-form Svetlichny maximum of the transverse-damped GHZ state:
/// 2(1−γ⁶−3γ²ω⁴+3γ⁴ω²+ω⁶) for γ ≤ 1/√2 and 4√2·γ³ above. The branches
/// meet at γ = 1/√2 where both equal 2.
pub fn smax_rho6_closed(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    let w2 = 1.0 - g2;
    if gamma <= FRAC_1_SQRT_2 {
        2.0 * (1.0 - g2.powi(3) - 3.0 * g2 * w2 * w2 + 3.0 * g2 * g2 * w2 + w2.powi(3))
    } else {
        4.0 * SQRT_2 * gamma.powi(3)
    }
}

/// Diagonal-family parameters of the damped Bell state:
/// b = (γ⁴, γ²ω², γ²ω², 1+ω⁴)/2, c1 = γ²/2.
pub fn rho3_diag_params(gamma: f64) -> Result<Sc2DiagParams, ChannelError> {
    let g2 = gamma * gamma;
    let w2 = 1.0 - g2;
    Ok(Sc2DiagParams::new(
        [
            g2 * g2 / 2.0,
            g2 * w2 / 2.0,
            g2 * w2 / 2.0,
            (1.0 + w2 * w2) / 2.0,
        ],
        Complex64::new(g2 / 2.0, 0.0),
    )?)
}

/// Diagonal-family parameters of the damped GHZ state:
/// b = (γ⁶, γ⁴ω²·3, γ²ω⁴·3, 1+ω⁶)/2 across the weight order, c1 = γ³/2.
pub fn rho6_diag_params(gamma: f64) -> Result<Sc3DiagParams, ChannelError> {
    let g2 = gamma * gamma;
    let w2 = 1.0 - g2;
    let single = g2 * g2 * w2 / 2.0;
    let double = g2 * w2 * w2 / 2.0;
    Ok(Sc3DiagParams::new(
        [
            g2.powi(3) / 2.0,
            single,
            single,
            single,
            double,
            double,
            double,
            (1.0 + w2.powi(3)) / 2.0,
        ],
        Complex64::new(gamma.powi(3) / 2.0, 0.0),
    )?)
}

/// One row of a sweep: dimensionless time Γt, γ, the closed-form value,
/// the multistart-optimizer value, and the Wootters concurrence (2-qubit
/// sweeps only).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub gamma_t: f64,
    pub gamma: f64,
    pub closed_value: f64,
    pub numeric_value: f64,
    pub measure_value: Option<f64>,
}

/// Evolve the Bell (2-qubit) or GHZ (3-qubit) state on a uniform time
/// grid over [0, t_max] and record closed-form vs optimizer values per
/// point. Records are ordered by grid index.
pub fn run_sweep(
    initial: &DensityMatrix,
    gamma_rate: f64,
    t_max: f64,
    steps: usize,
    cfg: &MaximizerConfig,
) -> Result<Vec<SweepRecord>, ChannelError> {
    if steps < 2 {
        return Err(ChannelError::TooFewSteps { steps });
    }
    if !gamma_rate.is_finite() || gamma_rate <= 0.0 || !t_max.is_finite() || t_max <= 0.0 {
        return Err(ChannelError::BadSweepRange {
            reason: format!("need rate > 0 and t_max > 0, got rate {gamma_rate}, t_max {t_max}"),
        });
    }
    match initial.n_qubits() {
        2 => {
            if initial.mat().max_abs_diff(bell_state().mat()) > 1e-9 {
                return Err(ChannelError::UnexpectedInitialState { expected: "Bell" });
            }
        }
        3 => {
            if initial.mat().max_abs_diff(ghz_state().mat()) > 1e-9 {
                return Err(ChannelError::UnexpectedInitialState { expected: "GHZ" });
            }
        }
        n => return Err(ChannelError::UnsupportedDimension { n_qubits: n }),
    }

    let mut records = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = t_max * k as f64 / (steps - 1) as f64;
        let noise = NoiseParams::new(gamma_rate, t)?;
        let gamma = noise.gamma();
        let evolved = apply_product_channel(initial, &transverse_channel(&noise))?;
        let record = if initial.n_qubits() == 2 {
            let (numeric, _) = maximize_chsh(&evolved, cfg)?;
            SweepRecord {
                gamma_t: noise.gamma_t(),
                gamma,
                closed_value: fmax_rho3_closed(gamma),
                numeric_value: numeric,
                measure_value: Some(concurrence_wootters(&evolved)?),
            }
        } else {
            let (numeric, _) = maximize_svetlichny(&evolved, cfg)?;
            SweepRecord {
                gamma_t: noise.gamma_t(),
                gamma,
                closed_value: smax_rho6_closed(gamma),
                numeric_value: numeric,
                measure_value: None,
            }
        };
        records.push(record);
    }
    Ok(records)
}

/// Bisection root of `curve(Γt) = level` on the bracket, to 1e-8 in Γt.
/// The curve must be continuous and `curve - level` must change sign.
pub fn find_threshold(
    curve: impl Fn(f64) -> f64,
    level: f64,
    bracket: (f64, f64),
) -> Result<f64, ChannelError> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(ChannelError::BadBracket { lo, hi });
    }
    let mut f_lo = curve(lo) - level;
    let f_hi = curve(hi) - level;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(ChannelError::NoSignChange);
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = curve(mid) - level;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `fmax_rho3_closed` as a function of Γt, for threshold finding.
pub fn fmax_rho3_closed_at(gamma_t: f64) -> f64 {
    fmax_rho3_closed((-gamma_t / 2.0).exp())
}

/// `smax_rho6_closed` as a function of Γt.
pub fn smax_rho6_closed_at(gamma_t: f64) -> f64 {
    smax_rho6_closed((-gamma_t / 2.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{fmax_sc2_diag, smax_sc3_diag};
    use crate::rng::SplitMix64;
    use crate::sc_states::{build_sc2_diag, build_sc3_diag};

    #[test]
    fn transverse_channel_at_zero_time_is_identity() {
        let p = NoiseParams::new(1.0, 0.0).unwrap();
        let ch = transverse_channel(&p);
        assert!(ch.operators()[0].max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
        assert!(ch.operators()[1].max_abs() < 1e-15);
        let rho = bell_state();
        let out = apply_product_channel(&rho, &ch).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-14);
    }

    #[test]
    fn gamma_omega_substitution() {
        // Γt = 2 ln 2 gives γ = 1/2, ω = √3/2.
        let p = NoiseParams::new(2.0, 2.0f64.ln()).unwrap();
        assert!((p.gamma() - 0.5).abs() < 1e-14);
        assert!((p.omega() - 3.0f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn completeness_for_random_times() {
        let mut rng = SplitMix64::new(21);
        for _ in 0..1000 {
            let p = NoiseParams::new(rng.next_range(0.01, 5.0), rng.next_range(0.0, 4.0)).unwrap();
            let ch = transverse_channel(&p);
            let mut sum = DenseMatrix::zeros(2, 2);
            for k in ch.operators() {
                sum = &sum + &(&k.adjoint() * k);
            }
            assert!(sum.max_abs_diff(&DenseMatrix::identity(2)) <= TOL_KRAUS_COMPLETE);
        }
    }

    #[test]
    fn kraus_validation_errors() {
        assert!(matches!(
            KrausChannel::new(vec![]),
            Err(ChannelError::EmptyKraus)
        ));
        assert!(matches!(
            KrausChannel::new(vec![DenseMatrix::identity(4)]),
            Err(ChannelError::KrausNotQubit { .. })
        ));
        assert!(matches!(
            KrausChannel::new(vec![DenseMatrix::identity(2).scale(0.9)]),
            Err(ChannelError::Incomplete { .. })
        ));
    }

    #[test]
    fn damped_bell_matches_printed_coefficients() {
        let gamma: f64 = 0.8;
        let ch = transverse_channel_gamma(gamma).unwrap();
        let evolved = apply_product_channel(&bell_state(), &ch).unwrap();
        let expect = build_sc2_diag(&rho3_diag_params(gamma).unwrap());
        assert!(evolved.mat().max_abs_diff(expect.mat()) < 1e-14);
    }

    #[test]
    fn damped_ghz_matches_printed_coefficients() {
        let gamma: f64 = 0.9;
        let ch = transverse_channel_gamma(gamma).unwrap();
        let evolved = apply_product_channel(&ghz_state(), &ch).unwrap();
        let expect = build_sc3_diag(&rho6_diag_params(gamma).unwrap());
        assert!(evolved.mat().max_abs_diff(expect.mat()) < 1e-14);
    }

    #[test]
    fn channel_preserves_trace_on_random_states() {
        let mut rng = SplitMix64::new(31);
        for trial in 0..300 {
            let n = 1 + trial % 3;
            let dim = 1usize << n;
            let g = DenseMatrix::from_fn(dim, dim, |_, _| {
                Complex64::new(rng.next_gaussian(), rng.next_gaussian())
            });
            let gg = &g * &g.adjoint();
            let rho = DensityMatrix::new(n, gg.scale(1.0 / gg.trace().re)).unwrap();
            let ch = transverse_channel_gamma(rng.next_f64()).unwrap();
            let out = apply_product_channel(&rho, &ch).unwrap();
            assert!((out.mat().trace().re - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_curves_at_endpoints() {
        assert!((fmax_rho3_closed(1.0) - 2.0 * SQRT_2).abs() < 1e-14);
        assert!((fmax_rho3_closed(0.0) - 2.0).abs() < 1e-14);
        assert!((smax_rho6_closed(1.0) - 4.0 * SQRT_2).abs() < 1e-14);
        assert!((smax_rho6_closed(0.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn rho3_curve_crosses_two_near_published_time() {
        let v = fmax_rho3_closed_at(0.265805);
        assert!((v - 2.0).abs() < 5e-5, "value at threshold: {v}");
    }

    #[test]
    fn rho6_branches_meet_at_crossover() {
        let g = FRAC_1_SQRT_2;
        let g2 = g * g;
        let w2 = 1.0 - g2;
        let branch1 = 2.0 * (1.0 - g2.powi(3) - 3.0 * g2 * w2 * w2 + 3.0 * g2 * g2 * w2 + w2.powi(3));
        let branch2 = 4.0 * SQRT_2 * g.powi(3);
        assert!((branch1 - 2.0).abs() < 1e-12);
        assert!((branch2 - 2.0).abs() < 1e-12);
        assert!((branch1 - branch2).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_diag_family_formulas() {
        for k in 0..=100 {
            let gamma = k as f64 / 100.0;
            let p2 = rho3_diag_params(gamma).unwrap();
            assert!((fmax_rho3_closed(gamma) - fmax_sc2_diag(&p2)).abs() < 1e-12);
            let p3 = rho6_diag_params(gamma).unwrap();
            // The piecewise form equals max of the two branch expressions.
            assert!((smax_rho6_closed(gamma) - smax_sc3_diag(&p3)).abs() < 1e-12);
        }
    }

    #[test]
    fn damped_bell_concurrence_is_gamma_fourth() {
        for k in 0..=20 {
            let gamma = k as f64 / 20.0;
            let ch = transverse_channel_gamma(gamma).unwrap();
            let evolved = apply_product_channel(&bell_state(), &ch).unwrap();
            let c = concurrence_wootters(&evolved).unwrap();
            assert!((c - gamma.powi(4)).abs() < 1e-9, "γ = {gamma}: C = {c}");
        }
    }

    #[test]
    fn closed_curves_have_interior_local_minimum() {
        let non_monotonic = |f: &dyn Fn(f64) -> f64| {
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
        assert!(non_monotonic(&|gt| fmax_rho3_closed_at(gt)));
        assert!(non_monotonic(&|gt| smax_rho6_closed_at(gt)));
    }

    #[test]
    fn sweep_produces_expected_grid() {
        let cfg = MaximizerConfig::reduced(3);
        let records = run_sweep(&bell_state(), 1.0, 3.0, 4, &cfg).unwrap();
        assert_eq!(records.len(), 4);
        assert_eq!(records[0].gamma_t, 0.0);
        assert!((records[0].closed_value - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((records[3].gamma_t - 3.0).abs() < 1e-12);
        for r in &records {
            assert!((r.gamma - (-r.gamma_t / 2.0).exp()).abs() < 1e-12);
            assert!(r.measure_value.is_some());
        }

        let records = run_sweep(&ghz_state(), 1.0, 1.0, 3, &cfg).unwrap();
        assert!((records[0].closed_value - 4.0 * SQRT_2).abs() < 1e-12);
        assert!(records.iter().all(|r| r.measure_value.is_none()));
    }

    #[test]
    fn sweep_rejects_bad_inputs() {
        let cfg = MaximizerConfig::reduced(0);
        assert!(matches!(
            run_sweep(&bell_state(), 1.0, 3.0, 1, &cfg),
            Err(ChannelError::TooFewSteps { steps: 1 })
        ));
        let single = DensityMatrix::new(1, DenseMatrix::identity(2).scale(0.5)).unwrap();
        assert!(matches!(
            run_sweep(&single, 1.0, 3.0, 4, &cfg),
            Err(ChannelError::UnsupportedDimension { n_qubits: 1 })
        ));
        let mixed = DensityMatrix::new(2, DenseMatrix::identity(4).scale(0.25)).unwrap();
        assert!(matches!(
            run_sweep(&mixed, 1.0, 3.0, 4, &cfg),
            Err(ChannelError::UnexpectedInitialState { expected: "Bell" })
        ));
    }

    #[test]
    fn threshold_of_rho3_curve() {
        let gt = find_threshold(fmax_rho3_closed_at, 2.0, (0.01, 1.0)).unwrap();
        assert!((gt - 0.265805).abs() < 5e-5, "threshold {gt}");
    }

    #[test]
    fn threshold_of_rho6_curve_is_third_of_ln2() {
        // 4√2 γ³ = 4 at γ³ = 1/√2, i.e. Γt = (ln 2)/3.
        let gt = find_threshold(smax_rho6_closed_at, 4.0, (0.01, 0.5)).unwrap();
        assert!((gt - 2.0f64.ln() / 3.0).abs() < 1e-6, "threshold {gt}");
    }

    #[test]
    fn threshold_of_concurrence_curve() {
        // γ⁴ = e^{-2Γt} = 1/2 at Γt = (ln 2)/2.
        let gt = find_threshold(|gt| (-2.0 * gt).exp(), 0.5, (0.01, 2.0)).unwrap();
        assert!((gt - 2.0f64.ln() / 2.0).abs() < 1e-8, "threshold {gt}");
    }

    #[test]
    fn threshold_rejects_bad_brackets() {
        assert!(matches!(
            find_threshold(|x| x, 0.5, (1.0, 0.5)),
            Err(ChannelError::BadBracket { .. })
        ));
        assert!(matches!(
            find_threshold(|x| x, 10.0, (0.0, 1.0)),
            Err(ChannelError::NoSignChange)
        ));
    }
}
