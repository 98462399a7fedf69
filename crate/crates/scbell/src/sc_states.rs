//! Schmidt-correlated state families.
//!
//! Two-qubit: ρ = a1|00⟩⟨00| + a2|00⟩⟨11| + a2*|11⟩⟨00| + a4|11⟩⟨11| and its
//! diagonal extension with weights b1..b4 on |00⟩,|01⟩,|10⟩,|11⟩ plus a
//! |00⟩⟨11| coherence c1. Three-qubit: the analogous families on
//! |000⟩/|111⟩ with diagonal weights b1..b8 ordered
//! |000⟩,|001⟩,|010⟩,|100⟩,|011⟩,|101⟩,|110⟩,|111⟩.
//!
//! Parameter validation is strict at construction: the weight constraints
//! are exactly the positivity conditions for these sparsity patterns, so a
//! violating parameter set is not a state.

use crate::qmat::{
    eig_hermitian, parse_complex, partial_transpose, Complex64, DenseMatrix, DensityMatrix,
    QmatError, TOL_PSD_MIN_EIG,
};
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

/// Slack on the coherence bound so boundary (pure) cases survive rounding.
pub const COHERENCE_SLACK: f64 = 1e-12;
/// Slack on weight normalization.
pub const WEIGHT_SUM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScStateError {
    #[error("constraint `{name} >= 0` violated: {name} = {value}")]
    NegativeWeight { name: &'static str, value: f64 },
    #[error("constraint `{name}` violated: weights sum to {sum}")]
    WeightSum { name: &'static str, sum: f64 },
    #[error("constraint `{name}` violated: product {product:.6e} < |coherence|^2 = {coherence_sq:.6e}")]
    CoherenceBound {
        name: &'static str,
        product: f64,
        coherence_sq: f64,
    },
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },
}

fn check_finite(name: &'static str, v: f64) -> Result<(), ScStateError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ScStateError::NonFinite { name })
    }
}

fn check_weight(name: &'static str, v: f64) -> Result<(), ScStateError> {
    check_finite(name, v)?;
    if v < 0.0 {
        return Err(ScStateError::NegativeWeight { name, value: v });
    }
    Ok(())
}

fn check_sum(name: &'static str, sum: f64) -> Result<(), ScStateError> {
    if (sum - 1.0).abs() > WEIGHT_SUM_SLACK {
        return Err(ScStateError::WeightSum { name, sum });
    }
    Ok(())
}

fn check_coherence(
    name: &'static str,
    product: f64,
    coherence: Complex64,
) -> Result<(), ScStateError> {
    let coherence_sq = coherence.norm_sqr();
    if coherence_sq > product + COHERENCE_SLACK {
        return Err(ScStateError::CoherenceBound {
            name,
            product,
            coherence_sq,
        });
    }
    Ok(())
}

/// Parameters of the two-qubit SC state: a1, a4 ≥ 0, a1+a4 = 1,
/// a1·a4 ≥ |a2|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sc2Params {
    a1: f64,
    a4: f64,
    a2: Complex64,
}

impl Sc2Params {
    pub fn new(a1: f64, a4: f64, a2: Complex64) -> Result<Self, ScStateError> {
        check_weight("a1", a1)?;
        check_weight("a4", a4)?;
        check_finite("Re(a2)", a2.re)?;
        check_finite("Im(a2)", a2.im)?;
        check_sum("a1 + a4 = 1", a1 + a4)?;
        check_coherence("a1*a4 >= |a2|^2", a1 * a4, a2)?;
        Ok(Sc2Params { a1, a4, a2 })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a4(&self) -> f64 {
        self.a4
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }
}

/// Parameters of the diagonal two-qubit family: weights b1..b4 on
/// |00⟩,|01⟩,|10⟩,|11⟩ with b1·b4 ≥ |c1|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sc2DiagParams {
    b: [f64; 4],
    c1: Complex64,
}

impl Sc2DiagParams {
    pub fn new(b: [f64; 4], c1: Complex64) -> Result<Self, ScStateError> {
        const NAMES: [&str; 4] = ["b1", "b2", "b3", "b4"];
        for (i, &w) in b.iter().enumerate() {
            check_weight(NAMES[i], w)?;
        }
        check_finite("Re(c1)", c1.re)?;
        check_finite("Im(c1)", c1.im)?;
        check_sum("b1 + b2 + b3 + b4 = 1", b.iter().sum())?;
        check_coherence("b1*b4 >= |c1|^2", b[0] * b[3], c1)?;
        Ok(Sc2DiagParams { b, c1 })
    }

    pub fn b(&self) -> [f64; 4] {
        self.b
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }
}

/// Parameters of the three-qubit SC state on span{|000⟩, |111⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sc3Params {
    a1: f64,
    a4: f64,
    a2: Complex64,
}

impl Sc3Params {
    pub fn new(a1: f64, a4: f64, a2: Complex64) -> Result<Self, ScStateError> {
        check_weight("a1", a1)?;
        check_weight("a4", a4)?;
        check_finite("Re(a2)", a2.re)?;
        check_finite("Im(a2)", a2.im)?;
        check_sum("a1 + a4 = 1", a1 + a4)?;
        check_coherence("a1*a4 >= |a2|^2", a1 * a4, a2)?;
        Ok(Sc3Params { a1, a4, a2 })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a4(&self) -> f64 {
        self.a4
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }
}

/// Parameters of the diagonal three-qubit family. Weight order:
/// b1..b8 on |000⟩,|001⟩,|010⟩,|100⟩,|011⟩,|101⟩,|110⟩,|111⟩; the
/// coherence c1 couples |000⟩⟨111|. Positivity for this sparsity pattern
/// is exactly b_i ≥ 0 and b1·b8 ≥ |c1|²; no other weight enters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sc3DiagParams {
    b: [f64; 8],
    c1: Complex64,
}

impl Sc3DiagParams {
    pub fn new(b: [f64; 8], c1: Complex64) -> Result<Self, ScStateError> {
        const NAMES: [&str; 8] = ["b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8"];
        for (i, &w) in b.iter().enumerate() {
            check_weight(NAMES[i], w)?;
        }
        check_finite("Re(c1)", c1.re)?;
        check_finite("Im(c1)", c1.im)?;
        check_sum("b1 + ... + b8 = 1", b.iter().sum())?;
        check_coherence("b1*b8 >= |c1|^2", b[0] * b[7], c1)?;
        Ok(Sc3DiagParams { b, c1 })
    }

    pub fn b(&self) -> [f64; 8] {
        self.b
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }
}

fn expect_state(n: usize, mat: DenseMatrix) -> DensityMatrix {
    // Validated parameters imply positivity up to the admitted slack.
    DensityMatrix::new(n, mat).expect("validated SC parameters produce a state")
}

pub fn build_sc2(p: &Sc2Params) -> DensityMatrix {
    let mut m = DenseMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(p.a1, 0.0);
    m[(3, 3)] = Complex64::new(p.a4, 0.0);
    m[(0, 3)] = p.a2;
    m[(3, 0)] = p.a2.conj();
    expect_state(2, m)
}

pub fn build_sc2_diag(p: &Sc2DiagParams) -> DensityMatrix {
    let mut m = DenseMatrix::zeros(4, 4);
    for (i, &w) in p.b.iter().enumerate() {
        m[(i, i)] = Complex64::new(w, 0.0);
    }
    m[(0, 3)] = p.c1;
    m[(3, 0)] = p.c1.conj();
    expect_state(2, m)
}

pub fn build_sc3(p: &Sc3Params) -> DensityMatrix {
    let mut m = DenseMatrix::zeros(8, 8);
    m[(0, 0)] = Complex64::new(p.a1, 0.0);
    m[(7, 7)] = Complex64::new(p.a4, 0.0);
    m[(0, 7)] = p.a2;
    m[(7, 0)] = p.a2.conj();
    expect_state(3, m)
}

/// Basis position of each weight: |000⟩,|001⟩,|010⟩,|100⟩,|011⟩,|101⟩,|110⟩,|111⟩.
const SC3_DIAG_BASIS: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

pub fn build_sc3_diag(p: &Sc3DiagParams) -> DensityMatrix {
    let mut m = DenseMatrix::zeros(8, 8);
    for (i, &w) in p.b.iter().enumerate() {
        let k = SC3_DIAG_BASIS[i];
        m[(k, k)] = Complex64::new(w, 0.0);
    }
    m[(0, 7)] = p.c1;
    m[(7, 0)] = p.c1.conj();
    expect_state(3, m)
}

/// |Φ+⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> DensityMatrix {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::from_pure(2, &[h, z, z, h]).expect("Bell state is valid")
}

/// (|000⟩ + |111⟩)/√2.
pub fn ghz_state() -> DensityMatrix {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::from_pure(3, &[h, z, z, z, z, z, z, h]).expect("GHZ state is valid")
}

/// PPT test across the given cut: true iff the partial transpose over
/// qubit `cut` has no eigenvalue below the PSD tolerance. For SC states
/// this decides separability exactly.
pub fn ppt_separable(rho: &DensityMatrix, cut: usize) -> Result<bool, QmatError> {
    let pt = partial_transpose(rho, cut)?;
    let eig = eig_hermitian(&pt)?;
    Ok(eig.min() >= TOL_PSD_MIN_EIG)
}

// ---------------------------------------------------------------------------
// State files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateFileError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing key `{key}`")]
    MissingKey { key: String },
    #[error("`kind` must come first")]
    KindNotFirst,
    #[error("unknown kind `{kind}` (expected sc2, sc2diag, sc3, sc3diag, bell, ghz)")]
    UnknownKind { kind: String },
    #[error("invalid parameters: {0}")]
    Invalid(#[from] ScStateError),
}

/// A parsed state description: one of the SC families or a named pure state.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Sc2(Sc2Params),
    Sc2Diag(Sc2DiagParams),
    Sc3(Sc3Params),
    Sc3Diag(Sc3DiagParams),
    Bell,
    Ghz,
}

impl StateSpec {
    pub fn n_qubits(&self) -> usize {
        match self {
            StateSpec::Sc2(_) | StateSpec::Sc2Diag(_) | StateSpec::Bell => 2,
            StateSpec::Sc3(_) | StateSpec::Sc3Diag(_) | StateSpec::Ghz => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Sc2(_) => "sc2",
            StateSpec::Sc2Diag(_) => "sc2diag",
            StateSpec::Sc3(_) => "sc3",
            StateSpec::Sc3Diag(_) => "sc3diag",
            StateSpec::Bell => "bell",
            StateSpec::Ghz => "ghz",
        }
    }

    pub fn build(&self) -> DensityMatrix {
        match self {
            StateSpec::Sc2(p) => build_sc2(p),
            StateSpec::Sc2Diag(p) => build_sc2_diag(p),
            StateSpec::Sc3(p) => build_sc3(p),
            StateSpec::Sc3Diag(p) => build_sc3_diag(p),
            StateSpec::Bell => bell_state(),
            StateSpec::Ghz => ghz_state(),
        }
    }

    /// Parse the line-based `key = value` state-file format. The first
    /// key must be `kind`; the remaining keys are the family's parameter
    /// names. Blank lines and `#` comments are skipped. Unknown keys are
    /// errors.
    pub fn parse(text: &str) -> Result<Self, StateFileError> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(StateFileError::MalformedLine {
                    line: line_no,
                    text: line.to_string(),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if entries.iter().any(|(_, k, _)| *k == key) {
                return Err(StateFileError::DuplicateKey { line: line_no, key });
            }
            entries.push((line_no, key, value));
        }

        let Some((_, first_key, kind)) = entries.first() else {
            return Err(StateFileError::MissingKey { key: "kind".into() });
        };
        if first_key != "kind" {
            return Err(StateFileError::KindNotFirst);
        }
        let kind = kind.clone();
        let rest = &entries[1..];

        let expected: &[&str] = match kind.as_str() {
            "sc2" | "sc3" => &["a1", "a4", "a2"],
            "sc2diag" => &["b1", "b2", "b3", "b4", "c1"],
            "sc3diag" => &["b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "c1"],
            "bell" | "ghz" => &[],
            _ => return Err(StateFileError::UnknownKind { kind }),
        };

        for (line, key, _) in rest {
            if !expected.contains(&key.as_str()) {
                return Err(StateFileError::UnknownKey {
                    line: *line,
                    key: key.clone(),
                });
            }
        }

        let lookup = |key: &str| -> Result<(usize, &str), StateFileError> {
            rest.iter()
                .find(|(_, k, _)| k == key)
                .map(|(line, _, v)| (*line, v.as_str()))
                .ok_or(StateFileError::MissingKey { key: key.into() })
        };
        let real = |key: &str| -> Result<f64, StateFileError> {
            let (line, v) = lookup(key)?;
            v.parse().map_err(|_| StateFileError::BadValue {
                line,
                key: key.into(),
                reason: format!("`{v}` is not a number"),
            })
        };
        let complex = |key: &str| -> Result<Complex64, StateFileError> {
            let (line, v) = lookup(key)?;
            parse_complex(v).map_err(|e| StateFileError::BadValue {
                line,
                key: key.into(),
                reason: e.reason,
            })
        };

        match kind.as_str() {
            "sc2" => Ok(StateSpec::Sc2(Sc2Params::new(
                real("a1")?,
                real("a4")?,
                complex("a2")?,
            )?)),
            "sc3" => Ok(StateSpec::Sc3(Sc3Params::new(
                real("a1")?,
                real("a4")?,
                complex("a2")?,
            )?)),
            "sc2diag" => Ok(StateSpec::Sc2Diag(Sc2DiagParams::new(
                [real("b1")?, real("b2")?, real("b3")?, real("b4")?],
                complex("c1")?,
            )?)),
            "sc3diag" => Ok(StateSpec::Sc3Diag(Sc3DiagParams::new(
                [
                    real("b1")?,
                    real("b2")?,
                    real("b3")?,
                    real("b4")?,
                    real("b5")?,
                    real("b6")?,
                    real("b7")?,
                    real("b8")?,
                ],
                complex("c1")?,
            )?)),
            "bell" => Ok(StateSpec::Bell),
            "ghz" => Ok(StateSpec::Ghz),
            _ => unreachable!("kind validated above"),
        }
    }
}
