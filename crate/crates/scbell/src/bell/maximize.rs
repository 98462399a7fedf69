//! Multistart maximization of Bell expectations over measurement angles.
//!
//! Candidate starting points are drawn (seeded, counter-based) from a
//! coarse angle lattice; the top `restarts` candidates by objective value
//! are each refined with an unconstrained Nelder-Mead simplex search,
//! restarting the simplex around the incumbent until the per-restart
//! iteration budget is spent. Angles are wrapped onto canonical ranges
//! only after refinement.
//!
//! Objective evaluations during the search contract the state's Pauli
//! correlation tensor with the Bloch vectors, which equals Tr(ρ·Op) for
//! these operators at a fraction of the cost; the returned value is
//! re-evaluated through the assembled operator.

use super::{
    chsh_expectation, correlation_matrix, correlation_tensor3, svetlichny_expectation,
    BellError, ChshSettings, MaximizerConfig, MeasurementDirection, SvetlichnySettings,
};
use crate::qmat::DensityMatrix;
use crate::rng::SplitMix64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    [st * cp, st * sp, ct]
}

fn matvec(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        t[0][0] * v[0] + t[0][1] * v[1] + t[0][2] * v[2],
        t[1][0] * v[0] + t[1][1] * v[1] + t[1][2] * v[2],
        t[2][0] * v[0] + t[2][1] * v[1] + t[2][2] * v[2],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// F(angles) = a·T(b+b′) + a′·T(b−b′); angle order (θa, φa, θa′, φa′, θb, φb, θb′, φb′).
fn chsh_objective(t: &[[f64; 3]; 3], x: &[f64]) -> f64 {
    let a = direction(x[0], x[1]);
    let ap = direction(x[2], x[3]);
    let b = direction(x[4], x[5]);
    let bp = direction(x[6], x[7]);
    let plus = [b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]];
    let minus = [b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]];
    dot(a, matvec(t, plus)) + dot(ap, matvec(t, minus))
}

/// Contract the j-index of the three-qubit tensor with v: Y_ik = Σ_j T_ijk v_j.
fn contract_mid(t: &[[[f64; 3]; 3]; 3], v: [f64; 3]) -> [[f64; 3]; 3] {
    let mut y = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            y[i][k] = t[i][0][k] * v[0] + t[i][1][k] * v[1] + t[i][2][k] * v[2];
        }
    }
    y
}

fn bilinear(y: &[[f64; 3]; 3], a: [f64; 3], c: [f64; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        acc += a[i] * (y[i][0] * c[0] + y[i][1] * c[1] + y[i][2] * c[2]);
    }
    acc
}

/// S(angles) = ⟨A(B+B′)C⟩ + ⟨A(B−B′)C′⟩ + ⟨A′(B−B′)C⟩ − ⟨A′(B+B′)C′⟩;
/// angle order (θa, φa, θa′, φa′, θb, φb, θb′, φb′, θc, φc, θc′, φc′).
fn svetlichny_objective(t: &[[[f64; 3]; 3]; 3], x: &[f64]) -> f64 {
    let a = direction(x[0], x[1]);
    let ap = direction(x[2], x[3]);
    let b = direction(x[4], x[5]);
    let bp = direction(x[6], x[7]);
    let c = direction(x[8], x[9]);
    let cp = direction(x[10], x[11]);
    let plus = [b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]];
    let minus = [b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]];
    let y_plus = contract_mid(t, plus);
    let y_minus = contract_mid(t, minus);
    bilinear(&y_plus, a, c) + bilinear(&y_minus, a, cp) + bilinear(&y_minus, ap, c)
        - bilinear(&y_plus, ap, cp)
}

/// One Nelder-Mead run minimizing `g`, started on a simplex of edge `step`
/// around `x0`. Returns (best point, best value, iterations consumed).
fn nelder_mead(
    g: &impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, f64, usize) {
    let dim = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| g(p)).collect();

    let mut iters = 0;
    while iters < max_iter {
        iters += 1;

        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if values[worst] - values[best] < tol {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &idx in &order[..dim] {
            for d in 0..dim {
                centroid[d] += simplex[idx][d];
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let reflect: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + alpha * (centroid[d] - simplex[worst][d]))
            .collect();
        let f_reflect = g(&reflect);

        if f_reflect < values[best] {
            let expand: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + gamma * (reflect[d] - centroid[d]))
                .collect();
            let f_expand = g(&expand);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
            continue;
        }

        let contract: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + rho * (simplex[worst][d] - centroid[d]))
            .collect();
        let f_contract = g(&contract);
        if f_contract < values[worst] {
            simplex[worst] = contract;
            values[worst] = f_contract;
            continue;
        }

        for &idx in &order[1..] {
            let shrunk: Vec<f64> = (0..dim)
                .map(|d| simplex[best][d] + sigma * (simplex[idx][d] - simplex[best][d]))
                .collect();
            values[idx] = g(&shrunk);
            simplex[idx] = shrunk;
        }
    }

    let mut best = 0;
    for i in 1..=x0.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best], iters)
}

/// Refine one candidate: repeated Nelder-Mead rounds with shrinking
/// initial simplexes, sharing the per-restart iteration budget.
fn refine(f: &impl Fn(&[f64]) -> f64, x0: &[f64], budget: usize, tol: f64) -> (Vec<f64>, f64) {
    let g = |x: &[f64]| -> f64 { -f(x) };
    let mut x = x0.to_vec();
    let mut fx = g(&x);
    let mut remaining = budget;
    let mut step = 0.4;
    while remaining > 0 {
        let (x1, f1, used) = nelder_mead(&g, &x, step, remaining, tol);
        if f1 < fx {
            x = x1;
            fx = f1;
        }
        remaining = remaining.saturating_sub(used.max(1));
        step *= 0.2;
        if step < 1e-7 {
            break;
        }
    }
    (x, -fx)
}

/// Fixed starting patterns covering the two geometries the random
/// lattice reaches only rarely: all directions polar (with the last pair
/// anti-aligned) and all directions equatorial with the d/d′ azimuth
/// relations, scanned over a global azimuth offset. State-independent.
fn structured_candidates(n_angles: usize) -> Vec<Vec<f64>> {
    let half = FRAC_PI_2;
    let quarter = PI / 4.0;
    let mut out = Vec::new();
    if n_angles == 8 {
        out.push(vec![0.0; 8]);
        for k in 0..16 {
            let psi = k as f64 * TAU / 16.0;
            // a = x, a′ = y, b/b′ at ψ ∓ π/4 on the equator.
            out.push(vec![half, 0.0, half, half, half, psi - quarter, half, psi + quarter]);
            // a = z, a′ = x, b/b′ tilted from ±z toward azimuth ψ.
            out.push(vec![0.0, 0.0, half, 0.0, quarter, psi, quarter, psi + PI]);
        }
    } else {
        let mut polar = vec![0.0; 12];
        polar[10] = PI; // c′ = -c
        out.push(polar.clone());
        polar[8] = PI; // c = -z, c′ = +z
        polar[10] = 0.0;
        out.push(polar);
        for k in 0..16 {
            let psi = k as f64 * TAU / 16.0;
            out.push(vec![
                half, 0.0,            // a
                half, half,           // a′
                half, psi - quarter,  // b
                half, psi + quarter,  // b′
                half, 0.0,            // c
                half, half,           // c′
            ]);
        }
    }
    out
}

/// Draw candidate angle vectors on the coarse lattice, add the structured
/// patterns, evaluate, and return the `restarts` best starting points
/// (ties broken by pool order).
fn top_candidates(
    f: &impl Fn(&[f64]) -> f64,
    n_angles: usize,
    cfg: &MaximizerConfig,
) -> Vec<Vec<f64>> {
    let grid = cfg.coarse_grid_points_per_angle;
    let pool = (cfg.restarts * 64).max(512);
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::with_capacity(pool + 40);
    for candidate in 0..pool {
        let mut rng = SplitMix64::stream(cfg.seed, candidate as u64);
        let mut x = Vec::with_capacity(n_angles);
        for k in 0..n_angles {
            // Even slots are polar angles on [0, π], odd ones azimuths on [0, 2π).
            let span = if k % 2 == 0 { PI } else { TAU };
            let cell = rng.next_below(grid);
            x.push((cell as f64 + 0.5) * span / grid as f64);
        }
        scored.push((f(&x), x));
    }
    for x in structured_candidates(n_angles) {
        scored.push((f(&x), x));
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    scored
        .into_iter()
        .take(cfg.restarts)
        .map(|(_, x)| x)
        .collect()
}

fn run_multistart(
    f: &impl Fn(&[f64]) -> f64,
    n_angles: usize,
    cfg: &MaximizerConfig,
) -> Vec<f64> {
    let starts = top_candidates(f, n_angles, cfg);
    let mut best_x: Option<Vec<f64>> = None;
    let mut best_v = f64::NEG_INFINITY;
    for x0 in &starts {
        let (x, v) = refine(f, x0, cfg.refine_iterations, cfg.tolerance);
        if v > best_v {
            best_v = v;
            best_x = Some(x);
        }
    }
    best_x.expect("restarts >= 1")
}

fn dir_at(x: &[f64], k: usize) -> MeasurementDirection {
    MeasurementDirection::new(x[2 * k], x[2 * k + 1])
}

/// Maximize Tr(ρ F) over all CHSH settings. Deterministic for a fixed
/// seed; the returned value is evaluated through the assembled operator
/// at the wrapped settings.
pub fn maximize_chsh(
    rho: &DensityMatrix,
    cfg: &MaximizerConfig,
) -> Result<(f64, ChshSettings), BellError> {
    cfg.validate()?;
    let t = correlation_matrix(rho)?;
    let f = |x: &[f64]| chsh_objective(&t, x);
    let x = run_multistart(&f, 8, cfg);
    let settings = ChshSettings {
        a: dir_at(&x, 0),
        a_prime: dir_at(&x, 1),
        b: dir_at(&x, 2),
        b_prime: dir_at(&x, 3),
    };
    let value = chsh_expectation(rho, &settings)?;
    Ok((value, settings))
}

/// Maximize Tr(ρ S) over all Svetlichny settings.
pub fn maximize_svetlichny(
    rho: &DensityMatrix,
    cfg: &MaximizerConfig,
) -> Result<(f64, SvetlichnySettings), BellError> {
    cfg.validate()?;
    let t = correlation_tensor3(rho)?;
    let f = |x: &[f64]| svetlichny_objective(&t, x);
    let x = run_multistart(&f, 12, cfg);
    let settings = SvetlichnySettings {
        a: dir_at(&x, 0),
        a_prime: dir_at(&x, 1),
        b: dir_at(&x, 2),
        b_prime: dir_at(&x, 3),
        c: dir_at(&x, 4),
        c_prime: dir_at(&x, 5),
    };
    let value = svetlichny_expectation(rho, &settings)?;
    Ok((value, settings))
}
