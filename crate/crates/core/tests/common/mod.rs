//! Test-side oracles that share no code with the library's kernel.
//!
//! The field correlator is built from the Feynman-gauge potential correlator
//! `<A_μ(x) A_ν(x')> = η_μν / (π σ)`, `σ = η(Δ, Δ)`, `Δ = x - x'`, with the
//! comoving electric field `E_i = F_{μν} e_i^μ u^ν` projected on the tetrad of
//! each worldline. Metric signature is `(-, +, +, +)`.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use std::f64::consts::PI;

type V4 = [C; 4];

const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

fn dot(p: &V4, q: &V4) -> C {
    (0..4).map(|m| ETA[m] * p[m] * q[m]).sum()
}

fn real(v: [f64; 4]) -> V4 {
    v.map(|x| C::new(x, 0.0))
}

/// Event, four-velocity and `x` tetrad leg at complex proper time `tau`.
fn frame(a: f64, z: f64, tau: C) -> (V4, V4, V4) {
    let zero = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    if a == 0.0 {
        return ([tau, zero, zero, C::new(z, 0.0)], [one, zero, zero, zero], [zero, one, zero, zero]);
    }
    let (sh, ch) = ((a * tau).sinh(), (a * tau).cosh());
    // x shifted by -1/a; (cosh - 1) written as 2 sinh² to keep small a accurate
    let half = (0.5 * a * tau).sinh();
    let event = [sh / a, 2.0 * half * half / a, zero, C::new(z, 0.0)];
    (event, [ch, sh, zero, zero], [sh, ch, zero, zero])
}

/// `<E_i(τ=0 on X) E_j(τ=-s on Y)>` for atoms riding hyperbolas of equal `a`
/// at transverse heights `z_x`, `z_y`.
pub fn field_correlator(a: f64, z_x: f64, z_y: f64, s: C) -> [[C; 3]; 3] {
    let (x1, u1, ex1) = frame(a, z_x, C::new(0.0, 0.0));
    let (x2, u2, ex2) = frame(a, z_y, -s);
    let delta: V4 = std::array::from_fn(|m| x1[m] - x2[m]);
    let sigma = dot(&delta, &delta);
    let d1 = -1.0 / (PI * sigma * sigma);
    let d2 = 2.0 / (PI * sigma * sigma * sigma);
    // p(v, w) = v^μ w^ρ ∂_μ ∂'_ρ D
    let p = |v: &V4, w: &V4| -(2.0 * dot(v, w) * d1 + 4.0 * dot(v, &delta) * dot(w, &delta) * d2);
    let legs = |ex: V4| -> [V4; 3] {
        [ex, real([0.0, 0.0, 1.0, 0.0]), real([0.0, 0.0, 0.0, 1.0])]
    };
    let (e1, e2) = (legs(ex1), legs(ex2));
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (ei, ej) = (&e1[i], &e2[j]);
            dot(&u1, &u2) * p(ei, ej) - dot(&u1, ej) * p(ei, &u2) - dot(ei, &u2) * p(&u1, ej)
                + dot(ei, ej) * p(&u1, &u2)
        })
    })
}

/// Proper-time delay at which `Y`'s past light cone is crossed.
pub fn pole(a: f64, d: f64) -> f64 {
    if a == 0.0 {
        d.abs()
    } else {
        2.0 / a * (0.5 * a * d.abs()).asinh()
    }
}

/// `(1/2πi) ∮ f` on a circle of radius `r` around `center`, trapezoid rule.
pub fn residue(f: impl Fn(C) -> C, center: f64, r: f64, nodes: usize) -> C {
    (0..nodes)
        .map(|k| {
            let w = C::from_polar(r, 2.0 * PI * k as f64 / nodes as f64);
            f(center + w) * w
        })
        .sum::<C>()
        / nodes as f64
}

/// Light-cone residue contribution `π Res[μ_X·<E E>·μ_Y cos(ω s)]` of one
/// ordered pair of worldlines at heights `z_x`, `z_y`.
pub fn residue_term(mx: [f64; 3], zx: f64, my: [f64; 3], zy: f64, omega: f64, a: f64) -> f64 {
    let s_star = pole(a, zx - zy);
    let mut r = s_star.min(1.0 / omega);
    if a > 0.0 {
        r = r.min(PI / a);
    }
    r *= 0.5;
    let f = |s: C| {
        let g = field_correlator(a, zx, zy, s);
        let mut acc = C::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += mx[i] * g[i][j] * my[j];
            }
        }
        acc * (omega * s).cos()
    };
    PI * residue(f, s_star, r, 256).re
}

/// Resonance energy of the Bell-type pair (`sign = ±1`), summed over both
/// orderings of the atoms.
pub fn residue_energy(mu_a: [f64; 3], mu_b: [f64; 3], sign: f64, z: f64, omega: f64, a: f64) -> f64 {
    sign * (residue_term(mu_a, 0.0, mu_b, z, omega, a) + residue_term(mu_b, z, mu_a, 0.0, omega, a))
}

/// Plate contribution for atoms at heights `z_a`, `z_b`: each atom paired with
/// the other's image at `-z` carrying the dipole `(-μx, -μy, μz)`.
pub fn residue_plate_energy(mu_a: [f64; 3], mu_b: [f64; 3], sign: f64, z_a: f64, z_b: f64, omega: f64, a: f64) -> f64 {
    let image = |m: [f64; 3]| [-m[0], -m[1], m[2]];
    sign * (residue_term(mu_a, z_a, image(mu_b), -z_b, omega, a) + residue_term(mu_b, z_b, image(mu_a), -z_a, omega, a))
}

/// `max_k |E_k - F_k| / max_k |F_k|` over a sample set.
pub fn envelope_deviation(engine: &[f64], reference: &[f64]) -> f64 {
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    engine.iter().zip(reference).fold(0.0f64, |m, (e, f)| m.max((e - f).abs())) / scale
}

pub fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}
