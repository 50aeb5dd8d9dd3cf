//! Comoving-frame electric-field Wightman tensor between two co-accelerated atoms.
//!
//! Both atoms follow hyperbolas of proper acceleration `a` along `x` and are
//! separated along `z` by `d = z_X - z_Y`. With the Feynman-gauge potential
//! correlator `<A_μ(x) A_ν(x')> = η_μν / (π σ)` (Gaussian units,
//! `σ = Δx·Δx`, signature `-+++`) and the electric field read off in each
//! atom's instantaneous rest frame, `<E_i(x_X(τ)) E_j(x_Y(τ - s))>` depends only
//! on the proper-time delay `s`:
//!
//! ```text
//! G_xx = 4W' - 4N²W''          G_yy = 4CW' - 4P²W''
//! G_zz = 4CW' + 4Cd²W'' - 4P²W''
//! G_xz = 4dQW''                G_zx = -4dQW''
//! N = 2 sinh(as/2)/a,  C = cosh(as),  P² = N²(C+1)/2,  Q = aN²/2
//! σ = d² - N²,  W' = -1/(πσ²),  W'' = 2/(πσ³)
//! ```
//!
//! Other components vanish. The Wightman function is obtained at `s - iε`.

use num_complex::Complex64;

/// Proper-time delay at which the two worldlines are light-like separated.
pub fn light_cone_delay(a: f64, separation: f64) -> f64 {
    let d = separation.abs();
    let x = 0.5 * a * d;
    if x < 1e-8 {
        d * (1.0 - x * x / 6.0)
    } else {
        2.0 * x.asinh() / a
    }
}

/// `sinh(x)/x`
fn sinhc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// Beyond `a·Re(s)` of this size the tensor has decayed by `e^{-a s}` below any
/// representable contribution.
const DECAY_CUTOFF: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTensor {
    pub xx: Complex64,
    pub yy: Complex64,
    pub zz: Complex64,
    pub xz: Complex64,
    pub zx: Complex64,
}

impl FieldTensor {
    fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { xx: z, yy: z, zz: z, xz: z, zx: z }
    }

    /// `μ¹_ℓ G_ℓm μ²_m` split into diagonal and off-diagonal parts.
    pub fn contract(&self, first: &[f64; 3], second: &[f64; 3]) -> (Complex64, Complex64) {
        let diag = self.xx * (first[0] * second[0]) + self.yy * (first[1] * second[1]) + self.zz * (first[2] * second[2]);
        let off = self.xz * (first[0] * second[2]) + self.zx * (first[2] * second[0]);
        (diag, off)
    }
}

/// Field correlations for one ordered pair of worldlines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldKernel {
    pub acceleration: f64,
    /// Signed `z_X - z_Y`.
    pub separation: f64,
    /// Light-cone delay `s*`.
    pub delay: f64,
}

impl FieldKernel {
    pub fn new(acceleration: f64, separation: f64) -> Self {
        Self { acceleration, separation, delay: light_cone_delay(acceleration, separation) }
    }

    /// Tensor at complex delay `s = s* + offset`. Parametrising by the offset
    /// keeps `σ` free of cancellation near the light cone.
    pub fn tensor_at_offset(&self, offset: Complex64) -> FieldTensor {
        let a = self.acceleration;
        let d = self.separation;
        let dist = d.abs();
        let s = offset + self.delay;
        if a * s.re > DECAY_CUTOFF {
            return FieldTensor::zero();
        }
        let n = s * sinhc(s * (0.5 * a));
        // |d| - N = -offset · sinhc(a·offset/4) · cosh(a(2s* + offset)/4)
        let gap = -offset * sinhc(offset * (0.25 * a)) * ((offset + 2.0 * self.delay) * (0.25 * a)).cosh();
        let sigma = gap * (n + dist);
        let n2 = n * n;
        let c = 1.0 + n2 * (0.5 * a * a);
        // factor out W' so that only bounded ratios multiply growing C
        let base = 1.0 / (std::f64::consts::PI * sigma * sigma);
        let r = n2 / sigma;
        let p2_over = r * (c + 1.0) * 0.5;
        let q_over = r * (0.5 * a);
        FieldTensor {
            xx: base * (-4.0 - 8.0 * r),
            yy: base * (-4.0 * c - 8.0 * p2_over),
            zz: base * (-4.0 * c + 8.0 * c * (d * d) / sigma - 8.0 * p2_over),
            xz: base * (8.0 * d * q_over),
            zx: base * (-8.0 * d * q_over),
        }
    }

    /// Tensor at real delay `s` shifted to `s - iε`.
    pub fn tensor(&self, s: f64, epsilon: f64) -> FieldTensor {
        self.tensor_at_offset(Complex64::new(s - self.delay, -epsilon))
    }
}
