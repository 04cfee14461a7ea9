//! Random matrices: circular complex Gaussian draws and Haar unitaries.
//!
//! Two independent Haar samplers live here. [`sample_haar_recursive`] builds
//! the unitary from `M²` angular parameters, one recursion level at a time:
//!
//! ```text
//! U_n = D_n(φ) · V_n(θ) · diag(1, U_{n-1}),    V_n(θ) = J_{n-1,n} ··· J_{1,2}
//! ```
//!
//! [`sample_haar_qr_oracle`] orthonormalizes a Gaussian matrix and is only
//! used to cross-check the first.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// One CN(0,1) draw: independent real and imaginary parts of variance 1/2.
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Fills `out` with i.i.d. CN(0,1) entries, in order.
pub fn fill_complex_gaussian<R: Rng + ?Sized>(out: &mut [Complex64], rng: &mut R) {
    for z in out {
        *z = complex_gaussian(rng);
    }
}

/// `rows × cols` matrix with i.i.d. CN(0,1) entries, drawn in column-major order.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(format!(
            "gaussian matrix needs positive dimensions, got {rows}x{cols}"
        )));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    fill_complex_gaussian(m.as_mut_slice(), rng);
    Ok(m)
}

/// Angle on `[0, π/2]` with density proportional to `sin^k θ`.
///
/// `cos²θ` is Beta(1/2, (k+1)/2) under that density, so no rejection step
/// and no normalizing constant is needed.
pub fn sample_sin_power_angle<R: Rng + ?Sized>(k: u32, rng: &mut R) -> f64 {
    let beta = Beta::new(0.5, (f64::from(k) + 1.0) / 2.0).expect("shape parameters are positive");
    let s: f64 = beta.sample(rng);
    s.sqrt().clamp(0.0, 1.0).acos()
}

/// The `n × n` identity with the plane rotation `[[cos θ, −sin θ], [sin θ, cos θ]]`
/// at rows/columns `(i, i+1)`, 1-based.
pub fn givens_rotation(i: usize, theta: f64, n: usize) -> Result<ComplexMatrix> {
    if i == 0 || i >= n {
        return Err(Error::Config(format!(
            "givens index must satisfy 1 <= i <= n-1, got i={i}, n={n}"
        )));
    }
    let mut j = ComplexMatrix::identity(n, n);
    let (s, c) = theta.sin_cos();
    let (a, b) = (i - 1, i);
    j[(a, a)] = Complex64::new(c, 0.0);
    j[(a, b)] = Complex64::new(-s, 0.0);
    j[(b, a)] = Complex64::new(s, 0.0);
    j[(b, b)] = Complex64::new(c, 0.0);
    Ok(j)
}

/// Distribution of the rotation angles inside one recursion level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleLaw {
    /// `sin²θ_i ~ Beta(n−i, 1)` at an order-`n` level, i.e. density
    /// `∝ cos θ · sin^{2(n−i)−1} θ`. Makes `D_n V_n e_1` uniform on the
    /// complex unit sphere, which the recursion needs to be Haar.
    #[default]
    Sphere,
    /// Density `∝ sin^{n−1−i} θ_i` (exponents `n−2, …, 1, 0`). Kept for
    /// comparison only: it does not yield Haar matrices (already for `n = 2`,
    /// `|U₁₁|²` comes out arcsine- rather than uniformly distributed).
    SinPower,
}

/// Angular parameters of one recursion level of order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarLevel {
    /// `n` phases in `[0, 2π)`.
    pub phases: Vec<f64>,
    /// `n − 1` angles in `[0, π/2]`.
    pub angles: Vec<f64>,
}

/// The full `M²` parameter set of an `M × M` unitary, outermost level first.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarAngles {
    order: usize,
    levels: Vec<HaarLevel>,
}

impl HaarAngles {
    pub fn new(order: usize, levels: Vec<HaarLevel>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("unitary order must be at least 1".into()));
        }
        if levels.len() != order {
            return Err(Error::Config(format!(
                "order {order} needs {order} recursion levels, got {}",
                levels.len()
            )));
        }
        for (depth, level) in levels.iter().enumerate() {
            let n = order - depth;
            if level.phases.len() != n || level.angles.len() != n - 1 {
                return Err(Error::Config(format!(
                    "level of order {n} needs {n} phases and {} angles",
                    n - 1
                )));
            }
            if level.phases.iter().any(|p| !(0.0..TAU).contains(p)) {
                return Err(Error::Input("phases must lie in [0, 2π)".into()));
            }
            if level.angles.iter().any(|a| !(0.0..=FRAC_PI_2).contains(a)) {
                return Err(Error::Input("angles must lie in [0, π/2]".into()));
            }
        }
        Ok(Self { order, levels })
    }

    pub fn sample<R: Rng + ?Sized>(order: usize, law: AngleLaw, rng: &mut R) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("unitary order must be at least 1".into()));
        }
        let levels = (1..=order)
            .rev()
            .map(|n| {
                let phases = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
                let angles = (1..n)
                    .map(|i| match law {
                        AngleLaw::Sphere => {
                            let u: f64 = rng.random();
                            let sin_sq = u.powf(1.0 / (n - i) as f64);
                            sin_sq.sqrt().min(1.0).asin()
                        }
                        AngleLaw::SinPower => sample_sin_power_angle((n - 1 - i) as u32, rng),
                    })
                    .collect();
                HaarLevel { phases, angles }
            })
            .collect();
        Ok(Self { order, levels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn levels(&self) -> &[HaarLevel] {
        &self.levels
    }

    pub fn parameter_count(&self) -> usize {
        self.levels.iter().map(|l| l.phases.len() + l.angles.len()).sum()
    }

    /// Evaluates the recursion from the innermost (order 1) level outwards.
    pub fn to_unitary(&self) -> ComplexMatrix {
        let mut inner = ComplexMatrix::identity(0, 0);
        for level in self.levels.iter().rev() {
            let n = level.phases.len();
            // V_n = J_{n-1,n} ··· J_{1,2}, applied as successive row rotations
            let mut v = ComplexMatrix::identity(n, n);
            for (idx, &theta) in level.angles.iter().enumerate() {
                let (s, c) = theta.sin_cos();
                for col in 0..n {
                    let a = v[(idx, col)];
                    let b = v[(idx + 1, col)];
                    v[(idx, col)] = a * c - b * s;
                    v[(idx + 1, col)] = a * s + b * c;
                }
            }
            for (row, &phi) in level.phases.iter().enumerate() {
                let phase = Complex64::from_polar(1.0, phi);
                for col in 0..n {
                    v[(row, col)] *= phase;
                }
            }
            let mut block = ComplexMatrix::identity(n, n);
            block.view_mut((1, 1), (n - 1, n - 1)).copy_from(&inner);
            inner = v * block;
        }
        inner
    }
}

/// Haar unitary from the recursive angular construction.
pub fn sample_haar_recursive<R: Rng + ?Sized>(order: usize, rng: &mut R) -> Result<ComplexMatrix> {
    Ok(HaarAngles::sample(order, AngleLaw::Sphere, rng)?.to_unitary())
}

/// Haar unitary from the QR factorization of a Gaussian matrix, with the
/// triangular factor's diagonal forced real positive.
pub fn sample_haar_qr_oracle<R: Rng + ?Sized>(order: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let g = sample_complex_gaussian(order, order, rng)?;
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..order {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm == 0.0 {
            return Err(Error::Numerical("singular gaussian draw in QR oracle".into()));
        }
        let phase = d / norm;
        for i in 0..order {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// `‖U*U − I‖_∞` (maximum absolute row sum).
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    let gram = u.adjoint() * u;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let target = if i == j { 1.0 } else { 0.0 };
                    (gram[(i, j)] - Complex64::new(target, 0.0)).norm()
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}
