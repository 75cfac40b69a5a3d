//! Inner functions on the unit disk: finite Blaschke products, monomials,
//! unimodular constants and finitely many singular atoms.
//!
//! Blaschke factors follow the normalization
//! `b_a(z) = (|a|/a) (a - z) / (1 - conj(a) z)` with `b_0(z) = z`, so
//! `b_a(0) = |a| >= 0`. A zero at the origin is stored as an extra power of
//! the monomial part, never as a factor.

mod coefficients;
mod literal;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use coefficients::{laguerre_minus_one, SAMPLED_MIN_OVERSAMPLE};

/// Zeros with modulus at or above this value are rejected.
pub const MAX_ZERO_MODULUS: f64 = 1.0 - 1e-12;
/// Allowed deviation of the constant from the unit circle.
pub const CONSTANT_MODULUS_TOL: f64 = 1e-12;
/// Evaluation closer than this to an atom is refused.
pub const ATOM_HIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeFactor {
    zero: Complex64,
}

impl BlaschkeFactor {
    pub fn new(zero: Complex64) -> Result<Self> {
        if !(zero.re.is_finite() && zero.im.is_finite()) {
            return Err(Error::InvalidSymbol(format!("non-finite zero {zero}")));
        }
        if zero.norm() >= MAX_ZERO_MODULUS {
            return Err(Error::InvalidSymbol(format!(
                "Blaschke zero {zero} must satisfy |a| < 1 - 1e-12"
            )));
        }
        Ok(Self { zero })
    }

    pub fn zero(&self) -> Complex64 {
        self.zero
    }

    /// `|a|/a`, or 1 for the origin.
    fn phase(&self) -> Complex64 {
        let r = self.zero.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(r, 0.0) / self.zero
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.zero == Complex64::new(0.0, 0.0) {
            return z;
        }
        self.phase() * (self.zero - z) / (Complex64::new(1.0, 0.0) - self.zero.conj() * z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// Boundary angle in `[0, 2π)`.
    pub angle: f64,
    /// Point mass, strictly positive.
    pub mass: f64,
}

impl Atom {
    pub fn new(angle: f64, mass: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidSymbol(format!("non-finite atom angle {angle}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidSymbol(format!("atom mass {mass} must be positive")));
        }
        let angle = if (0.0..TAU).contains(&angle) {
            angle
        } else {
            angle.rem_euclid(TAU)
        };
        Ok(Self { angle, mass })
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// `exp(mass (z + ζ) / (z - ζ))`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zeta = self.point();
        ((z + zeta) / (z - zeta) * self.mass).exp()
    }

    /// `exp(-i mass cot((θ - angle) / 2))`, the value at `e^{iθ}`, unimodular
    /// by construction.
    pub fn eval_boundary(&self, theta: f64) -> Complex64 {
        let half = 0.5 * (theta - self.angle);
        Complex64::from_polar(1.0, -self.mass * half.cos() / half.sin())
    }
}

/// Finitely many atoms, kept sorted by angle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtomicSingularPart {
    atoms: Vec<Atom>,
}

impl AtomicSingularPart {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        atoms.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        for pair in atoms.windows(2) {
            if pair[0].angle == pair[1].angle {
                return Err(Error::InvalidSymbol(format!("duplicate atom angle {}", pair[0].angle)));
            }
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn merged(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for atom in &other.atoms {
            match atoms.iter_mut().find(|a| a.angle == atom.angle) {
                Some(existing) => existing.mass += atom.mass,
                None => atoms.push(*atom),
            }
        }
        atoms.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        Self { atoms }
    }
}

/// `c · z^n · Π b_{a_i}(z) · Π exp(μ_j (z + ζ_j)/(z - ζ_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSymbol {
    constant: Complex64,
    monomial_power: u32,
    factors: Vec<BlaschkeFactor>,
    singular: AtomicSingularPart,
}

impl InnerSymbol {
    pub fn new(constant: Complex64, monomial_power: u32, zeros: &[Complex64], atoms: Vec<Atom>) -> Result<Self> {
        if !(constant.re.is_finite() && constant.im.is_finite()) || (constant.norm() - 1.0).abs() > CONSTANT_MODULUS_TOL
        {
            return Err(Error::InvalidSymbol(format!("constant {constant} is not unimodular")));
        }
        let mut power = monomial_power;
        let mut factors = Vec::with_capacity(zeros.len());
        for &zero in zeros {
            if zero == Complex64::new(0.0, 0.0) {
                power += 1;
            } else {
                factors.push(BlaschkeFactor::new(zero)?);
            }
        }
        Ok(Self {
            constant,
            monomial_power: power,
            factors,
            singular: AtomicSingularPart::new(atoms)?,
        })
    }

    /// The constant function 1.
    pub fn identity() -> Self {
        Self {
            constant: Complex64::new(1.0, 0.0),
            monomial_power: 0,
            factors: Vec::new(),
            singular: AtomicSingularPart::default(),
        }
    }

    pub fn monomial(power: u32) -> Self {
        Self {
            monomial_power: power,
            ..Self::identity()
        }
    }

    pub fn blaschke(zeros: &[Complex64]) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), 0, zeros, Vec::new())
    }

    pub fn blaschke_real(zeros: &[f64]) -> Result<Self> {
        let zeros: Vec<Complex64> = zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::blaschke(&zeros)
    }

    pub fn singular_atom(angle: f64, mass: f64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), 0, &[], vec![Atom::new(angle, mass)?])
    }

    pub fn with_constant(mut self, constant: Complex64) -> Result<Self> {
        if (constant.norm() - 1.0).abs() > CONSTANT_MODULUS_TOL {
            return Err(Error::InvalidSymbol(format!("constant {constant} is not unimodular")));
        }
        self.constant = constant;
        Ok(self)
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    pub fn monomial_power(&self) -> u32 {
        self.monomial_power
    }

    pub fn factors(&self) -> &[BlaschkeFactor] {
        &self.factors
    }

    pub fn singular(&self) -> &AtomicSingularPart {
        &self.singular
    }

    /// Number of zeros in the disk counted with multiplicity.
    pub fn blaschke_degree(&self) -> usize {
        self.monomial_power as usize + self.factors.len()
    }

    pub fn is_rational(&self) -> bool {
        self.singular.is_empty()
    }

    /// Ratio of geometric decay of the coefficients: `max |a_i|` over the
    /// Blaschke zeros, 0 for a pure monomial, `None` with a singular part.
    pub fn tail_ratio(&self) -> Option<f64> {
        if !self.is_rational() {
            return None;
        }
        Some(self.factors.iter().map(|f| f.zero.norm()).fold(0.0, f64::max))
    }

    /// Power `n` when the symbol is `c·z^n`: no Blaschke factors and no atoms.
    pub fn is_monomial(&self) -> Option<u32> {
        (self.factors.is_empty() && self.singular.is_empty()).then_some(self.monomial_power)
    }

    /// Grid test: finds the winding number `n` of the boundary values and
    /// checks that `Φ(e^{iθ}) e^{-inθ}` is constant within `tol`.
    pub fn is_monomial_numerically(&self, grid: usize, tol: f64) -> Option<u32> {
        let grid = grid.max(8);
        let offset = 0.5 * TAU / grid as f64;
        let mut values = Vec::with_capacity(grid);
        for m in 0..grid {
            let theta = offset + TAU * m as f64 / grid as f64;
            values.push(self.eval(theta).ok()?);
        }
        let mut winding = 0.0;
        for m in 0..grid {
            let next = values[(m + 1) % grid];
            winding += (next / values[m]).arg();
        }
        let n = (winding / TAU).round();
        if n < 0.0 {
            return None;
        }
        let n = n as i32;
        let reference = values[0] * Complex64::from_polar(1.0, -(n as f64) * offset);
        let max_dev = values
            .iter()
            .enumerate()
            .map(|(m, v)| {
                let theta = offset + TAU * m as f64 / grid as f64;
                (v * Complex64::from_polar(1.0, -(n as f64) * theta) - reference).norm()
            })
            .fold(0.0, f64::max);
        (max_dev < tol).then_some(n as u32)
    }

    /// Value at an interior point (or a boundary point away from atoms,
    /// without the hit check).
    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        let mut value = self.constant * z.powu(self.monomial_power);
        for f in &self.factors {
            value *= f.eval(z);
        }
        for atom in self.singular.atoms() {
            value *= atom.eval(z);
        }
        value
    }

    /// Boundary value `Φ(e^{iθ})`.
    pub fn eval(&self, theta: f64) -> Result<Complex64> {
        if !theta.is_finite() {
            return Err(Error::InvalidSymbol(format!("non-finite angle {theta}")));
        }
        for atom in self.singular.atoms() {
            let d = (theta - atom.angle).rem_euclid(TAU);
            if d.min(TAU - d) < ATOM_HIT_TOL {
                return Err(Error::SingularAtomHit {
                    angle: theta,
                    atom: atom.angle,
                });
            }
        }
        Ok(self.boundary_value(theta))
    }

    /// `Φ(e^{iθ})` without the atom check.
    pub(crate) fn boundary_value(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut value = self.constant * z.powu(self.monomial_power);
        for f in &self.factors {
            value *= f.eval(z);
        }
        for atom in self.singular.atoms() {
            value *= atom.eval_boundary(theta);
        }
        value
    }

    /// Pointwise product. Factor lists concatenate, atoms merge by angle.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self {
            constant: self.constant * other.constant,
            monomial_power: self.monomial_power + other.monomial_power,
            factors,
            singular: self.singular.merged(&other.singular),
        }
    }

    pub fn power(&self, exponent: u32) -> Self {
        (0..exponent).fold(Self::identity(), |acc, _| acc.multiply(self))
    }
}
