//! Discrete Klein-Gordon mode bases on the periodic box.
//!
//! Positive-norm modes are plane waves
//!
//! ```text
//! phi_k^+(t, x) = exp(-i (omega_k t - k.x)) / sqrt(2 omega_k L^d),
//! omega_k = sqrt(|k|^2 + m^2),   k_j = 2 pi n_j / L,
//! ```
//!
//! and negative-norm modes are their complex conjugates. All derivatives are
//! evaluated analytically (multiplication by +-i omega, +-i k_j); finite
//! differences appear only in tests. The covariant inner product on a
//! constant-time slice is approximated by the periodic trapezoid rule, which
//! is exact for trigonometric polynomials below the Nyquist count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::geometry::{BoxGeometry, Derivative, SpacetimePoint};

/// Positive- or negative-norm branch of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeBranch {
    Positive,
    Negative,
}

/// One discrete mode: integer label n, wave vector k = 2 pi n / L, frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub index: Vec<i64>,
    pub wave: Vec<f64>,
    pub omega: f64,
}

/// Finite family of box modes together with field parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    geometry: BoxGeometry,
    mass: f64,
    curvature_coupling: f64,
    modes: Vec<Mode>,
}

impl ModeBasis {
    /// All wave vectors with |n_j| <= max_index, excluding k = 0 when m = 0,
    /// sorted lexicographically by integer index.
    pub fn build(
        geometry: BoxGeometry,
        mass: f64,
        curvature_coupling: f64,
        max_index: usize,
    ) -> Result<Self> {
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "mass must be finite and non-negative, got {mass}"
            )));
        }
        if !curvature_coupling.is_finite() {
            return Err(CoreError::InvalidParameter("curvature coupling must be finite".into()));
        }
        if mass == 0.0 && max_index == 0 {
            return Err(CoreError::MasslessZeroMode);
        }

        let d = geometry.spatial_dimension;
        let mut indices: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..d {
            let mut next = Vec::new();
            for prefix in &indices {
                for n in -(max_index as i64)..=(max_index as i64) {
                    let mut v = prefix.clone();
                    v.push(n);
                    next.push(v);
                }
            }
            indices = next;
        }
        indices.sort();

        let mut modes = Vec::new();
        for n in indices {
            if mass == 0.0 && n.iter().all(|&c| c == 0) {
                continue;
            }
            modes.push(Self::make_mode(&geometry, mass, n));
        }
        Ok(Self { geometry, mass, curvature_coupling, modes })
    }

    fn make_mode(geometry: &BoxGeometry, mass: f64, index: Vec<i64>) -> Mode {
        let wave: Vec<f64> = index
            .iter()
            .map(|&n| 2.0 * std::f64::consts::PI * n as f64 / geometry.box_length)
            .collect();
        let k_sq: f64 = wave.iter().map(|k| k * k).sum();
        Mode { index, wave, omega: (k_sq + mass * mass).sqrt() }
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn curvature_coupling(&self) -> f64 {
        self.curvature_coupling
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest |n_j| present in the basis.
    pub fn max_abs_index(&self) -> usize {
        self.modes
            .iter()
            .flat_map(|m| m.index.iter().map(|n| n.unsigned_abs() as usize))
            .max()
            .unwrap_or(0)
    }

    pub fn check_mode(&self, mode: usize) -> Result<&Mode> {
        self.modes.get(mode).ok_or(CoreError::BadModeIndex { index: mode, len: self.modes.len() })
    }

    fn check_derivative(&self, deriv: Derivative) -> Result<()> {
        if let Some(c) = deriv.max_coordinate() {
            self.geometry.check_component(c)?;
        }
        Ok(())
    }

    /// Closed-form value of a (derivative of a) mode function at a point.
    pub fn mode_value(
        &self,
        mode: usize,
        branch: ModeBranch,
        deriv: Derivative,
        p: &SpacetimePoint,
    ) -> Result<Complex64> {
        let m = self.check_mode(mode)?;
        self.check_derivative(deriv)?;
        if p.x.len() != self.geometry.spatial_dimension {
            return Err(CoreError::BadGeometry(format!(
                "point has {} spatial coordinates, geometry has {}",
                p.x.len(),
                self.geometry.spatial_dimension
            )));
        }

        let k_dot_x: f64 = m.wave.iter().zip(&p.x).map(|(k, x)| k * x).sum();
        let phase = m.omega * p.t - k_dot_x;
        let norm = 1.0 / (2.0 * m.omega * self.geometry.slice_volume()).sqrt();
        let base = match branch {
            ModeBranch::Positive => Complex64::from_polar(norm, -phase),
            ModeBranch::Negative => Complex64::from_polar(norm, phase),
        };
        Ok(derivative_factor(m, branch, deriv) * base)
    }

    /// Residual of the field equation, (-box + m^2) phi, at a point. Zero to
    /// rounding for every basis mode; nonzero when a frequency is corrupted.
    pub fn kg_residual(&self, mode: usize, p: &SpacetimePoint) -> Result<Complex64> {
        let m = self.check_mode(mode)?;
        let k_sq: f64 = m.wave.iter().map(|k| k * k).sum();
        let box_eigenvalue = m.omega * m.omega - k_sq;
        let value = self.mode_value(mode, ModeBranch::Positive, Derivative::None, p)?;
        Ok((self.mass * self.mass - box_eigenvalue) * value)
    }

    /// View of one mode as a slice solution for inner products.
    pub fn mode_function(&self, mode: usize, branch: ModeBranch) -> Result<ModeFunction<'_>> {
        self.check_mode(mode)?;
        Ok(ModeFunction { basis: self, mode, branch })
    }

    /// Default quadrature count, exact for all pairwise mode products.
    pub fn default_quadrature_points(&self) -> usize {
        4 * self.max_abs_index() + 1
    }

    /// Copy of the basis with one frequency shifted off-shell. Used as a
    /// negative control in validation: the shifted mode no longer solves the
    /// field equation and `kg_residual` picks that up.
    pub fn with_frequency_offset(&self, mode: usize, offset: f64) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        out.modes[mode].omega += offset;
        if !(out.modes[mode].omega > 0.0) {
            return Err(CoreError::InvalidParameter("frequency offset makes omega non-positive".into()));
        }
        Ok(out)
    }

    /// Serializable description (integer indices only; k and omega rebuild).
    pub fn to_spec(&self) -> BasisSpec {
        BasisSpec {
            spatial_dimension: self.geometry.spatial_dimension,
            box_length: self.geometry.box_length,
            mass: self.mass,
            curvature_coupling: self.curvature_coupling,
            mode_indices: self.modes.iter().map(|m| m.index.clone()).collect(),
        }
    }

    pub fn from_spec(spec: &BasisSpec) -> Result<Self> {
        let geometry = BoxGeometry::new(spec.spatial_dimension, spec.box_length)?;
        if !(spec.mass >= 0.0) || !spec.mass.is_finite() {
            return Err(CoreError::InvalidParameter("mass must be finite and non-negative".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut modes = Vec::new();
        for n in &spec.mode_indices {
            if n.len() != spec.spatial_dimension {
                return Err(CoreError::BadSerialization(format!(
                    "mode index {:?} has wrong dimension",
                    n
                )));
            }
            if spec.mass == 0.0 && n.iter().all(|&c| c == 0) {
                return Err(CoreError::MasslessZeroMode);
            }
            if !seen.insert(n.clone()) {
                return Err(CoreError::BadSerialization(format!(
                    "duplicate wave vector {:?} in mode list",
                    n
                )));
            }
            modes.push(Self::make_mode(&geometry, spec.mass, n.clone()));
        }
        Ok(Self {
            geometry,
            mass: spec.mass,
            curvature_coupling: spec.curvature_coupling,
            modes,
        })
    }
}

/// JSON-facing description of a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub spatial_dimension: usize,
    pub box_length: f64,
    pub mass: f64,
    pub curvature_coupling: f64,
    pub mode_indices: Vec<Vec<i64>>,
}

/// Multiplicative factor turning a mode value into its derivative.
fn derivative_factor(mode: &Mode, branch: ModeBranch, deriv: Derivative) -> Complex64 {
    let i = Complex64::i();
    let first = |a: usize| -> Complex64 {
        let f = match a {
            0 => -i * mode.omega,
            j => i * mode.wave[j - 1],
        };
        match branch {
            ModeBranch::Positive => f,
            ModeBranch::Negative => f.conj(),
        }
    };
    match deriv {
        Derivative::None => Complex64::new(1.0, 0.0),
        Derivative::First(a) => first(a),
        Derivative::Second(a, b) => first(a) * first(b),
        // box = -d_t^2 + sum_j d_j^2; on either branch the factor is
        // omega^2 - |k|^2, which equals m^2 exactly when on-shell.
        Derivative::Dalembertian => {
            let k_sq: f64 = mode.wave.iter().map(|k| k * k).sum();
            Complex64::new(mode.omega * mode.omega - k_sq, 0.0)
        }
    }
}

/// A solution restricted to constant-time slices: enough for the covariant
/// inner product, which only needs values and time derivatives on a slice.
pub trait SliceSolution {
    fn value(&self, p: &SpacetimePoint) -> Complex64;
    fn time_derivative(&self, p: &SpacetimePoint) -> Complex64;
}

/// A single basis mode as a slice solution.
pub struct ModeFunction<'a> {
    basis: &'a ModeBasis,
    mode: usize,
    branch: ModeBranch,
}

impl SliceSolution for ModeFunction<'_> {
    fn value(&self, p: &SpacetimePoint) -> Complex64 {
        self.basis
            .mode_value(self.mode, self.branch, Derivative::None, p)
            .expect("mode index validated at construction")
    }

    fn time_derivative(&self, p: &SpacetimePoint) -> Complex64 {
        self.basis
            .mode_value(self.mode, self.branch, Derivative::First(0), p)
            .expect("mode index validated at construction")
    }
}

/// Finite linear combination of basis modes; handy for round-trip tests and
/// for reconstructing decomposed solutions.
pub struct ModeCombination<'a> {
    pub basis: &'a ModeBasis,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl SliceSolution for ModeCombination<'_> {
    fn value(&self, p: &SpacetimePoint) -> Complex64 {
        self.eval(Derivative::None, p)
    }

    fn time_derivative(&self, p: &SpacetimePoint) -> Complex64 {
        self.eval(Derivative::First(0), p)
    }
}

impl ModeCombination<'_> {
    fn eval(&self, deriv: Derivative, p: &SpacetimePoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (cp, cm)) in self.plus.iter().zip(&self.minus).enumerate() {
            if cp.norm_sqr() != 0.0 {
                acc += cp * self.basis.mode_value(i, ModeBranch::Positive, deriv, p).unwrap();
            }
            if cm.norm_sqr() != 0.0 {
                acc += cm * self.basis.mode_value(i, ModeBranch::Negative, deriv, p).unwrap();
            }
        }
        acc
    }
}

/// Uniform periodic grid on the t = const slice, Q points per dimension.
pub(crate) fn slice_grid(geometry: &BoxGeometry, q: usize, t: f64) -> Vec<SpacetimePoint> {
    let d = geometry.spatial_dimension;
    let h = geometry.box_length / q as f64;
    let total = q.pow(d as u32);
    let mut points = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut x = Vec::with_capacity(d);
        for _ in 0..d {
            x.push((rem % q) as f64 * h);
            rem /= q;
        }
        points.push(SpacetimePoint::new(t, x));
    }
    points
}

/// Covariant inner product i Int (g* dt f - (dt g*) f) dx on the slice
/// t = t_slice, by the periodic trapezoid rule with `quadrature_points`
/// points per dimension. Exact for band-limited integrands below Nyquist.
pub fn kg_inner_product(
    f: &dyn SliceSolution,
    g: &dyn SliceSolution,
    basis: &ModeBasis,
    t_slice: f64,
    quadrature_points: usize,
) -> Result<Complex64> {
    let needed = 2 * basis.max_abs_index() + 1;
    if quadrature_points < needed {
        return Err(CoreError::InsufficientQuadrature { needed, got: quadrature_points });
    }
    let geometry = basis.geometry();
    let weight = (geometry.box_length / quadrature_points as f64)
        .powi(geometry.spatial_dimension as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in slice_grid(geometry, quadrature_points, t_slice) {
        let gv = g.value(&p).conj();
        let gdt = g.time_derivative(&p).conj();
        acc += gv * f.time_derivative(&p) - gdt * f.value(&p);
    }
    Ok(Complex64::i() * weight * acc)
}

/// Expansion coefficients of a classical solution in the basis, with a
/// reconstruction residual so non-band-limited input is detectable.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
    /// Max deviation between input and reconstruction on the quadrature grid,
    /// relative to the largest input magnitude.
    pub reconstruction_residual: f64,
}

impl Decomposition {
    pub fn is_band_limited(&self, tol: f64) -> bool {
        self.reconstruction_residual <= tol
    }
}

/// a+_i = <phi, phi_i^+>, a-_i = -<phi, phi_i^->, from slice data.
pub fn decompose_classical(
    solution: &dyn SliceSolution,
    basis: &ModeBasis,
    t_slice: f64,
    quadrature_points: usize,
) -> Result<Decomposition> {
    let mut plus = Vec::with_capacity(basis.len());
    let mut minus = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let fp = basis.mode_function(i, ModeBranch::Positive)?;
        let fm = basis.mode_function(i, ModeBranch::Negative)?;
        plus.push(kg_inner_product(solution, &fp, basis, t_slice, quadrature_points)?);
        minus.push(-kg_inner_product(solution, &fm, basis, t_slice, quadrature_points)?);
    }

    let recon = ModeCombination { basis, plus: plus.clone(), minus: minus.clone() };
    let mut max_dev: f64 = 0.0;
    let mut max_mag: f64 = 0.0;
    for p in slice_grid(basis.geometry(), quadrature_points, t_slice) {
        let v_in = solution.value(&p);
        let dv_in = solution.time_derivative(&p);
        max_mag = max_mag.max(v_in.norm()).max(dv_in.norm());
        max_dev = max_dev
            .max((recon.value(&p) - v_in).norm())
            .max((recon.time_derivative(&p) - dv_in).norm());
    }
    let reconstruction_residual = if max_mag > 0.0 { max_dev / max_mag } else { max_dev };
    Ok(Decomposition { plus, minus, reconstruction_residual })
}

/// Grid samples on two nearby slices, reduced to midpoint values and a
/// central-difference time derivative. Matches a `slice_grid` layout.
pub struct TwoSliceSamples {
    mid_time: f64,
    values: Vec<Complex64>,
    time_derivatives: Vec<Complex64>,
    q: usize,
    geometry: BoxGeometry,
}

impl TwoSliceSamples {
    pub fn new(
        geometry: BoxGeometry,
        quadrature_points: usize,
        t0: f64,
        values0: Vec<Complex64>,
        t1: f64,
        values1: Vec<Complex64>,
    ) -> Result<Self> {
        let total = quadrature_points.pow(geometry.spatial_dimension as u32);
        if values0.len() != total || values1.len() != total {
            return Err(CoreError::InvalidParameter(format!(
                "expected {total} grid samples per slice, got {} and {}",
                values0.len(),
                values1.len()
            )));
        }
        if !(t1 > t0) {
            return Err(CoreError::InvalidParameter("slices must be at distinct increasing times".into()));
        }
        let dt = t1 - t0;
        let values = values0.iter().zip(&values1).map(|(a, b)| (a + b) * 0.5).collect();
        let time_derivatives = values0.iter().zip(&values1).map(|(a, b)| (b - a) / dt).collect();
        Ok(Self {
            mid_time: 0.5 * (t0 + t1),
            values,
            time_derivatives,
            q: quadrature_points,
            geometry,
        })
    }

    pub fn mid_time(&self) -> f64 {
        self.mid_time
    }

    fn flat_index(&self, p: &SpacetimePoint) -> usize {
        let h = self.geometry.box_length / self.q as f64;
        let mut flat = 0;
        for (axis, &x) in p.x.iter().enumerate().rev() {
            let idx = (x / h).round() as usize % self.q;
            flat = flat * self.q + idx;
            let _ = axis;
        }
        flat
    }
}

impl SliceSolution for TwoSliceSamples {
    fn value(&self, p: &SpacetimePoint) -> Complex64 {
        self.values[self.flat_index(p)]
    }

    fn time_derivative(&self, p: &SpacetimePoint) -> Complex64 {
        self.time_derivatives[self.flat_index(p)]
    }
}
