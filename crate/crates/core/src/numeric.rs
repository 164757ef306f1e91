//! Floating-point evaluation and an independent finite-difference oracle.
//!
//! Everything here is cross-validation plumbing: expressions are evaluated
//! exactly as written (rational coefficients converted at the last moment),
//! derivatives are re-derived by second-order central differences at seeded
//! random points, and the plane wave is pushed through a grid d'Alembertian.
//! Unit conventions (hbar = c = 1 and so on) live in the callers' test
//! assignments, never in symbolic results.

use std::collections::BTreeMap;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffop::DiffOp;
use crate::error::Error;
use crate::pullback::SolutionSection;
use crate::symexpr::{Expr, Generator, Metric};

/// Numeric values for generators. Field and conjugate-field values are
/// independent coordinates here: differencing treats phi and phibar (and A,
/// Abar) as separate holomorphic directions, matching the algebra.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    values: BTreeMap<Generator, Complex64>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, g: Generator, z: Complex64) -> Assignment {
        self.values.insert(g, z);
        self
    }

    pub fn with_real(self, g: Generator, x: f64) -> Assignment {
        self.with(g, Complex64::new(x, 0.0))
    }

    pub fn set(&mut self, g: Generator, z: Complex64) {
        self.values.insert(g, z);
    }

    pub fn get(&self, g: Generator) -> Result<Complex64, Error> {
        self.values
            .get(&g)
            .copied()
            .ok_or(Error::MissingAssignment(g))
    }

    /// The assignment with the real part of `g` shifted by `dx`.
    pub fn shifted(&self, g: Generator, dx: f64) -> Result<Assignment, Error> {
        let mut out = self.clone();
        let z = out.get(g)?;
        out.set(g, z + Complex64::new(dx, 0.0));
        Ok(out)
    }

    /// Random values for every generator: components uniform in [-1, 1],
    /// with parameters kept away from zero (|z| >= 0.1) so Laurent powers
    /// stay bounded.
    pub fn random<R: Rng>(rng: &mut R) -> Assignment {
        let mut out = Assignment::new();
        for &g in Generator::ALL {
            let z = loop {
                let z = Complex64::new(
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                );
                if g.is_coordinate() || z.norm() >= 0.1 {
                    break z;
                }
            };
            out.set(g, z);
        }
        out
    }

    /// Relative defect of the dispersion relation
    /// (k0)^2 = g00 (m^2 c^2/hbar^2 - sum_i g_ii (k_i)^2) at this point.
    pub fn dispersion_defect(&self, metric: &Metric) -> Result<f64, Error> {
        let k0 = self.get(Generator::K0)?;
        let lhs = k0 * k0;
        let m = self.get(Generator::M)?;
        let c = self.get(Generator::C)?;
        let hbar = self.get(Generator::Hbar)?;
        let mut rhs = m * m * c * c / (hbar * hbar);
        for i in 1..4 {
            let gii = metric.diag(i)? as f64;
            let ki = self.get(Generator::k(i)?)?;
            rhs -= gii * ki * ki;
        }
        rhs *= metric.diag(0)? as f64;
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        Ok((lhs - rhs).norm() / scale)
    }

    /// Random on-shell point in oracle units: hbar = c = L = V = 1, real
    /// mass and spatial wavevector, k0 fixed by the dispersion relation, and
    /// conjugate pairs tied together (Abar = conj(A), phibar = conj(phi)).
    pub fn random_on_shell<R: Rng>(rng: &mut R, metric: &Metric) -> Assignment {
        let mut out = Assignment::random(rng);
        for g in [Generator::Hbar, Generator::C, Generator::L, Generator::V] {
            out.set(g, Complex64::new(1.0, 0.0));
        }
        let m = rng.gen_range(0.2..=1.0);
        out.set(Generator::M, Complex64::new(m, 0.0));
        let mut k0_sq = m * m;
        for i in 1..4 {
            let ki = rng.gen_range(-1.0..=1.0);
            let gii = metric.diag(i).expect("index in range") as f64;
            out.set(Generator::k(i).expect("index in range"), Complex64::new(ki, 0.0));
            k0_sq -= gii * ki * ki;
        }
        let g00 = metric.diag(0).expect("index in range") as f64;
        out.set(Generator::K0, Complex64::new((g00 * k0_sq).sqrt(), 0.0));
        let a = out.get(Generator::A).expect("assigned");
        out.set(Generator::ABar, a.conj());
        let phi = out.get(Generator::Phi).expect("assigned");
        out.set(Generator::PhiBar, phi.conj());
        out
    }
}

/// Evaluate an expression at a point.
pub fn eval(e: &Expr, a: &Assignment) -> Result<Complex64, Error> {
    let mut total = Complex64::new(0.0, 0.0);
    for term in e.terms() {
        let mut value = term.coeff.to_complex64();
        for (g, n) in term.monomial.iter() {
            let n = i32::try_from(n).expect("exponent fits in i32");
            value *= a.get(g)?.powi(n);
        }
        if !term.exp_arg.is_zero() {
            value *= eval(term.exp_arg.expr(), a)?.exp();
        }
        total += value;
    }
    Ok(total)
}

/// Central difference of `e` along the real direction of `g`.
pub fn fd_derivative(e: &Expr, g: Generator, a: &Assignment, h: f64) -> Result<Complex64, Error> {
    let plus = eval(e, &a.shifted(g, h)?)?;
    let minus = eval(e, &a.shifted(g, -h)?)?;
    Ok((plus - minus) / Complex64::new(2.0 * h, 0.0))
}

/// Oracle parameters. The tolerance is a relative bound consistent with
/// O(h^2) differencing at the default step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub h: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig { h: 1e-4, samples: 100, seed: 42, tolerance: 1e-5 }
    }
}

/// Outcome of a finite-difference comparison: the worst relative error over
/// all samples at step h, and the empirical convergence order from halving h
/// (None when the errors sit at the noise floor, e.g. exact cases).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdReport {
    pub cases: usize,
    pub max_rel_error: f64,
    pub order: Option<f64>,
    pub passed: bool,
}

fn rel_error(got: Complex64, want: Complex64) -> f64 {
    let scale = got.norm().max(want.norm()).max(1.0);
    (got - want).norm() / scale
}

fn finish_report(cfg: &OracleConfig, cases: usize, max_h: f64, max_h2: f64) -> FdReport {
    // Below this the truncation signal drowns in f64 roundoff (which grows as
    // h shrinks), so the halving ratio carries no order information. Central
    // differences are exact on quadratics, which land here.
    let noise = 1e-10;
    let order = if max_h > noise && max_h2 > noise {
        Some((max_h / max_h2).log2())
    } else {
        None
    };
    let order_ok = order.map_or(true, |o| (1.8..=2.2).contains(&o));
    FdReport {
        cases,
        max_rel_error: max_h,
        order,
        passed: max_h <= cfg.tolerance && order_ok,
    }
}

/// Compare the symbolic derivative of `e` along `g` against central
/// differences at seeded random points.
pub fn fd_check_derivative(
    e: &Expr,
    g: Generator,
    cfg: &OracleConfig,
) -> Result<FdReport, Error> {
    let sym = e.partial_derivative(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_h = 0.0f64;
    let mut max_h2 = 0.0f64;
    for _ in 0..cfg.samples {
        let a = Assignment::random(&mut rng);
        let want = eval(&sym, &a)?;
        let got = fd_derivative(e, g, &a, cfg.h)?;
        let got_half = fd_derivative(e, g, &a, cfg.h / 2.0)?;
        max_h = max_h.max(rel_error(got, want));
        max_h2 = max_h2.max(rel_error(got_half, want));
    }
    Ok(finish_report(cfg, cfg.samples, max_h, max_h2))
}

/// Numerically apply a derivative word to a black-box function by nested
/// central differences.
fn numeric_word_apply<F>(
    f: &F,
    word: &[(Generator, u32)],
    a: &Assignment,
    h: f64,
) -> Result<Complex64, Error>
where
    F: Fn(&Assignment) -> Result<Complex64, Error> + ?Sized,
{
    match word.split_first() {
        None => f(a),
        Some((&(g, n), tail)) => {
            let mut rest = Vec::with_capacity(tail.len() + 1);
            if n > 1 {
                rest.push((g, n - 1));
            }
            rest.extend_from_slice(tail);
            let plus = numeric_word_apply(f, &rest, &a.shifted(g, h)?, h)?;
            let minus = numeric_word_apply(f, &rest, &a.shifted(g, -h)?, h)?;
            Ok((plus - minus) / Complex64::new(2.0 * h, 0.0))
        }
    }
}

/// Numeric action of an operator on a black-box function: evaluate each
/// coefficient and difference the function along each derivative word.
fn numeric_apply<F>(
    op: &DiffOp,
    f: &F,
    a: &Assignment,
    h: f64,
) -> Result<Complex64, Error>
where
    F: Fn(&Assignment) -> Result<Complex64, Error> + ?Sized,
{
    let mut out = Complex64::new(0.0, 0.0);
    for (w, c) in op.terms() {
        let word: Vec<(Generator, u32)> = w.iter().collect();
        out += eval(c, a)? * numeric_word_apply(f, &word, a, h)?;
    }
    Ok(out)
}

/// Compare the symbolic action `op(e)` against the finite-difference action
/// at seeded random points.
pub fn fd_check_operator(
    op: &DiffOp,
    e: &Expr,
    cfg: &OracleConfig,
) -> Result<FdReport, Error> {
    let sym = op.apply(e);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_h = 0.0f64;
    let mut max_h2 = 0.0f64;
    let f = |a: &Assignment| eval(e, a);
    for _ in 0..cfg.samples {
        let a = Assignment::random(&mut rng);
        let want = eval(&sym, &a)?;
        let got = numeric_apply(op, &f, &a, cfg.h)?;
        let got_half = numeric_apply(op, &f, &a, cfg.h / 2.0)?;
        max_h = max_h.max(rel_error(got, want));
        max_h2 = max_h2.max(rel_error(got_half, want));
    }
    Ok(finish_report(cfg, cfg.samples, max_h, max_h2))
}

/// Random polynomial in phi, pi^0, pi^1 with small integer coefficients;
/// always pi^0-dependent.
fn random_test_function<R: Rng>(rng: &mut R) -> Expr {
    let gens = [Generator::Phi, Generator::Pi0, Generator::Pi1];
    let mut f = Expr::gen(Generator::Pi0);
    for _ in 0..3 {
        let mut powers = Vec::new();
        for &g in &gens {
            powers.push((g, rng.gen_range(0..=2)));
        }
        let coeff = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        let term = Expr::mono(&powers)
            .expect("non-negative powers")
            .scale(&crate::symexpr::Coefficient::from_int(coeff));
        f = f.add(&term);
    }
    f
}

/// Nested-difference commutator check: apply `a_op` after `b_op` (and the
/// reverse) to random test functions purely numerically and compare the
/// difference against `scalar * f`. Operator composition is never used, so
/// this validates it from outside. Runs in the unit convention
/// hbar = c = L = V = 1, A = Abar = 1; everything else stays random.
pub fn fd_check_commutator(
    a_op: &DiffOp,
    b_op: &DiffOp,
    scalar: &Expr,
    cfg: &OracleConfig,
) -> Result<FdReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_h = 0.0f64;
    let mut max_h2 = 0.0f64;
    for _ in 0..cfg.samples {
        let f_expr = random_test_function(&mut rng);
        let mut a = Assignment::random(&mut rng);
        for g in [
            Generator::Hbar,
            Generator::C,
            Generator::L,
            Generator::V,
            Generator::A,
            Generator::ABar,
        ] {
            a.set(g, Complex64::new(1.0, 0.0));
        }
        let f = |aa: &Assignment| eval(&f_expr, aa);
        let want = eval(scalar, &a)? * eval(&f_expr, &a)?;
        for (h, slot) in [(cfg.h, &mut max_h), (cfg.h / 2.0, &mut max_h2)] {
            let bf = |aa: &Assignment| numeric_apply(b_op, &f, aa, h);
            let af = |aa: &Assignment| numeric_apply(a_op, &f, aa, h);
            let ab = numeric_apply(a_op, &bf, &a, h)?;
            let ba = numeric_apply(b_op, &af, &a, h)?;
            *slot = slot.max(rel_error(ab - ba, want));
        }
    }
    Ok(finish_report(cfg, cfg.samples, max_h, max_h2))
}

/// Outcome of the grid d'Alembertian check: worst residual at spacing h and
/// h/2, their ratio (≈ 4 for second order), and the analytic truncation
/// bound the h-residual must stay under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgGridReport {
    pub max_residual: f64,
    pub max_residual_half: f64,
    pub ratio: Option<f64>,
    pub order: Option<f64>,
    pub bound: f64,
    pub passed: bool,
}

/// Evaluate the plane wave around a small spacetime sample lattice and form
/// the central-difference d'Alembertian plus mass term. The assignment must
/// be on shell (checked); `extent` is the number of sample points per axis.
pub fn kg_grid_residual(
    s: &SolutionSection,
    a: &Assignment,
    h: f64,
    extent: usize,
) -> Result<KgGridReport, Error> {
    let defect = a.dispersion_defect(&s.metric)?;
    if defect > 1e-9 {
        return Err(Error::OffShellWavevector { defect });
    }
    let gamma = s.gamma_expr();
    let m = a.get(Generator::M)?;
    let c = a.get(Generator::C)?;
    let hbar = a.get(Generator::Hbar)?;
    let mass_sq = m * m * c * c / (hbar * hbar);

    let gamma_at = |base: &Assignment| -> Result<Complex64, Error> { eval(&gamma, base) };
    let extent = extent.max(1);
    let span = 1.0;
    let coord = |idx: usize| -> f64 {
        if extent == 1 {
            0.0
        } else {
            -span / 2.0 + span * idx as f64 / (extent - 1) as f64
        }
    };

    let residual_at = |point: &Assignment, h: f64| -> Result<f64, Error> {
        let center = gamma_at(point)?;
        let mut res = mass_sq * center;
        for mu in 0..4 {
            let x = Generator::x(mu)?;
            let sign = s.metric.diag(mu)? as f64;
            let plus = gamma_at(&point.shifted(x, h)?)?;
            let minus = gamma_at(&point.shifted(x, -h)?)?;
            let second = (plus - center * 2.0 + minus) / Complex64::new(h * h, 0.0);
            res += Complex64::new(sign, 0.0) * second;
        }
        Ok(res.norm())
    };

    let mut max_h = 0.0f64;
    let mut max_h2 = 0.0f64;
    let mut idx = [0usize; 4];
    loop {
        let mut point = a.clone();
        for mu in 0..4 {
            point.set(
                Generator::x(mu)?,
                Complex64::new(coord(idx[mu]), 0.0),
            );
        }
        max_h = max_h.max(residual_at(&point, h)?);
        max_h2 = max_h2.max(residual_at(&point, h / 2.0)?);
        // odometer over the 4-dimensional lattice
        let mut mu = 0;
        loop {
            if mu == 4 {
                break;
            }
            idx[mu] += 1;
            if idx[mu] < extent {
                break;
            }
            idx[mu] = 0;
            mu += 1;
        }
        if mu == 4 {
            break;
        }
    }

    // Fourth-derivative truncation of the 3-point stencil, summed per axis,
    // with a 5x margin for the neglected higher orders.
    let amp = a.get(Generator::A)?.norm();
    let mut k4 = 0.0;
    for mu in 0..4 {
        k4 += a.get(Generator::k(mu)?)?.norm().powi(4);
    }
    let bound = 5.0 * h * h * k4 * amp / 12.0;

    let noise = 1e-12;
    let (ratio, order) = if max_h > noise && max_h2 > noise {
        let r = max_h / max_h2;
        (Some(r), Some(r.log2()))
    } else {
        (None, None)
    };
    let ratio_ok = ratio.map_or(max_h <= noise, |r| (3.6..=4.4).contains(&r));
    Ok(KgGridReport {
        max_residual: max_h,
        max_residual_half: max_h2,
        ratio,
        order,
        bound,
        passed: max_h <= bound.max(noise) && ratio_ok,
    })
}
