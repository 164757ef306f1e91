//! Derived observables: stress-energy components, hypersurface integration,
//! total momentum and energy operators, the commutator table, and the
//! eigenvalue analysis of quantized observables on reference states.

use crate::diffop::{is_state, DerivWord, DiffOp};
use crate::error::Error;
use crate::prequant::{coordinate_operator_table, prequantize_adapted, VolumeMode};
use crate::pullback::SolutionSection;
use crate::symexpr::{Coefficient, Expr, Generator};

/// A reference wave function on the extended phase space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateProfile {
    pub psi: Expr,
    pub description: String,
}

/// Result of factoring `pullback(op psi)` through `pullback(psi)`.
///
/// `lambda_raw` is the exact quotient (reduced on shell when the section asks
/// for it); `lambda` additionally rewrites k0 as omega/c in the constant
/// part. The reconstruction identity
/// `pullback(op psi) = lambda_raw * pullback(psi) + residual` holds exactly,
/// and `lambda = lambda_raw` after undoing the omega substitution. `anomaly`
/// is the coordinate-dependent part of the quotient; `is_eigen` says it is
/// absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenReport {
    pub lambda: Expr,
    pub lambda_raw: Expr,
    pub is_eigen: bool,
    pub anomaly: Expr,
    pub residual: Expr,
}

/// Knobs for [`eigen_analysis_with`]. Defaults: rewrite k0 as omega/c,
/// keep the mass symbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenOptions {
    pub omega_substitution: bool,
    pub massless: bool,
}

impl Default for EigenOptions {
    fn default() -> EigenOptions {
        EigenOptions { omega_substitution: true, massless: false }
    }
}

/// Stress tensor components used by the derivations: j = 0 is the energy
/// density T^{00} = 1/2 sum_mu (pi^mu)^2 + 1/2 (m^2 c^2/hbar^2) phi^2 (the
/// Euclidean-weighted quadratic form, as the densities are written), and
/// j in {1,2,3} is the momentum density T^{0j} = pi^0 pi^j.
pub fn stress_energy(j: usize) -> Result<Expr, Error> {
    match j {
        0 => {
            let mut t = Expr::zero();
            for mu in 0..4 {
                let sq = Expr::mono(&[(Generator::pi(mu)?, 2)])?;
                t = t.add(&sq.scale(&Coefficient::from_ratio(1, 2)));
            }
            let mass = Expr::mono(&[
                (Generator::M, 2),
                (Generator::C, 2),
                (Generator::Hbar, -2),
                (Generator::Phi, 2),
            ])?
            .scale(&Coefficient::from_ratio(1, 2));
            Ok(t.add(&mass))
        }
        1..=3 => Expr::mono(&[(Generator::Pi0, 1), (Generator::pi(j)?, 1)]),
        _ => Err(Error::IndexOutOfRange(j)),
    }
}

/// Integrate an operator over a constant-time hypersurface: multiply by
/// prefactor * V and canonicalize the L^3 = V identification. Sound only for
/// operators without explicit spacetime dependence, so coefficients (and the
/// prefactor) must be x-free; the volume mode must be V.
pub fn integrate_hypersurface(
    op: &DiffOp,
    prefactor: &Expr,
    mode: VolumeMode,
) -> Result<DiffOp, Error> {
    if mode != VolumeMode::V {
        return Err(Error::VolumeModeRequired);
    }
    for mu in 0..4 {
        let x = Generator::x(mu)?;
        if prefactor.depends_on(x) {
            return Err(Error::SpacetimeDependentIntegrand(x));
        }
        for (_, c) in op.terms() {
            if c.depends_on(x) {
                return Err(Error::SpacetimeDependentIntegrand(x));
            }
        }
    }
    let factor = prefactor.mul(&Expr::gen(Generator::V));
    op.scale(&factor).map_coeffs(|c| c.fix_volume())
}

/// One row of the commutator table over the quantized coordinate operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorEntry {
    pub a: &'static str,
    pub b: &'static str,
    pub commutator: DiffOp,
    pub integrated: DiffOp,
}

impl CommutatorEntry {
    /// The commutators in the table are scalar multiples of the identity;
    /// this is that scalar.
    pub fn scalar(&self) -> Expr {
        self.commutator.coefficient(&DerivWord::identity())
    }

    pub fn integrated_scalar(&self) -> Expr {
        self.integrated.coefficient(&DerivWord::identity())
    }
}

/// All pairwise commutators of {Q(phi), Q(pi^0), Q(pi^1), Q(pi^2), Q(pi^3)}
/// (unordered pairs, diagonal included), each with its hypersurface-integrated
/// companion. Exactly one entry is nonzero: [Q(phi), Q(pi^0)] = (i hbar c/L^3)
/// id, integrating to (i hbar c) id.
pub fn commutator_report(mode: VolumeMode) -> Vec<CommutatorEntry> {
    let table = coordinate_operator_table(mode);
    let names: [&'static str; 5] = ["phi", "pi0", "pi1", "pi2", "pi3"];
    let mut entries = Vec::new();
    for (i, &a) in names.iter().enumerate() {
        for &b in &names[i..] {
            let comm = table[a].commutator(&table[b]);
            let integrated = integrate_hypersurface(&comm, &Expr::one(), VolumeMode::V)
                .expect("commutator coefficients are x-free");
            entries.push(CommutatorEntry { a, b, commutator: comm, integrated });
        }
    }
    entries
}

/// The reference state psi_s = exp(phi phibar / C_choice). The default
/// normalization is C_choice = C^2; the headline results use C^2 = A Abar.
pub fn psi_s(c_choice: &Expr) -> Result<StateProfile, Error> {
    if c_choice.is_zero() {
        return Err(Error::ZeroNormalization);
    }
    let inv = c_choice.invert()?;
    let arg = Expr::gen(Generator::Phi)
        .mul(&Expr::gen(Generator::PhiBar))
        .mul(&inv);
    let psi = Expr::exp_of(arg)?;
    debug_assert!(is_state(&psi));
    Ok(StateProfile {
        psi,
        description: format!("exp(phi*phibar/({c_choice}))"),
    })
}

/// Total momentum operator Q(P^j) = (1/c) * V * Q(T^{0j}) = -i hbar pi^j
/// d/dphi, assembled from the quantized momentum density by hypersurface
/// integration under L^3 = V.
pub fn momentum_operator(j: usize) -> Result<DiffOp, Error> {
    if !(1..=3).contains(&j) {
        return Err(Error::IndexOutOfRange(j));
    }
    let density = stress_energy(j)?;
    let q = prequantize_adapted(&density, VolumeMode::L3).restrict_to_states();
    let inv_c = Expr::mono(&[(Generator::C, -1)])?;
    integrate_hypersurface(&q, &inv_c, VolumeMode::V)
}

/// Total energy operator Q(E) = V * Q(T^{00}) after state-space restriction:
/// -i hbar c pi^0 d/dphi - (V/2)(pi^0)^2 + (V/2) sum_i (pi^i)^2
/// + (V/2)(m^2 c^2/hbar^2) phi^2.
pub fn energy_operator() -> Result<DiffOp, Error> {
    let density = stress_energy(0)?;
    let q = prequantize_adapted(&density, VolumeMode::L3).restrict_to_states();
    integrate_hypersurface(&q, &Expr::one(), VolumeMode::V)
}

/// Apply `op` to the state, pull both the result and the state back along
/// the section, and factor: lambda_raw = pullback(op psi) / pullback(psi).
/// The quotient splits into a parameter-only part and the coordinate-carrying
/// `anomaly`; the report's `lambda` applies k0 -> omega/c to the parameter
/// part when requested. With `massless`, m -> 0 is substituted after the
/// pullback (and after the on-shell reduction the section performs).
pub fn eigen_analysis_with(
    op: &DiffOp,
    state: &StateProfile,
    s: &SolutionSection,
    opts: &EigenOptions,
) -> Result<EigenReport, Error> {
    let applied = op.apply(&state.psi);
    let mut pulled = s.pullback(&applied)?;
    let mut pulled_state = s.pullback(&state.psi)?;
    if opts.massless {
        pulled = pulled.substitute_one(Generator::M, &Expr::zero())?;
        pulled_state = pulled_state.substitute_one(Generator::M, &Expr::zero())?;
    }
    let inv = pulled_state
        .invert()
        .map_err(|e| Error::StateNotInvertible(e.to_string()))?;
    let mut lambda_raw = pulled.mul(&inv);
    if s.on_shell {
        lambda_raw = lambda_raw.on_shell_reduce(&s.metric);
    }
    let residual = pulled.sub(&lambda_raw.mul(&pulled_state));
    let (params, anomaly) = lambda_raw.split_parameter_part();
    let lambda = if opts.omega_substitution {
        let omega_over_c = Expr::mono(&[(Generator::Omega, 1), (Generator::C, -1)])?;
        params
            .substitute_one(Generator::K0, &omega_over_c)?
            .add(&anomaly)
    } else {
        lambda_raw.clone()
    };
    Ok(EigenReport {
        lambda,
        lambda_raw,
        is_eigen: anomaly.is_zero(),
        anomaly,
        residual,
    })
}

/// [`eigen_analysis_with`] under default options.
pub fn eigen_analysis(
    op: &DiffOp,
    state: &StateProfile,
    s: &SolutionSection,
) -> Result<EigenReport, Error> {
    eigen_analysis_with(op, state, s, &EigenOptions::default())
}
