//! The named verification suite behind `verify-all`: every derived operator,
//! bracket, eigenvalue, field equation, and oracle comparison as a pass/fail
//! check with a one-line summary.
//!
//! The configuration carries deliberate fault knobs (kappa sign, skipping the
//! state-space restriction, skipping the on-shell reduction) so sensitivity
//! runs can demonstrate that each ingredient is load-bearing. The default
//! configuration is the physical one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{
    dw_equations, kg_residual, state_space_test, CovariantHamiltonian, VectorM,
};
use crate::diffop::{is_state, DerivWord, DiffOp};
use crate::error::Error;
use crate::numeric::{
    eval, fd_check_commutator, fd_check_derivative, fd_check_operator, kg_grid_residual,
    Assignment, OracleConfig,
};
use crate::observables::{
    eigen_analysis_with, integrate_hypersurface, psi_s, stress_energy, EigenOptions,
    StateProfile,
};
use crate::prequant::{
    coordinate_expansion, prequantize_abstract, prequantize_adapted, KappaSign, QuantConfig,
    VolumeMode,
};
use crate::pullback::SolutionSection;
use crate::symexpr::{Coefficient, Expr, Generator, Metric};

/// Suite configuration: fault knobs plus oracle parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub kappa_sign: KappaSign,
    pub restrict_states: bool,
    pub on_shell: bool,
    pub seed: u64,
    pub samples: usize,
    pub h: f64,
}

impl Default for CheckConfig {
    fn default() -> CheckConfig {
        CheckConfig {
            kappa_sign: KappaSign::Plus,
            restrict_states: true,
            on_shell: true,
            seed: 42,
            samples: 100,
            h: 1e-4,
        }
    }
}

/// One named check with its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, body: Result<(bool, String), Error>) -> CheckResult {
    match body {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
    }
}

fn parse(src: &str) -> Expr {
    src.parse().expect("fixed expression text parses")
}

/// Shared derivation context for one suite run.
struct Ctx {
    cfg: CheckConfig,
    qcfg: QuantConfig,
    section: SolutionSection,
}

impl Ctx {
    fn new(cfg: CheckConfig) -> Ctx {
        Ctx {
            cfg,
            qcfg: QuantConfig::adapted(VolumeMode::L3, cfg.kappa_sign),
            section: SolutionSection::new(Metric::minkowski(), cfg.on_shell),
        }
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig {
            h: self.cfg.h,
            samples: self.cfg.samples,
            seed: self.cfg.seed,
            tolerance: 1e-5,
        }
    }

    /// Quantize through the configured map, honoring the fault knobs.
    fn quantize(&self, f: &Expr) -> DiffOp {
        let q = prequantize_abstract(f, &self.qcfg);
        if self.cfg.restrict_states {
            q.restrict_to_states()
        } else {
            q
        }
    }

    fn momentum(&self, j: usize) -> Result<DiffOp, Error> {
        let inv_c = Expr::mono(&[(Generator::C, -1)])?;
        integrate_hypersurface(&self.quantize(&stress_energy(j)?), &inv_c, VolumeMode::V)
    }

    fn energy(&self) -> Result<DiffOp, Error> {
        integrate_hypersurface(&self.quantize(&stress_energy(0)?), &Expr::one(), VolumeMode::V)
    }

    fn tuned_state(&self) -> Result<StateProfile, Error> {
        psi_s(&Expr::mono(&[(Generator::A, 1), (Generator::ABar, 1)])?)
    }
}

const COORDS: [Generator; 10] = [
    Generator::X0,
    Generator::X1,
    Generator::X2,
    Generator::X3,
    Generator::Phi,
    Generator::PhiBar,
    Generator::Pi0,
    Generator::Pi1,
    Generator::Pi2,
    Generator::Pi3,
];

/// Random small polynomial over the phase-space coordinates.
fn random_polynomial<R: Rng>(rng: &mut R) -> Expr {
    let mut f = Expr::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut powers: Vec<(Generator, i64)> = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            powers.push((COORDS[rng.gen_range(0..COORDS.len())], rng.gen_range(1..=2)));
        }
        let coeff = match rng.gen_range(0..4) {
            0 => Coefficient::i(),
            1 => Coefficient::from_int(-1),
            2 => Coefficient::from_int(rng.gen_range(1..=3)),
            _ => Coefficient::from_ratio(1, 2),
        };
        f = f.add(&Expr::mono(&powers).expect("positive powers").scale(&coeff));
    }
    if f.is_zero() {
        Expr::gen(Generator::Phi)
    } else {
        f
    }
}

fn check_prequantize_consistency(ctx: &Ctx) -> CheckResult {
    outcome("prequantize-consistency", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
        for _ in 0..30 {
            let f = random_polynomial(&mut rng);
            let a = prequantize_abstract(&f, &ctx.qcfg);
            let b = coordinate_expansion(&f, &ctx.qcfg);
            let c = prequantize_adapted(&f, ctx.qcfg.volume_mode);
            if a != b {
                return Ok((false, format!("contraction and expansion forms differ for {f}")));
            }
            if a != c {
                return Ok((false, format!("contraction and adapted forms differ for {f}")));
            }
        }
        Ok((true, "30 random observables agree across all three constructions".into()))
    })())
}

fn check_coordinate_operators(ctx: &Ctx) -> CheckResult {
    outcome("coordinate-operators", (|| {
        let cases: [(&str, Generator, DiffOp); 5] = [
            ("phi", Generator::Phi, DiffOp::from_expr(Expr::gen(Generator::Phi))),
            (
                "pi0",
                Generator::Pi0,
                DiffOp::term(parse("-i*hbar*c/L^3"), DerivWord::d(Generator::Phi)?),
            ),
            ("pi1", Generator::Pi1, DiffOp::from_expr(Expr::gen(Generator::Pi1))),
            ("pi2", Generator::Pi2, DiffOp::from_expr(Expr::gen(Generator::Pi2))),
            ("pi3", Generator::Pi3, DiffOp::from_expr(Expr::gen(Generator::Pi3))),
        ];
        for (name, g, expected) in cases {
            let got = ctx.quantize(&Expr::gen(g));
            if got != expected {
                return Ok((false, format!("Q({name}) = {got}, expected {expected}")));
            }
        }
        Ok((true, "Q(phi) = phi, Q(pi0) = -(i*hbar*c/L^3) d/dphi, Q(pi^i) = pi^i".into()))
    })())
}

fn coordinate_ops(ctx: &Ctx) -> [(&'static str, DiffOp); 5] {
    [
        ("phi", ctx.quantize(&Expr::gen(Generator::Phi))),
        ("pi0", ctx.quantize(&Expr::gen(Generator::Pi0))),
        ("pi1", ctx.quantize(&Expr::gen(Generator::Pi1))),
        ("pi2", ctx.quantize(&Expr::gen(Generator::Pi2))),
        ("pi3", ctx.quantize(&Expr::gen(Generator::Pi3))),
    ]
}

fn check_commutator_table(ctx: &Ctx) -> CheckResult {
    outcome("commutator-table", (|| {
        let ops = coordinate_ops(ctx);
        let nonzero = DiffOp::from_expr(parse("i*hbar*c/L^3"));
        for (i, (a, qa)) in ops.iter().enumerate() {
            for (b, qb) in &ops[i..] {
                let comm = qa.commutator(qb);
                let expected = if *a == "phi" && *b == "pi0" {
                    nonzero.clone()
                } else {
                    DiffOp::zero()
                };
                if comm != expected {
                    return Ok((false, format!("[Q({a}), Q({b})] = {comm}, expected {expected}")));
                }
            }
        }
        Ok((true, "15 pairs; only [Q(phi), Q(pi0)] = i*hbar*c/L^3 survives".into()))
    })())
}

fn check_integrated_commutator(ctx: &Ctx) -> CheckResult {
    outcome("integrated-commutator", (|| {
        let q_phi = ctx.quantize(&Expr::gen(Generator::Phi));
        let q_pi0 = ctx.quantize(&Expr::gen(Generator::Pi0));
        let comm = q_phi.commutator(&q_pi0);
        let integrated = integrate_hypersurface(&comm, &Expr::one(), VolumeMode::V)?;
        let expected = DiffOp::from_expr(parse("i*hbar*c"));
        if integrated != expected {
            return Ok((false, format!("integrated bracket = {integrated}, expected {expected}")));
        }
        Ok((true, "V [Q(phi), Q(pi0)] = i*hbar*c under L^3 = V".into()))
    })())
}

fn check_momentum_operator(ctx: &Ctx) -> CheckResult {
    outcome("momentum-operator", (|| {
        for j in 1..=3 {
            let got = ctx.momentum(j)?;
            let expected = DiffOp::term(
                parse(&format!("-i*hbar*pi{j}")),
                DerivWord::d(Generator::Phi)?,
            );
            if got != expected {
                return Ok((false, format!("Q(P^{j}) = {got}, expected {expected}")));
            }
        }
        Ok((true, "Q(P^j) = -i*hbar*pi^j d/dphi for j = 1, 2, 3".into()))
    })())
}

fn check_momentum_eigenvalue(ctx: &Ctx) -> CheckResult {
    outcome("momentum-eigenvalue", (|| {
        let general = psi_s(&Expr::mono(&[(Generator::CNorm, 2)])?)?;
        let tuned = ctx.tuned_state()?;
        let opts = EigenOptions::default();
        for j in 1..=3 {
            let op = ctx.momentum(j)?;
            let r = eigen_analysis_with(&op, &general, &ctx.section, &opts)?;
            let expected = parse(&format!("hbar*k{j}*A*Abar/C^2"));
            if !(r.is_eigen && r.residual.is_zero() && r.lambda == expected) {
                return Ok((false, format!(
                    "general normalization, j = {j}: lambda = {}, expected {expected}",
                    r.lambda
                )));
            }
            let r = eigen_analysis_with(&op, &tuned, &ctx.section, &opts)?;
            let expected = parse(&format!("hbar*k{j}"));
            if !(r.is_eigen && r.residual.is_zero() && r.lambda == expected) {
                return Ok((false, format!(
                    "C^2 = A*Abar, j = {j}: lambda = {}, expected {expected}",
                    r.lambda
                )));
            }
        }
        Ok((true, "lambda = hbar*k^j*A*Abar/C^2, reducing to hbar*k^j at C^2 = A*Abar".into()))
    })())
}

fn check_energy_operator(ctx: &Ctx) -> CheckResult {
    outcome("energy-operator", (|| {
        let got = ctx.energy()?;
        let mult =
            parse("-V/2 pi0^2 + V/2 pi1^2 + V/2 pi2^2 + V/2 pi3^2 + V/2 m^2 c^2 phi^2/hbar^2");
        let expected = DiffOp::from_expr(mult)
            .add(&DiffOp::term(parse("-i*hbar*c*pi0"), DerivWord::d(Generator::Phi)?));
        if got != expected {
            return Ok((false, format!("Q(E) = {got}, expected {expected}")));
        }
        Ok((true, "Q(E) = -i*hbar*c*pi0 d/dphi - (V/2)(pi0)^2 + (V/2) sum_i (pi^i)^2 + (V/2)(m*c/hbar)^2 phi^2".into()))
    })())
}

fn check_energy_massless(ctx: &Ctx) -> CheckResult {
    outcome("energy-massless", (|| {
        let op = ctx.energy()?;
        let state = ctx.tuned_state()?;
        let opts = EigenOptions { omega_substitution: true, massless: true };
        let r = eigen_analysis_with(&op, &state, &ctx.section, &opts)?;
        let expected = parse("hbar*omega");
        if !(r.is_eigen && r.anomaly.is_zero() && r.residual.is_zero() && r.lambda == expected) {
            return Ok((false, format!(
                "lambda = {}, anomaly = {}, expected eigenvalue {expected}",
                r.lambda, r.anomaly
            )));
        }
        if r.lambda_raw != parse("hbar*c*k0") {
            return Ok((false, format!("raw eigenvalue = {}, expected hbar*c*k0", r.lambda_raw)));
        }
        Ok((true, "m = 0: lambda = hbar*omega, exact eigenstate".into()))
    })())
}

/// The recorded closed form for the massive-energy anomaly. Known
/// discrepancy: the derivation engine produces
/// [`MECHANICAL_MASSIVE_ANOMALY`], which is larger by the exact factor
/// A*Abar; the `energy-massive` check keeps the recorded form as its target
/// and reports red rather than papering over the difference.
pub const STORED_MASSIVE_ANOMALY: &str =
    "m^2*c^2*V*A*exp(2*i*(k0*x0 - k1*x1 - k2*x2 - k3*x3))/(hbar^2*Abar)";
/// What the quotient pipeline actually yields for the massive-energy
/// anomaly: (m c / hbar)^2 V gamma^2 with gamma^2 = A^2 exp(2i g k x).
pub const MECHANICAL_MASSIVE_ANOMALY: &str =
    "m^2*c^2*V*A^2*exp(2*i*(k0*x0 - k1*x1 - k2*x2 - k3*x3))/hbar^2";

fn check_energy_massive(ctx: &Ctx) -> CheckResult {
    outcome("energy-massive", (|| {
        let op = ctx.energy()?;
        let state = ctx.tuned_state()?;
        let r = eigen_analysis_with(&op, &state, &ctx.section, &EigenOptions::default())?;
        let expected_anomaly = parse(STORED_MASSIVE_ANOMALY);
        let expected_lambda = parse("hbar*omega").add(&expected_anomaly);
        if r.lambda == expected_lambda && r.anomaly == expected_anomaly && !r.is_eigen {
            return Ok((true, "m != 0: lambda and anomaly match the recorded closed form".into()));
        }
        let ratio = r
            .anomaly
            .mul(&expected_anomaly.invert()?)
            .to_string();
        Ok((false, format!(
            "recorded closed form expects anomaly {expected_anomaly}; the derivation yields {}; \
             the two differ by the exact factor {ratio}",
            r.anomaly
        )))
    })())
}

fn check_energy_massive_mechanical(ctx: &Ctx) -> CheckResult {
    outcome("energy-massive-mechanical", (|| {
        let op = ctx.energy()?;
        let state = ctx.tuned_state()?;
        let r = eigen_analysis_with(&op, &state, &ctx.section, &EigenOptions::default())?;
        let expected_anomaly = parse(MECHANICAL_MASSIVE_ANOMALY);
        let expected_lambda = parse("hbar*omega").add(&expected_anomaly);
        if r.is_eigen {
            return Ok((false, "massive state reported as an exact eigenstate".into()));
        }
        if !r.residual.is_zero() {
            return Ok((false, format!("nonzero reconstruction residual {}", r.residual)));
        }
        if r.anomaly != expected_anomaly || r.lambda != expected_lambda {
            return Ok((false, format!(
                "lambda = {}, anomaly = {}, expected lambda {expected_lambda}",
                r.lambda, r.anomaly
            )));
        }
        Ok((true, "m != 0: lambda = hbar*omega + (m*c/hbar)^2 V gamma^2 with gamma^2 = A^2 exp(2i g k x)".into()))
    })())
}

fn check_dw_onshell(ctx: &Ctx) -> CheckResult {
    outcome("dw-onshell", (|| {
        let h = CovariantHamiltonian::klein_gordon(&ctx.section.metric);
        let residuals = dw_equations(&h, &ctx.section)?;
        for (mu, r) in residuals.iter().enumerate() {
            if !r.is_zero() {
                return Ok((false, format!("residual {mu} = {r}")));
            }
        }
        Ok((true, "all five first-order residuals vanish identically on shell".into()))
    })())
}

fn check_dw_offshell(_ctx: &Ctx) -> CheckResult {
    outcome("dw-offshell", (|| {
        let off = SolutionSection::off_shell();
        let h = CovariantHamiltonian::klein_gordon(&off.metric);
        let residuals = dw_equations(&h, &off)?;
        for (mu, r) in residuals.iter().take(4).enumerate() {
            if !r.is_zero() {
                return Ok((false, format!("gradient residual {mu} = {r}")));
            }
        }
        let mut kk = Expr::zero();
        for mu in 0..4 {
            let sign = off.metric.diag(mu)?;
            kk = kk.add(
                &Expr::mono(&[(Generator::k(mu)?, 2)])?.scale(&Coefficient::from_int(sign)),
            );
        }
        let expected = parse("m^2*c^2/hbar^2").sub(&kk).mul(&off.gamma_expr());
        if residuals[4] != expected {
            return Ok((false, format!("divergence residual = {}", residuals[4])));
        }
        if residuals[4] != kg_residual(&off) {
            return Ok((false, "first-order and second-order obstructions disagree".into()));
        }
        Ok((true, "off shell only the divergence residual survives and equals the dispersion defect times gamma".into()))
    })())
}

fn check_kg_symbolic(ctx: &Ctx) -> CheckResult {
    outcome("kg-symbolic", (|| {
        let on = kg_residual(&ctx.section);
        if !on.is_zero() {
            return Ok((false, format!("on-shell second-order residual = {on}")));
        }
        let off = kg_residual(&SolutionSection::off_shell());
        if off.is_zero() {
            return Ok((false, "off-shell residual vanished; the obstruction is missing".into()));
        }
        if !off.on_shell_reduce(&Metric::minkowski()).is_zero() {
            return Ok((false, "dispersion rewrite does not kill the off-shell residual".into()));
        }
        Ok((true, "plane wave satisfies the second-order equation exactly on shell".into()))
    })())
}

fn check_state_space(ctx: &Ctx) -> CheckResult {
    outcome("state-space", (|| {
        let v = VectorM::adapted();
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
        let mut in_state = 0;
        for _ in 0..100 {
            let f = random_polynomial(&mut rng);
            let a = is_state(&f);
            let b = state_space_test(&f, &v);
            if a != b {
                return Ok((false, format!("predicates disagree on {f}")));
            }
            if a {
                in_state += 1;
            }
        }
        let psi = psi_s(&Expr::mono(&[(Generator::CNorm, 2)])?)?;
        if !(is_state(&psi.psi) && state_space_test(&psi.psi, &v)) {
            return Ok((false, "reference profile not certified as a state".into()));
        }
        Ok((true, format!(
            "both predicates agree on 100 random profiles ({in_state} states) and certify {}",
            psi.description
        )))
    })())
}

fn check_onshell_volume(_ctx: &Ctx) -> CheckResult {
    outcome("onshell-volume", (|| {
        let metric = Metric::minkowski();
        let rhs = Expr::dispersion_rhs(&metric);
        // k0^2 -> dispersion right-hand side; odd powers keep one k0
        let k0 = Expr::gen(Generator::K0);
        if k0.pow(2)?.on_shell_reduce(&metric) != rhs {
            return Ok((false, "k0^2 does not reduce to the dispersion form".into()));
        }
        if k0.pow(5)?.on_shell_reduce(&metric) != rhs.pow(2)?.mul(&k0) {
            return Ok((false, "odd k0 powers reduce incorrectly".into()));
        }
        // idempotence on a mixed battery, including exp arguments
        let battery = [
            k0.pow(4)?,
            k0.pow(3)?.mul(&Expr::gen(Generator::Phi)),
            k0.pow(2)?.mul(&Expr::exp_of(parse("i*k0*x0"))?),
            parse("k0^2*k1 + k2^2"),
        ];
        for e in battery {
            let once = e.on_shell_reduce(&metric);
            if once.on_shell_reduce(&metric) != once {
                return Ok((false, format!("reduction is not idempotent on {e}")));
            }
        }
        // numeric cross-check at a random on-shell point
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = Assignment::random_on_shell(&mut rng, &metric);
        let direct = eval(&k0.pow(4)?, &a)?;
        let reduced = eval(&k0.pow(4)?.on_shell_reduce(&metric), &a)?;
        if (direct - reduced).norm() > 1e-9 * direct.norm().max(1.0) {
            return Ok((false, format!("numeric mismatch: {direct} vs {reduced}")));
        }
        // volume identification
        if parse("i*hbar*c/L^3").fix_volume()? != parse("i*hbar*c/V") {
            return Ok((false, "1/L^3 does not rewrite to 1/V".into()));
        }
        if parse("L^6*phi").fix_volume()? != parse("V^2*phi") {
            return Ok((false, "L^6 does not rewrite to V^2".into()));
        }
        if !matches!(parse("L^2").fix_volume(), Err(Error::VolumeNotCubed(2))) {
            return Ok((false, "non-cubed L power was not rejected".into()));
        }
        Ok((true, "dispersion rewrite is idempotent and numerically consistent; L^3 = V holds".into()))
    })())
}

/// The derivative comparisons behind `oracle-derivatives`, exposed so the
/// CLI oracle subcommand reports the same battery case by case.
pub fn derivative_battery() -> Result<Vec<(Expr, Generator)>, Error> {
    let gamma = SolutionSection::on_shell().gamma_expr();
    Ok(vec![
        (parse("phi^3"), Generator::Phi),
        (psi_s(&Expr::mono(&[(Generator::CNorm, 2)])?)?.psi, Generator::PhiBar),
        (stress_energy(0)?, Generator::Pi0),
        (CovariantHamiltonian::klein_gordon(&Metric::minkowski()).h, Generator::Phi),
        (gamma.clone(), Generator::X1),
        (gamma.conjugate(), Generator::X0),
        (parse("pi0^2*pi1 + x0*phi"), Generator::Pi0),
        (parse("phi*phibar/C^2"), Generator::PhiBar),
    ])
}

/// The operator applications behind `oracle-operators`. Built from the
/// default derivation path: the oracle validates the symbolic application
/// machinery against nested differences, independent of the fault knobs.
pub fn operator_battery() -> Result<Vec<(DiffOp, Expr)>, Error> {
    let q_pi0 = crate::prequant::coordinate_operator_table(VolumeMode::L3)["pi0"].clone();
    Ok(vec![
        (q_pi0, parse("phi^2")),
        (crate::observables::momentum_operator(1)?, parse("phi^2*pi1 + phi*phibar")),
        (crate::observables::energy_operator()?, parse("phi^2 + pi0*pi1*phi")),
        (DiffOp::identity(), parse("pi0^2*phi + x3")),
    ])
}

fn check_oracle_derivatives(ctx: &Ctx) -> CheckResult {
    outcome("oracle-derivatives", (|| {
        let cfg = ctx.oracle();
        let battery = derivative_battery()?;
        let mut worst = 0.0f64;
        let mut points = 0;
        for (e, g) in &battery {
            let report = fd_check_derivative(e, *g, &cfg)?;
            points += report.cases;
            worst = worst.max(report.max_rel_error);
            if !report.passed {
                return Ok((false, format!(
                    "d/d{g} of {e}: max relative error {:.2e}, order {:?}",
                    report.max_rel_error, report.order
                )));
            }
        }
        Ok((true, format!(
            "{} derivative comparisons across {} expressions, worst relative error {worst:.2e}",
            points,
            battery.len()
        )))
    })())
}

fn check_oracle_operators(ctx: &Ctx) -> CheckResult {
    outcome("oracle-operators", (|| {
        let cfg = ctx.oracle();
        let battery = operator_battery()?;
        let mut worst = 0.0f64;
        for (op, e) in &battery {
            let report = fd_check_operator(op, e, &cfg)?;
            worst = worst.max(report.max_rel_error);
            if !report.passed {
                return Ok((false, format!(
                    "numeric application of {op} to {e}: max relative error {:.2e}",
                    report.max_rel_error
                )));
            }
        }
        Ok((true, format!(
            "symbolic and nested finite-difference applications agree, worst relative error {worst:.2e}"
        )))
    })())
}

fn check_oracle_commutator(ctx: &Ctx) -> CheckResult {
    outcome("oracle-commutator", (|| {
        let cfg = ctx.oracle();
        let q_phi = ctx.quantize(&Expr::gen(Generator::Phi));
        let q_pi0 = ctx.quantize(&Expr::gen(Generator::Pi0));
        let report = fd_check_commutator(&q_phi, &q_pi0, &parse("i*hbar*c/L^3"), &cfg)?;
        if !report.passed {
            return Ok((false, format!(
                "[Q(phi), Q(pi0)] f != (i*hbar*c/L^3) f numerically: max relative error {:.2e}",
                report.max_rel_error
            )));
        }
        Ok((true, format!(
            "nested differences reproduce (i*hbar*c/L^3) f on {} random test functions at hbar = c = L = V = 1, worst relative error {:.2e}",
            report.cases, report.max_rel_error
        )))
    })())
}

/// Pinned grid-oracle point: hbar = c = 1, m = 1, k = (sqrt(2), 1, 0, 0),
/// unit amplitude. On shell by construction.
pub fn pinned_wave_assignment() -> Assignment {
    Assignment::new()
        .with_real(Generator::Hbar, 1.0)
        .with_real(Generator::C, 1.0)
        .with_real(Generator::M, 1.0)
        .with_real(Generator::K0, 2.0_f64.sqrt())
        .with_real(Generator::K1, 1.0)
        .with_real(Generator::K2, 0.0)
        .with_real(Generator::K3, 0.0)
        .with_real(Generator::A, 1.0)
}

fn check_kg_grid(ctx: &Ctx) -> CheckResult {
    outcome("kg-grid", (|| {
        let s = SolutionSection::on_shell();
        let r = kg_grid_residual(&s, &pinned_wave_assignment(), 1e-2, 3)?;
        if !r.passed {
            return Ok((false, format!(
                "pinned mode: residual {:.3e}, ratio {:?}, bound {:.3e}",
                r.max_residual, r.ratio, r.bound
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
        let random = Assignment::random_on_shell(&mut rng, &s.metric);
        let r2 = kg_grid_residual(&s, &random, 1e-2, 3)?;
        if !r2.passed {
            return Ok((false, format!(
                "random on-shell mode: residual {:.3e}, ratio {:?}, bound {:.3e}",
                r2.max_residual, r2.ratio, r2.bound
            )));
        }
        Ok((true, format!(
            "grid d'Alembertian residual {:.3e} within bound {:.3e}, halving ratio {:.2}",
            r.max_residual,
            r.bound,
            r.ratio.unwrap_or(f64::NAN)
        )))
    })())
}

fn check_psi_state(ctx: &Ctx) -> CheckResult {
    outcome("psi-state", (|| {
        let v = VectorM::adapted();
        let general = psi_s(&Expr::mono(&[(Generator::CNorm, 2)])?)?;
        let tuned = ctx.tuned_state()?;
        for profile in [&general, &tuned] {
            if !(is_state(&profile.psi) && state_space_test(&profile.psi, &v)) {
                return Ok((false, format!("{} is not a state", profile.description)));
            }
            if profile.psi.conjugate() != profile.psi {
                return Ok((false, format!("{} is not conjugation-symmetric", profile.description)));
            }
            let pulled = SolutionSection::on_shell().pullback(&profile.psi)?;
            if pulled.invert().is_err() {
                return Ok((false, format!("pulled-back {} is not invertible", profile.description)));
            }
        }
        if general.description != "exp(phi*phibar/(C^2))" {
            return Ok((false, format!("unexpected description {}", general.description)));
        }
        if psi_s(&Expr::zero()) != Err(Error::ZeroNormalization) {
            return Ok((false, "zero normalization was not rejected".into()));
        }
        if psi_s(&Expr::gen(Generator::Phi)).is_ok() {
            return Ok((false, "coordinate-dependent normalization was not rejected".into()));
        }
        Ok((true, "reference profiles are conjugation-symmetric states with invertible pullbacks".into()))
    })())
}

/// Run the full named suite under one configuration.
pub fn run_all(cfg: &CheckConfig) -> Vec<CheckResult> {
    let ctx = Ctx::new(*cfg);
    vec![
        check_prequantize_consistency(&ctx),
        check_coordinate_operators(&ctx),
        check_commutator_table(&ctx),
        check_integrated_commutator(&ctx),
        check_momentum_operator(&ctx),
        check_momentum_eigenvalue(&ctx),
        check_energy_operator(&ctx),
        check_energy_massless(&ctx),
        check_energy_massive(&ctx),
        check_energy_massive_mechanical(&ctx),
        check_dw_onshell(&ctx),
        check_dw_offshell(&ctx),
        check_kg_symbolic(&ctx),
        check_state_space(&ctx),
        check_onshell_volume(&ctx),
        check_oracle_derivatives(&ctx),
        check_oracle_operators(&ctx),
        check_oracle_commutator(&ctx),
        check_kg_grid(&ctx),
        check_psi_state(&ctx),
    ]
}

/// Convenience wrapper: the result for one named check.
pub fn run_one(cfg: &CheckConfig, name: &str) -> Option<CheckResult> {
    run_all(cfg).into_iter().find(|r| r.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn results_by_name(cfg: &CheckConfig) -> std::collections::BTreeMap<&'static str, bool> {
        run_all(cfg).into_iter().map(|r| (r.name, r.passed)).collect()
    }

    #[test]
    fn default_suite_status() {
        let results = run_all(&CheckConfig::default());
        assert_eq!(results.len(), 20);
        for r in &results {
            if r.name == "energy-massive" {
                // known discrepancy: the recorded closed form carries an
                // extra 1/(A Abar) relative to the derivation
                assert!(!r.passed, "{}: {}", r.name, r.detail);
                assert!(r.detail.contains("A*Abar"), "{}", r.detail);
            } else {
                assert!(r.passed, "{}: {}", r.name, r.detail);
            }
        }
    }

    #[test]
    fn kappa_sign_fault_breaks_the_commutator() {
        let cfg = CheckConfig { kappa_sign: KappaSign::Minus, ..CheckConfig::default() };
        let results = results_by_name(&cfg);
        assert!(!results["commutator-table"]);
        assert!(!results["integrated-commutator"]);
        // oracle self-consistency is unaffected by the physical sign
        assert!(results["oracle-derivatives"]);
    }

    #[test]
    fn missing_restriction_fault_breaks_coordinate_operators() {
        let cfg = CheckConfig { restrict_states: false, ..CheckConfig::default() };
        let results = results_by_name(&cfg);
        assert!(!results["coordinate-operators"]);
        // the momentum density has no d/dpi0 part, so it is insensitive
        assert!(results["momentum-operator"]);
    }

    #[test]
    fn skipped_reduction_fault_breaks_onshell_checks() {
        let cfg = CheckConfig { on_shell: false, ..CheckConfig::default() };
        let results = results_by_name(&cfg);
        assert!(!results["energy-massless"]);
        assert!(!results["dw-onshell"]);
        assert!(!results["kg-symbolic"]);
        // off-shell forms are checked against off-shell sections on purpose
        assert!(results["dw-offshell"]);
    }

    #[test]
    fn run_one_finds_named_checks() {
        let cfg = CheckConfig::default();
        let r = run_one(&cfg, "commutator-table").unwrap();
        assert!(r.passed);
        assert!(run_one(&cfg, "no-such-check").is_none());
    }
}
