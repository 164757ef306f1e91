//! Prequantization maps from classical observables to first-order
//! differential operators: the geometric contraction form, its printed
//! coordinate expansion, the adapted simplification, and the coordinate
//! operator table.

use std::collections::BTreeMap;

use crate::classical::{pi_contract, pi_partial_contract, theta_contract, OneFormM, OneFormP, VectorM};
use crate::diffop::{DerivWord, DiffOp};
use crate::symexpr::{Coefficient, Expr, Generator};

/// Whether the box volume stays the symbolic L^3 or is identified with V.
/// The identification is mandatory for hypersurface integration; keeping
/// L^3 reproduces the pre-identification operator displays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VolumeMode {
    #[default]
    L3,
    V,
}

impl VolumeMode {
    /// 1/L^3 or 1/V according to the mode.
    fn inverse_volume(self) -> Expr {
        match self {
            VolumeMode::L3 => Expr::mono(&[(Generator::L, -3)]).expect("parameter power"),
            VolumeMode::V => Expr::mono(&[(Generator::V, -1)]).expect("parameter power"),
        }
    }
}

impl std::fmt::Display for VolumeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VolumeMode::L3 => "L3",
            VolumeMode::V => "V",
        })
    }
}

/// Sign of the quantization constant's phase. The physical choice is
/// kappa proportional to +i hbar c; the opposite sign is exposed only for
/// sensitivity reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaSign {
    #[default]
    Plus,
    Minus,
}

/// Geometric data of the prequantization map: the spacetime vector v, the
/// normalized one-form alpha (alpha(v) = 1), the constant kappa, and the
/// volume mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantConfig {
    pub v: VectorM,
    pub alpha: OneFormM,
    pub kappa: Expr,
    pub volume_mode: VolumeMode,
}

impl QuantConfig {
    /// The adapted configuration: v = v^0 d_0, alpha = (1/v^0) d x^0, and
    /// kappa = i hbar c / (v^0 L^3), so that kappa v^0 = i hbar c / L^3
    /// exactly. The kappa sign flips the phase for sensitivity runs.
    pub fn adapted(volume_mode: VolumeMode, sign: KappaSign) -> QuantConfig {
        let phase = match sign {
            KappaSign::Plus => Coefficient::i(),
            KappaSign::Minus => -Coefficient::i(),
        };
        let kappa = Expr::mono(&[
            (Generator::Hbar, 1),
            (Generator::C, 1),
            (Generator::V0, -1),
        ])
        .expect("parameter monomial")
        .mul(&volume_mode.inverse_volume())
        .scale(&phase);
        QuantConfig {
            v: VectorM::adapted(),
            alpha: OneFormM::adapted(),
            kappa,
            volume_mode,
        }
    }

    /// kappa v^0: the scalar in front of every derivative term of the
    /// adapted map (i hbar c / L^3 for the default configuration).
    pub fn kappa_v0(&self) -> Expr {
        self.kappa.mul(
            self.v
                .component(0)
                .expect("index in range"),
        )
    }
}

/// The geometric form of the map:
/// Q(f) = f + Pi(theta(alpha), df, v) + kappa Pi(-, df, v),
/// assembled from the contraction engines with no reference to coordinates.
pub fn prequantize_abstract(f: &Expr, cfg: &QuantConfig) -> DiffOp {
    let df = OneFormP::differential(f);
    let theta_alpha = theta_contract(&cfg.alpha);
    let middle = pi_contract(&theta_alpha, &df, &cfg.v);
    let open_slot = pi_partial_contract(&df, &cfg.v);
    DiffOp::from_expr(f.add(&middle)).add(&open_slot.scale(&cfg.kappa))
}

/// The printed coordinate expansion of the same map:
/// f - alpha_nu pi^nu v^mu df/dpi^mu
///   + kappa v^mu (df/dphi d/dpi^mu - df/dpi^mu d/dphi).
pub fn coordinate_expansion(f: &Expr, cfg: &QuantConfig) -> DiffOp {
    let mut alpha_pi = Expr::zero();
    for nu in 0..4 {
        let pi = Expr::gen(Generator::pi(nu).expect("index in range"));
        alpha_pi = alpha_pi.add(&cfg.alpha.component(nu).expect("index in range").mul(&pi));
    }
    let df_dphi = f
        .partial_derivative(Generator::Phi)
        .expect("coordinate generator");
    let mut out = DiffOp::from_expr(f.clone());
    for mu in 0..4 {
        let vmu = cfg.v.component(mu).expect("index in range");
        let pi = Generator::pi(mu).expect("index in range");
        let df_dpi = f.partial_derivative(pi).expect("coordinate generator");
        out = out.add(&DiffOp::from_expr(
            alpha_pi.mul(vmu).mul(&df_dpi).neg(),
        ));
        out = out.add(&DiffOp::term(
            cfg.kappa.mul(vmu).mul(&df_dphi),
            DerivWord::d(pi).expect("coordinate"),
        ));
        out = out.add(&DiffOp::term(
            cfg.kappa.mul(vmu).mul(&df_dpi).neg(),
            DerivWord::d(Generator::Phi).expect("coordinate"),
        ));
    }
    out
}

/// The adapted simplification of the map:
/// Q(f) = f - pi^0 df/dpi^0
///        + (i hbar c / L^3)(df/dphi d/dpi^0 - df/dpi^0 d/dphi),
/// with 1/L^3 replaced by 1/V in volume mode V. Equals
/// [`prequantize_abstract`] under [`QuantConfig::adapted`].
pub fn prequantize_adapted(f: &Expr, mode: VolumeMode) -> DiffOp {
    let scalar = Expr::mono(&[(Generator::Hbar, 1), (Generator::C, 1)])
        .expect("parameter monomial")
        .mul(&mode.inverse_volume())
        .scale(&Coefficient::i());
    let df_dphi = f
        .partial_derivative(Generator::Phi)
        .expect("coordinate generator");
    let df_dpi0 = f
        .partial_derivative(Generator::Pi0)
        .expect("coordinate generator");
    DiffOp::from_expr(f.sub(&Expr::gen(Generator::Pi0).mul(&df_dpi0)))
        .add(&DiffOp::term(
            scalar.mul(&df_dphi),
            DerivWord::d(Generator::Pi0).expect("coordinate"),
        ))
        .add(&DiffOp::term(
            scalar.mul(&df_dpi0).neg(),
            DerivWord::d(Generator::Phi).expect("coordinate"),
        ))
}

/// Restricted quantized coordinate functions {phi, pi^0..pi^3}:
/// Q(phi) = phi, Q(pi^0) = -(i hbar c / L^3) d/dphi, Q(pi^i) = pi^i.
pub fn coordinate_operator_table(mode: VolumeMode) -> BTreeMap<&'static str, DiffOp> {
    let mut table = BTreeMap::new();
    let entries: [(&'static str, Generator); 5] = [
        ("phi", Generator::Phi),
        ("pi0", Generator::Pi0),
        ("pi1", Generator::Pi1),
        ("pi2", Generator::Pi2),
        ("pi3", Generator::Pi3),
    ];
    for (name, g) in entries {
        let op = prequantize_adapted(&Expr::gen(g), mode).restrict_to_states();
        table.insert(name, op);
    }
    table
}

/// Quadratic-or-higher pi^0 dependence is accepted but flagged: nothing
/// guarantees such observables quantize properly.
pub fn is_pi0_quadratic(f: &Expr) -> bool {
    f.max_degree(Generator::Pi0) >= 2
}
