//! Plane-wave solution sections and the pullback of phase-space expressions
//! to spacetime expressions.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::symexpr::{Coefficient, Expr, Generator, Metric};

/// Plane-wave section of the extended phase space: the field value is
/// gamma(x) = A exp(i g_{mu nu} k^mu x^nu) and the polymomenta are the
/// induced gradients pi^mu = g^{mu nu} d_nu gamma = i k^mu gamma.
///
/// The amplitude and wavevector stay symbolic (generators `A`, `Abar`,
/// `k0..k3`). With `on_shell` set, every pullback is reduced with the
/// dispersion relation g_{mu nu} k^mu k^nu = m^2 c^2 / hbar^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionSection {
    pub metric: Metric,
    pub on_shell: bool,
}

impl SolutionSection {
    pub fn new(metric: Metric, on_shell: bool) -> SolutionSection {
        SolutionSection { metric, on_shell }
    }

    pub fn on_shell() -> SolutionSection {
        SolutionSection::new(Metric::minkowski(), true)
    }

    pub fn off_shell() -> SolutionSection {
        SolutionSection::new(Metric::minkowski(), false)
    }

    /// The phase g_{mu nu} k^mu x^nu (without the leading i).
    pub fn phase(&self) -> Expr {
        let mut out = Expr::zero();
        for mu in 0..4 {
            let sign = self.metric.diag(mu).expect("index in range");
            let term = Expr::mono(&[
                (Generator::k(mu).expect("index in range"), 1),
                (Generator::x(mu).expect("index in range"), 1),
            ])
            .expect("non-negative coordinate power");
            out = out.add(&term.scale(&Coefficient::from_int(sign)));
        }
        out
    }

    /// gamma(x) = A exp(i g_{mu nu} k^mu x^nu).
    pub fn gamma_expr(&self) -> Expr {
        let arg = self.phase().scale(&Coefficient::i());
        Expr::gen(Generator::A).mul(&Expr::exp_of(arg).expect("polynomial phase"))
    }

    fn rules(&self) -> BTreeMap<Generator, Expr> {
        let gamma = self.gamma_expr();
        let mut rules = BTreeMap::new();
        rules.insert(Generator::Phi, gamma.clone());
        rules.insert(Generator::PhiBar, gamma.conjugate());
        for mu in 0..4 {
            let k = Generator::k(mu).expect("index in range");
            let pi = Generator::pi(mu).expect("index in range");
            let ik_gamma = Expr::gen(k).mul(&gamma).scale(&Coefficient::i());
            rules.insert(pi, ik_gamma);
        }
        rules
    }

    /// Substitute phi -> gamma, phibar -> conj(gamma), pi^mu -> i k^mu gamma
    /// (spacetime coordinates are fixed), then reduce on shell if the section
    /// says so.
    pub fn pullback(&self, e: &Expr) -> Result<Expr, Error> {
        let pulled = e.substitute(&self.rules())?;
        Ok(if self.on_shell {
            pulled.on_shell_reduce(&self.metric)
        } else {
            pulled
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Generator as G;

    #[test]
    fn gamma_components() {
        let s = SolutionSection::off_shell();
        let gamma = s.gamma_expr();
        // single term: coefficient 1, monomial A, exponent i(k0x0 - k1x1 - k2x2 - k3x3)
        assert_eq!(gamma.num_terms(), 1);
        let t = gamma.terms().next().unwrap();
        assert!(t.coeff.is_one());
        assert_eq!(t.monomial.exponent(G::A), 1);
        let expect_arg: Expr = "i*k0*x0 - i*k1*x1 - i*k2*x2 - i*k3*x3".parse().unwrap();
        assert_eq!(t.exp_arg.expr(), &expect_arg);
        // conjugate swaps A -> Abar and i -> -i
        let conj = gamma.conjugate();
        let t = conj.terms().next().unwrap();
        assert_eq!(t.monomial.exponent(G::ABar), 1);
        assert_eq!(t.exp_arg.expr(), &expect_arg.neg());
    }

    #[test]
    fn pullback_rules() {
        let s = SolutionSection::off_shell();
        let gamma = s.gamma_expr();
        for mu in 0..4 {
            let pi = Expr::gen(G::pi(mu).unwrap());
            let got = s.pullback(&pi).unwrap();
            let expect = Expr::gen(G::k(mu).unwrap())
                .mul(&gamma)
                .scale(&crate::symexpr::Coefficient::i());
            assert_eq!(got, expect);
        }
        // base coordinates are fixed
        let x1 = Expr::gen(G::X1);
        assert_eq!(s.pullback(&x1).unwrap(), x1);
        // gamma gammabar = A Abar: the phases cancel
        let prod = Expr::gen(G::Phi).mul(&Expr::gen(G::PhiBar));
        assert_eq!(
            s.pullback(&prod).unwrap(),
            Expr::mono(&[(G::A, 1), (G::ABar, 1)]).unwrap()
        );
    }

    #[test]
    fn pullback_is_consistent_with_gradients() {
        // pi^mu = g^{mu nu} d gamma / d x^nu must match the substitution rule.
        let s = SolutionSection::off_shell();
        let gamma = s.gamma_expr();
        for mu in 0..4 {
            let sign = s.metric.diag(mu).unwrap();
            let grad = gamma
                .partial_derivative(G::x(mu).unwrap())
                .unwrap()
                .scale(&crate::symexpr::Coefficient::from_int(sign));
            let pulled = s.pullback(&Expr::gen(G::pi(mu).unwrap())).unwrap();
            assert_eq!(pulled, grad);
        }
    }

    #[test]
    fn on_shell_flag_reduces() {
        let on = SolutionSection::on_shell();
        let off = SolutionSection::off_shell();
        let pi0_sq = Expr::gen(G::Pi0).pow(2).unwrap();
        // off-shell keeps k0^2; on-shell rewrites it through the dispersion
        let pulled_off = off.pullback(&pi0_sq).unwrap();
        let pulled_on = on.pullback(&pi0_sq).unwrap();
        assert_ne!(pulled_off, pulled_on);
        assert_eq!(pulled_off.on_shell_reduce(&on.metric), pulled_on);
        assert_eq!(pulled_on.max_degree(G::K0), 0);
    }

    #[test]
    fn pullback_is_a_ring_map() {
        let s = SolutionSection::on_shell();
        let a = Expr::gen(G::Phi).mul(&Expr::gen(G::Pi1)).add(&Expr::gen(G::X2));
        let b = Expr::gen(G::Pi0).add(&Expr::gen(G::PhiBar));
        let sum = s.pullback(&a.add(&b)).unwrap();
        assert_eq!(sum, s.pullback(&a).unwrap().add(&s.pullback(&b).unwrap()));
        let prod = s.pullback(&a.mul(&b)).unwrap();
        assert_eq!(prod, s.pullback(&a).unwrap().mul(&s.pullback(&b).unwrap()));
    }

    #[test]
    fn pullback_commutes_with_conjugation_off_momenta() {
        // pi^mu is a real symbol whose pullback i k^mu gamma is not, so the
        // property is stated for pi-free expressions only.
        let s = SolutionSection::off_shell();
        let e = Expr::gen(G::Phi)
            .mul(&Expr::gen(G::PhiBar))
            .add(&Expr::gen(G::Phi).scale(&crate::symexpr::Coefficient::i()));
        assert_eq!(
            s.pullback(&e.conjugate()).unwrap(),
            s.pullback(&e).unwrap().conjugate()
        );
    }
}
