use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::symexpr::{Coefficient, Generator, Metric};

/// Product of generators with integer exponents. Coordinate exponents are
/// non-negative; parameter exponents may be any sign (Laurent monomials).
/// Zero exponents are never stored, so the empty monomial is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    powers: BTreeMap<Generator, i64>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn generator(g: Generator) -> Monomial {
        let mut powers = BTreeMap::new();
        powers.insert(g, 1);
        Monomial { powers }
    }

    pub fn from_powers<I>(powers: I) -> Result<Monomial, Error>
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        let mut out = Monomial::one();
        for (g, n) in powers {
            out.push(g, n)?;
        }
        Ok(out)
    }

    fn push(&mut self, g: Generator, n: i64) -> Result<(), Error> {
        let e = self.powers.entry(g).or_insert(0);
        *e += n;
        if *e == 0 {
            self.powers.remove(&g);
        } else if g.is_coordinate() && self.powers.get(&g).is_some_and(|v| *v < 0) {
            return Err(Error::NegativeCoordinatePower(g));
        }
        Ok(())
    }

    pub fn exponent(&self, g: Generator) -> i64 {
        self.powers.get(&g).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Generator, i64)> + '_ {
        self.powers.iter().map(|(g, n)| (*g, *n))
    }

    pub fn has_coordinate_factor(&self) -> bool {
        self.powers.keys().any(|g| g.is_coordinate())
    }

    /// Product of monomials. Cannot fail: coordinate exponents are
    /// non-negative on both sides, so their sum is too.
    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (g, n) in rhs.iter() {
            out.push(g, n).expect("coordinate exponents stay non-negative");
        }
        out
    }

    /// Integer power. Negative exponents require a parameter-only monomial.
    pub fn pow(&self, n: i64) -> Result<Monomial, Error> {
        if n == 0 {
            return Ok(Monomial::one());
        }
        if n < 0 {
            if let Some(g) = self.powers.keys().find(|g| g.is_coordinate()) {
                return Err(Error::NegativeCoordinatePower(*g));
            }
        }
        let powers = self.powers.iter().map(|(g, e)| (*g, e * n)).collect();
        Ok(Monomial { powers })
    }

    /// Conjugation permutes the alphabet (phi <-> phibar, A <-> Abar).
    pub fn conjugate(&self) -> Monomial {
        let powers = self
            .powers
            .iter()
            .map(|(g, n)| (g.conjugate(), *n))
            .collect();
        Monomial { powers }
    }
}

/// Argument of an exponential factor: an expression that is itself free of
/// exponential factors, so exp arguments never nest.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpArg(Expr);

impl ExpArg {
    pub fn zero() -> ExpArg {
        ExpArg::default()
    }

    pub fn new(arg: Expr) -> Result<ExpArg, Error> {
        if arg.is_exp_free() {
            Ok(ExpArg(arg))
        } else {
            Err(Error::NestedExponential)
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Term {
    mono: Monomial,
    arg: ExpArg,
}

/// Borrowed view of one canonical term `coeff * monomial * exp(arg)`.
#[derive(Debug, Clone, Copy)]
pub struct TermView<'a> {
    pub coeff: &'a Coefficient,
    pub monomial: &'a Monomial,
    pub exp_arg: &'a ExpArg,
}

/// Finite sum of terms `coefficient * monomial * exp(argument)` in canonical
/// form: terms are keyed by (monomial, argument) in a sorted map and zero
/// coefficients are dropped, so structural equality is semantic equality and
/// iteration order is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    terms: BTreeMap<Term, Coefficient>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::coeff(Coefficient::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::coeff(Coefficient::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::coeff(Coefficient::from_ratio(num, den))
    }

    /// The imaginary unit as an expression.
    pub fn imag() -> Expr {
        Expr::coeff(Coefficient::i())
    }

    pub fn coeff(c: Coefficient) -> Expr {
        Expr::from_term(c, Monomial::one(), ExpArg::zero())
    }

    pub fn gen(g: Generator) -> Expr {
        Expr::from_term(Coefficient::one(), Monomial::generator(g), ExpArg::zero())
    }

    /// Monomial `prod g^n` as an expression; fails on negative coordinate
    /// exponents.
    pub fn mono(powers: &[(Generator, i64)]) -> Result<Expr, Error> {
        Ok(Expr::from_term(
            Coefficient::one(),
            Monomial::from_powers(powers.iter().copied())?,
            ExpArg::zero(),
        ))
    }

    fn from_term(coeff: Coefficient, mono: Monomial, arg: ExpArg) -> Expr {
        let mut out = Expr::zero();
        out.add_term(coeff, mono, arg);
        out
    }

    /// `exp(arg)`; the argument must be free of exponential factors.
    pub fn exp_of(arg: Expr) -> Result<Expr, Error> {
        Ok(Expr::from_term(
            Coefficient::one(),
            Monomial::one(),
            ExpArg::new(arg)?,
        ))
    }

    fn add_term(&mut self, coeff: Coefficient, mono: Monomial, arg: ExpArg) {
        if coeff.is_zero() {
            return;
        }
        let key = Term { mono, arg };
        let entry = self.terms.entry(key.clone()).or_insert_with(Coefficient::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &Expr::one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = TermView<'_>> {
        self.terms.iter().map(|(t, c)| TermView {
            coeff: c,
            monomial: &t.mono,
            exp_arg: &t.arg,
        })
    }

    /// Canonical-form equality (the representation is canonical, so this is
    /// semantic equality of expressions).
    pub fn equals(&self, other: &Expr) -> bool {
        self == other
    }

    /// True when no term carries an exponential factor.
    pub fn is_exp_free(&self) -> bool {
        self.terms.keys().all(|t| t.arg.is_zero())
    }

    /// True when the expression only involves parameter generators.
    pub fn is_parameter_only(&self) -> bool {
        self.generators().iter().all(|g| g.is_parameter())
    }

    /// Every generator appearing in a monomial or an exponential argument.
    pub fn generators(&self) -> BTreeSet<Generator> {
        let mut out = BTreeSet::new();
        for (t, _) in &self.terms {
            out.extend(t.mono.iter().map(|(g, _)| g));
            out.extend(t.arg.expr().generators());
        }
        out
    }

    pub fn depends_on(&self, g: Generator) -> bool {
        self.generators().contains(&g)
    }

    /// Largest polynomial exponent of `g` across terms (exponential
    /// arguments are not inspected). Zero for an absent generator.
    pub fn max_degree(&self, g: Generator) -> i64 {
        self.terms
            .keys()
            .map(|t| t.mono.exponent(g))
            .max()
            .unwrap_or(0)
    }

    /// Split into (parameter-only part, remainder). The parameter-only part
    /// collects the terms whose monomial and exponential argument involve no
    /// coordinate generators.
    pub fn split_parameter_part(&self) -> (Expr, Expr) {
        let mut params = Expr::zero();
        let mut rest = Expr::zero();
        for (t, c) in &self.terms {
            let coord = t.mono.has_coordinate_factor()
                || t.arg.expr().generators().iter().any(|g| g.is_coordinate());
            let target = if coord { &mut rest } else { &mut params };
            target.add_term(c.clone(), t.mono.clone(), t.arg.clone());
        }
        (params, rest)
    }

    pub fn neg(&self) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.clone(), -c.clone()))
            .collect();
        Expr { terms }
    }

    pub fn add(&self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(c.clone(), t.mono.clone(), t.arg.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Expr) -> Expr {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &rhs.terms {
                let arg = ta.arg.expr().add(tb.arg.expr());
                out.add_term(
                    ca * cb,
                    ta.mono.mul(&tb.mono),
                    ExpArg::new(arg).expect("sum of exp-free arguments is exp-free"),
                );
            }
        }
        out
    }

    /// Scale by an exact scalar.
    pub fn scale(&self, c: &Coefficient) -> Expr {
        self.mul(&Expr::coeff(c.clone()))
    }

    /// Integer power; negative exponents go through [`Expr::invert`].
    pub fn pow(&self, n: i64) -> Result<Expr, Error> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        let mut out = Expr::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Exact reciprocal. Defined for single-term expressions whose monomial
    /// is parameter-only; the exponential factor inverts by negating its
    /// argument.
    pub fn invert(&self) -> Result<Expr, Error> {
        let (term, coeff) = match self.terms.len() {
            0 => return Err(Error::NonInvertible("zero expression".into())),
            1 => self.terms.iter().next().expect("len checked"),
            n => return Err(Error::NonInvertible(format!("sum of {n} terms"))),
        };
        if let Some((g, _)) = term.mono.iter().find(|(g, _)| g.is_coordinate()) {
            return Err(Error::NonInvertible(format!("coordinate factor `{g}`")));
        }
        let inv_coeff = coeff.inverse().expect("canonical form stores no zeros");
        let inv_mono = term.mono.pow(-1)?;
        let inv_arg = ExpArg::new(term.arg.expr().neg())?;
        Ok(Expr::from_term(inv_coeff, inv_mono, inv_arg))
    }

    /// Partial derivative along a coordinate generator, with the product and
    /// chain rules applied to monomials and exponential factors.
    pub fn partial_derivative(&self, g: Generator) -> Result<Expr, Error> {
        if g.is_parameter() {
            return Err(Error::ParameterDerivative(g));
        }
        let mut out = Expr::zero();
        for (t, c) in &self.terms {
            let n = t.mono.exponent(g);
            if n > 0 {
                let mut lowered = t.mono.clone();
                lowered
                    .push(g, -1)
                    .expect("exponent is positive before lowering");
                out.add_term(
                    c.clone() * Coefficient::from_int(n),
                    lowered,
                    t.arg.clone(),
                );
            }
            if t.arg.expr().depends_on(g) {
                let darg = t.arg.expr().partial_derivative(g)?;
                let factor = Expr::from_term(c.clone(), t.mono.clone(), t.arg.clone());
                out = out.add(&factor.mul(&darg));
            }
        }
        Ok(out)
    }

    /// Simultaneous substitution of generators by expressions. Monomial
    /// powers are raised through [`Expr::pow`], so a negative parameter power
    /// demands an invertible replacement; exponential arguments are
    /// substituted recursively and must come back exponential-free.
    pub fn substitute(&self, rules: &BTreeMap<Generator, Expr>) -> Result<Expr, Error> {
        let mut out = Expr::zero();
        for (t, c) in &self.terms {
            let mut head = Expr::coeff(c.clone());
            for (g, n) in t.mono.iter() {
                let base = match rules.get(&g) {
                    Some(e) => e.clone(),
                    None => Expr::gen(g),
                };
                head = head.mul(&base.pow(n)?);
            }
            let new_arg = t.arg.expr().substitute(rules)?;
            out = out.add(&head.mul(&Expr::exp_of(new_arg)?));
        }
        Ok(out)
    }

    /// Substitute a single generator.
    pub fn substitute_one(&self, g: Generator, value: &Expr) -> Result<Expr, Error> {
        let mut rules = BTreeMap::new();
        rules.insert(g, value.clone());
        self.substitute(&rules)
    }

    /// Complex conjugation: conjugate coefficients, swap phi <-> phibar and
    /// A <-> Abar, and conjugate exponential arguments.
    pub fn conjugate(&self) -> Expr {
        let mut out = Expr::zero();
        for (t, c) in &self.terms {
            let arg = ExpArg::new(t.arg.expr().conjugate())
                .expect("conjugation preserves exp-freeness");
            out.add_term(c.conj(), t.mono.conjugate(), arg);
        }
        out
    }

    /// Mass-shell right-hand side for `metric`: the expression equal to
    /// (k0)^2 on shell, namely g00 * (m^2 c^2 / hbar^2 - sum_i g_ii (k_i)^2).
    pub fn dispersion_rhs(metric: &Metric) -> Expr {
        let mut rhs = Expr::mono(&[
            (Generator::M, 2),
            (Generator::C, 2),
            (Generator::Hbar, -2),
        ])
        .expect("parameter monomial");
        for i in 1..4 {
            let ki = Generator::k(i).expect("index in range");
            let gii = metric.diag(i).expect("index in range");
            rhs = rhs.sub(
                &Expr::mono(&[(ki, 2)])
                    .expect("parameter monomial")
                    .scale(&Coefficient::from_int(gii)),
            );
        }
        rhs.scale(&Coefficient::from_int(
            metric.diag(0).expect("index in range"),
        ))
    }

    /// Rewrite every power (k0)^n with n >= 2 using the mass-shell relation
    /// (k0)^2 = g00 (m^2 c^2 / hbar^2 - sum_i g_ii (k_i)^2), leaving at most
    /// one power of k0 per term. Exponential arguments are reduced too. The
    /// map is idempotent.
    pub fn on_shell_reduce(&self, metric: &Metric) -> Expr {
        let rhs = Expr::dispersion_rhs(metric);
        self.reduce_k0(&rhs)
    }

    /// Rewrite every power L^{3n} as V^n (the box-volume identification
    /// L^3 = V), including inside exponential arguments. Terms whose L
    /// exponent is not a multiple of three are rejected. Idempotent: the
    /// result carries no L at all.
    pub fn fix_volume(&self) -> Result<Expr, Error> {
        let mut out = Expr::zero();
        for (t, c) in &self.terms {
            let arg = ExpArg::new(t.arg.expr().fix_volume()?)
                .expect("volume fixing keeps arguments exp-free");
            let n = t.mono.exponent(Generator::L);
            let mut mono = t.mono.clone();
            if n != 0 {
                if n % 3 != 0 {
                    return Err(Error::VolumeNotCubed(n));
                }
                mono.push(Generator::L, -n).expect("clearing L");
                mono.push(Generator::V, n / 3).expect("parameter exponent");
            }
            out.add_term(c.clone(), mono, arg);
        }
        Ok(out)
    }

    fn reduce_k0(&self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (t, c) in &self.terms {
            let arg = ExpArg::new(t.arg.expr().reduce_k0(rhs))
                .expect("reduction keeps arguments exp-free");
            let n = t.mono.exponent(Generator::K0);
            if n < 2 {
                out.add_term(c.clone(), t.mono.clone(), arg);
                continue;
            }
            let (q, r) = (n / 2, n % 2);
            let mut mono = t.mono.clone();
            mono.push(Generator::K0, -n).expect("clearing k0");
            if r > 0 {
                mono.push(Generator::K0, r).expect("parameter exponent");
            }
            let base = Expr::from_term(c.clone(), mono, arg);
            out = out.add(&base.mul(&rhs.pow(q).expect("non-negative power")));
        }
        out
    }
}

impl std::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(&self, &rhs)
    }
}

impl std::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(&self, &rhs)
    }
}

impl std::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(&self, &rhs)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Generator as G;

    fn phi() -> Expr {
        Expr::gen(G::Phi)
    }

    fn pi0() -> Expr {
        Expr::gen(G::Pi0)
    }

    #[test]
    fn ring_identities() {
        let a = phi().add(&Expr::int(2));
        let b = pi0().sub(&Expr::imag());
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.sub(&a), Expr::zero());
        assert_eq!(a.mul(&Expr::one()), a);
        assert_eq!(a.mul(&Expr::zero()), Expr::zero());
        // (phi + 2)(phi - 2) = phi^2 - 4
        let diff = phi().add(&Expr::int(2)).mul(&phi().sub(&Expr::int(2)));
        let expect = phi().mul(&phi()).sub(&Expr::int(4));
        assert_eq!(diff, expect);
    }

    #[test]
    fn canonical_cancellation() {
        let e = phi().add(&phi().neg());
        assert!(e.is_zero());
        let e = phi().mul(&pi0()).sub(&pi0().mul(&phi()));
        assert!(e.is_zero());
    }

    #[test]
    fn monomial_exponent_rules() {
        assert!(Expr::mono(&[(G::Phi, -1)]).is_err());
        assert!(Expr::mono(&[(G::L, -3)]).is_ok());
        let m = Monomial::from_powers([(G::Phi, 2), (G::Phi, -2)]).unwrap();
        assert!(m.is_one());
    }

    #[test]
    fn derivative_power_and_product_rule() {
        // d/dphi (phi^3) = 3 phi^2
        let e = phi().pow(3).unwrap();
        let d = e.partial_derivative(G::Phi).unwrap();
        assert_eq!(d, phi().pow(2).unwrap().scale(&Coefficient::from_int(3)));
        // product rule against the expanded form
        let f = phi().mul(&pi0());
        let g = phi().add(&pi0());
        let lhs = f.mul(&g).partial_derivative(G::Phi).unwrap();
        let rhs = f
            .partial_derivative(G::Phi)
            .unwrap()
            .mul(&g)
            .add(&f.mul(&g.partial_derivative(G::Phi).unwrap()));
        assert_eq!(lhs, rhs);
        // parameters are constants
        assert!(phi().partial_derivative(G::Hbar).is_err());
        assert_eq!(
            Expr::gen(G::Hbar).partial_derivative(G::Phi).unwrap(),
            Expr::zero()
        );
    }

    #[test]
    fn exp_chain_rule() {
        // d/dx0 exp(i k0 x0) = i k0 exp(i k0 x0)
        let arg = Expr::mono(&[(G::K0, 1), (G::X0, 1)]).unwrap().mul(&Expr::imag());
        let e = Expr::exp_of(arg.clone()).unwrap();
        let d = e.partial_derivative(G::X0).unwrap();
        let expect = Expr::mono(&[(G::K0, 1)])
            .unwrap()
            .mul(&Expr::imag())
            .mul(&e);
        assert_eq!(d, expect);
    }

    #[test]
    fn exp_merge_on_multiplication() {
        let u = Expr::mono(&[(G::X0, 1)]).unwrap();
        let a = Expr::exp_of(u.clone()).unwrap();
        let b = Expr::exp_of(u.neg()).unwrap();
        assert_eq!(a.mul(&b), Expr::one());
        let c = a.mul(&a);
        assert_eq!(
            c,
            Expr::exp_of(u.scale(&Coefficient::from_int(2))).unwrap()
        );
    }

    #[test]
    fn invert_rules() {
        let e = Expr::mono(&[(G::Hbar, 1), (G::L, -3)])
            .unwrap()
            .scale(&Coefficient::i());
        let inv = e.invert().unwrap();
        assert_eq!(e.mul(&inv), Expr::one());
        assert!(phi().invert().is_err());
        assert!(phi().add(&Expr::one()).invert().is_err());
        assert!(Expr::zero().invert().is_err());
        // exp inverts through its argument even with parameters inside
        let u = Expr::mono(&[(G::A, 1), (G::ABar, 1)]).unwrap();
        let e = Expr::exp_of(u).unwrap();
        assert_eq!(e.mul(&e.invert().unwrap()), Expr::one());
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let mut rules = BTreeMap::new();
        rules.insert(G::Phi, pi0().add(&Expr::int(1)));
        let a = phi().pow(2).unwrap().add(&phi());
        let b = phi().mul(&pi0());
        let lhs = a.mul(&b).substitute(&rules).unwrap();
        let rhs = a
            .substitute(&rules)
            .unwrap()
            .mul(&b.substitute(&rules).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_into_exponent_cancels_cleanly() {
        // exp(phi*phibar) with phi -> A exp(u), phibar -> Abar exp(-u)
        // collapses to exp(A*Abar): the exponential factors cancel before the
        // argument is rebuilt.
        let u = Expr::mono(&[(G::K1, 1), (G::X1, 1)]).unwrap();
        let gamma = Expr::gen(G::A).mul(&Expr::exp_of(u.clone()).unwrap());
        let gammabar = Expr::gen(G::ABar).mul(&Expr::exp_of(u.neg()).unwrap());
        let mut rules = BTreeMap::new();
        rules.insert(G::Phi, gamma);
        rules.insert(G::PhiBar, gammabar);
        let psi = Expr::exp_of(phi().mul(&Expr::gen(G::PhiBar))).unwrap();
        let pulled = psi.substitute(&rules).unwrap();
        let expect = Expr::exp_of(Expr::mono(&[(G::A, 1), (G::ABar, 1)]).unwrap()).unwrap();
        assert_eq!(pulled, expect);
    }

    #[test]
    fn substitution_rejects_true_nesting() {
        let gamma = Expr::gen(G::A).mul(
            &Expr::exp_of(Expr::mono(&[(G::X1, 1)]).unwrap()).unwrap(),
        );
        let psi = Expr::exp_of(phi()).unwrap();
        let mut rules = BTreeMap::new();
        rules.insert(G::Phi, gamma);
        assert_eq!(psi.substitute(&rules), Err(Error::NestedExponential));
    }

    #[test]
    fn conjugation_is_involutive_and_multiplicative() {
        let z = phi()
            .scale(&Coefficient::i())
            .add(&Expr::gen(G::A).mul(&pi0()));
        assert_eq!(z.conjugate().conjugate(), z);
        let w = Expr::gen(G::PhiBar).sub(&Expr::imag());
        assert_eq!(
            z.mul(&w).conjugate(),
            z.conjugate().mul(&w.conjugate())
        );
    }

    #[test]
    fn on_shell_reduction() {
        let metric = Metric::minkowski();
        let rhs = Expr::dispersion_rhs(&metric);
        // k0^2 -> rhs exactly
        let e = Expr::mono(&[(G::K0, 2)]).unwrap();
        assert_eq!(e.on_shell_reduce(&metric), rhs);
        // odd powers keep one k0
        let e = Expr::mono(&[(G::K0, 3)]).unwrap();
        assert_eq!(
            e.on_shell_reduce(&metric),
            Expr::mono(&[(G::K0, 1)]).unwrap().mul(&rhs)
        );
        // idempotent
        let e = Expr::mono(&[(G::K0, 5), (G::Phi, 1)]).unwrap();
        let r = e.on_shell_reduce(&metric);
        assert_eq!(r.on_shell_reduce(&metric), r);
        // k0 inside an exponential argument stays linear and untouched
        let lin = Expr::mono(&[(G::K0, 1), (G::X0, 1)]).unwrap();
        let e = Expr::exp_of(lin).unwrap();
        assert_eq!(e.on_shell_reduce(&metric), e);
    }

    #[test]
    fn volume_fixing() {
        let e = Expr::mono(&[(G::Hbar, 1), (G::C, 1), (G::L, -3), (G::V, 1)]).unwrap();
        let fixed = e.fix_volume().unwrap();
        assert_eq!(fixed, Expr::mono(&[(G::Hbar, 1), (G::C, 1)]).unwrap());
        assert_eq!(fixed.fix_volume().unwrap(), fixed);
        let e = Expr::mono(&[(G::L, 6)]).unwrap();
        assert_eq!(
            e.fix_volume().unwrap(),
            Expr::mono(&[(G::V, 2)]).unwrap()
        );
        assert_eq!(
            Expr::mono(&[(G::L, 2)]).unwrap().fix_volume(),
            Err(Error::VolumeNotCubed(2))
        );
    }

    #[test]
    fn split_parameter_part_separates_coordinates() {
        let param = Expr::mono(&[(G::Hbar, 1), (G::Omega, 1)]).unwrap();
        let coord = Expr::mono(&[(G::M, 2), (G::Phi, 2)]).unwrap();
        let (p, r) = param.add(&coord).split_parameter_part();
        assert_eq!(p, param);
        assert_eq!(r, coord);
        // coordinates hiding in an exponential argument count as coordinate terms
        let hidden = Expr::exp_of(Expr::mono(&[(G::X0, 1)]).unwrap()).unwrap();
        let (p, r) = hidden.split_parameter_part();
        assert!(p.is_zero());
        assert_eq!(r, hidden);
    }
}
