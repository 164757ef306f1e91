//! Normal-ordered linear differential operators over the expression algebra.
//!
//! An operator is a finite sum `sum_w f_w(z) d^w` with coefficient
//! expressions on the left and derivative words (multi-indices along
//! coordinate generators) on the right. Composition re-establishes the
//! normal order through the general Leibniz rule, so equality of canonical
//! forms is equality of operators.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::symexpr::{Coefficient, Expr, Generator};

/// Multi-index of derivative orders along coordinate generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivWord {
    orders: BTreeMap<Generator, u32>,
}

impl DerivWord {
    /// Empty word: the identity (order-zero) operator factor.
    pub fn identity() -> DerivWord {
        DerivWord::default()
    }

    /// First-order derivative along `g`.
    pub fn d(g: Generator) -> Result<DerivWord, Error> {
        DerivWord::from_orders([(g, 1)])
    }

    pub fn from_orders<I>(orders: I) -> Result<DerivWord, Error>
    where
        I: IntoIterator<Item = (Generator, u32)>,
    {
        let mut out = BTreeMap::new();
        for (g, n) in orders {
            if g.is_parameter() {
                return Err(Error::ParameterDerivative(g));
            }
            if n > 0 {
                *out.entry(g).or_insert(0) += n;
            }
        }
        Ok(DerivWord { orders: out })
    }

    pub fn is_identity(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self, g: Generator) -> u32 {
        self.orders.get(&g).copied().unwrap_or(0)
    }

    pub fn total_order(&self) -> u32 {
        self.orders.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Generator, u32)> + '_ {
        self.orders.iter().map(|(g, n)| (*g, *n))
    }

    /// Concatenation of derivative words (orders add; partials commute).
    pub fn mul(&self, rhs: &DerivWord) -> DerivWord {
        let mut orders = self.orders.clone();
        for (g, n) in rhs.iter() {
            *orders.entry(g).or_insert(0) += n;
        }
        DerivWord { orders }
    }

    fn minus(&self, rhs: &DerivWord) -> DerivWord {
        let mut orders = self.orders.clone();
        for (g, n) in rhs.iter() {
            let e = orders.get_mut(&g).expect("subword within word");
            *e -= n;
            if *e == 0 {
                orders.remove(&g);
            }
        }
        DerivWord { orders }
    }

    /// All subwords `gamma <= self` together with the product of binomial
    /// coefficients `prod_g C(alpha_g, gamma_g)`.
    fn subwords(&self) -> Vec<(DerivWord, i64)> {
        let entries: Vec<(Generator, u32)> = self.iter().collect();
        let mut out = vec![(DerivWord::identity(), 1)];
        for (g, alpha) in entries {
            let mut next = Vec::with_capacity(out.len() * (alpha as usize + 1));
            for (word, c) in &out {
                for gamma in 0..=alpha {
                    let mut w = word.clone();
                    if gamma > 0 {
                        w.orders.insert(g, gamma);
                    }
                    next.push((w, c * binomial(alpha, gamma)));
                }
            }
            out = next;
        }
        out
    }

    /// Derivative of `expr` by every factor of the word.
    pub fn apply(&self, expr: &Expr) -> Expr {
        let mut out = expr.clone();
        for (g, n) in self.iter() {
            for _ in 0..n {
                if out.is_zero() {
                    return out;
                }
                out = out
                    .partial_derivative(g)
                    .expect("derivative words hold coordinate generators only");
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let k = k.min(n - k.min(n));
    let mut num: i64 = 1;
    let mut den: i64 = 1;
    for j in 0..k {
        num *= (n - j) as i64;
        den *= (j + 1) as i64;
    }
    num / den
}

impl std::fmt::Display for DerivWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        for (g, n) in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "d/d{g}")?;
            } else {
                write!(f, "d^{n}/d{g}^{n}")?;
            }
        }
        Ok(())
    }
}

/// Normal-ordered differential operator: canonical map from derivative words
/// to coefficient expressions, zero coefficients dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffOp {
    terms: BTreeMap<DerivWord, Expr>,
}

impl DiffOp {
    pub fn zero() -> DiffOp {
        DiffOp::default()
    }

    /// Multiplication operator by a fixed expression.
    pub fn from_expr(expr: Expr) -> DiffOp {
        DiffOp::term(expr, DerivWord::identity())
    }

    pub fn identity() -> DiffOp {
        DiffOp::from_expr(Expr::one())
    }

    pub fn term(coeff: Expr, word: DerivWord) -> DiffOp {
        let mut out = DiffOp::zero();
        out.add_term(coeff, word);
        out
    }

    /// Plain first derivative operator along `g`.
    pub fn d(g: Generator) -> Result<DiffOp, Error> {
        Ok(DiffOp::term(Expr::one(), DerivWord::d(g)?))
    }

    fn add_term(&mut self, coeff: Expr, word: DerivWord) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(Expr::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivWord, &Expr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &DerivWord) -> Expr {
        self.terms.get(word).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn add(&self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffOp {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.neg()))
            .collect();
        DiffOp { terms }
    }

    pub fn sub(&self, rhs: &DiffOp) -> DiffOp {
        self.add(&rhs.neg())
    }

    /// Left multiplication by a function: f * (g d^w) = (f g) d^w.
    pub fn scale(&self, f: &Expr) -> DiffOp {
        let mut out = DiffOp::zero();
        for (w, c) in &self.terms {
            out.add_term(f.mul(c), w.clone());
        }
        out
    }

    pub fn scale_coeff(&self, c: &Coefficient) -> DiffOp {
        self.scale(&Expr::coeff(c.clone()))
    }

    /// Action on an expression.
    pub fn apply(&self, psi: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (w, c) in &self.terms {
            out = out.add(&c.mul(&w.apply(psi)));
        }
        out
    }

    /// Normal-ordered composition `self ∘ rhs` via the general Leibniz rule:
    /// (f d^a)(g d^b) = sum_{c <= a} C(a, c) f (d^c g) d^{a-c+b}.
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (wa, fa) in &self.terms {
            let subs = wa.subwords();
            for (wb, fb) in &rhs.terms {
                for (gamma, binom) in &subs {
                    let dg = gamma.apply(fb);
                    if dg.is_zero() {
                        continue;
                    }
                    let coeff = fa.mul(&dg).scale(&Coefficient::from_int(*binom));
                    let word = wa.minus(gamma).mul(wb);
                    out.add_term(coeff, word);
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    /// Rebuild the operator with transformed coefficients (derivative words
    /// unchanged); zero results drop out.
    pub fn map_coeffs<F>(&self, f: F) -> Result<DiffOp, Error>
    where
        F: Fn(&Expr) -> Result<Expr, Error>,
    {
        let mut out = DiffOp::zero();
        for (w, c) in &self.terms {
            out.add_term(f(c)?, w.clone());
        }
        Ok(out)
    }

    /// Restriction to the state space {psi : d psi / d pi0 = 0}: terms whose
    /// derivative word contains d/dpi0 annihilate every state and are
    /// dropped. Coefficients are untouched.
    pub fn restrict_to_states(&self) -> DiffOp {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.order(Generator::Pi0) == 0)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        DiffOp { terms }
    }

    /// Whether the (already restricted) operator maps states to states: no
    /// d/dpi0 factor in any word and no pi0 dependence in any coefficient.
    pub fn preserves_states(&self) -> bool {
        self.terms.iter().all(|(w, c)| {
            w.order(Generator::Pi0) == 0 && !c.depends_on(Generator::Pi0)
        })
    }
}

/// States are wave functions independent of pi0.
pub fn is_state(psi: &Expr) -> bool {
    !psi.depends_on(Generator::Pi0)
}

impl std::fmt::Display for DiffOp {
    /// `coefficient word` terms joined by ` + `/` - `, identity-word
    /// coefficients printed bare, e.g. `phi + (i*hbar*c/L^3) d/dpi0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let negate = c.num_terms() == 1
                && c.terms().next().is_some_and(|t| t.coeff.is_display_negative());
            if first {
                if negate {
                    f.write_str("-")?;
                }
                first = false;
            } else if negate {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let body = if negate { c.neg() } else { c.clone() };
            if w.is_identity() {
                if body.num_terms() > 1 {
                    write!(f, "({body})")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if body.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({body}) {w}")?;
            }
        }
        Ok(())
    }
}
