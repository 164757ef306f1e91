use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::symexpr::{Coefficient, Expr};

fn rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a positive-normalized coefficient (see
/// [`Coefficient::is_display_negative`]). Mixed complex values are wrapped in
/// parentheses so the result always reads as one product factor.
fn coefficient(c: &Coefficient) -> String {
    let re = c.re();
    let im = c.im();
    match (re.is_zero(), im.is_zero()) {
        (_, true) => rational(re),
        (true, false) => {
            if im.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rational(im))
            }
        }
        (false, false) => {
            let sign = if im.is_negative() { "-" } else { "+" };
            let mag = im.abs();
            let im_part = if mag.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rational(&mag))
            };
            format!("({}{}{})", rational(re), sign, im_part)
        }
    }
}

fn power(name: &str, n: i64) -> String {
    if n == 1 {
        name.to_string()
    } else {
        format!("{name}^{n}")
    }
}

impl std::fmt::Display for Expr {
    /// Canonical plain-text form. Terms appear in canonical map order joined
    /// by ` + ` / ` - `; within a term the coefficient comes first, then
    /// positive powers joined by `*`, then negative powers as a trailing
    /// `/denominator`, then the exponential factor. The output parses back to
    /// an equal expression.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for term in self.terms() {
            let negative = term.coeff.is_display_negative();
            if first {
                if negative {
                    f.write_str("-")?;
                }
                first = false;
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let c = if negative {
                -term.coeff.clone()
            } else {
                term.coeff.clone()
            };

            let mut numer: Vec<String> = Vec::new();
            let mut denom: Vec<String> = Vec::new();
            if !c.is_one() {
                numer.push(coefficient(&c));
            }
            for (g, n) in term.monomial.iter() {
                if n > 0 {
                    numer.push(power(g.name(), n));
                } else {
                    denom.push(power(g.name(), -n));
                }
            }
            if !term.exp_arg.is_zero() {
                numer.push(format!("exp({})", term.exp_arg.expr()));
            }
            if numer.is_empty() {
                numer.push("1".to_string());
            }
            f.write_str(&numer.join("*"))?;
            match denom.len() {
                0 => {}
                1 => write!(f, "/{}", denom[0])?,
                _ => write!(f, "/({})", denom.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::symexpr::{Coefficient, Expr, Generator as G};

    #[test]
    fn representative_forms() {
        assert_eq!(Expr::zero().to_string(), "0");
        assert_eq!(Expr::one().to_string(), "1");
        assert_eq!(Expr::int(-3).to_string(), "-3");
        assert_eq!(Expr::ratio(1, 2).to_string(), "1/2");
        assert_eq!(Expr::imag().to_string(), "i");
        assert_eq!(Expr::imag().neg().to_string(), "-i");
        assert_eq!(Expr::gen(G::Phi).to_string(), "phi");

        let e = Expr::mono(&[(G::Hbar, 1), (G::C, 1), (G::L, -3)])
            .unwrap()
            .scale(&Coefficient::i());
        assert_eq!(e.to_string(), "i*hbar*c/L^3");

        let e = Expr::mono(&[(G::L, -3)]).unwrap();
        assert_eq!(e.to_string(), "1/L^3");

        let e = Expr::mono(&[(G::Hbar, -1), (G::L, -3)]).unwrap();
        assert_eq!(e.to_string(), "1/(hbar*L^3)");

        let e = Expr::gen(G::Phi).sub(&Expr::mono(&[(G::Pi0, 2)]).unwrap());
        assert_eq!(e.to_string(), "phi - pi0^2");

        let mixed = Expr::coeff(Coefficient::from_int(1) + Coefficient::i())
            .mul(&Expr::gen(G::A));
        assert_eq!(mixed.to_string(), "(1+i)*A");

        let arg = Expr::mono(&[(G::K0, 1), (G::X0, 1)])
            .unwrap()
            .scale(&Coefficient::i());
        let e = Expr::gen(G::A).mul(&Expr::exp_of(arg).unwrap());
        assert_eq!(e.to_string(), "A*exp(i*k0*x0)");
    }
}
