use crate::error::Error;

/// Whether a generator is a field-space coordinate or a fixed parameter of
/// the problem. Coordinates admit partial derivatives and carry non-negative
/// exponents; parameters behave like scalars of the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    Coordinate,
    Parameter,
}

macro_rules! generators {
    ($(($variant:ident, $name:literal, $kind:ident)),+ $(,)?) => {
        /// The fixed alphabet of symbols the algebra is built over.
        ///
        /// Coordinates: spacetime positions `x0..x3`, the field pair
        /// `phi`/`phibar`, and polymomenta `pi0..pi3`. Parameters: physical
        /// constants, the box edge `L` and volume `V`, plane-wave amplitudes
        /// `A`/`Abar`, a normalization `C`, wavevector components `k0..k3`,
        /// the angular frequency `omega`, the vertical vector component `v0`,
        /// and the connection coefficient `alpha0`.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Generator {
            $($variant),+
        }

        impl Generator {
            pub const ALL: &'static [Generator] = &[$(Generator::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $(Generator::$variant => $name),+
                }
            }

            pub fn from_name(name: &str) -> Option<Generator> {
                match name {
                    $($name => Some(Generator::$variant),)+
                    _ => None,
                }
            }

            pub fn kind(self) -> GeneratorKind {
                match self {
                    $(Generator::$variant => GeneratorKind::$kind),+
                }
            }
        }
    };
}

// Declaration order is the canonical monomial print order: parameters first
// (so constants lead, as in m^2*c^2*phi^2), then coordinates.
generators![
    (Hbar, "hbar", Parameter),
    (M, "m", Parameter),
    (C, "c", Parameter),
    (Omega, "omega", Parameter),
    (L, "L", Parameter),
    (V, "V", Parameter),
    (A, "A", Parameter),
    (ABar, "Abar", Parameter),
    (CNorm, "C", Parameter),
    (K0, "k0", Parameter),
    (K1, "k1", Parameter),
    (K2, "k2", Parameter),
    (K3, "k3", Parameter),
    (V0, "v0", Parameter),
    (Alpha0, "alpha0", Parameter),
    (X0, "x0", Coordinate),
    (X1, "x1", Coordinate),
    (X2, "x2", Coordinate),
    (X3, "x3", Coordinate),
    (Phi, "phi", Coordinate),
    (PhiBar, "phibar", Coordinate),
    (Pi0, "pi0", Coordinate),
    (Pi1, "pi1", Coordinate),
    (Pi2, "pi2", Coordinate),
    (Pi3, "pi3", Coordinate),
];

impl Generator {
    pub fn is_coordinate(self) -> bool {
        self.kind() == GeneratorKind::Coordinate
    }

    pub fn is_parameter(self) -> bool {
        self.kind() == GeneratorKind::Parameter
    }

    /// Spacetime coordinate x^mu.
    pub fn x(mu: usize) -> Result<Generator, Error> {
        match mu {
            0 => Ok(Generator::X0),
            1 => Ok(Generator::X1),
            2 => Ok(Generator::X2),
            3 => Ok(Generator::X3),
            _ => Err(Error::IndexOutOfRange(mu)),
        }
    }

    /// Polymomentum pi^mu.
    pub fn pi(mu: usize) -> Result<Generator, Error> {
        match mu {
            0 => Ok(Generator::Pi0),
            1 => Ok(Generator::Pi1),
            2 => Ok(Generator::Pi2),
            3 => Ok(Generator::Pi3),
            _ => Err(Error::IndexOutOfRange(mu)),
        }
    }

    /// Wavevector component k^mu.
    pub fn k(mu: usize) -> Result<Generator, Error> {
        match mu {
            0 => Ok(Generator::K0),
            1 => Ok(Generator::K1),
            2 => Ok(Generator::K2),
            3 => Ok(Generator::K3),
            _ => Err(Error::IndexOutOfRange(mu)),
        }
    }

    /// Complex conjugation on the alphabet: swaps the field pair and the
    /// amplitude pair, fixes everything else (spacetime coordinates,
    /// polymomenta and the remaining parameters are real symbols).
    pub fn conjugate(self) -> Generator {
        match self {
            Generator::Phi => Generator::PhiBar,
            Generator::PhiBar => Generator::Phi,
            Generator::A => Generator::ABar,
            Generator::ABar => Generator::A,
            other => other,
        }
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Diagonal flat metric with signature entries in {+1, -1}.
///
/// Stored as the covariant diagonal g_{mu mu}; the contravariant diagonal
/// coincides for signature matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metric {
    diag: [i8; 4],
}

impl Metric {
    /// Mostly-minus Minkowski metric diag(+1, -1, -1, -1).
    pub fn minkowski() -> Metric {
        Metric { diag: [1, -1, -1, -1] }
    }

    /// g_{mu mu} as an integer sign.
    pub fn diag(&self, mu: usize) -> Result<i64, Error> {
        self.diag
            .get(mu)
            .map(|s| *s as i64)
            .ok_or(Error::IndexOutOfRange(mu))
    }
}

impl Default for Metric {
    fn default() -> Metric {
        Metric::minkowski()
    }
}
