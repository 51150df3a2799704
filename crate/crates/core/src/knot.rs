//! Torus knot groups `<x, y | x^p = y^q>` and the components of their
//! SL(2,C) character varieties.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The torus knot `T(p, q)` with meridian `x^{-r} y^s`, `p s - q r = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusKnot {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
}

impl TorusKnot {
    /// Validate `(p, q)` and fix the meridian exponents: `s` is the inverse
    /// of `p` modulo `q` in `(0, q)` and `r = (p s - 1) / q`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if v < 2 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    expected: "an integer >= 2".into(),
                });
            }
        }
        let g = p.extended_gcd(&q);
        if g.gcd != 1 {
            return Err(Error::NonCoprime { p, q, gcd: g.gcd });
        }
        let s = g.x.rem_euclid(q);
        let r = (p * s - 1) / q;
        Ok(TorusKnot { p, q, r, s })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// All components `(a, b)`, `0 < a < p`, `0 < b < q`, `a = b mod 2`,
    /// in lexicographic order.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::with_capacity(self.component_count());
        for a in 1..self.p {
            for b in 1..self.q {
                if (a - b) % 2 == 0 {
                    out.push(Component {
                        knot: *self,
                        a: a as u32,
                        b: b as u32,
                    });
                }
            }
        }
        out
    }

    /// Components whose twisted complexes are acyclic.
    pub fn odd_components(&self) -> Vec<Component> {
        self.components()
            .into_iter()
            .filter(Component::is_acyclic)
            .collect()
    }

    /// `(p - 1)(q - 1) / 2`.
    pub fn component_count(&self) -> usize {
        ((self.p - 1) * (self.q - 1) / 2) as usize
    }

    pub fn component(&self, a: i64, b: i64) -> Result<Component> {
        if a <= 0 || a >= self.p {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                expected: format!("0 < a < p = {}", self.p),
            });
        }
        if b <= 0 || b >= self.q {
            return Err(Error::OutOfRange {
                name: "b",
                value: b,
                expected: format!("0 < b < q = {}", self.q),
            });
        }
        if (a - b) % 2 != 0 {
            return Err(Error::BadParameter(format!(
                "a = {a} and b = {b} must have the same parity"
            )));
        }
        Ok(Component {
            knot: *self,
            a: a as u32,
            b: b as u32,
        })
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}, {})", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// A component of the character variety, tied to the knot it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    knot: TorusKnot,
    a: u32,
    b: u32,
}

impl Component {
    pub fn knot(&self) -> &TorusKnot {
        &self.knot
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn parity(&self) -> Parity {
        if self.a % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Sign of the image of the central element `x^p = y^q`: `(-1)^a`.
    pub fn central_sign(&self) -> i32 {
        if self.a % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// Whether every even-dimensional lift from this component is acyclic.
    pub fn is_acyclic(&self) -> bool {
        self.parity() == Parity::Odd
    }

    pub(crate) fn require_odd(&self) -> Result<()> {
        match self.parity() {
            Parity::Odd => Ok(()),
            Parity::Even => Err(Error::WrongParity {
                a: self.a,
                b: self.b,
            }),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) of {}", self.a, self.b, self.knot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_meridian_exponents() {
        let k = TorusKnot::new(2, 3).unwrap();
        assert_eq!((k.r(), k.s()), (1, 2));
        let k = TorusKnot::new(3, 4).unwrap();
        assert_eq!((k.r(), k.s()), (2, 3));
        let k = TorusKnot::new(7, 3).unwrap();
        assert_eq!(7 * k.s() - 3 * k.r(), 1);
        assert!(0 < k.s() && k.s() < 3 && 0 <= k.r() && k.r() < 7);
    }

    #[test]
    fn invalid_pairs() {
        assert_eq!(
            TorusKnot::new(4, 6),
            Err(Error::NonCoprime { p: 4, q: 6, gcd: 2 })
        );
        assert!(matches!(
            TorusKnot::new(1, 3),
            Err(Error::OutOfRange { name: "p", .. })
        ));
        assert!(matches!(
            TorusKnot::new(3, 0),
            Err(Error::OutOfRange { name: "q", .. })
        ));
    }

    #[test]
    fn enumeration() {
        let pairs = |p, q| -> Vec<(u32, u32)> {
            TorusKnot::new(p, q)
                .unwrap()
                .components()
                .iter()
                .map(|c| (c.a(), c.b()))
                .collect()
        };
        assert_eq!(pairs(2, 3), vec![(1, 1)]);
        assert_eq!(pairs(3, 5), vec![(1, 1), (1, 3), (2, 2), (2, 4)]);
        assert_eq!(pairs(5, 7).len(), 12);
    }

    #[test]
    fn classification() {
        let k = TorusKnot::new(3, 5).unwrap();
        let c11 = k.component(1, 1).unwrap();
        let c22 = k.component(2, 2).unwrap();
        let c24 = k.component(2, 4).unwrap();
        assert_eq!(c11.central_sign(), -1);
        assert_eq!(c22.central_sign(), 1);
        assert!(c11.is_acyclic());
        assert!(!c24.is_acyclic());
        assert_eq!(k.component(1, 3).unwrap().central_sign(), -1);
        assert!(k.component(1, 2).is_err());
        assert!(k.component(3, 1).is_err());
        assert_eq!(c22.require_odd(), Err(Error::WrongParity { a: 2, b: 2 }));
    }
}
