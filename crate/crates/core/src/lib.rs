//! Higher even-dimensional Reidemeister torsion of torus knot exteriors.
//!
//! For a torus knot `T(p, q)`, an irreducible representation `rho` from a
//! component `(a, b)` of the SL(2,C) character variety, and its symmetric
//! power `sigma_2N`, the twisted chain complex of the knot exterior is
//! acyclic exactly when `a` and `b` are odd. Its torsion is computed two
//! independent ways:
//!
//! * [`twisted::torsion_generic`]: base-change determinants on the boundary
//!   maps, at whatever precision the conditioning asks for
//!   ([`twisted::torsion_generic_adaptive`]).
//! * [`asymptotics::torsion_closed_form`]: the sine product, in log space.
//!
//! and the normalized sequence `log |Tor| / (2N)^2` is checked against its
//! explicit squeeze bounds ([`asymptotics::verify_convergence`]).
//!
//! ```
//! use num_complex::Complex64;
//! use torsionknot::asymptotics::{torsion, torsion_closed_form, Method};
//! use torsionknot::knot::TorusKnot;
//! use torsionknot::sl2::Sl2Rep;
//! use torsionknot::twisted::PrecisionPolicy;
//!
//! let c = TorusKnot::new(2, 3)?.component(1, 1)?;
//! let rep = Sl2Rep::build(&c, Complex64::new(2.0, 0.0))?;
//! let generic = torsion(&rep, 4, Method::Generic, &PrecisionPolicy::default())?;
//! let closed = torsion_closed_form(&c, 4)?;
//! assert!(generic.relative_difference(&closed) < 1e-10);
//! # Ok::<(), torsionknot::Error>(())
//! ```
//!
//! Runnable examples, one per capability:
//!
//! | example | shows |
//! |---|---|
//! | `components` | components `(a, b)`, parity, acyclicity |
//! | `representation` | building and checking `rho` |
//! | `sym_power` | `sigma_n`: homomorphism, weights, characters |
//! | `homology` | homology dimensions on odd and even components |
//! | `generic_torsion` | generic vs structured vs closed form |
//! | `closed_form` | the sine product for huge `N` |
//! | `asymptotics` | the squeeze of the normalized sequence |
//! | `high_precision` | precision estimates and adaptive verification |
//!
//! The `torsionknot` binary wraps [`cli`].

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod knot;
pub mod matrix;
pub mod scalar;
pub mod sl2;
pub mod sympower;
pub mod tolerance;
pub mod twisted;

pub use error::{Error, Result};
