//! Betti numbers of genus-zero stable map spaces to Grassmannians.
//!
//! Two independent routes compute the Poincaré polynomial of
//! `M_{0,0}(G(k,n), d)` for `d <= 3`:
//!
//! - [`localization`] sums `q^(positive tangent weights)` over the torus-fixed
//!   decorated trees enumerated by [`fixedgraphs`];
//! - [`closedform`] evaluates rational generating functions in `q`.
//!
//! ```
//! use grassmap::{closedform::poincare_degree2, localization::poincare_localization};
//!
//! let loc = poincare_localization(2, 4, 2).unwrap();
//! assert_eq!(loc, poincare_degree2(2, 4).unwrap());
//! assert_eq!(loc.degree(), Some(9));
//! ```

pub mod cli;
pub mod closedform;
pub mod error;
pub mod fixedgraphs;
pub mod localization;
pub mod qpoly;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use fixedgraphs::{enumerate_fixed_graphs, DecoratedTree};
pub use qpoly::QPolynomial;
pub use weights::TorusWeight;
