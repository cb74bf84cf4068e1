//! Special functions, quadrature, root finding and random streams.

mod erfc;
mod quadrature;
mod random;
mod roots;

pub use erfc::{erf, erfc, erfcx};
pub use quadrature::{integrate_1d, integrate_2d_wedge, Integral, PlanarDensity, QuadratureSpec};
pub use random::{sample_normal, RandomStream};
pub use roots::{find_root, minimize_golden};
