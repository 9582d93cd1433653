//! Exact coefficient field: rational functions in `q̃`, `z` and the unit
//! symbols for generic base points, plus truncated series in `t`.

pub mod gcd;
pub mod mono;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod series;

pub use mono::{AL, BE, NVARS, QT, U, V, VAR_NAMES, Z};
pub use parse::sc;
pub use poly::Poly;
pub use ratfun::{qint, Scalar, ScalarError};
pub use series::{SeriesError, TruncSeries};

use num_complex::Complex64;

/// Numeric assignment of the six variables, defaulting to 1.
pub fn assignment(pairs: &[(usize, Complex64)]) -> [Complex64; NVARS] {
    let mut a = [Complex64::new(1.0, 0.0); NVARS];
    for (k, v) in pairs {
        a[*k] = *v;
    }
    a
}
