//! Affine Cartan data, weights and the pairing `q^{[λ,μ]}`.

use crate::scalars::{Scalar, AL, BE, QT, Z};
use num_integer::Integer;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum RootError {
    #[error("pairing of two generic base points is not declared")]
    UndeclaredBase,
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Raw input form, as loaded from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumSpec {
    pub pairing: Vec<Vec<i64>>,
    #[serde(default)]
    pub special: usize,
    #[serde(default)]
    pub marks: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootDatum {
    pub pairing: Vec<Vec<i64>>,
    pub special: usize,
    /// Kernel generator coefficients `n_i`; empty if the pairing has no kernel.
    pub marks: Vec<i64>,
    pub d: i64,
    pub hvee: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ValidationReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

fn det(m: &[Vec<i64>]) -> i64 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k] == BigInt::from(0) {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != BigInt::from(0)) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let v: i64 = (&a[n - 1][n - 1]).try_into().unwrap_or(0);
    sign * v
}

/// Primitive integer generator of a one-dimensional rational kernel, sign-normalised positive.
fn kernel_generator(m: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = m.len();
    // integer row reduction over rationals as (num, den) via BigInt fractions
    let mut a: Vec<Vec<num_rational_like::Q>> =
        m.iter().map(|r| r.iter().map(|&x| num_rational_like::Q::int(x)).collect()).collect();
    let mut piv = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].inv();
        for j in 0..n {
            a[row][j] = a[row][j].mul(&inv);
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = f.mul(&a[row][j]);
                    a[r][j] = a[r][j].sub(&t);
                }
            }
        }
        piv.push(col);
        row += 1;
    }
    if piv.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !piv.contains(c))?;
    let mut v = vec![num_rational_like::Q::int(0); n];
    v[free] = num_rational_like::Q::int(1);
    for (r, &p) in piv.iter().enumerate() {
        v[p] = a[r][free].neg();
    }
    let l = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(&x.1));
    let ints: Vec<BigInt> = v.iter().map(|x| &x.0 * (&l / &x.1)).collect();
    let g = ints.iter().fold(BigInt::from(0), |acc, x| acc.gcd(x));
    let mut out: Vec<i64> = ints.iter().map(|x| (x / &g).try_into().unwrap()).collect();
    if out.iter().any(|&x| x < 0) {
        for x in out.iter_mut() {
            *x = -*x;
        }
    }
    Some(out)
}

mod num_rational_like {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};

    #[derive(Clone, Debug)]
    pub struct Q(pub BigInt, pub BigInt);

    impl Q {
        pub fn int(x: i64) -> Q {
            Q(BigInt::from(x), BigInt::from(1))
        }
        fn norm(n: BigInt, d: BigInt) -> Q {
            let g = n.gcd(&d);
            let (mut n, mut d) = (n / &g, d / &g);
            if d.is_negative() {
                n = -n;
                d = -d;
            }
            Q(n, d)
        }
        pub fn is_zero(&self) -> bool {
            self.0.is_zero()
        }
        pub fn mul(&self, o: &Q) -> Q {
            Q::norm(&self.0 * &o.0, &self.1 * &o.1)
        }
        pub fn sub(&self, o: &Q) -> Q {
            Q::norm(&self.0 * &o.1 - &o.0 * &self.1, &self.1 * &o.1)
        }
        pub fn inv(&self) -> Q {
            Q::norm(self.1.clone(), self.0.clone())
        }
        pub fn neg(&self) -> Q {
            Q(-self.0.clone(), self.1.clone())
        }
    }
}

impl RootDatum {
    /// Affine sl₂: `I = {0,1}`, pairing `[[2,-2],[-2,2]]`.
    pub fn affine_sl2() -> RootDatum {
        RootDatum::from_spec(&DatumSpec { pairing: vec![vec![2, -2], vec![-2, 2]], special: 0, marks: None })
            .expect("affine sl2 datum")
    }

    /// Build from raw data. Derived constants are computed where possible;
    /// invariants are checked separately by [`RootDatum::validate`].
    pub fn from_spec(s: &DatumSpec) -> Result<RootDatum, RootError> {
        let n = s.pairing.len();
        if n == 0 || s.pairing.iter().any(|r| r.len() != n) {
            return Err(RootError::Malformed("pairing matrix must be square and non-empty".into()));
        }
        if s.special >= n {
            return Err(RootError::Malformed(format!("special vertex {} out of range", s.special)));
        }
        let marks = match &s.marks {
            Some(m) if m.len() == n => m.clone(),
            Some(_) => return Err(RootError::Malformed("marks length differs from rank".into())),
            None => kernel_generator(&s.pairing).unwrap_or_default(),
        };
        let fin: Vec<Vec<i64>> = (0..n)
            .filter(|&i| i != s.special)
            .map(|i| {
                let ii = s.pairing[i][i].max(1);
                (0..n).filter(|&j| j != s.special).map(|j| 2 * s.pairing[i][j] / ii).collect()
            })
            .collect();
        let d = det(&fin).abs().max(1);
        let hvee = marks.iter().enumerate().map(|(i, m)| m * s.pairing[i][i] / 2).sum();
        Ok(RootDatum { pairing: s.pairing.clone(), special: s.special, marks, d, hvee })
    }

    pub fn from_json(text: &str) -> Result<RootDatum, RootError> {
        let s: DatumSpec = serde_json::from_str(text)?;
        RootDatum::from_spec(&s)
    }

    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    /// `(i·j)`.
    pub fn dot(&self, i: usize, j: usize) -> i64 {
        self.pairing[i][j]
    }

    /// `q_i = q̃^{d(i·i)}` as a power of `q̃`, i.e. `q^{(i·i)/2}`.
    pub fn qi_exp(&self, i: usize) -> i32 {
        (2 * self.pairing[i][i]) as i32
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.rank();
        let mut f = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.pairing[i][j] != self.pairing[j][i] {
                    f.push(format!("pairing not symmetric at ({i},{j})"));
                }
            }
            if self.pairing[i][i] <= 0 || self.pairing[i][i] % 2 != 0 {
                f.push(format!("(i·i) must be a positive even integer at {i}"));
            }
        }
        if self.pairing[self.special][self.special] != 2 {
            f.push("(i0·i0) != 2".into());
        }
        if self.marks.is_empty() {
            f.push("no kernel generator".into());
        } else {
            for i in 0..n {
                let s: i64 = (0..n).map(|j| self.pairing[i][j] * self.marks[j]).sum();
                if s != 0 {
                    f.push(format!("marks not in kernel at row {i}"));
                }
            }
            if self.marks.iter().any(|&m| m <= 0) {
                f.push("marks must be positive".into());
            }
            if self.marks[self.special] != 1 {
                f.push("n_i0 != 1".into());
            }
            let h: i64 = self.marks.iter().enumerate().map(|(i, m)| m * self.pairing[i][i] / 2).sum();
            if h != self.hvee {
                f.push("h∨ inconsistent with marks".into());
            }
        }
        ValidationReport { pass: f.is_empty(), failures: f }
    }

    /// `q₁ = (z q̃^{h∨})^{2d}`.
    pub fn q1(&self) -> Scalar {
        let e = (2 * self.d) as i32;
        (&Scalar::var(Z) * &Scalar::qt_pow(self.hvee as i32)).pow(e)
    }
}

/// A weight `c_a·a + c_b·b + k·ω` of affine sl₂; `ω` is the fundamental
/// weight, `α = 2ω`, and the simple roots project to `0' = -α`, `1' = α`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub base: [i32; 2],
    pub off: i32,
}

impl Weight {
    pub const ZERO: Weight = Weight { base: [0, 0], off: 0 };

    pub fn new(base: [i32; 2], off: i32) -> Weight {
        Weight { base, off }
    }

    pub fn omega(k: i32) -> Weight {
        Weight { base: [0, 0], off: k }
    }

    /// The generic base point `a` (or `b`).
    pub fn base_a() -> Weight {
        Weight { base: [1, 0], off: 0 }
    }

    pub fn base_b() -> Weight {
        Weight { base: [0, 1], off: 0 }
    }

    /// Projection `i'` of the simple root `i`, in units of `ω`.
    pub fn root_off(i: usize) -> i32 {
        if i == 0 {
            -2
        } else {
            2
        }
    }

    pub fn plus_root(self, i: usize, times: i32) -> Weight {
        Weight { base: self.base, off: self.off + times * Weight::root_off(i) }
    }

    pub fn add(self, o: Weight) -> Weight {
        Weight { base: [self.base[0] + o.base[0], self.base[1] + o.base[1]], off: self.off + o.off }
    }

    pub fn neg(self) -> Weight {
        Weight { base: [-self.base[0], -self.base[1]], off: -self.off }
    }

    pub fn has_base(&self) -> bool {
        self.base != [0, 0]
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (c, s) in self.base.iter().zip(["a", "b"]) {
            match *c {
                0 => {}
                1 => parts.push(s.to_string()),
                -1 => parts.push(format!("-{s}")),
                c => parts.push(format!("{c}{s}")),
            }
        }
        if self.off != 0 || parts.is_empty() {
            parts.push(format!("{}ω", self.off));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// `q^{[λ,μ]}` for affine sl₂, with `q^{[a,ω]} = al`, `q^{[b,ω]} = be`, `q^{[ω,ω]} = q̃²`.
pub fn pairing(l: Weight, m: Weight) -> Result<Scalar, RootError> {
    if l.has_base() && m.has_base() {
        return Err(RootError::UndeclaredBase);
    }
    let mut e = [0i32; 6];
    e[QT] = 2 * l.off * m.off;
    e[AL] = l.base[0] * m.off + m.base[0] * l.off;
    e[BE] = l.base[1] * m.off + m.base[1] * l.off;
    Ok(Scalar::monomial(1, e))
}

/// Eigenvalue of `K̃_i` on the weight space `λ`, for a module with `Z = z`.
/// `K̃_1 = q^{[α,λ]}` and `K̃_0 K̃_1 = Z^{dh∨} = z⁴`.
pub fn ktilde(i: usize, l: Weight, z: &Scalar) -> Scalar {
    let k1 = pairing(Weight::omega(2), l).expect("root pairing is always declared");
    if i == 1 {
        k1
    } else {
        &z.pow(4) * &k1.inv().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::sc;

    #[test]
    fn affine_sl2_constants() {
        let r = RootDatum::affine_sl2();
        assert_eq!((r.d, r.hvee), (2, 2));
        assert_eq!(r.marks, vec![1, 1]);
        assert!(r.validate().pass);
        assert_eq!(r.q1(), sc("z^4*q^2"));
    }

    #[test]
    fn pairing_values() {
        assert_eq!(pairing(Weight::omega(1), Weight::omega(1)).unwrap(), sc("qt^2"));
        assert_eq!(pairing(Weight::ZERO, Weight::base_a()).unwrap(), Scalar::one());
        assert!(pairing(Weight::base_a(), Weight::base_b()).is_err());
    }

    #[test]
    fn finite_type_fails() {
        let r = RootDatum::from_spec(&DatumSpec { pairing: vec![vec![2, -1], vec![-1, 2]], special: 0, marks: None }).unwrap();
        let rep = r.validate();
        assert!(!rep.pass);
        assert!(rep.failures.iter().any(|f| f.contains("kernel")));
    }
}
