//! The defining relations as exact matrix identities.

use super::Module;
use crate::linalg::Mat;
use crate::scalars::{qint, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationEntry {
    pub name: String,
    pub pass: bool,
    /// Number of nonzero entries in the checked part of the residual.
    pub residual_nnz: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RelationReport {
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.entries.iter().filter(|e| !e.pass).map(|e| e.name.clone()).collect()
    }
}

const DOT: [[i32; 2]; 2] = [[2, -2], [-2, 2]];

/// Check relations (a)-(e). With `levels = Some((lv, top))` (a truncation
/// whose lowering operators vanish out of level `top`), the commutator
/// relation is only checked on vectors below the top level.
pub fn check_relations(m: &Module, levels: Option<(&[usize], usize)>) -> RelationReport {
    let n = m.dim();
    let cols_for = |k: usize| -> Vec<usize> {
        match levels {
            None => (0..n).collect(),
            Some((lv, top)) => (0..n).filter(|&c| lv[c] + k <= top).collect(),
        }
    };
    let mut rep = RelationReport::default();
    let mut push = |name: String, resid: Mat, k: usize| {
        let cols = cols_for(k);
        let rows: Vec<usize> = (0..n).collect();
        let r = resid.select(&rows, &cols);
        let nnz = r.nnz();
        rep.entries.push(RelationEntry { name, pass: nnz == 0, residual_nnz: nnz });
    };

    // (a): K̃_0 K̃_1 = Z^{dh∨}, and the weight grading of E_i, F_i
    let zt = m.kt(0, 1).mul(&m.kt(1, 1)).sub(&Mat::identity(n).scale(&m.z.pow(4)));
    push("(a) K0*K1 = Z^4".into(), zt, 0);
    for i in 0..2 {
        for (name, mat, sign) in [("E", &m.e[i], 1), ("F", &m.f[i], -1)] {
            let mut bad = Mat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    let x = mat.get(r, c);
                    if !x.is_zero() && m.weights[r] != m.weights[c].plus_root(i, sign) {
                        bad.set(r, c, x.clone());
                    }
                }
            }
            push(format!("(a) grading {name}{i}"), bad, 0);
        }
    }
    // (b), (c)
    for j in 0..2 {
        let kj = m.kt(j, 1);
        let kji = m.kt(j, -1);
        for i in 0..2 {
            let qq = Scalar::qt_pow(4 * DOT[j][i]);
            let lhs = kj.mul(&m.e[i]).mul(&kji);
            push(format!("(b) K{j} E{i}"), lhs.sub(&m.e[i].scale(&qq)), 0);
            let lhs = kj.mul(&m.f[i]).mul(&kji);
            push(format!("(c) K{j} F{i}"), lhs.sub(&m.f[i].scale(&qq.inv().unwrap())), 0);
        }
    }
    // (d)
    let q = Scalar::qt_pow(4);
    let denom = (&q - &q.inv().unwrap()).inv().unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let c = m.e[i].commutator(&m.f[j]);
            let rhs = if i == j { m.kt(i, 1).sub(&m.kt(i, -1)).scale(&denom) } else { Mat::zeros(n, n) };
            push(format!("(d) [E{i},F{j}]"), c.sub(&rhs), 1);
        }
    }
    // (e) and its lowering counterpart
    let c3 = qint(3, 4);
    for i in 0..2 {
        let j = 1 - i;
        for (name, x) in [("E", &m.e), ("F", &m.f)] {
            let (a, b) = (&x[i], &x[j]);
            let a2 = a.mul(a);
            let a3 = a2.mul(a);
            let s = a3
                .mul(b)
                .sub(&a2.mul(b).mul(a).scale(&c3))
                .add(&a.mul(b).mul(&a2).scale(&c3))
                .sub(&b.mul(&a3));
            push(format!("(e) Serre {name}{i}{i}{i}{name}{j}"), s, 0);
        }
    }
    rep
}
