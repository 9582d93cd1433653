//! Identity checks on coinvariants: `T ⊗ Ť`, `φ = (T⁻¹ ⊗ id ⊗ Ť⁻¹) ∘ δ` and
//! the fixed point of `∇`.

use super::space::{CoinvSpace, MidSlot, Mode, OuterSlot, PVec};
use super::theta::{s_finite_lower, s_verma_finite};
use super::CoinvError;
use crate::cat_o::{dotted_tensor, VermaTrunc};
use crate::findim::{swap, Module};
use crate::linalg::{Mat, SerMat};
use crate::rootdata::Weight;
use crate::scalars::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Rank over `A_n` of the coinvariant space.
    pub rank: usize,
    pub order: usize,
    /// Basis tensors on which both sides were compared.
    pub checked: usize,
    pub failures: usize,
    /// Generator images with a nonzero projection (should be 0).
    pub annihilation_failures: usize,
    pub retraction: bool,
    /// The comparison restricted to `U₀`-representatives.
    pub reps_fixed: bool,
}

impl IdentityCheck {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.annihilation_failures == 0 && self.retraction && self.reps_fixed && self.checked > 0
    }
}

fn add_to(pv: &mut PVec, k: usize, p: [usize; 3], c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = pv.entry((k, p)).or_insert_with(Scalar::zero);
    *e = &*e + &c;
}

/// Compares `π(image(p))` with `π(p)` on the basis tensors whose image stays
/// inside the truncation: Sugawara operators on a generalized Verma module
/// raise the depth by up to `level - 1`, so depths are bounded by `margin`.
fn compare(space: &CoinvSpace, name: &str, margin: [usize; 2], image: impl Fn([usize; 3]) -> PVec) -> IdentityCheck {
    let [dv, dm, dw] = space.dims();
    let mut checked = 0;
    let mut failures = 0;
    let mut reps_fixed = true;
    for iv in 0..dv {
        for im in 0..dm {
            for iw in 0..dw {
                let p = [iv, im, iw];
                if space.left.depth[iv] + margin[0] >= space.left.levels || space.right.depth[iw] + margin[1] >= space.right.levels {
                    continue;
                }
                let lhs = space.project(&image(p));
                let ok = lhs == *space.project_basis(p);
                checked += 1;
                if !ok {
                    failures += 1;
                    if space.reps.contains(&p) {
                        reps_fixed = false;
                    }
                }
            }
        }
    }
    IdentityCheck {
        name: name.into(),
        rank: space.rank(),
        order: space.order,
        checked,
        failures,
        annihilation_failures: space.annihilation_failures(),
        retraction: space.retraction_ok(),
        reps_fixed,
    }
}

fn margins(v: &VermaTrunc, vb: &VermaTrunc) -> [usize; 2] {
    [v.nil.level - 1, vb.nil.level - 1]
}

fn sugawara_pair(v: &VermaTrunc, vb: &VermaTrunc, a: Weight) -> Result<(Mat, Mat), CoinvError> {
    let tv = v.sugawara(a).0;
    let tb = vb.sugawara(a).0;
    // Ť_W = (T_{ωW})⁻¹ and ωW = V_b
    let tw = tb.inverse().ok_or_else(|| CoinvError::Singular("T on ωW".into()))?;
    Ok((tv, tw))
}

/// `T ⊗ Ť` acts as the identity on `⟨V, W⟩`, `W = ω(vb)`.
pub fn check_t_tcheck(v: &VermaTrunc, vb: &VermaTrunc, a: Weight) -> Result<IdentityCheck, CoinvError> {
    let space = CoinvSpace::new(OuterSlot::left(v), MidSlot::plain(&Module::trivial()), OuterSlot::right(vb), Mode::Plain)?;
    let (tv, tw) = sugawara_pair(v, vb, a)?;
    Ok(compare(&space, "T⊗Ť on ⟨V,W⟩", margins(v, vb), |[iv, _, iw]| {
        let mut pv = PVec::new();
        for r in 0..tv.rows() {
            let x = tv.get(r, iv);
            if x.is_zero() {
                continue;
            }
            for s in 0..tw.rows() {
                add_to(&mut pv, 0, [r, 0, s], x * tw.get(s, iw));
            }
        }
        pv
    }))
}

/// The pieces of `ⁿδ_{V,X,W'}` for `V` (possibly twisted) with `Z = z`,
/// finite `X` and `W'` with `Z = z⁻¹`: `s_{V,X}`, the flip, and
/// `s⁻¹_{T_{zq}X[t], W'}`.
pub struct Delta {
    pub dv: usize,
    pub dx: usize,
    pub dw: usize,
    pub order: usize,
    s1: Mat,
    s3inv: SerMat,
}

impl Delta {
    pub fn new(v: &Module, vmax: u32, x: &Module, w: &Module, n: usize) -> Result<Delta, CoinvError> {
        let s1 = s_verma_finite(v, x, vmax);
        let q = Scalar::qt_pow(4);
        let x2 = x.twist(&(&v.z * &q), false);
        let s3 = s_finite_lower(&x2, w, n);
        let s3inv = s3.inverse().ok_or_else(|| CoinvError::Singular("s_{X,W} constant term".into()))?;
        Ok(Delta { dv: v.dim(), dx: x.dim(), dw: w.dim(), order: n, s1, s3inv })
    }

    /// `δ(v ⊗ x ⊗ w)` as `(t-degree, [v, x, w]) ↦ coefficient`.
    pub fn apply(&self, iv: usize, ix: usize, iw: usize) -> PVec {
        let (dv, dx, dw) = (self.dv, self.dx, self.dw);
        let mut out = PVec::new();
        let c1 = iv * dx + ix;
        for r1 in 0..dx * dv {
            let a = self.s1.get(r1, c1);
            if a.is_zero() {
                continue;
            }
            let (x1, v1) = (r1 / dv, r1 % dv);
            // flip X ⊗ (V ⊗ W) → (V ⊗ W) ⊗ X, then s⁻¹ on W ⊗ X
            let c3 = iw * dx + x1;
            for (k, m) in self.s3inv.coeffs.iter().enumerate() {
                for r3 in 0..dx * dw {
                    let b = m.get(r3, c3);
                    if !b.is_zero() {
                        add_to(&mut out, k, [v1, r3 / dw, r3 % dw], a * b);
                    }
                }
            }
        }
        out
    }
}

fn apply_outer(pv: &PVec, left: &Mat, right: Option<&Mat>) -> PVec {
    let mut out = PVec::new();
    for ((k, [v, m, w]), c) in pv {
        for r in 0..left.rows() {
            let x = left.get(r, *v);
            if x.is_zero() {
                continue;
            }
            let y = x * c;
            match right {
                None => add_to(&mut out, *k, [r, *m, *w], y),
                Some(rm) => {
                    for s in 0..rm.rows() {
                        let z = rm.get(s, *w);
                        if !z.is_zero() {
                            add_to(&mut out, *k, [r, *m, s], &y * z);
                        }
                    }
                }
            }
        }
    }
    out
}

fn e_word_bound(v: &VermaTrunc) -> u32 {
    (v.n - 1 + v.nil.level) as u32
}

/// `φ_{V,X,W} = (T⁻¹ ⊗ id ⊗ Ť⁻¹) ∘ ⁿδ` compared with the identity on
/// `⟨ⁿ((V ⊗ X)[t] ⊗ W)⟩`, `W = ω(vb)`.
pub fn check_phi(v: &VermaTrunc, x: &Module, vb: &VermaTrunc, a: Weight, n: usize) -> Result<IdentityCheck, CoinvError> {
    let space = CoinvSpace::new(OuterSlot::left(v), MidSlot::twisted(x, n), OuterSlot::right(vb), Mode::Gamma(n))?;
    let w = vb.module.omega_twist();
    let delta = Delta::new(&v.module, e_word_bound(v), x, &w, n)?;
    let (tv, tw) = sugawara_pair(v, vb, a)?;
    let tvi = tv.inverse().ok_or_else(|| CoinvError::Singular("T_V".into()))?;
    let twi = tw.inverse().ok_or_else(|| CoinvError::Singular("Ť_W".into()))?;
    Ok(compare(&space, "φ_{V,X,W} = id", margins(v, vb), |[iv, ix, iw]| apply_outer(&delta.apply(iv, ix, iw), &tvi, Some(&twi))))
}

/// Lift data for `(V ⊗ X)_n` inside `V_N ⊗ X`: columns `Δ(b)(n ⊗ y)` and
/// their inverse.
struct DottedLift {
    p: Mat,
    pinv: Mat,
    /// F-degree of `b` for each column.
    level: Vec<usize>,
}

fn dotted_lift(v: &VermaTrunc, x: &Module) -> Result<DottedLift, CoinvError> {
    let big = v.module.tensor(x);
    let dx = x.dim();
    let dim = big.dim();
    let mut p = Mat::zeros(dim, dim);
    let start_of = |j: usize| v.labels.iter().position(|l| l.word.is_empty() && l.nil == j).expect("level 0");
    for r in 0..v.dim() {
        let l = &v.labels[r];
        for y in 0..dx {
            let mut vec = vec![Scalar::zero(); dim];
            vec[start_of(l.nil) * dx + y] = Scalar::one();
            for &i in l.word.iter().rev() {
                vec = big.f[i as usize].mul_vec(&vec);
            }
            for (k, s) in vec.into_iter().enumerate() {
                if !s.is_zero() {
                    p.set(k, r * dx + y, s);
                }
            }
        }
    }
    let pinv = p.inverse().ok_or_else(|| CoinvError::Singular("Δ(b)(n⊗y) basis".into()))?;
    let level = (0..dim).map(|c| v.levels[c / dx]).collect();
    Ok(DottedLift { p, pinv, level })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NablaCheck {
    pub fixed_point: IdentityCheck,
    /// Tensors `Δ(b)(n ⊗ y) ⊗ y' ⊗ w` with `deg b ≥ n` whose projection is nonzero.
    pub tail_not_killed: usize,
    /// `T_n` from `Ω_{≤n-1}` and `Ω_{≤n}` agree.
    pub t_independent: bool,
}

impl NablaCheck {
    pub fn pass(&self) -> bool {
        self.fixed_point.pass() && self.tail_not_killed == 0 && self.t_independent
    }
}

/// `ⁿ∇(ⁿξ̃) = ⁿξ̃` on `⟨ⁿ((V ⊗ X)[t] ⊗ Y ⊗ W)⟩`, `W = ω(vb)`.
///
/// `ⁿξ̃` identifies `(V ⊗̇ X)_n` with `(V ⊗ X)_n` through the basis
/// `Δ(b)(n ⊗ y)`, so in representative coordinates it is the identity and the
/// fixed-point identity reads `(T_V⁻¹ ⊗ id) ∘ δ_{T⁻¹V, T⁻¹X, Y⊗W} ∘ (T_n ⊗ id) = id`.
pub fn check_nabla(v: &VermaTrunc, x: &Module, y: &Module, vb: &VermaTrunc, a: Weight, n: usize) -> Result<NablaCheck, CoinvError> {
    if v.n < n {
        return Err(CoinvError::Order(n));
    }
    let space = CoinvSpace::new(OuterSlot::left(v), MidSlot::twisted_plain(x, y, n), OuterSlot::right(vb), Mode::Gamma(n))?;
    let (dv, dx, dy) = (v.dim(), x.dim(), y.dim());
    let w = vb.module.omega_twist();
    let dw = w.dim();
    let yw = y.tensor(&w);
    let z = &v.module.z;
    let c = (z * &Scalar::qt_pow(2)).pow(2);
    let ci = c.inv().unwrap();
    let delta = Delta::new(&v.module.twist(&ci, false), e_word_bound(v), &x.twist(&ci, false), &yw, n)?;
    let dotted = dotted_tensor(v, x, n, a)?;
    let lift = dotted_lift(v, x)?;
    let tvi = v.sugawara(a).0.inverse().ok_or_else(|| CoinvError::Singular("T_V".into()))?;
    let low: Vec<usize> = (0..dv * dx).filter(|&c| lift.level[c] < n).collect();
    // T_n on (V ⊗ X) coordinates: lift ∘ T_n ∘ (drop deg ≥ n) ∘ P⁻¹
    let tn = lift.p.select(&(0..dv * dx).collect::<Vec<_>>(), &low).mul(&dotted.t).mul(&lift.pinv.select(&low, &(0..dv * dx).collect::<Vec<_>>()));
    let mid = |ix: usize, iy: usize| ix * dy + iy;
    let fixed_point = compare(&space, "∇(ξ̃) = ξ̃", margins(v, vb), |[iv, im, iw]| {
        let (ix, iy) = (im / dy, im % dy);
        let wp = iy * dw + iw;
        let mut out = PVec::new();
        for r in 0..dv * dx {
            let s = tn.get(r, iv * dx + ix);
            if s.is_zero() {
                continue;
            }
            for ((k, [v1, x1, w1]), cf) in delta.apply(r / dx, r % dx, wp) {
                add_to(&mut out, k, [v1, mid(x1, w1 / dw), w1 % dw], s * &cf);
            }
        }
        apply_outer(&out, &tvi, None)
    });
    let mut tail_not_killed = 0;
    for col in (0..dv * dx).filter(|&c| lift.level[c] >= n) {
        for iy in 0..dy {
            for iw in 0..dw {
                let mut pv = PVec::new();
                for r in 0..dv * dx {
                    add_to(&mut pv, 0, [r / dx, mid(r % dx, iy), iw], lift.p.get(r, col).clone());
                }
                if space.project(&pv).iter().any(|s| !s.is_zero()) {
                    tail_not_killed += 1;
                }
            }
        }
    }
    Ok(NablaCheck { fixed_point, tail_not_killed, t_independent: dotted.p_independent })
}

/// The flip `P: X** ⊗ V → V ⊗ X` sends `(X** ⊗ V)₀` onto `(V ⊗ X)₀`, so it
/// induces an isomorphism of coinvariants. Returns the number of generator
/// images whose flip leaves the target span, plus one if the spans differ in rank.
pub fn check_flip_descends(v: &Module, x: &Module) -> usize {
    let xdd = x.dual().dual();
    let src = xdd.tensor(v);
    let tgt = v.tensor(x);
    let d = src.dim();
    let aug = |m: &Module| -> Vec<Mat> {
        let mut g: Vec<Mat> = (0..2).flat_map(|i| [m.e[i].clone(), m.f[i].clone()]).collect();
        for i in 0..2 {
            g.push(m.kt(i, 1).sub(&Mat::identity(d)));
        }
        g
    };
    let span_t: Vec<Mat> = aug(&tgt);
    let stacked = |ms: &[Mat]| -> Mat {
        let cols: Vec<Vec<Scalar>> = ms.iter().flat_map(|m| (0..d).map(move |c| m.col(c))).collect();
        Mat::from_fn(d, cols.len(), |r, c| cols[c][r].clone())
    };
    let base = stacked(&span_t);
    let r0 = base.rank();
    let p = swap(xdd.dim(), v.dim());
    let flipped: Vec<Mat> = aug(&src).iter().map(|g| p.mul(g)).collect();
    let mut bad = usize::from(stacked(&flipped).rank() != r0);
    for g in aug(&src) {
        for c in 0..d {
            let col = p.mul_vec(&g.col(c));
            if col.iter().all(|s| s.is_zero()) {
                continue;
            }
            let ext = Mat::from_fn(d, base.cols() + 1, |r, k| if k < base.cols() { base.get(r, k).clone() } else { col[r].clone() });
            if ext.rank() > r0 {
                bad += 1;
            }
        }
    }
    bad
}
