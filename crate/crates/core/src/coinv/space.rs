//! Coinvariants of `V ⊗ M ⊗ W` by exact rewriting, over `A_n = ℂ[t]/tⁿ` for
//! the `Γ`-action or over the scalars for the plain `U`-action.
//!
//! `V` is a (generalized) Verma truncation, `M` a finite middle with a given
//! action, `W = ω(V')`. Lowering letters of `V` and raising letters of `W` are
//! moved across until both outer slots sit in their nil-parts; what is left
//! is a `U₀`-coinvariant representative.

use super::CoinvError;
use crate::braiding::gamma_tensor;
use crate::cat_o::VermaTrunc;
use crate::findim::{ActionSet, Module};
use crate::linalg::{Mat, SerMat};
use crate::rootdata::{RootDatum, Weight};
use crate::scalars::Scalar;
use crate::uqalgebra::f_component_basis;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// An outer slot: a Verma truncation read on its own (`V`) or through `ω` (`W`).
#[derive(Debug, Clone)]
pub struct OuterSlot {
    /// The module acting on the slot.
    pub module: Module,
    pub depth: Vec<usize>,
    /// Truncation level: depths `0..levels`.
    pub levels: usize,
    /// Basis vector `c` is `X_i (Σ tail)` with `X = F` on `V` and `X = E` on `W`.
    pub gen: Vec<Option<(u8, Vec<(usize, Scalar)>)>>,
}

impl OuterSlot {
    fn from_verma(v: &VermaTrunc, module: Module) -> OuterSlot {
        let datum = RootDatum::affine_sl2();
        let nd = v.nil.dim();
        let gen = (0..v.dim())
            .map(|c| {
                let l = &v.labels[c];
                let (&i, tail) = l.word.split_first()?;
                let mut nu = l.nu.clone();
                nu[i as usize] -= 1;
                let start = v.labels.iter().position(|x| x.nu == nu).expect("grading present");
                let t = f_component_basis(&nu, &datum)
                    .reduce(tail)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (start + k * nd + l.nil, x))
                    .collect();
                Some((i, t))
            })
            .collect();
        OuterSlot { module, depth: v.levels.clone(), levels: v.n, gen }
    }

    /// `V` in the left slot.
    pub fn left(v: &VermaTrunc) -> OuterSlot {
        OuterSlot::from_verma(v, v.module.clone())
    }

    /// `ω(V)` in the right slot.
    pub fn right(v: &VermaTrunc) -> OuterSlot {
        OuterSlot::from_verma(v, v.module.omega_twist())
    }

    pub fn dim(&self) -> usize {
        self.depth.len()
    }

    pub fn nil_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&r| self.depth[r] == 0).collect()
    }
}

/// The middle slot with its action series `E_i`, `Φ_i` (or `E_i`, `F_i`).
#[derive(Debug, Clone)]
pub struct MidSlot {
    pub module: Module,
    pub e: [SerMat; 2],
    pub phi: [SerMat; 2],
}

impl MidSlot {
    fn from_actions(module: Module, a: ActionSet) -> MidSlot {
        let [e0, e1, p0, p1]: [SerMat; 4] = a.gens.try_into().expect("four generators");
        MidSlot { module, e: [e0, e1], phi: [p0, p1] }
    }

    /// `X[t]`: `E ↦ t²E`, `Φ ↦ F`.
    pub fn twisted(x: &Module, n: usize) -> MidSlot {
        MidSlot::from_actions(x.clone(), x.gamma_twisted(n))
    }

    /// `X[t] ⊗ Y`.
    pub fn twisted_plain(x: &Module, y: &Module, n: usize) -> MidSlot {
        let a = gamma_tensor(&x.gamma_twisted(n), x, &y.gamma_plain(n), y);
        MidSlot::from_actions(x.tensor(y), a)
    }

    /// `X` under the plain `U`-action.
    pub fn plain(x: &Module) -> MidSlot {
        MidSlot {
            module: x.clone(),
            e: [0, 1].map(|i| SerMat::constant(x.e[i].clone(), 1)),
            phi: [0, 1].map(|i| SerMat::constant(x.f[i].clone(), 1)),
        }
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// `Γ`-coinvariants over `A_n`.
    Gamma(usize),
    /// `U`-coinvariants over the scalars.
    Plain,
}

/// Element of `P` over `A_n`: `(t-degree, [v, m, w]) ↦ coefficient`.
pub type PVec = HashMap<(usize, [usize; 3]), Scalar>;

type Col = Vec<(usize, usize, Scalar)>;

/// `⟨V ⊗ M ⊗ W⟩` with its projection onto the `U₀`-representatives.
pub struct CoinvSpace {
    pub left: OuterSlot,
    pub mid: MidSlot,
    pub right: OuterSlot,
    pub mode: Mode,
    pub order: usize,
    shift: usize,
    /// Representatives `nil ⊗ m ⊗ nil` of total weight zero.
    pub reps: Vec<[usize; 3]>,
    rep_of: HashMap<[usize; 3], usize>,
    memo: RefCell<HashMap<[usize; 3], Rc<Vec<Scalar>>>>,
    // column data: [i][index] -> (row, t-degree, coefficient)
    phi_k: [Vec<Col>; 2],
    e_kinv: [Vec<Col>; 2],
    fw_k: [Vec<Col>; 2],
    ev_kinv: [Vec<Col>; 2],
}

fn columns(s: &SerMat, right_diag: impl Fn(usize) -> Scalar) -> Vec<Col> {
    let mut out = vec![Vec::new(); s.cols()];
    for (d, m) in s.coeffs.iter().enumerate() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let x = m.get(r, c);
                if !x.is_zero() {
                    out[c].push((r, d, x * &right_diag(c)));
                }
            }
        }
    }
    out
}

fn const_columns(m: &Mat, right_diag: impl Fn(usize) -> Scalar) -> Vec<Col> {
    columns(&SerMat::constant(m.clone(), 1), right_diag)
}

impl CoinvSpace {
    pub fn new(left: OuterSlot, mid: MidSlot, right: OuterSlot, mode: Mode) -> Result<CoinvSpace, CoinvError> {
        let (order, shift) = match mode {
            Mode::Gamma(n) if n >= 1 => (n, 2),
            Mode::Gamma(n) => return Err(CoinvError::Order(n)),
            Mode::Plain => (1, 0),
        };
        if mid.e[0].order() != order {
            return Err(CoinvError::Shape(format!("middle action has order {}, expected {order}", mid.e[0].order())));
        }
        let mut reps = Vec::new();
        for v in left.nil_indices() {
            for m in 0..mid.dim() {
                for w in right.nil_indices() {
                    let tot = left.module.weights[v].add(mid.module.weights[m]).add(right.module.weights[w]);
                    if tot == Weight::ZERO {
                        reps.push([v, m, w]);
                    }
                }
            }
        }
        let rep_of = reps.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let mm = &mid.module;
        let phi_k = [0, 1].map(|i| columns(&mid.phi[i], |c| mm.kt_eigen(i, c)));
        let e_kinv = [0, 1].map(|i| columns(&mid.e[i], |c| mm.kt_eigen(i, c).inv().unwrap()));
        let wm = &right.module;
        let fw_k = [0, 1].map(|i| const_columns(&wm.f[i], |c| wm.kt_eigen(i, c)));
        let vm = &left.module;
        let ev_kinv = [0, 1].map(|i| const_columns(&vm.e[i], |c| vm.kt_eigen(i, c).inv().unwrap()));
        Ok(CoinvSpace { left, mid, right, mode, order, shift, reps, rep_of, memo: RefCell::new(HashMap::new()), phi_k, e_kinv, fw_k, ev_kinv })
    }

    /// Rank over `A_n`.
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Dimension over the scalars.
    pub fn c_dim(&self) -> usize {
        self.order * self.rank()
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.left.dim(), self.mid.dim(), self.right.dim()]
    }

    fn zero(&self) -> Vec<Scalar> {
        vec![Scalar::zero(); self.order * self.rank()]
    }

    /// `dst += c · t^d · src`.
    fn axpy(&self, dst: &mut [Scalar], src: &[Scalar], c: &Scalar, d: usize) {
        let r = self.rank();
        if d >= self.order || c.is_zero() {
            return;
        }
        for k in 0..self.order - d {
            for j in 0..r {
                let x = &src[k * r + j];
                if !x.is_zero() {
                    let y = &mut dst[(k + d) * r + j];
                    *y = &*y + &(x * c);
                }
            }
        }
    }

    /// Projection of one basis tensor, as coefficients `t^k · rep_j` at `k·rank + j`.
    pub fn project_basis(&self, p: [usize; 3]) -> Rc<Vec<Scalar>> {
        if let Some(v) = self.memo.borrow().get(&p) {
            return v.clone();
        }
        let [iv, im, iw] = p;
        let mut acc = self.zero();
        let m1 = Scalar::from_int(-1);
        if self.left.depth[iv] > 0 {
            // F_i u ⊗ m ⊗ w ≡ -u ⊗ Φ_i K̃_i m ⊗ w - t² u ⊗ K̃_i m ⊗ F_i K̃_i w
            let (i, tail) = self.left.gen[iv].clone().expect("positive depth has a leading letter");
            let i = i as usize;
            let km = self.mid.module.kt_eigen(i, im);
            for (u, cu) in &tail {
                let cu = &m1 * cu;
                for (m2, d, c) in &self.phi_k[i][im] {
                    let src = self.project_basis([*u, *m2, iw]);
                    self.axpy(&mut acc, &src, &(&cu * c), *d);
                }
                for (w2, _, c) in &self.fw_k[i][iw] {
                    let src = self.project_basis([*u, im, *w2]);
                    self.axpy(&mut acc, &src, &(&(&cu * &km) * c), self.shift);
                }
            }
        } else if self.right.depth[iw] > 0 {
            // v ⊗ m ⊗ E_i u ≡ -t² E_i K̃_i⁻¹ v ⊗ K̃_i⁻¹ m ⊗ u - v ⊗ E_i K̃_i⁻¹ m ⊗ u
            let (i, tail) = self.right.gen[iw].clone().expect("positive depth has a leading letter");
            let i = i as usize;
            let kmi = self.mid.module.kt_eigen(i, im).inv().unwrap();
            for (u, cu) in &tail {
                let cu = &m1 * cu;
                for (v2, _, c) in &self.ev_kinv[i][iv] {
                    let src = self.project_basis([*v2, im, *u]);
                    self.axpy(&mut acc, &src, &(&(&cu * &kmi) * c), self.shift);
                }
                for (m2, d, c) in &self.e_kinv[i][im] {
                    let src = self.project_basis([iv, *m2, *u]);
                    self.axpy(&mut acc, &src, &(&cu * c), *d);
                }
            }
        } else if let Some(&j) = self.rep_of.get(&p) {
            acc[j] = Scalar::one();
        }
        let rc = Rc::new(acc);
        self.memo.borrow_mut().insert(p, rc.clone());
        rc
    }

    pub fn project(&self, v: &PVec) -> Vec<Scalar> {
        let mut acc = self.zero();
        for ((k, p), c) in v {
            if *k < self.order && !c.is_zero() {
                let src = self.project_basis(*p);
                self.axpy(&mut acc, &src, c, *k);
            }
        }
        acc
    }

    /// Every representative projects to its own unit vector.
    pub fn retraction_ok(&self) -> bool {
        self.reps.iter().enumerate().all(|(j, r)| {
            let v = self.project_basis(*r);
            v.iter().enumerate().all(|(k, x)| if k == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// Images `γ·p` for `γ ∈ {E_i, Φ_i, K̃_i - 1}` and all basis tensors `p`
    /// whose image stays inside the truncation.
    pub fn generator_images(&self) -> Vec<(String, [usize; 3], PVec)> {
        let [dv, dm, dw] = self.dims();
        let (vm, mm, wm) = (&self.left.module, &self.mid.module, &self.right.module);
        let mut out = Vec::new();
        let push = |pv: &mut PVec, k: usize, p: [usize; 3], c: Scalar| {
            if k < self.order && !c.is_zero() {
                let e = pv.entry((k, p)).or_insert_with(Scalar::zero);
                *e = &*e + &c;
            }
        };
        for iv in 0..dv {
            for im in 0..dm {
                for iw in 0..dw {
                    let p = [iv, im, iw];
                    for i in 0..2 {
                        let (kv, km, kw) = (vm.kt_eigen(i, iv), mm.kt_eigen(i, im), wm.kt_eigen(i, iw));
                        if self.right.depth[iw] + 1 < self.right.levels {
                            let mut pv = PVec::new();
                            for r in 0..dv {
                                push(&mut pv, self.shift, [r, im, iw], vm.e[i].get(r, iv).clone());
                            }
                            for (d, m) in self.mid.e[i].coeffs.iter().enumerate() {
                                for r in 0..dm {
                                    push(&mut pv, d, [iv, r, iw], &kv * m.get(r, im));
                                }
                            }
                            for r in 0..dw {
                                push(&mut pv, 0, [iv, im, r], &(&kv * &km) * wm.e[i].get(r, iw));
                            }
                            out.push((format!("E{i}"), p, pv));
                        }
                        if self.left.depth[iv] + 1 < self.left.levels {
                            let (kmi, kwi) = (km.inv().unwrap(), kw.inv().unwrap());
                            let mut pv = PVec::new();
                            for r in 0..dv {
                                push(&mut pv, 0, [r, im, iw], &(&kmi * &kwi) * vm.f[i].get(r, iv));
                            }
                            for (d, m) in self.mid.phi[i].coeffs.iter().enumerate() {
                                for r in 0..dm {
                                    push(&mut pv, d, [iv, r, iw], &kwi * m.get(r, im));
                                }
                            }
                            for r in 0..dw {
                                push(&mut pv, self.shift, [iv, im, r], wm.f[i].get(r, iw).clone());
                            }
                            out.push((format!("Φ{i}"), p, pv));
                        }
                        let mut pv = PVec::new();
                        push(&mut pv, 0, p, &(&(&kv * &km) * &kw) - &Scalar::one());
                        out.push((format!("K̃{i}-1"), p, pv));
                    }
                }
            }
        }
        out
    }

    /// Number of generator images with a nonzero projection.
    pub fn annihilation_failures(&self) -> usize {
        self.generator_images().iter().filter(|(_, _, pv)| self.project(pv).iter().any(|x| !x.is_zero())).count()
    }
}
