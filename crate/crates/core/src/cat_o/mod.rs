//! Category `𝒪` at finite truncation: nil-modules, Verma truncations `M_n`,
//! Sugawara operators and the truncated `⊗̇`.

mod dotted;
mod sugawara;
mod verma;

pub use dotted::{dotted_tensor, DottedTrunc};
pub use sugawara::{
    g_value, intertwining_residuals, l_value, omega_dual, spectrum, sugawara_from_omega, sugawara_u, t_check,
    t_check_residuals, OmegaRoute, Spectrum,
};
pub use verma::{build_verma, verma_va, NilModule, VermaLabel, VermaTrunc};

use crate::linalg::Mat;
use crate::rootdata::{RootDatum, Weight};
use crate::scalars::Scalar;
use crate::uqalgebra::f_component_basis;

#[derive(Debug, thiserror::Error)]
pub enum CatError {
    #[error("shape: {0}")]
    Shape(String),
    #[error("E-action breaks the weight grading at {0}")]
    Grading(String),
    #[error("U⁺ does not act nilpotently")]
    NotNilpotent,
    #[error("truncation level {0} is not allowed")]
    Level(usize),
    #[error("weight {0} is not in the fiber of {1}")]
    Fiber(Weight, Weight),
    #[error("recursion route needs a module generated by E-killed vectors")]
    Unsupported,
    #[error("operator is singular")]
    Singular,
    #[error("level {0} block of T is not triangular")]
    NonTriangular(usize),
}

impl VermaTrunc {
    /// `Ω` by the recursion route.
    pub fn omega_recursion(&self) -> Result<Mat, CatError> {
        if !self.nil.is_e_killed() {
            return Err(CatError::Unsupported);
        }
        let datum = RootDatum::affine_sl2();
        let nd = self.nil.dim();
        let gen = |c: usize| -> Option<(u8, Vec<Scalar>)> {
            let l = &self.labels[c];
            let (&i, tail) = l.word.split_first()?;
            let mut nu = l.nu.clone();
            nu[i as usize] -= 1;
            let start = self.labels.iter().position(|x| x.nu == nu).expect("grading present");
            let mut v = vec![Scalar::zero(); self.dim()];
            for (k, x) in f_component_basis(&nu, &datum).reduce(tail).into_iter().enumerate() {
                v[start + k * nd + l.nil] = x;
            }
            Some((i, v))
        };
        Ok(sugawara::omega_recursion(&self.module, &self.levels, &gen))
    }

    pub fn omega(&self, route: OmegaRoute) -> Result<Mat, CatError> {
        match route {
            OmegaRoute::Recursion => self.omega_recursion(),
            OmegaRoute::DualBasis => Ok(omega_dual(&self.module, self.n - 1)),
        }
    }

    /// `T^a` on `M_n` by the chosen route.
    pub fn sugawara_with(&self, a: Weight, route: OmegaRoute) -> Result<Mat, CatError> {
        sugawara_from_omega(&self.module, &self.omega(route)?, a)
    }

    /// `T^a`, by recursion when available and otherwise by the dual basis.
    pub fn sugawara(&self, a: Weight) -> (Mat, OmegaRoute) {
        match self.sugawara_with(a, OmegaRoute::Recursion) {
            Ok(t) => (t, OmegaRoute::Recursion),
            Err(_) => (self.sugawara_with(a, OmegaRoute::DualBasis).expect("weights lie over a"), OmegaRoute::DualBasis),
        }
    }

    /// Relation mask for the truncation: `(levels, n-2)`.
    pub fn inner_levels(&self) -> Option<(&[usize], usize)> {
        Some((&self.levels, self.n.saturating_sub(2)))
    }

    /// The span of `f · 𝒩'` for the nil vectors in `sub`, if `U`-stable.
    pub fn sub_span(&self, sub: &[usize]) -> Vec<usize> {
        (0..self.dim()).filter(|&r| sub.contains(&self.labels[r].nil)).collect()
    }
}

/// Two-step filtration `0 ⊂ V^z_{λ₁} ⊂ 𝒩^z` for the two-dimensional
/// nil-module `n₀ → n₁` (`E_1 n₀ = n₁`) with top weight `a`. Returns the
/// truncation and whether the submodule and quotient match the Verma
/// truncations of `a` and `a - 1'` exactly.
pub fn filtration_example(z: &Scalar, n: usize) -> Result<(VermaTrunc, bool), CatError> {
    let a = Weight::base_a();
    let mut e1 = Mat::zeros(2, 2);
    e1.set(1, 0, Scalar::one());
    let nil = NilModule::new(vec![a.plus_root(1, -1), a], [Mat::zeros(2, 2), e1])?;
    let m = build_verma(&nil, z, n)?;
    let sub = m.sub_span(&[1]);
    let quo = m.sub_span(&[0]);
    let mut ok = true;
    let vs = verma_va(a, z, n);
    let vq = verma_va(a.plus_root(1, -1), z, n);
    for i in 0..2 {
        for (g, vg, wg) in [(&m.module.e[i], &vs.module.e[i], &vq.module.e[i]), (&m.module.f[i], &vs.module.f[i], &vq.module.f[i])] {
            // sub is stable: no entries from sub columns into quotient rows
            ok &= g.select(&quo, &sub).is_zero();
            ok &= g.select(&sub, &sub) == *vg;
            ok &= g.select(&quo, &quo) == *wg;
        }
    }
    Ok((m, ok))
}
