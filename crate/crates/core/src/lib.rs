//! Exact workbench for quantum affine sl₂: modules, Sugawara operators,
//! spectral braidings, coinvariants and q-difference equations.

pub mod braiding;
pub mod cat_o;
pub mod coinv;
pub mod findim;
pub mod linalg;
pub mod qdiff;
pub mod rootdata;
pub mod scalars;
pub mod uqalgebra;
pub mod verify;
