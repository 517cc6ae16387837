//! Concrete categories: `Mat_S`, `Rel`, biproduct completions and the
//! closure-generated Spekkens categories.

pub mod biproduct;
pub mod mat;
pub mod rel;
pub mod spek;

pub use biproduct::{biproduct_complete, flatten, Additive, Biproduct, BiproductSampler, BlockMor};
pub use mat::{columns_sum_to_one, MatCat, MatSampler};
pub use rel::{RelCat, RelSampler};
pub use spek::{closure_generate, spek_pure_exclusion_witness, Closure, ClosureOps, ClosureSpec, Relation};

/// `(cup, cap)` on `n` for any matrix backend.
pub fn mat_cup_cap<S: crate::scalars::Scalar>(n: usize) -> (crate::Mat<S>, crate::Mat<S>) {
    MatCat::<S>::cup_cap(n)
}
