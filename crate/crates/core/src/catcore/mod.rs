//! Strict symmetric monoidal dagger categories with discarding and zero
//! morphisms, and a sampled law-checking harness over them.

mod laws;

use std::fmt::Debug;

use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;

pub use laws::{check_law, check_laws, Law, LawConfig};

/// The generator every sampler draws from.
pub type SampleRng = ChaCha8Rng;

/// A finite strict symmetric monoidal dagger category with discarding.
///
/// Coherence isomorphisms are identities. `compose(g, f)` is `g ∘ f`.
pub trait Theory: Send + Sync {
    type Obj: Clone + Debug + PartialEq + Send + Sync;
    type Mor: Clone + Debug + Send + Sync;

    fn name(&self) -> String;

    fn unit(&self) -> Self::Obj;
    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;

    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    /// `σ_{A,B} : A ⊗ B → B ⊗ A`.
    fn swap(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn zero(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn discard(&self, a: &Self::Obj) -> Self::Mor;
    fn dagger(&self, f: &Self::Mor) -> Result<Self::Mor>;
    /// `I → A ⊗ A`.
    fn cup(&self, a: &Self::Obj) -> Result<Self::Mor>;
    /// `A ⊗ A → I`.
    fn cap(&self, a: &Self::Obj) -> Result<Self::Mor> {
        self.dagger(&self.cup(a)?)
    }

    /// Relative distance; `0` when equal on exact backends and infinite on
    /// any type mismatch.
    fn deviation(&self, f: &Self::Mor, g: &Self::Mor) -> f64;
    /// `0` for exact backends.
    fn tolerance(&self) -> f64;

    fn obj_json(&self, a: &Self::Obj) -> Value;
    fn payload_json(&self, f: &Self::Mor) -> Value;

    /// `{"backend", "src", "tgt", "payload"}`.
    fn mor_json(&self, f: &Self::Mor) -> Value {
        json!({
            "backend": self.name(),
            "src": self.obj_json(&self.dom(f)),
            "tgt": self.obj_json(&self.cod(f)),
            "payload": self.payload_json(f),
        })
    }

    fn approx_eq(&self, f: &Self::Mor, g: &Self::Mor) -> bool {
        self.deviation(f, g) <= self.tolerance()
    }
}

/// Draws objects and morphisms for law sampling.
pub trait Sampler<T: Theory>: Sync {
    /// Object of "size" at most `bound`.
    fn object(&self, theory: &T, rng: &mut SampleRng, bound: usize) -> T::Obj;
    fn morphism(&self, theory: &T, rng: &mut SampleRng, a: &T::Obj, b: &T::Obj) -> T::Mor;
}

/// `⊤_B ∘ f = ⊤_A`.
pub fn is_causal<T: Theory>(theory: &T, f: &T::Mor) -> bool {
    causal_deviation(theory, f) <= theory.tolerance()
}

pub fn causal_deviation<T: Theory>(theory: &T, f: &T::Mor) -> f64 {
    let lhs = match theory.compose(&theory.discard(&theory.cod(f)), f) {
        Ok(m) => m,
        Err(_) => return f64::INFINITY,
    };
    theory.deviation(&lhs, &theory.discard(&theory.dom(f)))
}

/// Deterministic per-sample seed.
pub fn sample_seed(seed: u64, stream: u64, index: u64) -> u64 {
    // splitmix64 finaliser over the packed triple
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fresh generator for sample `index` of stream `stream`.
pub fn sample_rng(seed: u64, stream: u64, index: u64) -> SampleRng {
    use rand::SeedableRng;
    SampleRng::seed_from_u64(sample_seed(seed, stream, index))
}
