//! Biproduct completion `C^⊕` of a category enriched in commutative monoids.
//!
//! Objects are finite lists of base objects and morphisms are matrices of
//! base morphisms, stored as `blocks[target][source]`.

use rand::Rng;
use serde_json::{json, Value};

use crate::catcore::{SampleRng, Sampler, Theory};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalars::Scalar;

/// Base categories whose hom-sets carry a commutative addition with the
/// zero morphisms as unit.
pub trait Additive: Theory {
    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
}

impl<S: Scalar> Additive for super::MatCat<S> {
    fn add(&self, f: &Mat<S>, g: &Mat<S>) -> Result<Mat<S>> {
        f.add(g)
    }
}

impl Additive for super::RelCat {
    fn add(&self, f: &Mat<bool>, g: &Mat<bool>) -> Result<Mat<bool>> {
        f.add(g)
    }
}

#[derive(Clone, Debug)]
pub struct BlockMor<O, M> {
    pub src: Vec<O>,
    pub tgt: Vec<O>,
    /// `blocks[j][i] : src[i] → tgt[j]`.
    pub blocks: Vec<Vec<M>>,
}

#[derive(Clone, Debug)]
pub struct Biproduct<C> {
    pub base: C,
}

/// Builds the completion of `base`.
pub fn biproduct_complete<C: Additive>(base: C) -> Biproduct<C> {
    Biproduct { base }
}

impl<C: Additive> Biproduct<C> {
    pub fn from_blocks(
        &self,
        src: Vec<C::Obj>,
        tgt: Vec<C::Obj>,
        blocks: Vec<Vec<C::Mor>>,
    ) -> Result<BlockMor<C::Obj, C::Mor>> {
        if blocks.len() != tgt.len() {
            return Err(Error::shape("block rows must match target list"));
        }
        for (j, row) in blocks.iter().enumerate() {
            if row.len() != src.len() {
                return Err(Error::shape("block columns must match source list"));
            }
            for (i, b) in row.iter().enumerate() {
                if self.base.dom(b) != src[i] || self.base.cod(b) != tgt[j] {
                    return Err(Error::shape(format!("block ({j},{i}) has the wrong type")));
                }
            }
        }
        Ok(BlockMor { src, tgt, blocks })
    }

    /// Singleton-list embedding of the base.
    pub fn embed(&self, f: &C::Mor) -> BlockMor<C::Obj, C::Mor> {
        BlockMor {
            src: vec![self.base.dom(f)],
            tgt: vec![self.base.cod(f)],
            blocks: vec![vec![f.clone()]],
        }
    }

    /// `κ_i : (A_i) → (A_1, …, A_n)`.
    pub fn coprojection(&self, objs: &[C::Obj], i: usize) -> BlockMor<C::Obj, C::Mor> {
        let a = &objs[i];
        BlockMor {
            src: vec![a.clone()],
            tgt: objs.to_vec(),
            blocks: objs
                .iter()
                .enumerate()
                .map(|(j, b)| vec![if j == i { self.base.identity(a) } else { self.base.zero(a, b) }])
                .collect(),
        }
    }

    /// `π_i : (A_1, …, A_n) → (A_i)`.
    pub fn projection(&self, objs: &[C::Obj], i: usize) -> BlockMor<C::Obj, C::Mor> {
        let a = &objs[i];
        BlockMor {
            src: objs.to_vec(),
            tgt: vec![a.clone()],
            blocks: vec![objs
                .iter()
                .enumerate()
                .map(|(j, b)| if j == i { self.base.identity(a) } else { self.base.zero(b, a) })
                .collect()],
        }
    }

    /// `∇ : (A, …, A) → (A)`.
    pub fn codiagonal(&self, a: &C::Obj, n: usize) -> BlockMor<C::Obj, C::Mor> {
        BlockMor {
            src: vec![a.clone(); n],
            tgt: vec![a.clone()],
            blocks: vec![vec![self.base.identity(a); n]],
        }
    }

    pub fn add(&self, f: &BlockMor<C::Obj, C::Mor>, g: &BlockMor<C::Obj, C::Mor>) -> Result<BlockMor<C::Obj, C::Mor>> {
        if f.src != g.src || f.tgt != g.tgt {
            return Err(Error::shape("adding block morphisms of different types"));
        }
        let blocks = f
            .blocks
            .iter()
            .zip(&g.blocks)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| self.base.add(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockMor {
            src: f.src.clone(),
            tgt: f.tgt.clone(),
            blocks,
        })
    }

    fn pairs(&self, a: &[C::Obj], b: &[C::Obj]) -> Vec<C::Obj> {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.base.tensor_obj(x, y))
            .collect()
    }
}

/// Flattens a block matrix over `Mat_S` into one matrix on the summed dimensions.
pub fn flatten<S: Scalar>(f: &BlockMor<usize, Mat<S>>) -> Mat<S> {
    let rows: usize = f.tgt.iter().sum();
    let cols: usize = f.src.iter().sum();
    let mut out = Mat::zeros(rows, cols);
    let mut r0 = 0;
    for (j, row) in f.blocks.iter().enumerate() {
        let mut c0 = 0;
        for (i, b) in row.iter().enumerate() {
            out.paste(r0, c0, b);
            c0 += f.src[i];
        }
        r0 += f.tgt[j];
    }
    out
}

impl<C: Additive> Theory for Biproduct<C> {
    type Obj = Vec<C::Obj>;
    type Mor = BlockMor<C::Obj, C::Mor>;

    fn name(&self) -> String {
        format!("biproduct[{}]", self.base.name())
    }

    fn unit(&self) -> Vec<C::Obj> {
        vec![self.base.unit()]
    }

    fn dom(&self, f: &Self::Mor) -> Vec<C::Obj> {
        f.src.clone()
    }

    fn cod(&self, f: &Self::Mor) -> Vec<C::Obj> {
        f.tgt.clone()
    }

    fn identity(&self, a: &Vec<C::Obj>) -> Self::Mor {
        BlockMor {
            src: a.clone(),
            tgt: a.clone(),
            blocks: a
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    a.iter()
                        .enumerate()
                        .map(|(i, x)| if i == j { self.base.identity(x) } else { self.base.zero(x, b) })
                        .collect()
                })
                .collect(),
        }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.tgt != g.src {
            return Err(Error::shape("block lists do not match"));
        }
        let mut blocks = Vec::with_capacity(g.tgt.len());
        for (k, c) in g.tgt.iter().enumerate() {
            let mut row = Vec::with_capacity(f.src.len());
            for (i, a) in f.src.iter().enumerate() {
                let mut acc = self.base.zero(a, c);
                for j in 0..f.tgt.len() {
                    let term = self.base.compose(&g.blocks[k][j], &f.blocks[j][i])?;
                    acc = self.base.add(&acc, &term)?;
                }
                row.push(acc);
            }
            blocks.push(row);
        }
        Ok(BlockMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            blocks,
        })
    }

    fn tensor_obj(&self, a: &Vec<C::Obj>, b: &Vec<C::Obj>) -> Vec<C::Obj> {
        self.pairs(a, b)
    }

    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        let mut blocks = Vec::with_capacity(f.tgt.len() * g.tgt.len());
        for fr in &f.blocks {
            for gr in &g.blocks {
                let mut row = Vec::with_capacity(f.src.len() * g.src.len());
                for fb in fr {
                    for gb in gr {
                        row.push(self.base.tensor(fb, gb));
                    }
                }
                blocks.push(row);
            }
        }
        BlockMor {
            src: self.pairs(&f.src, &g.src),
            tgt: self.pairs(&f.tgt, &g.tgt),
            blocks,
        }
    }

    fn swap(&self, a: &Vec<C::Obj>, b: &Vec<C::Obj>) -> Self::Mor {
        let src = self.pairs(a, b);
        let tgt = self.pairs(b, a);
        let (n, m) = (a.len(), b.len());
        let mut blocks = Vec::with_capacity(tgt.len());
        for (row_idx, t) in tgt.iter().enumerate() {
            let (k, i) = (row_idx / n, row_idx % n);
            let mut row = Vec::with_capacity(src.len());
            for (col_idx, s) in src.iter().enumerate() {
                let (i2, k2) = (col_idx / m, col_idx % m);
                row.push(if i == i2 && k == k2 {
                    self.base.swap(&a[i], &b[k])
                } else {
                    self.base.zero(s, t)
                });
            }
            blocks.push(row);
        }
        BlockMor { src, tgt, blocks }
    }

    fn zero(&self, a: &Vec<C::Obj>, b: &Vec<C::Obj>) -> Self::Mor {
        BlockMor {
            src: a.clone(),
            tgt: b.clone(),
            blocks: b.iter().map(|y| a.iter().map(|x| self.base.zero(x, y)).collect()).collect(),
        }
    }

    fn discard(&self, a: &Vec<C::Obj>) -> Self::Mor {
        BlockMor {
            src: a.clone(),
            tgt: self.unit(),
            blocks: vec![a.iter().map(|x| self.base.discard(x)).collect()],
        }
    }

    fn dagger(&self, f: &Self::Mor) -> Result<Self::Mor> {
        let blocks = (0..f.src.len())
            .map(|i| (0..f.tgt.len()).map(|j| self.base.dagger(&f.blocks[j][i])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            blocks,
        })
    }

    fn cup(&self, a: &Vec<C::Obj>) -> Result<Self::Mor> {
        let unit = self.base.unit();
        let n = a.len();
        let tgt = self.pairs(a, a);
        let blocks = tgt
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                let (i, j) = (idx / n, idx % n);
                Ok(vec![if i == j { self.base.cup(&a[i])? } else { self.base.zero(&unit, t) }])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockMor {
            src: self.unit(),
            tgt,
            blocks,
        })
    }

    fn deviation(&self, f: &Self::Mor, g: &Self::Mor) -> f64 {
        if f.src != g.src || f.tgt != g.tgt {
            return f64::INFINITY;
        }
        f.blocks
            .iter()
            .zip(&g.blocks)
            .flat_map(|(r, s)| r.iter().zip(s))
            .map(|(x, y)| self.base.deviation(x, y))
            .fold(0.0, f64::max)
    }

    fn tolerance(&self) -> f64 {
        self.base.tolerance()
    }

    fn obj_json(&self, a: &Vec<C::Obj>) -> Value {
        Value::Array(a.iter().map(|x| self.base.obj_json(x)).collect())
    }

    fn payload_json(&self, f: &Self::Mor) -> Value {
        let blocks: Vec<Value> = f
            .blocks
            .iter()
            .map(|r| Value::Array(r.iter().map(|b| self.base.payload_json(b)).collect()))
            .collect();
        json!({ "blocks": blocks })
    }
}

/// Lists of one or two base objects, blocks drawn from the base sampler.
#[derive(Clone, Debug)]
pub struct BiproductSampler<P> {
    pub base: P,
    pub max_len: usize,
}

impl<C: Additive, P: Sampler<C>> Sampler<Biproduct<C>> for BiproductSampler<P> {
    fn object(&self, t: &Biproduct<C>, rng: &mut SampleRng, bound: usize) -> Vec<C::Obj> {
        let len = rng.gen_range(1..=self.max_len.max(1));
        (0..len).map(|_| self.base.object(&t.base, rng, bound)).collect()
    }

    fn morphism(&self, t: &Biproduct<C>, rng: &mut SampleRng, a: &Vec<C::Obj>, b: &Vec<C::Obj>) -> BlockMor<C::Obj, C::Mor> {
        BlockMor {
            src: a.clone(),
            tgt: b.clone(),
            blocks: b
                .iter()
                .map(|y| a.iter().map(|x| self.base.morphism(&t.base, rng, x, y)).collect())
                .collect(),
        }
    }
}
