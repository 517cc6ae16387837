//! Principle checks on the float CPM backends.

use rand::Rng;
use serde_json::json;

use super::{Mutant, Params};
use crate::catcore::{sample_rng, SampleRng};
use crate::cpm::{
    cpm_add, cpm_add_via_biproduct, cpm_compose, cpm_dagger, cpm_discard, cpm_identity, cpm_tensor, dbl,
    discard_last, essential_uniqueness_witness, is_pure, kraus_from_choi, min_eigenvalue, pure_witness, purify,
    random_channel, random_cpm, CpmMap,
};
use crate::error::{Error, Result};
use crate::kernels::{check_atomicity, check_covering_law, FloatKernels};
use crate::linalg::{self, eigh, isometry_defect, least_squares, numerical_rank, pinv, svd};
use crate::matrix::Mat;
use crate::phased::{
    canonicalize, check_phase_generator, check_positive_freeness_and_cancellation, circle_positive_freeness,
    gp_embed, gp_extract, GroupPhases, NonCentralPhases, PhaseFamily, PhaseGroup,
};
use crate::report::{Failure, LawReport};
use crate::scalars::{polar_decompose, Complex64, FloatScalar};

/// `CPM(Mat_S)` for a float field `S`, optionally corrupted.
#[derive(Clone, Debug)]
pub struct QuantumTheory<S> {
    pub tol: f64,
    pub mutant: Option<Mutant>,
    _scalar: std::marker::PhantomData<fn() -> S>,
}

impl<S: FloatScalar> QuantumTheory<S> {
    pub fn new(tol: f64, mutant: Option<Mutant>) -> Self {
        QuantumTheory {
            tol,
            mutant,
            _scalar: std::marker::PhantomData,
        }
    }

    pub fn is_complex() -> bool {
        S::from_c64(Complex64::new(0.0, 1.0)).to_c64().im != 0.0
    }

    pub fn name(&self) -> String {
        let base = if Self::is_complex() { "cpmC" } else { "cpmR" };
        match self.mutant {
            Some(m) => format!("{base}+{}", m.name()),
            None => base.into(),
        }
    }

    pub fn compose(&self, g: &CpmMap<S>, f: &CpmMap<S>) -> Result<CpmMap<S>> {
        let h = cpm_compose(g, f)?;
        Ok(if self.mutant == Some(Mutant::TransposeComposed) {
            transpose_output(&h)
        } else {
            h
        })
    }

    pub fn dagger(&self, f: &CpmMap<S>) -> Result<CpmMap<S>> {
        if self.mutant == Some(Mutant::NoDagger) {
            return Err(Error::unsupported("dagger", self.name()));
        }
        Ok(cpm_dagger(f))
    }

    /// Isometry onto the kernel of a pure morphism.
    pub fn kernel(&self, f: &Mat<S>) -> Mat<S> {
        let k = linalg::null_isometry(f, self.tol).0;
        if self.mutant == Some(Mutant::NonIsometricKernels) && k.cols() > 0 {
            // same range, wrong normalisation
            let mut d = vec![S::one(); k.cols()];
            d[0] = S::from_f64(2.0);
            k.mul_unchecked(&Mat::diag(&d))
        } else {
            k
        }
    }

    /// `im(f) = ker(coker(f))`.
    pub fn image(&self, f: &Mat<S>) -> Mat<S> {
        let range = linalg::range_isometry(f, self.tol).0;
        let coker = linalg::complement_isometry(&range, self.tol).dagger();
        if coker.rows() == 0 {
            return self.kernel(&Mat::zeros(1, f.rows()));
        }
        self.kernel(&coker)
    }

    pub fn phases(&self) -> Box<dyn PhaseFamily> {
        if self.mutant == Some(Mutant::NonCentralPhases) {
            Box::new(NonCentralPhases)
        } else if Self::is_complex() {
            Box::new(GroupPhases(PhaseGroup::Circle))
        } else {
            Box::new(SignPhases)
        }
    }
}

/// Transposes the output factor of the Choi matrix; not completely positive.
fn transpose_output<S: FloatScalar>(f: &CpmMap<S>) -> CpmMap<S> {
    let (n, m) = (f.in_dim, f.out_dim);
    let choi = Mat::from_fn(n * m, n * m, |r, c| {
        let (i, a, j, b) = (r / m, r % m, c / m, c % m);
        *f.choi.get(i * m + b, j * m + a)
    });
    CpmMap {
        in_dim: n,
        out_dim: m,
        choi,
        kraus: None,
    }
}

/// `diag(1, ±1)`: the phases of `Mat_ℝ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SignPhases;

impl PhaseFamily for SignPhases {
    fn name(&self) -> String {
        "sign".into()
    }

    fn sample(&self, rng: &mut SampleRng, a: usize, b: usize) -> Mat<Complex64> {
        let u = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        crate::phased::phase_on(a, b, Complex64::new(u, 0.0))
    }
}

fn pick(rng: &mut SampleRng, dims: &[usize]) -> usize {
    dims[rng.gen_range(0..dims.len())]
}

fn scale_of<S: FloatScalar>(a: &Mat<S>, b: &Mat<S>) -> f64 {
    1.0 + a.frobenius().max(b.frobenius())
}

fn close<S: FloatScalar>(a: &Mat<S>, b: &Mat<S>, tol: f64) -> bool {
    a.shape() == b.shape() && a.distance_fro(b) <= tol * scale_of(a, b)
}

fn dist<S: FloatScalar>(a: &Mat<S>, b: &Mat<S>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.distance_fro(b)
}

fn maps_close<S: FloatScalar>(f: &CpmMap<S>, g: &CpmMap<S>, tol: f64) -> bool {
    f.in_dim == g.in_dim && f.out_dim == g.out_dim && close(&f.choi, &g.choi, tol)
}

/// State `1 → d` with density matrix `rho`.
pub fn state<S: FloatScalar>(rho: Mat<S>) -> CpmMap<S> {
    let d = rho.rows();
    CpmMap {
        in_dim: 1,
        out_dim: d,
        choi: rho,
        kraus: None,
    }
}

/// Effect `d → 1` with operator `e`, i.e. `ρ ↦ tr(e ρ)`.
pub fn effect<S: FloatScalar>(e: &Mat<S>) -> CpmMap<S> {
    CpmMap {
        in_dim: e.rows(),
        out_dim: 1,
        choi: e.transpose(),
        kraus: None,
    }
}

/// Environment rows `X[e, (a, i)] = V[a·k + e, i]` of `V : n → m·k`.
pub fn environment_rows<S: FloatScalar>(v: &Mat<S>, m: usize, k: usize) -> Mat<S> {
    let n = v.cols();
    Mat::from_fn(k, m * n, |e, c| *v.get((c / n) * k + e, c % n))
}

/// `ρ ↦ ½ρ + ¼ tr(ρ) I` on `ℂ²`.
pub fn half_depolarizing<S: FloatScalar>() -> CpmMap<S> {
    let choi = Mat::from_fn(4, 4, |r, c| {
        let (i, a, j, b) = (r / 2, r % 2, c / 2, c % 2);
        let mut x = 0.0;
        if i == a && j == b {
            x += 0.5;
        }
        if r == c {
            x += 0.25;
        }
        S::from_f64(x)
    });
    CpmMap::from_choi(2, 2, choi).expect("4x4 Choi")
}

fn channel<S: FloatScalar>(rng: &mut SampleRng, dims: &[usize]) -> CpmMap<S> {
    let (n, m) = (pick(rng, dims), pick(rng, dims));
    let kmin = n.div_ceil(m);
    let k = rng.gen_range(kmin..=kmin.max(n * m));
    random_channel(rng, n, m, k)
}

fn map_json<S: FloatScalar>(f: &CpmMap<S>) -> serde_json::Value {
    f.to_json()
}

pub fn check_strong_purification<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("strong_purification");
    let mut worst = (0.0f64, 0.0f64);
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 1, idx as u64);
        let f: CpmMap<S> = channel(&mut rng, &p.dims);
        let m = f.out_dim;
        let (pf, k) = match purify(&f, tol) {
            Ok(x) => x,
            Err(e) => {
                report.check(false, || Failure::new(format!("purification failed: {e}")).input(map_json(&f)));
                continue;
            }
        };
        let marginal = discard_last(&pf, m, k).expect("m·k output");
        let dev = dist(&marginal.choi, &f.choi);
        worst.0 = worst.0.max(dev);
        report.check(dev <= tol * scale_of(&marginal.choi, &f.choi) && is_pure(&pf, tol), || {
            Failure::new("purification does not recover the channel").input(map_json(&f)).deviation(dev)
        });
        // a second purification through an environment isometry
        let v = pure_witness(&pf, tol).expect("pure");
        let k2 = rng.gen_range(k..=k + 2);
        let w: Mat<S> = linalg::random_isometry(&mut rng, k2, k);
        let v2 = Mat::<S>::identity(m).kron(&w).mul_unchecked(&v);
        let g = dbl(&v2);
        match essential_uniqueness_witness(&pf, &g, m, tol) {
            Ok(eu) => {
                worst.1 = worst.1.max(eu.residual);
                report.check(eu.residual <= super::EU_FACTOR * tol, || {
                    Failure::new("environment unitary residual too large")
                        .inputs(vec![map_json(&f), v2.to_json()])
                        .deviation(eu.residual)
                });
            }
            Err(e) => report.check(false, || {
                Failure::new(format!("no environment unitary: {e}")).inputs(vec![map_json(&f), v2.to_json()])
            }),
        }
        // pure maps are closed under ∘, ⊗ and †
        let r = pick(&mut rng, &p.dims);
        let a = dbl(&Mat::<S>::gaussian(&mut rng, m, f.in_dim));
        let b = dbl(&Mat::<S>::gaussian(&mut rng, r, m));
        let json = || vec![map_json(&a), map_json(&b)];
        match t.compose(&b, &a) {
            Ok(c) => {
                let cp = min_eigenvalue(&c) >= -tol * (1.0 + c.choi.frobenius());
                report.check(cp && is_pure(&c, tol), || {
                    Failure::new("composite of pure maps is not pure and CP")
                        .inputs(json())
                        .deviation(-min_eigenvalue(&c))
                });
            }
            Err(e) => report.check(false, || Failure::new(format!("composition failed: {e}")).inputs(json())),
        }
        report.check(is_pure(&cpm_tensor(&a, &b), tol), || {
            Failure::new("tensor of pure maps is not pure").inputs(json())
        });
        match t.dagger(&a) {
            Ok(d) => report.check(is_pure(&d, tol), || Failure::new("dagger of a pure map is not pure").inputs(json())),
            Err(e) => report.check(false, || Failure::new(format!("dagger failed: {e}")).inputs(json())),
        }
    }
    for &d in &p.dims {
        let psi = dbl(&Mat::<S>::basis(d, 0));
        let ok = t
            .compose(&cpm_discard(d), &psi)
            .is_ok_and(|s| close(&s.choi, &Mat::identity(1), tol) && is_pure(&psi, tol));
        report.check(ok, || Failure::new(format!("no causal pure state on {d}")));
    }
    report.note(format!("max marginal deviation {:.3e}, max environment residual {:.3e}", worst.0, worst.1));
    report
}

pub fn check_pure_exclusion<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("pure_exclusion");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 2, idx as u64);
        let d = pick(&mut rng, &p.dims);
        if d < 2 {
            report.check(true, || unreachable!());
            report.note("dimension-one objects are trivial");
            continue;
        }
        let v: Mat<S> = linalg::random_isometry(&mut rng, d, 1);
        let psi = dbl(&v);
        let coker = t.kernel(&v.dagger()).dagger();
        let e_row = Mat::from_fn(1, d, |_, j| *coker.get(0, j));
        let e = dbl(&e_row);
        let json = || vec![v.to_json()];
        let vanishes = t.compose(&e, &psi).is_ok_and(|s| s.choi.max_magnitude() <= tol);
        report.check(vanishes && e.choi.max_magnitude() > tol, || {
            Failure::new("no nonzero effect annihilates the pure state").inputs(json())
        });
        // causal pure states are kernels: im(ψ) is ψ itself
        let causal = t.compose(&cpm_discard(d), &psi).is_ok_and(|s| close(&s.choi, &Mat::identity(1), tol));
        let im = t.image(&v);
        let proj = |x: &Mat<S>| x.mul_unchecked(&x.dagger());
        let dev = dist(&proj(&im), &proj(&v));
        report.check(causal && dev <= tol * scale_of(&im, &v), || {
            Failure::new("causal pure state is not its own image kernel").inputs(json()).deviation(dev)
        });
    }
    report
}

fn random_kernel_source<S: FloatScalar>(rng: &mut SampleRng, d: usize, r: usize) -> Mat<S> {
    if r == d {
        Mat::zeros(1, d)
    } else {
        Mat::gaussian(rng, d - r, d)
    }
}

pub fn check_causal_complementation<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("kernels_causally_complemented");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 3, idx as u64);
        let d = pick(&mut rng, &p.dims);
        let r = rng.gen_range(0..=d);
        let f: Mat<S> = random_kernel_source(&mut rng, d, r);
        let k = t.kernel(&f);
        let kp = t.kernel(&k.dagger());
        let json = || vec![f.to_json()];
        let causal = k.cols() == 0 || isometry_defect(&k) <= tol;
        report.check(causal, || Failure::new("kernel is not causal").inputs(json()).deviation(isometry_defect(&k)));
        let proj = |x: &Mat<S>| x.mul_unchecked(&x.dagger());
        let sum = proj(&k).add(&proj(&kp)).expect("square");
        let dev = dist(&sum, &Mat::identity(d));
        report.check(dev <= tol * (1.0 + d as f64), || {
            Failure::new("k k† + k⊥ k⊥† ≠ id").inputs(json()).deviation(dev)
        });
        // ⊤ = ⊤ ∘ Dbl(k†) + ⊤ ∘ Dbl(k⊥†)
        let mut total: CpmMap<S> = CpmMap::zero(d, 1);
        for piece in [&k, &kp] {
            if piece.cols() > 0 {
                let term = t.compose(&cpm_discard(piece.cols()), &dbl(&piece.dagger())).expect("shapes");
                total = cpm_add(&total, &term).expect("shapes");
            }
        }
        let dev = dist(&total.choi, &cpm_discard::<S>(d).choi);
        report.check(dev <= tol * (1.0 + d as f64), || {
            Failure::new("discarding does not split over the kernel and its complement").inputs(json()).deviation(dev)
        });
        let both = k.hstack(&kp).expect("same height");
        let unitary = both.cols() == d && isometry_defect(&both) <= tol;
        report.check(unitary, || Failure::new("[k, k⊥] is not unitary").inputs(json()));
    }
    report
}

pub fn check_internal_isomorphism<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("internal_isomorphism");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 4, idx as u64);
        let d = pick(&mut rng, &p.dims);
        let e: Mat<S> = match idx % 3 {
            0 => Mat::identity(d),
            1 => Mat::diag(&(0..d).map(|_| S::from_f64(rng.gen_range(0.05..=1.0))).collect::<Vec<_>>()),
            _ => {
                let a: Mat<S> = Mat::gaussian(&mut rng, d, d);
                a.dagger().mul_unchecked(&a)
            }
        };
        let (vals, u) = eigh(&e);
        if vals[0] <= super::INTERNAL_FACTOR * tol {
            report.note("effects with an eigenvalue at most 100·tol are not internal; skipped");
            continue;
        }
        let root: Vec<S> = vals.iter().map(|&l| S::from_f64(l.sqrt())).collect();
        let inv_root: Vec<S> = vals.iter().map(|&l| S::from_f64(1.0 / l.sqrt())).collect();
        let fm = Mat::diag(&root).mul_unchecked(&u.dagger());
        let gm = u.mul_unchecked(&Mat::diag(&inv_root));
        let (f, g) = (dbl(&fm), dbl(&gm));
        let json = || vec![e.to_json()];
        let dilates = t.compose(&cpm_discard(d), &f).is_ok_and(|x| maps_close(&x, &effect(&e), tol));
        report.check(dilates, || Failure::new("discard ∘ f ≠ e").inputs(json()));
        let id = cpm_identity::<S>(d);
        let inverse = t.compose(&g, &f).is_ok_and(|x| maps_close(&x, &id, tol))
            && t.compose(&f, &g).is_ok_and(|x| maps_close(&x, &id, tol));
        report.check(inverse, || Failure::new("dilation is not invertible").inputs(json()));
    }
    report
}

/// A unitary `U` with `U f = g` for `f†f = g†g`.
pub fn homogeneity_unitary<S: FloatScalar>(t: &QuantumTheory<S>, f: &Mat<S>, g: &Mat<S>) -> Result<Mat<S>> {
    let tol = t.tol;
    let (rf, rg) = (t.image(f), t.image(g));
    if rf.cols() != rg.cols() {
        return Err(Error::Precondition("images of different rank".into()));
    }
    let on_range = g.mul_unchecked(&pinv(f, tol));
    let (cf, cg) = (linalg::complement_isometry(&rf, tol), linalg::complement_isometry(&rg, tol));
    if cf.cols() == 0 {
        return Ok(on_range);
    }
    Ok(on_range.add(&cg.mul_unchecked(&cf.dagger()))?)
}

pub fn check_homogeneity<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("homogeneity");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 5, idx as u64);
        let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
        let f: Mat<S> = match idx % 10 {
            0 => Mat::zeros(m, n),
            _ => Mat::gaussian(&mut rng, m, n),
        };
        let g = if idx % 10 == 1 {
            f.clone()
        } else {
            linalg::random_unitary::<S, _>(&mut rng, m).mul_unchecked(&f)
        };
        let json = || vec![f.to_json(), g.to_json()];
        let premise = close(&f.dagger().mul_unchecked(&f), &g.dagger().mul_unchecked(&g), tol);
        match homogeneity_unitary(t, &f, &g) {
            Ok(u) => {
                let dev = dist(&u.mul_unchecked(&f), &g);
                let unitary = u.rows() == m && u.cols() == m && isometry_defect(&u) <= 100.0 * tol;
                report.check(premise && unitary && dev <= 100.0 * tol * scale_of(&f, &g), || {
                    Failure::new("no unitary relates f and g").inputs(json()).deviation(dev)
                });
            }
            Err(e) => report.check(false, || Failure::new(format!("homogeneity construction failed: {e}")).inputs(json())),
        }
    }
    report
}

pub fn check_pd_and_compression<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("perfect_distinguishability");
    let mut compression = LawReport::new("ideal_compression");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 6, idx as u64);
        let d = pick(&mut rng, &p.dims);
        let r = if idx % 5 == 0 { d } else { rng.gen_range(0..d) };
        if r == 0 {
            report.check(true, || unreachable!());
            report.note("zero state: compression object is zero");
            continue;
        }
        let a: Mat<S> = Mat::gaussian(&mut rng, d, r);
        let rho = a.mul_unchecked(&a.dagger());
        let json = || vec![rho.to_json()];
        let k = t.image(&a);
        let c = t.kernel(&k.dagger());
        let proj = |x: &Mat<S>| x.mul_unchecked(&x.dagger());
        let (dp, ep) = (effect(&proj(&k)), effect(&proj(&c)));
        // σ in the face of ρ, τ orthogonal to it
        let b: Mat<S> = Mat::gaussian(&mut rng, k.cols(), k.cols());
        let sigma = state(k.mul_unchecked(&proj(&b)).mul_unchecked(&k.dagger()));
        let tau = if c.cols() > 0 {
            let b2: Mat<S> = Mat::gaussian(&mut rng, c.cols(), c.cols());
            state(c.mul_unchecked(&proj(&b2)).mul_unchecked(&c.dagger()))
        } else {
            CpmMap::zero(1, d)
        };
        let val = |e: &CpmMap<S>, s: &CpmMap<S>| t.compose(e, s).map(|x| x.choi).ok();
        let tr = |s: &CpmMap<S>| val(&cpm_discard(d), s);
        let eqs = [
            (val(&dp, &sigma), tr(&sigma)),
            (val(&dp, &tau), Some(Mat::zeros(1, 1))),
            (val(&ep, &sigma), Some(Mat::zeros(1, 1))),
            (val(&ep, &tau), tr(&tau)),
        ];
        let ok = eqs.iter().all(|(x, y)| matches!((x, y), (Some(x), Some(y)) if close(x, y, tol)));
        let nonzero = r == d || ep.choi.max_magnitude() > tol;
        report.check(ok && nonzero, || Failure::new("distinguishing effects fail on the face of ρ").inputs(json()));
        // compression (Im ρ, im ρ†, im ρ)
        let (enc, dec) = (dbl(&k.dagger()), dbl(&k));
        let id_ok = t.compose(&enc, &dec).is_ok_and(|x| maps_close(&x, &cpm_identity(r), tol));
        compression.check(id_ok, || Failure::new("encode ∘ decode ≠ id").inputs(json()));
        let fixes = |s: &CpmMap<S>| {
            t.compose(&enc, s).and_then(|x| t.compose(&dec, &x)).is_ok_and(|x| maps_close(&x, s, tol))
        };
        let x = pick(&mut rng, &p.dims);
        let through = dbl(&k.mul_unchecked(&Mat::<S>::gaussian(&mut rng, r, x)));
        compression.check(fixes(&sigma) && fixes(&through), || {
            Failure::new("decode ∘ encode does not fix morphisms into the face").inputs(json())
        });
        if r == d {
            compression.check(isometry_defect(&k.dagger()) <= tol, || {
                Failure::new("compression of an internal state is not unitary").inputs(json())
            });
        }
    }
    report.absorb(compression);
    report.check = "perfect_distinguishability".into();
    report
}

pub fn check_purity_coincidence<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("purity_coincidence");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 7, idx as u64);
        let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
        let (f, expected): (CpmMap<S>, Option<bool>) = match idx % 4 {
            0 => (dbl(&Mat::gaussian(&mut rng, m, n)), Some(true)),
            1 => (random_cpm(&mut rng, n, m, 2), Some(n * m < 2)),
            2 => (CpmMap::zero(n, m), Some(true)),
            _ => (state(Mat::identity(m)), Some(m < 2)),
        };
        let tensor_pure = pure_witness(&f, tol).is_some_and(|w| maps_close(&dbl(&w), &f, tol));
        let plus_pure = is_pure(&f, tol);
        let kernel_pure = t.image(&f.choi).cols() <= 1;
        let agree = tensor_pure == plus_pure && plus_pure == kernel_pure;
        let matches = expected.is_none_or(|e| e == tensor_pure);
        report.check(agree && matches, || {
            Failure::new(format!(
                "purity notions disagree: ⊗-pure {tensor_pure}, +-pure {plus_pure}, kernel-pure {kernel_pure}"
            ))
            .input(map_json(&f))
        });
    }
    report
}

pub fn check_covering<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("covering_law");
    let kb = FloatKernels::<S>::new(tol);
    let mut covering = LawReport::new("covering");
    for &d in &p.dims {
        covering.absorb(check_covering_law(&kb, d, p.samples, p.seed));
        covering.absorb(check_atomicity(&kb, d, p.samples.min(50), p.seed));
    }
    let mut closed = true;
    let mut witness = None;
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 8, idx as u64);
        let (n, m, r) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
        let a = dbl(&Mat::<S>::gaussian(&mut rng, m, n));
        let b = dbl(&Mat::<S>::gaussian(&mut rng, r, m));
        if !t.compose(&b, &a).is_ok_and(|c| is_pure(&c, tol)) {
            closed = false;
            witness.get_or_insert_with(|| vec![map_json(&a), map_json(&b)]);
        }
    }
    report.samples += covering.samples;
    for f in covering.failures.iter().cloned() {
        report.fail(f);
    }
    report.check(covering.passed() == closed && closed, || {
        Failure::new(format!(
            "covering law ({}) and closure of purity under composition ({closed}) disagree",
            covering.passed()
        ))
        .inputs(witness.clone().unwrap_or_default())
    });
    report
}

pub fn check_causal_decomposition<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("causal_decomposition");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 9, idx as u64);
        let f: CpmMap<S> = channel(&mut rng, &p.dims);
        let json = || vec![map_json(&f)];
        let ks = match kraus_from_choi(&f, tol) {
            Ok(ks) => ks,
            Err(e) => {
                report.check(false, || Failure::new(format!("{e}")).inputs(json()));
                continue;
            }
        };
        let mut total = CpmMap::zero(f.in_dim, f.out_dim);
        let mut all_pure = true;
        for k in &ks {
            let piece = dbl(k);
            all_pure &= is_pure(&piece, tol);
            total = cpm_add(&total, &piece).expect("shapes");
        }
        report.check(all_pure && maps_close(&total, &f, tol), || {
            Failure::new("channel is not a sum of its pure branches").inputs(json())
        });
        let causal = t
            .compose(&cpm_discard(f.out_dim), &total)
            .is_ok_and(|x| maps_close(&x, &cpm_discard(f.in_dim), tol));
        report.check(causal, || Failure::new("coarse-grained branches are not causal").inputs(json()));
    }
    report
}

pub fn check_conditioning_addition<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("conditioning_addition");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 10, idx as u64);
        let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
        let (kf, kg) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let f: CpmMap<S> = random_cpm(&mut rng, n, m, kf);
        let g: CpmMap<S> = random_cpm(&mut rng, n, m, kg);
        let json = || vec![map_json(&f), map_json(&g)];
        let pointwise = cpm_add(&f, &g).expect("shapes");
        let via = cpm_add_via_biproduct(&f, &g);
        report.check(via.is_ok_and(|x| maps_close(&x, &pointwise, tol)), || {
            Failure::new("biproduct addition differs from pointwise addition").inputs(json())
        });
        // conditioning on a kernel and its complement
        let d = n;
        let r = rng.gen_range(0..=d);
        let k = t.kernel(&random_kernel_source::<S>(&mut rng, d, r));
        let kp = t.kernel(&k.dagger());
        let (a, b) = (Mat::<S>::gaussian(&mut rng, m, k.cols()), Mat::<S>::gaussian(&mut rng, m, kp.cols()));
        let h = a.mul_unchecked(&k.dagger()).add(&b.mul_unchecked(&kp.dagger())).expect("shapes");
        let ok = (k.cols() == 0 || close(&h.mul_unchecked(&k), &a, tol))
            && (kp.cols() == 0 || close(&h.mul_unchecked(&kp), &b, tol));
        report.check(ok, || {
            Failure::new("no morphism restricts to the given pair on k and k⊥").inputs(vec![a.to_json(), b.to_json()])
        });
    }
    report
}

pub fn check_cancellativity<S: FloatScalar>(_: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("cancellativity");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 11, idx as u64);
        let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
        let zero_case = idx % 5 == 0;
        let sample = |rng: &mut SampleRng| {
            if zero_case {
                CpmMap::<S>::zero(n, m)
            } else {
                random_cpm(rng, n, m, 1)
            }
        };
        let (f, g) = (sample(&mut rng), sample(&mut rng));
        let h = if rng.gen_bool(0.5) { g.clone() } else { random_cpm(&mut rng, n, m, 1) };
        let json = || vec![map_json(&f), map_json(&g), map_json(&h)];
        let (fg, fh) = (cpm_add(&f, &g).expect("shapes"), cpm_add(&f, &h).expect("shapes"));
        report.check(!maps_close(&fg, &fh, tol) || maps_close(&g, &h, tol), || {
            Failure::new("f + g = f + h but g ≠ h").inputs(json())
        });
        let zero = CpmMap::zero(n, m);
        report.check(
            !maps_close(&fg, &zero, tol) || (maps_close(&f, &zero, tol) && maps_close(&g, &zero, tol)),
            || Failure::new("f + g = 0 with a nonzero summand").inputs(json()),
        );
    }
    report
}

pub fn check_phased_ring_scalars<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("phased_ring_scalars");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 12, idx as u64);
        let z = S::normal(&mut rng);
        let s = dbl(&Mat::scalar(z));
        let value = *s.choi.get(0, 0);
        report.check(value.is_positive(tol), || Failure::new("scalar is not positive").input(s.to_json()));
        match polar_decompose(z) {
            Ok((r, u)) => {
                let recovers = r.mul(&u).distance(&z) <= tol * (1.0 + z.modulus());
                let invisible = maps_close(&dbl(&Mat::scalar(u)), &cpm_identity(1), tol);
                let matches = r.mul(&r).distance(&value) <= tol * (1.0 + value.modulus());
                report.check(recovers && invisible && matches, || {
                    Failure::new("polar decomposition does not recover the scalar").input(json!([z.to_c64().re, z.to_c64().im]))
                });
            }
            Err(e) => report.check(false, || Failure::new(format!("{e}"))),
        }
    }
    let max_dim = p.dims.iter().copied().max().unwrap_or(1);
    report.absorb(check_phase_generator(&t.phases(), max_dim, p.samples, p.seed, 1e3 * tol));
    if QuantumTheory::<S>::is_complex() {
        report.absorb(circle_positive_freeness(p.samples, p.seed, tol));
    } else {
        let signs = |rng: &mut SampleRng| if rng.gen_bool(0.5) { 1.0f64 } else { -1.0 };
        report.absorb(check_positive_freeness_and_cancellation("sign", &signs, p.samples, p.seed, tol));
    }
    report
}

impl PhaseFamily for Box<dyn PhaseFamily> {
    fn name(&self) -> String {
        self.as_ref().name()
    }

    fn sample(&self, rng: &mut SampleRng, a: usize, b: usize) -> Mat<Complex64> {
        self.as_ref().sample(rng, a, b)
    }
}

/// Splits `S^n` into kernel states; returns them as columns.
pub fn split_dimension<S: FloatScalar>(t: &QuantumTheory<S>, rng: &mut SampleRng, n: usize) -> Vec<Mat<S>> {
    let mut rest: Mat<S> = Mat::identity(n);
    let mut states = Vec::new();
    while rest.cols() > 0 && states.len() <= n {
        let c: Mat<S> = linalg::random_isometry(rng, rest.cols(), 1);
        let psi = t.image(&rest.mul_unchecked(&c));
        if psi.cols() == 0 {
            break;
        }
        let inside = t.kernel(&psi.dagger().mul_unchecked(&rest));
        rest = rest.mul_unchecked(&linalg::range_isometry(&inside, t.tol).0);
        states.push(psi);
    }
    states
}

pub fn check_boundedness_and_dims<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("boundedness_dims");
    let max_dim = p.dims.iter().copied().max().unwrap_or(1);
    for n in 0..=max_dim {
        let mut rng = sample_rng(p.seed, 13, n as u64);
        let states = split_dimension(t, &mut rng, n);
        report.check(states.len() == n, || {
            Failure::new(format!("splitting recovered {} of {n} dimensions", states.len()))
        });
        let causal = states.iter().all(|s| s.cols() == 1 && isometry_defect(s) <= tol);
        let mut total: Mat<S> = Mat::zeros(n, n);
        for s in &states {
            total = total.add(&s.mul_unchecked(&s.dagger())).expect("square");
        }
        report.check(causal && dist(&total, &Mat::identity(n)) <= tol * (1.0 + n as f64), || {
            Failure::new(format!("kernel states of {n} are not an orthonormal basis"))
        });
    }
    // the scalars k·1 are distinct, and q · (p/q) = p
    let one = cpm_identity::<S>(1);
    let mut sum: CpmMap<S> = CpmMap::zero(1, 1);
    let mut seen: Vec<f64> = Vec::new();
    for k in 0..=8u32 {
        let v = sum.choi.get(0, 0).re();
        report.check((v - k as f64).abs() <= tol && seen.iter().all(|s| (s - v).abs() > 0.5), || {
            Failure::new(format!("{k}·1 collides with a smaller multiple"))
        });
        seen.push(v);
        sum = cpm_add(&sum, &one).expect("scalars");
    }
    for (num, den) in [(1u32, 2u32), (2, 3), (3, 4), (5, 2)] {
        let frac = dbl(&Mat::scalar(S::from_f64((num as f64 / den as f64).sqrt())));
        let mut acc: CpmMap<S> = CpmMap::zero(1, 1);
        for _ in 0..den {
            acc = cpm_add(&acc, &frac).expect("scalars");
        }
        report.check((acc.choi.get(0, 0).re() - num as f64).abs() <= tol * num as f64, || {
            Failure::new(format!("{den} · ({num}/{den}) ≠ {num}"))
        });
    }
    report
}

pub fn check_min_dilation<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("min_dilation");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 14, idx as u64);
        let (f, expected_env): (CpmMap<S>, Option<usize>) = match idx % 5 {
            0 => {
                let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
                (dbl(&Mat::gaussian(&mut rng, m, n)), Some(1))
            }
            1 => (half_depolarizing(), Some(4)),
            2 => {
                let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
                (CpmMap::zero(n, m), Some(1))
            }
            _ => (channel(&mut rng, &p.dims), None),
        };
        let m = f.out_dim;
        let json = || vec![map_json(&f)];
        let (pf, k) = match purify(&f, tol) {
            Ok(x) => x,
            Err(e) => {
                report.check(false, || Failure::new(format!("{e}")).inputs(json()));
                continue;
            }
        };
        report.check(expected_env.is_none_or(|e| e == k), || {
            Failure::new(format!("minimal environment has dimension {k}, expected {expected_env:?}")).inputs(json())
        });
        let v = pure_witness(&pf, tol).expect("pure");
        let x = environment_rows(&v, m, k);
        if x.max_magnitude() <= tol {
            report.check(f.choi.max_magnitude() <= tol, || Failure::new("zero dilation of a nonzero map").inputs(json()));
            continue;
        }
        let k2 = rng.gen_range(k..=k + 2);
        let w: Mat<S> = linalg::random_isometry(&mut rng, k2, k);
        let v2 = Mat::<S>::identity(m).kron(&w).mul_unchecked(&v);
        let x2 = environment_rows(&v2, m, k2);
        let (ht, resid) = least_squares(&x.dagger(), &x2.dagger(), tol);
        let h = ht.dagger();
        let factor_ok = resid <= 100.0 * tol * scale_of(&x, &x2);
        let g = dbl(&v2);
        let through = t.compose(&cpm_tensor(&cpm_identity(m), &dbl(&h)), &pf);
        let reproduces = through.is_ok_and(|y| maps_close(&y, &g, 100.0 * tol));
        report.check(factor_ok && reproduces, || {
            Failure::new("dilation does not factor through the minimal one")
                .inputs(vec![map_json(&f), v2.to_json()])
                .deviation(resid)
        });
        // the factor is unique (X has full row rank) and an isometry
        let (rank, _) = numerical_rank(&svd(&x).sigma, tol);
        report.check(rank == k && isometry_defect(&h) <= 100.0 * tol, || {
            Failure::new("factorisation through the minimal dilation is not unique")
                .inputs(vec![map_json(&f), v2.to_json()])
        });
    }
    report
}

/// Pure subcategory → phase quotient → GP† → CPM, compared with the
/// original channel by Choi distance.
pub fn check_reconstruction<S: FloatScalar>(_: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("reconstruction_roundtrip");
    let mut worst = 0.0f64;
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 15, idx as u64);
        let f: CpmMap<S> = channel(&mut rng, &p.dims);
        let m = f.out_dim;
        let json = || vec![map_json(&f)];
        let Ok((pf, k)) = purify(&f, tol) else {
            report.check(false, || Failure::new("purification failed").inputs(json()));
            continue;
        };
        let v = pure_witness(&pf, tol).expect("pure").to_c64();
        let u = Complex64::random_phase(&mut rng);
        let q = canonicalize(&gp_embed(&v).scale(&u), tol);
        let back = gp_extract(&q).and_then(|w| discard_last(&dbl(&w), m, k));
        let d = back.map(|b| dist(&b.choi, &f.choi.to_c64())).unwrap_or(f64::INFINITY);
        worst = worst.max(d);
        report.check(d <= super::ROUNDTRIP_FACTOR * tol, || {
            Failure::new("round trip does not reproduce the channel").inputs(json()).deviation(d)
        });
    }
    report.note(format!("max Choi distance {worst:.3e}"));
    report
}

pub fn check_cp_axiom<S: FloatScalar>(t: &QuantumTheory<S>, p: &Params) -> LawReport {
    let tol = p.tol;
    let mut report = LawReport::new("cp_axiom");
    for idx in 0..p.samples {
        let mut rng = sample_rng(p.seed, 16, idx as u64);
        let (n, m) = (pick(&mut rng, &p.dims), pick(&mut rng, &p.dims));
        let f: Mat<S> = Mat::gaussian(&mut rng, m, n);
        let related = idx % 2 == 0;
        let g = if related {
            linalg::random_unitary::<S, _>(&mut rng, m).mul_unchecked(&f)
        } else {
            Mat::gaussian(&mut rng, m, n)
        };
        let disc = |x: &Mat<S>| t.compose(&cpm_discard(m), &dbl(x));
        let lhs = matches!((disc(&f), disc(&g)), (Ok(a), Ok(b)) if maps_close(&a, &b, tol));
        let rhs = close(&f.dagger().mul_unchecked(&f), &g.dagger().mul_unchecked(&g), tol);
        report.check(lhs == rhs && lhs == related, || {
            Failure::new(format!("discard ∘ Dbl(f) = discard ∘ Dbl(g) is {lhs} but f†f = g†g is {rhs}"))
                .inputs(vec![f.to_json(), g.to_json()])
        });
    }
    report
}

/// Informational: compares the span of product states with the bipartite
/// state space.
pub fn local_tomography<S: FloatScalar>(_: &QuantumTheory<S>, p: &Params) -> LawReport {
    let mut report = LawReport::new("local_tomography");
    let mut rng = sample_rng(p.seed, 17, 0);
    let real_rows = |rho: &Mat<S>| -> Vec<f64> {
        rho.data().iter().flat_map(|z| [z.to_c64().re, z.to_c64().im]).collect()
    };
    let random_state = |rng: &mut SampleRng, d: usize| {
        let a: Mat<S> = Mat::gaussian(rng, d, d);
        a.mul_unchecked(&a.dagger())
    };
    let span_rank = |rows: Vec<Vec<f64>>| {
        let cols = rows[0].len();
        let m = Mat::from_fn(rows.len(), cols, |i, j| rows[i][j]);
        numerical_rank(&svd(&m).sigma, 1e-9).0
    };
    let (a, b) = (2, 2);
    let products: Vec<Vec<f64>> =
        (0..40).map(|_| real_rows(&random_state(&mut rng, a).kron(&random_state(&mut rng, b)))).collect();
    let joint: Vec<Vec<f64>> = (0..40).map(|_| real_rows(&random_state(&mut rng, a * b))).collect();
    let (pr, jr) = (span_rank(products), span_rank(joint));
    report.check(true, || unreachable!());
    report.note(format!(
        "product states span {pr} of {jr} real dimensions of bipartite states: {}",
        if pr == jr { "locally tomographic" } else { "not locally tomographic" }
    ));
    report
}
