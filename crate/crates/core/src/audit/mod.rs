//! Audits of operational principles, kernel principles and the properties
//! of quantum categories against concrete theories.
//!
//! Every check is a sampled decidable property. Checks run concurrently,
//! each on its own seeded generator, and the report lists them in the
//! declared order.

mod mspek;
mod quantum;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catcore::sample_seed;
use crate::error::{Error, Result};
use crate::report::{Failure, LawReport};
use crate::scalars::{Complex64, DEFAULT_TOL};

pub use mspek::SpekTheory;
pub use quantum::{
    effect, environment_rows, half_depolarizing, homogeneity_unitary, split_dimension, state, QuantumTheory,
    SignPhases,
};

/// Internal effects have smallest eigenvalue above this multiple of `tol`.
pub const INTERNAL_FACTOR: f64 = 100.0;
/// Environment unitaries may leave a residual up to this multiple of `tol`.
pub const EU_FACTOR: f64 = 1e3;
/// Reconstructed channels may differ by this multiple of `tol`.
pub const ROUNDTRIP_FACTOR: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principle {
    StrongPurification,
    PureExclusion,
    KernelsCausallyComplemented,
    ConditioningAddition,
    InternalIsomorphism,
    Homogeneity,
    PerfectDistinguishability,
    IdealCompression,
    PurityCoincidence,
    CoveringLaw,
    CausalDecomposition,
    PhasedRingScalars,
    BoundednessDims,
    MinDilation,
    CpAxiom,
    ReconstructionRoundtrip,
    Cancellativity,
    LocalTomography,
}

impl Principle {
    pub const ALL: [Principle; 18] = [
        Principle::StrongPurification,
        Principle::PureExclusion,
        Principle::KernelsCausallyComplemented,
        Principle::ConditioningAddition,
        Principle::InternalIsomorphism,
        Principle::Homogeneity,
        Principle::PerfectDistinguishability,
        Principle::IdealCompression,
        Principle::PurityCoincidence,
        Principle::CoveringLaw,
        Principle::CausalDecomposition,
        Principle::PhasedRingScalars,
        Principle::BoundednessDims,
        Principle::MinDilation,
        Principle::CpAxiom,
        Principle::ReconstructionRoundtrip,
        Principle::Cancellativity,
        Principle::LocalTomography,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Principle::StrongPurification => "strong_purification",
            Principle::PureExclusion => "pure_exclusion",
            Principle::KernelsCausallyComplemented => "kernels_causally_complemented",
            Principle::ConditioningAddition => "conditioning_addition",
            Principle::InternalIsomorphism => "internal_isomorphism",
            Principle::Homogeneity => "homogeneity",
            Principle::PerfectDistinguishability => "perfect_distinguishability",
            Principle::IdealCompression => "ideal_compression",
            Principle::PurityCoincidence => "purity_coincidence",
            Principle::CoveringLaw => "covering_law",
            Principle::CausalDecomposition => "causal_decomposition",
            Principle::PhasedRingScalars => "phased_ring_scalars",
            Principle::BoundednessDims => "boundedness_dims",
            Principle::MinDilation => "min_dilation",
            Principle::CpAxiom => "cp_axiom",
            Principle::ReconstructionRoundtrip => "reconstruction_roundtrip",
            Principle::Cancellativity => "cancellativity",
            Principle::LocalTomography => "local_tomography",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn statement(self) -> &'static str {
        match self {
            Principle::StrongPurification => {
                "every morphism has a pure dilation, unique up to a causal isomorphism on the environment; pure \
                 morphisms are closed under ∘, ⊗, †; every nonzero object has a causal pure state"
            }
            Principle::PureExclusion => "every causal pure state on a non-trivial object is annihilated by a nonzero effect",
            Principle::KernelsCausallyComplemented => {
                "dagger kernels are causal, [k, k⊥] is unitary and ⊤ = ⊤∘k† + ⊤∘k⊥†"
            }
            Principle::ConditioningAddition => {
                "addition agrees with biproduct addition; maps on k and k⊥ extend uniquely to the whole object"
            }
            Principle::InternalIsomorphism => "every internal effect is discarding after some isomorphism",
            Principle::Homogeneity => "f†f = g†g implies g = U∘f for a unitary U",
            Principle::PerfectDistinguishability => {
                "non-internal states are perfectly distinguishable from a nonzero state, and their images give \
                 ideal compression"
            }
            Principle::IdealCompression => "Im(ρ) with its kernel and dagger is an ideal compression of the face of ρ",
            Principle::PurityCoincidence => "⊗-purity, +-purity and kernel purity coincide",
            Principle::CoveringLaw => "the kernel lattice satisfies the covering law exactly when pure morphisms compose",
            Principle::CausalDecomposition => "every causal morphism is a causal coarse-graining of pure branches",
            Principle::PhasedRingScalars => {
                "scalars are positive with polar decompositions, phases generate, and positive phases are trivial"
            }
            Principle::BoundednessDims => "every object splits into n causal kernel states, and n·1 ≠ m·1 for n ≠ m",
            Principle::MinDilation => {
                "the Kraus-rank dilation is minimal: every dilation factors through it by a unique isometry"
            }
            Principle::CpAxiom => "pure maps with equal discarded marginals differ by a map on the environment",
            Principle::ReconstructionRoundtrip => {
                "pure subcategory, phase quotient, GP† and CPM reproduce the channel"
            }
            Principle::Cancellativity => "f + g = f + h implies g = h, and f + g = 0 implies f = g = 0",
            Principle::LocalTomography => "informational: whether product states span bipartite states",
        }
    }

    /// `ideal_compression` is reported inside `perfect_distinguishability`.
    fn has_own_entry(self) -> bool {
        self != Principle::IdealCompression
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    #[serde(rename = "cpmC")]
    CpmC,
    #[serde(rename = "cpmR")]
    CpmR,
    #[serde(rename = "mspek")]
    MSpek,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::CpmC, Backend::CpmR, Backend::MSpek];

    pub fn name(self) -> &'static str {
        match self {
            Backend::CpmC => "cpmC",
            Backend::CpmR => "cpmR",
            Backend::MSpek => "mspek",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == s)
    }

    pub fn default_dims(self) -> Vec<usize> {
        match self {
            Backend::MSpek => vec![1],
            _ => vec![2, 3],
        }
    }

    pub fn supports(self, p: Principle) -> bool {
        match self {
            Backend::MSpek => matches!(p, Principle::StrongPurification | Principle::PureExclusion | Principle::CpAxiom),
            _ => true,
        }
    }
}

/// Deliberately corrupted variants of the CPM backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutant {
    /// Kernels with the right range but a column scaled by two.
    NonIsometricKernels,
    /// Block permutations and non-scalar unitaries offered as phases.
    NonCentralPhases,
    /// Composition followed by a partial transpose.
    TransposeComposed,
    /// Dagger unavailable.
    NoDagger,
}

impl Mutant {
    pub const ALL: [Mutant; 4] = [
        Mutant::NonIsometricKernels,
        Mutant::NonCentralPhases,
        Mutant::TransposeComposed,
        Mutant::NoDagger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::NonIsometricKernels => "non_isometric_kernels",
            Mutant::NonCentralPhases => "non_central_phases",
            Mutant::TransposeComposed => "transpose_composed",
            Mutant::NoDagger => "no_dagger",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

fn default_samples() -> usize {
    200
}

fn default_seed() -> u64 {
    42
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_checks() -> Vec<String> {
    vec!["all".into()]
}

/// `{"backend", "dims", "samples", "seed", "tol", "checks"}` plus the
/// optional `"mutant"` and `"timings"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub backend: String,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutant: Option<String>,
    #[serde(default)]
    pub timings: bool,
}

impl AuditConfig {
    pub fn new(backend: &str) -> Self {
        AuditConfig {
            backend: backend.into(),
            dims: Vec::new(),
            samples: default_samples(),
            seed: default_seed(),
            tol: default_tol(),
            checks: default_checks(),
            mutant: None,
            timings: false,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(serde_json::from_value(v.clone())?)
    }

    pub fn validate(&self) -> Result<ValidConfig> {
        let backend = Backend::from_name(&self.backend).ok_or_else(|| {
            let known: Vec<&str> = Backend::ALL.iter().map(|b| b.name()).collect();
            Error::Invalid(format!("unknown backend `{}` (known: {})", self.backend, known.join(", ")))
        })?;
        let mutant = match &self.mutant {
            None => None,
            Some(m) => Some(Mutant::from_name(m).ok_or_else(|| Error::Invalid(format!("unknown mutant `{m}`")))?),
        };
        if mutant.is_some() && backend == Backend::MSpek {
            return Err(Error::Invalid("mutants apply to the CPM backends only".into()));
        }
        let dims = if self.dims.is_empty() { backend.default_dims() } else { self.dims.clone() };
        match backend {
            Backend::MSpek if dims.iter().any(|&n| n == 0 || n > 2) => {
                return Err(Error::Invalid("MSpek audits take generator powers 1 or 2".into()));
            }
            Backend::CpmC | Backend::CpmR if dims.iter().any(|&d| d == 0 || d > 6) => {
                return Err(Error::Invalid("CPM audits take dimensions between 1 and 6".into()));
            }
            _ => {}
        }
        if !(self.tol > 0.0 && self.tol < 1e-2) {
            return Err(Error::Invalid(format!("tolerance {} out of range", self.tol)));
        }
        if self.samples == 0 {
            return Err(Error::Invalid("at least one sample is required".into()));
        }
        let mut checks = Vec::new();
        for name in &self.checks {
            if name == "all" {
                checks.extend(Principle::ALL.into_iter().filter(|p| backend.supports(*p) && p.has_own_entry()));
                continue;
            }
            let p = Principle::from_name(name).ok_or_else(|| {
                let known: Vec<&str> = Principle::ALL.iter().map(|p| p.name()).collect();
                Error::Invalid(format!("unknown check `{name}` (known: all, {})", known.join(", ")))
            })?;
            if !backend.supports(p) {
                return Err(Error::Invalid(format!("check `{name}` is not available on backend `{}`", backend.name())));
            }
            // ideal compression is verified with perfect distinguishability
            let p = if p == Principle::IdealCompression { Principle::PerfectDistinguishability } else { p };
            checks.push(p);
        }
        let mut seen = std::collections::HashSet::new();
        checks.retain(|p| seen.insert(*p));
        if checks.is_empty() {
            return Err(Error::Invalid("no checks selected".into()));
        }
        Ok(ValidConfig {
            backend,
            mutant,
            dims,
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
            checks,
            timings: self.timings,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidConfig {
    pub backend: Backend,
    pub mutant: Option<Mutant>,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<Principle>,
    pub timings: bool,
}

/// Per-check parameters with a forked seed.
#[derive(Clone, Debug)]
pub struct Params {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub check: String,
    pub statement: String,
    pub pass: bool,
    pub samples: usize,
    pub failure_count: usize,
    pub witnesses: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl AuditEntry {
    fn from_report(p: Principle, r: LawReport) -> Self {
        AuditEntry {
            check: p.name().into(),
            statement: p.statement().into(),
            pass: r.passed(),
            samples: r.samples,
            failure_count: r.failure_count,
            witnesses: r.failures,
            notes: r.notes,
            elapsed_ms: r.elapsed_ms,
        }
    }

    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{status}] {} ({} samples, {} failures)",
            self.check, self.samples, self.failure_count
        );
        if let Some(ms) = self.elapsed_ms {
            line.push_str(&format!(" {ms} ms"));
        }
        line
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditMetadata {
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutant: Option<String>,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub versions: serde_json::Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub metadata: AuditMetadata,
    pub entries: Vec<AuditEntry>,
    pub pass: bool,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn entry(&self, check: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "audit {}{} dims {:?} seed {}\n",
            self.metadata.backend,
            self.metadata.mutant.as_deref().map(|m| format!(" [{m}]")).unwrap_or_default(),
            self.metadata.dims,
            self.metadata.seed
        );
        for e in &self.entries {
            out.push_str(&e.summary_line());
            out.push('\n');
            for w in e.witnesses.iter().take(3) {
                out.push_str(&format!("    witness: {}\n", w.message));
            }
            for n in &e.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        out.push_str(if self.pass { "all checks passed\n" } else { "some checks failed\n" });
        out
    }
}

fn run_quantum<S: crate::scalars::FloatScalar>(t: &QuantumTheory<S>, p: Principle, params: &Params) -> LawReport {
    use quantum as q;
    match p {
        Principle::StrongPurification => q::check_strong_purification(t, params),
        Principle::PureExclusion => q::check_pure_exclusion(t, params),
        Principle::KernelsCausallyComplemented => q::check_causal_complementation(t, params),
        Principle::ConditioningAddition => q::check_conditioning_addition(t, params),
        Principle::InternalIsomorphism => q::check_internal_isomorphism(t, params),
        Principle::Homogeneity => q::check_homogeneity(t, params),
        Principle::PerfectDistinguishability | Principle::IdealCompression => q::check_pd_and_compression(t, params),
        Principle::PurityCoincidence => q::check_purity_coincidence(t, params),
        Principle::CoveringLaw => q::check_covering(t, params),
        Principle::CausalDecomposition => q::check_causal_decomposition(t, params),
        Principle::PhasedRingScalars => q::check_phased_ring_scalars(t, params),
        Principle::BoundednessDims => q::check_boundedness_and_dims(t, params),
        Principle::MinDilation => q::check_min_dilation(t, params),
        Principle::CpAxiom => q::check_cp_axiom(t, params),
        Principle::ReconstructionRoundtrip => q::check_reconstruction(t, params),
        Principle::Cancellativity => q::check_cancellativity(t, params),
        Principle::LocalTomography => q::local_tomography(t, params),
    }
}

fn run_spek(t: &SpekTheory, p: Principle, params: &Params) -> LawReport {
    match p {
        Principle::StrongPurification => mspek::check_strong_purification(t, params),
        Principle::PureExclusion => mspek::check_pure_exclusion(t, params),
        Principle::CpAxiom => mspek::check_cp_axiom(t, params),
        other => {
            let mut r = LawReport::new(other.name());
            r.fail(Failure::new(format!("{} is not available on MSpek", other.name())));
            r
        }
    }
}

/// Runs one check of a validated configuration.
pub fn run_check(cfg: &ValidConfig, p: Principle, spek: Option<&SpekTheory>) -> AuditEntry {
    let start = Instant::now();
    let params = Params {
        dims: cfg.dims.clone(),
        samples: cfg.samples,
        seed: sample_seed(cfg.seed, 0xa0d1, p as u64),
        tol: cfg.tol,
    };
    let report = match cfg.backend {
        Backend::CpmC => run_quantum(&QuantumTheory::<Complex64>::new(cfg.tol, cfg.mutant), p, &params),
        Backend::CpmR => run_quantum(&QuantumTheory::<f64>::new(cfg.tol, cfg.mutant), p, &params),
        Backend::MSpek => run_spek(spek.expect("closures generated"), p, &params),
    };
    let report = if cfg.timings { report.timed(start) } else { report };
    AuditEntry::from_report(p, report)
}

/// Executes the selected checks in declared order.
pub fn run_audit(config: &AuditConfig) -> Result<AuditReport> {
    let cfg = config.validate()?;
    run_validated(&cfg)
}

pub fn run_validated(cfg: &ValidConfig) -> Result<AuditReport> {
    let spek = match cfg.backend {
        Backend::MSpek => {
            let n = *cfg.dims.iter().max().expect("nonempty dims") as u8;
            Some(SpekTheory::generate(n, crate::backends::spek::DEFAULT_BUDGET)?)
        }
        _ => None,
    };
    let entries: Vec<AuditEntry> = cfg.checks.par_iter().map(|&p| run_check(cfg, p, spek.as_deref())).collect();
    let mut versions = serde_json::Map::new();
    versions.insert("proctheory".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    let pass = entries.iter().all(|e| e.pass);
    Ok(AuditReport {
        metadata: AuditMetadata {
            backend: cfg.backend.name().into(),
            mutant: cfg.mutant.map(|m| m.name().into()),
            dims: cfg.dims.clone(),
            samples: cfg.samples,
            seed: cfg.seed,
            tol: cfg.tol,
            versions,
        },
        entries,
        pass,
    })
}

#[cfg(test)]
mod tests;
