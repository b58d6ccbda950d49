//! The end-to-end check that `μ_i^{m}(Λ)` is socle equivalent (or isomorphic)
//! to `Λ`, producing a deterministic report.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::Algebra;
use crate::endo::{endo_algebra, present, PresentedAlgebra};
use crate::equivalence::{
    construct_phi, iso_search, socle_equivalence_by_search, verdict_json, verify_phi,
    verify_socle_certificate, EquivalenceVerdict, IsoBudget, PhiCertificate, SocleCertificate,
};
use crate::error::Result;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::mutation::{
    build_addq_resolution, from_projective_resolution, AddQResolution, MutationState, MAX_PERIOD,
};
use crate::presentation::AlgebraPresentation;
use crate::representations::period_of_simple;

/// Hex SHA-256 of a text.
pub fn content_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Content hash of a presentation in its canonical JSON form.
pub fn algebra_id<F: Field>(pres: &AlgebraPresentation<F>) -> String {
    content_hash(&serde_json::to_string(&pres.to_file()).expect("presentation serializes"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub max_period: usize,
    pub max_resolution_length: usize,
    pub budget: IsoBudget,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_period: MAX_PERIOD,
            max_resolution_length: MAX_PERIOD,
            budget: IsoBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub step: usize,
    /// vertices of the new term `P^(k)`, 1-based
    pub term: Vec<usize>,
    pub tilting: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiOutcome {
    pub certified: bool,
    pub detail: Option<String>,
}

/// Everything `verify` reports; contains no timings so that it is reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub algebra_id: String,
    pub vertex: usize,
    pub period: Option<usize>,
    pub hypothesis: String,
    pub resolution: Value,
    pub steps: Vec<StepReport>,
    pub mutated: Option<Value>,
    pub mutated_relations: Vec<String>,
    pub phi: PhiOutcome,
    pub isomorphism: Value,
    pub socle_quotients: Value,
    pub verdict_kind: String,
    pub verdict: Value,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        verdict_exit_code(&self.verdict_kind)
    }
}

pub fn verdict_exit_code(kind: &str) -> i32 {
    match kind {
        "Isomorphic" | "SocleEquivalentAt" => 0,
        "Distinct" => 5,
        _ => 4,
    }
}

/// The report together with the objects it was derived from.
#[derive(Debug)]
pub struct Verification<F: Field> {
    pub report: VerificationReport,
    pub resolution: AddQResolution<F::Elem>,
    pub mutated: Option<PresentedAlgebra<F>>,
    pub verdict: EquivalenceVerdict<F::Elem>,
    pub timings: Vec<(String, Duration)>,
}

/// `Φ` rewritten in the coordinates of the presented algebra.
fn transport_phi<F: Field>(
    p: &PresentedAlgebra<F>,
    cert: &PhiCertificate<F::Elem>,
) -> PhiCertificate<F::Elem> {
    let f = p.algebra.field();
    let n = p.algebra.vertex_count();
    let matrices = cert
        .matrices
        .iter()
        .enumerate()
        .map(|(idx, m)| {
            let (k, l) = (idx / n, idx % n);
            let cols = (0..m.cols())
                .map(|c| p.pull_element(k, l, &m.column(c)))
                .collect();
            Matrix::from_columns(f, p.algebra.block_dim(k, l), cols)
        })
        .collect();
    PhiCertificate {
        vertex: cert.vertex,
        matrices,
    }
}

/// Runs period detection, builds a periodic add-Q-resolution of `P_i` (from the
/// projective resolution of `S_i` when its interior terms avoid `P_i`),
/// mutates along it, presents the endomorphism algebra and compares it with
/// `Λ`: by `Φ`, by isomorphism search, and by isomorphism search on the
/// socle quotients at `i`.
pub fn verify<F: Field>(
    alg: &Algebra<F>,
    vertex: usize,
    opts: &VerifyOptions,
) -> Result<Verification<F>> {
    alg.check_vertex(vertex)?;
    let f = alg.field();
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut Vec<(String, Duration)>| {
        timings.push((name.to_string(), clock.elapsed()));
        clock = Instant::now();
    };
    let period = period_of_simple(alg, vertex, opts.max_period)?;
    let (hypothesis, res) = match from_projective_resolution(alg, vertex)? {
        Some(res) => ("projective resolution with interior terms in add Q", res),
        None => (
            "add-Q-resolution",
            build_addq_resolution(alg, vertex, opts.max_resolution_length)?,
        ),
    };
    lap("resolution", &mut timings);
    let mut steps = Vec::new();
    for k in 1..=res.len() {
        let state = MutationState::from_maps(alg, vertex, res.state.maps()[..k].to_vec())?;
        steps.push(StepReport {
            step: k,
            term: state.terms()[k].iter().map(|v| v + 1).collect(),
            tilting: state.tilting_check(alg)?.holds,
        });
    }
    lap("tilting", &mut timings);
    let mut report = VerificationReport {
        algebra_id: algebra_id(alg.presentation()),
        vertex: vertex + 1,
        period,
        hypothesis: hypothesis.to_string(),
        resolution: serde_json::to_value(res.to_json(f)).expect("resolution serializes"),
        steps,
        mutated: None,
        mutated_relations: Vec::new(),
        phi: PhiOutcome {
            certified: false,
            detail: None,
        },
        isomorphism: Value::Null,
        socle_quotients: Value::Null,
        verdict_kind: String::new(),
        verdict: Value::Null,
    };
    if !res.is_periodic() {
        let msg = format!(
            "no periodic add-Q-resolution of P_{} up to length {}",
            vertex + 1,
            opts.max_resolution_length
        );
        let verdict = EquivalenceVerdict::Inconclusive(vec![msg.clone()]);
        report.phi.detail = Some(msg);
        report.verdict_kind = verdict.kind().to_string();
        report.verdict = verdict_json(alg, alg, &verdict);
        return Ok(Verification {
            report,
            resolution: res,
            mutated: None,
            verdict,
            timings,
        });
    }

    let endo = endo_algebra(alg.blocks(), res.state.summands(alg)?)?;
    lap("endomorphisms", &mut timings);
    let presented = present(endo.blocks(), Some(alg.quiver()))?;
    lap("presentation", &mut timings);
    let mu = &presented.algebra;
    report.mutated =
        Some(serde_json::to_value(mu.presentation().to_file()).expect("presentation serializes"));
    report.mutated_relations = mu
        .presentation()
        .relations
        .iter()
        .map(|r| mu.presentation().fmt_relation(r))
        .collect();

    let phi = match construct_phi(alg, &res, &endo) {
        Ok(cert) => {
            let moved = transport_phi(&presented, &cert);
            match verify_phi(alg.blocks(), mu.blocks(), &moved) {
                Ok(()) => Ok(moved),
                Err(e) => Err(e.to_string()),
            }
        }
        Err(e) => Err(e.to_string()),
    };
    report.phi = match &phi {
        Ok(_) => PhiOutcome {
            certified: true,
            detail: None,
        },
        Err(msg) => PhiOutcome {
            certified: false,
            detail: Some(msg.clone()),
        },
    };
    lap("phi", &mut timings);
    let iso = iso_search(mu, alg, &opts.budget);
    report.isomorphism = verdict_json(mu, alg, &iso);
    lap("isomorphism search", &mut timings);
    let quotients = socle_equivalence_by_search(mu, alg, vertex, &opts.budget)?;
    report.socle_quotients = verdict_json(mu, alg, &quotients);
    lap("socle quotients", &mut timings);

    let verdict = match (iso, phi, quotients) {
        (EquivalenceVerdict::Isomorphic(c), _, _) => EquivalenceVerdict::Isomorphic(c),
        (_, Ok(cert), _) => EquivalenceVerdict::SocleEquivalentAt {
            vertex,
            certificate: SocleCertificate::Phi(cert),
        },
        (_, _, q @ EquivalenceVerdict::SocleEquivalentAt { .. }) => q,
        (d @ EquivalenceVerdict::Distinct(_), _, _) => d,
        (EquivalenceVerdict::Inconclusive(mut log), Err(msg), q) => {
            log.push(format!("Φ: {msg}"));
            if let EquivalenceVerdict::Inconclusive(more) = q {
                log.extend(more.into_iter().map(|l| format!("quotients: {l}")));
            }
            EquivalenceVerdict::Inconclusive(log)
        }
        (other, _, _) => other,
    };
    if let EquivalenceVerdict::SocleEquivalentAt { certificate, .. } = &verdict {
        debug_assert!(verify_socle_certificate(mu, alg, vertex, certificate));
    }
    report.verdict_kind = verdict.kind().to_string();
    report.verdict = verdict_json(mu, alg, &verdict);
    Ok(Verification {
        report,
        resolution: res,
        mutated: Some(presented),
        verdict,
        timings,
    })
}

/// Short summary of a report for terminal output.
pub fn summary(report: &VerificationReport) -> Value {
    json!({
        "vertex": report.vertex,
        "period": report.period,
        "hypothesis": report.hypothesis,
        "steps": report.steps.len(),
        "all_tilting": report.steps.iter().all(|s| s.tilting),
        "phi": report.phi.certified,
        "verdict": report.verdict_kind,
    })
}
