//! The nonexistence argument as checkable certificates.
//!
//! A quasi-symmetric 2-(56,12,9) design with intersection numbers 0 and 3
//! would contain, at every point `z`, 165 blocks avoiding `z` whose indicator
//! vectors are weight-12 {0,1} words of the dual ternary code of some
//! 56-point biplane, pairwise meeting in 0 or 3 coordinates. Each biplane is
//! eliminated either because it has fewer than 165 such words or because the
//! compatibility graph on them has no clique of size 165. The remaining
//! parameter sets follow by exact parameter arithmetic and recorded premises.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::clique::{self, CliqueResult, ProofMode};
use crate::code::{EnumerationConfig, LinearCodeView, MinDistanceConfig, MinDistanceVerdict, SupportSet};
use crate::design::{DesignSignature, IncidenceStructure};
use crate::error::{Error, Result};
use crate::par;

/// Blocks of a quasi-symmetric 2-(56,12,9) design avoiding a fixed point.
pub const REQUIRED_WORDS: usize = 165;
/// Weight of the dual codewords that can be such blocks.
pub const WORD_WEIGHT: usize = 12;
pub const FIELD: u32 = 3;
/// Minimum distance of every biplane code; it makes each residual design
/// linearly embeddable.
pub const BIPLANE_MIN_DISTANCE: usize = 11;
pub const ALLOWED_INTERSECTIONS: [usize; 2] = [0, 3];

pub const PREMISE_RESIDUAL_EMBEDDING: &str = "residual-embedding";
pub const PREMISE_BIPLANE_CLASSIFICATION: &str = "biplane-classification";
pub const PREMISE_QS_37_9_8: &str = "qs-2-37-9-8-x1-y3-nonexistence";

pub const VERDICT_QS_56: &str = "qs-2-56-12-9-x0-y3";
pub const VERDICT_QS_57: &str = "qs-2-57-12-11-x0-y3";
pub const VERDICT_QUASI3_267: &str = "quasi3-2-267-57-12-x0-y3";
pub const VERDICT_QUASI3_149: &str = "quasi3-2-149-37-9-x1-y3";

/// An external theorem the certificates rely on but do not re-prove.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Premise {
    pub id: String,
    pub statement: String,
    pub source: String,
}

pub fn premise_registry() -> Vec<Premise> {
    let p = |id: &str, statement: &str, source: &str| Premise {
        id: id.into(),
        statement: statement.into(),
        source: source.into(),
    };
    vec![
        p(
            PREMISE_RESIDUAL_EMBEDDING,
            "every 2-(45,9,2) design is the residual design of a 2-(56,11,2) biplane with respect to a block",
            "M. Hall Jr. and W. S. Connor, An embedding theorem for balanced incomplete block designs, Canad. J. Math. 6 (1954)",
        ),
        p(
            PREMISE_BIPLANE_CLASSIFICATION,
            "up to isomorphism there are exactly five 2-(56,11,2) biplanes",
            "P. Kaski and P. R. J. Östergård, There are exactly five biplanes with k = 11, J. Combin. Des. 16 (2008)",
        ),
        p(
            PREMISE_QS_37_9_8,
            "no quasi-symmetric 2-(37,9,8) design with intersection numbers 1 and 3 exists",
            "M. Harada, A. Munemasa and V. D. Tonchev, Self-dual codes and the nonexistence of a quasi-symmetric 2-(37,9,8) design with intersection numbers 1 and 3, J. Combin. Des. 25 (2017)",
        ),
    ]
}

/// Reference values for the ternary codes of the five biplanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceRow {
    pub id: &'static str,
    pub dimension: usize,
    /// Automorphism group order; informational, not checked.
    pub aut_order: u64,
    pub min_distance: usize,
    pub weight12_count: usize,
}

pub const REFERENCE_TABLE: [ReferenceRow; 5] = [
    ReferenceRow { id: "B1", dimension: 20, aut_order: 80640, min_distance: 11, weight12_count: 2100 },
    ReferenceRow { id: "B2", dimension: 22, aut_order: 288, min_distance: 11, weight12_count: 516 },
    ReferenceRow { id: "B3", dimension: 26, aut_order: 144, min_distance: 11, weight12_count: 84 },
    ReferenceRow { id: "B4", dimension: 24, aut_order: 64, min_distance: 11, weight12_count: 148 },
    ReferenceRow { id: "B5", dimension: 26, aut_order: 24, min_distance: 11, weight12_count: 20 },
];

pub fn reference_row(id: &str) -> Option<&'static ReferenceRow> {
    REFERENCE_TABLE.iter().find(|r| r.id == id)
}

/// The reference row with this (dimension, weight-12 count) fingerprint.
pub fn identify_by_fingerprint(dimension: usize, weight12_count: usize) -> Option<&'static ReferenceRow> {
    REFERENCE_TABLE
        .iter()
        .find(|r| r.dimension == dimension && r.weight12_count == weight12_count)
}

/// Supports avoiding coordinate `block`.
pub fn filter_s_b(supports: &[SupportSet], block: usize) -> Result<Vec<SupportSet>> {
    if let Some(s) = supports.iter().find(|s| block >= s.length()) {
        return Err(Error::IndexOutOfRange {
            index: block,
            limit: s.length(),
        });
    }
    Ok(supports.iter().filter(|s| !s.contains(block)).cloned().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EliminationReason {
    #[serde(rename = "count-below-165")]
    CountBelow165,
    #[serde(rename = "clique-below-165")]
    CliqueBelow165,
}

/// Facts every 56-point biplane satisfies over GF(3), checked on the data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralChecks {
    /// Sum of all point rows is the constant vector 2.
    pub row_sum_all_twos: bool,
    pub all_ones_in_code: bool,
    /// Blocks whose residual design satisfies `rank A = rank A'' + 1`.
    pub embeddable_blocks: usize,
    pub blocks: usize,
}

impl StructuralChecks {
    pub fn all_hold(&self) -> bool {
        self.row_sum_all_twos && self.all_ones_in_code && self.embeddable_blocks == self.blocks
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiplaneCertificate {
    pub biplane_id: String,
    pub design_check: DesignSignature,
    pub code_dimension: usize,
    pub structural_checks: StructuralChecks,
    pub min_distance_verdict: MinDistanceVerdict,
    pub s_count: usize,
    /// `|S_B|` for every block coordinate.
    pub per_block_counts: Option<Vec<usize>>,
    /// Present when `s_count` reaches the required number of words.
    pub clique: Option<CliqueResult>,
    /// The supports behind `clique.witness`, for standalone re-checking.
    pub clique_witness_supports: Vec<SupportSet>,
    /// Reference row matching (dimension, weight-12 count), if any.
    pub fingerprint: Option<String>,
    pub eliminated: bool,
    pub elimination_reason: Option<EliminationReason>,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub enumeration: EnumerationConfig,
    pub min_distance: MinDistanceConfig,
    pub per_block_counts: bool,
    /// Compare dimension, minimum distance and word count with the reference table.
    pub check_reference: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            enumeration: EnumerationConfig::default(),
            min_distance: MinDistanceConfig::default(),
            per_block_counts: true,
            check_reference: true,
        }
    }
}

fn integrity(id: &str, msg: impl std::fmt::Display) -> Error {
    Error::DataIntegrity(format!("{id}: {msg}"))
}

/// Runs the whole elimination pipeline on one biplane.
pub fn certify_biplane(id: &str, d: &IncidenceStructure, options: &CertifyOptions) -> Result<BiplaneCertificate> {
    let sig = d
        .verify_t_design(2)
        .map_err(|e| integrity(id, format!("not a 2-design: {e}")))?;
    if (sig.t, sig.v, sig.k, sig.lambda, sig.b) != (2, 56, 11, 2, 56) {
        return Err(integrity(id, format!("expected a symmetric 2-(56,11,2) design, found {sig} with {} blocks", sig.b)));
    }
    let a = d.incidence_matrix(FIELD)?;
    let code = LinearCodeView::new(a.clone());
    let structural_checks = structural_checks(d, &code)?;
    if !structural_checks.all_hold() {
        return Err(integrity(id, format!("biplane identities fail over GF(3): {structural_checks:?}")));
    }
    let min_distance_verdict = code.verify_min_distance(BIPLANE_MIN_DISTANCE, &options.min_distance)?;
    let supports = code.enumerate_01_dual_codewords(WORD_WEIGHT, &options.enumeration)?;
    let s_count = supports.len();
    let per_block_counts = if options.per_block_counts {
        Some(
            (0..d.b())
                .map(|b| filter_s_b(&supports, b).map(|s| s.len()))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let (clique, clique_witness_supports) = if s_count >= REQUIRED_WORDS {
        let g = clique::build_compatibility_graph(&supports, &ALLOWED_INTERSECTIONS.into_iter().collect())?;
        let (_, result) = clique::clique_below(g.graph(), REQUIRED_WORDS)?;
        let witness = result.witness.iter().map(|&v| supports[v].clone()).collect();
        (Some(result), witness)
    } else {
        (None, Vec::new())
    };
    let fingerprint = identify_by_fingerprint(code.dimension(), s_count).map(|r| r.id.to_string());
    let (eliminated, elimination_reason) = derive_elimination(s_count, clique.as_ref());
    let cert = BiplaneCertificate {
        biplane_id: id.to_string(),
        design_check: sig,
        code_dimension: code.dimension(),
        structural_checks,
        min_distance_verdict,
        s_count,
        per_block_counts,
        clique,
        clique_witness_supports,
        fingerprint,
        eliminated,
        elimination_reason,
    };
    if options.check_reference {
        check_reference(&cert)?;
    }
    Ok(cert)
}

fn structural_checks(d: &IncidenceStructure, code: &LinearCodeView) -> Result<StructuralChecks> {
    let row_sum = d.row_sum(FIELD)?;
    let ones = crate::gf::GfVector::new(FIELD, vec![1; d.b()])?;
    let embeddable = par::map_indices(d.b(), |b| d.linear_embeddability_check(b, FIELD));
    let mut embeddable_blocks = 0;
    for e in embeddable {
        embeddable_blocks += e?.embeddable as usize;
    }
    Ok(StructuralChecks {
        row_sum_all_twos: row_sum.entries().iter().all(|&e| e == 2),
        all_ones_in_code: code.basis().row_space_contains(&ones)?,
        embeddable_blocks,
        blocks: d.b(),
    })
}

/// Elimination as a function of the raw values alone.
pub fn derive_elimination(s_count: usize, clique: Option<&CliqueResult>) -> (bool, Option<EliminationReason>) {
    if s_count < REQUIRED_WORDS {
        return (true, Some(EliminationReason::CountBelow165));
    }
    match clique {
        Some(c) if c.proof_mode == ProofMode::ExactMaximum && c.size < REQUIRED_WORDS => {
            (true, Some(EliminationReason::CliqueBelow165))
        }
        _ => (false, None),
    }
}

/// Compares a certificate with its reference row; mismatches are data errors.
pub fn check_reference(cert: &BiplaneCertificate) -> Result<()> {
    let Some(row) = reference_row(&cert.biplane_id) else {
        return Ok(());
    };
    let mut problems = Vec::new();
    if cert.code_dimension != row.dimension {
        problems.push(format!("dimension {} (reference {})", cert.code_dimension, row.dimension));
    }
    if !matches!(cert.min_distance_verdict, MinDistanceVerdict::Confirmed { distance, .. } if distance == row.min_distance) {
        problems.push(format!("minimum distance not confirmed at {}", row.min_distance));
    }
    if cert.s_count != row.weight12_count {
        problems.push(format!("{} weight-12 words (reference {})", cert.s_count, row.weight12_count));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(integrity(&cert.biplane_id, problems.join("; ")))
    }
}

/// Re-checks a certificate without re-running any search.
pub fn check_certificate(cert: &BiplaneCertificate) -> Result<()> {
    let fail = |msg: String| Err(Error::Certificate(format!("{}: {msg}", cert.biplane_id)));
    let sig = cert.design_check;
    if (sig.t, sig.v, sig.k, sig.lambda) != (2, 56, 11, 2) {
        return fail(format!("design check records {sig}, not 2-(56,11,2)"));
    }
    if !cert.structural_checks.all_hold() {
        return fail("biplane identities not established".into());
    }
    let (eliminated, reason) = derive_elimination(cert.s_count, cert.clique.as_ref());
    if (eliminated, reason) != (cert.eliminated, cert.elimination_reason) {
        return fail(format!(
            "recorded elimination {:?}/{:?} disagrees with raw values ({:?}/{:?})",
            cert.eliminated, cert.elimination_reason, eliminated, reason
        ));
    }
    if let Some(c) = &cert.clique {
        if cert.s_count < REQUIRED_WORDS {
            return fail("clique recorded although the word count is already below the bound".into());
        }
        if c.witness.len() != c.size || cert.clique_witness_supports.len() != c.size {
            return fail(format!("clique of size {} has a witness of {} vertices", c.size, c.witness.len()));
        }
        if c.witness.iter().any(|&v| v >= cert.s_count) {
            return fail("clique witness refers to a vertex outside S".into());
        }
        let s = &cert.clique_witness_supports;
        for (i, a) in s.iter().enumerate() {
            if a.weight() != WORD_WEIGHT {
                return fail(format!("witness support {a:?} has weight {}", a.weight()));
            }
            for b in &s[i + 1..] {
                let m = a.intersection_size(b);
                if !ALLOWED_INTERSECTIONS.contains(&m) {
                    return fail(format!("witness supports {a:?} and {b:?} meet in {m} points"));
                }
            }
        }
    } else if !cert.clique_witness_supports.is_empty() {
        return fail("witness supports without a clique result".into());
    }
    if let Some(counts) = &cert.per_block_counts {
        if counts.len() != sig.b as usize {
            return fail(format!("{} per-block counts for {} blocks", counts.len(), sig.b));
        }
        if counts.iter().any(|&c| c > cert.s_count) {
            return fail("a per-block count exceeds |S|".into());
        }
        let incidences: usize = counts.iter().map(|&c| cert.s_count - c).sum();
        if incidences != WORD_WEIGHT * cert.s_count {
            return fail(format!("per-block counts give {incidences} incidences, expected {}", WORD_WEIGHT * cert.s_count));
        }
    }
    Ok(())
}

/// A nonexistence claim with everything it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub statement: String,
    pub parameters: DesignSignature,
    pub intersection_numbers: [u64; 2],
    /// Every external premise used, including those inherited through `depends_on`.
    pub premises: Vec<String>,
    pub depends_on: Vec<String>,
    pub steps: Vec<String>,
    pub annotations: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainOutcome {
    pub verdicts: Vec<Verdict>,
    /// Why a verdict could not be issued.
    pub gaps: Vec<String>,
}

fn sig(t: u64, v: u64, k: u64, lambda: u64) -> Result<DesignSignature> {
    DesignSignature::new(t, v, k, lambda).map_err(|e| Error::Certificate(format!("arithmetic mismatch: {e}")))
}

fn expect_sig(found: DesignSignature, t: u64, v: u64, k: u64, lambda: u64) -> Result<()> {
    if (found.t, found.v, found.k, found.lambda) == (t, v, k, lambda) {
        Ok(())
    } else {
        Err(Error::Certificate(format!(
            "arithmetic mismatch: got {found}, expected {t}-({v},{k},{lambda})"
        )))
    }
}

/// Combines the five biplane certificates into the verdicts for 2-(56,12,9)
/// and 2-(57,12,11). Inconsistent certificates are an error; missing or
/// non-eliminating ones leave gaps instead of verdicts.
pub fn certify_main_theorem(certs: &[BiplaneCertificate]) -> Result<MainOutcome> {
    let mut seen = BTreeSet::new();
    for c in certs {
        if !seen.insert(c.biplane_id.as_str()) {
            return Err(Error::Certificate(format!("duplicate certificate for {}", c.biplane_id)));
        }
        check_certificate(c)?;
    }
    let mut gaps = Vec::new();
    for row in &REFERENCE_TABLE {
        match certs.iter().find(|c| c.biplane_id == row.id) {
            None => gaps.push(format!("no certificate for biplane {}", row.id)),
            Some(c) if !c.eliminated => gaps.push(format!("biplane {} is not eliminated", row.id)),
            Some(_) => {}
        }
    }
    if let Some(extra) = certs.iter().find(|c| reference_row(&c.biplane_id).is_none()) {
        gaps.push(format!("certificate {} is not one of the five biplanes", extra.biplane_id));
    }
    if !gaps.is_empty() {
        return Ok(MainOutcome { verdicts: Vec::new(), gaps });
    }

    // 2-(56,12,9): a point's derived design dualises to a 2-(45,9,2) design,
    // which is a biplane residual; the blocks avoiding the point are words of S.
    let qs56 = sig(2, 56, 12, 9)?;
    let derived = qs56.point_derived_signature()?;
    let residual = qs56.point_residual_signature()?;
    expect_sig(derived, 1, 55, 11, 9)?;
    expect_sig(residual, 1, 55, 12, 36)?;
    if (derived.b, residual.b) != (45, REQUIRED_WORDS as u64) {
        return Err(Error::Certificate(format!(
            "arithmetic mismatch: {} blocks through and {} avoiding a point",
            derived.b, residual.b
        )));
    }
    let dual_of_derived = sig(2, derived.b, derived.r, 2)?;
    let residual_of_biplane = sig(2, 56, 11, 2)?.block_residual_signature()?;
    if dual_of_derived != residual_of_biplane {
        return Err(Error::Certificate(format!(
            "arithmetic mismatch: {dual_of_derived} is not the block residual {residual_of_biplane}"
        )));
    }
    let mut steps = vec![
        format!("{qs56} has b = {}, r = {}", qs56.b, qs56.r),
        format!(
            "at a point z the derived design is {derived} with {} blocks; blocks through z meet in 3 points, so its dual has every two points on 2 blocks: {dual_of_derived}",
            derived.b
        ),
        format!("every {dual_of_derived} design is the residual {residual_of_biplane} of a biplane 2-(56,11,2) at a block B"),
        format!(
            "the residual at z is {residual} with {} blocks of size 12, pairwise meeting in 0 or 3 points; indexing points by the blocks of the biplane other than B, they are weight-12 {{0,1}} words of the dual ternary code of the biplane avoiding coordinate B",
            residual.b
        ),
        format!("so the compatibility graph (intersections 0 or 3) on the weight-12 words needs a clique of size {REQUIRED_WORDS}"),
    ];
    for c in certs {
        steps.push(match c.elimination_reason {
            Some(EliminationReason::CountBelow165) => {
                format!("{}: {} words < {REQUIRED_WORDS}", c.biplane_id, c.s_count)
            }
            _ => format!(
                "{}: {} words, maximum clique {} < {REQUIRED_WORDS}",
                c.biplane_id,
                c.s_count,
                c.clique.as_ref().map_or(0, |k| k.size)
            ),
        });
    }
    let base_premises = vec![
        PREMISE_RESIDUAL_EMBEDDING.to_string(),
        PREMISE_BIPLANE_CLASSIFICATION.to_string(),
    ];
    let v56 = Verdict {
        id: VERDICT_QS_56.into(),
        statement: "nonexistent: QS 2-(56,12,9), x=0, y=3".into(),
        parameters: qs56,
        intersection_numbers: [0, 3],
        premises: base_premises.clone(),
        depends_on: Vec::new(),
        steps,
        annotations: Vec::new(),
    };

    // 2-(57,12,11): the derived design at a point is a symmetric 2-(56,11,2)
    // design, so the design is a 3-design and its point residual is the above.
    let qs57 = sig(2, 57, 12, 11)?;
    let at_point = qs57.point_derived_signature()?;
    expect_sig(at_point, 1, 56, 11, 11)?;
    let symmetric = sig(2, at_point.v, at_point.k, 2)?;
    if !symmetric.is_symmetric() || at_point.b != symmetric.b || symmetric.r != at_point.lambda {
        return Err(Error::Certificate(format!(
            "arithmetic mismatch: derived {at_point} ({} blocks) is not the symmetric {symmetric}",
            at_point.b
        )));
    }
    let three = sig(3, 57, 12, 2)?;
    if three.at_strength(2)? != qs57 {
        return Err(Error::Certificate(format!("arithmetic mismatch: {three} does not restrict to {qs57}")));
    }
    let residual57 = three.point_residual_signature()?;
    if residual57 != qs56 {
        return Err(Error::Certificate(format!(
            "arithmetic mismatch: point residual of {three} is {residual57}, not {qs56}"
        )));
    }
    let v57 = Verdict {
        id: VERDICT_QS_57.into(),
        statement: "nonexistent: QS 2-(57,12,11), x=0, y=3".into(),
        parameters: qs57,
        intersection_numbers: [0, 3],
        premises: base_premises,
        depends_on: vec![VERDICT_QS_56.into()],
        steps: vec![
            format!("{qs57} has b = {}, r = {}", qs57.b, qs57.r),
            format!(
                "at a point p the derived design is {at_point}: {} blocks of size 11 on 56 points, pairwise meeting in 2 points, with every point on {} blocks",
                at_point.b, at_point.lambda
            ),
            format!("its dual is therefore {symmetric}, a symmetric design, so the derived design itself is {symmetric}"),
            format!("hence every triple through p lies on exactly 2 blocks and the design is {three}"),
            format!("the residual at p is {residual57} with intersection numbers 0 and 3, which does not exist"),
        ],
        annotations: vec![
            "alternative route: such a design is a 3-(57,12,2) design (A. Neumaier, Regular sets and quasi-symmetric 2-designs, 1982, Proposition 12), and 3-(57,12,2) designs do not exist (P. Kaski and P. R. J. Östergård, 2008, Corollary 2)".into(),
        ],
    };
    Ok(MainOutcome {
        verdicts: vec![v56, v57],
        gaps: Vec::new(),
    })
}

/// A symmetric design whose every three blocks meet in `x` or `y` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quasi3Target {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub x: u64,
    pub y: u64,
}

pub const QUASI3_TARGETS: [Quasi3Target; 2] = [
    Quasi3Target { v: 267, k: 57, lambda: 12, x: 0, y: 3 },
    Quasi3Target { v: 149, k: 37, lambda: 9, x: 1, y: 3 },
];

/// Nonexistence of a quasi-3 design from the nonexistence of its block-derived
/// quasi-symmetric design.
pub fn derive_quasi3_implication(target: &Quasi3Target, known: &[Verdict], premises: &[Premise]) -> Result<Verdict> {
    let design = sig(2, target.v, target.k, target.lambda)?;
    if !design.is_symmetric() {
        return Err(Error::Certificate(format!(
            "arithmetic mismatch: {design} has {} blocks, not symmetric",
            design.b
        )));
    }
    let derived = design
        .block_derived_signature()
        .map_err(|e| Error::Certificate(format!("arithmetic mismatch: {e}")))?;
    let mut steps = vec![
        format!("{design} is symmetric: b = v = {}", design.b),
        format!("the derived design at a block is 2-(k, λ, λ−1) = {derived}"),
        format!(
            "three blocks meet in {} or {} points, so two blocks of the derived design meet in {} or {} points",
            target.x, target.y, target.x, target.y
        ),
    ];
    let intersections = [target.x, target.y];
    let matches = |v: &Verdict| v.parameters == derived && v.intersection_numbers == intersections;
    let (depends_on, used_premises) = if let Some(v) = known.iter().find(|v| matches(v)) {
        steps.push(format!("{derived} with x={}, y={} does not exist ({})", target.x, target.y, v.id));
        (vec![v.id.clone()], v.premises.clone())
    } else if (derived.t, derived.v, derived.k, derived.lambda) == (2, 37, 9, 8) && intersections == [1, 3] {
        if !premises.iter().any(|p| p.id == PREMISE_QS_37_9_8) {
            return Err(Error::Certificate(format!("premise {PREMISE_QS_37_9_8} is not registered")));
        }
        steps.push(format!("{derived} with x=1, y=3 does not exist (premise {PREMISE_QS_37_9_8})"));
        (Vec::new(), vec![PREMISE_QS_37_9_8.to_string()])
    } else {
        return Err(Error::Certificate(format!(
            "no nonexistence result for the derived {derived} with x={}, y={}",
            target.x, target.y
        )));
    };
    Ok(Verdict {
        id: format!(
            "quasi3-2-{}-{}-{}-x{}-y{}",
            target.v, target.k, target.lambda, target.x, target.y
        ),
        statement: format!(
            "nonexistent: quasi-3 2-({},{},{}), x={}, y={}",
            target.v, target.k, target.lambda, target.x, target.y
        ),
        parameters: design,
        intersection_numbers: intersections,
        premises: used_premises,
        depends_on,
        steps,
        annotations: Vec::new(),
    })
}

pub fn derive_quasi3_implications(main: &MainOutcome, premises: &[Premise]) -> Result<Vec<Verdict>> {
    QUASI3_TARGETS
        .iter()
        .map(|t| derive_quasi3_implication(t, &main.verdicts, premises))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub parallel: bool,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Run-dependent metadata, excluded from reproducibility comparisons.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub threads: usize,
    pub seconds: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub tool: ToolInfo,
    pub premises: Vec<Premise>,
    pub reference_table: Vec<ReferenceRow>,
    pub biplanes: Vec<BiplaneCertificate>,
    pub verdicts: Vec<Verdict>,
    pub gaps: Vec<String>,
    pub timing: Timing,
}

impl<'de> Deserialize<'de> for ReferenceRow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            id: String,
        }
        let raw = Raw::deserialize(d)?;
        reference_row(&raw.id)
            .copied()
            .ok_or_else(|| serde::de::Error::custom(format!("unknown reference row {:?}", raw.id)))
    }
}

impl CertificateReport {
    /// The report with run-dependent metadata cleared.
    pub fn without_timing(&self) -> CertificateReport {
        CertificateReport {
            timing: Timing::default(),
            ..self.clone()
        }
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }
}

pub fn emit_report(report: &CertificateReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_report(text: &str) -> Result<CertificateReport> {
    Ok(serde_json::from_str(text)?)
}

/// Certifies every biplane, then derives all verdicts the certificates support.
pub fn certify_all(biplanes: &[(String, IncidenceStructure)], options: &CertifyOptions) -> Result<CertificateReport> {
    let mut timing = Timing {
        threads: par::threads(),
        seconds: BTreeMap::new(),
    };
    let start = std::time::Instant::now();
    let mut certs = Vec::with_capacity(biplanes.len());
    for (id, d) in biplanes {
        let t = std::time::Instant::now();
        certs.push(certify_biplane(id, d, options)?);
        timing.seconds.insert(id.clone(), t.elapsed().as_secs_f64());
    }
    let premises = premise_registry();
    let main = certify_main_theorem(&certs)?;
    let mut verdicts = main.verdicts.clone();
    if main.gaps.is_empty() {
        verdicts.extend(derive_quasi3_implications(&main, &premises)?);
    }
    timing.seconds.insert("total".into(), start.elapsed().as_secs_f64());
    Ok(CertificateReport {
        tool: ToolInfo::default(),
        premises,
        reference_table: REFERENCE_TABLE.to_vec(),
        biplanes: certs,
        verdicts,
        gaps: main.gaps,
        timing,
    })
}
