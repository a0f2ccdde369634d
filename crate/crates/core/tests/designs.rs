//! Design identities, parameter chains, data files and certificate checks.

use std::sync::OnceLock;

use qsdesign::certify::{
    self, check_certificate, certify_biplane, certify_main_theorem, derive_quasi3_implication, filter_s_b,
    BiplaneCertificate, CertifyOptions, Quasi3Target,
};
use qsdesign::clique::{CliqueResult, ProofMode};
use qsdesign::code::{EnumerationConfig, LinearCodeView, SupportSet};
use qsdesign::data::{self, DifferenceSetSpec, Group};
use qsdesign::design::{DesignSignature, EmptyBlocks, IntersectionNumbers};
use qsdesign::Error;

fn b5_certificate() -> &'static BiplaneCertificate {
    static CERT: OnceLock<BiplaneCertificate> = OnceLock::new();
    CERT.get_or_init(|| certify_biplane("B5", &data::bundled_biplane("B5").unwrap(), &CertifyOptions::default()).unwrap())
}

#[test]
fn difference_set_search_finds_the_small_symmetric_designs() {
    for (group, k, lambda) in [
        (Group::Cyclic(7), 3, 1),
        (Group::Cyclic(11), 5, 2),
        (Group::ElementaryAbelian2(4), 6, 2),
        (Group::Cyclic(13), 4, 1),
    ] {
        let spec = data::find_difference_set(group, k, lambda).unwrap().expect("difference set exists");
        let d = data::develop_difference_set(&spec).unwrap();
        let sig = d.verify_t_design(2).unwrap();
        assert_eq!((sig.v as usize, sig.k as usize, sig.lambda as usize), (group.order(), k, lambda));
        assert!(sig.is_symmetric());
        assert_eq!(d.intersection_profile().intersection_numbers(), Some(IntersectionNumbers::Single(lambda)));
    }
    assert_eq!(data::find_difference_set(Group::Cyclic(7), 3, 2).unwrap(), None);
    assert!(data::find_difference_set(Group::Cyclic(17), 4, 1).is_err());
}

#[test]
fn a_non_difference_set_fails_verification() {
    let d = data::develop_difference_set(&DifferenceSetSpec {
        group: Group::Cyclic(7),
        elements: vec![0, 1, 2],
    })
    .unwrap();
    assert!(d.verify_t_design(1).is_ok());
    assert!(d.verify_t_design(2).is_err());
}

#[test]
fn fixture_designs_satisfy_the_counting_identities() {
    for d in [data::fano_plane(), data::biplane_11(), data::biplane_16()] {
        let sig = d.verify_t_design(2).unwrap();
        assert_eq!(sig.b * sig.k, sig.v * sig.r);
        assert_eq!(sig.lambda * (sig.v - 1), sig.r * (sig.k - 1));
        assert!(sig.satisfies_fisher() && sig.is_symmetric());
        assert_eq!(d.intersection_profile().sizes(), vec![sig.lambda as usize]);
        for x in 0..d.v() {
            assert_eq!(d.point_derived(x).unwrap().b() as u64, sig.r);
            assert_eq!(d.point_residual(x).unwrap().b() as u64, sig.b - sig.r);
        }
        assert_eq!(d.dual().verify_t_design(2).unwrap(), sig);
    }
}

#[test]
fn signature_arithmetic_rejects_inadmissible_parameters() {
    assert!(DesignSignature::new(2, 56, 11, 2).unwrap().is_symmetric());
    assert!(matches!(DesignSignature::new(2, 10, 4, 1), Err(Error::Inadmissible(_))));
    assert!(DesignSignature::new(2, 3, 5, 1).is_err());
}

#[test]
fn parameter_chains_behind_the_verdicts() {
    let three = DesignSignature::new(3, 57, 12, 2).unwrap();
    assert_eq!(three.at_strength(2).unwrap(), DesignSignature::new(2, 57, 12, 11).unwrap());
    assert_eq!(three.point_residual_signature().unwrap(), DesignSignature::new(2, 56, 12, 9).unwrap());

    let qs56 = DesignSignature::new(2, 56, 12, 9).unwrap();
    assert_eq!((qs56.b, qs56.r), (210, 45));
    assert_eq!(qs56.point_residual_signature().unwrap().b, 165);

    let biplane = DesignSignature::new(2, 56, 11, 2).unwrap();
    assert_eq!(biplane.block_residual_signature().unwrap(), DesignSignature::new(2, 45, 9, 2).unwrap());
    assert_eq!(biplane.block_derived_signature().unwrap(), DesignSignature::new(2, 11, 2, 1).unwrap());

    let q267 = DesignSignature::new(2, 267, 57, 12).unwrap();
    assert!(q267.is_symmetric());
    assert_eq!(q267.block_derived_signature().unwrap(), DesignSignature::new(2, 57, 12, 11).unwrap());
    let q149 = DesignSignature::new(2, 149, 37, 9).unwrap();
    assert!(q149.is_symmetric());
    assert_eq!(q149.block_derived_signature().unwrap(), DesignSignature::new(2, 37, 9, 8).unwrap());
}

#[test]
fn bundled_biplanes_round_trip_and_have_the_residual_structure() {
    for (id, d) in data::bundled_biplanes().unwrap() {
        let text = data::bundled_biplane_text(&id).unwrap();
        let file = data::parse_incidence_file(text).unwrap();
        assert!(!file.comments.is_empty());
        let again = data::parse_incidence(&data::serialize_incidence_with_comments(&d, &file.comments)).unwrap();
        assert_eq!(again.incidence_rows(), d.incidence_rows());

        assert!(d.verify_t_design(2).unwrap().is_symmetric());
        assert!(d.row_sum(3).unwrap().entries().iter().all(|&e| e == 2), "{id}");
        for b in 0..d.b() {
            let res = d.block_residual(b).unwrap().verify_t_design(2).unwrap();
            assert_eq!((res.v, res.k, res.lambda), (45, 9, 2), "{id} block {b}");
            let der = d.block_derived(b, EmptyBlocks::Retain).unwrap().verify_t_design(2).unwrap();
            assert_eq!((der.v, der.k, der.lambda), (11, 2, 1), "{id} block {b}");
        }
    }
}

#[test]
fn malformed_incidence_text_reports_its_position() {
    let err = data::parse_incidence("2 2\n10\n1x\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    assert!(data::parse_incidence("2 2\n10\n").is_err());
}

#[test]
fn supports_round_trip_through_text() {
    let s = vec![
        SupportSet::new(10, vec![0, 3, 7]).unwrap(),
        SupportSet::new(10, vec![1, 2, 9]).unwrap(),
    ];
    assert_eq!(data::parse_supports(&data::format_supports(&s), Some(10)).unwrap(), s);
    assert!(SupportSet::new(5, vec![3, 1]).is_err());
    assert!(SupportSet::new(5, vec![5]).is_err());
}

#[test]
fn block_filters_double_count_the_words() {
    let d = data::bundled_biplane("B2").unwrap();
    let words = LinearCodeView::new(d.incidence_matrix(3).unwrap())
        .enumerate_01_dual_codewords(12, &EnumerationConfig::default())
        .unwrap();
    assert_eq!(words.len(), 516);
    let mut incidences = 0;
    for b in 0..56 {
        let s_b = filter_s_b(&words, b).unwrap();
        assert!(s_b.iter().all(|s| !s.contains(b)));
        incidences += words.len() - s_b.len();
    }
    assert_eq!(incidences, 516 * 12);
    assert!(filter_s_b(&words, 56).is_err());
}

#[test]
fn a_genuine_certificate_rechecks() {
    let cert = b5_certificate();
    assert_eq!((cert.code_dimension, cert.s_count), (26, 20));
    assert_eq!(cert.fingerprint.as_deref(), Some("B5"));
    assert!(cert.eliminated);
    check_certificate(cert).unwrap();
}

#[test]
fn tampered_certificates_are_rejected() {
    let cert = b5_certificate();

    let mut inflated = cert.clone();
    inflated.s_count = 200;
    inflated.per_block_counts = None;
    inflated.clique = Some(CliqueResult {
        size: 200,
        witness: (0..200).collect(),
        proof_mode: ProofMode::ExactMaximum,
    });
    assert!(matches!(check_certificate(&inflated), Err(Error::Certificate(_))));

    let mut unproven = cert.clone();
    unproven.s_count = 170;
    unproven.per_block_counts = None;
    unproven.clique = Some(CliqueResult {
        size: 165,
        witness: (0..165).collect(),
        proof_mode: ProofMode::EarlyExitAtBound,
    });
    assert!(check_certificate(&unproven).is_err());

    let mut miscounted = cert.clone();
    if let Some(c) = miscounted.per_block_counts.as_mut() {
        c[0] += 1;
    }
    assert!(check_certificate(&miscounted).is_err());

    let mut mislabeled = cert.clone();
    mislabeled.code_dimension = 25;
    assert!(matches!(certify::check_reference(&mislabeled), Err(Error::DataIntegrity(_))));

    assert!(certify_main_theorem(&[cert.clone(), cert.clone()]).is_err());
}

#[test]
fn missing_certificates_leave_gaps_instead_of_verdicts() {
    let outcome = certify_main_theorem(std::slice::from_ref(b5_certificate())).unwrap();
    assert!(outcome.verdicts.is_empty());
    assert_eq!(outcome.gaps.len(), 4);
    assert!(outcome.gaps.iter().all(|g| g.contains("no certificate")));
}

#[test]
fn quasi3_implications_need_consistent_arithmetic() {
    let premises = certify::premise_registry();
    let v149 = derive_quasi3_implication(&certify::QUASI3_TARGETS[1], &[], &premises).unwrap();
    assert_eq!(v149.id, certify::VERDICT_QUASI3_149);
    assert_eq!(v149.premises, vec![certify::PREMISE_QS_37_9_8.to_string()]);

    let wrong = Quasi3Target { v: 149, k: 37, lambda: 10, x: 1, y: 3 };
    let err = derive_quasi3_implication(&wrong, &[], &premises).unwrap_err();
    assert!(err.to_string().contains("arithmetic mismatch"), "{err}");

    // Without the 2-(57,12,11) verdict the 267 case has nothing to rest on.
    assert!(derive_quasi3_implication(&certify::QUASI3_TARGETS[0], &[], &premises).is_err());
}

#[test]
fn corrupted_data_directory_is_a_data_integrity_error() {
    let dir = std::env::temp_dir().join(format!("qsdesign-corrupt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for id in data::BIPLANE_IDS {
        std::fs::write(dir.join(format!("{id}.inc")), data::bundled_biplane_text(id).unwrap()).unwrap();
    }
    // Drop one incidence from the first point row.
    let b1 = data::bundled_biplane_text("B1").unwrap();
    let tampered = b1.replacen("56 56\n1", "56 56\n0", 1);
    assert_ne!(tampered, b1);
    std::fs::write(dir.join("B1.inc"), tampered).unwrap();
    let loaded = data::load_biplane_dir(&dir).unwrap();
    let err = certify::certify_all(&loaded, &CertifyOptions::default()).unwrap_err();
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(matches!(err, Error::DataIntegrity(_)), "{err:?}");
}
