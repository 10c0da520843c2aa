use hgarith::catalog::{orthogonal_case, symplectic_case};
use hgarith::group::{presentation_from_pair, solve_invariant_form};
use hgarith::search::{search_root_unipotents, SearchConfig};
use hgarith::slp::{verify_certificate, VerdictStatus};
use hgarith::standard::{apply_basis_change, root_group_membership, root_system, Membership, RootLabel};

#[test]
fn orthogonal_search_emits_valid_certificate() {
    let case = orthogonal_case();
    let pres = presentation_from_pair(&case.pair).unwrap();
    let result = search_root_unipotents(&pres, &case.basis_change, &SearchConfig::default()).unwrap();
    assert!(result.is_complete(), "missing {:?}", result.missing);
    let roots: Vec<String> = result.found.iter().map(|w| w.root.to_string()).collect();
    assert_eq!(roots, ["chi1*chi2", "chi1"]);

    let cert = result.certificate(&case.pair, &case.basis_change).unwrap();
    let verdict = verify_certificate(&cert);
    assert_eq!(verdict.status, VerdictStatus::CertificateValid);
    for w in &result.found {
        assert_eq!(verdict.claim(&w.name).unwrap().matrix.as_ref(), Some(&w.matrix));
    }
    let reparsed = hgarith::slp::Certificate::parse(&cert.to_json()).unwrap();
    assert_eq!(reparsed, cert);
}

#[test]
fn search_is_deterministic() {
    let case = orthogonal_case();
    let pres = presentation_from_pair(&case.pair).unwrap();
    let cfg = SearchConfig {
        max_word_length: 10,
        ..SearchConfig::default()
    };
    let first = search_root_unipotents(&pres, &case.basis_change, &cfg).unwrap();
    let second = search_root_unipotents(&pres, &case.basis_change, &cfg).unwrap();
    assert_eq!(first.definitions, second.definitions);
    assert_eq!(first.found, second.found);
    assert_eq!(first.statistics.nodes_expanded, second.statistics.nodes_expanded);
}

#[test]
fn single_target_and_explicit_seed() {
    let case = symplectic_case();
    let pres = presentation_from_pair(&case.pair).unwrap();
    let target: RootLabel = "chi1^2".parse().unwrap();
    let cfg = SearchConfig {
        target_patterns: vec![target.clone()],
        seed_elements: Some(vec!["a^-1 b".parse().unwrap()]),
        ..SearchConfig::default()
    };
    let result = search_root_unipotents(&pres, &case.basis_change, &cfg).unwrap();
    assert!(result.missing.is_empty());
    assert_eq!(result.found.len(), 1);
    let w = &result.found[0];
    assert_eq!(w.root, target);

    let form = apply_basis_change(&case.basis_change, &solve_invariant_form(&pres).unwrap()).unwrap();
    let roots = root_system(&form).unwrap();
    let membership = root_group_membership(&w.matrix, &form, roots.pattern(&target).unwrap()).unwrap();
    assert_eq!(membership, Membership::NonTrivialMember);

    // Only one of the two required roots is claimed.
    let verdict = verify_certificate(&result.certificate(&case.pair, &case.basis_change).unwrap());
    assert_eq!(verdict.status, VerdictStatus::Incomplete(vec!["chi1*chi2".parse().unwrap()]));
}

#[test]
fn tight_bit_cap_prunes_everything_long() {
    let case = symplectic_case();
    let pres = presentation_from_pair(&case.pair).unwrap();
    let cfg = SearchConfig {
        max_word_length: 6,
        max_entry_bits: 2,
        commutator_rounds: 0,
        ..SearchConfig::default()
    };
    let result = search_root_unipotents(&pres, &case.basis_change, &cfg).unwrap();
    assert!(result.statistics.pruned > 0);
    assert_eq!(result.statistics.effective_bit_cap, 2);
    assert!(result.found.is_empty());
    assert!(result.definitions.is_empty());
}
