use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use hgarith::catalog::{orthogonal_case, symplectic_case};
use hgarith::cyclo::{poly_from_parameters, scalar_shift, ParameterPair, ParameterTuple};
use hgarith::exact::{format_rational, parse_rational, IntPolynomial, QMatrix, Rational};
use hgarith::group::{presentation_from_pair, solve_invariant_form, GroupPresentation, InvariantForm};
use hgarith::search::integer_relations;
use hgarith::slp::{evaluate_slp, Slp, Word};
use hgarith::standard::apply_basis_change;

fn small_matrix(n: usize, range: i64) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-range..=range, n * n).prop_map(move |v| {
        QMatrix::from_fn(n, |i, j| Rational::from_integer(BigInt::from(v[i * n + j])))
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=30).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

/// Full Galois orbits `{k/m : gcd(k, m) = 1}` for a few random `m`.
fn galois_tuple() -> impl Strategy<Value = ParameterTuple> {
    prop::collection::vec(1usize..=12, 1..=3).prop_map(|ms| {
        let entries = ms
            .iter()
            .flat_map(|&m| (0..m).filter(move |k| k.gcd(&m) == 1).map(move |k| Rational::new(k.into(), m.into())))
            .collect();
        ParameterTuple::new(entries)
    })
}

fn presentations() -> Vec<(GroupPresentation, InvariantForm)> {
    [symplectic_case().pair, orthogonal_case().pair]
        .iter()
        .map(|pair| {
            let pres = presentation_from_pair(pair).unwrap();
            let form = solve_invariant_form(&pres).unwrap();
            (pres, form)
        })
        .collect()
}

fn letters() -> impl Strategy<Value = Vec<(bool, i64)>> {
    prop::collection::vec((any::<bool>(), prop_oneof![Just(1i64), Just(-1i64)]), 0..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_of_inverse(m in small_matrix(4, 6)) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert!((&m * &inv).is_identity());
                prop_assert_eq!(inv.inverse().unwrap(), m);
            }
            Err(_) => prop_assert!(m.det() == Rational::from_integer(0.into())),
        }
    }

    #[test]
    fn rank_plus_nullity(m in small_matrix(5, 2)) {
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), 5);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn companion_char_poly_round_trip(c in prop::collection::vec(-10i64..=10, 0..=8)) {
        let mut coeffs = c.clone();
        coeffs.push(1);
        let f = IntPolynomial::from_i64(&coeffs);
        prop_assert_eq!(f.companion().char_poly().to_int().unwrap(), f);
    }

    #[test]
    fn half_shift_negates_argument(t in galois_tuple()) {
        let f = poly_from_parameters(&t).unwrap();
        let shifted = poly_from_parameters(&t.shift(&Rational::new(1.into(), 2.into()))).unwrap();
        let expected = if f.degree().is_multiple_of(2) { f.compose_neg() } else { f.compose_neg().neg() };
        prop_assert_eq!(shifted, expected);
    }

    #[test]
    fn shifts_compose(a in galois_tuple(), b in galois_tuple(), c in rational(), d in rational()) {
        let pair = ParameterPair::new(a, b);
        let twice = scalar_shift(&scalar_shift(&pair, &c), &d);
        let once = scalar_shift(&pair, &(&c + &d));
        prop_assert!(twice.alpha.same_multiset(&once.alpha) && twice.beta.same_multiset(&once.beta));
    }

    #[test]
    fn random_words_preserve_forms(w in letters()) {
        for (pres, form) in presentations() {
            let mut m = QMatrix::identity(pres.degree());
            for &(use_a, e) in &w {
                let g = if use_a { &pres.a } else { &pres.b };
                m = &m * &g.pow(e).unwrap();
            }
            prop_assert!(form.is_preserved_by(&m));
        }
    }

    #[test]
    fn word_times_inverse_reduces_to_empty(w in letters()) {
        let word = Word::new(w.iter().map(|&(a, e)| ((if a { "x" } else { "y" }).to_string(), e)));
        prop_assert!(word.concat(&word.inverse()).is_empty());
        prop_assert_eq!(word.inverse().inverse(), word.clone());
        if !word.is_empty() {
            prop_assert_eq!(word.to_string().parse::<Word>().unwrap(), word);
        }
    }

    #[test]
    fn word_evaluation_is_a_homomorphism(u in letters(), v in letters()) {
        let (pres, _) = presentations().remove(0);
        let to_word = |w: &[(bool, i64)]| Word::new(w.iter().map(|&(a, e)| ((if a { "A" } else { "B" }).to_string(), e)));
        let mut slp = Slp::new(["A", "B"].map(String::from));
        slp.define("u", to_word(&u)).unwrap();
        slp.define("v", to_word(&v)).unwrap();
        slp.define("uv", "u v".parse().unwrap()).unwrap();
        let mut bindings = IndexMap::new();
        bindings.insert("A".to_string(), pres.a.clone());
        bindings.insert("B".to_string(), pres.b.clone());
        let values = evaluate_slp(&slp, &bindings).unwrap();
        prop_assert_eq!(&values["uv"], &(&values["u"] * &values["v"]));
    }

    #[test]
    fn basis_changes_compose(p1 in small_matrix(4, 3), p2 in small_matrix(4, 3)) {
        let (_, form) = presentations().remove(0);
        prop_assume!(p1.inverse().is_ok() && p2.inverse().is_ok());
        let step = apply_basis_change(&p2, &apply_basis_change(&p1, &form).unwrap()).unwrap();
        let direct = apply_basis_change(&(&p1 * &p2), &form).unwrap();
        prop_assert_eq!(step.matrix, direct.matrix);
    }

    #[test]
    fn rationals_round_trip(q in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn integer_relations_annihilate(rows in prop::collection::vec(prop::collection::vec(rational(), 3), 1..8)) {
        for rel in integer_relations(&rows) {
            prop_assert!(rel.iter().any(|k| *k != BigInt::from(0)));
            for j in 0..3 {
                let s: Rational = rows.iter().zip(&rel).map(|(r, k)| &r[j] * Rational::from_integer(k.clone())).sum();
                prop_assert_eq!(s, Rational::from_integer(0.into()));
            }
        }
    }
}

#[test]
fn relation_count_matches_rank() {
    let rows: Vec<Vec<Rational>> = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4], [5, 0, 0]]
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    // rank 3, five rows
    assert_eq!(integer_relations(&rows).len(), 2);
}
