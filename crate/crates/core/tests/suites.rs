//! Smoke runs of the verification suites on small graphs, plus the
//! Boolean-interval R-polynomial property. The full-size runs (A3, B3,
//! I2(m), D4) live in the CLI crate's acceptance suite.

use std::sync::Arc;

use tlkl::coxeter::{CoxeterGraph, Element, Group};
use tlkl::hecke::Hecke;
use tlkl::laurent::LaurentPoly;
use tlkl::tl::Tl;
use tlkl::verify::{run_suite, Suite, VerifyConfig};

fn tl_ctx(spec: &str) -> Arc<Tl> {
    Tl::new(Hecke::new(Group::new(CoxeterGraph::parse(spec).unwrap())))
}

fn assert_all_pass(spec: &str, max_len: u32) {
    let tl = tl_ctx(spec);
    let cfg = VerifyConfig {
        max_len,
        ..VerifyConfig::default()
    };
    let report = run_suite(&tl, Suite::All, &cfg).unwrap();
    assert_eq!(
        report.unexpected_failures(),
        0,
        "{spec}:\n{}",
        report.render_text()
    );
    assert_eq!(report.exit_code(), 0, "{spec}");
}

#[test]
fn all_identities_hold_on_a2() {
    assert_all_pass("A2", 3);
}

#[test]
fn all_identities_hold_on_a3() {
    assert_all_pass("A3", 6);
}

#[test]
fn all_identities_hold_on_b3() {
    assert_all_pass("B3", 9);
}

#[test]
fn all_identities_hold_on_h3() {
    assert_all_pass("H3", 15);
}

#[test]
fn all_identities_hold_on_b2() {
    assert_all_pass("I2(4)", 4);
}

#[test]
fn all_identities_hold_on_i2_5() {
    assert_all_pass("I2(5)", 5);
}

#[test]
fn all_identities_hold_on_truncated_affine_a2() {
    // the gate is open for affine A~_2; recursions only consult Bruhat
    // ideals, so a truncated run is sound
    assert_all_pass("affA2", 4);
}

#[test]
fn suites_run_threaded_and_shuffled() {
    let tl = tl_ctx("A2");
    let cfg = VerifyConfig {
        max_len: 3,
        threads: 3,
        seed: 12345,
        ..VerifyConfig::default()
    };
    let report = run_suite(&tl, Suite::All, &cfg).unwrap();
    assert_eq!(report.unexpected_failures(), 0, "{}", report.render_text());
}

#[test]
fn projection_fails_as_expected_on_d4() {
    let tl = tl_ctx("D4");
    let cfg = VerifyConfig {
        max_len: 12,
        ..VerifyConfig::default()
    };
    let report = run_suite(&tl, Suite::Projection, &cfg).unwrap();
    assert_eq!(report.unexpected_failures(), 0, "{}", report.render_text());
    assert!(
        report.confirmed_expected_failures() > 0,
        "branching graph must violate the dichotomy:\n{}",
        report.render_text()
    );
    assert_eq!(report.exit_code(), 3);
}

#[test]
fn recursions_are_independent_of_descent_choice() {
    // recompute D, a, L with the largest-index descent instead of the
    // smallest; the tables must be identical
    use tlkl::tl::{DescentPick, LRoute};
    for spec in ["A3", "B3", "I2(5)"] {
        let group = Group::new(CoxeterGraph::parse(spec).unwrap());
        let smallest = Tl::new(Hecke::new(group.clone()));
        let largest = Tl::with_descent_pick(Hecke::new(group.clone()), DescentPick::Largest);
        let all = group.enumerate_up_to(9).unwrap();
        for w in &all {
            for x in all.iter().filter(|x| x.is_fully_commutative()) {
                assert_eq!(
                    smallest.d_rec(x, w).unwrap(),
                    largest.d_rec(x, w).unwrap(),
                    "{spec}: D at ({x}, {w})"
                );
                if w.is_fully_commutative() {
                    assert_eq!(
                        smallest.a_rec(x, w).unwrap(),
                        largest.a_rec(x, w).unwrap(),
                        "{spec}: a at ({x}, {w})"
                    );
                    assert_eq!(
                        smallest.l_poly(x, w, LRoute::IcSolve).unwrap(),
                        largest.l_poly(x, w, LRoute::IcSolve).unwrap(),
                        "{spec}: L at ({x}, {w})"
                    );
                }
            }
        }
    }
}

#[test]
fn results_are_invariant_under_graph_relabeling() {
    // B_3 with the 4-bond written at the other end of the path: counts
    // and the multisets of table polynomials must match exactly
    use tlkl::table::{build_table, Family, RouteChoice};
    let b3 = Tl::new(Hecke::new(Group::new(CoxeterGraph::parse("B3").unwrap())));
    let mirrored = Tl::new(Hecke::new(Group::new(
        CoxeterGraph::parse("custom:[[1,3,2],[3,1,4],[2,4,1]]").unwrap(),
    )));
    assert!(mirrored.cw0_holds());
    let count = |tl: &Tl| {
        let all = tl.group().enumerate_up_to(9).unwrap();
        let fc = all.iter().filter(|w| w.is_fully_commutative()).count();
        (all.len(), fc)
    };
    assert_eq!(count(&b3), count(&mirrored));
    for family in [Family::R, Family::D, Family::A, Family::L] {
        let polys = |tl: &Tl| {
            let mut v: Vec<String> = build_table(tl, family, 9, RouteChoice::Main)
                .unwrap()
                .rows
                .into_iter()
                .map(|r| r.poly)
                .collect();
            v.sort();
            v
        };
        assert_eq!(polys(&b3), polys(&mirrored), "family {family}");
    }
}

// ---- Boolean-interval R property ----

/// Decide whether the Bruhat interval `[x, w]` is isomorphic to a Boolean
/// lattice by mapping each element to the set of atoms below it.
fn is_boolean_interval(x: &Element, w: &Element, interval: &[Element]) -> bool {
    let k = (w.length() - x.length()) as usize;
    if interval.len() != 1usize << k {
        return false;
    }
    let atoms: Vec<&Element> = interval
        .iter()
        .filter(|y| y.length() == x.length() + 1)
        .collect();
    if atoms.len() != k {
        return false;
    }
    let bits: Vec<u32> = interval
        .iter()
        .map(|y| {
            atoms
                .iter()
                .enumerate()
                .filter(|(_, a)| a.bruhat_leq(y))
                .map(|(i, _)| 1u32 << i)
                .sum()
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    for b in &bits {
        if !seen.insert(*b) {
            return false;
        }
    }
    // the atom-set map must be an order isomorphism in both directions
    for (i, y) in interval.iter().enumerate() {
        for (j, z) in interval.iter().enumerate() {
            if y.bruhat_leq(z) != (bits[i] & !bits[j] == 0) {
                return false;
            }
        }
    }
    true
}

#[test]
fn boolean_intervals_have_binomial_r_polynomials() {
    let group = Group::new(CoxeterGraph::parse("A3").unwrap());
    let hecke = Hecke::new(group.clone());
    let all = group.enumerate_up_to(6).unwrap();
    let qm1 = LaurentPoly::q_minus_one();
    let mut found = 0;
    for w in &all {
        for x in &all {
            if !x.bruhat_leq(w) {
                continue;
            }
            let interval: Vec<Element> = all
                .iter()
                .filter(|y| x.bruhat_leq(y) && y.bruhat_leq(w))
                .cloned()
                .collect();
            if !is_boolean_interval(x, w, &interval) {
                continue;
            }
            found += 1;
            let mut expect = LaurentPoly::one();
            for _ in 0..(w.length() - x.length()) {
                expect = &expect * &qm1;
            }
            assert_eq!(
                hecke.r_poly(x, w).unwrap(),
                expect,
                "Boolean interval [{x}, {w}]"
            );
        }
    }
    // A_3 has plenty of Boolean intervals beyond the trivial rank-0 ones
    assert!(found > 100, "found only {found} Boolean intervals");
}
