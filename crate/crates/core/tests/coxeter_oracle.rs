//! Cross-checks of the Cayley-graph word engine against a literal
//! braid-move-closure canonicalizer, which is slow but independently
//! correct by Tits' theorem: a non-reduced word admits a braid-move
//! sequence exposing an adjacent equal pair, and the reduced words of an
//! element form one braid-move closure.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use tlkl::coxeter::{Bond, CoxeterGraph, Element, Group};

/// All words reachable from `word` by single braid moves (commutations
/// included as the m = 2 case).
fn braid_closure(graph: &CoxeterGraph, word: &[u8]) -> HashSet<Vec<u8>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue: VecDeque<Vec<u8>> = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            if x == y {
                continue;
            }
            let m = match graph.bond(x as usize, y as usize) {
                Bond::Finite(m) if m >= 2 => m as usize,
                _ => continue,
            };
            if i + m > w.len() {
                continue;
            }
            let alternates = (0..m).all(|k| w[i + k] == if k % 2 == 0 { x } else { y });
            if !alternates {
                continue;
            }
            let mut next = w.clone();
            for k in 0..m {
                next[i + k] = if k % 2 == 0 { y } else { x };
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// ShortLex normal form by exhaustive braid closure plus nil moves.
fn closure_canonical(graph: &CoxeterGraph, word: &[u8]) -> Vec<u8> {
    let mut current = word.to_vec();
    loop {
        let class = braid_closure(graph, &current);
        let mut deleted = None;
        'outer: for w in &class {
            for i in 0..w.len().saturating_sub(1) {
                if w[i] == w[i + 1] {
                    let mut shorter = w.clone();
                    shorter.drain(i..i + 2);
                    deleted = Some(shorter);
                    break 'outer;
                }
            }
        }
        match deleted {
            Some(shorter) => current = shorter,
            None => return class.into_iter().min().expect("closure is nonempty"),
        }
    }
}

/// FC test by scanning the commutation class for braid factors.
fn closure_is_fc(graph: &CoxeterGraph, reduced: &[u8]) -> bool {
    // commutation class only: braid moves restricted to m = 2
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(reduced.to_vec());
    queue.push_back(reduced.to_vec());
    while let Some(w) = queue.pop_front() {
        // look for an alternating factor of full braid length m >= 3
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            if x == y {
                continue;
            }
            if let Bond::Finite(m) = graph.bond(x as usize, y as usize) {
                let m = m as usize;
                if m >= 3
                    && i + m <= w.len()
                    && (0..m).all(|k| w[i + k] == if k % 2 == 0 { x } else { y })
                {
                    return false;
                }
            }
        }
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            if x != y && graph.bond(x as usize, y as usize) == Bond::Finite(2) {
                let mut next = w.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    true
}

/// Bruhat order by the subword property: brute-force over all subwords of
/// the canonical word of `w`.
fn subword_leq(x: &Element, w: &Element) -> bool {
    let g = w.group();
    let word = w.word();
    let n = word.len();
    for mask in 0..(1u32 << n) {
        if (mask.count_ones() as usize) != x.word().len() {
            continue;
        }
        let sub: Vec<usize> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| word[i] as usize)
            .collect();
        if &g.element_from_word(&sub).unwrap() == x {
            return true;
        }
    }
    false
}

fn group(spec: &str) -> Arc<Group> {
    Group::new(CoxeterGraph::parse(spec).unwrap())
}

fn check_graph(spec: &str, max_len: u32) {
    let g = group(spec);
    let graph = g.graph().clone();
    let elements = g.enumerate_up_to(max_len).unwrap();
    let mut canonical_words: BTreeSet<Vec<u8>> = BTreeSet::new();
    for w in &elements {
        // the engine's canonical word is the closure-minimal one
        assert_eq!(
            closure_canonical(&graph, w.word()),
            w.word().to_vec(),
            "{spec}: canonical word of {w}"
        );
        canonical_words.insert(w.word().to_vec());
        // FC flags agree with the commutation-class scan
        assert_eq!(
            closure_is_fc(&graph, w.word()),
            w.is_fully_commutative(),
            "{spec}: FC flag of {w}"
        );
    }
    // multiplying by each generator agrees with closure canonicalization
    for w in &elements {
        for s in 0..graph.rank() {
            let mut pushed: Vec<u8> = w.word().to_vec();
            pushed.push(s as u8);
            let expect = closure_canonical(&graph, &pushed);
            if expect.len() as u32 > max_len {
                continue;
            }
            let got = w.times_gen(s, tlkl::coxeter::Side::Right).unwrap();
            assert_eq!(got.word(), &expect[..], "{spec}: {w} * s{}", s + 1);
        }
    }
    assert_eq!(
        canonical_words.len(),
        elements.len(),
        "{spec}: canonical words are distinct"
    );
}

#[test]
fn engine_matches_braid_closure_oracle() {
    check_graph("A3", 6);
    check_graph("B3", 9);
    check_graph("I2(5)", 5);
    check_graph("I2(6)", 6);
    check_graph("affA2", 5);
    check_graph("D4", 6);
}

#[test]
fn bruhat_matches_subword_oracle() {
    for spec in ["A3", "I2(4)", "I2(5)"] {
        let g = group(spec);
        let elements = g.enumerate_up_to(9).unwrap();
        for w in &elements {
            for x in &elements {
                assert_eq!(
                    x.bruhat_leq(w),
                    subword_leq(x, w),
                    "{spec}: {x} <= {w}"
                );
            }
        }
    }
}

#[test]
fn random_words_canonicalize_like_the_oracle() {
    // deterministic pseudo-random words, including non-reduced ones
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move |bound: usize| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) as usize) % bound
    };
    for spec in ["A3", "B3", "affA2", "D4"] {
        let g = group(spec);
        let graph = g.graph().clone();
        let rank = graph.rank();
        for _ in 0..60 {
            let len = next(9);
            let word: Vec<u8> = (0..len).map(|_| next(rank) as u8).collect();
            let word_usize: Vec<usize> = word.iter().map(|&g| g as usize).collect();
            let got = g.element_from_word(&word_usize).unwrap();
            let expect = closure_canonical(&graph, &word);
            assert_eq!(got.word(), &expect[..], "{spec}: word {word:?}");
        }
    }
}
