//! Group elements as canonical ShortLex-minimal reduced words.
//!
//! The group is materialized lazily as a Cayley graph, one length level at
//! a time. A new level is built by *dihedral polygon folding*: every
//! ascending edge `u·s` is matched against `u'·t` by walking the finite
//! `2m(s,t)`-gon of the coset `u<s,t>` through already-built levels. By
//! Tits' theorem the dihedral relations present the group, so two
//! candidate edges reach the same element exactly when some chain of such
//! gon walks identifies them; the construction is exact, with no numeric
//! representation anywhere.
//!
//! Full commutativity is decided at node creation: `w` is fully
//! commutative iff every descent pair `(ws, s)` has `ws` fully commutative
//! and no reduced word of `ws` ends in the alternating `(s,t)`-tail of
//! length `m(s,t)-1`. The tail test runs on the heap of the canonical
//! word (same-label occurrences are totally ordered, so a greedy removal
//! of maximal letters is deterministic and complete).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::coxeter::graph::CoxeterGraph;
use crate::error::{Error, Result};

/// Default memory guard for enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 500_000;

/// Which side a generator acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

struct Node {
    word: Arc<[u8]>,
    /// `edges[s]` = node of `w*s`; descents are always present, ascents
    /// appear once the next level is built.
    edges: Box<[Option<u32>]>,
    fc: bool,
    inverse: Option<u32>,
}

struct Arena {
    rank: usize,
    nodes: Vec<Node>,
    index: HashMap<Arc<[u8]>, u32>,
    /// `level_start[l]` = id of the first node of length `l`.
    level_start: Vec<u32>,
    /// All levels `<= frontier` are complete (elements and their edges
    /// down to the previous level).
    frontier: u32,
    /// No elements exist beyond `frontier` (the group is finite and done).
    closed: bool,
    /// Bruhat ideal cache: node id -> sorted ids of all `x <= w`.
    ideals: HashMap<u32, Arc<Vec<u32>>>,
}

impl Arena {
    fn len_of(&self, id: u32) -> u32 {
        self.nodes[id as usize].word.len() as u32
    }

    fn level_range(&self, l: u32) -> std::ops::Range<usize> {
        let l = l as usize;
        if l >= self.level_start.len() {
            return 0..0;
        }
        let start = self.level_start[l] as usize;
        let end = self
            .level_start
            .get(l + 1)
            .map(|&i| i as usize)
            .unwrap_or(self.nodes.len());
        start..end
    }

    /// `s` is a right descent of `id`. Descent edges are always known.
    fn is_right_descent(&self, id: u32, s: u8) -> bool {
        match self.nodes[id as usize].edges[s as usize] {
            Some(t) => self.len_of(t) < self.len_of(id),
            None => false,
        }
    }

    fn smallest_right_descent(&self, id: u32) -> Option<u8> {
        (0..self.rank as u8).find(|&s| self.is_right_descent(id, s))
    }

    /// Bruhat order test by the lifting property, descending on the
    /// smallest right descent of `w`. Touches only known (descent) edges.
    fn leq(&self, mut x: u32, mut w: u32) -> bool {
        loop {
            if x == w {
                return true;
            }
            if self.len_of(x) >= self.len_of(w) {
                return false;
            }
            let s = self
                .smallest_right_descent(w)
                .expect("non-identity element has a descent");
            w = self.nodes[w as usize].edges[s as usize].unwrap();
            if self.is_right_descent(x, s) {
                x = self.nodes[x as usize].edges[s as usize].unwrap();
            }
        }
    }
}

/// One growth step: build level `frontier + 1` by polygon folding.
fn build_next_level(a: &mut Arena, graph: &CoxeterGraph, cap: usize) -> Result<()> {
    let level = a.frontier;
    let rank = a.rank;
    let mut cands: Vec<(u32, u8)> = Vec::new();
    let mut cand_idx: HashMap<(u32, u8), usize> = HashMap::new();
    for id in a.level_range(level) {
        for s in 0..rank as u8 {
            if a.nodes[id].edges[s as usize].is_none() {
                cand_idx.insert((id as u32, s), cands.len());
                cands.push((id as u32, s));
            }
        }
    }
    if cands.is_empty() {
        a.closed = true;
        return Ok(());
    }

    let mut uf = UnionFind::new(cands.len());
    for (ci, &(u, s)) in cands.iter().enumerate() {
        for t in 0..rank as u8 {
            if t == s {
                continue;
            }
            let Some(m) = graph.bond(s as usize, t as usize).finite() else {
                continue; // infinite bond: no gon, never a fold
            };
            // u is the subtop of its (s,t)-gon iff the walk away from the
            // s-edge (letters t,s,t,...) completes 2m-2 steps inside the
            // built levels, ending at the other subtop u' with u·s = u'·t.
            let mut y = u;
            let mut complete = true;
            for step in 0..(2 * m - 2) {
                let g = if step % 2 == 0 { t } else { s };
                match a.nodes[y as usize].edges[g as usize] {
                    Some(z) => y = z,
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if complete {
                let cj = *cand_idx
                    .get(&(y, t))
                    .expect("gon walk must end at an unbuilt ascent");
                uf.union(ci, cj);
            }
        }
    }

    // Gather classes; each class is one new element.
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for ci in 0..cands.len() {
        classes.entry(uf.find(ci)).or_default().push(ci);
    }
    let mut new_nodes: Vec<(Arc<[u8]>, Vec<usize>)> = classes
        .into_values()
        .map(|members| {
            let word = members
                .iter()
                .map(|&ci| {
                    let (u, s) = cands[ci];
                    let mut w: Vec<u8> = a.nodes[u as usize].word.to_vec();
                    w.push(s);
                    w
                })
                .min()
                .expect("class is nonempty");
            (Arc::from(word.into_boxed_slice()), members)
        })
        .collect();
    new_nodes.sort_by(|x, y| x.0.cmp(&y.0));

    if a.nodes.len() + new_nodes.len() > cap {
        return Err(Error::ElementCapExceeded { cap });
    }

    a.level_start.push(a.nodes.len() as u32);
    for (word, members) in new_nodes {
        let id = a.nodes.len() as u32;
        let fc = members.iter().all(|&ci| {
            let (u, s) = cands[ci];
            a.nodes[u as usize].fc && braid_tail(graph, &a.nodes[u as usize].word, s).is_none()
        });
        let mut edges = vec![None; rank].into_boxed_slice();
        for &ci in &members {
            let (u, s) = cands[ci];
            a.nodes[u as usize].edges[s as usize] = Some(id);
            edges[s as usize] = Some(u);
        }
        a.index.insert(word.clone(), id);
        a.nodes.push(Node {
            word,
            edges,
            fc,
            inverse: None,
        });
    }
    a.frontier = level + 1;
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Result of a successful braid-tail extraction: the word is commutation
/// equivalent to `prefix ++ (alternating (s,t)-word of length m(s,t)-1
/// ending in t) ++ suffix`, where every letter of `suffix` commutes
/// with `s`.
pub(crate) struct TailExtraction {
    pub t: u8,
    pub prefix: Vec<u8>,
    pub suffix: Vec<u8>,
}

/// Decide whether appending `s` to the (reduced, fully commutative)
/// `word` leaves the fully commutative set, and extract the witness
/// factorization if so: a commutation-class member of the form
/// `prefix · (alternating (s,t)-tail of length m(s,t)-1 ending in t) ·
/// suffix` with the suffix commuting letterwise with `s`, so that the
/// appended `s` slides left past the suffix and completes a braid factor.
///
/// Works on the heap of the word: first peel the up-set of letters
/// commuting with `s`, then greedily remove maximal letters labelled
/// `t, s, t, ...`. The live set stays an order ideal throughout, so
/// "no later non-commuting live letter" is exact maximality.
pub(crate) fn braid_tail(graph: &CoxeterGraph, word: &[u8], s: u8) -> Option<TailExtraction> {
    let n = word.len();
    let commutes = |a: u8, b: u8| graph.commutes(a as usize, b as usize);
    let mut alive: Vec<bool> = vec![true; n];
    loop {
        let mut changed = false;
        for p in (0..n).rev() {
            if !alive[p] || !commutes(word[p], s) {
                continue;
            }
            let maximal = (p + 1..n).all(|q| !alive[q] || commutes(word[q], word[p]));
            if maximal {
                alive[p] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let suffix: Vec<u8> = (0..n).filter(|&p| !alive[p]).map(|p| word[p]).collect();
    'next_t: for t in 0..graph.rank() as u8 {
        if t == s {
            continue;
        }
        let m = match graph.bond(s as usize, t as usize).finite() {
            Some(m) if m >= 3 => m,
            _ => continue,
        };
        let mut tail_alive = alive.clone();
        for k in 0..(m - 1) {
            let label = if k % 2 == 0 { t } else { s };
            // Same-label occurrences are comparable in the heap, so only
            // the last live occurrence can be maximal.
            let Some(p) = (0..n).rev().find(|&p| tail_alive[p] && word[p] == label) else {
                continue 'next_t;
            };
            let maximal =
                (p + 1..n).all(|q| !tail_alive[q] || commutes(word[q], label));
            if !maximal {
                continue 'next_t;
            }
            tail_alive[p] = false;
        }
        let prefix = (0..n).filter(|&p| tail_alive[p]).map(|p| word[p]).collect();
        return Some(TailExtraction {
            t,
            prefix,
            suffix,
        });
    }
    None
}

/// A Coxeter group over a fixed graph. Cheap to share (`Arc`); all
/// interior state is behind a lock, so elements can be used from several
/// threads.
pub struct Group {
    graph: CoxeterGraph,
    state: RwLock<Arena>,
    cap: usize,
}

impl Group {
    pub fn new(graph: CoxeterGraph) -> Arc<Self> {
        Self::with_element_cap(graph, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_element_cap(graph: CoxeterGraph, cap: usize) -> Arc<Self> {
        let rank = graph.rank();
        let empty: Arc<[u8]> = Arc::from(Vec::new().into_boxed_slice());
        let mut index = HashMap::new();
        index.insert(empty.clone(), 0);
        let arena = Arena {
            rank,
            nodes: vec![Node {
                word: empty,
                edges: vec![None; rank].into_boxed_slice(),
                fc: true,
                inverse: Some(0),
            }],
            index,
            level_start: vec![0],
            frontier: 0,
            closed: false,
            ideals: HashMap::new(),
        };
        Arc::new(Group {
            graph,
            state: RwLock::new(arena),
            cap,
        })
    }

    pub fn graph(&self) -> &CoxeterGraph {
        &self.graph
    }

    /// Grow until all elements of length `<= l` exist (or the group ends).
    fn ensure_level(&self, l: u32) -> Result<()> {
        loop {
            {
                let a = self.state.read().unwrap();
                if a.closed || a.frontier >= l {
                    return Ok(());
                }
            }
            let mut a = self.state.write().unwrap();
            if a.closed || a.frontier >= l {
                continue;
            }
            build_next_level(&mut a, &self.graph, self.cap)?;
        }
    }

    pub(crate) fn right_mult_id(&self, id: u32, s: u8) -> Result<u32> {
        loop {
            let len = {
                let a = self.state.read().unwrap();
                if let Some(t) = a.nodes[id as usize].edges[s as usize] {
                    return Ok(t);
                }
                a.len_of(id)
            };
            self.ensure_level(len + 1)?;
        }
    }

    pub(crate) fn id_word(&self, id: u32) -> Arc<[u8]> {
        self.state.read().unwrap().nodes[id as usize].word.clone()
    }

    pub(crate) fn id_length(&self, id: u32) -> u32 {
        self.state.read().unwrap().len_of(id)
    }

    pub(crate) fn id_is_fc(&self, id: u32) -> bool {
        self.state.read().unwrap().nodes[id as usize].fc
    }

    pub(crate) fn id_is_right_descent(&self, id: u32, s: u8) -> bool {
        self.state.read().unwrap().is_right_descent(id, s)
    }

    pub(crate) fn leq_ids(&self, x: u32, w: u32) -> bool {
        self.state.read().unwrap().leq(x, w)
    }

    pub(crate) fn inverse_id(&self, id: u32) -> Result<u32> {
        if let Some(inv) = self.state.read().unwrap().nodes[id as usize].inverse {
            return Ok(inv);
        }
        let word = self.id_word(id);
        let mut cur = 0u32;
        for &g in word.iter().rev() {
            cur = self.right_mult_id(cur, g)?;
        }
        let mut a = self.state.write().unwrap();
        a.nodes[id as usize].inverse = Some(cur);
        a.nodes[cur as usize].inverse = Some(id);
        Ok(cur)
    }

    /// Sorted ids of the Bruhat ideal `{x : x <= w}` (cached).
    pub(crate) fn ideal_ids(&self, w: u32) -> Result<Arc<Vec<u32>>> {
        {
            let a = self.state.read().unwrap();
            if let Some(v) = a.ideals.get(&w) {
                return Ok(v.clone());
            }
        }
        let len = self.id_length(w);
        self.ensure_level(len)?;
        let ideal: Vec<u32> = {
            let a = self.state.read().unwrap();
            let max_id = a.level_range(len.min(a.frontier)).end;
            (0..max_id as u32)
                .filter(|&x| a.len_of(x) <= len && a.leq(x, w))
                .collect()
        };
        let ideal = Arc::new(ideal);
        self.state.write().unwrap().ideals.insert(w, ideal.clone());
        Ok(ideal)
    }

    pub(crate) fn element_of_id(self: &Arc<Self>, id: u32) -> Element {
        Element {
            word: self.id_word(id),
            group: self.clone(),
            id,
        }
    }

    pub fn identity(self: &Arc<Self>) -> Element {
        self.element_of_id(0)
    }

    pub fn generator(self: &Arc<Self>, s: usize) -> Result<Element> {
        self.check_gen(s)?;
        let id = self.right_mult_id(0, s as u8)?;
        Ok(self.element_of_id(id))
    }

    fn check_gen(&self, s: usize) -> Result<()> {
        if s >= self.graph.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: s,
                rank: self.graph.rank(),
            });
        }
        Ok(())
    }

    /// Canonical form of an arbitrary product of generators (0-based,
    /// need not be reduced).
    pub fn element_from_word(self: &Arc<Self>, word: &[usize]) -> Result<Element> {
        let mut id = 0u32;
        for &g in word {
            self.check_gen(g)?;
            id = self.right_mult_id(id, g as u8)?;
        }
        Ok(self.element_of_id(id))
    }

    /// Parse `"e"` or space/comma separated 1-based generator indices.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<Element> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(self.identity());
        }
        let mut word = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let n: usize = tok.parse().map_err(|_| Error::BadWord {
                word: text.to_string(),
                reason: format!("bad generator index {tok:?}"),
            })?;
            if n == 0 {
                return Err(Error::BadWord {
                    word: text.to_string(),
                    reason: "generator indices are 1-based".into(),
                });
            }
            word.push(n - 1);
        }
        self.element_from_word(&word)
    }

    /// All elements of length `<= max_len`, BFS order (length, then
    /// ShortLex). For a finite group with `max_len >= l(w0)` this is the
    /// whole group.
    pub fn enumerate_up_to(self: &Arc<Self>, max_len: u32) -> Result<Vec<Element>> {
        self.ensure_level(max_len)?;
        let ids: Vec<u32> = {
            let a = self.state.read().unwrap();
            (0..a.nodes.len() as u32)
                .filter(|&id| a.len_of(id) <= max_len)
                .collect()
        };
        Ok(ids.into_iter().map(|id| self.element_of_id(id)).collect())
    }

    /// Whether enumeration has proven the group finite and complete.
    pub fn is_fully_enumerated(&self) -> bool {
        self.state.read().unwrap().closed
    }

    /// All fully commutative `y` with `x <= y <= w`. Errors when `x` is
    /// not below `w`.
    pub fn fc_interval(self: &Arc<Self>, x: &Element, w: &Element) -> Result<Vec<Element>> {
        self.check_same(x)?;
        self.check_same(w)?;
        if !self.leq_ids(x.id, w.id) {
            return Err(Error::NotComparable {
                x: x.to_string(),
                w: w.to_string(),
            });
        }
        let ideal = self.ideal_ids(w.id)?;
        Ok(ideal
            .iter()
            .copied()
            .filter(|&y| self.id_is_fc(y) && self.leq_ids(x.id, y))
            .map(|y| self.element_of_id(y))
            .collect())
    }

    pub(crate) fn check_same(self: &Arc<Self>, e: &Element) -> Result<()> {
        if Arc::ptr_eq(self, &e.group) {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// Total number of elements built so far.
    pub fn built_count(&self) -> usize {
        self.state.read().unwrap().nodes.len()
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.graph)
    }
}

/// A group element, identified by its canonical ShortLex-minimal reduced
/// word. Equality, ordering and hashing use `(length, word)`, so
/// structural equality is group equality.
#[derive(Clone)]
pub struct Element {
    word: Arc<[u8]>,
    group: Arc<Group>,
    id: u32,
}

impl Element {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub(crate) fn id(&self) -> u32 {
        self.id
    }

    /// Canonical reduced word, 0-based letters.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> u32 {
        self.word.len() as u32
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// `(-1)^{l(w)}`.
    pub fn sign(&self) -> i64 {
        if self.length() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Multiply by a generator; the length changes by exactly one.
    pub fn times_gen(&self, s: usize, side: Side) -> Result<Element> {
        self.group.check_gen(s)?;
        match side {
            Side::Right => {
                let id = self.group.right_mult_id(self.id, s as u8)?;
                Ok(self.group.element_of_id(id))
            }
            Side::Left => {
                let mut id = self.group.right_mult_id(0, s as u8)?;
                for &g in self.word.iter() {
                    id = self.group.right_mult_id(id, g)?;
                }
                Ok(self.group.element_of_id(id))
            }
        }
    }

    pub fn is_descent(&self, s: usize, side: Side) -> bool {
        match side {
            Side::Right => self.group.id_is_right_descent(self.id, s as u8),
            Side::Left => {
                let inv = self.group.inverse_id(self.id).expect("inverse stays in built levels");
                self.group.id_is_right_descent(inv, s as u8)
            }
        }
    }

    pub fn descents(&self, side: Side) -> Vec<usize> {
        (0..self.group.graph.rank())
            .filter(|&s| self.is_descent(s, side))
            .collect()
    }

    pub fn inverse(&self) -> Element {
        let id = self
            .group
            .inverse_id(self.id)
            .expect("inverse stays in built levels");
        self.group.element_of_id(id)
    }

    pub fn is_fully_commutative(&self) -> bool {
        self.group.id_is_fc(self.id)
    }

    /// Bruhat order.
    pub fn bruhat_leq(&self, w: &Element) -> bool {
        debug_assert!(Arc::ptr_eq(&self.group, &w.group));
        self.group.leq_ids(self.id, w.id)
    }

    /// 1-based letters, for I/O.
    pub fn word_1based(&self) -> Vec<usize> {
        self.word.iter().map(|&g| g as usize + 1).collect()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(Arc::ptr_eq(&self.group, &other.group));
        self.word == other.word
    }
}

impl Eq for Element {}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    /// ShortLex: by length, then lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert!(Arc::ptr_eq(&self.group, &other.group));
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}

impl std::hash::Hash for Element {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|&g| (g + 1).to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::graph::CoxeterGraph;

    fn group(spec: &str) -> Arc<Group> {
        Group::new(CoxeterGraph::parse(spec).unwrap())
    }

    #[test]
    fn canonical_form_examples() {
        let a2 = group("A2");
        assert_eq!(a2.element_from_word(&[0, 0]).unwrap().to_string(), "e");
        assert_eq!(a2.element_from_word(&[1, 0, 1]).unwrap().to_string(), "1 2 1");
        let a3 = group("A3");
        assert_eq!(a3.element_from_word(&[2, 0]).unwrap().to_string(), "1 3");
    }

    #[test]
    fn mult_gen_examples() {
        let a2 = group("A2");
        let e = a2.identity();
        let s1 = e.times_gen(0, Side::Right).unwrap();
        assert_eq!(s1.to_string(), "1");
        assert_eq!(s1.times_gen(0, Side::Right).unwrap(), e);
        let w = a2.parse_element("1 2").unwrap();
        assert_eq!(w.times_gen(0, Side::Right).unwrap().to_string(), "1 2 1");
        for x in a2.enumerate_up_to(3).unwrap() {
            for s in 0..2 {
                let y = x.times_gen(s, Side::Right).unwrap();
                assert_eq!((x.length() as i64 - y.length() as i64).abs(), 1);
            }
        }
    }

    #[test]
    fn descent_examples() {
        let a2 = group("A2");
        let w0 = a2.parse_element("1 2 1").unwrap();
        assert_eq!(w0.descents(Side::Right), vec![0, 1]);
        assert_eq!(a2.identity().descents(Side::Right), Vec::<usize>::new());
        let w = a2.parse_element("1 2").unwrap();
        assert_eq!(w.descents(Side::Right), vec![1]);
        assert_eq!(w.descents(Side::Left), vec![0]);
    }

    #[test]
    fn bruhat_examples() {
        let a2 = group("A2");
        let e = a2.identity();
        let w = a2.parse_element("1 2").unwrap();
        assert!(e.bruhat_leq(&w));
        assert!(a2.parse_element("1").unwrap().bruhat_leq(&w));
        let a3 = group("A3");
        let s2 = a3.parse_element("2").unwrap();
        let w13 = a3.parse_element("1 3").unwrap();
        assert!(!s2.bruhat_leq(&w13));
    }

    #[test]
    fn fc_examples() {
        let a2 = group("A2");
        assert!(!a2.parse_element("1 2 1").unwrap().is_fully_commutative());
        let a3 = group("A3");
        assert!(a3.parse_element("1 3").unwrap().is_fully_commutative());
        let b2 = group("I2(4)");
        assert!(b2.parse_element("1 2 1").unwrap().is_fully_commutative());
        assert!(!b2.parse_element("1 2 1 2").unwrap().is_fully_commutative());
    }

    #[test]
    fn enumeration_counts() {
        // |W| and |W_c| for small groups; Catalan C_n for A_{n-1} and
        // (n+2)C_n - 1 for B_n.
        for (spec, size, fc) in [
            ("A2", 6, 5),
            ("A3", 24, 14),
            ("A4", 120, 42),
            ("I2(4)", 8, 7),
            ("B3", 48, 24),
            ("I2(5)", 10, 9),
            ("I2(6)", 12, 11),
            ("D4", 192, 48),
        ] {
            let g = group(spec);
            let all = g.enumerate_up_to(64).unwrap();
            assert!(g.is_fully_enumerated(), "{spec} should close");
            assert_eq!(all.len(), size, "size of {spec}");
            let fc_count = all.iter().filter(|w| w.is_fully_commutative()).count();
            assert_eq!(fc_count, fc, "FC count of {spec}");
        }
        assert_eq!(group("A2").enumerate_up_to(0).unwrap().len(), 1);
    }

    #[test]
    fn affine_enumeration_is_truncated() {
        let g = group("affA1");
        let elems = g.enumerate_up_to(5).unwrap();
        assert_eq!(elems.len(), 11); // e plus two per length
        assert!(!g.is_fully_enumerated());
        let g = group("affA2");
        let elems = g.enumerate_up_to(4).unwrap();
        assert!(elems.iter().all(|w| w.length() <= 4));
        assert!(!g.is_fully_enumerated());
    }

    #[test]
    fn element_cap_guard() {
        let g = Group::with_element_cap(CoxeterGraph::parse("affA2").unwrap(), 50);
        let err = g.enumerate_up_to(40).unwrap_err();
        assert!(matches!(err, Error::ElementCapExceeded { cap: 50 }));
    }

    #[test]
    fn inverse_examples() {
        let a2 = group("A2");
        let w = a2.parse_element("1 2").unwrap();
        assert_eq!(w.inverse().to_string(), "2 1");
        assert_eq!(a2.identity().inverse(), a2.identity());
        let w0 = a2.parse_element("1 2 1").unwrap();
        assert_eq!(w0.inverse(), w0);
        for x in group("B3").enumerate_up_to(9).unwrap() {
            let inv = x.inverse();
            assert_eq!(inv.length(), x.length());
            let mut prod: Vec<usize> = x.word().iter().map(|&g| g as usize).collect();
            prod.extend(inv.word().iter().map(|&g| g as usize));
            assert!(x.group().element_from_word(&prod).unwrap().is_identity());
        }
    }

    #[test]
    fn fc_interval_examples() {
        let a2 = group("A2");
        let e = a2.identity();
        let s1 = a2.parse_element("1").unwrap();
        let w0 = a2.parse_element("1 2 1").unwrap();
        assert_eq!(a2.fc_interval(&e, &s1).unwrap().len(), 2);
        let below_w0 = a2.fc_interval(&e, &w0).unwrap();
        assert_eq!(below_w0.len(), 5); // w0 itself is not FC
        assert!(below_w0.iter().all(|y| y != &w0));
        let fc = a2.parse_element("1 2").unwrap();
        assert_eq!(a2.fc_interval(&fc, &fc).unwrap(), vec![fc.clone()]);
        let s2 = a2.parse_element("2").unwrap();
        assert!(a2.fc_interval(&w0, &s2).is_err());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for spec in ["A3", "B3", "I2(5)"] {
            let g = group(spec);
            for w in g.enumerate_up_to(12).unwrap() {
                let word: Vec<usize> = w.word().iter().map(|&g| g as usize).collect();
                assert_eq!(g.element_from_word(&word).unwrap(), w);
            }
        }
    }

    #[test]
    fn bruhat_agrees_with_cover_closure_on_a3() {
        // The order generated by length-difference-1 relations must be
        // exactly bruhat_leq.
        let g = group("A3");
        let all = g.enumerate_up_to(6).unwrap();
        let n = all.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, x) in all.iter().enumerate() {
            reach[i][i] = true;
            for (j, w) in all.iter().enumerate() {
                if w.length() == x.length() + 1 && x.bruhat_leq(w) {
                    reach[i][j] = true;
                }
            }
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        for (i, x) in all.iter().enumerate() {
            for (j, w) in all.iter().enumerate() {
                assert_eq!(reach[i][j], x.bruhat_leq(w), "{x} vs {w}");
            }
        }
    }

    #[test]
    fn type_a_fc_matches_321_avoidance() {
        // s_i acts on 1..n+1 by swapping (i, i+1); FC = 321-avoiding.
        for (spec, n) in [("A3", 4usize), ("A4", 5usize)] {
            let g = group(spec);
            for w in g.enumerate_up_to(16).unwrap() {
                let mut perm: Vec<usize> = (0..n).collect();
                for &s in w.word() {
                    perm.swap(s as usize, s as usize + 1);
                }
                let mut has_321 = false;
                for a in 0..n {
                    for b in a + 1..n {
                        for c in b + 1..n {
                            if perm[a] > perm[b] && perm[b] > perm[c] {
                                has_321 = true;
                            }
                        }
                    }
                }
                assert_eq!(w.is_fully_commutative(), !has_321, "{w}");
            }
        }
    }

    #[test]
    fn fc_counts_match_formulas_up_to_rank_five() {
        // Catalan: |W_c(A_{n-1})| = C_n; type B: |W_c(B_n)| = (n+2)C_n - 1.
        let catalan = [1u64, 1, 2, 5, 14, 42, 132];
        for n in 2..=5usize {
            let g = group(&format!("A{}", n));
            let all = g.enumerate_up_to(32).unwrap();
            let fc = all.iter().filter(|w| w.is_fully_commutative()).count() as u64;
            assert_eq!(fc, catalan[n + 1], "A{n}");
        }
        for n in 2..=4usize {
            let g = group(&format!("B{}", n));
            let all = g.enumerate_up_to(32).unwrap();
            let fc = all.iter().filter(|w| w.is_fully_commutative()).count() as u64;
            assert_eq!(fc, (n as u64 + 2) * catalan[n] - 1, "B{n}");
        }
    }
}
