//! The Hecke algebra on the T-basis: multiplication, inverses via
//! R-polynomials, Kazhdan-Lusztig polynomials, mu, the basis element
//! `C'_w`, and the bar involution.
//!
//! Everything is memoized per group; the memo maps behave as coherent
//! caches under concurrent use (entries are pure functions of their key).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::coxeter::{Element, Group};
use crate::error::Result;
use crate::laurent::LaurentPoly;

/// Which basis an [`AlgebraVector`] is expressed in: the T-basis of the
/// Hecke algebra, the t-basis of the Temperley-Lieb quotient (labels must
/// be fully commutative), or IC-basis coordinates (c-labels).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Basis {
    T,
    Tl,
    Ic,
}

impl Basis {
    fn letter(self) -> &'static str {
        match self {
            Basis::T => "T",
            Basis::Tl => "t",
            Basis::Ic => "c",
        }
    }
}

/// A finite formal linear combination of basis labels with Laurent
/// polynomial coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraVector {
    basis: Basis,
    terms: BTreeMap<Element, LaurentPoly>,
}

impl AlgebraVector {
    pub fn zero(basis: Basis) -> Self {
        AlgebraVector {
            basis,
            terms: BTreeMap::new(),
        }
    }

    /// The basis vector `1 * b_w`.
    pub fn unit(basis: Basis, w: Element) -> Self {
        let mut v = AlgebraVector::zero(basis);
        v.add_term(w, LaurentPoly::one());
        v
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Element) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &LaurentPoly)> {
        self.terms.iter()
    }

    /// Add `c * b_w`, keeping canonical form. t-basis and c-basis labels
    /// must be fully commutative.
    pub fn add_term(&mut self, w: Element, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        assert!(
            self.basis == Basis::T || w.is_fully_commutative(),
            "non-fully-commutative label {w} in a {}-basis vector",
            self.basis.letter()
        );
        match self.terms.get_mut(&w) {
            Some(entry) => {
                *entry = &*entry + &c;
                if entry.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &AlgebraVector) {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        for (w, c) in other.terms() {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraVector, scale: &LaurentPoly) {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        for (w, c) in other.terms() {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &LaurentPoly) -> AlgebraVector {
        let mut v = AlgebraVector::zero(self.basis);
        for (w, c) in self.terms() {
            v.add_term(w.clone(), c * scale);
        }
        v
    }

    pub fn sub(&self, other: &AlgebraVector) -> AlgebraVector {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        let mut v = self.clone();
        for (w, c) in other.terms() {
            v.add_term(w.clone(), -c);
        }
        v
    }
}

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({}) {}[{}]", c, self.basis.letter(), w))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Hecke algebra context: a group plus memo tables for R and P.
pub struct Hecke {
    group: Arc<Group>,
    r_memo: Mutex<HashMap<(u32, u32), LaurentPoly>>,
    p_memo: Mutex<HashMap<(u32, u32), LaurentPoly>>,
}

impl Hecke {
    pub fn new(group: Arc<Group>) -> Arc<Self> {
        Arc::new(Hecke {
            group,
            r_memo: Mutex::new(HashMap::new()),
            p_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    /// Right multiplication by `T_s`: `T_w T_s = T_{ws}` on ascent,
    /// `q T_{ws} + (q-1) T_w` on descent, extended linearly.
    pub fn mul_gen(&self, v: &AlgebraVector, s: usize) -> Result<AlgebraVector> {
        assert_eq!(v.basis(), Basis::T, "hecke multiplication needs a T-basis vector");
        let mut out = AlgebraVector::zero(Basis::T);
        let q = LaurentPoly::q_pow(1);
        let qm1 = LaurentPoly::q_minus_one();
        for (x, c) in v.terms() {
            let xs = x.times_gen(s, crate::coxeter::Side::Right)?;
            if xs.length() > x.length() {
                out.add_term(xs, c.clone());
            } else {
                out.add_term(xs, c * &q);
                out.add_term(x.clone(), c * &qm1);
            }
        }
        Ok(out)
    }

    /// Right multiplication by `T_w` (letter by letter along a reduced word).
    pub fn mul_element(&self, v: &AlgebraVector, w: &Element) -> Result<AlgebraVector> {
        let mut out = v.clone();
        for &s in w.word().iter() {
            out = self.mul_gen(&out, s as usize)?;
        }
        Ok(out)
    }

    /// The R-polynomial `R_{x,w}`: zero unless `x <= w`, one when `x = w`,
    /// otherwise by descent recursion.
    pub fn r_poly(&self, x: &Element, w: &Element) -> Result<LaurentPoly> {
        self.group.check_same(x)?;
        self.group.check_same(w)?;
        Ok(self.r_ids(x.id(), w.id()))
    }

    pub(crate) fn r_ids(&self, x: u32, w: u32) -> LaurentPoly {
        if x == w {
            return LaurentPoly::one();
        }
        if !self.group.leq_ids(x, w) {
            return LaurentPoly::zero();
        }
        if let Some(p) = self.r_memo.lock().unwrap().get(&(x, w)) {
            return p.clone();
        }
        let s = (0..self.group.graph().rank() as u8)
            .find(|&s| self.group.id_is_right_descent(w, s))
            .expect("x < w, so w is not the identity");
        let ws = self.group.right_mult_id(w, s).expect("descent edge");
        let xs = self.group.right_mult_id(x, s).expect("within built levels");
        let value = if self.group.id_is_right_descent(x, s) {
            self.r_ids(xs, ws)
        } else {
            let a = self.r_ids(xs, ws);
            let b = self.r_ids(x, ws);
            &(&LaurentPoly::q_pow(1) * &a) + &(&LaurentPoly::q_minus_one() * &b)
        };
        self.r_memo.lock().unwrap().insert((x, w), value.clone());
        value
    }

    /// Expansion of `(T_{w^{-1}})^{-1}` in the T-basis:
    /// `eps_w q^{-l(w)} sum_{x <= w} eps_x R_{x,w} T_x`.
    pub fn t_inverse(&self, w: &Element) -> Result<AlgebraVector> {
        self.group.check_same(w)?;
        let mut out = AlgebraVector::zero(Basis::T);
        let norm = LaurentPoly::monomial(w.sign(), -2 * w.length() as i32);
        for &x in self.group.ideal_ids(w.id())?.iter() {
            let xe = self.group.element_of_id(x);
            let r = self.r_ids(x, w.id());
            let signed = r.mul_monomial(xe.sign(), 0);
            out.add_term(xe, &signed * &norm);
        }
        Ok(out)
    }

    /// The Kazhdan-Lusztig polynomial `P_{x,w}`.
    pub fn kl_poly(&self, x: &Element, w: &Element) -> Result<LaurentPoly> {
        self.group.check_same(x)?;
        self.group.check_same(w)?;
        Ok(self.p_ids(x.id(), w.id()))
    }

    pub(crate) fn p_ids(&self, x: u32, w: u32) -> LaurentPoly {
        if x == w {
            return LaurentPoly::one();
        }
        if !self.group.leq_ids(x, w) {
            return LaurentPoly::zero();
        }
        if let Some(p) = self.p_memo.lock().unwrap().get(&(x, w)) {
            return p.clone();
        }
        let g = &self.group;
        let s = (0..g.graph().rank() as u8)
            .find(|&s| g.id_is_right_descent(w, s))
            .expect("x < w, so w is not the identity");
        let v = g.right_mult_id(w, s).expect("descent edge");
        let xs = g.right_mult_id(x, s).expect("within built levels");
        // P_{x,w} = q^{1-c} P_{xs,v} + q^c P_{x,v} - sum over mu-corrections,
        // with c = 1 when xs < x.
        let descent = g.id_is_right_descent(x, s);
        let (e1, e2) = if descent { (0, 1) } else { (1, 0) };
        let mut value = &self.p_ids(xs, v).mul_monomial(1, 2 * e1)
            + &self.p_ids(x, v).mul_monomial(1, 2 * e2);
        let wlen = g.id_length(w);
        for &z in g.ideal_ids(v).expect("ideal of shorter element").iter() {
            if !g.leq_ids(x, z) || !g.id_is_right_descent(z, s) {
                continue;
            }
            let m = self.mu_ids(z, v);
            if m == 0 {
                continue;
            }
            let shift = (wlen - g.id_length(z)) as i32;
            value = &value - &self.p_ids(x, z).mul_monomial(m, shift);
        }
        debug_assert!(
            value.max_exp().unwrap_or(0) <= (wlen - g.id_length(x)) as i32 - 1,
            "KL degree bound violated"
        );
        self.p_memo.lock().unwrap().insert((x, w), value.clone());
        value
    }

    pub(crate) fn mu_ids(&self, x: u32, w: u32) -> i64 {
        let lx = self.group.id_length(x);
        let lw = self.group.id_length(w);
        if lw <= lx || (lw - lx) % 2 == 0 {
            return 0;
        }
        self.p_ids(x, w).coeff_at((lw - lx) as i32 - 1)
    }

    /// `mu(x,w)`: the coefficient of `q^{(l(w)-l(x)-1)/2}` in `P_{x,w}`.
    pub fn mu(&self, x: &Element, w: &Element) -> Result<i64> {
        self.group.check_same(x)?;
        self.group.check_same(w)?;
        Ok(self.mu_ids(x.id(), w.id()))
    }

    /// The Kazhdan-Lusztig basis element
    /// `C'_w = q^{-l(w)/2} sum_{x <= w} P_{x,w} T_x`.
    pub fn c_prime(&self, w: &Element) -> Result<AlgebraVector> {
        self.group.check_same(w)?;
        let mut out = AlgebraVector::zero(Basis::T);
        let norm = LaurentPoly::v_pow(-(w.length() as i32));
        for &x in self.group.ideal_ids(w.id())?.iter() {
            let p = self.p_ids(x, w.id());
            out.add_term(self.group.element_of_id(x), &p * &norm);
        }
        Ok(out)
    }

    /// The bar involution on the Hecke algebra:
    /// `sum a_x T_x  ->  sum bar(a_x) (T_{x^{-1}})^{-1}`.
    pub fn bar(&self, v: &AlgebraVector) -> Result<AlgebraVector> {
        assert_eq!(v.basis(), Basis::T, "bar involution acts on T-basis vectors");
        let mut out = AlgebraVector::zero(Basis::T);
        for (x, c) in v.terms() {
            out.add_scaled(&self.t_inverse(x)?, &c.bar());
        }
        Ok(out)
    }

    /// Snapshot of the memoized R table (for persistence).
    pub fn r_entries(&self) -> Vec<(Element, Element, LaurentPoly)> {
        self.snapshot(&self.r_memo)
    }

    /// Snapshot of the memoized P table (for persistence).
    pub fn p_entries(&self) -> Vec<(Element, Element, LaurentPoly)> {
        self.snapshot(&self.p_memo)
    }

    fn snapshot(
        &self,
        memo: &Mutex<HashMap<(u32, u32), LaurentPoly>>,
    ) -> Vec<(Element, Element, LaurentPoly)> {
        let entries: Vec<((u32, u32), LaurentPoly)> = memo
            .lock()
            .unwrap()
            .iter()
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        let group = self.group.clone();
        entries
            .into_iter()
            .map(|((x, w), p)| (group.element_of_id(x), group.element_of_id(w), p))
            .collect()
    }

    /// Seed an R entry (from a cache file). Entries are trusted.
    pub fn prefill_r(&self, x: &Element, w: &Element, p: LaurentPoly) {
        self.r_memo.lock().unwrap().insert((x.id(), w.id()), p);
    }

    /// Seed a P entry (from a cache file). Entries are trusted.
    pub fn prefill_p(&self, x: &Element, w: &Element, p: LaurentPoly) {
        self.p_memo.lock().unwrap().insert((x.id(), w.id()), p);
    }
}
