//! Independent brute-force routes used as ground truth.
//!
//! Nothing here reuses the recursion code paths it validates: inversion
//! in the quotient is a literal linear solve against the multiplication
//! engine, the a-polynomials are read off the Hecke-algebra inverse
//! pushed through the projection, and the IC basis is recomputed by a
//! generic bar-invariant unitriangular solve.

use std::collections::BTreeSet;

use crate::coxeter::Element;
use crate::error::{Error, Result};
use crate::hecke::{AlgebraVector, Basis};
use crate::laurent::LaurentPoly;
use crate::tl::Tl;

/// Exact division in `Z[q^{1/2}, q^{-1/2}]`: returns `p / d` when the
/// quotient exists in the ring, `None` otherwise.
fn div_exact(p: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    if p.is_zero() {
        return Some(LaurentPoly::zero());
    }
    if d.is_zero() {
        return None;
    }
    let (d_deg, d_lead) = {
        let e = d.max_exp().expect("nonzero divisor");
        (e, d.coeff_at(e))
    };
    // In an exact division the lowest terms multiply too, so quotient
    // exponents are bounded below; without this bound an inexact division
    // would expand forever downward (Laurent exponents are unbounded).
    let lo_bound = p.min_exp().expect("nonzero dividend") - d.min_exp().expect("nonzero divisor");
    let mut rem = p.clone();
    let mut quot = LaurentPoly::zero();
    while !rem.is_zero() {
        let r_deg = rem.max_exp().expect("nonzero remainder");
        let r_lead = rem.coeff_at(r_deg);
        if r_lead % d_lead != 0 || r_deg - d_deg < lo_bound {
            return None;
        }
        let term = LaurentPoly::monomial(r_lead / d_lead, r_deg - d_deg);
        quot = &quot + &term;
        let next = &rem - &(&term * d);
        if next.max_exp().is_some_and(|e| e >= r_deg) {
            return None;
        }
        rem = next;
    }
    Some(quot)
}

/// An exact linear system over the Laurent ring, solved by fraction-free
/// elimination: every intermediate division is exact, so the computation
/// never leaves `Z[q^{1/2}, q^{-1/2}]`.
pub struct LinearSystem {
    pub unknowns: Vec<Element>,
    /// One row per equation: coefficients per unknown, then the
    /// right-hand side.
    pub rows: Vec<Vec<LaurentPoly>>,
    pub rhs: Vec<LaurentPoly>,
}

impl LinearSystem {
    /// Bareiss-style fraction-free elimination followed by exact back
    /// substitution. Unit-monomial pivots are preferred (they keep the
    /// intermediate polynomials small) but any nonzero pivot works. The
    /// systems built here are square-or-overdetermined with a unique
    /// solution in the ring; anything else indicates a bug in the
    /// multiplication engine and errors out.
    pub fn solve(mut self, op: &'static str) -> Result<Vec<LaurentPoly>> {
        let n = self.unknowns.len();
        let m = self.rows.len();
        let fail = |reason: String| Error::SolverInconsistent { op, reason };
        let mut pivot_row_of_col: Vec<usize> = Vec::with_capacity(n);
        let mut row_used = vec![false; m];
        let mut prev_pivot = LaurentPoly::one();
        for col in 0..n {
            let ri = self
                .choose_pivot(col, &row_used)
                .ok_or_else(|| fail(format!("no pivot for column {col}")))?;
            row_used[ri] = true;
            pivot_row_of_col.push(ri);
            let pivot = self.rows[ri][col].clone();
            for rj in 0..m {
                if row_used[rj] {
                    continue;
                }
                let factor = self.rows[rj][col].clone();
                for c in 0..=n {
                    let (a, b) = if c < n {
                        (&self.rows[rj][c], &self.rows[ri][c])
                    } else {
                        (&self.rhs[rj], &self.rhs[ri])
                    };
                    let updated = &(&pivot * a) - &(&factor * b);
                    let updated = div_exact(&updated, &prev_pivot)
                        .ok_or_else(|| fail("inexact fraction-free update".into()))?;
                    if c < n {
                        self.rows[rj][c] = updated;
                    } else {
                        self.rhs[rj] = updated;
                    }
                }
            }
            prev_pivot = pivot;
        }
        // leftover equations must have reduced to 0 = 0
        for rj in 0..m {
            if !row_used[rj]
                && (self.rows[rj].iter().any(|c| !c.is_zero()) || !self.rhs[rj].is_zero())
            {
                return Err(fail("inconsistent equation after elimination".into()));
            }
        }
        // back substitution; each division is exact because the unique
        // solution lies in the ring
        let mut solution = vec![LaurentPoly::zero(); n];
        for col in (0..n).rev() {
            let ri = pivot_row_of_col[col];
            let mut value = self.rhs[ri].clone();
            for c in col + 1..n {
                value = &value - &(&self.rows[ri][c] * &solution[c]);
            }
            solution[col] = div_exact(&value, &self.rows[ri][col])
                .ok_or_else(|| fail(format!("solution is not integral at column {col}")))?;
        }
        Ok(solution)
    }

    /// Pivot preference for `col`: an unused row with a unit-monomial
    /// entry, then any nonzero entry with the fewest terms.
    fn choose_pivot(&self, col: usize, row_used: &[bool]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None; // (terms, row)
        for (ri, row) in self.rows.iter().enumerate() {
            if row_used[ri] || row[col].is_zero() {
                continue;
            }
            let entry = &row[col];
            let nterms = entry.terms().count();
            let is_unit_monomial =
                nterms == 1 && matches!(entry.terms().next(), Some((_, 1)) | Some((_, -1)));
            if is_unit_monomial {
                return Some(ri);
            }
            if best.is_none_or(|(t, _)| nterms < t) {
                best = Some((nterms, ri));
            }
        }
        best.map(|(_, ri)| ri)
    }
}

/// Invert `t_{w^{-1}}` by solving `X * t_{w^{-1}} = t_e` for the
/// coefficients of `X` over the FC interval below `w`. Must agree with
/// the a-polynomial expansion.
pub fn invert_t(tl: &Tl, w: &Element) -> Result<AlgebraVector> {
    let group = tl.group().clone();
    group.check_same(w)?;
    let unknowns: Vec<Element> = group.fc_interval(&group.identity(), w)?;
    let w_inv = w.inverse();
    let products: Vec<AlgebraVector> = unknowns
        .iter()
        .map(|y| tl.mul_element(&AlgebraVector::unit(Basis::Tl, y.clone()), &w_inv))
        .collect::<Result<_>>()?;
    // Element ordering reads only the immutable canonical word
    #[allow(clippy::mutable_key_type)]
    let mut labels: BTreeSet<Element> = BTreeSet::new();
    labels.insert(group.identity());
    for p in &products {
        for (z, _) in p.terms() {
            labels.insert(z.clone());
        }
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for z in &labels {
        rows.push(products.iter().map(|p| p.coeff(z)).collect());
        rhs.push(if z.is_identity() {
            LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        });
    }
    let system = LinearSystem {
        unknowns: unknowns.clone(),
        rows,
        rhs,
    };
    let solution = system.solve("oracle_invert_t")?;
    let mut out = AlgebraVector::zero(Basis::Tl);
    for (y, c) in unknowns.into_iter().zip(solution) {
        out.add_term(y, c);
    }
    Ok(out)
}

/// Third route to `a_{x,w}`: push the Hecke-algebra inverse of
/// `T_{w^{-1}}` through the projection and read off the `t_x`
/// coefficient, scaled by `q^{l(w)}`.
pub fn a_via_hecke(tl: &Tl, x: &Element, w: &Element) -> Result<LaurentPoly> {
    let projected = tl.sigma(&tl.hecke().t_inverse(w)?)?;
    Ok(projected.coeff(x).mul_monomial(1, 2 * w.length() as i32))
}

/// Recompute the IC basis element `c_w` in t-coordinates by a generic
/// bar-invariant unitriangular solve: the unknown vector has leading
/// coefficient `q^{-l(w)/2}` at `w`, is fixed by the bar involution
/// (expressed through `(t_{y^{-1}})^{-1}` expansions), and its lower
/// coefficients satisfy the strict degree constraint. Independent of the
/// L-polynomial code paths.
pub fn ic_solve(tl: &Tl, w: &Element) -> Result<AlgebraVector> {
    let group = tl.group().clone();
    group.check_same(w)?;
    let mut fcs: Vec<Element> = group.fc_interval(&group.identity(), w)?;
    fcs.sort();
    let mut out = AlgebraVector::zero(Basis::Tl);
    out.add_term(w.clone(), LaurentPoly::v_pow(-(w.length() as i32)));
    for x in fcs.iter().rev() {
        if x == w {
            continue;
        }
        // residual of the bar-invariance equation at t_x over the solved part
        let mut residual = LaurentPoly::zero();
        for (y, gamma_y) in out.terms() {
            let inv = tl.t_inverse(y)?;
            let coeff = inv.coeff(x);
            if !coeff.is_zero() {
                residual = &residual + &(&gamma_y.bar() * &coeff);
            }
        }
        // gamma_x - q^{-l(x)} bar(gamma_x) = residual; substituting
        // gamma_x = v^{-l(x)} lambda makes lambda - bar(lambda) known,
        // and the degree constraint forces lambda to be its negative part.
        let h = residual.mul_monomial(1, x.length() as i32);
        let lambda = h.strictly_negative_part();
        if &lambda - &lambda.bar() != h {
            return Err(Error::SolverInconsistent {
                op: "oracle_ic_solve",
                reason: format!("bar residual at {x} below {w} is not antisymmetric"),
            });
        }
        out.add_term(x.clone(), lambda.mul_monomial(1, -(x.length() as i32)));
    }
    Ok(out)
}
