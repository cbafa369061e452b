//! Coxeter graphs: bond matrices, standard families, and the structural
//! classification that gates the closed-formula routes.
//!
//! Generators are 0-indexed internally and 1-indexed in all I/O. Path
//! families are numbered along the path; `B_n` carries its 4-bond at the
//! low end (between `s1` and `s2`).

use crate::error::{Error, Result};
use std::fmt;

/// Bond order `m(s,t)` between two generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl Bond {
    pub fn finite(self) -> Option<u32> {
        match self {
            Bond::Finite(m) => Some(m),
            Bond::Infinite => None,
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{}", m),
            Bond::Infinite => write!(f, "inf"),
        }
    }
}

/// Family tag of a graph. `Custom` graphs are classified structurally
/// where possible (see [`CoxeterGraph::classification`]).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphLabel {
    A(usize),
    B(usize),
    D(usize),
    F4,
    H3,
    H4,
    I2(u32),
    /// Affine A~_n: a cycle for n >= 2, the infinite dihedral group for n = 1.
    AffineA(usize),
    AffineB(usize),
    AffineC(usize),
    AffineF4,
    Custom,
}

/// Structural facts derived from the bond matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    /// No generator has three or more non-commuting neighbours.
    pub non_branching: bool,
    /// Recognized as a finite irreducible group (or rank-1).
    pub finite_irreducible: bool,
    /// Recognized as an affine group.
    pub affine: bool,
    /// The graph is affine F4 (excluded from the closed-formula gate).
    pub affine_f4: bool,
}

impl Classification {
    /// Gate for the closed-formula routes: finite-irreducible or affine,
    /// non-branching, and not affine F4.
    pub fn cw0_holds(&self) -> bool {
        self.non_branching && (self.finite_irreducible || self.affine) && !self.affine_f4
    }
}

/// A Coxeter graph: a symmetric bond matrix with unit diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct CoxeterGraph {
    rank: usize,
    matrix: Vec<Vec<Bond>>,
    label: GraphLabel,
    spec: String,
}

impl CoxeterGraph {
    fn from_matrix_labeled(matrix: Vec<Vec<Bond>>, label: GraphLabel, spec: String) -> Result<Self> {
        let rank = matrix.len();
        let bad = |reason: &str| Error::BadGraphSpec {
            spec: spec.clone(),
            reason: reason.to_string(),
        };
        if rank == 0 {
            return Err(bad("rank must be positive"));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(bad("matrix is not square"));
            }
            for (j, &b) in row.iter().enumerate() {
                if i == j {
                    if b != Bond::Finite(1) {
                        return Err(bad("diagonal entries must be 1"));
                    }
                } else {
                    if matrix[j][i] != b {
                        return Err(bad("matrix must be symmetric"));
                    }
                    if let Bond::Finite(m) = b {
                        if m < 2 {
                            return Err(bad("off-diagonal entries must be >= 2 (or infinite)"));
                        }
                    }
                }
            }
        }
        Ok(CoxeterGraph {
            rank,
            matrix,
            label,
            spec,
        })
    }

    /// Build a graph from an explicit bond matrix.
    pub fn custom(matrix: Vec<Vec<Bond>>) -> Result<Self> {
        let spec = render_custom_spec(&matrix);
        CoxeterGraph::from_matrix_labeled(matrix, GraphLabel::Custom, spec)
    }

    fn path_with_bonds(bonds: &[Bond], label: GraphLabel, spec: String) -> Self {
        let rank = bonds.len() + 1;
        let mut matrix = commuting_matrix(rank);
        for (i, &b) in bonds.iter().enumerate() {
            matrix[i][i + 1] = b;
            matrix[i + 1][i] = b;
        }
        CoxeterGraph::from_matrix_labeled(matrix, label, spec).expect("path matrix is valid")
    }

    pub fn type_a(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadGraphSpec {
                spec: "A0".into(),
                reason: "rank must be positive".into(),
            });
        }
        Ok(Self::path_with_bonds(
            &vec![Bond::Finite(3); n - 1],
            GraphLabel::A(n),
            format!("A{n}"),
        ))
    }

    pub fn type_b(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadGraphSpec {
                spec: format!("B{n}"),
                reason: "B_n requires rank >= 2".into(),
            });
        }
        let mut bonds = vec![Bond::Finite(3); n - 1];
        bonds[0] = Bond::Finite(4);
        Ok(Self::path_with_bonds(&bonds, GraphLabel::B(n), format!("B{n}")))
    }

    /// D_n: generators 1 and 2 are the fork, attached to 3, then a path.
    pub fn type_d(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::BadGraphSpec {
                spec: format!("D{n}"),
                reason: "D_n requires rank >= 4".into(),
            });
        }
        let mut matrix = commuting_matrix(n);
        let mut join = |i: usize, j: usize| {
            matrix[i][j] = Bond::Finite(3);
            matrix[j][i] = Bond::Finite(3);
        };
        join(0, 2);
        join(1, 2);
        for i in 2..n - 1 {
            join(i, i + 1);
        }
        CoxeterGraph::from_matrix_labeled(matrix, GraphLabel::D(n), format!("D{n}"))
    }

    pub fn f4() -> Self {
        Self::path_with_bonds(
            &[Bond::Finite(3), Bond::Finite(4), Bond::Finite(3)],
            GraphLabel::F4,
            "F4".into(),
        )
    }

    pub fn h3() -> Self {
        Self::path_with_bonds(
            &[Bond::Finite(5), Bond::Finite(3)],
            GraphLabel::H3,
            "H3".into(),
        )
    }

    pub fn h4() -> Self {
        Self::path_with_bonds(
            &[Bond::Finite(5), Bond::Finite(3), Bond::Finite(3)],
            GraphLabel::H4,
            "H4".into(),
        )
    }

    pub fn i2(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadGraphSpec {
                spec: format!("I2({m})"),
                reason: "I2(m) requires m >= 2".into(),
            });
        }
        Ok(Self::path_with_bonds(
            &[Bond::Finite(m)],
            GraphLabel::I2(m),
            format!("I2({m})"),
        ))
    }

    /// Affine A~_n: for n >= 2 a cycle of n+1 generators, for n = 1 the
    /// infinite dihedral group (one infinite bond).
    pub fn affine_a(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::BadGraphSpec {
                spec: "affA0".into(),
                reason: "affine A requires n >= 1".into(),
            }),
            1 => Ok(Self::path_with_bonds(
                &[Bond::Infinite],
                GraphLabel::AffineA(1),
                "affA1".into(),
            )),
            _ => {
                let rank = n + 1;
                let mut matrix = commuting_matrix(rank);
                for i in 0..rank {
                    let j = (i + 1) % rank;
                    matrix[i][j] = Bond::Finite(3);
                    matrix[j][i] = Bond::Finite(3);
                }
                CoxeterGraph::from_matrix_labeled(matrix, GraphLabel::AffineA(n), format!("affA{n}"))
            }
        }
    }

    /// Affine B~_n (n >= 3): the D-type fork at one end, a 4-bond at the other.
    pub fn affine_b(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadGraphSpec {
                spec: format!("affB{n}"),
                reason: "affine B requires n >= 3".into(),
            });
        }
        let rank = n + 1;
        let mut matrix = commuting_matrix(rank);
        let mut join = |i: usize, j: usize, m: u32| {
            matrix[i][j] = Bond::Finite(m);
            matrix[j][i] = Bond::Finite(m);
        };
        join(0, 2, 3);
        join(1, 2, 3);
        for i in 2..rank - 1 {
            join(i, i + 1, 3);
        }
        matrix[rank - 2][rank - 1] = Bond::Finite(4);
        matrix[rank - 1][rank - 2] = Bond::Finite(4);
        CoxeterGraph::from_matrix_labeled(matrix, GraphLabel::AffineB(n), format!("affB{n}"))
    }

    /// Affine C~_n (n >= 2): a path with 4-bonds at both ends.
    pub fn affine_c(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadGraphSpec {
                spec: format!("affC{n}"),
                reason: "affine C requires n >= 2".into(),
            });
        }
        let mut bonds = vec![Bond::Finite(3); n];
        bonds[0] = Bond::Finite(4);
        bonds[n - 1] = Bond::Finite(4);
        Ok(Self::path_with_bonds(
            &bonds,
            GraphLabel::AffineC(n),
            format!("affC{n}"),
        ))
    }

    pub fn affine_f4() -> Self {
        Self::path_with_bonds(
            &[
                Bond::Finite(3),
                Bond::Finite(3),
                Bond::Finite(4),
                Bond::Finite(3),
            ],
            GraphLabel::AffineF4,
            "affF4".into(),
        )
    }

    /// Parse a graph spec string: `A3`, `B4`, `D4`, `F4`, `H3`, `H4`,
    /// `I2(7)`, `affA2`, `affB3`, `affC2`, `affF4`, or
    /// `custom:[[1,3],[3,1]]` with `0` standing for an infinite bond.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |reason: &str| Error::BadGraphSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let rank_of = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| bad("expected a rank after the family letter"))
        };
        if let Some(rest) = spec.strip_prefix("custom:") {
            let rows: Vec<Vec<i64>> = serde_json::from_str(rest)
                .map_err(|e| bad(&format!("matrix rows must be a JSON array of arrays: {e}")))?;
            let matrix = rows
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|m| match m {
                            0 => Ok(Bond::Infinite),
                            m if m > 0 => Ok(Bond::Finite(m as u32)),
                            _ => Err(bad("bond orders must be positive (0 for infinite)")),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut g = CoxeterGraph::custom(matrix)?;
            g.spec = spec.to_string();
            return Ok(g);
        }
        if let Some(rest) = spec.strip_prefix("aff") {
            if rest == "F4" {
                return Ok(Self::affine_f4());
            }
            let (family, n) = rest.split_at(1);
            let n = rank_of(n)?;
            return match family {
                "A" => Self::affine_a(n),
                "B" => Self::affine_b(n),
                "C" => Self::affine_c(n),
                _ => Err(bad("unknown affine family (expected affA/affB/affC/affF4)")),
            };
        }
        if spec == "F4" {
            return Ok(Self::f4());
        }
        if spec == "H3" {
            return Ok(Self::h3());
        }
        if spec == "H4" {
            return Ok(Self::h4());
        }
        if let Some(inner) = spec.strip_prefix("I2(").and_then(|s| s.strip_suffix(')')) {
            let m = inner
                .parse::<u32>()
                .map_err(|_| bad("expected I2(m) with an integer m"))?;
            return Self::i2(m);
        }
        match spec.split_at(1) {
            ("A", n) => Self::type_a(rank_of(n)?),
            ("B", n) => Self::type_b(rank_of(n)?),
            ("D", n) => Self::type_d(rank_of(n)?),
            _ => Err(bad("unknown graph family")),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> GraphLabel {
        self.label
    }

    /// The spec string this graph was built from.
    pub fn spec_string(&self) -> &str {
        &self.spec
    }

    pub fn bond(&self, s: usize, t: usize) -> Bond {
        self.matrix[s][t]
    }

    pub fn commutes(&self, s: usize, t: usize) -> bool {
        self.matrix[s][t] == Bond::Finite(2)
    }

    /// Generators that neither equal nor commute with `s`.
    pub fn neighbors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank).filter(move |&t| t != s && !self.commutes(s, t))
    }

    pub fn is_non_branching(&self) -> bool {
        (0..self.rank).all(|s| self.neighbors(s).count() <= 2)
    }

    /// Canonical matrix fingerprint, used as the cache key.
    pub fn fingerprint(&self) -> String {
        render_custom_spec(&self.matrix)
    }

    /// Structural classification; drives [`Classification::cw0_holds`].
    pub fn classification(&self) -> Classification {
        let non_branching = self.is_non_branching();
        let (finite_irreducible, affine, affine_f4) = match self.label {
            GraphLabel::A(_)
            | GraphLabel::B(_)
            | GraphLabel::D(_)
            | GraphLabel::F4
            | GraphLabel::H3
            | GraphLabel::H4 => (true, false, false),
            GraphLabel::I2(2) => (false, false, false), // reducible
            GraphLabel::I2(_) => (true, false, false),
            GraphLabel::AffineA(_) | GraphLabel::AffineB(_) | GraphLabel::AffineC(_) => {
                (false, true, false)
            }
            GraphLabel::AffineF4 => (false, true, true),
            GraphLabel::Custom => return self.classify_custom(non_branching),
        };
        Classification {
            non_branching,
            finite_irreducible,
            affine,
            affine_f4,
        }
    }

    pub fn cw0_holds(&self) -> bool {
        self.classification().cw0_holds()
    }

    /// Match a custom matrix against the known finite/affine shapes, up to
    /// path reversal. Unrecognized graphs are reported as neither finite
    /// nor affine, which keeps the closed-formula gate shut for them.
    fn classify_custom(&self, non_branching: bool) -> Classification {
        let mut c = Classification {
            non_branching,
            finite_irreducible: false,
            affine: false,
            affine_f4: false,
        };
        if self.rank == 1 {
            c.finite_irreducible = true;
            return c;
        }
        let degree: Vec<usize> = (0..self.rank).map(|s| self.neighbors(s).count()).collect();
        let edge_count: usize = degree.iter().sum::<usize>() / 2;
        let connected = self.is_connected();
        if !connected {
            return c;
        }
        // Cycle of 3-bonds: affine A~_{rank-1}.
        if degree.iter().all(|&d| d == 2) && edge_count == self.rank {
            let all3 = (0..self.rank).all(|s| {
                self.neighbors(s)
                    .all(|t| self.bond(s, t) == Bond::Finite(3))
            });
            if all3 && self.rank >= 3 {
                c.affine = true;
            }
            return c;
        }
        // Path: read the bond sequence from one endpoint.
        if edge_count != self.rank - 1 || degree.iter().any(|&d| d > 2) {
            return c;
        }
        let start = (0..self.rank)
            .find(|&s| degree[s] == 1)
            .expect("path has an endpoint");
        let mut seq = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        for _ in 0..self.rank - 1 {
            let next = self
                .neighbors(cur)
                .find(|&t| t != prev)
                .expect("path continues");
            seq.push(self.bond(cur, next));
            prev = cur;
            cur = next;
        }
        let fin = |m: u32| Bond::Finite(m);
        let matches = |pat: &[Bond]| {
            seq == pat || seq.iter().rev().copied().collect::<Vec<_>>() == pat
        };
        let all3_inner = |s: &[Bond]| s.iter().all(|&b| b == fin(3));
        if seq == [Bond::Infinite] {
            c.affine = true; // infinite dihedral = affine A~_1
        } else if seq.len() == 1 {
            if let Bond::Finite(m) = seq[0] {
                c.finite_irreducible = m >= 3;
            }
        } else if all3_inner(&seq) {
            c.finite_irreducible = true; // A_n
        } else if (seq[0] == fin(4) && all3_inner(&seq[1..]))
            || (seq[seq.len() - 1] == fin(4) && all3_inner(&seq[..seq.len() - 1]))
        {
            c.finite_irreducible = true; // B_n
        } else if matches(&[fin(3), fin(4), fin(3)]) {
            c.finite_irreducible = true; // F4
        } else if matches(&[fin(5), fin(3)]) || matches(&[fin(5), fin(3), fin(3)]) {
            c.finite_irreducible = true; // H3 / H4
        } else if seq[0] == fin(4)
            && seq[seq.len() - 1] == fin(4)
            && all3_inner(&seq[1..seq.len() - 1])
        {
            c.affine = true; // C~_n
        } else if matches(&[fin(6), fin(3)]) {
            c.affine = true; // G~_2
        } else if matches(&[fin(3), fin(3), fin(4), fin(3)]) {
            c.affine = true;
            c.affine_f4 = true;
        }
        c
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.rank];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for t in self.neighbors(s) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Is this graph known to be finite? Custom graphs only count when the
    /// structural classifier recognizes a finite family.
    pub fn is_finite(&self) -> bool {
        self.classification().finite_irreducible
            || matches!(self.label, GraphLabel::I2(2))
            || (self.label == GraphLabel::Custom && self.custom_is_reducible_finite())
    }

    /// Disconnected custom graphs whose every component is recognized
    /// finite are still finite; checked only as a convenience for the CLI.
    fn custom_is_reducible_finite(&self) -> bool {
        // Conservative: only the edgeless case (a product of A_1's).
        (0..self.rank).all(|s| self.neighbors(s).count() == 0)
    }
}

impl fmt::Display for CoxeterGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec)
    }
}

impl fmt::Debug for CoxeterGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterGraph({})", self.spec)
    }
}

fn commuting_matrix(rank: usize) -> Vec<Vec<Bond>> {
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| if i == j { Bond::Finite(1) } else { Bond::Finite(2) })
                .collect()
        })
        .collect()
}

fn render_custom_spec(matrix: &[Vec<Bond>]) -> String {
    let rows: Vec<String> = matrix
        .iter()
        .map(|row| {
            let entries: Vec<String> = row
                .iter()
                .map(|b| match b {
                    Bond::Finite(m) => m.to_string(),
                    Bond::Infinite => "0".to_string(),
                })
                .collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("custom:[{}]", rows.join(","))
}
