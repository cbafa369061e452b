//! Assembled polynomial tables, CSV/JSON export, and the on-disk cache.
//!
//! Table rows are deterministic: `w` ascending by (length, ShortLex),
//! then `x` the same way; zero entries are omitted.
//!
//! Cache format (tab-separated, one record per line):
//!
//! ```text
//! # tlkl-cache v1
//! family<TAB>graph-fingerprint<TAB>x<TAB>w<TAB>polynomial
//! ```
//!
//! Only the R and P families are persisted: the Kazhdan-Lusztig table is
//! the shared substrate of every gated route and dominates runtime, while
//! D/a/L are cheap to rebuild. Records for other graphs are preserved on
//! save.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::Hecke;
use crate::laurent::LaurentPoly;
use crate::tl::{LRoute, Tl};

/// The five polynomial families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    R,
    P,
    D,
    A,
    L,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::R, Family::P, Family::D, Family::A, Family::L];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::R => "R",
            Family::P => "P",
            Family::D => "D",
            Family::A => "a",
            Family::L => "L",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "R" | "r" => Ok(Family::R),
            "P" | "p" => Ok(Family::P),
            "D" | "d" => Ok(Family::D),
            "a" | "A" => Ok(Family::A),
            "L" | "l" => Ok(Family::L),
            _ => Err(format!("unknown family {s:?} (expected one of R, P, D, a, L)")),
        }
    }
}

/// Which algorithm filled an entry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Route {
    Recursion,
    ViaKl,
    Closed,
    IcSolve,
    ViaHecke,
    LinearSolve,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::Recursion => "recursion",
            Route::ViaKl => "via-kl",
            Route::Closed => "closed",
            Route::IcSolve => "ic-solve",
            Route::ViaHecke => "via-hecke",
            Route::LinearSolve => "linear-solve",
        };
        write!(f, "{s}")
    }
}

/// Main route or an independent verification route.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RouteChoice {
    Main,
    Oracle,
}

/// One exported table entry.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: String,
    pub graph: String,
    pub x: String,
    pub w: String,
    pub poly: String,
    pub route: String,
}

/// A full (x, w) table for one family over one graph.
pub struct PolyTable {
    pub family: Family,
    pub graph: String,
    pub rows: Vec<TableRow>,
}

/// Build the table for a family over all `w` of length `<= max_len`.
pub fn build_table(
    tl: &Tl,
    family: Family,
    max_len: u32,
    choice: RouteChoice,
) -> Result<PolyTable> {
    let group = tl.group().clone();
    let graph = group.graph().spec_string().to_string();
    let hecke = tl.hecke();
    let all = group.enumerate_up_to(max_len)?;
    let mut rows = Vec::new();
    let mut push = |x: &crate::coxeter::Element,
                    w: &crate::coxeter::Element,
                    poly: LaurentPoly,
                    route: Route| {
        if !poly.is_zero() {
            rows.push(TableRow {
                family: family.to_string(),
                graph: graph.clone(),
                x: x.to_string(),
                w: w.to_string(),
                poly: poly.to_string(),
                route: route.to_string(),
            });
        }
    };
    for w in &all {
        let fc_w = w.is_fully_commutative();
        match family {
            Family::R | Family::P => {
                if choice == RouteChoice::Oracle {
                    return Err(Error::BadHypotheses {
                        op: "table",
                        reason: format!("family {family} has no independent oracle route"),
                    });
                }
                for x in &all {
                    if x.length() <= w.length() && x.bruhat_leq(w) {
                        let poly = match family {
                            Family::R => hecke.r_poly(x, w)?,
                            _ => hecke.kl_poly(x, w)?,
                        };
                        push(x, w, poly, Route::Recursion);
                    }
                }
            }
            Family::D => {
                for x in &all {
                    if !x.is_fully_commutative() || !x.bruhat_leq(w) {
                        continue;
                    }
                    match choice {
                        RouteChoice::Main => push(x, w, tl.d_rec(x, w)?, Route::Recursion),
                        RouteChoice::Oracle => push(x, w, tl.d_via_kl(x, w)?, Route::ViaKl),
                    }
                }
            }
            Family::A => {
                if !fc_w {
                    continue;
                }
                for x in &all {
                    if !x.is_fully_commutative() || !x.bruhat_leq(w) {
                        continue;
                    }
                    match choice {
                        RouteChoice::Main => push(x, w, tl.a_rec(x, w)?, Route::Recursion),
                        RouteChoice::Oracle => {
                            push(x, w, crate::oracle::a_via_hecke(tl, x, w)?, Route::ViaHecke)
                        }
                    }
                }
            }
            Family::L => {
                if !fc_w {
                    continue;
                }
                match choice {
                    RouteChoice::Main => {
                        let route = if tl.cw0_holds() {
                            Route::Closed
                        } else {
                            Route::IcSolve
                        };
                        for x in &all {
                            if x.is_fully_commutative() && x.bruhat_leq(w) {
                                push(x, w, tl.l_poly(x, w, LRoute::Auto)?, route);
                            }
                        }
                    }
                    RouteChoice::Oracle => {
                        let cw = crate::oracle::ic_solve(tl, w)?;
                        for (x, gamma) in cw.terms() {
                            // gamma_x = q^{-l(x)/2} L_{x,w}
                            let l = gamma.mul_monomial(1, x.length() as i32);
                            push(x, w, l, Route::LinearSolve);
                        }
                    }
                }
            }
        }
    }
    Ok(PolyTable {
        family,
        graph,
        rows,
    })
}

pub const CSV_HEADER: &str = "family,graph,x,w,poly,route";

impl PolyTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.family, r.graph, r.x, r.w, r.poly, r.route
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.rows).expect("rows serialize");
        s.push('\n');
        s
    }
}

// ---- cache ----

const CACHE_HEADER: &str = "# tlkl-cache v1";

/// Load cached R/P entries for this graph into the memo tables. Records
/// for other graphs are ignored. Returns the number of entries applied.
pub fn load_cache(path: &Path, hecke: &Hecke) -> Result<usize> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => {
            return Err(Error::Io {
                path: path.display().to_string(),
                source: e,
            })
        }
    };
    let group = hecke.group().clone();
    let fingerprint = group.graph().fingerprint();
    let bad = |line: usize, reason: &str| Error::BadCache {
        path: format!("{}:{}", path.display(), line),
        reason: reason.to_string(),
    };
    let mut applied = 0;
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(bad(i + 1, "expected 5 tab-separated fields"));
        }
        if fields[1] != fingerprint {
            continue;
        }
        let family: Family = fields[0]
            .parse()
            .map_err(|e: String| bad(i + 1, &e))?;
        let x = group
            .parse_element(fields[2])
            .map_err(|e| bad(i + 1, &e.to_string()))?;
        let w = group
            .parse_element(fields[3])
            .map_err(|e| bad(i + 1, &e.to_string()))?;
        let poly: LaurentPoly = fields[4]
            .parse()
            .map_err(|e: crate::laurent::ParsePolyError| bad(i + 1, &e.to_string()))?;
        match family {
            Family::R => hecke.prefill_r(&x, &w, poly),
            Family::P => hecke.prefill_p(&x, &w, poly),
            _ => {} // only R/P are cached; ignore others for forward compatibility
        }
        applied += 1;
    }
    Ok(applied)
}

/// Persist the memoized R/P entries, merging with any records already in
/// the file that belong to other graphs. Returns the number written.
pub fn save_cache(path: &Path, hecke: &Hecke) -> Result<usize> {
    let fingerprint = hecke.group().graph().fingerprint();
    let mut other_lines: Vec<String> = Vec::new();
    if let Ok(text) = std::fs::read_to_string(path) {
        for line in text.lines() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            if line.split('\t').nth(1) != Some(fingerprint.as_str()) {
                other_lines.push(line.to_string());
            }
        }
    }
    let mut ours: Vec<String> = Vec::new();
    for (family, entries) in [
        (Family::R, hecke.r_entries()),
        (Family::P, hecke.p_entries()),
    ] {
        for (x, w, poly) in entries {
            ours.push(format!("{family}\t{fingerprint}\t{x}\t{w}\t{poly}"));
        }
    }
    ours.sort();
    let count = ours.len();
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(io_err)?;
        }
    }
    let mut f = std::fs::File::create(path).map_err(io_err)?;
    writeln!(f, "{CACHE_HEADER}").map_err(io_err)?;
    for line in other_lines.iter().chain(ours.iter()) {
        writeln!(f, "{line}").map_err(io_err)?;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterGraph, Group};
    use std::sync::Arc;

    fn tl_ctx(spec: &str) -> Arc<Tl> {
        Tl::new(Hecke::new(Group::new(CoxeterGraph::parse(spec).unwrap())))
    }

    #[test]
    fn d_table_of_a2_has_five_top_rows() {
        let tl = tl_ctx("A2");
        let table = build_table(&tl, Family::D, 3, RouteChoice::Main).unwrap();
        let top: Vec<&TableRow> = table.rows.iter().filter(|r| r.w == "1 2 1").collect();
        assert_eq!(top.len(), 5);
        assert!(top.iter().all(|r| r.poly == "-1"));
        // diagonal rows for the FC elements
        assert!(table.rows.iter().any(|r| r.x == "e" && r.w == "e" && r.poly == "1"));
    }

    #[test]
    fn l_table_matches_oracle_on_i2_4() {
        let tl = tl_ctx("I2(4)");
        let main = build_table(&tl, Family::L, 8, RouteChoice::Main).unwrap();
        let oracle = build_table(&tl, Family::L, 8, RouteChoice::Oracle).unwrap();
        let key = |r: &TableRow| (r.x.clone(), r.w.clone(), r.poly.clone());
        let mut a: Vec<_> = main.rows.iter().map(key).collect();
        let mut b: Vec<_> = oracle.rows.iter().map(key).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_table_renders_header_only() {
        let table = PolyTable {
            family: Family::L,
            graph: "A2".into(),
            rows: vec![],
        };
        assert_eq!(table.to_csv(), format!("{CSV_HEADER}\n"));
        assert_eq!(table.to_json().trim(), "[]");
    }

    #[test]
    fn csv_and_json_render() {
        let tl = tl_ctx("A2");
        let table = build_table(&tl, Family::R, 3, RouteChoice::Main).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.contains("R,A2,e,1,-1 + q,recursion"));
        let json = table.to_json();
        let parsed: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.len(), table.rows.len());
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("tlkl-cache-test-{}", std::process::id()));
        let path = dir.join("cache.tsv");
        let _ = std::fs::remove_file(&path);
        let tl = tl_ctx("A2");
        let g = tl.group().clone();
        let w0 = g.parse_element("1 2 1").unwrap();
        let e = g.identity();
        let _ = tl.hecke().r_poly(&e, &w0).unwrap();
        let _ = tl.hecke().kl_poly(&e, &w0).unwrap();
        let written = save_cache(&path, tl.hecke()).unwrap();
        assert!(written > 0);
        // a fresh context loads the entries and computes identical tables
        let tl2 = tl_ctx("A2");
        let loaded = load_cache(&path, tl2.hecke()).unwrap();
        assert_eq!(loaded, written);
        let t1 = build_table(&tl, Family::P, 3, RouteChoice::Main).unwrap();
        let t2 = build_table(&tl2, Family::P, 3, RouteChoice::Main).unwrap();
        assert_eq!(t1.to_csv(), t2.to_csv());
        // records for other graphs survive a save
        let tl3 = tl_ctx("A3");
        let _ = tl3.hecke().r_poly(&tl3.group().identity(), &tl3.group().parse_element("1").unwrap());
        save_cache(&path, tl3.hecke()).unwrap();
        let tl4 = tl_ctx("A2");
        assert_eq!(load_cache(&path, tl4.hecke()).unwrap(), written);
        let _ = std::fs::remove_file(&path);
    }
}
