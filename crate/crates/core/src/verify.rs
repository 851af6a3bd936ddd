//! The theorem-verification harness.
//!
//! Each category yields a list of rows `(theorem, lhs, rhs)`; a row passes
//! iff both sides are the same exact value or the same `UNDEFINED` reason.
//! Counting checks (resolutions, splitting dimensions, oracles) report the
//! number of passing instances against the number of instances.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{self, NamedCategory};
use crate::euler::{
    chi_ext_l2_of_sd_op, chi_fil, chi_l2_acyclic, chi_leinster, chi_series,
    filtration_from_topological_order, height_filtration, series_rational_function, EulerResult,
    NFiltration,
};
use crate::exactalg::{taylor_coefficients, Rational};
use crate::fincat::{is_acyclic, opposite, FinCat};
use crate::nerve::{
    count_nondegenerate_by_enumeration, count_nondegenerate_by_matrix, counts_by_end,
    finite_level_counts,
};
use crate::simplex::{chi_l2_via_resolution, resolution_at, splitting_is_kronecker};
use crate::subdivision::{length_filtration, sd};

/// Largest subdivision (in objects) built for Sd-invariance checks.
pub const SD_OBJECT_CAP: usize = 5000;
/// Largest subdivision on which every object's resolution is checked.
pub const RESOLUTION_OBJECT_CAP: usize = 500;
/// Nerve levels compared against the Taylor coefficients.
pub const ORACLE_LEVELS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub category: String,
    pub theorem: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.category, self.theorem, self.lhs, self.rhs, verdict
        )
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<Row>,
    /// Categories whose subdivision exceeded [`SD_OBJECT_CAP`].
    pub sd_skipped: Vec<String>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("category-id\ttheorem-id\tlhs\trhs\tverdict\n");
        for r in &self.rows {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// The same rows as [`to_tsv`](Self::to_tsv), as a JSON document.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports always serialize");
        out.push('\n');
        out
    }
}

/// Which groups of checks to run on a category.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    /// χ_L = χ_Σ (dropped for monoids, where the two may differ).
    pub leinster_vs_series: bool,
    pub sd_cap: usize,
    pub resolution_cap: usize,
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            leinster_vs_series: true,
            sd_cap: SD_OBJECT_CAP,
            resolution_cap: RESOLUTION_OBJECT_CAP,
        }
    }
}

struct Rows<'a> {
    id: &'a str,
    rows: Vec<Row>,
}

impl Rows<'_> {
    fn cmp(&mut self, theorem: &str, lhs: &EulerResult, rhs: &EulerResult) {
        self.rows.push(Row {
            category: self.id.to_string(),
            theorem: theorem.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs == rhs,
        });
    }

    fn count(&mut self, theorem: &str, ok: usize, total: usize) {
        self.rows.push(Row {
            category: self.id.to_string(),
            theorem: theorem.to_string(),
            lhs: ok.to_string(),
            rhs: total.to_string(),
            pass: ok == total,
        });
    }
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// The three filtrations used for χ_fil: topological index, its odd
/// stretch `2i + 1`, and `3·height + 2`.
pub fn test_filtrations(c: &FinCat) -> Vec<(&'static str, NFiltration)> {
    let topo = filtration_from_topological_order(c).expect("acyclic");
    let stretched = NFiltration(topo.0.iter().map(|v| 2 * v + 1).collect());
    let height = height_filtration(c).expect("acyclic");
    let scaled = NFiltration(height.0.iter().map(|v| 3 * v + 2).collect());
    vec![("topo", topo), ("topo2", stretched), ("height3", scaled)]
}

/// Taylor coefficients of the series rational function against direct
/// enumeration and against `sum((Z−E)^n)`, for `n ≤ levels`.
pub fn oracle_agreement(c: &FinCat, levels: usize) -> usize {
    let f = series_rational_function(c);
    let taylor = taylor_coefficients(&f, levels).expect("den(0) = 1");
    (0..=levels)
        .filter(|&n| {
            let direct = count_nondegenerate_by_enumeration(c, n);
            let matrix = count_nondegenerate_by_matrix(c, n);
            direct == matrix && taylor[n] == int(direct)
        })
        .count()
}

pub fn check_category(nc: &NamedCategory, checks: Checks) -> (Vec<Row>, bool) {
    let c = &nc.category;
    let mut rows = Rows {
        id: &nc.id,
        rows: Vec::new(),
    };
    let series = chi_series(c);
    rows.cmp("main.ext-l2=series", &chi_ext_l2_of_sd_op(c), &series);
    rows.count(
        "oracle.taylor",
        oracle_agreement(c, ORACLE_LEVELS),
        ORACLE_LEVELS + 1,
    );

    let mut skipped = false;
    if is_acyclic(c) {
        let leinster = chi_leinster(c);
        let l2 = chi_l2_acyclic(c);
        rows.cmp("coincidence.leinster=series", &leinster, &series);
        rows.cmp("coincidence.series=l2", &series, &l2);
        for (name, mu) in test_filtrations(c) {
            let fil = chi_fil(c, &mu).expect("valid filtration");
            rows.cmp(&format!("coincidence.l2=fil[{name}]"), &l2, &fil);
        }
        let kron = splitting_is_kronecker(c).expect("acyclic");
        rows.count("splitting.kronecker", usize::from(kron), 1);

        let sd_size: BigUint = finite_level_counts(c).expect("acyclic").iter().sum();
        if sd_size <= BigUint::from(checks.sd_cap) {
            let s = sd(c).expect("acyclic");
            let sc = &s.category;
            let l = length_filtration(&s);
            rows.cmp("sd.leinster", &chi_leinster(sc), &leinster);
            rows.cmp("sd.series", &chi_series(sc), &series);
            let mu = &test_filtrations(c)[0].1;
            rows.cmp(
                "sd.fil[length]",
                &chi_fil(sc, &l).expect("length filtration"),
                &chi_fil(c, mu).expect("valid"),
            );
            rows.cmp("sd.l2-of-op", &chi_l2_acyclic(&opposite(sc)), &l2);

            // Σ_n (−1)^n #N̄_n(Sd C)_g = (−1)^{L(g)} for every object g
            let top = s.level.iter().copied().max().unwrap_or(0);
            let by_end: Vec<Vec<BigUint>> = (0..=top).map(|n| counts_by_end(sc, n)).collect();
            let local_ok = sc
                .object_ids()
                .filter(|g| {
                    let mut sum = BigInt::from(0);
                    for (n, cnt) in by_end.iter().enumerate().take(s.level[g.0] + 1) {
                        let k = BigInt::from(cnt[g.0].clone());
                        if n % 2 == 0 {
                            sum += k;
                        } else {
                            sum -= k;
                        }
                    }
                    sum == BigInt::from(if s.level[g.0] % 2 == 0 { 1 } else { -1 })
                })
                .count();
            rows.count("sd.local-alternating-sum", local_ok, sc.num_objects());

            if sc.num_objects() <= checks.resolution_cap {
                let exact = s
                    .chains
                    .iter()
                    .filter(|g| {
                        let r = resolution_at(&s, g).expect("object of s");
                        r.is_exact() && r.isomorphic
                    })
                    .count();
                rows.count("resolution.exact-and-isomorphic", exact, sc.num_objects());
                rows.cmp("resolution.l2", &chi_l2_via_resolution(c), &l2);
            }
        } else {
            skipped = true;
        }
    } else if checks.leinster_vs_series {
        rows.cmp("coincidence.leinster=series", &chi_leinster(c), &series);
    }
    (rows.rows, skipped)
}

pub fn run(categories: &[NamedCategory], checks: Checks) -> VerifyReport {
    let results: Vec<(String, Vec<Row>, bool)> = categories
        .par_iter()
        .map(|nc| {
            let (rows, skipped) = check_category(nc, checks);
            (nc.id.clone(), rows, skipped)
        })
        .collect();
    let mut results = results;
    results.sort_by(|a, b| a.0.cmp(&b.0));
    let mut report = VerifyReport::default();
    for (id, rows, skipped) in results {
        report.rows.extend(rows);
        if skipped {
            report.sd_skipped.push(id);
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    PosetsExhaustive,
    AcyclicRandom,
    MonoidsSmall,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "posets-exhaustive" => Ok(Family::PosetsExhaustive),
            "acyclic-random" => Ok(Family::AcyclicRandom),
            "monoids-small" => Ok(Family::MonoidsSmall),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// Upper bounds on `size` per family.
pub fn size_bound(f: Family) -> usize {
    match f {
        Family::PosetsExhaustive => 4,
        Family::AcyclicRandom => 6,
        Family::MonoidsSmall => 3,
    }
}

/// Number of categories drawn by the `acyclic-random` family.
pub const RANDOM_COUNT: usize = 200;

pub fn family(f: Family, size: usize, seed: u64) -> Vec<NamedCategory> {
    match f {
        Family::PosetsExhaustive => corpus::posets_exhaustive(size),
        Family::AcyclicRandom => corpus::acyclic_random(RANDOM_COUNT, size, seed),
        Family::MonoidsSmall => corpus::monoids_small(size),
    }
}

pub fn checks_for(f: Family) -> Checks {
    Checks {
        leinster_vs_series: f != Family::MonoidsSmall,
        ..Checks::default()
    }
}

pub fn verify_family(f: Family, size: usize, seed: u64) -> VerifyReport {
    run(&family(f, size, seed), checks_for(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families_pass() {
        let r = verify_family(Family::PosetsExhaustive, 3, 0);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.sd_skipped.is_empty());
        let r = verify_family(Family::MonoidsSmall, 2, 0);
        assert!(r.all_pass());
    }

    #[test]
    fn report_is_sorted_and_reproducible() {
        let a = run(&corpus::acyclic_random(12, 4, 9), Checks::default());
        let b = run(&corpus::acyclic_random(12, 4, 9), Checks::default());
        assert_eq!(a.to_tsv(), b.to_tsv());
        let ids: Vec<&str> = a.rows.iter().map(|r| r.category.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn failing_rows_are_marked() {
        let row = Row {
            category: "c".into(),
            theorem: "t".into(),
            lhs: "1".into(),
            rhs: "2".into(),
            pass: false,
        };
        assert_eq!(row.to_string(), "c\tt\t1\t2\tFAIL");
    }
}
