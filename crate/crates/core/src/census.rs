//! Exhaustive censuses of knot and link shadows up to sphere isomorphism and
//! reflection.
//!
//! Knot shadows come from Gauss words: every word of length `2c` whose labels
//! appear in first-occurrence order and satisfy the parity condition is
//! realized over all rotation choices, then deduplicated by canonical code.
//! Connected link shadows come from growing rooted 4-valent maps dart by
//! dart in breadth-first order and keeping the planar ones. The second
//! generator also yields knot shadows, which gives an independent check of
//! the first.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{self, canonical, CanonicalCode, GaussCode};
use crate::moves::max_independent_regions;
use crate::region_opt::ir;
use crate::shadow::Shadow;
use crate::warping::warping_degree_shadow;
use crate::{Error, Result};

pub const DEFAULT_KNOT_LIMIT: usize = 8;
pub const DEFAULT_LINK_LIMIT: usize = 6;

/// Crossing budgets for the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub knots: usize,
    pub links: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { knots: DEFAULT_KNOT_LIMIT, links: DEFAULT_LINK_LIMIT }
    }
}

fn check(c: usize, limit: usize) -> Result<()> {
    if c == 0 {
        return Err(Error::EmptyShadow);
    }
    if c > limit {
        return Err(Error::LimitExceeded { requested: c, limit });
    }
    Ok(())
}

/// Gauss words of length `2c` in first-occurrence order that pass the
/// parity test. With `reduced_only`, words with a chord interlacing no other
/// chord are dropped: such a crossing is always nugatory.
pub fn gauss_words(c: usize, reduced_only: bool) -> Vec<GaussCode> {
    fn grow(seq: &mut Vec<usize>, open_at: &mut Vec<usize>, c: usize, reduced: bool, out: &mut Vec<GaussCode>) {
        let i = seq.len();
        let n = 2 * c;
        if i == n {
            let g = GaussCode::from_normalized(seq.clone());
            if !reduced || g.isolated_chords().is_empty() {
                out.push(g);
            }
            return;
        }
        let labels = open_at.len();
        // close an open label; the gap must hold an even number of symbols
        for x in 0..labels {
            let o = open_at[x];
            if o == usize::MAX || (i - o).is_multiple_of(2) {
                continue;
            }
            if reduced && (i - o == 1 || (o == 0 && i == n - 1)) {
                continue;
            }
            open_at[x] = usize::MAX;
            seq.push(x);
            grow(seq, open_at, c, reduced, out);
            seq.pop();
            open_at[x] = o;
        }
        // open a new label, if enough positions remain to close all
        let still_open = open_at.iter().filter(|&&o| o != usize::MAX).count();
        if labels < c && still_open < n - i - 1 {
            open_at.push(i);
            seq.push(labels);
            grow(seq, open_at, c, reduced, out);
            seq.pop();
            open_at.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(2 * c), &mut Vec::with_capacity(c), c, reduced_only, &mut out);
    out
}

fn dedup(shadows: impl IntoIterator<Item = Shadow>) -> Vec<Shadow> {
    let mut by_code: BTreeMap<CanonicalCode, Shadow> = BTreeMap::new();
    for s in shadows {
        by_code.entry(canonical(&s)).or_insert(s);
    }
    by_code.into_values().collect()
}

/// All knot shadows with `c` crossings, sorted by canonical code.
pub fn enumerate_knot_shadows(c: usize, reduced_only: bool, limits: &Limits) -> Result<Vec<Shadow>> {
    check(c, limits.knots)?;
    let words = gauss_words(c, reduced_only);
    let realized: Vec<Shadow> = words
        .par_iter()
        .flat_map_iter(|g| codec::realize(g).into_iter().filter(|s| !reduced_only || s.is_reduced()))
        .collect();
    Ok(dedup(realized))
}

/// Rooted 4-valent maps with `c` crossings, grown in breadth-first dart
/// order: the least unpaired dart is joined either to a later unpaired dart
/// or to slot 0 of a fresh crossing. Only planar maps are kept.
fn planar_maps(c: usize) -> Vec<Shadow> {
    fn grow(pair: &mut [usize], used: usize, c: usize, out: &mut Vec<Shadow>) {
        let Some(d) = (0..4 * used).find(|&d| pair[d] == usize::MAX) else {
            if used == c && codec::face_count(pair) == c + 2 {
                if let Ok(s) = Shadow::from_pairing(pair.to_vec()) {
                    out.push(s);
                }
            }
            return;
        };
        for e in d + 1..4 * used {
            if pair[e] != usize::MAX {
                continue;
            }
            pair[d] = e;
            pair[e] = d;
            grow(pair, used, c, out);
            pair[d] = usize::MAX;
            pair[e] = usize::MAX;
        }
        if used < c {
            let e = 4 * used;
            pair[d] = e;
            pair[e] = d;
            grow(pair, used + 1, c, out);
            pair[d] = usize::MAX;
            pair[e] = usize::MAX;
        }
    }
    // fan out over the partner of dart 0
    let mut starts: Vec<Vec<usize>> = Vec::new();
    for e in 1..4 {
        let mut pair = vec![usize::MAX; 4 * c];
        pair[0] = e;
        pair[e] = 0;
        starts.push(pair);
    }
    if c > 1 {
        let mut pair = vec![usize::MAX; 4 * c];
        pair[0] = 4;
        pair[4] = 0;
        starts.push(pair);
    }
    starts
        .into_par_iter()
        .flat_map_iter(|mut pair| {
            let used = if pair[0] == 4 { 2 } else { 1 };
            let mut out = Vec::new();
            grow(&mut pair, used, c, &mut out);
            dedup(out)
        })
        .collect()
}

/// All connected link shadows (any number of components) with `c`
/// crossings, sorted by canonical code.
pub fn enumerate_link_shadows(c: usize, limits: &Limits) -> Result<Vec<Shadow>> {
    check(c, limits.links)?;
    Ok(dedup(planar_maps(c)))
}

/// Knot shadows obtained from the map generator instead of Gauss words.
pub fn knot_shadows_from_maps(c: usize, reduced_only: bool, limits: &Limits) -> Result<Vec<Shadow>> {
    Ok(enumerate_link_shadows(c, limits)?
        .into_iter()
        .filter(|s| s.is_knot() && (!reduced_only || s.is_reduced()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub c: usize,
    pub count_reduced: usize,
    pub d_min: usize,
    pub ir_min: usize,
    pub ir_max: usize,
}

/// Minimum warping degree and IR range over reduced knot shadows, per
/// crossing number.
pub fn dmin_table(from: usize, to: usize, limits: &Limits) -> Result<Vec<CensusRow>> {
    check(to, limits.knots)?;
    (from.max(1)..=to)
        .map(|c| {
            let shadows = enumerate_knot_shadows(c, true, limits)?;
            let values: Vec<(usize, usize)> =
                shadows.par_iter().map(|s| Ok((warping_degree_shadow(s)?.d, ir(s)?.ir))).collect::<Result<_>>()?;
            let min_max = |f: fn(&(usize, usize)) -> usize| {
                (values.iter().map(f).min().unwrap_or(0), values.iter().map(f).max().unwrap_or(0))
            };
            Ok(CensusRow {
                c,
                count_reduced: shadows.len(),
                d_min: min_max(|v| v.0).0,
                ir_min: min_max(|v| v.1).0,
                ir_max: min_max(|v| v.1).1,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkCensusRow {
    pub c: usize,
    pub count: usize,
    /// Least maximal number of independent regions among the shadows.
    pub m_min: usize,
}

pub fn link_row(c: usize, limits: &Limits) -> Result<LinkCensusRow> {
    let shadows = enumerate_link_shadows(c, limits)?;
    let m_min =
        shadows.par_iter().map(max_independent_regions).collect::<Result<Vec<_>>>()?.into_iter().min().unwrap_or(0);
    Ok(LinkCensusRow { c, count: shadows.len(), m_min })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkBoundReport {
    pub n: usize,
    /// `min(m_min(n), m_min(n + 1), m_min(n + 2))`
    pub m: usize,
    pub link_rows: Vec<LinkCensusRow>,
    /// Crossing numbers from `n + 3` to the link limit whose `m_min` falls
    /// below `m`.
    pub link_violations: usize,
    pub knots_checked: usize,
    /// Reduced knot shadows with `n ≤ c ≤` knot limit and `d < m - 1`.
    pub d_violations: usize,
    /// Same shadows with `IR < m - 1`.
    pub ir_violations: usize,
    /// `m ≤ 1` makes the bound `d ≥ 0` vacuous.
    pub informative: bool,
}

/// Evaluates the link-shadow hypothesis at `n` and checks its consequences
/// on every reduced knot shadow with `n` to `limits.knots` crossings.
pub fn link_bound_check(n: usize, limits: &Limits) -> Result<LinkBoundReport> {
    check(n + 2, limits.links)?;
    let link_rows: Vec<LinkCensusRow> = (n..=n + 2).map(|c| link_row(c, limits)).collect::<Result<_>>()?;
    let m = link_rows.iter().map(|r| r.m_min).min().unwrap_or(0);
    let mut link_violations = 0;
    for c in n + 3..=limits.links {
        let row = link_row(c, limits)?;
        if row.m_min < m {
            link_violations += 1;
        }
    }
    let mut knots_checked = 0;
    let mut d_violations = 0;
    let mut ir_violations = 0;
    let floor = m.saturating_sub(1);
    for c in n.max(1)..=limits.knots {
        let shadows = enumerate_knot_shadows(c, true, limits)?;
        let values: Vec<(usize, usize)> =
            shadows.par_iter().map(|s| Ok((warping_degree_shadow(s)?.d, ir(s)?.ir))).collect::<Result<_>>()?;
        knots_checked += values.len();
        d_violations += values.iter().filter(|v| v.0 < floor).count();
        ir_violations += values.iter().filter(|v| v.1 < floor).count();
    }
    Ok(LinkBoundReport {
        n,
        m,
        link_rows,
        link_violations,
        knots_checked,
        d_violations,
        ir_violations,
        informative: m >= 2,
    })
}

/// `knots_c<k>.pd` or `links_c<k>.pd`.
pub fn census_file_name(links: bool, c: usize) -> String {
    format!("{}_c{}.pd", if links { "links" } else { "knots" }, c)
}

/// One PD line per shadow, named `K<c>_<i>` or `L<c>_<i>` in canonical order.
pub fn render_census(links: bool, c: usize, shadows: &[Shadow]) -> String {
    let prefix = if links { 'L' } else { 'K' };
    let mut out = String::new();
    for (i, s) in shadows.iter().enumerate() {
        out.push_str(&codec::emit_pd_line(&format!("{prefix}{c}_{}", i + 1), s));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::fixtures::*;

    #[test]
    fn one_crossing() {
        let limits = Limits::default();
        let all = enumerate_knot_shadows(1, false, &limits).unwrap();
        assert_eq!(all.len(), 1);
        assert!(!all[0].is_reduced());
        assert!(enumerate_knot_shadows(1, true, &limits).unwrap().is_empty());
        assert_eq!(enumerate_link_shadows(1, &limits).unwrap().len(), 1);
    }

    #[test]
    fn trefoil_in_census() {
        let reduced = enumerate_knot_shadows(3, true, &Limits::default()).unwrap();
        let t = canonical(&trefoil());
        assert!(reduced.iter().any(|s| canonical(s) == t));
    }

    #[test]
    fn two_crossing_links() {
        let links = enumerate_link_shadows(2, &Limits::default()).unwrap();
        let codes: Vec<_> = links.iter().map(canonical).collect();
        assert!(codes.contains(&canonical(&hopf())));
        assert!(codes.contains(&canonical(&curl_curl())));
    }

    #[test]
    fn limits_enforced() {
        let limits = Limits { knots: 4, links: 3 };
        assert_eq!(
            enumerate_knot_shadows(5, true, &limits).unwrap_err(),
            Error::LimitExceeded { requested: 5, limit: 4 }
        );
        assert!(enumerate_link_shadows(4, &limits).is_err());
        assert!(link_bound_check(2, &limits).is_err());
        assert_eq!(enumerate_knot_shadows(0, true, &limits).unwrap_err(), Error::EmptyShadow);
    }

    #[test]
    fn census_file_round_trip() {
        let shadows = enumerate_knot_shadows(4, false, &Limits::default()).unwrap();
        let text = render_census(false, 4, &shadows);
        let back = codec::parse_pd(&text).unwrap();
        assert_eq!(back.len(), shadows.len());
        for ((_, b), s) in back.iter().zip(&shadows) {
            assert_eq!(canonical(b), canonical(s));
        }
        assert_eq!(census_file_name(false, 4), "knots_c4.pd");
    }
}
