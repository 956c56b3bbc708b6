//! Independent region sets and the maximal independent region number.
//!
//! Three routes compute `IR(P^c)`:
//!
//! * [`ir_base`]: exact branch-and-bound over the conflict graph of the
//!   regions that avoid the base crossing;
//! * [`solve_01_system`]: enumeration of every 0/1 vector `x` with `Mx` a
//!   0/1 vector, over the region choice matrix `M`;
//! * [`emit_dimacs`]: a CNF that is satisfiable exactly when an independent
//!   set of a requested size exists.
//!
//! Region and crossing sets are `u128` bitmasks, so shadows are limited to
//! 126 crossings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::shadow::Shadow;
use crate::warping::{
    alternating_assignments, passes, warping_degree_shadow, warping_profile, warping_set, Direction,
    OrientedBasedDiagram,
};
use crate::{Error, Result};

const MAX_BITS: usize = 128;

/// Crossing-by-region 0/1 incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionChoiceMatrix {
    entries: Vec<Vec<u8>>,
    cols: usize,
}

impl RegionChoiceMatrix {
    /// Builds a matrix from raw rows (one per crossing).
    pub fn from_rows(entries: Vec<Vec<u8>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if entries.is_empty() || cols == 0 {
            return Err(Error::EmptyShadow);
        }
        if entries.len() > MAX_BITS || cols > MAX_BITS {
            return Err(Error::TooLarge { what: "region choice matrix", limit: MAX_BITS });
        }
        if entries.iter().any(|r| r.len() != cols || r.iter().any(|&v| v > 1)) {
            return Err(Error::MalformedRotation("matrix rows must be equal-length 0/1 vectors".into()));
        }
        Ok(RegionChoiceMatrix { entries, cols })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<u8>] {
        &self.entries
    }

    /// Columns with a 1 in row `i`.
    pub fn row_mask(&self, i: usize) -> u128 {
        self.entries[i].iter().enumerate().fold(0, |m, (j, &v)| m | ((v as u128) << j))
    }

    /// Rows with a 1 in column `j`.
    pub fn col_mask(&self, j: usize) -> u128 {
        self.entries.iter().enumerate().fold(0, |m, (i, r)| m | ((r[j] as u128) << i))
    }

    /// `Mx`, or `None` if some entry exceeds 1.
    pub fn apply(&self, x: u128) -> Option<u128> {
        let mut b = 0u128;
        for j in ones(x) {
            let col = self.col_mask(j);
            if b & col != 0 {
                return None;
            }
            b |= col;
        }
        Some(b)
    }

    /// A row correspondence under which `self` and `other` have the same
    /// columns up to order: row `i` of `self` matches row `perm[i]` of
    /// `other`. Least such `perm` in lexicographic order.
    pub fn row_correspondence(&self, other: &RegionChoiceMatrix) -> Option<Vec<usize>> {
        fn search(a: &RegionChoiceMatrix, b: &RegionChoiceMatrix, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
            let i = perm.len();
            if i == a.rows() {
                let columns = |m: &RegionChoiceMatrix, order: &dyn Fn(usize) -> usize| {
                    let mut cols: Vec<Vec<u8>> =
                        (0..m.cols()).map(|j| (0..m.rows()).map(|r| m.get(order(r), j)).collect()).collect();
                    cols.sort_unstable();
                    cols
                };
                return columns(a, &|r| r) == columns(b, &|r| perm[r]);
            }
            let weight = |m: &RegionChoiceMatrix, r: usize| m.entries[r].iter().filter(|&&v| v == 1).count();
            for k in 0..b.rows() {
                if used[k] || weight(a, i) != weight(b, k) {
                    continue;
                }
                used[k] = true;
                perm.push(k);
                if search(a, b, perm, used) {
                    return true;
                }
                perm.pop();
                used[k] = false;
            }
            false
        }
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return None;
        }
        let mut perm = Vec::with_capacity(self.rows());
        search(self, other, &mut perm, &mut vec![false; other.rows()]).then_some(perm)
    }
}

/// Region choice matrix of a connected shadow: entry `(i, j)` is 1 exactly
/// when crossing `i` lies on the boundary of region `j`.
pub fn region_choice_matrix(s: &Shadow) -> Result<RegionChoiceMatrix> {
    if !s.is_connected() {
        return Err(Error::NotConnected);
    }
    let c = s.crossing_count();
    let mut entries = vec![vec![0u8; s.regions().len()]; c];
    for r in s.regions() {
        for &x in &r.crossings {
            entries[x][r.id] = 1;
        }
    }
    RegionChoiceMatrix::from_rows(entries)
}

/// A choice of regions `x` and the induced crossing vector `b = Mx`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionVector {
    pub x: Vec<u8>,
    pub b: Vec<u8>,
}

impl SelectionVector {
    fn new(x: u128, b: u128, cols: usize, rows: usize) -> Self {
        SelectionVector {
            x: (0..cols).map(|j| (x >> j & 1) as u8).collect(),
            b: (0..rows).map(|i| (b >> i & 1) as u8).collect(),
        }
    }

    /// Indices of the chosen regions.
    pub fn regions(&self) -> Vec<usize> {
        self.x.iter().enumerate().filter_map(|(j, &v)| (v == 1).then_some(j)).collect()
    }

    pub fn size(&self) -> usize {
        self.x.iter().filter(|&&v| v == 1).count()
    }
}

/// Every nonempty independent region set avoiding `base`, ascending by the
/// binary value of `x` (region 0 is the least significant bit).
pub fn independent_sets_for_base(m: &RegionChoiceMatrix, base: usize) -> Result<Vec<SelectionVector>> {
    if base >= m.rows() {
        return Err(Error::CrossingOutOfRange { index: base, crossings: m.rows() });
    }
    let eligible = !m.row_mask(base) & low_bits(m.cols());
    let mut out = Vec::new();
    // submasks of `eligible` in increasing order
    let mut x: u128 = 0;
    loop {
        x = x.wrapping_sub(eligible) & eligible;
        if x == 0 {
            break;
        }
        if let Some(b) = m.apply(x) {
            out.push(SelectionVector::new(x, b, m.cols(), m.rows()));
        }
    }
    Ok(out)
}

/// All solutions `x ∈ {0,1}^cols` of `Mx = b` with `b ∈ {0,1}^rows`, except
/// `b = 0` (nothing chosen) and `b = 1` (no crossing left for a base).
/// Enumerates `x` directly, so it is meant as an oracle for small matrices.
pub fn solve_01_system(m: &RegionChoiceMatrix) -> Result<Vec<SelectionVector>> {
    const MAX_COLS: usize = 26;
    if m.cols() > MAX_COLS {
        return Err(Error::TooLarge { what: "0/1 system column count", limit: MAX_COLS });
    }
    let full = low_bits(m.rows());
    let cols: Vec<u128> = (0..m.cols()).map(|j| m.col_mask(j)).collect();
    let mut out = Vec::new();
    for x in 1u128..(1u128 << m.cols()) {
        let mut b = 0u128;
        let mut ok = true;
        for j in ones(x) {
            if b & cols[j] != 0 {
                ok = false;
                break;
            }
            b |= cols[j];
        }
        if ok && b != 0 && b != full {
            out.push(SelectionVector::new(x, b, m.cols(), m.rows()));
        }
    }
    Ok(out)
}

/// Crossing mask of every region.
pub(crate) fn region_masks(s: &Shadow) -> Result<Vec<u128>> {
    if s.crossing_count() > MAX_BITS || s.regions().len() > MAX_BITS {
        return Err(Error::TooLarge { what: "crossing count", limit: MAX_BITS - 2 });
    }
    Ok(s.regions().iter().map(|r| r.crossings.iter().fold(0u128, |m, &x| m | 1 << x)).collect())
}

/// Maximum independent set of the regions whose crossing masks are given,
/// restricted to `candidates`. Returns the chosen region indices.
pub(crate) fn max_independent(masks: &[u128], candidates: u128) -> Vec<usize> {
    let n = masks.len();
    let adj: Vec<u128> =
        (0..n).map(|i| (0..n).filter(|&j| j != i && masks[i] & masks[j] != 0).fold(0u128, |m, j| m | 1 << j)).collect();
    ones(maximum_independent_set(&adj, candidates)).collect()
}

/// Exact maximum independent set by branch and bound. `adj[v]` is the
/// neighbour mask of `v`; the search stays inside `candidates`.
pub fn maximum_independent_set(adj: &[u128], candidates: u128) -> u128 {
    let mut best = 0u128;
    branch(adj, 0, candidates, &mut best);
    best
}

fn branch(adj: &[u128], current: u128, mut cand: u128, best: &mut u128) {
    let mut current = current;
    // vertices with no neighbour left among the candidates are always taken
    loop {
        let free: u128 = ones(cand).filter(|&v| adj[v] & cand == 0).fold(0, |m, v| m | 1 << v);
        if free == 0 {
            break;
        }
        current |= free;
        cand &= !free;
    }
    if cand == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    if current.count_ones() + clique_cover(adj, cand) <= best.count_ones() {
        return;
    }
    let v = ones(cand).max_by_key(|&v| ((adj[v] & cand).count_ones(), std::cmp::Reverse(v))).unwrap();
    branch(adj, current | 1 << v, cand & !adj[v] & !(1 << v), best);
    branch(adj, current, cand & !(1 << v), best);
}

/// Size of a greedy clique cover of `cand`, an upper bound on its
/// independence number.
fn clique_cover(adj: &[u128], mut cand: u128) -> u32 {
    let mut cliques = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let mut clique = 1u128 << v;
        let mut grow = cand & adj[v];
        while grow != 0 {
            let u = grow.trailing_zeros() as usize;
            clique |= 1 << u;
            grow &= adj[u];
        }
        cand &= !clique;
        cliques += 1;
    }
    cliques
}

/// `IR(P^base)` with a witness region set (ascending ids).
pub fn ir_base(s: &Shadow, base: usize) -> Result<(usize, Vec<usize>)> {
    if !s.is_connected() {
        return Err(Error::NotConnected);
    }
    s.check_crossing(base)?;
    let masks = region_masks(s)?;
    let eligible =
        masks.iter().enumerate().filter(|(_, &m)| m >> base & 1 == 0).fold(0u128, |acc, (j, _)| acc | 1 << j);
    let set = max_independent(&masks, eligible);
    Ok((set.len(), set))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrReport {
    pub ir: usize,
    pub base_crossing: usize,
    pub region_set: Vec<usize>,
    /// `IR(P^x)` for every crossing `x`.
    pub per_crossing: Vec<usize>,
}

/// `IR(P)`: the largest `IR(P^x)` over all base crossings, least crossing on
/// ties.
pub fn ir(s: &Shadow) -> Result<IrReport> {
    if !s.is_knot() {
        return Err(Error::NotKnotShadow { components: s.component_count() });
    }
    let per: Vec<(usize, Vec<usize>)> =
        (0..s.crossing_count()).into_par_iter().map(|x| ir_base(s, x)).collect::<Result<_>>()?;
    let mut best = 0;
    for (x, (v, _)) in per.iter().enumerate() {
        if *v > per[best].0 {
            best = x;
        }
    }
    Ok(IrReport {
        ir: per[best].0,
        base_crossing: best,
        region_set: per[best].1.clone(),
        per_crossing: per.iter().map(|(v, _)| *v).collect(),
    })
}

/// DIMACS CNF that is satisfiable iff an independent region set avoiding
/// `base` with at least `k` regions exists.
///
/// Variables `1..=n` are the eligible regions in ascending id order. Every
/// pair of eligible regions sharing a crossing gets a binary exclusion
/// clause. The bound `≥ k` uses a sequential counter: register
/// `s(i, j) = n + (i - 1) * k + j` may only be true when at least `j` of the
/// first `i` region variables are true, and `s(n, k)` is asserted.
pub fn emit_dimacs(s: &Shadow, base: usize, k: usize) -> Result<String> {
    if !s.is_connected() {
        return Err(Error::NotConnected);
    }
    s.check_crossing(base)?;
    let masks = region_masks(s)?;
    let eligible: Vec<usize> = (0..masks.len()).filter(|&j| masks[j] >> base & 1 == 0).collect();
    let n = eligible.len();

    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut conflicts = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if masks[eligible[a]] & masks[eligible[b]] != 0 {
                conflicts.insert((a + 1, b + 1));
            }
        }
    }
    for &(a, b) in &conflicts {
        clauses.push(vec![-(a as i64), -(b as i64)]);
    }
    let mut vars = n;
    if k > n {
        // not enough eligible regions: force a contradiction
        vars += 1;
        let v = vars as i64;
        clauses.push(vec![v]);
        clauses.push(vec![-v]);
    } else if k > 0 {
        let reg = |i: usize, j: usize| (n + (i - 1) * k + j) as i64;
        vars += n * k;
        for i in 1..=n {
            let xi = i as i64;
            for j in 1..=k {
                // s(i,j) -> s(i-1,j) or x_i
                let mut c = vec![-reg(i, j), xi];
                if i > 1 {
                    c.push(reg(i - 1, j));
                }
                clauses.push(c);
                // s(i,j) -> s(i-1,j) or s(i-1,j-1)
                if j > 1 {
                    if i > 1 {
                        clauses.push(vec![-reg(i, j), reg(i - 1, j), reg(i - 1, j - 1)]);
                    } else {
                        clauses.push(vec![-reg(i, j)]);
                    }
                }
            }
        }
        clauses.push(vec![reg(n, k)]);
    }

    let mut out = String::new();
    writeln!(out, "c independent region set avoiding crossing {}, size >= {}", base + 1, k).unwrap();
    writeln!(out, "c regions and crossings are numbered from 1").unwrap();
    for (v, &j) in eligible.iter().enumerate() {
        writeln!(out, "c region {} -> var {}", j + 1, v + 1).unwrap();
    }
    if k > 0 && k <= n {
        writeln!(out, "c counter s(i,j) -> var {} + (i-1)*{} + j", n, k).unwrap();
    }
    writeln!(out, "p cnf {} {}", vars, clauses.len()).unwrap();
    for c in &clauses {
        for lit in c {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// The inequalities `IR ≤ d ≤ c - IR - 1`, `2 IR ≤ c - 1` and `IR ≥ 1`
/// evaluated on one knot shadow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub crossings: usize,
    pub reduced: bool,
    pub ir: usize,
    pub d: usize,
    /// `IR ≤ d`
    pub lower_ok: bool,
    /// `d ≤ c - IR - 1`
    pub upper_ok: bool,
    /// Both sides of the squeeze; not applicable to non-reduced shadows,
    /// though still evaluated into `lower_ok` / `upper_ok`.
    pub squeeze: Verdict,
    /// `2 IR ≤ c - 1`, reduced shadows only.
    pub ir_upper: Verdict,
    /// `IR ≥ 1`, any shadow with at least two crossings.
    pub ir_lower: Verdict,
}

impl BoundsReport {
    pub fn has_violation(&self) -> bool {
        [self.squeeze, self.ir_upper, self.ir_lower].contains(&Verdict::Fail)
    }
}

fn verdict(applicable: bool, holds: bool) -> Verdict {
    match (applicable, holds) {
        (false, _) => Verdict::NotApplicable,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    }
}

pub fn verify_bounds(s: &Shadow) -> Result<BoundsReport> {
    let c = s.crossing_count();
    let ir = ir(s)?.ir;
    let d = warping_degree_shadow(s)?.d;
    let reduced = s.is_reduced();
    let lower_ok = ir <= d;
    let upper_ok = d + ir < c;
    Ok(BoundsReport {
        crossings: c,
        reduced,
        ir,
        d,
        lower_ok,
        upper_ok,
        squeeze: verdict(reduced, lower_ok && upper_ok),
        ir_upper: verdict(reduced, 2 * ir < c),
        ir_lower: verdict(c >= 2, ir >= 1),
    })
}

/// Counts from checking, on every alternating oriented diagram of a knot
/// shadow and every base just before an over-pass at crossing `x`, that
/// each region avoiding `x` has both a warping and a non-warping boundary
/// crossing, and that `n ≤ d(D) ≤ c - n - 1` for the largest independent
/// set of `n` regions avoiding `x`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OverPassAudit {
    pub bases: usize,
    pub regions_checked: usize,
    pub region_violations: usize,
    pub bound_violations: usize,
    /// Bases whose `d(D_b)` differs from `d(D)`.
    pub base_violations: usize,
}

pub fn over_pass_audit(s: &Shadow) -> Result<OverPassAudit> {
    let diagrams = alternating_assignments(s)?;
    let passes = passes(s);
    let n_pass = passes.len();
    let c = s.crossing_count();
    let masks = region_masks(s)?;
    let best: Vec<usize> = (0..c).map(|x| ir_base(s, x).map(|r| r.0)).collect::<Result<_>>()?;
    let mut audit = OverPassAudit::default();
    for diagram in &diagrams {
        for direction in Direction::BOTH {
            let profile = warping_profile(diagram, direction);
            let d = profile.iter().copied().min().unwrap_or(0);
            for e in 0..n_pass {
                let first = match direction {
                    Direction::Forward => passes[(e + 1) % n_pass],
                    Direction::Backward => passes[e],
                };
                if !diagram.is_over(first) {
                    continue;
                }
                let x = first.crossing();
                audit.bases += 1;
                let obd = OrientedBasedDiagram::new(diagram.clone(), direction, e)?;
                let warping = warping_set(&obd).iter().fold(0u128, |m, &w| m | 1 << w);
                if profile[e] != d || warping.count_ones() as usize != d {
                    audit.base_violations += 1;
                }
                for &m in masks.iter().filter(|&&m| m >> x & 1 == 0) {
                    audit.regions_checked += 1;
                    if m & warping == 0 || m & !warping == 0 {
                        audit.region_violations += 1;
                    }
                }
                let n = best[x];
                if n > d || d + n + 1 > c {
                    audit.bound_violations += 1;
                }
            }
        }
    }
    Ok(audit)
}

pub(crate) fn low_bits(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Indices of set bits, ascending.
pub(crate) fn ones(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::shadow::fixtures::*;

    /// The 5 x 7 matrix printed with the worked example.
    pub fn worked_example_matrix() -> RegionChoiceMatrix {
        let rows = ["1110001", "1111000", "1001101", "0001111", "0011011"];
        RegionChoiceMatrix::from_rows(rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect()).unwrap()
    }

    fn brute_mis(masks: &[u128], eligible: u128) -> usize {
        let n = masks.len();
        let mut best = 0;
        for sub in 0u32..(1 << n) {
            let sub = sub as u128;
            if sub & !eligible != 0 {
                continue;
            }
            let idx: Vec<usize> = ones(sub).collect();
            let ok = idx.iter().enumerate().all(|(a, &i)| idx[a + 1..].iter().all(|&j| masks[i] & masks[j] == 0));
            if ok {
                best = best.max(idx.len());
            }
        }
        best
    }

    #[test]
    fn worked_example_sets_for_third_crossing() {
        let m = worked_example_matrix();
        let sets: Vec<Vec<usize>> =
            independent_sets_for_base(&m, 2).unwrap().iter().map(SelectionVector::regions).collect();
        // {R2}, {R3}, {R6}, {R2, R6} with 0-based columns
        assert_eq!(sets, vec![vec![1], vec![2], vec![5], vec![1, 5]]);
    }

    #[test]
    fn worked_example_system_restricted_to_third_row() {
        let m = worked_example_matrix();
        let from_system: Vec<Vec<usize>> =
            solve_01_system(&m).unwrap().iter().filter(|s| s.b[2] == 0).map(SelectionVector::regions).collect();
        let direct: Vec<Vec<usize>> =
            independent_sets_for_base(&m, 2).unwrap().iter().map(SelectionVector::regions).collect();
        assert_eq!(from_system, direct);
    }

    #[test]
    fn system_excludes_trivial_right_hand_sides() {
        let m = worked_example_matrix();
        for s in solve_01_system(&m).unwrap() {
            assert!(s.b.contains(&0) && s.b.contains(&1));
        }
    }

    #[test]
    fn trefoil_matrix_and_sets() {
        let t = trefoil();
        let m = region_choice_matrix(&t).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 5));
        for i in 0..3 {
            assert_eq!(m.row_mask(i).count_ones(), 4);
            let sets = independent_sets_for_base(&m, i).unwrap();
            assert_eq!(sets.len(), 1);
            assert_eq!(sets[0].size(), 1);
        }
    }

    #[test]
    fn curl_curl_matrix_has_short_rows() {
        let m = region_choice_matrix(&curl_curl()).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        for i in 0..2 {
            assert_eq!(m.row_mask(i).count_ones(), 3);
        }
    }

    #[test]
    fn ir_values() {
        assert_eq!(ir(&trefoil()).unwrap().ir, 1);
        let cc = ir(&curl_curl()).unwrap();
        assert_eq!(cc.ir, 1);
        assert_eq!(ir(&figure_eight_curve()).unwrap().ir, 0);
        assert!(matches!(ir(&hopf()), Err(Error::NotKnotShadow { .. })));
        assert!(matches!(ir_base(&trefoil(), 3), Err(Error::CrossingOutOfRange { .. })));
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        // random-ish conflict masks over 12 regions and 10 crossings
        let mut seed = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            let masks: Vec<u128> = (0..12)
                .map(|_| {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    (seed & 0x3ff) as u128
                })
                .collect();
            let eligible = low_bits(12);
            assert_eq!(max_independent(&masks, eligible).len(), brute_mis(&masks, eligible));
        }
    }

    #[test]
    fn bounds_report() {
        let r = verify_bounds(&trefoil()).unwrap();
        assert_eq!((r.ir, r.d, r.squeeze), (1, 1, Verdict::Pass));
        let r = verify_bounds(&curl_curl()).unwrap();
        assert_eq!((r.ir, r.d), (1, 0));
        assert!(!r.lower_ok);
        assert_eq!(r.squeeze, Verdict::NotApplicable);
        assert!(!r.has_violation());
    }

    #[test]
    fn dimacs_header() {
        let cnf = emit_dimacs(&trefoil(), 0, 1).unwrap();
        assert!(cnf.lines().any(|l| l.starts_with("p cnf ")));
        assert_eq!(cnf.lines().filter(|l| l.starts_with("c region ")).count(), 1);
    }
}
