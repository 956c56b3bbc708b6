//! Text formats for shadows and canonical forms for isomorph rejection.
//!
//! PD lines look like `3_1: P[(1,4,2,5),(3,6,4,1),(5,2,6,3)]`. Each
//! quadruple lists the edge labels around one crossing counterclockwise;
//! entries 1&3 and 2&4 lie on the same strand. Over/under information is
//! not part of a shadow, so the starting entry of a quadruple is irrelevant.
//!
//! Gauss codes are whitespace-separated crossing labels in travel order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::shadow::{Dart, Shadow};
use crate::{Error, Result};

/// Parses one `name: P[...]` line. Returns the name and the shadow.
pub fn parse_pd_line(line: &str) -> Result<(String, Shadow)> {
    parse_pd_at(line, 1)
}

/// Parses a whole PD file. Blank lines and `#` comments are skipped; errors
/// carry 1-based line numbers.
pub fn parse_pd(text: &str) -> Result<Vec<(String, Shadow)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        out.push(parse_pd_at(line, i + 1)?);
    }
    Ok(out)
}

fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(i) => raw[..i].trim(),
        None => raw.trim(),
    }
}

fn parse_pd_at(line: &str, lineno: usize) -> Result<(String, Shadow)> {
    let syntax = |msg: &str| Error::Syntax { line: lineno, msg: msg.to_string() };
    let (name, body) = line.split_once(':').ok_or_else(|| syntax("missing ':' after name"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(syntax("empty name"));
    }
    let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = body.strip_prefix("P[").and_then(|b| b.strip_suffix(']')).ok_or_else(|| syntax("expected P[...]"))?;
    let mut quads: Vec<[i64; 4]> = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let r = rest.strip_prefix('(').ok_or_else(|| syntax("expected '('"))?;
        let close = r.find(')').ok_or_else(|| syntax("unclosed '('"))?;
        let fields: Vec<&str> = r[..close].split(',').collect();
        if fields.len() != 4 {
            return Err(syntax("quadruple must have four entries"));
        }
        let mut q = [0i64; 4];
        for (slot, f) in q.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| syntax(&format!("bad integer '{f}'")))?;
        }
        quads.push(q);
        rest = &r[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(syntax("trailing ','"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(syntax("expected ',' between quadruples"));
        }
    }
    if quads.is_empty() {
        return Err(Error::EmptyShadow);
    }
    let shadow = shadow_from_quads(&quads)?;
    Ok((name.to_string(), shadow))
}

/// Builds a shadow from PD quadruples of edge labels.
pub fn shadow_from_quads(quads: &[[i64; 4]]) -> Result<Shadow> {
    let mut by_label: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (x, q) in quads.iter().enumerate() {
        for (k, &label) in q.iter().enumerate() {
            by_label.entry(label).or_default().push(4 * x + k);
        }
    }
    let mut pair = vec![0; 4 * quads.len()];
    for (&label, darts) in &by_label {
        if darts.len() != 2 {
            return Err(Error::LabelMultiplicity { label, count: darts.len() });
        }
        pair[darts[0]] = darts[1];
        pair[darts[1]] = darts[0];
    }
    Shadow::from_pairing(pair)
}

/// Edge labels of `s` in PD order: edges are numbered 1.. along the strand
/// walks, and each quadruple starts at the dart where the walk first enters
/// that crossing.
pub fn pd_quads(s: &Shadow) -> Vec<[usize; 4]> {
    let mut label = vec![0usize; s.dart_count()];
    let mut first_in = vec![usize::MAX; s.crossing_count()];
    let mut next = 1;
    for walk in s.strands() {
        for (i, d) in walk.iter().enumerate() {
            if i % 2 == 0 {
                // entering dart: shares the label of the edge we arrived on
                if first_in[d.crossing()] == usize::MAX {
                    first_in[d.crossing()] = d.slot();
                }
            } else {
                label[d.0] = next;
                label[s.pair(*d).0] = next;
                next += 1;
            }
        }
    }
    (0..s.crossing_count())
        .map(|x| {
            let f = first_in[x];
            std::array::from_fn(|k| label[4 * x + (f + k) % 4])
        })
        .collect()
}

/// `P[(...),...]` body for `s`. Free loops have no PD representation and are
/// dropped.
pub fn emit_pd(s: &Shadow) -> String {
    let quads: Vec<String> = pd_quads(s).iter().map(|q| format!("({},{},{},{})", q[0], q[1], q[2], q[3])).collect();
    format!("P[{}]", quads.join(","))
}

pub fn emit_pd_line(name: &str, s: &Shadow) -> String {
    format!("{name}: {}", emit_pd(s))
}

/// Crossing labels along each strand, relabelled 1.. by first appearance.
/// Components are separated by ` | `.
pub fn emit_gauss(s: &Shadow) -> String {
    let mut relabel = vec![0usize; s.crossing_count()];
    let mut next = 1;
    let mut parts = Vec::new();
    for walk in s.strands() {
        let mut labels = Vec::new();
        for d in walk.iter().step_by(2) {
            let x = d.crossing();
            if relabel[x] == 0 {
                relabel[x] = next;
                next += 1;
            }
            labels.push(relabel[x].to_string());
        }
        parts.push(labels.join(" "));
    }
    parts.join(" | ")
}

/// An unsigned Gauss code: every label appears exactly twice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussCode {
    /// Labels renumbered `0..c` by first appearance.
    seq: Vec<usize>,
}

impl GaussCode {
    pub fn new(labels: &[i64]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyShadow);
        }
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for &l in labels {
            *counts.entry(l).or_default() += 1;
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &n)| n != 2) {
            return Err(Error::LabelMultiplicity { label, count });
        }
        let mut relabel = HashMap::new();
        let seq = labels
            .iter()
            .map(|l| {
                let next = relabel.len();
                *relabel.entry(*l).or_insert(next)
            })
            .collect();
        Ok(GaussCode { seq })
    }

    pub(crate) fn from_normalized(seq: Vec<usize>) -> Self {
        GaussCode { seq }
    }

    pub fn crossing_count(&self) -> usize {
        self.seq.len() / 2
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }

    /// Positions `(first, second)` of each crossing.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut occ = vec![(usize::MAX, usize::MAX); self.crossing_count()];
        for (i, &x) in self.seq.iter().enumerate() {
            if occ[x].0 == usize::MAX {
                occ[x].0 = i;
            } else {
                occ[x].1 = i;
            }
        }
        occ
    }

    /// Planarity necessary condition: an even number of symbols between the
    /// two occurrences of every label.
    pub fn satisfies_parity(&self) -> bool {
        self.occurrences().iter().all(|&(i, j)| (j - i) % 2 == 1)
    }

    /// Crossings whose chord interlaces no other chord.
    pub fn isolated_chords(&self) -> Vec<usize> {
        let occ = self.occurrences();
        (0..occ.len())
            .filter(|&x| {
                let (i, j) = occ[x];
                occ.iter().enumerate().all(|(y, &(a, b))| y == x || ((i < a && a < j) == (i < b && b < j)))
            })
            .collect()
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.seq.iter().map(|x| (x + 1).to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

pub fn parse_gauss(text: &str) -> Result<GaussCode> {
    let labels = text
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| Error::Syntax { line: 1, msg: format!("bad Gauss label '{t}'") }))
        .collect::<Result<Vec<_>>>()?;
    GaussCode::new(&labels)
}

/// Builds the rotation system for one choice of sides: the first pass of
/// every crossing runs slot 0 -> 2; bit `x` of `sides` sends the second pass
/// of crossing `x` through 3 -> 1 instead of 1 -> 3.
pub(crate) fn gauss_pairing(g: &GaussCode, sides: u64) -> Vec<usize> {
    let seq = &g.seq;
    let n = seq.len();
    let mut seen = vec![false; g.crossing_count()];
    let mut in_slot = vec![0usize; n];
    for (p, &x) in seq.iter().enumerate() {
        in_slot[p] = if !seen[x] {
            seen[x] = true;
            0
        } else if sides >> x & 1 == 1 {
            3
        } else {
            1
        };
    }
    let mut pair = vec![0usize; 2 * n];
    for p in 0..n {
        let q = (p + 1) % n;
        let out = 4 * seq[p] + (in_slot[p] ^ 2);
        let into = 4 * seq[q] + in_slot[q];
        pair[out] = into;
        pair[into] = out;
    }
    pair
}

/// All sphere realizations of `g` up to reflection, sorted by canonical
/// code. Empty when the code is not planar.
pub fn realize(g: &GaussCode) -> Vec<Shadow> {
    let c = g.crossing_count();
    if !g.satisfies_parity() || c > 40 {
        return Vec::new();
    }
    let mut found: BTreeMap<CanonicalCode, Shadow> = BTreeMap::new();
    // crossing 0 keeps side 0: flipping every side is the mirror image
    for sides in 0..(1u64 << (c - 1)) {
        let pair = gauss_pairing(g, sides << 1);
        if face_count(&pair) != c + 2 {
            continue;
        }
        if let Ok(s) = Shadow::from_pairing(pair) {
            found.entry(canonical(&s)).or_insert(s);
        }
    }
    found.into_values().collect()
}

pub(crate) fn face_count(pair: &[usize]) -> usize {
    let n = pair.len();
    let mut seen = vec![false; n];
    let mut faces = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = Dart(pair[d]).next_ccw().0;
        }
    }
    faces
}

/// Canonical form of a shadow up to relabeling, rotation and reflection of
/// the sphere. Equal codes mean isomorphic shadows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalCode(pub String);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Breadth-first relabeling code of the piece containing `root`.
///
/// Crossings are numbered in discovery order; a crossing is entered through
/// a dart that becomes its local position 0, and the remaining darts follow
/// counterclockwise (clockwise when `mirror`). Each dart contributes
/// `4 * crossing + position` of its partner.
fn bfs_code(pair: &[usize], root: usize, mirror: bool, best: Option<&[u32]>) -> Option<Vec<u32>> {
    let n = pair.len();
    let c = n / 4;
    let mut id = vec![u32::MAX; c];
    let mut entry = vec![0usize; c];
    let mut order = Vec::with_capacity(c);
    id[root / 4] = 0;
    entry[root / 4] = root & 3;
    order.push(root / 4);
    let local = |entry: usize, slot: usize| -> usize {
        if mirror {
            (entry + 4 - slot) & 3
        } else {
            (slot + 4 - entry) & 3
        }
    };
    let mut code = Vec::with_capacity(n);
    // strictly better than `best` once a smaller entry is seen
    let mut smaller = best.is_none();
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for k in 0..4 {
            let slot = if mirror { (entry[x] + 4 - k) & 3 } else { (entry[x] + k) & 3 };
            let partner = pair[4 * x + slot];
            let y = partner / 4;
            if id[y] == u32::MAX {
                id[y] = order.len() as u32;
                entry[y] = partner & 3;
                order.push(y);
            }
            let v = 4 * id[y] + local(entry[y], partner & 3) as u32;
            if !smaller {
                let b = best.unwrap()[code.len()];
                if v > b {
                    return None;
                }
                if v < b {
                    smaller = true;
                }
            }
            code.push(v);
        }
    }
    Some(code)
}

fn piece_code(pair: &[usize], darts: &[usize]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for &root in darts {
        for mirror in [false, true] {
            if let Some(code) = bfs_code(pair, root, mirror, best.as_deref()) {
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// Canonical code of `s`.
pub fn canonical(s: &Shadow) -> CanonicalCode {
    let pair = s.pairing();
    let c = s.crossing_count();
    // group darts by connected piece
    let mut piece = vec![usize::MAX; c];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for x0 in 0..c {
        if piece[x0] != usize::MAX {
            continue;
        }
        let p = pieces.len();
        let mut stack = vec![x0];
        piece[x0] = p;
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(x);
            for k in 0..4 {
                let y = pair[4 * x + k] / 4;
                if piece[y] == usize::MAX {
                    piece[y] = p;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        pieces.push(members.iter().flat_map(|&x| 4 * x..4 * x + 4).collect());
    }
    let mut codes: Vec<String> = pieces
        .iter()
        .map(|darts| {
            let code = piece_code(pair, darts);
            let body: Vec<String> = code.iter().map(u32::to_string).collect();
            format!("{}:{}", darts.len() / 4, body.join("."))
        })
        .collect();
    codes.sort();
    let mut text = codes.join("|");
    if s.free_loops() > 0 {
        text.push_str(&format!("+o{}", s.free_loops()));
    }
    CanonicalCode(text)
}

/// Rebuilds a shadow from its canonical code.
pub fn from_canonical(code: &CanonicalCode) -> Result<Shadow> {
    let bad = |msg: &str| Error::Syntax { line: 1, msg: msg.to_string() };
    let (body, loops) = match code.0.split_once("+o") {
        Some((b, l)) => (b, l.parse::<usize>().map_err(|_| bad("bad loop count"))?),
        None => (code.0.as_str(), 0),
    };
    let mut pair = Vec::new();
    for part in body.split('|') {
        let (_, entries) = part.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let offset = pair.len();
        for e in entries.split('.') {
            let v: usize = e.parse().map_err(|_| bad("bad entry"))?;
            pair.push(offset + v);
        }
    }
    Shadow::with_free_loops(pair, loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::fixtures::*;

    #[test]
    fn parses_trefoil_pd() {
        let (name, s) = parse_pd_line("3_1: P[(1,4,2,5),(3,6,4,1),(5,2,6,3)]").unwrap();
        assert_eq!(name, "3_1");
        assert_eq!(s.regions().len(), 5);
        assert!(s.is_knot());
    }

    #[test]
    fn label_multiplicity() {
        assert_eq!(parse_pd_line("bad: P[(1,1,1,2)]").unwrap_err(), Error::LabelMultiplicity { label: 1, count: 3 });
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let text = "# header\n3_1: P[(1,4,2,5),(3,6,4,1),(5,2,6,3)]\nbroken line\n";
        assert!(matches!(parse_pd(text), Err(Error::Syntax { line: 3, .. })));
        assert!(matches!(parse_pd_line("x: P[(1,2,3)]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_pd_line("x: P[(1,2,3,4),]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_pd_line("x: Q[(1,2,3,4)]"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn gauss_parity_violation_is_unrealizable() {
        let g = parse_gauss("1 2 1 2").unwrap();
        assert!(!g.satisfies_parity());
        assert!(realize(&g).is_empty());
    }

    #[test]
    fn gauss_trefoil_realizes() {
        let shadows = realize(&parse_gauss("1 2 3 1 2 3").unwrap());
        assert!(!shadows.is_empty());
        assert!(shadows.iter().all(|s| s.crossing_count() == 3 && s.regions().len() == 5));
        let t = canonical(&trefoil());
        assert!(shadows.iter().any(|s| canonical(s) == t));
    }

    #[test]
    fn gauss_double_curl_realizations() {
        let shadows = realize(&parse_gauss("1 1 2 2").unwrap());
        // loops on the same side or on opposite sides of the strand
        assert_eq!(shadows.len(), 2);
        for s in &shadows {
            assert_eq!(s.regions().len(), 4);
            assert!(!s.is_reduced());
        }
        assert!(shadows.iter().any(|s| canonical(s) == canonical(&curl_curl())));
    }

    #[test]
    fn gauss_multiplicity_error() {
        assert!(matches!(parse_gauss("1 2 2"), Err(Error::LabelMultiplicity { label: 1, count: 1 })));
        assert!(matches!(parse_gauss("1 x 1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_separates_and_identifies() {
        let t = trefoil();
        assert_ne!(canonical(&t), canonical(&curl_curl()));
        assert_ne!(canonical(&curl_curl()), canonical(&hopf()));
        // mirror: reverse every rotation
        let mirror: Vec<[usize; 4]> = (0..3).map(|x| [4 * x + 3, 4 * x + 2, 4 * x + 1, 4 * x]).collect();
        let m = Shadow::new(&mirror, t.pairing()).unwrap();
        assert_eq!(canonical(&m), canonical(&t));
    }

    #[test]
    fn canonical_round_trip() {
        for s in [trefoil(), curl_curl(), hopf(), figure_eight_curve()] {
            let code = canonical(&s);
            assert_eq!(canonical(&from_canonical(&code).unwrap()), code);
        }
    }

    #[test]
    fn emitters() {
        let t = trefoil();
        assert_eq!(emit_gauss(&t), "1 2 3 1 2 3");
        assert_eq!(emit_gauss(&curl_curl()), "1 1 2 2");
        assert_eq!(emit_gauss(&hopf()), "1 2 | 1 2");
        let line = emit_pd_line("t", &t);
        let (_, back) = parse_pd_line(&line).unwrap();
        assert_eq!(canonical(&back), canonical(&t));
        assert_eq!(emit_pd(&t), emit_pd(&t));
    }

    #[test]
    fn isolated_chords_of_curls() {
        assert_eq!(parse_gauss("1 1 2 2").unwrap().isolated_chords(), vec![0, 1]);
        assert!(parse_gauss("1 2 3 1 2 3").unwrap().isolated_chords().is_empty());
    }
}
