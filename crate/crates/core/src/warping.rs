//! Alternating diagrams over a knot shadow and their warping degrees.
//!
//! Passes are indexed along the strand walk returned by
//! [`Shadow::strands`]: pass `p` is the `p`-th time the walk goes through a
//! crossing. Base points sit on edges, and edge `e` joins pass `e` to pass
//! `e + 1` (mod `2c`). Travelling forward from edge `e` meets pass `e + 1`
//! first; travelling backward meets pass `e` first.

use serde::Serialize;

use crate::shadow::{Dart, Shadow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Backward];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A shadow with crossing information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram<'a> {
    shadow: &'a Shadow,
    /// Per crossing: `0` when the strand through slots 0/2 is over,
    /// `1` when the strand through slots 1/3 is.
    over_axis: Vec<u8>,
}

impl<'a> Diagram<'a> {
    pub fn new(shadow: &'a Shadow, over_axis: Vec<u8>) -> Result<Self> {
        if !shadow.is_knot() {
            return Err(Error::NotKnotShadow { components: shadow.component_count() });
        }
        if over_axis.len() != shadow.crossing_count() || over_axis.iter().any(|&a| a > 1) {
            return Err(Error::MalformedRotation("over_axis needs one 0/1 entry per crossing".into()));
        }
        Ok(Diagram { shadow, over_axis })
    }

    pub fn shadow(&self) -> &'a Shadow {
        self.shadow
    }

    pub fn over_axis(&self) -> &[u8] {
        &self.over_axis
    }

    /// Whether entering through `d` passes over.
    #[inline]
    pub fn is_over(&self, d: Dart) -> bool {
        (d.slot() & 1) as u8 == self.over_axis[d.crossing()]
    }

    /// The diagram with every crossing switched.
    pub fn mirror(&self) -> Diagram<'a> {
        Diagram { shadow: self.shadow, over_axis: self.over_axis.iter().map(|a| a ^ 1).collect() }
    }

    /// Over and under alternate along the whole strand.
    pub fn is_alternating(&self) -> bool {
        let passes = passes(self.shadow);
        let n = passes.len();
        (0..n).all(|p| self.is_over(passes[p]) != self.is_over(passes[(p + 1) % n]))
    }
}

/// Entering dart of every pass along the knot's strand walk.
pub fn passes(s: &Shadow) -> Vec<Dart> {
    s.strands()[0].iter().step_by(2).copied().collect()
}

/// The two alternating diagrams of a knot shadow; entry `a` puts pass `p`
/// over exactly when `p % 2 == a`.
pub fn alternating_assignments(s: &Shadow) -> Result<[Diagram<'_>; 2]> {
    if !s.is_knot() {
        return Err(Error::NotKnotShadow { components: s.component_count() });
    }
    let passes = passes(s);
    let build = |a: usize| -> Result<Diagram<'_>> {
        let mut axis = vec![u8::MAX; s.crossing_count()];
        for (p, d) in passes.iter().enumerate() {
            let x = d.crossing();
            let own = (d.slot() & 1) as u8;
            let want = if p % 2 == a { own } else { own ^ 1 };
            if axis[x] == u8::MAX {
                axis[x] = want;
            } else if axis[x] != want {
                return Err(Error::AlternationImpossible(x));
            }
        }
        let diagram = Diagram { shadow: s, over_axis: axis };
        debug_assert!(diagram.is_alternating());
        Ok(diagram)
    };
    Ok([build(0)?, build(1)?])
}

/// A diagram together with an orientation and a base edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedBasedDiagram<'a> {
    pub diagram: Diagram<'a>,
    pub direction: Direction,
    pub base_edge: usize,
}

impl<'a> OrientedBasedDiagram<'a> {
    pub fn new(diagram: Diagram<'a>, direction: Direction, base_edge: usize) -> Result<Self> {
        let edges = 2 * diagram.shadow.crossing_count();
        if base_edge >= edges {
            return Err(Error::CrossingOutOfRange { index: base_edge, crossings: edges / 2 });
        }
        Ok(OrientedBasedDiagram { diagram, direction, base_edge })
    }
}

/// Pass indices in travel order from the base.
fn travel_order(n: usize, direction: Direction, base_edge: usize) -> impl Iterator<Item = usize> {
    (0..n).map(move |i| match direction {
        Direction::Forward => (base_edge + 1 + i) % n,
        Direction::Backward => (base_edge + n - i) % n,
    })
}

fn warping_flags(d: &Diagram<'_>, passes: &[Dart], direction: Direction, base_edge: usize) -> Vec<bool> {
    let c = d.shadow.crossing_count();
    let mut met = vec![false; c];
    let mut warping = vec![false; c];
    for p in travel_order(passes.len(), direction, base_edge) {
        let dart = passes[p];
        let x = dart.crossing();
        if !met[x] {
            met[x] = true;
            warping[x] = !d.is_over(dart);
        }
    }
    warping
}

/// Crossings first met as an under-crossing when travelling from the base.
pub fn warping_set(obd: &OrientedBasedDiagram<'_>) -> Vec<usize> {
    let passes = passes(obd.diagram.shadow);
    warping_flags(&obd.diagram, &passes, obd.direction, obd.base_edge)
        .iter()
        .enumerate()
        .filter_map(|(x, &w)| w.then_some(x))
        .collect()
}

/// `d(D_b)` for every base edge, in edge order.
///
/// Moving the base forward across one pass turns that pass from first-met
/// into last-met for the forward orientation (its crossing flips from
/// warping to not, or back), and the reverse for the backward orientation.
pub fn warping_profile(d: &Diagram<'_>, direction: Direction) -> Vec<usize> {
    let passes = passes(d.shadow);
    let n = passes.len();
    let start = warping_flags(d, &passes, direction, 0).iter().filter(|&&w| w).count() as i64;
    let mut out = Vec::with_capacity(n);
    let mut cur = start;
    out.push(cur as usize);
    // pass e sits between edge e-1 and edge e
    for &pass in &passes[1..] {
        let over = d.is_over(pass);
        cur += match (direction, over) {
            (Direction::Forward, true) | (Direction::Backward, false) => 1,
            (Direction::Forward, false) | (Direction::Backward, true) => -1,
        };
        out.push(cur as usize);
    }
    out
}

/// `d(D)` for one orientation: the minimum over base edges, with the least
/// achieving edge.
pub fn warping_degree_diagram(d: &Diagram<'_>, direction: Direction) -> (usize, usize) {
    let profile = warping_profile(d, direction);
    let mut best = (usize::MAX, 0);
    for (e, &v) in profile.iter().enumerate() {
        if v < best.0 {
            best = (v, e);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WarpWitness {
    /// Which alternating assignment (see [`alternating_assignments`]).
    pub assignment: usize,
    pub direction: Direction,
    pub base_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WarpReport {
    pub d: usize,
    pub witness: WarpWitness,
    /// `per_base[2 * assignment + direction][edge] = d(D_b)`.
    pub per_base: Vec<Vec<usize>>,
}

/// `d(P)`: minimum warping degree over both alternating diagrams, both
/// orientations and all base edges.
pub fn warping_degree_shadow(s: &Shadow) -> Result<WarpReport> {
    let diagrams = alternating_assignments(s)?;
    let mut per_base = Vec::with_capacity(4);
    let mut best: Option<(usize, WarpWitness)> = None;
    for (assignment, diagram) in diagrams.iter().enumerate() {
        for direction in Direction::BOTH {
            let profile = warping_profile(diagram, direction);
            for (base_edge, &v) in profile.iter().enumerate() {
                let w = WarpWitness { assignment, direction, base_edge };
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, w));
                }
            }
            per_base.push(profile);
        }
    }
    let (d, witness) = best.expect("a knot shadow has at least one base edge");
    Ok(WarpReport { d, witness, per_base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::fixtures::*;

    /// Dart-level re-traversal, independent of the pass table.
    fn slow_warping(d: &Diagram<'_>, start_in: Dart) -> usize {
        let s = d.shadow();
        let c = s.crossing_count();
        let mut met = vec![false; c];
        let mut count = 0;
        let mut dart = start_in;
        for _ in 0..2 * c {
            let x = dart.crossing();
            if !met[x] {
                met[x] = true;
                if !d.is_over(dart) {
                    count += 1;
                }
            }
            dart = s.pair(dart.opposite());
        }
        count
    }

    fn brute_force_d(s: &Shadow) -> usize {
        let diagrams = alternating_assignments(s).unwrap();
        let mut best = usize::MAX;
        for diagram in &diagrams {
            for d0 in 0..s.dart_count() {
                // every dart is the entry of a pass in one of the two directions
                best = best.min(slow_warping(diagram, Dart(d0)));
            }
        }
        best
    }

    #[test]
    fn two_mirror_assignments() {
        let t = trefoil();
        let [a, b] = alternating_assignments(&t).unwrap();
        assert!(a.is_alternating() && b.is_alternating());
        assert_eq!(a.mirror(), b);
        let cc = curl_curl();
        let [a, b] = alternating_assignments(&cc).unwrap();
        assert!(a.is_alternating() && b.is_alternating());
    }

    #[test]
    fn trefoil_warping_degree() {
        let t = trefoil();
        let r = warping_degree_shadow(&t).unwrap();
        assert_eq!(r.d, 1);
        assert_eq!(r.per_base.len(), 4);
        assert!(r.per_base.iter().all(|row| row.len() == 6));
        assert_eq!(r.d, brute_force_d(&t));
        for diagram in alternating_assignments(&t).unwrap() {
            for dir in Direction::BOTH {
                assert_eq!(warping_degree_diagram(&diagram, dir).0, 1);
            }
        }
    }

    #[test]
    fn single_warping_crossing_before_over_pass() {
        let t = trefoil();
        let [a, _] = alternating_assignments(&t).unwrap();
        let ps = passes(&t);
        // pass 0 is over in assignment 0; edge 2c-1 precedes it
        assert!(a.is_over(ps[0]));
        let obd = OrientedBasedDiagram::new(a, Direction::Forward, 5).unwrap();
        assert_eq!(warping_set(&obd).len(), 1);
    }

    #[test]
    fn curl_curl_is_monotone() {
        let cc = curl_curl();
        let r = warping_degree_shadow(&cc).unwrap();
        assert_eq!(r.d, 0);
        let [a, _] = alternating_assignments(&cc).unwrap();
        // passes read c0,c0,c1,c1 with roles O,U,O,U from edge 3
        let obd = OrientedBasedDiagram::new(a, Direction::Forward, 3).unwrap();
        assert!(warping_set(&obd).is_empty());
    }

    #[test]
    fn mirror_complements_count() {
        let t = trefoil();
        let [a, b] = alternating_assignments(&t).unwrap();
        for e in 0..6 {
            for dir in Direction::BOTH {
                let x = warping_set(&OrientedBasedDiagram::new(a.clone(), dir, e).unwrap()).len();
                let y = warping_set(&OrientedBasedDiagram::new(b.clone(), dir, e).unwrap()).len();
                assert_eq!(x + y, 3);
            }
        }
    }

    #[test]
    fn profile_matches_direct_count() {
        let t = trefoil();
        for diagram in alternating_assignments(&t).unwrap() {
            for dir in Direction::BOTH {
                let profile = warping_profile(&diagram, dir);
                for (e, &v) in profile.iter().enumerate() {
                    let obd = OrientedBasedDiagram::new(diagram.clone(), dir, e).unwrap();
                    assert_eq!(warping_set(&obd).len(), v);
                }
            }
        }
    }

    #[test]
    fn rejects_links() {
        assert!(matches!(warping_degree_shadow(&hopf()), Err(Error::NotKnotShadow { components: 2 })));
    }

    #[test]
    fn base_edge_range_checked() {
        let t = trefoil();
        let [a, _] = alternating_assignments(&t).unwrap();
        assert!(OrientedBasedDiagram::new(a, Direction::Forward, 6).is_err());
    }
}
