//! Combinatorial-map representation of knot and link projections.
//!
//! Crossing `x` owns the four darts `4x..4x+4`, listed counterclockwise, so
//! the rotation system is implicit in the numbering. A shadow is then fully
//! described by the edge pairing, a fixed-point-free involution on darts.
//! Going straight through a crossing maps slot `k` to slot `k + 2`.
//!
//! Faces are traced with the successor `next_ccw(pair(d))`. With that
//! convention the face owning dart `d` is the one occupying the corner
//! between slot `k - 1` and slot `k` at the dart's crossing, so every dart
//! names exactly one corner.

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// A half-edge at a crossing: `4 * crossing + slot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Dart(pub usize);

impl Dart {
    pub fn new(crossing: usize, slot: usize) -> Self {
        debug_assert!(slot < 4);
        Dart(4 * crossing + slot)
    }

    #[inline]
    pub fn crossing(self) -> usize {
        self.0 >> 2
    }

    #[inline]
    pub fn slot(self) -> usize {
        self.0 & 3
    }

    /// The dart across the crossing on the same strand.
    #[inline]
    pub fn opposite(self) -> Dart {
        Dart(self.0 ^ 2)
    }

    #[inline]
    pub fn next_ccw(self) -> Dart {
        Dart((self.0 & !3) | ((self.0 + 1) & 3))
    }

    #[inline]
    pub fn prev_ccw(self) -> Dart {
        Dart((self.0 & !3) | ((self.0 + 3) & 3))
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.crossing(), self.slot())
    }
}

/// A face of the shadow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub id: usize,
    /// Darts in face-tracing order; each names the corner just before it.
    pub boundary: Vec<Dart>,
    /// Distinct crossings on the boundary, ascending.
    pub crossings: Vec<usize>,
}

impl Region {
    /// Number of boundary edges (equivalently corners).
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn is_incident_to(&self, crossing: usize) -> bool {
        self.crossings.binary_search(&crossing).is_ok()
    }

    /// Regions are independent when they share no crossing.
    pub fn is_independent_of(&self, other: &Region) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.crossings.len() && j < other.crossings.len() {
            match self.crossings[i].cmp(&other.crossings[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// A knot or link projection on the sphere.
///
/// Immutable once built. Crossingless circles produced by smoothing are
/// kept only as a count in `free_loops`; they carry no darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shadow {
    pair: Vec<usize>,
    free_loops: usize,
    components: usize,
    pieces: usize,
    face_of: Vec<usize>,
    regions: Vec<Region>,
}

impl Shadow {
    /// Builds a shadow from explicit per-crossing counterclockwise dart
    /// quadruples and an edge pairing over arbitrary dart ids `0..4c`.
    ///
    /// Darts are renumbered so that `rotation[x][k]` becomes `4x + k`.
    pub fn new(rotation: &[[usize; 4]], pairing: &[usize]) -> Result<Self> {
        let n = 4 * rotation.len();
        if rotation.is_empty() {
            return Err(Error::EmptyShadow);
        }
        if pairing.len() != n {
            return Err(Error::MalformedRotation(format!(
                "{} crossings need {} paired darts, got {}",
                rotation.len(),
                n,
                pairing.len()
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (x, quad) in rotation.iter().enumerate() {
            for (k, &d) in quad.iter().enumerate() {
                if d >= n {
                    return Err(Error::MalformedRotation(format!("dart id {d} out of range")));
                }
                if position[d] != usize::MAX {
                    return Err(Error::MalformedRotation(format!("dart {d} listed twice")));
                }
                position[d] = 4 * x + k;
            }
        }
        let mut pair = vec![0; n];
        for d in 0..n {
            let e = pairing[d];
            if e >= n {
                return Err(Error::NonInvolutivePairing(d));
            }
            pair[position[d]] = position[e];
        }
        Self::from_pairing(pair)
    }

    /// Builds a shadow whose darts already follow the `4x + slot` numbering.
    pub fn from_pairing(pair: Vec<usize>) -> Result<Self> {
        Self::with_free_loops(pair, 0)
    }

    pub(crate) fn with_free_loops(pair: Vec<usize>, free_loops: usize) -> Result<Self> {
        let n = pair.len();
        if n == 0 {
            return Err(Error::EmptyShadow);
        }
        if !n.is_multiple_of(4) {
            return Err(Error::MalformedRotation(format!("{n} darts is not a multiple of 4")));
        }
        for (d, &e) in pair.iter().enumerate() {
            if e >= n || e == d || pair[e] != d {
                return Err(Error::NonInvolutivePairing(d));
            }
        }
        let c = n / 4;
        let pieces = count_pieces(&pair);
        let components = count_strands(&pair) + free_loops;
        let (face_of, regions) = trace_faces(&pair);
        // Each connected piece is a sphere: V - E + F = 2 with E = 2V.
        let expected = c + 2 * pieces;
        if regions.len() != expected {
            return Err(Error::NotSphereEmbeddable { faces: regions.len(), expected });
        }
        Ok(Shadow { pair, free_loops, components, pieces, face_of, regions })
    }

    pub fn crossing_count(&self) -> usize {
        self.pair.len() / 4
    }

    pub fn dart_count(&self) -> usize {
        self.pair.len()
    }

    /// Number of closed strands, crossingless circles included.
    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Connected pieces of the underlying 4-valent graph (free loops excluded).
    pub fn piece_count(&self) -> usize {
        self.pieces
    }

    pub fn is_connected(&self) -> bool {
        self.pieces == 1 && self.free_loops == 0
    }

    /// Connected, single-component: a knot projection.
    pub fn is_knot(&self) -> bool {
        self.is_connected() && self.components == 1
    }

    #[inline]
    pub fn pair(&self, d: Dart) -> Dart {
        Dart(self.pair[d.0])
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pair
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Region owning the corner just before `d`.
    #[inline]
    pub fn region_of(&self, d: Dart) -> usize {
        self.face_of[d.0]
    }

    pub fn check_crossing(&self, x: usize) -> Result<()> {
        if x < self.crossing_count() {
            Ok(())
        } else {
            Err(Error::CrossingOutOfRange { index: x, crossings: self.crossing_count() })
        }
    }

    /// Regions at the four corners of `x`, counterclockwise; entry `k` is the
    /// corner between slots `k - 1` and `k`.
    pub fn quadrants(&self, x: usize) -> Result<[usize; 4]> {
        self.check_crossing(x)?;
        Ok(self.quadrants_unchecked(x))
    }

    pub(crate) fn quadrants_unchecked(&self, x: usize) -> [usize; 4] {
        let b = 4 * x;
        [self.face_of[b], self.face_of[b + 1], self.face_of[b + 2], self.face_of[b + 3]]
    }

    /// A crossing is nugatory when one region fills two opposite corners.
    pub fn is_nugatory(&self, x: usize) -> bool {
        let q = self.quadrants_unchecked(x);
        q[0] == q[2] || q[1] == q[3]
    }

    pub fn nugatory_crossings(&self) -> Vec<usize> {
        (0..self.crossing_count()).filter(|&x| self.is_nugatory(x)).collect()
    }

    pub fn is_reduced(&self) -> bool {
        (0..self.crossing_count()).all(|x| !self.is_nugatory(x))
    }

    /// Closed strand walks. Each walk lists darts as
    /// `in, out, in, out, ...`, starting from the least unvisited dart, which
    /// is entered.
    pub fn strands(&self) -> Vec<Vec<Dart>> {
        let n = self.pair.len();
        let mut seen = vec![false; n];
        let mut walks = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                let out = d ^ 2;
                seen[d] = true;
                seen[out] = true;
                walk.push(Dart(d));
                walk.push(Dart(out));
                d = self.pair[out];
                if d == start {
                    break;
                }
            }
            walks.push(walk);
        }
        walks
    }

    /// Crossing sequence of the single strand of a knot shadow.
    pub fn crossing_sequence(&self) -> Result<Vec<usize>> {
        if !self.is_knot() {
            return Err(Error::NotKnotShadow { components: self.components });
        }
        Ok(self.strands()[0].iter().step_by(2).map(|d| d.crossing()).collect())
    }
}

fn count_strands(pair: &[usize]) -> usize {
    let mut seen = vec![false; pair.len()];
    let mut strands = 0;
    for start in 0..pair.len() {
        if seen[start] {
            continue;
        }
        strands += 1;
        let mut d = start;
        loop {
            seen[d] = true;
            seen[d ^ 2] = true;
            d = pair[d ^ 2];
            if d == start {
                break;
            }
        }
    }
    strands
}

fn count_pieces(pair: &[usize]) -> usize {
    let c = pair.len() / 4;
    let mut parent: Vec<usize> = (0..c).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut pieces = c;
    for (d, &e) in pair.iter().enumerate() {
        let (a, b) = (find(&mut parent, d / 4), find(&mut parent, e / 4));
        if a != b {
            parent[a] = b;
            pieces -= 1;
        }
    }
    pieces
}

fn trace_faces(pair: &[usize]) -> (Vec<usize>, Vec<Region>) {
    let n = pair.len();
    let mut face_of = vec![usize::MAX; n];
    let mut regions = Vec::new();
    for start in 0..n {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut boundary = Vec::new();
        let mut d = start;
        loop {
            face_of[d] = id;
            boundary.push(Dart(d));
            d = Dart(pair[d]).next_ccw().0;
            if d == start {
                break;
            }
        }
        let mut crossings: Vec<usize> = boundary.iter().map(|d| d.crossing()).collect();
        crossings.sort_unstable();
        crossings.dedup();
        regions.push(Region { id, boundary, crossings });
    }
    (face_of, regions)
}
