//! Smoothing moves on link shadows and region transport back to the
//! unsmoothed shadow.
//!
//! Smoothing crossing `x` deletes it and joins its four half-edges in two
//! rotation-adjacent pairs. The two pairs that are *not* joined face each
//! other across the smoothing, so the corners between them merge: joining
//! slots 0–1 and 2–3 merges quadrants 0 and 2, joining 1–2 and 3–0 merges
//! quadrants 1 and 3.
//!
//! Every surviving dart keeps its corner, which is how regions of the
//! smoothed shadow are traced back to regions of the original.

use serde::Serialize;

use crate::region_opt::{low_bits, max_independent, region_masks};
use crate::shadow::{Dart, Shadow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Smoothing {
    /// Join slots 0–1 and 2–3; quadrants 0 and 2 merge.
    ZeroOne,
    /// Join slots 1–2 and 3–0; quadrants 1 and 3 merge.
    OneTwo,
}

impl Smoothing {
    pub const BOTH: [Smoothing; 2] = [Smoothing::ZeroOne, Smoothing::OneTwo];

    fn partner(self, slot: usize) -> usize {
        match self {
            Smoothing::ZeroOne => slot ^ 1,
            Smoothing::OneTwo => match slot {
                0 => 3,
                1 => 2,
                2 => 1,
                _ => 0,
            },
        }
    }

    /// The smoothing that merges quadrant `q` with its opposite.
    pub fn merging_quadrant(q: usize) -> Self {
        if q.is_multiple_of(2) {
            Smoothing::ZeroOne
        } else {
            Smoothing::OneTwo
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpliceChoice {
    pub crossing: usize,
    pub smoothing: Smoothing,
}

/// A smoothed shadow with, for each of its darts, the dart of the original.
#[derive(Debug, Clone)]
struct Tracked {
    shadow: Shadow,
    origin: Vec<usize>,
}

fn smooth_tracked(s: &Shadow, ch: SpliceChoice) -> Result<Tracked> {
    s.check_crossing(ch.crossing)?;
    let c = s.crossing_count();
    if c == 1 {
        return Err(Error::EmptyShadow);
    }
    let x = ch.crossing;
    let pair = s.pairing();
    let at_x = |d: usize| d / 4 == x;
    let renumber = |d: usize| if d / 4 > x { d - 4 } else { d };

    let mut new_pair = vec![usize::MAX; 4 * (c - 1)];
    let mut used = [false; 4];
    for d in (0..pair.len()).filter(|&d| !at_x(d)) {
        let mut p = pair[d];
        while at_x(p) {
            used[p & 3] = true;
            let j = ch.smoothing.partner(p & 3);
            used[j] = true;
            p = pair[4 * x + j];
        }
        new_pair[renumber(d)] = renumber(p);
    }
    // half-edge chains at x that never leave it close up into free circles
    let mut loops = 0;
    for k in 0..4 {
        if used[k] {
            continue;
        }
        loops += 1;
        let mut slot = k;
        while !used[slot] {
            used[slot] = true;
            let j = ch.smoothing.partner(slot);
            used[j] = true;
            slot = pair[4 * x + j] & 3;
        }
    }
    let origin: Vec<usize> = (0..pair.len()).filter(|&d| !at_x(d)).collect();
    let shadow = Shadow::with_free_loops(new_pair, s.free_loops() + loops)?;
    Ok(Tracked { shadow, origin })
}

/// Smooths one crossing.
pub fn smooth(s: &Shadow, ch: SpliceChoice) -> Result<Shadow> {
    Ok(smooth_tracked(s, ch)?.shadow)
}

fn compose(first: Tracked, then: Tracked) -> Tracked {
    let origin = then.origin.iter().map(|&d| first.origin[d]).collect();
    Tracked { shadow: then.shadow, origin }
}

/// Regions of a spliced shadow traced back to the original shadow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportMap {
    /// For each spliced region, the original regions it is made of
    /// (ascending).
    pub candidates: Vec<Vec<usize>>,
    spliced_masks: Vec<u128>,
    original_masks: Vec<u128>,
}

impl TransportMap {
    fn new(original: &Shadow, t: &Tracked) -> Result<Self> {
        let mut candidates = vec![Vec::new(); t.shadow.regions().len()];
        for (d, &o) in t.origin.iter().enumerate() {
            candidates[t.shadow.region_of(Dart(d))].push(original.region_of(Dart(o)));
        }
        for c in &mut candidates {
            c.sort_unstable();
            c.dedup();
        }
        Ok(TransportMap {
            candidates,
            spliced_masks: region_masks(&t.shadow)?,
            original_masks: region_masks(original)?,
        })
    }

    /// The original region standing in for spliced region `r`: the least
    /// of its parts.
    pub fn image(&self, r: usize) -> usize {
        self.candidates[r][0]
    }

    /// Spliced regions that are unions of several original regions.
    pub fn merged_regions(&self) -> Vec<usize> {
        (0..self.candidates.len()).filter(|&r| self.candidates[r].len() > 1).collect()
    }

    /// True when every independent set of the spliced shadow transports to
    /// an independent set of the same size.
    pub fn is_sound(&self) -> bool {
        let n = self.candidates.len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| {
                self.spliced_masks[a] & self.spliced_masks[b] != 0 || {
                    let (ia, ib) = (self.image(a), self.image(b));
                    ia != ib && self.original_masks[ia] & self.original_masks[ib] == 0
                }
            })
        })
    }
}

fn pairwise_disjoint(masks: &[u128], set: &[usize]) -> bool {
    set.iter().enumerate().all(|(a, &i)| set[a + 1..].iter().all(|&j| masks[i] & masks[j] == 0))
}

/// Carries an independent region set of the spliced shadow to an
/// independent set of the same size in the original.
pub fn transport_independent_set(set: &[usize], tm: &TransportMap) -> Result<Vec<usize>> {
    if let Some(&r) = set.iter().find(|&&r| r >= tm.candidates.len()) {
        return Err(Error::TransportFailure(format!("region {r} does not exist")));
    }
    if !pairwise_disjoint(&tm.spliced_masks, set) {
        return Err(Error::TransportFailure("input set is not independent".into()));
    }
    let mut image: Vec<usize> = set.iter().map(|&r| tm.image(r)).collect();
    image.sort_unstable();
    let before = image.len();
    image.dedup();
    if image.len() != before {
        return Err(Error::TransportFailure("two regions map to the same region".into()));
    }
    if !pairwise_disjoint(&tm.original_masks, &image) {
        return Err(Error::TransportFailure(format!("image {image:?} is not independent")));
    }
    Ok(image)
}

/// Monogons, bigons and trigons: regions with 1, 2 or 3 boundary edges and
/// as many distinct crossings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SmallFaces {
    pub monogons: Vec<usize>,
    pub bigons: Vec<usize>,
    pub trigons: Vec<usize>,
}

pub fn find_small_faces(s: &Shadow) -> SmallFaces {
    let mut out = SmallFaces::default();
    for r in s.regions() {
        if r.len() != r.crossings.len() {
            continue;
        }
        match r.len() {
            1 => out.monogons.push(r.id),
            2 => out.bigons.push(r.id),
            3 => out.trigons.push(r.id),
            _ => {}
        }
    }
    out
}

fn require_connected(s: &Shadow) -> Result<()> {
    if s.is_connected() {
        Ok(())
    } else {
        Err(Error::NotConnected)
    }
}

fn reducible_step(s: &Shadow) -> Result<Tracked> {
    let x = *s.nugatory_crossings().first().ok_or(Error::FeatureAbsent("nugatory crossing"))?;
    let q = s.quadrants_unchecked(x);
    // merge the two distinct opposite corners; the repeated region survives
    let smoothing = if q[0] == q[2] { Smoothing::OneTwo } else { Smoothing::ZeroOne };
    let t = smooth_tracked(s, SpliceChoice { crossing: x, smoothing })?;
    require_connected(&t.shadow)?;
    Ok(t)
}

/// Splices the least nugatory crossing so that the result stays connected.
pub fn splice_reducible(s: &Shadow) -> Result<(Shadow, TransportMap)> {
    require_connected(s)?;
    let t = reducible_step(s)?;
    let tm = TransportMap::new(s, &t)?;
    Ok((t.shadow, tm))
}

/// Smooths the lowest crossing of the first bigon so that the bigon merges
/// with the region facing it across that crossing.
pub fn splice_bigon(s: &Shadow) -> Result<(Shadow, TransportMap)> {
    require_connected(s)?;
    let bigon = *find_small_faces(s).bigons.first().ok_or(Error::FeatureAbsent("bigon"))?;
    let region = &s.regions()[bigon];
    let x = region.crossings[0];
    let corner = region.boundary.iter().find(|d| d.crossing() == x).unwrap().slot();
    let t = smooth_tracked(s, SpliceChoice { crossing: x, smoothing: Smoothing::merging_quadrant(corner) })?;
    require_connected(&t.shadow)?;
    let tm = TransportMap::new(s, &t)?;
    Ok((t.shadow, tm))
}

/// Smooths one crossing of the first trigon, then splices away every
/// nugatory crossing this creates, aiming for three fewer crossings.
///
/// Trigon crossings are tried in ascending order, each with both
/// smoothings; the first pipeline that lands on exactly `c - 3` crossings
/// with a connected result wins.
pub fn splice_trigon(s: &Shadow) -> Result<(Shadow, TransportMap)> {
    require_connected(s)?;
    let c = s.crossing_count();
    let trigon = *find_small_faces(s).trigons.first().ok_or(Error::FeatureAbsent("trigon"))?;
    if c <= 3 {
        return Err(Error::EmptyShadow);
    }
    let mut closest = None::<usize>;
    let mut fallback = None;
    for &x in &s.regions()[trigon].crossings {
        for smoothing in Smoothing::BOTH {
            let Ok(mut t) = smooth_tracked(s, SpliceChoice { crossing: x, smoothing }) else {
                continue;
            };
            let mut ok = t.shadow.is_connected();
            while ok && !t.shadow.is_reduced() && t.shadow.crossing_count() > c - 3 {
                match reducible_step(&t.shadow) {
                    Ok(next) => t = compose(t, next),
                    Err(_) => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let got = t.shadow.crossing_count();
            if got == c - 3 {
                let tm = TransportMap::new(s, &t)?;
                if tm.is_sound() {
                    return Ok((t.shadow, tm));
                }
                fallback.get_or_insert((t.shadow, tm));
                continue;
            }
            if closest.is_none_or(|b| got.abs_diff(c - 3) < b.abs_diff(c - 3)) {
                closest = Some(got);
            }
        }
    }
    fallback.ok_or(Error::TrigonCountMismatch { expected: c - 3, got: closest.unwrap_or(c) })
}

/// Largest set of pairwise independent regions (no base crossing removed),
/// with a witness.
pub fn max_independent_region_set(s: &Shadow) -> Result<Vec<usize>> {
    require_connected(s)?;
    let masks = region_masks(s)?;
    Ok(max_independent(&masks, low_bits(masks.len())))
}

pub fn max_independent_regions(s: &Shadow) -> Result<usize> {
    Ok(max_independent_region_set(s)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{canonical, parse_gauss, realize};
    use crate::shadow::fixtures::*;

    #[test]
    fn smoothing_a_curl() {
        let cc = curl_curl();
        let outcomes: Vec<Shadow> = Smoothing::BOTH
            .iter()
            .map(|&smoothing| smooth(&cc, SpliceChoice { crossing: 1, smoothing }).unwrap())
            .collect();
        // one choice unties the loop, the other cuts it off as a circle
        assert!(outcomes.iter().any(|s| s.is_knot() && s.crossing_count() == 1));
        assert!(outcomes.iter().any(|s| s.free_loops() == 1 && !s.is_connected()));
        let untied = outcomes.iter().find(|s| s.is_knot()).unwrap();
        assert_eq!(canonical(untied), canonical(&figure_eight_curve()));
    }

    #[test]
    fn trefoil_smoothings_keep_euler_count() {
        let t = trefoil();
        for x in 0..3 {
            for smoothing in Smoothing::BOTH {
                let s = smooth(&t, SpliceChoice { crossing: x, smoothing }).unwrap();
                assert_eq!(s.crossing_count(), 2);
                assert!(s.is_connected());
                assert_eq!(s.regions().len(), 4);
            }
        }
    }

    #[test]
    fn reducible_splice_stays_connected() {
        let cc = curl_curl();
        let (s, tm) = splice_reducible(&cc).unwrap();
        assert_eq!(s.crossing_count(), 1);
        assert!(s.is_connected());
        // the monogon loses its only corner, so the merged region traces back
        // to a single original region
        assert!(tm.merged_regions().is_empty());
        assert_eq!(tm.candidates.len(), 3);
        // separating smoothing at the same crossing disconnects
        let x = cc.nugatory_crossings()[0];
        let q = cc.quadrants(x).unwrap();
        let separating = if q[0] == q[2] { Smoothing::ZeroOne } else { Smoothing::OneTwo };
        assert!(!smooth(&cc, SpliceChoice { crossing: x, smoothing: separating }).unwrap().is_connected());
    }

    #[test]
    fn small_faces() {
        let f = find_small_faces(&trefoil());
        assert_eq!((f.monogons.len(), f.bigons.len(), f.trigons.len()), (0, 3, 2));
        let f = find_small_faces(&curl_curl());
        assert_eq!(f.monogons.len(), 2);
    }

    #[test]
    fn bigon_splice_on_trefoil() {
        let (s, tm) = splice_bigon(&trefoil()).unwrap();
        assert_eq!(s.crossing_count(), 2);
        let best = max_independent_region_set(&s).unwrap();
        let back = transport_independent_set(&best, &tm).unwrap();
        assert_eq!(back.len(), best.len());
    }

    #[test]
    fn trigon_splice_on_trefoil_is_crossingless() {
        assert_eq!(splice_trigon(&trefoil()).unwrap_err(), Error::EmptyShadow);
    }

    #[test]
    fn trigon_splice_drops_three() {
        // (2,5)-torus shadow has two pentagons and five bigons, no trigon
        let torus = realize(&parse_gauss("1 2 3 4 5 1 2 3 4 5").unwrap()).remove(0);
        assert_eq!(splice_trigon(&torus).unwrap_err(), Error::FeatureAbsent("trigon"));
    }

    #[test]
    fn identity_transport() {
        let t = trefoil();
        let (_, tm) = splice_bigon(&t).unwrap();
        for (r, c) in tm.candidates.iter().enumerate() {
            if c.len() == 1 {
                assert_eq!(tm.image(r), c[0]);
            }
        }
    }

    #[test]
    fn max_independent_examples() {
        assert_eq!(max_independent_regions(&trefoil()).unwrap(), 1);
        assert_eq!(max_independent_regions(&curl_curl()).unwrap(), 2);
    }
}
