use std::path::Path;

use warpdeg::census::{enumerate_knot_shadows, enumerate_link_shadows, Limits};
use warpdeg::codec::{parse_gauss, realize};
use warpdeg::corpus::load_corpus;
use warpdeg::moves::max_independent_region_set;
use warpdeg::region_opt::*;
use warpdeg::{ir, ir_base, verify_bounds, warping_degree_shadow, Shadow};

/// Plain DPLL with unit propagation over a DIMACS CNF.
fn dimacs_satisfiable(text: &str) -> bool {
    let mut vars = 0;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            vars = rest.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        let lits: Vec<i64> = line.split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_eq!(lits.last(), Some(&0));
        clauses.push(lits[..lits.len() - 1].to_vec());
    }
    fn solve(clauses: &[Vec<i64>], assign: &mut [i8]) -> bool {
        loop {
            let mut unit = None;
            for c in clauses {
                let mut open = Vec::new();
                let mut sat = false;
                for &l in c {
                    let v = assign[l.unsigned_abs() as usize];
                    if v == 0 {
                        open.push(l);
                    } else if (v > 0) == (l > 0) {
                        sat = true;
                        break;
                    }
                }
                if sat {
                    continue;
                }
                match open.len() {
                    0 => return false,
                    1 => {
                        unit = Some(open[0]);
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(l) => assign[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 },
                None => break,
            }
        }
        let Some(v) = (1..assign.len()).find(|&v| assign[v] == 0) else {
            return true;
        };
        for value in [1, -1] {
            let mut next = assign.to_vec();
            next[v] = value;
            if solve(clauses, &mut next) {
                return true;
            }
        }
        false
    }
    solve(&clauses, &mut vec![0; vars + 1])
}

fn largest_01_solution(m: &RegionChoiceMatrix, base: usize) -> usize {
    solve_01_system(m).unwrap().iter().filter(|v| v.b[base] == 0).map(|v| v.size()).max().unwrap_or(0)
}

#[test]
fn three_routes_agree_on_census() {
    for c in 2..=6 {
        for s in enumerate_knot_shadows(c, false, &Limits::default()).unwrap() {
            let m = region_choice_matrix(&s).unwrap();
            for base in 0..c {
                let (bb, set) = ir_base(&s, base).unwrap();
                assert_eq!(bb, set.len());
                assert_eq!(bb, largest_01_solution(&m, base));
                let by_base = independent_sets_for_base(&m, base).unwrap();
                assert_eq!(bb, by_base.iter().map(|v| v.size()).max().unwrap_or(0));
                assert!(dimacs_satisfiable(&emit_dimacs(&s, base, bb).unwrap()));
                assert!(!dimacs_satisfiable(&emit_dimacs(&s, base, bb + 1).unwrap()));
            }
        }
    }
}

#[test]
fn dpll_sanity() {
    assert!(dimacs_satisfiable("p cnf 2 2\n1 2 0\n-1 0\n"));
    assert!(!dimacs_satisfiable("p cnf 1 2\n1 0\n-1 0\n"));
}

fn worked_matrix() -> RegionChoiceMatrix {
    let rows = ["1110001", "1111000", "1001101", "0001111", "0011011"];
    RegionChoiceMatrix::from_rows(rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect()).unwrap()
}

/// Region sets described by their incident crossings in the worked matrix row
/// numbering, so that region labels do not matter.
fn contents(m: &RegionChoiceMatrix, perm: &[usize], sets: &[SelectionVector]) -> Vec<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<Vec<u8>>> = sets
        .iter()
        .map(|v| {
            let mut regions: Vec<Vec<u8>> =
                v.regions().iter().map(|&j| (0..m.rows()).map(|i| m.get(perm[i], j)).collect()).collect();
            regions.sort();
            regions
        })
        .collect();
    out.sort();
    out
}

#[test]
fn worked_example_matrix_and_projection() {
    let worked = worked_matrix();
    let sets = independent_sets_for_base(&worked, 2).unwrap();
    let regions: Vec<Vec<usize>> = sets.iter().map(|v| v.regions()).collect();
    assert_eq!(regions, [vec![1], vec![2], vec![5], vec![1, 5]]);

    let identity: Vec<usize> = (0..5).collect();
    let expected = contents(&worked, &identity, &sets);
    let matches: Vec<Shadow> = enumerate_knot_shadows(5, true, &Limits::default())
        .unwrap()
        .into_iter()
        .filter(|s| worked.row_correspondence(&region_choice_matrix(s).unwrap()).is_some())
        .collect();
    assert_eq!(matches.len(), 1);
    let m = region_choice_matrix(&matches[0]).unwrap();
    let perm = worked.row_correspondence(&m).unwrap();
    let ours = independent_sets_for_base(&m, perm[2]).unwrap();
    assert_eq!(contents(&m, &perm, &ours), expected);
}

fn torus(n: usize) -> Shadow {
    let word: Vec<String> = (1..=n).chain(1..=n).map(|i| i.to_string()).collect();
    let shadows = realize(&parse_gauss(&word.join(" ")).unwrap());
    shadows.into_iter().find(|s| s.regions().iter().filter(|r| r.len() == 2).count() == n).expect("torus shadow")
}

#[test]
fn torus_shadows() {
    for (n, want) in [(3, 1), (5, 2), (7, 3)] {
        let s = torus(n);
        let report = verify_bounds(&s).unwrap();
        assert_eq!((report.d, report.ir), (want, want), "n={n}");
        assert_eq!(report.d, n - report.ir - 1);
        assert!(!report.has_violation());
    }
}

#[test]
fn over_pass_audit_on_reduced_census() {
    for c in 3..=6 {
        for s in enumerate_knot_shadows(c, true, &Limits::default()).unwrap() {
            let a = over_pass_audit(&s).unwrap();
            assert_eq!(a.bases, 4 * c);
            assert_eq!((a.region_violations, a.bound_violations, a.base_violations), (0, 0, 0));
        }
    }
}

#[test]
fn bounds_hold_on_reduced_census() {
    for c in 3..=7 {
        for s in enumerate_knot_shadows(c, true, &Limits::default()).unwrap() {
            let r = verify_bounds(&s).unwrap();
            assert!(!r.has_violation(), "{r:?}");
            assert!(r.ir >= 1 && 2 * r.ir < c);
        }
    }
}

#[test]
fn at_least_one_independent_region_everywhere() {
    for c in 2..=6 {
        for s in enumerate_link_shadows(c, &Limits::default()).unwrap() {
            assert!(!max_independent_region_set(&s).unwrap().is_empty());
            if s.is_knot() {
                assert!(ir(&s).unwrap().ir >= 1);
            }
        }
    }
}

#[test]
fn bundled_corpus() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/alternating_knots_9.pd");
    let corpus = load_corpus(&path).unwrap();
    let lines = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .count();
    assert_eq!(corpus.entries.len(), lines);
    for e in &corpus.entries {
        assert!(e.shadow.is_reduced() && e.shadow.is_connected(), "{}", e.name);
        let r = verify_bounds(&e.shadow).unwrap();
        assert!(!r.has_violation(), "{}: {r:?}", e.name);
    }
    let trefoil = &corpus.entries.iter().find(|e| e.name == "3_1").unwrap().shadow;
    assert_eq!(warping_degree_shadow(trefoil).unwrap().d, 1);
}
