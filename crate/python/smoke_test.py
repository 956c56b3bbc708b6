"""Smoke test for the warpdeg Python extension."""

import sys
from pathlib import Path

import warpdeg

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    trefoil = warpdeg.Shadow.from_pd("P[(1,5,2,4),(3,1,4,6),(5,3,6,2)]")
    assert trefoil.crossings == 3 and trefoil.is_knot and trefoil.is_reduced
    assert len(trefoil.regions()) == 5
    assert trefoil.warping_degree()[0] == 1
    assert trefoil.ir()[0] == 1
    bounds = trefoil.verify_bounds()
    assert bounds["lower_ok"] and bounds["upper_ok"] and not bounds["violation"]

    realized = warpdeg.Shadow.from_gauss("1 2 3 1 2 3")
    assert trefoil in realized

    rows = [[int(ch) for ch in r] for r in ("1110001", "1111000", "1001101", "0001111", "0011011")]
    assert warpdeg.independent_sets_from_matrix(rows, 2) == [[1], [2], [5], [1, 5]]

    table = warpdeg.dmin_table(3, 7)
    assert [row[2] for row in table] == [1, 1, 2, 2, 2]

    assert len(warpdeg.enumerate_link_shadows(2)) == 3
    corpus = warpdeg.load_corpus(str(ROOT / "data" / "alternating_knots_9.pd"))
    assert all(not s.verify_bounds()["violation"] for _, s in corpus)

    try:
        warpdeg.Shadow.from_pd("P[(1,2,3)]")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed PD accepted")

    print(f"warpdeg smoke test ok: {len(corpus)} corpus entries, table {table}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
