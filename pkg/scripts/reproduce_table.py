"""Print the six-row base path on SG(2,1) and check it.

    python scripts/reproduce_table.py
"""

from kneser_homotopy.graph_core import make_complete
from kneser_homotopy.homotopy import HomPath, base_table, validate_path
from kneser_homotopy.kneser import KneserParams, enumerate_stable, make_graph, set_label


def main():
    params = KneserParams(2, 1)
    sets = enumerate_stable(params)
    rows = base_table()
    print("   " + " ".join(f"{set_label(S):>5}" for S in sets))
    for i, r in enumerate(rows, 1):
        print(f"{i:>2} " + " ".join(f"{x:>5}" for x in r))
    v = validate_path(HomPath(make_graph(params), make_complete(3), rows))
    print("validator:", v.describe())
    return 0 if v else 1


if __name__ == "__main__":
    raise SystemExit(main())
