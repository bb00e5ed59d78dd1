"""F-stable exchange graphs of every catalog folding against the associahedron of the folded type."""
import argparse
import time

from fusionfold.cluster import exchange_graph, fr_associahedron, graph_isomorphic, rank_two_cycles
from fusionfold.species import catalog, catalog_names, unfold


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=3, help="rank of the parametric B/C families")
    p.add_argument("--h", type=int, default=5, help="h of the tlj:I2(h) entry")
    args = p.parse_args()
    print(f"{'folding':22} {'delta':7} {'fstable':>8} {'assoc':>6} {'iso':>4} {'polygons':>12} {'sec':>6}")
    for name in catalog_names(args.n, args.h):
        t0 = time.perf_counter()
        f = unfold(catalog(name))
        g1 = exchange_graph(f, "fstable")
        g2 = fr_associahedron(f.species.delta_type)
        iso = graph_isomorphic(g1, g2).isomorphic
        polys = rank_two_cycles(f)["all"]
        dt = time.perf_counter() - t0
        print(f"{name:22} {f.species.delta_type:7} {g1.size:8d} {g2.size:6d} {str(iso):>4} {str(polys):>12} {dt:6.2f}")


if __name__ == "__main__":
    main()
