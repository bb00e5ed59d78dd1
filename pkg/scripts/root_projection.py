"""Projection of unfolded roots onto the folded simple roots, per component."""
import argparse

from fusionfold.coxeter import project_roots
from fusionfold.species import catalog, catalog_names, unfold


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("names", nargs="*", help="catalog identifiers (default: whole catalog)")
    args = p.parse_args()
    for name in args.names or catalog_names():
        rep = project_roots(unfold(catalog(name)))
        for k, comp in enumerate(rep["components"]):
            scalars = ", ".join(f"{s:.6f}" for s in comp["scalars"])
            print(
                f"{name:22} comp {k}: {comp['omega_roots']:4d} roots -> {comp['delta_roots']:3d} folded,"
                f" counts {comp['counts']}, scalars [{scalars}], golden={comp['golden_pair']}"
            )
        if rep["golden_pair"]:
            s = rep["components"][0]["scalars"]
            print(f"{'':22} ratio {s[1] / s[0]:.12f}")


if __name__ == "__main__":
    main()
