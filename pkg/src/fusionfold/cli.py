"""Command-line entry point: ``fusionfold <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails (a JSON witness is
written to stdout) and 2 on usage errors or refused requests.
"""
from __future__ import annotations

import argparse
import json
import sys


from . import __version__
from .cluster import exchange_graph, fr_associahedron, graph_isomorphic, rank_two_cycles
from .coxeter import (
    chambers,
    check_fold_homomorphism,
    check_fundamental_identification,
    project_roots,
    root_system,
    weyl_enumerate,
)
from .diagrams import classify, coxeter_diagram
from .errors import FusionFoldError, VerificationError
from .fusion import parse_element, ring_from_name, tensor_decompose
from .graphs import find_isomorphism
from .species import catalog, catalog_names, resolve, unfold, validate_species
from .stability import (
    cell_coordinates,
    cell_parametrize,
    check_twist_reflection,
    deformation_experiment,
    fstable_charge_space,
    heart_orbit,
)


class UsageError(Exception):
    pass


def _folding(args):
    if args.species:
        return unfold(resolve(args.species))
    if not args.folding:
        raise UsageError("one of --folding or --species is required")
    return unfold(catalog(args.folding))


def _render(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if isinstance(obj, str):
        return obj if obj.endswith("\n") else obj + "\n"
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            lines.append(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")
        return "\n".join(lines) + "\n"
    return f"{obj}\n"


# ------------------------------------------------------------ subcommands

def cmd_catalog(args):
    if args.name:
        s = catalog(args.name)
        return {"species": s.to_json(), "violations": validate_species(s)}
    rows = []
    for name in catalog_names():
        s = catalog(name)
        rows.append({"name": name, "delta": s.delta_type, "unfolded": s.unfolded_type, "ring": s.ring.name})
    return {"entries": rows}


def cmd_unfold(args):
    f = _folding(args)
    if args.format == "dot":
        return f.to_dot(args.header)
    return f.to_json()


def cmd_fuse(args):
    ring = ring_from_name(args.ring)
    z = tensor_decompose(parse_element(ring, args.x), parse_element(ring, args.y))
    if args.format == "json":
        return {"ring": ring.name, "x": args.x, "y": args.y, "result": str(z)}
    return str(z)


def cmd_roots(args):
    rs = root_system(args.type)
    out = rs.to_json()
    if args.weyl:
        out["weyl_order"] = weyl_enumerate(args.type, args.cap or 1_000_000).size
    return out


def cmd_fold_check(args):
    f = _folding(args)
    out = {"homomorphism": check_fold_homomorphism(f), "identification": check_fundamental_identification(f)}
    shape = classify(f.omega)
    out["unfolded_shape"] = shape
    expected = f.species.unfolded_type
    if expected:
        iso = find_isomorphism(f.omega.graph, coxeter_diagram(expected).graph)
        out["expected_shape"] = expected
        out["shape_matches"] = iso.isomorphic
        if not iso.isomorphic:
            raise VerificationError("unfolded quiver has the wrong shape", out)
    return out


def cmd_project(args):
    return project_roots(_folding(args))


def cmd_chambers(args):
    return chambers(args.type)


def _graph_out(g, args, extra=None):
    if args.format == "dot":
        return g.to_dot(args.header)
    out = g.to_json(full=args.full)
    if extra:
        out.update(extra)
    return out


def cmd_ceg(args):
    f = _folding(args)
    g = exchange_graph(f, args.mode, cap=args.cap or 200_000, component=args.component)
    extra = {"degrees": sorted(g.degrees())}
    if args.mode == "fstable" and args.polygons:
        extra["rank_two_cycles"] = rank_two_cycles(f)
    return _graph_out(g, args, extra)


def cmd_assoc(args):
    return _graph_out(fr_associahedron(args.type), args)


def cmd_iso_check(args):
    f = _folding(args)
    delta = args.type or f.species.delta_type
    g1 = exchange_graph(f, "fstable", cap=args.cap or 200_000)
    g2 = fr_associahedron(delta)
    res = graph_isomorphic(g1, g2)
    out = {
        "folding": f.species.name,
        "delta": delta,
        "fstable_vertices": g1.size,
        "associahedron_vertices": g2.size,
        "isomorphic": res.isomorphic,
        "bijection": dict(sorted(res.mapping.items())) if res.mapping else None,
    }
    if not res.isomorphic:
        out["reason"] = res.reason
        raise VerificationError("exchange graphs are not isomorphic", out)
    return out


def cmd_stab_dim(args):
    f = _folding(args)
    sp = fstable_charge_space(f)
    out = {
        "folding": f.species.name,
        "dimension": sp.dimension,
        "folded_rank": f.delta.rank,
        "basis": [[x.to_json() for x in row] for row in sp.basis],
    }
    if sp.dimension != f.delta.rank:
        raise VerificationError("F-stable charge space has the wrong dimension", out)
    return out


def cmd_twist_check(args):
    f = _folding(args)
    out = check_twist_reflection(f)
    if args.hearts:
        out["heart_orbit"] = heart_orbit(f)["orbit_size"]
    return out


def cmd_deform(args):
    f = _folding(args)
    return deformation_experiment(
        f, trials=args.trials, eps=args.epsilon, seed=args.seed, orientation=args.orientation
    )


def _parse_theta(text: str) -> list[complex]:
    out = []
    for part in text.split(";"):
        re, im = part.split(",")
        out.append(complex(float(re), float(im)))
    return out


def cmd_cell(args):
    f = _folding(args)
    theta = _parse_theta(args.theta) if args.theta else [1j] * f.delta.rank
    if len(theta) != f.delta.rank:
        raise UsageError(f"--theta needs {f.delta.rank} entries")
    z, info = cell_parametrize(f, theta)
    back = cell_coordinates(f, z)
    roundtrip = all(abs(a - b) <= 1e-12 * max(1.0, abs(a)) for a, b in zip(theta, back))
    out = {"folding": f.species.name, "charge": z.to_json(), "roundtrip": roundtrip, **info}
    if not roundtrip:
        raise VerificationError("cell coordinates do not round-trip", out)
    return out


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fusionfold", description="Fusion-weighted folding toolkit.")
    p.add_argument("--version", action="version", version=f"fusionfold {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, folding=False, default_format="json"):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=["json", "dot", "table"], default=default_format)
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--cap", type=int, default=None, help="search cap")
        if folding:
            sp.add_argument("--folding", help="catalog identifier, e.g. tlj:H3")
            sp.add_argument("--species", help="species JSON file")
        return sp

    sp = add("catalog", cmd_catalog, "list catalog entries or show one")
    sp.add_argument("--name")
    add("unfold", cmd_unfold, "unfold a species", folding=True)
    sp = add("fuse", cmd_fuse, "tensor product in a fusion ring", default_format="table")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp = add("roots", cmd_roots, "root system of a Coxeter type")
    sp.add_argument("--type", required=True)
    sp.add_argument("--weyl", action="store_true", help="also enumerate the Weyl group")
    add("fold-check", cmd_fold_check, "folded reflections and chamber identification", folding=True)
    add("project", cmd_project, "project unfolded roots onto folded simple roots", folding=True)
    sp = add("chambers", cmd_chambers, "count chambers of a Coxeter arrangement")
    sp.add_argument("--type", required=True)
    sp = add("ceg", cmd_ceg, "cluster exchange graph", folding=True)
    sp.add_argument("--mode", choices=["fstable", "unfolded"], default="fstable")
    sp.add_argument("--component", type=int, default=None)
    sp.add_argument("--full", action="store_true", help="include g-vectors")
    sp.add_argument("--polygons", action="store_true", help="report rank-two cycle lengths")
    sp = add("assoc", cmd_assoc, "generalized associahedron of a Coxeter type")
    sp.add_argument("--type", required=True)
    sp.add_argument("--full", action="store_true")
    sp = add("iso-check", cmd_iso_check, "compare the F-stable exchange graph with the associahedron", folding=True)
    sp.add_argument("--type", default=None)
    add("stab-dim", cmd_stab_dim, "dimension of the F-stable charge space", folding=True)
    sp = add("twist-check", cmd_twist_check, "twists versus reflections", folding=True)
    sp.add_argument("--hearts", action="store_true", help="also enumerate the heart orbit")
    sp = add("deform", cmd_deform, "deformation experiment on the interval testbed", folding=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--orientation", choices=["unfolded", "linear"], default="unfolded")
    sp = add("cell", cmd_cell, "F-stable charge from cell coordinates", folding=True)
    sp.add_argument("--theta", help='semicolon-separated "re,im" pairs, one per folded vertex')
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.header = f"fusionfold {__version__}: fusionfold {' '.join(argv)}"
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fusionfold: error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc), "witness": exc.witness}
        _emit(json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n", args.out)
        return 1
    except (FusionFoldError, KeyError, ValueError) as exc:
        print(f"fusionfold: error: {exc}", file=sys.stderr)
        return 2
    fmt = args.format
    if fmt == "dot" and not isinstance(result, str):
        fmt = "json"
    _emit(_render(result, fmt), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
