"""Deformation experiment over h, epsilon and testbed orientation."""
import argparse
import time

from fusionfold.species import catalog, unfold
from fusionfold.stability import deformation_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--hs", type=int, nargs="+", default=[4, 5, 6, 8])
    p.add_argument("--eps", type=float, nargs="+", default=[0.02, 0.05, 0.1])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orientations", nargs="+", default=["unfolded", "linear"])
    args = p.parse_args()
    print(f"{'h':>3} {'eps':>5} {'orientation':11} {'fail':>5} {'max shift':>10} {'control':>8} {'sec':>6}")
    for h in args.hs:
        f = unfold(catalog(f"tlj:I2({h})"))
        for eps in args.eps:
            for o in args.orientations:
                t0 = time.perf_counter()
                rep = deformation_experiment(
                    f, trials=args.trials, eps=eps, seed=args.seed, orientation=o, raise_on_failure=False
                )
                dt = time.perf_counter() - t0
                print(
                    f"{h:3d} {eps:5.2f} {o:11} {rep['failures']:5d} {rep['max_phase_shift']:10.4f}"
                    f" {rep['negative_control_flags']:8d} {dt:6.2f}"
                )


if __name__ == "__main__":
    main()
