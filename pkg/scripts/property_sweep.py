"""Seeded soundness sweep: hunt every applicable (checker, f) cell.

    python3 scripts/property_sweep.py --trials 2000 --dim 4 --seed 0
"""

import argparse
import time

from loewner_lab.explorer import GeneratorSpec, hunt_violations
from loewner_lab.functions import inverse_shift, power
from loewner_lab.spectral import Interval

F = {"t^2": power(2), "t^6": power(6), "1/t": inverse_shift(0), "t^(1/3)": power(1 / 3), "1/(t+1)": inverse_shift(1)}
POWER_R = {"t^2": 2.0, "t^6": 6.0, "1/t": -1.0, "t^(1/3)": 1 / 3}
CELLS = (
    [("thm1", n) for n in F]
    + [("subadditivity_double", n) for n in ("t^2", "t^6", "1/t", "1/(t+1)")]
    + [("power", n) for n in POWER_R]
    + [("decreasing_chain", n) for n in ("1/t", "1/(t+1)")]
    + [("reverse_subadditivity", n) for n in ("1/t", "1/(t+1)")]
    + [("concave_lower", "t^(1/3)")]
    + [("K_k_subadditivity", n) for n in ("t^2", "t^6", "t^(1/3)")]
)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unconstrained", action="store_true")
    args = p.parse_args()
    total = 0
    print(f"{'checker':<22} {'f':<8} {'tested':>7} {'viol':>5} {'errors':>6} {'worst rel margin':>17}")
    t0 = time.perf_counter()
    for i, (cid, name) in enumerate(CELLS):
        params = {"r": POWER_R[name]} if cid == "power" else {}
        spec = GeneratorSpec(args.dim, Interval(0.5, 4.0), args.seed + i, args.trials)
        res = hunt_violations(cid, F[name], spec, not args.unconstrained, params)
        total += res.violation_count
        print(f"{cid:<22} {name:<8} {res.tested:>7} {res.violation_count:>5} {res.errors:>6} "
              f"{res.worst_relative_margin:>17.3g}")
    print(f"{total} violations in {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
