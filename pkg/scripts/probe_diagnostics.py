"""Satisfiability of each spectral condition on random log-uniform bounds.

    python3 scripts/probe_diagnostics.py --samples 100000 --seed 0
"""

import argparse

from loewner_lab.explorer import CONDITIONS, probe_hypothesis_satisfiability


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    for cond in CONDITIONS:
        res = probe_hypothesis_satisfiability(cond, args.samples, args.seed)
        print(f"{cond:<9} {res.satisfying_hypothesis_count:>7} / {res.trials} satisfy")
        for w in res.witnesses[:2]:
            print("   witness " + ", ".join(f"{k}={v:.4g}" for k, v in w.items()))
        for note in res.notes:
            print(f"   note: {note}")


if __name__ == "__main__":
    main()
