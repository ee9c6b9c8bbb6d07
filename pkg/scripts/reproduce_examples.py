"""Print the built-in worked examples and the ratio-constant spot checks."""

import sys
from pathlib import Path

from loewner_lab.cli import run

DATA = Path(__file__).resolve().parents[1] / "data"

COMMANDS = [
    ["paper"],
    ["check", "--theorem", "power", "--r", "6", "--input", str(DATA / "separated_pair.json")],
    ["check", "--theorem", "power", "--r", "3", "--input", str(DATA / "overlapping_pair.json")],
    ["constants", "--f", "power:2", "--m", "1", "--M", "2"],
    ["constants", "--f", "inverse_shift:0", "--m", "2", "--M", "3"],
    ["hh", "--f", "power:2", "--A", "[[1]]", "--B", "[[2]]"],
]


def main():
    codes = []
    for argv in COMMANDS:
        print(f"$ loewner-lab {' '.join(argv)}")
        codes.append(run(argv))
        print(f"[exit {codes[-1]}]\n")
    # the overlapping pair is expected to exit 2
    expected = [0, 0, 2, 0, 0, 0]
    return 0 if codes == expected else 1


if __name__ == "__main__":
    sys.exit(main())
