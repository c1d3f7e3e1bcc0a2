#!/usr/bin/env python3
"""Generate a directory of random 3-SAT DIMACS files.

Planted instances (default) are satisfiable by construction and stand
in for SATLIB's uf20-91 family when the originals are not available:

    python scripts/make_dataset.py --out data/uf20 --count 1000
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from satkit.generators import generate_dataset


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--count", type=int, default=1000)
    parser.add_argument("--vars", type=int, default=20)
    parser.add_argument("--clauses", type=int, default=91)
    parser.add_argument("--kind", choices=["planted", "uniform"], default="planted")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    paths = generate_dataset(
        args.out, args.count, args.vars, args.clauses, args.seed, args.kind
    )
    print(f"wrote {len(paths)} instances to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
