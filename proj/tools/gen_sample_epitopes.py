#!/usr/bin/env python3
"""Write the bundled synthetic epitope sample (data/sample_epitopes.csv).

The peptides are invented. Epitope-labelled sequences draw most residues from
the hydrophilic, surface-exposed set; non-epitopes from the hydrophobic set.
Each residue comes from the "wrong" pool with probability `--noise`, so the
classes overlap.
"""

import argparse
import random
import sys

HYDROPHILIC = "DEKNQRSTGPH"
HYDROPHOBIC = "LIVFMWACY"


def peptide(rng: random.Random, favoured: str, other: str, noise: float) -> str:
    length = rng.randint(12, 20)
    return "".join(rng.choice(other if rng.random() < noise else favoured) for _ in range(length))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20250101)
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--noise", type=float, default=0.35)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    rows = []
    for k in range(args.count):
        positive = k % 2 == 0
        pools = (HYDROPHILIC, HYDROPHOBIC) if positive else (HYDROPHOBIC, HYDROPHILIC)
        rows.append((peptide(rng, *pools, args.noise), 1 if positive else -1))
    rng.shuffle(rows)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="\n")
    out.write(f"# synthetic peptides, seed={args.seed} noise={args.noise}; not real epitope data\n")
    out.write("sequence,label\n")
    for seq, label in rows:
        out.write(f"{seq},{label}\n")
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
