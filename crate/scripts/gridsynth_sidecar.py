"""Write a sidecar synthesis file for a list of Z-rotation angles.

Angles are read one per line (radians), e.g. from
`taco transform --gen qft:18 --list-angles`. Each output line is
`<theta> <epsilon> <gate string>` as produced by pygridsynth.
"""

import argparse
import sys

import mpmath
from pygridsynth.gridsynth import gridsynth_gates


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("angles", nargs="?", type=argparse.FileType("r"), default=sys.stdin)
    ap.add_argument("--epsilon", default="1e-5")
    ap.add_argument("--dps", type=int, default=128)
    args = ap.parse_args()

    mpmath.mp.dps = args.dps
    eps = mpmath.mpf(args.epsilon)
    print(f"# pygridsynth, epsilon {args.epsilon}")
    for line in args.angles:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        gates = gridsynth_gates(theta=mpmath.mpf(line), epsilon=eps)
        print(f"{line} {args.epsilon} {gates}")


if __name__ == "__main__":
    main()
