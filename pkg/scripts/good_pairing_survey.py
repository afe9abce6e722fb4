"""Good-pairing fraction and image size of the toy primitives over a range of l."""

import argparse

from bearlion import analysis
from bearlion.core import Params
from bearlion.primitives import toy_hash, toy_stream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, nargs="+", default=[3, 4, 5, 6, 7, 8])
    args = ap.parse_args()

    print("l\tr\timage\tcovered\tfraction")
    for l in args.l:
        p = Params(l, 2 * l)
        prof = analysis.good_pairing_profile(toy_stream(p), toy_hash(p), p)
        print(f"{l}\t{p.r}\t{prof.image_size}\t{prof.covered}\t{prof.fraction:.4f}")


if __name__ == "__main__":
    main()
