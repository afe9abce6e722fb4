"""Mean number of keys consistent with n random known pairs, per scheme."""

import argparse

from bearlion.ciphers import SCHEME_CLASSES, toy_scheme
from bearlion.core import Params, Rng
from bearlion.oracle import consistent_count_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    params = Params(4, 8, 5)
    print("scheme\tkey_bits\t" + "\t".join(f"n={n}" for n in range(1, args.n_max + 1)))
    for tag in SCHEME_CLASSES:
        s = toy_scheme(tag, params)
        prof = consistent_count_profile(s, args.n_max, args.trials, Rng(args.seed))
        print(f"{tag}\t{s.key_bits}\t" + "\t".join(f"{m:.2f}" for _, m in prof))


if __name__ == "__main__":
    main()
