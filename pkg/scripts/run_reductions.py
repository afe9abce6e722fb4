"""Run every reduction in both oracle modes and print a pass-rate table.

    python3 scripts/run_reductions.py --trials 100 --seed 1 --out results/
"""

import argparse
import time
from pathlib import Path

from bearlion.experiments import ExperimentConfig, format_report, pass_rates, run_experiment
from bearlion.oracle import ALL, FIRST


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--l", type=int, default=4)
    ap.add_argument("--r", type=int, default=8)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--out", type=Path, help="directory for the raw report files")
    args = ap.parse_args()

    table = {}
    for mode in (ALL, FIRST):
        cfg = ExperimentConfig(l=args.l, r=args.r, k=args.k, trials=args.trials, seed=args.seed, mode=mode)
        t0 = time.perf_counter()
        results = run_experiment(cfg)
        print(f"# {mode}: {len(results)} trials in {time.perf_counter() - t0:.1f}s")
        for key, rate in pass_rates(results).items():
            table.setdefault(key, {})[mode] = rate
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"report_{mode}_seed{args.seed}.tsv").write_text(format_report(results))

    print(f"{'theorem':<12}{'n':>3}{'all':>8}{'first':>8}")
    for (th, n), rates in table.items():
        print(f"{th:<12}{n:>3}{rates[ALL]:>8.2f}{rates[FIRST]:>8.2f}")


if __name__ == "__main__":
    main()
