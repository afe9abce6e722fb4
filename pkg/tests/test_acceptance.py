"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""

import time

import pytest

from bearlion import analysis
from bearlion.ciphers import SCHEME_CLASSES, LionessUninvertible, toy_scheme
from bearlion.cli import FileHeader, main
from bearlion.core import BitStr, Block, Params, Rng, random_key
from bearlion.experiments import ExperimentConfig, format_report, pass_rates, run_experiment
from bearlion.oracle import ALL
from bearlion.primitives import stub_zero, toy_hash, toy_keyed_hash, toy_stream
from bearlion.reductions import SINGLE_PAIR, THEOREMS

from acceptance_log import report
from refimpl import int_to_bits, ref_toy_hash, ref_toy_stream

P = Params(4, 8, 5)
TAGS = list(SCHEME_CLASSES)
SEED = 1


def all_blocks(p):
    for L in range(2**p.l):
        for R in range(2**p.r):
            yield Block(BitStr(L, p.l), BitStr(R, p.r))


@pytest.fixture(scope="module")
def main_run():
    cfg = ExperimentConfig(mode=ALL, trials=100, seed=SEED)
    t0 = time.perf_counter()
    results = run_experiment(cfg)
    return cfg, results, time.perf_counter() - t0


def test_criterion_1_roundtrip():
    t0 = time.perf_counter()
    failures = checked = 0
    for tag in TAGS:
        s = toy_scheme(tag, P)
        rng = Rng(1000 + TAGS.index(tag))
        for _ in range(10):
            key = random_key(tag, P, rng)
            for pt in all_blocks(P):
                failures += s.decrypt(key, s.encrypt(key, pt)) != pt
                checked += 1
    dt = time.perf_counter() - t0
    ok = failures == 0 and checked == 5 * 4096 * 10
    report(1, "toy roundtrip, 5 schemes x 4096 plaintexts x 10 keys", ok,
           f"{checked} checks, {failures} failures, {dt:.1f}s")
    assert ok


def test_criterion_2_lioness_repair():
    good = toy_scheme("LIONESS", P)
    bad = LionessUninvertible(P, toy_stream(P), toy_keyed_hash(P))
    rng = Rng(2)
    repaired_failures = literal_failures = 0
    for _ in range(5):
        key = random_key("LIONESS", P, rng)
        for pt in all_blocks(P):
            repaired_failures += good.decrypt(key, good.encrypt(key, pt)) != pt
            literal_failures += bad.decrypt(key, bad.encrypt(key, pt)) != pt
    ok = repaired_failures == 0 and literal_failures > 0
    report(2, "LIONESS repaired line inverts, literal line does not", ok,
           f"repaired failures {repaired_failures}, literal failures {literal_failures} of {5 * 4096}")
    assert ok


def test_criterion_3_pair_validity(main_run):
    _, results, _ = main_run
    per = {th: [r for r in results if r.theorem == th] for th in THEOREMS}
    bad = sum(not r.pairs_valid for r in results)
    ok = bad == 0 and all(len(v) >= 100 for v in per.values())
    report(3, "constructed pairs re-encrypt under the planted key", ok,
           f"{len(results)} trials over {len(per)} reductions, {bad} invalid")
    assert ok


def test_criterion_4_all_consistent_success(main_run):
    cfg, results, dt = main_run
    rates = pass_rates(results)
    expected = {(th, n) for th in THEOREMS for n in ([1] if th in SINGLE_PAIR else [1, 2, 4])}
    solver_bad = [r for r in results if r.verdict and r.solver_ok is not True]
    low = {k: v for k, v in rates.items() if v != 1.0}
    ok = set(rates) == expected and not low and not solver_bad
    report(4, "all-consistent pass rate 100% with solver cross-check", ok,
           f"{len(rates)} (theorem, n) cells, below 100%: {low or 'none'}, "
           f"solver disagreements {len(solver_bad)}, {dt:.1f}s")
    assert ok


def test_criterion_5_locality(main_run):
    _, results, _ = main_run
    enum = max(r.report.reduction_enumerations for r in results)
    no_oracle = sum(r.report.oracle_cost <= 0 for r in results)
    ok = enum == 0 and no_oracle == 0
    report(5, "no key enumeration outside the oracle", ok,
           f"max reduction-side enumerations {enum}, max reduction cost "
           f"{max(r.report.reduction_cost for r in results)}, "
           f"oracle cost range {min(r.report.oracle_cost for r in results)}.."
           f"{max(r.report.oracle_cost for r in results)}")
    assert ok


def test_criterion_6_good_pairing():
    fractions = []
    for S in (toy_stream(P), stub_zero(P)[0]):
        fractions.append(analysis.good_pairing_profile(S, stub_zero(P)[2], P).fraction)
    toy = analysis.good_pairing_profile(toy_stream(P), toy_hash(P), P)
    hit = {ref_toy_hash(int_to_bits(ref_toy_stream(m, 4, 8), 8), 4) for m in range(16)}
    ok = all(f == 0.0625 for f in fractions) and toy.covered == len(hit) and toy.exact
    report(6, "good pairing: stub exactly 1/16, toy agrees across two enumerations", ok,
           f"stub fractions {fractions}, toy {toy.covered}/16 vs reference {len(hit)}/16")
    assert ok


def test_criterion_7_lion_h1(main_run):
    _, results, _ = main_run
    scheme = toy_scheme("LION", P)
    coll = [r.report for r in results if r.theorem == "R-LION-H1" and r.verdict]
    coll_bad = sum(not (scheme.hash(rep.extracted) == rep.extras["Y~"] and rep.extracted != rep.extras["R~"])
                   for rep in coll)
    cfg = ExperimentConfig(theorems=["R-LION-H1"], trials=100, seed=SEED, h1_mode="preimage")
    pre = run_experiment(cfg)
    pre_bad = sum(not (r.verdict and scheme.hash(r.report.extracted) == r.report.target["Y"]) for r in pre)
    ok = len(coll) > 0 and coll_bad == 0 and pre_bad == 0
    report(7, "LION hash reduction: collision X != R~ with H(X) = Y~, preimage H(X) = Y", ok,
           f"{len(coll)} passing collision trials with {coll_bad} bad, preimage {len(pre) - pre_bad}/{len(pre)}")
    assert ok


def test_criterion_8_production_cli(tmp_path):
    failures, slowest = [], 0.0
    for tag in TAGS:
        key = tmp_path / f"{tag}.key"
        assert main(["keygen", "--scheme", tag, str(key)]) == 0
        for size in (65, 1024, 1 << 20):
            pt, ct, back = (tmp_path / f"{tag}{size}.{x}" for x in ("pt", "ct", "out"))
            pt.write_bytes(Rng(size).bits(8 * size).to_bytes())
            t0 = time.perf_counter()
            codes = (main(["encrypt", "--scheme", tag, "--key", str(key), str(pt), str(ct)]),
                     main(["decrypt", "--key", str(key), str(ct), str(back)]))
            dt = time.perf_counter() - t0
            if size == 1 << 20:
                slowest = max(slowest, dt)
            blob = ct.read_bytes()
            if codes != (0, 0) or back.read_bytes() != pt.read_bytes() or blob[:10] != FileHeader(tag).pack():
                failures.append((tag, size))
    ok = not failures and slowest < 5.0
    report(8, "production CLI roundtrip 65 B / 1 KiB / 1 MiB, exact header", ok,
           f"failures {failures or 'none'}, slowest 1 MiB encrypt+decrypt {slowest:.2f}s")
    assert ok


def test_criterion_9_determinism(main_run, tmp_path):
    cfg, results, _ = main_run
    first = tmp_path / "first.tsv"
    first.write_text(format_report(results))
    again = tmp_path / "again.tsv"
    code = main(["reduce", "--theorem", "all", "--trials", str(cfg.trials), "--seed", str(cfg.seed),
                 "--mode", cfg.mode, "-o", str(again)])
    ok = code == 0 and first.read_bytes() == again.read_bytes()
    report(9, "same seed gives byte-identical report files", ok,
           f"{len(first.read_bytes())} bytes, exit code {code}")
    assert ok
