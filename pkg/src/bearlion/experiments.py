"""Planted instances, trial runner and the line-oriented report format.

The harness is the only code that knows the secrets.  For each theorem it
plants a random instance, fixes the subkeys the reduction is free to choose,
runs the reduction against an oracle and then audits the outcome:

* the full planted key (secret + chosen subkeys) must encrypt every
  constructed plaintext to its constructed ciphertext;
* a passing extracted secret must appear among the brute-force solutions of
  the corresponding equation, computed independently in :mod:`analysis`.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import analysis
from .ciphers import Scheme, toy_scheme
from .core import BitStr, KeyMaterial, Params, Rng, derive_seed
from .oracle import ALL, DEFAULT_CAP_BITS, FIRST, MODES, BruteForceOracle, KeySpaceTooLarge, PairSet, PlantedKeyOracle
from .reductions import (
    SCHEME_FOR, SINGLE_PAIR, THEOREMS, ReductionReport,
    reduce_bear2_hash, reduce_bear2_stream, reduce_bear_hash, reduce_lion2_hash,
    reduce_lion2_stream, reduce_lion_hash_single, reduce_lion_seed_single,
    reduce_lion_stream, reduce_lioness_hash, reduce_lioness_stream,
)

PLANTED = "planted"
MODE_ALIASES = {"first": FIRST, "all": ALL}
REPORT_COLUMNS = ("theorem", "seed", "n", "verdict", "oracle_cost", "reduction_cost", "extracted")

# per theorem: which subkey slot is secret, and which slots the reduction picks
_SECRET_SLOT = {
    "R-LION-S1": 0, "R-LION-H1": None, "R-BEAR-H": 0, "R-BEAR2-H": 0, "R-BEAR2-S": 1,
    "R-LION-S": 0, "R-LION2-S": 0, "R-LION2-H": 1, "R-LNS-S": 0, "R-LNS-H": 3,
}


@dataclass
class Instance:
    theorem: str
    target: dict[str, BitStr]
    secret: dict[str, BitStr]
    chosen: dict[str, BitStr]


def _names(scheme: Scheme) -> list[str]:
    return [f"K{i + 1}" for i in range(len(scheme.key_lengths))]


def _first_seed_hitting(scheme: Scheme, y: BitStr) -> BitStr | None:
    p = scheme.params
    for m in range(1 << p.l):
        seed = BitStr(m, p.l)
        if scheme.hash(scheme.stream(seed)) == y:
            return seed
    return None


def plant(theorem: str, scheme: Scheme, rng: Rng, h1_mode: str = "collision") -> Instance:
    p, tag = scheme.params, scheme.tag
    if SCHEME_FOR[theorem] != tag:
        raise ValueError(f"{theorem} runs on {SCHEME_FOR[theorem]}, not {tag}")
    lengths = dict(zip(_names(scheme), scheme.key_lengths))
    if theorem == "R-LION-S1":
        M = rng.bits(p.l)
        return Instance(theorem, {"Y": scheme.stream(M)}, {"M": M}, {"K2": rng.bits(p.l)})
    if theorem == "R-LION-H1":
        chosen = {"L": rng.bits(p.l)}
        if h1_mode == "collision":
            return Instance(theorem, {}, {}, chosen)
        m0 = rng.bits(p.l)
        return Instance(theorem, {"Y": scheme.hash(scheme.stream(m0))}, {"M0": m0}, chosen)
    slot = _SECRET_SLOT[theorem]
    sname = f"K{slot + 1}"
    secret = rng.bits(lengths[sname])
    chosen = {name: rng.bits(n) for name, n in lengths.items() if name != sname}
    if theorem in ("R-BEAR-H", "R-BEAR2-H"):
        R = rng.bits(p.r)
        target = {"Z": scheme.hash(secret, R), "R": R}
    elif theorem == "R-BEAR2-S":
        X = rng.bits(p.l)
        target = {"Z": scheme.stream(X + secret), "X": X}
    elif theorem in ("R-LION-S", "R-LION2-S", "R-LNS-S"):
        L = rng.bits(p.l)
        target = {"Z": scheme.S(L, secret), "L": L}
    elif theorem == "R-LION2-H":
        X = rng.bits(p.r)
        target = {"Z": scheme.hash(secret, X), "X": X}
    elif theorem == "R-LNS-H":
        Rp = rng.bits(p.r)
        target = {"Z": scheme.hash(secret, Rp), "R'": Rp}
    else:
        raise ValueError(theorem)
    return Instance(theorem, target, {sname: secret}, chosen)


def witness_key(scheme: Scheme, inst: Instance, pairs: PairSet) -> KeyMaterial | None:
    """The planted full key under which ``pairs`` were built, or ``None`` if none exists."""
    th = inst.theorem
    if th == "R-LION-S1":
        L = pairs[0].plaintext.left
        return scheme.key(scheme.action.solve(L, inst.secret["M"]), inst.chosen["K2"])
    if th == "R-LION-H1":
        L = pairs[0].plaintext.left
        L2 = pairs[0].ciphertext.left
        seed = _first_seed_hitting(scheme, L2 + L)
        if seed is None:
            return None
        return scheme.key(scheme.action.solve(L, seed), scheme.action.solve(L2, seed))
    keys = {**inst.chosen, **inst.secret}
    return scheme.key(*(keys[name] for name in _names(scheme)))


def planted_oracle(scheme: Scheme, inst: Instance) -> PlantedKeyOracle:
    return PlantedKeyOracle(lambda pairs: witness_key(scheme, inst, pairs))


def run_reduction(
    scheme: Scheme, inst: Instance, n: int, oracle, rng: Rng,
    image: frozenset[BitStr] | None = None, h1_mode: str = "collision",
) -> ReductionReport:
    th, t, c = inst.theorem, inst.target, inst.chosen
    if th == "R-LION-S1":
        return reduce_lion_seed_single(scheme, t["Y"], oracle, rng, chosen=c)
    if th == "R-LION-H1":
        return reduce_lion_hash_single(scheme, oracle, rng, mode=h1_mode, target=t.get("Y"),
                                       image=image, chosen=c)
    fn: Callable = {
        "R-BEAR-H": lambda: reduce_bear_hash(scheme, t["Z"], t["R"], n, oracle, rng, c),
        "R-BEAR2-H": lambda: reduce_bear2_hash(scheme, t["Z"], t["R"], n, oracle, rng, c),
        "R-BEAR2-S": lambda: reduce_bear2_stream(scheme, t["Z"], t["X"], n, oracle, rng, c),
        "R-LION-S": lambda: reduce_lion_stream(scheme, t["Z"], t["L"], n, oracle, rng, c),
        "R-LION2-S": lambda: reduce_lion2_stream(scheme, t["Z"], t["L"], n, oracle, rng, c),
        "R-LION2-H": lambda: reduce_lion2_hash(scheme, t["Z"], t["X"], n, oracle, rng, c),
        "R-LNS-S": lambda: reduce_lioness_stream(scheme, t["Z"], t["L"], n, oracle, rng, c),
        "R-LNS-H": lambda: reduce_lioness_hash(scheme, t["Z"], t["R'"], n, oracle, rng, c),
    }[th]
    return fn()


def solver_agrees(scheme: Scheme, inst: Instance, report: ReductionReport) -> bool:
    """Check the extracted secret against the independent brute-force solvers."""
    x, t, th = report.extracted, inst.target, inst.theorem
    if x is None:
        return False
    p = scheme.params
    if th == "R-LION-S1":
        return x in analysis.solve_stream_equation(scheme.stream, t["Y"], BitStr.zeros(p.l))
    if th == "R-LION-H1":
        y = report.extras["Y~"] if "Y~" in report.extras else t["Y"]
        pre = analysis.hash_preimages(scheme.hash, p.r).get(y.value, [])
        ok = x in pre and x in analysis.image_of_stream(scheme.stream)
        if "R~" in report.extras:
            ok = ok and report.extras["R~"] in pre and x != report.extras["R~"]
        return ok
    if th in ("R-BEAR-H", "R-BEAR2-H"):
        return x in analysis.solve_keyed_hash_equation(scheme.hash, t["Z"], t["R"])
    if th == "R-BEAR2-S":
        return x in analysis.solve_stream_equation(scheme.stream, t["Z"], t["X"])
    if th in ("R-LION-S", "R-LION2-S", "R-LNS-S"):
        return x in analysis.solve_stream_equation(scheme.stream, t["Z"], t["L"], scheme.action)
    if th == "R-LION2-H":
        return x in analysis.solve_keyed_hash_equation(scheme.hash, t["Z"], t["X"])
    if th == "R-LNS-H":
        return x in analysis.solve_keyed_hash_equation(scheme.hash, t["Z"], t["R'"])
    raise ValueError(th)


@dataclass
class TrialResult:
    theorem: str
    n: int
    trial: int
    seed: int
    report: ReductionReport
    witness: KeyMaterial | None
    pairs_valid: bool
    solver_ok: bool | None

    @property
    def verdict(self) -> bool:
        return self.report.verdict

    def record(self) -> str:
        r = self.report
        return "\t".join([
            self.theorem, str(self.seed), str(self.n), "pass" if r.verdict else "fail",
            str(r.oracle_cost), str(r.reduction_cost), r.extracted.hex() if r.extracted else "-",
        ])


def trial_seed(seed: int, theorem: str, n: int, trial: int) -> int:
    return derive_seed(seed, THEOREMS.index(theorem), n, trial)


def run_trial(
    theorem: str, scheme: Scheme, n: int, trial: int, seed: int, mode: str = ALL,
    cap_bits: int = DEFAULT_CAP_BITS, image: frozenset[BitStr] | None = None,
    h1_mode: str = "collision", cross_check: bool = True,
) -> TrialResult:
    ts = trial_seed(seed, theorem, n, trial)
    plant_rng, red_rng = Rng(derive_seed(ts, 0)), Rng(derive_seed(ts, 1))
    inst = plant(theorem, scheme, plant_rng, h1_mode)
    oracle = planted_oracle(scheme, inst) if mode == PLANTED else BruteForceOracle(mode, cap_bits)
    rep = run_reduction(scheme, inst, n, oracle, red_rng, image, h1_mode)
    wit = witness_key(scheme, inst, rep.pairs)
    valid = wit is not None and rep.pairs.consistent_with(scheme, wit)
    solver_ok = solver_agrees(scheme, inst, rep) if (cross_check and rep.verdict) else None
    return TrialResult(theorem, n, trial, ts, rep, wit, valid, solver_ok)


# ---------------------------------------------------------------------------
# Experiment configuration


@dataclass
class ExperimentConfig:
    theorems: list[str] = field(default_factory=lambda: list(THEOREMS))
    l: int = 4
    r: int = 8
    k: int = 5
    n: list[int] = field(default_factory=lambda: [1, 2, 4])
    trials: int = 100
    mode: str = ALL
    seed: int = 1
    output: str | None = None
    h1_mode: str = "collision"
    cap_bits: int = DEFAULT_CAP_BITS
    cross_check: bool = True

    def __post_init__(self):
        self.mode = MODE_ALIASES.get(self.mode, self.mode)

    def validate(self) -> None:
        for th in self.theorems:
            if th not in THEOREMS:
                raise ValueError(f"unknown theorem {th!r}")
        if self.mode not in (*MODES, PLANTED):
            raise ValueError(f"unknown oracle mode {self.mode!r}")
        if self.h1_mode not in ("collision", "preimage"):
            raise ValueError(f"unknown R-LION-H1 mode {self.h1_mode!r}")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if not self.n or min(self.n) < 1:
            raise ValueError("every n must be >= 1")
        params = self.params()
        for th in self.theorems:
            bits = sum(params.key_lengths(SCHEME_FOR[th]))
            if bits > self.cap_bits:
                raise KeySpaceTooLarge(bits, self.cap_bits, f"{th} key space")
            if th not in SINGLE_PAIR and max(self.n) > 1 << min(self.l, self.r):
                raise ValueError(f"n={max(self.n)} exceeds the number of distinct halves")
        if self.r > analysis.PREIMAGE_CAP_BITS or self.r + self.k > 24:
            raise KeySpaceTooLarge(self.r + self.k, 24, "primitive table")

    def params(self) -> Params:
        return Params(self.l, self.r, self.k)

    def runs(self) -> list[tuple[str, int]]:
        out = []
        for th in self.theorems:
            for n in ([1] if th in SINGLE_PAIR else sorted(set(self.n))):
                out.append((th, n))
        return out

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        data = json.loads(Path(path).read_text())
        if isinstance(data.get("theorems"), str):
            data["theorems"] = list(THEOREMS) if data["theorems"] == "all" else [data["theorems"]]
        if isinstance(data.get("n"), int):
            data["n"] = [data["n"]]
        return cls(**data)

    def dump(self) -> str:
        return json.dumps(asdict(self), indent=2)


def run_experiment(cfg: ExperimentConfig) -> list[TrialResult]:
    cfg.validate()
    params = cfg.params()
    schemes: dict[str, Scheme] = {}
    results = []
    for th, n in cfg.runs():
        tag = SCHEME_FOR[th]
        scheme = schemes.setdefault(tag, toy_scheme(tag, params))
        image = analysis.image_of_stream(scheme.stream) if th == "R-LION-H1" else None
        for trial in range(cfg.trials):
            results.append(run_trial(th, scheme, n, trial, cfg.seed, cfg.mode, cfg.cap_bits,
                                     image, cfg.h1_mode, cfg.cross_check))
    return results


def format_report(results: Sequence[TrialResult]) -> str:
    lines = ["#" + "\t".join(REPORT_COLUMNS)]
    lines += [r.record() for r in results]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> list[dict[str, str]]:
    rows = []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        rows.append(dict(zip(REPORT_COLUMNS, line.split("\t"))))
    return rows


def pass_rates(results: Sequence[TrialResult]) -> dict[tuple[str, int], float]:
    tally: dict[tuple[str, int], list[int]] = {}
    for r in results:
        tally.setdefault((r.theorem, r.n), []).append(r.verdict)
    return {key: sum(v) / len(v) for key, v in tally.items()}
