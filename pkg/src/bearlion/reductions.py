"""Key-recovery oracles turned into solvers for the underlying primitives.

Each ``reduce_*`` function receives only the public target of a hard problem
(for example ``Y = S(M)`` or ``(Z, R)`` with ``Z = H_K1(R)``), builds
plaintext/ciphertext pairs that are consistent with *some* key containing the
unknown secret, hands them to a key-recovery oracle and reads the secret back
out of the returned key.  Subkeys the construction is free to pick are taken
from ``chosen`` when supplied and drawn from ``rng`` otherwise.

When the oracle returns several consistent keys, each is tried against the
target equation and the first that satisfies it is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from . import metering
from .ciphers import Scheme
from .core import BitStr, Block, KeyMaterial, Rng
from .oracle import Oracle, OracleAnswer, Pair, PairSet

THEOREMS = (
    "R-LION-S1", "R-LION-H1", "R-BEAR-H", "R-BEAR2-H", "R-BEAR2-S",
    "R-LION-S", "R-LION2-S", "R-LION2-H", "R-LNS-S", "R-LNS-H",
)
SINGLE_PAIR = ("R-LION-S1", "R-LION-H1")
SCHEME_FOR = {
    "R-LION-S1": "LION", "R-LION-H1": "LION", "R-BEAR-H": "BEAR",
    "R-BEAR2-H": "BEAR2", "R-BEAR2-S": "BEAR2", "R-LION-S": "LION",
    "R-LION2-S": "LION2", "R-LION2-H": "LION2", "R-LNS-S": "LIONESS", "R-LNS-H": "LIONESS",
}
LION_H1_RETRIES = 64


class ReductionError(ValueError):
    pass


@dataclass
class ReductionReport:
    theorem: str
    n: int
    target: dict[str, BitStr]
    chosen: dict[str, BitStr]
    pairs: PairSet | None = None
    answer: OracleAnswer | None = None
    extracted: BitStr | None = None
    verdict: bool = False
    oracle_cost: int = 0
    reduction_cost: int = 0
    reduction_enumerations: int = 0
    attempts: int = 1
    diagnosis: str = ""
    extras: dict[str, BitStr] = field(default_factory=dict)

    @property
    def candidates(self) -> int:
        return len(self.answer.keys) if self.answer else 0


def _pick(chosen: Mapping[str, BitStr] | None, name: str, n: int, rng: Rng) -> BitStr:
    if chosen and name in chosen:
        v = chosen[name]
        if v.length != n:
            raise ReductionError(f"chosen {name} has {v.length} bits, expected {n}")
        return v
    return rng.bits(n)


def _need(scheme: Scheme, tag: str, n: int | None = None) -> None:
    if scheme.tag != tag:
        raise ReductionError(f"this reduction attacks {tag}, got {scheme.tag}")
    if n is not None and n < 1:
        raise ReductionError("a pair set needs n >= 1")


def _check_len(x: BitStr, n: int, name: str) -> None:
    if x.length != n:
        raise ReductionError(f"{name} has {x.length} bits, expected {n}")


def _query(
    report: ReductionReport,
    scheme: Scheme,
    oracle: Oracle,
    pairs: Iterable[Pair],
    extract: Callable[[KeyMaterial], BitStr],
    holds: Callable[[BitStr], bool],
) -> None:
    report.pairs = PairSet(pairs)
    ans = oracle(scheme, report.pairs)
    report.answer = ans
    report.oracle_cost += ans.keys_scanned
    report.extracted, report.verdict = None, False
    for key in ans.keys:
        secret = extract(key)
        if report.extracted is None:
            report.extracted = secret
        if holds(secret):
            report.extracted, report.verdict = secret, True
            break
    if not ans.keys:
        report.diagnosis = "oracle returned no consistent key"
    elif not report.verdict:
        report.diagnosis = "no returned key satisfies the target equation"
    else:
        report.diagnosis = ""


def _finish(report: ReductionReport, meter: metering.CostMeter) -> ReductionReport:
    report.reduction_cost = meter.phase_total("reduction")
    report.reduction_enumerations = meter.get("reduction", metering.KEYS_ENUMERATED)
    return report


# ---------------------------------------------------------------------------
# Single-pair LION


def reduce_lion_seed_single(
    scheme: Scheme, Y: BitStr, oracle: Oracle, rng: Rng, chosen: Mapping[str, BitStr] | None = None
) -> ReductionReport:
    """Find a seed ``M'`` with ``S(M') = Y`` from one LION pair."""
    _need(scheme, "LION")
    p = scheme.params
    _check_len(Y, p.r, "Y")
    with metering.metered() as meter:
        K2 = _pick(chosen, "K2", p.l, rng)
        L, R = rng.bits(p.l), rng.bits(p.r)
        Rb = R + Y
        L2 = L + scheme.hash(Rb)
        R2 = Rb + scheme.S(L2, K2)
        rep = ReductionReport("R-LION-S1", 1, {"Y": Y}, {"K2": K2, "L": L, "R": R})
        _query(rep, scheme, oracle, [Pair(Block(L, R), Block(L2, R2))],
               lambda key: scheme.action.apply(key[0], L),
               lambda M: scheme.stream(M) == Y)
    return _finish(rep, meter)


def reduce_lion_hash_single(
    scheme: Scheme,
    oracle: Oracle,
    rng: Rng,
    mode: str = "collision",
    target: BitStr | None = None,
    image: frozenset[BitStr] | None = None,
    retries: int = LION_H1_RETRIES,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Collision (``H(X) = H(R~)``, ``X != R~``) or preimage (``H(X) = target``) for LION's hash.

    The single pair is ``(L, 0) -> (L + Y~, 0)``.  In collision mode ``R~`` is
    sampled outside ``image`` when the image of ``S`` is supplied, and
    resampled (up to ``retries`` times) whenever the oracle finds no key,
    which happens exactly when ``H^-1(Y~)`` misses ``Im(S)``.
    """
    _need(scheme, "LION")
    p = scheme.params
    if mode not in ("collision", "preimage"):
        raise ReductionError(f"unknown mode {mode!r}")
    if mode == "preimage":
        if target is None:
            raise ReductionError("preimage mode needs a target")
        _check_len(target, p.l, "target")
    zero = BitStr.zeros(p.r)
    with metering.metered() as meter:
        L = _pick(chosen, "L", p.l, rng)
        rep = ReductionReport("R-LION-H1", 1, {} if target is None else {"Y": target}, {"L": L})
        attempts = 1 if mode == "preimage" else retries
        for attempt in range(1, attempts + 1):
            if mode == "collision":
                Rt = rng.bits(p.r)
                while image is not None and Rt in image:
                    Rt = rng.bits(p.r)
                Yt = scheme.hash(Rt)
                rep.extras = {"R~": Rt, "Y~": Yt}
                holds = lambda X, Yt=Yt, Rt=Rt: scheme.hash(X) == Yt and X != Rt
            else:
                Yt = target
                holds = lambda X: scheme.hash(X) == target
            rep.attempts = attempt
            _query(rep, scheme, oracle, [Pair(Block(L, zero), Block(L + Yt, zero))],
                   lambda key: scheme.S(L, key[0]), holds)
            if rep.verdict:
                break
        if not rep.verdict and not rep.candidates:
            rep.diagnosis = (f"good-pairing violation: no X in H^-1(Y~) and Im(S) after {rep.attempts} "
                             f"attempt(s)")
    return _finish(rep, meter)


# ---------------------------------------------------------------------------
# Multi-pair reductions


def reduce_bear_hash(
    scheme: Scheme, Z: BitStr, R: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = H_K1(R)`` for ``K1`` with BEAR plaintexts ``(L_i, R)``."""
    _need(scheme, "BEAR", n)
    p = scheme.params
    _check_len(Z, p.l, "Z")
    _check_len(R, p.r, "R")
    with metering.metered() as meter:
        K2 = _pick(chosen, "K2", p.k, rng)
        pairs = []
        for L in rng.distinct(n, p.l):
            Lb = L + Z
            R2 = R + scheme.S(Lb)
            pairs.append(Pair(Block(L, R), Block(Lb + scheme.hash(K2, R2), R2)))
        rep = ReductionReport("R-BEAR-H", n, {"Z": Z, "R": R}, {"K2": K2})
        _query(rep, scheme, oracle, pairs, lambda key: key[0], lambda K1: scheme.hash(K1, R) == Z)
    return _finish(rep, meter)


def reduce_bear2_hash(
    scheme: Scheme, Z: BitStr, R: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = H_K1(R)`` through BEAR2, picking ``K2`` and ``K3``."""
    _need(scheme, "BEAR2", n)
    p = scheme.params
    _check_len(Z, p.l, "Z")
    _check_len(R, p.r, "R")
    with metering.metered() as meter:
        K2 = _pick(chosen, "K2", p.l, rng)
        K3 = _pick(chosen, "K3", p.k, rng)
        pairs = []
        for L in rng.distinct(n, p.l):
            Lb = L + Z
            R2 = R + scheme.S(Lb + K2)
            pairs.append(Pair(Block(L, R), Block(Lb + scheme.hash(K3, R2), R2)))
        rep = ReductionReport("R-BEAR2-H", n, {"Z": Z, "R": R}, {"K2": K2, "K3": K3})
        _query(rep, scheme, oracle, pairs, lambda key: key[0], lambda K1: scheme.hash(K1, R) == Z)
    return _finish(rep, meter)


def reduce_bear2_stream(
    scheme: Scheme, Z: BitStr, X: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = S(X + K2)`` for ``K2``; plaintexts are chosen so that ``L_bar = X``."""
    _need(scheme, "BEAR2", n)
    p = scheme.params
    _check_len(Z, p.r, "Z")
    _check_len(X, p.l, "X")
    with metering.metered() as meter:
        K1 = _pick(chosen, "K1", p.k, rng)
        K3 = _pick(chosen, "K3", p.k, rng)
        pairs = []
        for R in rng.distinct(n, p.r):
            L = X + scheme.hash(K1, R)
            R2 = R + Z
            pairs.append(Pair(Block(L, R), Block(X + scheme.hash(K3, R2), R2)))
        rep = ReductionReport("R-BEAR2-S", n, {"Z": Z, "X": X}, {"K1": K1, "K3": K3})
        _query(rep, scheme, oracle, pairs, lambda key: key[1], lambda K2: scheme.stream(X + K2) == Z)
    return _finish(rep, meter)


def reduce_lion_stream(
    scheme: Scheme, Z: BitStr, L: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = S(L + K1)`` for ``K1`` with LION plaintexts ``(L, R_i)``."""
    _need(scheme, "LION", n)
    p = scheme.params
    _check_len(Z, p.r, "Z")
    _check_len(L, p.l, "L")
    with metering.metered() as meter:
        K2 = _pick(chosen, "K2", p.l, rng)
        pairs = []
        for R in rng.distinct(n, p.r):
            Rb = R + Z
            L2 = L + scheme.hash(Rb)
            pairs.append(Pair(Block(L, R), Block(L2, Rb + scheme.S(L2, K2))))
        rep = ReductionReport("R-LION-S", n, {"Z": Z, "L": L}, {"K2": K2})
        _query(rep, scheme, oracle, pairs, lambda key: key[0], lambda K1: scheme.S(L, K1) == Z)
    return _finish(rep, meter)


def reduce_lion2_stream(
    scheme: Scheme, Z: BitStr, L: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = S(L + K1)`` through LION2, picking ``K2`` and ``K3``."""
    _need(scheme, "LION2", n)
    p = scheme.params
    _check_len(Z, p.r, "Z")
    _check_len(L, p.l, "L")
    with metering.metered() as meter:
        K2 = _pick(chosen, "K2", p.k, rng)
        K3 = _pick(chosen, "K3", p.l, rng)
        pairs = []
        for R in rng.distinct(n, p.r):
            Rb = R + Z
            L2 = L + scheme.hash(K2, Rb)
            pairs.append(Pair(Block(L, R), Block(L2, Rb + scheme.S(L2, K3))))
        rep = ReductionReport("R-LION2-S", n, {"Z": Z, "L": L}, {"K2": K2, "K3": K3})
        _query(rep, scheme, oracle, pairs, lambda key: key[0], lambda K1: scheme.S(L, K1) == Z)
    return _finish(rep, meter)


def reduce_lion2_hash(
    scheme: Scheme, Z: BitStr, X: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = H_K2(X)`` for ``K2``; right halves ``R_i = X + S(L_i + K1)`` force ``R_bar = X``."""
    _need(scheme, "LION2", n)
    p = scheme.params
    _check_len(Z, p.l, "Z")
    _check_len(X, p.r, "X")
    with metering.metered() as meter:
        K1 = _pick(chosen, "K1", p.l, rng)
        K3 = _pick(chosen, "K3", p.l, rng)
        pairs = []
        for L in rng.distinct(n, p.l):
            R = X + scheme.S(L, K1)
            L2 = L + Z
            pairs.append(Pair(Block(L, R), Block(L2, X + scheme.S(L2, K3))))
        rep = ReductionReport("R-LION2-H", n, {"Z": Z, "X": X}, {"K1": K1, "K3": K3})
        _query(rep, scheme, oracle, pairs, lambda key: key[1], lambda K2: scheme.hash(K2, X) == Z)
    return _finish(rep, meter)


def reduce_lioness_stream(
    scheme: Scheme, Z: BitStr, L: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = S(L + K1)`` through LIONESS, picking ``K2, K3, K4``."""
    _need(scheme, "LIONESS", n)
    p = scheme.params
    _check_len(Z, p.r, "Z")
    _check_len(L, p.l, "L")
    with metering.metered() as meter:
        K2 = _pick(chosen, "K2", p.k, rng)
        K3 = _pick(chosen, "K3", p.l, rng)
        K4 = _pick(chosen, "K4", p.k, rng)
        pairs = []
        for R in rng.distinct(n, p.r):
            Rb = R + Z
            Lb = L + scheme.hash(K2, Rb)
            R2 = Rb + scheme.S(Lb, K3)
            pairs.append(Pair(Block(L, R), Block(Lb + scheme.hash(K4, R2), R2)))
        rep = ReductionReport("R-LNS-S", n, {"Z": Z, "L": L}, {"K2": K2, "K3": K3, "K4": K4})
        _query(rep, scheme, oracle, pairs, lambda key: key[0], lambda K1: scheme.S(L, K1) == Z)
    return _finish(rep, meter)


def reduce_lioness_hash(
    scheme: Scheme, Z: BitStr, Rp: BitStr, n: int, oracle: Oracle, rng: Rng,
    chosen: Mapping[str, BitStr] | None = None,
) -> ReductionReport:
    """Solve ``Z = H_K4(R')`` for ``K4``; plaintexts come from decrypting ``(L'_i, R')``."""
    _need(scheme, "LIONESS", n)
    p = scheme.params
    _check_len(Z, p.l, "Z")
    _check_len(Rp, p.r, "R'")
    with metering.metered() as meter:
        K1 = _pick(chosen, "K1", p.l, rng)
        K2 = _pick(chosen, "K2", p.k, rng)
        K3 = _pick(chosen, "K3", p.l, rng)
        pairs = []
        for L2 in rng.distinct(n, p.l):
            Lb = L2 + Z
            Rb = Rp + scheme.S(Lb, K3)
            L = Lb + scheme.hash(K2, Rb)
            pairs.append(Pair(Block(L, Rb + scheme.S(L, K1)), Block(L2, Rp)))
        rep = ReductionReport("R-LNS-H", n, {"Z": Z, "R'": Rp}, {"K1": K1, "K2": K2, "K3": K3})
        _query(rep, scheme, oracle, pairs, lambda key: key[3], lambda K4: scheme.hash(K4, Rp) == Z)
    return _finish(rep, meter)
