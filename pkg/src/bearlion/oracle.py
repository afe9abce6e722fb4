"""Brute-force known-plaintext key-recovery oracles for toy-scale schemes.

The oracle tabulates the scheme's primitives once (``S`` over all seeds,
``H_K(R)`` over all keys and inputs, the key action over all pairs) and then
evaluates the scheme for a whole slab of candidate keys at a time with numpy
gathers.  Keys are enumerated in lexicographic order of the subkey tuple with
``K1`` most significant, which is also the order of :meth:`KeyMaterial.index`.
"""

from __future__ import annotations

import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from . import metering
from .ciphers import Scheme, Translation
from .core import BitStr, Block, DimensionError, KeyMaterial, Rng, random_key

FIRST = "first-consistent"
ALL = "all-consistent"
MODES = (FIRST, ALL)

DEFAULT_CAP_BITS = 24
TABLE_CAP_BITS = 24
CHUNK_BITS = 16


class KeySpaceTooLarge(Exception):
    def __init__(self, bits: int, cap: int, what: str = "key space") -> None:
        self.bits, self.cap = bits, cap
        super().__init__(
            f"{what} has 2^{bits} = {1 << bits:,} entries, above the cap of 2^{cap}; "
            f"exhaustive search would cost about {1 << bits:,} scheme evaluations per pair"
        )


@dataclass(frozen=True)
class Pair:
    plaintext: Block
    ciphertext: Block


class PairSet(tuple):
    """Non-empty sequence of known plaintext/ciphertext pairs."""

    def __new__(cls, pairs: Iterable[Pair | tuple[Block, Block]]):
        items = [p if isinstance(p, Pair) else Pair(*p) for p in pairs]
        if not items:
            raise ValueError("a pair set needs at least one pair")
        return super().__new__(cls, items)

    def check(self, scheme: Scheme) -> None:
        for p in self:
            p.plaintext.check(scheme.params)
            p.ciphertext.check(scheme.params)

    def consistent_with(self, scheme: Scheme, key: KeyMaterial) -> bool:
        return all(scheme.encrypt(key, p.plaintext) == p.ciphertext for p in self)


@dataclass
class OracleAnswer:
    mode: str
    keys: list[KeyMaterial] = field(default_factory=list)
    keys_scanned: int = 0

    def __bool__(self) -> bool:
        return bool(self.keys)


class Oracle(Protocol):
    def __call__(self, scheme: Scheme, pairs: PairSet) -> OracleAnswer: ...


# ---------------------------------------------------------------------------
# Tabulation


@dataclass
class _Tables:
    S: np.ndarray
    H: np.ndarray          # (2^k, 2^r) keyed or (2^r,) unkeyed
    act: np.ndarray | None  # (2^l, 2^l) indexed [key, x]; None for translation


_table_cache: "weakref.WeakKeyDictionary[Scheme, _Tables]" = weakref.WeakKeyDictionary()


def _tabulate(scheme: Scheme) -> _Tables:
    cached = _table_cache.get(scheme)
    if cached is not None:
        return cached

    p = scheme.params
    if p.r > 63:
        raise DimensionError("oracle tables need r <= 63")
    h_bits = p.r + (p.k if scheme.keyed_hash else 0)
    if h_bits > TABLE_CAP_BITS or p.l > TABLE_CAP_BITS // 2:
        raise KeySpaceTooLarge(max(h_bits, 2 * p.l), TABLE_CAP_BITS, "primitive table")
    S = np.array([scheme.stream(BitStr(x, p.l)).value for x in range(1 << p.l)], dtype=np.int64)
    if scheme.keyed_hash:
        H = np.array(
            [[scheme.hash(BitStr(kk, p.k), BitStr(m, p.r)).value for m in range(1 << p.r)]
             for kk in range(1 << p.k)],
            dtype=np.int64,
        )
    else:
        H = np.array([scheme.hash(BitStr(m, p.r)).value for m in range(1 << p.r)], dtype=np.int64)
    act = None
    if not isinstance(scheme.action, Translation):
        act = np.array(
            [[scheme.action.apply(BitStr(kk, p.l), BitStr(x, p.l)).value for x in range(1 << p.l)]
             for kk in range(1 << p.l)],
            dtype=np.int64,
        )
    t = _Tables(S, H, act)
    _table_cache[scheme] = t
    return t


def _seed(t: _Tables, key, x):
    return key ^ x if t.act is None else t.act[key, x]


def _batch_encrypt(tag: str, t: _Tables, ks: Sequence[np.ndarray], L: int, R: int):
    S, H = t.S, t.H
    if tag == "BEAR":
        k1, k2 = ks
        Lb = L ^ H[k1, R]
        R2 = R ^ S[Lb]
        return Lb ^ H[k2, R2], R2
    if tag == "BEAR2":
        k1, k2, k3 = ks
        Lb = L ^ H[k1, R]
        R2 = R ^ S[Lb ^ k2]
        return Lb ^ H[k3, R2], R2
    if tag == "LION":
        k1, k2 = ks
        Rb = R ^ S[_seed(t, k1, L)]
        L2 = L ^ H[Rb]
        return L2, Rb ^ S[_seed(t, k2, L2)]
    if tag == "LION2":
        k1, k2, k3 = ks
        Rb = R ^ S[_seed(t, k1, L)]
        L2 = L ^ H[k2, Rb]
        return L2, Rb ^ S[_seed(t, k3, L2)]
    if tag == "LIONESS":
        k1, k2, k3, k4 = ks
        Rb = R ^ S[_seed(t, k1, L)]
        Lb = L ^ H[k2, Rb]
        R2 = Rb ^ S[_seed(t, k3, Lb)]
        return Lb ^ H[k4, R2], R2
    raise ValueError(tag)


def _split_index(idx: np.ndarray, lengths: Sequence[int]) -> list[np.ndarray]:
    out = []
    for n in reversed(lengths):
        out.append(idx & ((1 << n) - 1))
        idx = idx >> n
    return out[::-1]


def _scan(scheme: Scheme, t: _Tables, pairs: PairSet, start: int, stop: int) -> np.ndarray:
    """Indices in ``[start, stop)`` of keys consistent with every pair."""
    idx = np.arange(start, stop, dtype=np.int64)
    for p in pairs:
        ks = _split_index(idx, scheme.key_lengths)
        L2, R2 = _batch_encrypt(scheme.tag, t, ks, p.plaintext.left.value, p.plaintext.right.value)
        idx = idx[(L2 == p.ciphertext.left.value) & (R2 == p.ciphertext.right.value)]
        if idx.size == 0:
            break
    return idx


def brute_force_oracle(
    scheme: Scheme,
    pairs: PairSet,
    mode: str = ALL,
    cap_bits: int = DEFAULT_CAP_BITS,
    workers: int = 1,
) -> OracleAnswer:
    """Exhaustive key search; every returned key encrypts every pair correctly."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    pairs = PairSet(pairs)
    pairs.check(scheme)
    bits = scheme.key_bits
    if bits > cap_bits:
        raise KeySpaceTooLarge(bits, cap_bits)
    total = 1 << bits
    with metering.phase("oracle"):
        t = _tabulate(scheme)
        step = 1 << CHUNK_BITS
        bounds = [(s, min(s + step, total)) for s in range(0, total, step)]
        if workers > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(workers) as ex:
                parts = list(ex.map(lambda b: _scan(scheme, t, pairs, *b), bounds))
        else:
            parts = []
            for b in bounds:
                parts.append(_scan(scheme, t, pairs, *b))
                if mode == FIRST and parts[-1].size:
                    break
        hits = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        if mode == FIRST:
            hits = hits[:1]
            scanned = int(hits[0]) + 1 if hits.size else total
        else:
            scanned = total
        metering.record(metering.KEYS_ENUMERATED, scanned)
    keys = [KeyMaterial.from_index(scheme.tag, scheme.key_lengths, int(i)) for i in hits]
    return OracleAnswer(mode, keys, scanned)


class BruteForceOracle:
    def __init__(self, mode: str = ALL, cap_bits: int = DEFAULT_CAP_BITS, workers: int = 1) -> None:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.mode, self.cap_bits, self.workers = mode, cap_bits, workers

    def __call__(self, scheme: Scheme, pairs: PairSet) -> OracleAnswer:
        return brute_force_oracle(scheme, pairs, self.mode, self.cap_bits, self.workers)

    def __repr__(self) -> str:
        return f"BruteForceOracle({self.mode!r}, cap_bits={self.cap_bits})"


class PlantedKeyOracle:
    """Idealized oracle that answers with a key known to whoever planted the instance.

    ``key_for`` maps the queried pairs to the planted key (or ``None``); the
    answer is empty unless that key really is consistent with the pairs.
    """

    mode = "planted"

    def __init__(self, key_for: Callable[[PairSet], KeyMaterial | None]) -> None:
        self.key_for = key_for

    def __call__(self, scheme: Scheme, pairs: PairSet) -> OracleAnswer:
        with metering.phase("oracle"):
            key = self.key_for(pairs)
            ok = key is not None and pairs.consistent_with(scheme, key)
        return OracleAnswer(self.mode, [key] if ok else [], 1)


def consistent_count_profile(
    scheme: Scheme,
    n_max: int,
    trials: int,
    rng: Rng,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> list[tuple[int, float]]:
    """Mean number of keys consistent with ``n`` random pairs under a planted key.

    Each trial plants one key and draws ``n_max`` distinct random plaintexts;
    the count for ``n`` uses the first ``n`` of them.
    """
    if trials == 0:
        return []
    p = scheme.params
    sums = [0] * n_max
    for _ in range(trials):
        key = random_key(scheme.tag, p, rng)
        pts = [Block.from_bitstr(m, p.l) for m in rng.distinct(n_max, p.l + p.r)]
        pairs = [Pair(pt, scheme.encrypt(key, pt)) for pt in pts]
        for n in range(1, n_max + 1):
            ans = brute_force_oracle(scheme, pairs[:n], ALL, cap_bits)
            sums[n - 1] += len(ans.keys)
    return [(n, sums[n - 1] / trials) for n in range(1, n_max + 1)]
