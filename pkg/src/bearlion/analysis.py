"""Exhaustive checks of the structural conditions the reductions rely on.

Everything here enumerates small domains outright: the image of ``S``,
preimages of ``H``, surjectivity of ``K -> H_K(R)``, and the solution sets of
the key-resistance equations ``Z = H_K(R)`` and ``Z = S(L + K1)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import metering
from .ciphers import KeyAction, Translation
from .core import BitStr, Params, Rng
from .oracle import KeySpaceTooLarge
from .primitives import KeyedHash, StreamCipher, UnkeyedHash

IMAGE_CAP_BITS = 20
PREIMAGE_CAP_BITS = 20
SOLVER_CAP_BITS = 24
DEFAULT_SURJECTIVITY_SAMPLES = 100


def image_of_stream(S: StreamCipher, l: int | None = None) -> frozenset[BitStr]:
    l = S.seed_len if l is None else l
    if l > IMAGE_CAP_BITS:
        raise KeySpaceTooLarge(l, IMAGE_CAP_BITS, "stream seed space")
    return frozenset(S(BitStr(x, l)) for x in range(1 << l))


def hash_preimages(H: UnkeyedHash, r: int) -> dict[int, list[BitStr]]:
    """Map every digest value to the full list of its preimages in ``F^r``."""
    if r > PREIMAGE_CAP_BITS:
        raise KeySpaceTooLarge(r, PREIMAGE_CAP_BITS, "hash input space")
    pre: dict[int, list[BitStr]] = {}
    for m in range(1 << r):
        x = BitStr(m, r)
        pre.setdefault(H(x).value, []).append(x)
    return pre


@dataclass
class PairingProfile:
    fraction: float
    covered: int
    image_size: int
    preimage_histogram: dict[int, int] = field(default_factory=dict)
    exact: bool = True
    samples: int | None = None

    def __post_init__(self) -> None:
        assert 0.0 <= self.fraction <= 1.0


def good_pairing_profile(
    S: StreamCipher,
    H: UnkeyedHash,
    params: Params,
    samples: int | None = None,
    rng: Rng | None = None,
) -> PairingProfile:
    """Fraction of ``Y in F^l`` whose ``H``-preimage set meets ``Im(S)``.

    For ``r <= 20`` the preimages are enumerated exactly.  Above that a
    ``samples`` count (and ``rng``) must be given; the preimage sets are then
    built from sampled inputs only, the fraction is a lower bound and the
    profile is flagged ``exact=False``.
    """
    l, r = params.l, params.r
    if l > 16:
        raise KeySpaceTooLarge(l, 16, "digest space")
    image = image_of_stream(S, l)
    if r <= PREIMAGE_CAP_BITS:
        pre = hash_preimages(H, r)
        exact = True
        samples = None
    else:
        if samples is None or rng is None:
            raise KeySpaceTooLarge(r, PREIMAGE_CAP_BITS, "hash input space (no sampling requested)")
        pre = {}
        for _ in range(samples):
            x = rng.bits(r)
            pre.setdefault(H(x).value, []).append(x)
        for x in image:
            pre.setdefault(H(x).value, []).append(x)
        exact = False
    covered = 0
    hist: Counter = Counter()
    for y in range(1 << l):
        ps = pre.get(y, [])
        hist[len(ps)] += 1
        if any(x in image for x in ps):
            covered += 1
    return PairingProfile(covered / (1 << l), covered, len(image), dict(sorted(hist.items())), exact, samples)


@dataclass
class SurjectivityReport:
    fraction: float
    surjective: int
    samples: int


def hr_surjectivity(
    H: KeyedHash,
    params: Params,
    rng: Rng,
    sample_R: int = DEFAULT_SURJECTIVITY_SAMPLES,
) -> SurjectivityReport:
    """Share of random ``R`` for which ``K -> H_K(R)`` hits every ``l``-bit value."""
    k, l = H.key_len, params.l
    if k > SOLVER_CAP_BITS:
        raise KeySpaceTooLarge(k, SOLVER_CAP_BITS)
    if sample_R == 0:
        return SurjectivityReport(0.0, 0, 0)
    hits = 0
    for _ in range(sample_R):
        R = rng.bits(params.r)
        if k < l:
            # pigeonhole: 2^k keys cannot cover 2^l digests
            continue
        metering.record(metering.KEYS_ENUMERATED, 1 << k)
        seen = {H(BitStr(kk, k), R).value for kk in range(1 << k)}
        hits += len(seen) == 1 << l
    return SurjectivityReport(hits / sample_R, hits, sample_R)


def solve_keyed_hash_equation(H: KeyedHash, Z: BitStr, R: BitStr) -> list[BitStr]:
    """All ``K`` with ``H_K(R) = Z``, in increasing order."""
    k = H.key_len
    if k > SOLVER_CAP_BITS:
        raise KeySpaceTooLarge(k, SOLVER_CAP_BITS)
    metering.record(metering.KEYS_ENUMERATED, 1 << k)
    return [K for K in (BitStr(v, k) for v in range(1 << k)) if H(K, R) == Z]


def solve_stream_equation(
    S: StreamCipher, Z: BitStr, L: BitStr, action: KeyAction | None = None
) -> list[BitStr]:
    """All ``K1`` with ``S(tau_K1(L)) = Z`` (translation by default), in increasing order."""
    l = S.seed_len
    if l > SOLVER_CAP_BITS:
        raise KeySpaceTooLarge(l, SOLVER_CAP_BITS)
    action = action or Translation(l)
    metering.record(metering.KEYS_ENUMERATED, 1 << l)
    return [K for K in (BitStr(v, l) for v in range(1 << l)) if S(action.apply(K, L)) == Z]
