"""Stream ciphers and (keyed) hash functions the schemes are built from.

Three families are provided:

* toy primitives: tiny LCG-based maps for ``l <= 16``, small enough that every
  key space, image and preimage can be enumerated;
* zero stubs: constant all-zero outputs, for identity/degeneracy checks;
* production primitives: SHA-256 in counter mode (stream) and SHA-256 over
  ``key || msg`` (keyed hash).

None of the toy constants carry any security meaning.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod

from . import metering
from .core import BitStr, DimensionError, Params, chunks, concat

TOY_MAX_L = 16
SHA256_BITS = 256


def _check(x: BitStr, n: int | None, what: str) -> None:
    if n is not None and x.length != n:
        raise DimensionError(f"{what} has {x.length} bits, expected {n}")


class StreamCipher(ABC):
    """Deterministic expansion of an ``seed_len``-bit seed to ``out_len`` bits."""

    seed_len: int
    out_len: int

    def keystream(self, seed: BitStr) -> BitStr:
        _check(seed, self.seed_len, "seed")
        metering.record(metering.STREAM_CALLS)
        return self._expand(seed)

    __call__ = keystream

    @abstractmethod
    def _expand(self, seed: BitStr) -> BitStr: ...


class UnkeyedHash(ABC):
    in_len: int | None
    out_len: int

    def digest(self, msg: BitStr) -> BitStr:
        _check(msg, self.in_len, "message")
        metering.record(metering.HASH_CALLS)
        return self._digest(msg)

    __call__ = digest

    @abstractmethod
    def _digest(self, msg: BitStr) -> BitStr: ...


class KeyedHash(ABC):
    """``H_K(M) = H'(f(K, M))``; every concrete class here uses ``f = concat``."""

    key_len: int
    in_len: int | None
    out_len: int

    def digest(self, key: BitStr, msg: BitStr) -> BitStr:
        _check(key, self.key_len, "hash key")
        _check(msg, self.in_len, "message")
        metering.record(metering.HASH_CALLS)
        return self._digest(key, msg)

    __call__ = digest

    @abstractmethod
    def _digest(self, key: BitStr, msg: BitStr) -> BitStr: ...


# ---------------------------------------------------------------------------
# Toy primitives


def _lcg(y: int, mask: int) -> int:
    return (5 * y + 1) & mask


class ToyStream(StreamCipher):
    """Full-period LCG ``y <- 5y + 1 mod 2^l``; output bit ``i`` is the top bit of ``y_{i+1}``."""

    def __init__(self, l: int, r: int) -> None:
        if not 1 <= l <= TOY_MAX_L:
            raise DimensionError(f"toy stream needs 1 <= l <= {TOY_MAX_L}")
        self.seed_len, self.out_len = l, r

    def _expand(self, seed: BitStr) -> BitStr:
        mask, top = (1 << self.seed_len) - 1, self.seed_len - 1
        y, out = seed.value, 0
        for i in range(self.out_len):
            y = _lcg(y, mask)
            out |= ((y >> top) & 1) << i
        return BitStr(out, self.out_len)


def toy_fold(msg: BitStr, l: int) -> int:
    mask = (1 << l) - 1
    h = 0
    for c in chunks(msg, l):
        h = ((h ^ c) * 5 + 3) & mask
    return (5 * h + 3) & mask


class ToyHash(UnkeyedHash):
    def __init__(self, l: int, in_len: int | None = None) -> None:
        if not 1 <= l <= TOY_MAX_L:
            raise DimensionError(f"toy hash needs 1 <= l <= {TOY_MAX_L}")
        self.out_len, self.in_len = l, in_len

    def _digest(self, msg: BitStr) -> BitStr:
        return BitStr(toy_fold(msg, self.out_len), self.out_len)


class ToyKeyedHash(KeyedHash):
    def __init__(self, l: int, k: int, in_len: int | None = None) -> None:
        if not 1 <= l <= TOY_MAX_L:
            raise DimensionError(f"toy hash needs 1 <= l <= {TOY_MAX_L}")
        self.out_len, self.key_len, self.in_len = l, k, in_len

    def _digest(self, key: BitStr, msg: BitStr) -> BitStr:
        return BitStr(toy_fold(concat(key, msg), self.out_len), self.out_len)


def toy_stream(params: Params) -> ToyStream:
    return ToyStream(params.l, params.r)


def toy_hash(params: Params) -> ToyHash:
    return ToyHash(params.l, params.r)


def toy_keyed_hash(params: Params) -> ToyKeyedHash:
    if params.k is None:
        raise DimensionError("keyed hash needs k")
    return ToyKeyedHash(params.l, params.k, params.r)


# ---------------------------------------------------------------------------
# Zero stubs


class ZeroStream(StreamCipher):
    def __init__(self, l: int, r: int) -> None:
        self.seed_len, self.out_len = l, r

    def _expand(self, seed: BitStr) -> BitStr:
        return BitStr.zeros(self.out_len)


class ZeroHash(UnkeyedHash):
    def __init__(self, l: int, in_len: int | None = None) -> None:
        self.out_len, self.in_len = l, in_len

    def _digest(self, msg: BitStr) -> BitStr:
        return BitStr.zeros(self.out_len)


class ZeroKeyedHash(KeyedHash):
    def __init__(self, l: int, k: int | None, in_len: int | None = None) -> None:
        self.out_len, self.key_len, self.in_len = l, k, in_len

    def _digest(self, key: BitStr, msg: BitStr) -> BitStr:
        return BitStr.zeros(self.out_len)


def stub_zero(params: Params) -> tuple[ZeroStream, ZeroKeyedHash, ZeroHash]:
    return (
        ZeroStream(params.l, params.r),
        ZeroKeyedHash(params.l, params.k, params.r),
        ZeroHash(params.l, params.r),
    )


# ---------------------------------------------------------------------------
# SHA-256 based primitives


def _truncate(data: bytes, n: int) -> BitStr:
    return BitStr(int.from_bytes(data, "little") & ((1 << n) - 1), n)


class Sha256Stream(StreamCipher):
    """Block ``i`` is ``SHA256(seed_bytes || i)`` with ``i`` a 64-bit big-endian counter."""

    def __init__(self, r: int, l: int = SHA256_BITS) -> None:
        self.seed_len, self.out_len = l, r

    def _expand(self, seed: BitStr) -> BitStr:
        prefix = hashlib.sha256(seed.to_bytes())
        nblocks = (self.out_len + SHA256_BITS - 1) // SHA256_BITS
        out = bytearray()
        for i in range(nblocks):
            h = prefix.copy()
            h.update(i.to_bytes(8, "big"))
            out += h.digest()
        return _truncate(bytes(out), self.out_len)


class Sha256Hash(UnkeyedHash):
    def __init__(self, in_len: int | None = None, l: int = SHA256_BITS) -> None:
        if not 1 <= l <= SHA256_BITS:
            raise DimensionError(f"digest length must be 1..{SHA256_BITS}")
        self.out_len, self.in_len = l, in_len

    def _digest(self, msg: BitStr) -> BitStr:
        return _truncate(hashlib.sha256(msg.to_bytes()).digest(), self.out_len)


class Sha256KeyedHash(KeyedHash):
    """Key-prepend construction ``SHA256(key_bytes || msg_bytes)``."""

    def __init__(self, k: int, in_len: int | None = None, l: int = SHA256_BITS) -> None:
        if not 1 <= l <= SHA256_BITS:
            raise DimensionError(f"digest length must be 1..{SHA256_BITS}")
        self.out_len, self.key_len, self.in_len = l, k, in_len

    def _digest(self, key: BitStr, msg: BitStr) -> BitStr:
        h = hashlib.sha256(key.to_bytes())
        h.update(msg.to_bytes())
        return _truncate(h.digest(), self.out_len)


def prod_stream(r: int, l: int = SHA256_BITS) -> Sha256Stream:
    return Sha256Stream(r, l)


def prod_hash(r: int | None = None, l: int = SHA256_BITS) -> Sha256Hash:
    return Sha256Hash(r, l)


def prod_keyed_hash(k: int, r: int | None = None, l: int = SHA256_BITS) -> Sha256KeyedHash:
    return Sha256KeyedHash(k, r, l)
