"""Bit strings, scheme dimensions, blocks, keys and the deterministic RNG.

Bit order is fixed everywhere: bit ``i`` of a :class:`BitStr` is bit
``i % 8`` (counting from the least-significant end) of byte ``i // 8`` in the
serialized form.  Equivalently, a BitStr is the little-endian integer
``sum(bit_i << i)`` together with an explicit length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

MASK64 = (1 << 64) - 1


class DimensionError(ValueError):
    """Raised when lengths of bit strings, keys or parameters disagree."""


@dataclass(frozen=True, slots=True)
class BitStr:
    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DimensionError(f"negative length {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise DimensionError(f"value does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, n: int) -> BitStr:
        return cls(0, n)

    @classmethod
    def from_uint(cls, v: int, n: int) -> BitStr:
        return cls(v, n)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BitStr:
        v = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"bit {i} is {b!r}")
            v |= b << i
        return cls(v, len(bits))

    @classmethod
    def from_bytes(cls, data: bytes, n: int | None = None) -> BitStr:
        if n is None:
            n = 8 * len(data)
        if len(data) != (n + 7) // 8:
            raise DimensionError(f"{len(data)} bytes cannot hold exactly {n} bits")
        v = int.from_bytes(data, "little")
        if v >> n:
            raise DimensionError("unused high bits of the last byte are not zero")
        return cls(v, n)

    @classmethod
    def from_hex(cls, text: str, n: int) -> BitStr:
        return cls.from_bytes(bytes.fromhex(text), n)

    def to_uint(self) -> int:
        return self.value

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.length + 7) // 8, "little")

    def hex(self) -> str:
        return self.to_bytes().hex()

    def bits(self) -> list[int]:
        return [(self.value >> i) & 1 for i in range(self.length)]

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: BitStr) -> BitStr:
        return xor(self, other)

    def __add__(self, other: BitStr) -> BitStr:
        # addition in F_2^n
        return xor(self, other)

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitStr({''.join(map(str, reversed(self.bits())))!s}b, n={self.length})"
        return f"BitStr(0x{self.hex()}, n={self.length})"


def xor(a: BitStr, b: BitStr) -> BitStr:
    if a.length != b.length:
        raise DimensionError(f"xor of {a.length}-bit and {b.length}-bit strings")
    return BitStr(a.value ^ b.value, a.length)


def concat(a: BitStr, b: BitStr) -> BitStr:
    """``a`` occupies bit positions ``0..len(a)-1``, ``b`` follows."""
    return BitStr(a.value | (b.value << a.length), a.length + b.length)


def split(m: BitStr, l: int) -> tuple[BitStr, BitStr]:
    if not 0 <= l < m.length:
        raise DimensionError(f"cannot split {m.length} bits at {l}")
    return BitStr(m.value & ((1 << l) - 1), l), BitStr(m.value >> l, m.length - l)


def chunks(m: BitStr, width: int) -> Iterator[int]:
    """Integer values of consecutive ``width``-bit chunks, last one zero-padded."""
    mask = (1 << width) - 1
    for start in range(0, m.length, width):
        yield (m.value >> start) & mask


# ---------------------------------------------------------------------------
# Deterministic randomness


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(seed: int, *labels: int) -> int:
    """Mix integer labels into a 64-bit seed (used for per-trial streams)."""
    state = seed & MASK64
    for label in labels:
        state, out = _splitmix64(state ^ (label & MASK64))
        state = out
    return state


class Rng:
    """SplitMix64 generator.

    Every experiment draws all of its randomness from one of these, so a
    single 64-bit seed reproduces a full transcript.  ``bits(n)`` takes
    ``ceil(n/64)`` successive outputs, places output ``j`` at bit positions
    ``64j .. 64j+63`` and truncates to ``n`` bits.
    """

    def __init__(self, seed: int) -> None:
        self.seed = seed & MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state, out = _splitmix64(self._state)
        return out

    def bits(self, n: int) -> BitStr:
        if n < 0:
            raise ValueError("negative bit count")
        words = b"".join(self.next_u64().to_bytes(8, "little") for _ in range((n + 63) // 64))
        return BitStr(int.from_bytes(words, "little") & ((1 << n) - 1), n)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbits = max(1, (bound - 1).bit_length())
        while True:
            v = self.bits(nbits).value
            if v < bound:
                return v

    def distinct(self, n: int, width: int) -> list[BitStr]:
        """``n`` pairwise distinct random ``width``-bit strings, in draw order."""
        if n > 1 << width:
            raise DimensionError(f"only {1 << width} distinct {width}-bit strings exist")
        seen: set[int] = set()
        out = []
        while len(out) < n:
            b = self.bits(width)
            if b.value not in seen:
                seen.add(b.value)
                out.append(b)
        return out


def random_bits(n: int, rng: Rng) -> BitStr:
    return rng.bits(n)


# ---------------------------------------------------------------------------
# Scheme dimensions, blocks, keys

SCHEMES = ("BEAR", "LION", "LIONESS", "BEAR2", "LION2")


@dataclass(frozen=True)
class Params:
    """Left length ``l``, right length ``r`` and key-half length ``k``."""

    l: int
    r: int
    k: int | None = None

    def __post_init__(self) -> None:
        if self.l < 1:
            raise DimensionError("l must be positive")
        if self.r <= self.l:
            raise DimensionError(f"need r > l, got l={self.l}, r={self.r}")
        if self.k is not None and self.k < 1:
            raise DimensionError("k must be positive")

    def key_lengths(self, scheme: str) -> tuple[int, ...]:
        l, k = self.l, self.k
        if scheme == "LION":
            return (l, l)
        if k is None:
            raise DimensionError(f"{scheme} needs a key length k")
        if scheme in ("BEAR", "BEAR2") and k <= l:
            raise DimensionError(f"{scheme} needs k > l, got k={k}, l={l}")
        return {
            "BEAR": (k, k),
            "LIONESS": (l, k, l, k),
            "BEAR2": (k, l, k),
            "LION2": (l, k, l),
        }[scheme]


@dataclass(frozen=True)
class Block:
    left: BitStr
    right: BitStr

    def check(self, params: Params) -> None:
        if self.left.length != params.l or self.right.length != params.r:
            raise DimensionError(
                f"block ({self.left.length}, {self.right.length}) vs params ({params.l}, {params.r})"
            )

    def join(self) -> BitStr:
        return concat(self.left, self.right)

    @classmethod
    def from_bitstr(cls, m: BitStr, l: int) -> Block:
        left, right = split(m, l)
        return cls(left, right)


@dataclass(frozen=True)
class KeyMaterial:
    scheme: str
    subkeys: tuple[BitStr, ...]

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def __getitem__(self, i: int) -> BitStr:
        return self.subkeys[i]

    def __len__(self) -> int:
        return len(self.subkeys)

    def check(self, params: Params) -> None:
        want = params.key_lengths(self.scheme)
        got = tuple(s.length for s in self.subkeys)
        if want != got:
            raise DimensionError(f"{self.scheme} key lengths {got}, expected {want}")

    def index(self) -> int:
        """Position in lexicographic order of the subkey tuple (K1 most significant)."""
        v = 0
        for s in self.subkeys:
            v = (v << s.length) | s.value
        return v

    @classmethod
    def from_index(cls, scheme: str, lengths: Sequence[int], index: int) -> KeyMaterial:
        subs = []
        for n in reversed(lengths):
            subs.append(BitStr(index & ((1 << n) - 1), n))
            index >>= n
        if index:
            raise DimensionError("key index out of range")
        return cls(scheme, tuple(reversed(subs)))

    def to_bytes(self) -> bytes:
        return b"".join(s.to_bytes() for s in self.subkeys)

    @classmethod
    def from_bytes(cls, scheme: str, lengths: Sequence[int], data: bytes) -> KeyMaterial:
        sizes = [(n + 7) // 8 for n in lengths]
        if len(data) != sum(sizes):
            raise DimensionError(f"{scheme} key needs {sum(sizes)} bytes, got {len(data)}")
        subs, pos = [], 0
        for n, size in zip(lengths, sizes):
            subs.append(BitStr.from_bytes(data[pos:pos + size], n))
            pos += size
        return cls(scheme, tuple(subs))

    def hex(self) -> str:
        return ":".join(s.hex() for s in self.subkeys)


def random_key(scheme: str, params: Params, rng: Rng) -> KeyMaterial:
    return KeyMaterial(scheme, tuple(rng.bits(n) for n in params.key_lengths(scheme)))
