"""BEAR, LION, LIONESS, BEAR2 and LION2 over injected primitives.

A block is ``(L, R)`` with ``L`` of ``l`` bits and ``R`` of ``r > l`` bits; all
additions are XOR.  The LION family (LION, LIONESS, LION2) keys its stream
rounds through a :class:`KeyAction`; the default is translation
``L -> L + K``, and any regular action can be swapped in.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import ClassVar

from . import primitives as prims
from .core import BitStr, Block, DimensionError, KeyMaterial, Params
from .primitives import KeyedHash, StreamCipher, UnkeyedHash


class KeyAction(ABC):
    """A family of permutations ``tau_K`` of ``F^l`` indexed by ``K in F^l``."""

    def __init__(self, l: int) -> None:
        self.l = l

    @abstractmethod
    def apply(self, key: BitStr, x: BitStr) -> BitStr: ...

    def solve(self, x: BitStr, target: BitStr) -> BitStr:
        """The unique ``K`` with ``tau_K(x) = target`` (regular actions only)."""
        hits = [k for k in range(1 << self.l)
                if self.apply(BitStr(k, self.l), x) == target]
        if len(hits) != 1:
            raise ValueError(f"action is not regular at x={x}: {len(hits)} keys")
        return BitStr(hits[0], self.l)


class Translation(KeyAction):
    def apply(self, key: BitStr, x: BitStr) -> BitStr:
        return x + key

    def solve(self, x: BitStr, target: BitStr) -> BitStr:
        return x + target


class ModularAddition(KeyAction):
    """``tau_K(x) = x + K mod 2^l`` on little-endian integer encodings."""

    def apply(self, key: BitStr, x: BitStr) -> BitStr:
        if key.length != self.l or x.length != self.l:
            raise DimensionError("action operands must have l bits")
        return BitStr((x.value + key.value) % (1 << self.l), self.l)

    def solve(self, x: BitStr, target: BitStr) -> BitStr:
        return BitStr((target.value - x.value) % (1 << self.l), self.l)


def is_regular(action: KeyAction) -> bool:
    """Exhaustive check that ``K -> tau_K(x)`` is a bijection for every ``x``."""
    n = 1 << action.l
    for x in range(n):
        xb = BitStr(x, action.l)
        images = {action.apply(BitStr(k, action.l), xb).value for k in range(n)}
        if len(images) != n:
            return False
    return True


class Scheme(ABC):
    tag: ClassVar[str]
    keyed_hash: ClassVar[bool] = True
    lion_family: ClassVar[bool] = False

    def __init__(
        self,
        params: Params,
        stream: StreamCipher,
        hash: KeyedHash | UnkeyedHash,
        action: KeyAction | None = None,
    ) -> None:
        self.params = params
        self.key_lengths = params.key_lengths(self.tag)
        if stream.seed_len != params.l or stream.out_len != params.r:
            raise DimensionError(
                f"stream maps {stream.seed_len}->{stream.out_len} bits, need {params.l}->{params.r}"
            )
        if self.keyed_hash != isinstance(hash, KeyedHash):
            raise TypeError(f"{self.tag} needs a {'keyed' if self.keyed_hash else 'unkeyed'} hash")
        if hash.out_len != params.l or hash.in_len not in (None, params.r):
            raise DimensionError("hash dimensions do not match params")
        if self.keyed_hash and hash.key_len != params.k:
            raise DimensionError(f"hash key length {hash.key_len} != k={params.k}")
        if action is not None:
            if not self.lion_family:
                raise TypeError(f"{self.tag} takes no key action")
            if action.l != params.l:
                raise DimensionError("key action acts on the wrong length")
        self.stream = stream
        self.hash = hash
        self.action = action if action is not None else Translation(params.l)

    @property
    def key_bits(self) -> int:
        return sum(self.key_lengths)

    def _check(self, key: KeyMaterial, block: Block) -> tuple[BitStr, ...]:
        if key.scheme != self.tag:
            raise DimensionError(f"{key.scheme} key given to {self.tag}")
        if tuple(s.length for s in key.subkeys) != self.key_lengths:
            raise DimensionError(f"{self.tag} key lengths must be {self.key_lengths}")
        block.check(self.params)
        return key.subkeys

    def S(self, x: BitStr, key: BitStr | None = None) -> BitStr:
        """Stream round input: ``S(x)``, or ``S(tau_key(x))`` in the LION family."""
        return self.stream(x if key is None else self.action.apply(key, x))

    def key(self, *subkeys: BitStr) -> KeyMaterial:
        km = KeyMaterial(self.tag, tuple(subkeys))
        if tuple(s.length for s in subkeys) != self.key_lengths:
            raise DimensionError(f"{self.tag} key lengths must be {self.key_lengths}")
        return km

    @abstractmethod
    def encrypt(self, key: KeyMaterial, pt: Block) -> Block: ...

    @abstractmethod
    def decrypt(self, key: KeyMaterial, ct: Block) -> Block: ...

    def __repr__(self) -> str:
        p = self.params
        return (f"{type(self).__name__}(l={p.l}, r={p.r}, k={p.k}, "
                f"stream={type(self.stream).__name__}, hash={type(self.hash).__name__})")


class Bear(Scheme):
    tag = "BEAR"

    def encrypt(self, key, pt):
        k1, k2 = self._check(key, pt)
        L, R = pt.left, pt.right
        Lb = L + self.hash(k1, R)
        R2 = R + self.S(Lb)
        return Block(Lb + self.hash(k2, R2), R2)

    def decrypt(self, key, ct):
        k1, k2 = self._check(key, ct)
        L2, R2 = ct.left, ct.right
        Lb = L2 + self.hash(k2, R2)
        R = R2 + self.S(Lb)
        return Block(Lb + self.hash(k1, R), R)


class Lion(Scheme):
    tag = "LION"
    keyed_hash = False
    lion_family = True

    def encrypt(self, key, pt):
        k1, k2 = self._check(key, pt)
        L, R = pt.left, pt.right
        Rb = R + self.S(L, k1)
        L2 = L + self.hash(Rb)
        return Block(L2, Rb + self.S(L2, k2))

    def decrypt(self, key, ct):
        k1, k2 = self._check(key, ct)
        L2, R2 = ct.left, ct.right
        Rb = R2 + self.S(L2, k2)
        L = L2 + self.hash(Rb)
        return Block(L, Rb + self.S(L, k1))


class Lioness(Scheme):
    """Four rounds; the third round updates ``R_bar`` so that decryption inverts it."""

    tag = "LIONESS"
    lion_family = True

    def encrypt(self, key, pt):
        k1, k2, k3, k4 = self._check(key, pt)
        L, R = pt.left, pt.right
        Rb = R + self.S(L, k1)
        Lb = L + self.hash(k2, Rb)
        R2 = Rb + self.S(Lb, k3)
        return Block(Lb + self.hash(k4, R2), R2)

    def decrypt(self, key, ct):
        k1, k2, k3, k4 = self._check(key, ct)
        L2, R2 = ct.left, ct.right
        Lb = L2 + self.hash(k4, R2)
        Rb = R2 + self.S(Lb, k3)
        L = Lb + self.hash(k2, Rb)
        return Block(L, Rb + self.S(L, k1))


class LionessUninvertible(Lioness):
    """LIONESS with the third round XORed into the original ``R`` instead of ``R_bar``.

    Decryption is inherited unchanged, so this variant does not round-trip;
    it exists only so tests can demonstrate that.
    """

    def encrypt(self, key, pt):
        k1, k2, k3, k4 = self._check(key, pt)
        L, R = pt.left, pt.right
        Rb = R + self.S(L, k1)
        Lb = L + self.hash(k2, Rb)
        R2 = R + self.S(Lb, k3)
        return Block(Lb + self.hash(k4, R2), R2)


class Bear2(Scheme):
    """BEAR with an extra ``l``-bit subkey added to the stream seed."""

    tag = "BEAR2"

    def encrypt(self, key, pt):
        k1, k2, k3 = self._check(key, pt)
        L, R = pt.left, pt.right
        Lb = L + self.hash(k1, R)
        R2 = R + self.S(Lb + k2)
        return Block(Lb + self.hash(k3, R2), R2)

    def decrypt(self, key, ct):
        k1, k2, k3 = self._check(key, ct)
        L2, R2 = ct.left, ct.right
        Lb = L2 + self.hash(k3, R2)
        R = R2 + self.S(Lb + k2)
        return Block(Lb + self.hash(k1, R), R)


class Lion2(Scheme):
    """LION with a keyed middle hash round."""

    tag = "LION2"
    lion_family = True

    def encrypt(self, key, pt):
        k1, k2, k3 = self._check(key, pt)
        L, R = pt.left, pt.right
        Rb = R + self.S(L, k1)
        L2 = L + self.hash(k2, Rb)
        return Block(L2, Rb + self.S(L2, k3))

    def decrypt(self, key, ct):
        k1, k2, k3 = self._check(key, ct)
        L2, R2 = ct.left, ct.right
        Rb = R2 + self.S(L2, k3)
        L = L2 + self.hash(k2, Rb)
        return Block(L, Rb + self.S(L, k1))


SCHEME_CLASSES: dict[str, type[Scheme]] = {
    cls.tag: cls for cls in (Bear, Lion, Lioness, Bear2, Lion2)
}
SCHEME_IDS = {"BEAR": 1, "LION": 2, "LIONESS": 3, "BEAR2": 4, "LION2": 5}


def make_scheme(tag: str, params: Params, stream, hash, action: KeyAction | None = None) -> Scheme:
    try:
        cls = SCHEME_CLASSES[tag.upper()]
    except KeyError:
        raise ValueError(f"unknown scheme {tag!r}") from None
    return cls(params, stream, hash, action)


def toy_scheme(tag: str, params: Params, action: KeyAction | None = None) -> Scheme:
    cls = SCHEME_CLASSES[tag.upper()]
    h = prims.toy_keyed_hash(params) if cls.keyed_hash else prims.toy_hash(params)
    return cls(params, prims.toy_stream(params), h, action)


def stub_scheme(tag: str, params: Params) -> Scheme:
    cls = SCHEME_CLASSES[tag.upper()]
    s, kh, h = prims.stub_zero(params)
    return cls(params, s, kh if cls.keyed_hash else h)


PROD_L = prims.SHA256_BITS
PROD_K = 512


def prod_scheme(tag: str, r: int, l: int = PROD_L, k: int = PROD_K) -> Scheme:
    cls = SCHEME_CLASSES[tag.upper()]
    params = Params(l, r, k)
    h = prims.prod_keyed_hash(k, r, l) if cls.keyed_hash else prims.prod_hash(r, l)
    return cls(params, prims.prod_stream(r, l), h)

