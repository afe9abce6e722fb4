import pytest
from hypothesis import given, settings, strategies as st

from bearlion.ciphers import (
    SCHEME_CLASSES, KeyAction, Lion, Lion2, LionessUninvertible, ModularAddition, Translation,
    is_regular, prod_scheme, stub_scheme, toy_scheme,
)
from bearlion.core import BitStr, Block, DimensionError, Params, Rng, random_key
from bearlion.primitives import KeyedHash, toy_hash, toy_keyed_hash, toy_stream

from refimpl import ref_encrypt, ref_toy_hash, ref_toy_keyed_hash, ref_toy_stream, int_to_bits

P = Params(4, 8, 5)
TAGS = list(SCHEME_CLASSES)


def all_blocks(p):
    for L in range(2**p.l):
        for R in range(2**p.r):
            yield Block(BitStr(L, p.l), BitStr(R, p.r))


@pytest.mark.parametrize("tag", TAGS)
def test_stub_schemes_are_identity(tag):
    s = stub_scheme(tag, P)
    rng = Rng(1)
    for _ in range(50):
        key = random_key(tag, P, rng)
        pt = Block(rng.bits(4), rng.bits(8))
        assert s.encrypt(key, pt) == pt
        assert s.decrypt(key, pt) == pt


@pytest.mark.parametrize("tag", TAGS)
def test_toy_roundtrip_exhaustive(tag):
    s = toy_scheme(tag, P)
    rng = Rng(100 + TAGS.index(tag))
    for _ in range(3):
        key = random_key(tag, P, rng)
        for pt in all_blocks(P):
            assert s.decrypt(key, s.encrypt(key, pt)) == pt


@pytest.mark.parametrize("tag", TAGS)
def test_toy_encrypt_matches_reference_tables(tag):
    s = toy_scheme(tag, P)

    def S(x):
        return ref_toy_stream(x, 4, 8)

    if tag == "LION":
        def H(m):
            return ref_toy_hash(int_to_bits(m, 8), 4)
    else:
        def H(key, m):
            return ref_toy_keyed_hash(key, 5, m, 8, 4)

    rng = Rng(7)
    for _ in range(300):
        key = random_key(tag, P, rng)
        pt = Block(rng.bits(4), rng.bits(8))
        ct = s.encrypt(key, pt)
        want = ref_encrypt(tag, tuple(k.value for k in key.subkeys), pt.left.value, pt.right.value, S, H)
        assert (ct.left.value, ct.right.value) == want


def test_bear_zero_key_zero_block():
    # L_bar = H_0(0^8) = 7 and S(7) = 0b10000100 by hand trace of the toy maps
    s = toy_scheme("BEAR", P)
    key = s.key(BitStr(0, 5), BitStr(0, 5))
    ct = s.encrypt(key, Block(BitStr(0, 4), BitStr(0, 8)))
    assert ref_toy_keyed_hash(0, 5, 0, 8, 4) == 7
    assert ref_toy_stream(7, 4, 8) == 0b10000100
    assert ct.right == BitStr(0b10000100, 8)
    assert ct.left.value == 7 ^ ref_toy_keyed_hash(0, 5, 0b10000100, 8, 4)


def test_bear2_with_zero_middle_key_is_bear():
    bear, bear2 = toy_scheme("BEAR", P), toy_scheme("BEAR2", P)
    rng = Rng(3)
    for _ in range(200):
        k1, k3 = rng.bits(5), rng.bits(5)
        pt = Block(rng.bits(4), rng.bits(8))
        assert bear2.encrypt(bear2.key(k1, BitStr(0, 4), k3), pt) == bear.encrypt(bear.key(k1, k3), pt)


class KeyIgnoring(KeyedHash):
    def __init__(self, inner, k):
        self.inner, self.key_len, self.in_len, self.out_len = inner, k, inner.in_len, inner.out_len

    def _digest(self, key, msg):
        return self.inner(msg)


def test_lion2_with_key_ignoring_hash_is_lion():
    lion = toy_scheme("LION", P)
    lion2 = Lion2(P, toy_stream(P), KeyIgnoring(toy_hash(P), 5))
    rng = Rng(4)
    for _ in range(200):
        k1, k2, k3 = rng.bits(4), rng.bits(5), rng.bits(4)
        pt = Block(rng.bits(4), rng.bits(8))
        assert lion2.encrypt(lion2.key(k1, k2, k3), pt) == lion.encrypt(lion.key(k1, k3), pt)


def test_lioness_double_stream_degenerate_roundtrip():
    s = toy_scheme("LIONESS", P)
    rng = Rng(5)
    for _ in range(20):
        k1, k2 = rng.bits(4), rng.bits(5)
        key = s.key(k1, k2, k1, k2)
        for pt in all_blocks(P):
            assert s.decrypt(key, s.encrypt(key, pt)) == pt


def test_unrepaired_lioness_fails_to_invert():
    bad = LionessUninvertible(P, toy_stream(P), toy_keyed_hash(P))
    key = random_key("LIONESS", P, Rng(6))
    failures = sum(bad.decrypt(key, bad.encrypt(key, pt)) != pt for pt in all_blocks(P))
    assert failures > 0


def test_key_sensitivity():
    for tag in TAGS:
        s = toy_scheme(tag, P)
        rng = Rng(9)
        k1, k2 = random_key(tag, P, rng), random_key(tag, P, rng)
        assert any(s.encrypt(k1, pt) != s.encrypt(k2, pt) for pt in all_blocks(P))


@pytest.mark.parametrize("action_cls", [Translation, ModularAddition])
@pytest.mark.parametrize("l", [1, 3, 4, 8])
def test_key_actions_are_regular(action_cls, l):
    assert is_regular(action_cls(l))


def test_irregular_action_detected():
    class Constant(KeyAction):
        def apply(self, key, x):
            return x

    assert not is_regular(Constant(3))
    with pytest.raises(ValueError):
        Constant(3).solve(BitStr(0, 3), BitStr(1, 3))


def test_action_solve_inverts_apply():
    for act in (Translation(5), ModularAddition(5)):
        for x in range(32):
            for y in range(32):
                k = act.solve(BitStr(x, 5), BitStr(y, 5))
                assert act.apply(k, BitStr(x, 5)) == BitStr(y, 5)


@pytest.mark.parametrize("tag", ["LION", "LIONESS", "LION2"])
def test_modular_action_roundtrip_exhaustive(tag):
    s = toy_scheme(tag, P, action=ModularAddition(4))
    key = random_key(tag, P, Rng(12))
    for pt in all_blocks(P):
        assert s.decrypt(key, s.encrypt(key, pt)) == pt


def test_modular_action_changes_the_cipher():
    plain, mod = toy_scheme("LION", P), toy_scheme("LION", P, action=ModularAddition(4))
    key = random_key("LION", P, Rng(13))
    assert any(plain.encrypt(key, pt) != mod.encrypt(key, pt) for pt in all_blocks(P))


def test_scheme_construction_checks():
    with pytest.raises(DimensionError):
        toy_scheme("BEAR", Params(4, 8, 4))
    with pytest.raises(DimensionError):
        Lion(P, toy_stream(Params(4, 9)), toy_hash(P))
    with pytest.raises(TypeError):
        Lion(P, toy_stream(P), toy_keyed_hash(P))
    with pytest.raises(TypeError):
        toy_scheme("BEAR", P, action=Translation(4))
    s = toy_scheme("LION", P)
    with pytest.raises(DimensionError):
        s.encrypt(random_key("LION", P, Rng(1)), Block(BitStr(0, 4), BitStr(0, 9)))
    with pytest.raises(DimensionError):
        s.encrypt(random_key("BEAR", P, Rng(1)), Block(BitStr(0, 4), BitStr(0, 8)))


@pytest.mark.parametrize("tag", TAGS)
def test_production_roundtrip_randomized(tag):
    rng = Rng(20 + TAGS.index(tag))
    schemes = {}
    for i in range(1000):
        r = 257 + rng.below(600)
        s = schemes.setdefault(r, prod_scheme(tag, r))
        key = random_key(tag, s.params, rng)
        pt = Block(rng.bits(256), rng.bits(r))
        ct = s.encrypt(key, pt)
        assert s.decrypt(key, ct) == pt


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(TAGS), st.integers(0, 2**64 - 1), st.integers(8, 40))
def test_toy_roundtrip_other_dimensions(tag, seed, r):
    p = Params(6, r, 9)
    s = toy_scheme(tag, p)
    rng = Rng(seed)
    key = random_key(tag, p, rng)
    for _ in range(30):
        pt = Block(rng.bits(6), rng.bits(r))
        assert s.decrypt(key, s.encrypt(key, pt)) == pt
