"""Wide-block BEAR/LION family ciphers and executable key-recovery reductions."""

from .core import BitStr, Block, DimensionError, KeyMaterial, Params, Rng, concat, random_bits, split, xor
from .ciphers import Bear, Bear2, Lion, Lion2, Lioness, Scheme, make_scheme, prod_scheme, stub_scheme, toy_scheme

__all__ = [
    "BitStr", "Block", "DimensionError", "KeyMaterial", "Params", "Rng",
    "concat", "random_bits", "split", "xor",
    "Bear", "Bear2", "Lion", "Lion2", "Lioness", "Scheme",
    "make_scheme", "prod_scheme", "stub_scheme", "toy_scheme",
]
