"""``bearlion`` command line: file encryption, reduction runs, analysis reports.

Exit codes: 0 success, 2 usage, 3 file format, 4 dimension or cap violation,
5 verification failure.
"""

from __future__ import annotations

import argparse
import secrets
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import analysis
from .ciphers import PROD_K, PROD_L, SCHEME_IDS, prod_scheme
from .core import BitStr, Block, DimensionError, KeyMaterial, Params, Rng
from .experiments import MODE_ALIASES, ExperimentConfig, format_report, pass_rates, run_experiment
from .oracle import ALL, DEFAULT_CAP_BITS, MODES, KeySpaceTooLarge
from .primitives import stub_zero, toy_hash, toy_keyed_hash, toy_stream
from .reductions import THEOREMS

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_DIMENSION, EXIT_VERIFY = 0, 2, 3, 4, 5

MAGIC = b"LBLK"
VERSION = 1
HEADER_LEN = 10
SCHEME_BY_ID = {v: k for k, v in SCHEME_IDS.items()}


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class FileHeader:
    scheme: str
    l_bits: int = PROD_L
    version: int = VERSION

    def pack(self) -> bytes:
        return MAGIC + bytes([self.version, SCHEME_IDS[self.scheme]]) + self.l_bits.to_bytes(4, "big")

    @classmethod
    def unpack(cls, data: bytes) -> FileHeader:
        if len(data) < HEADER_LEN:
            raise FormatError(f"truncated header: {len(data)} of {HEADER_LEN} bytes")
        if data[:4] != MAGIC:
            raise FormatError(f"bad magic {data[:4]!r}")
        if data[4] != VERSION:
            raise FormatError(f"unsupported version {data[4]}")
        if data[5] not in SCHEME_BY_ID:
            raise FormatError(f"unknown scheme id {data[5]}")
        l_bits = int.from_bytes(data[6:10], "big")
        if l_bits != PROD_L:
            raise FormatError(f"version 1 files use l = {PROD_L}, header says {l_bits}")
        return cls(SCHEME_BY_ID[data[5]], l_bits, data[4])


def key_lengths(scheme: str) -> tuple[int, ...]:
    return Params(PROD_L, PROD_L + 1, PROD_K).key_lengths(scheme)


def key_size(scheme: str) -> int:
    return sum((n + 7) // 8 for n in key_lengths(scheme))


def _block_of(data: bytes) -> Block:
    min_len = 2 * PROD_L // 8 + 1
    if len(data) < min_len:
        raise DimensionError(
            f"message of {len(data)} bytes is too short: need at least {min_len} bytes so that r > l = {PROD_L}"
        )
    return Block.from_bitstr(BitStr.from_bytes(data), PROD_L)


def encrypt_bytes(scheme: str, key: bytes, data: bytes) -> bytes:
    scheme = scheme.upper()
    if scheme not in SCHEME_IDS:
        raise ValueError(f"unknown scheme {scheme!r}")
    pt = _block_of(data)
    km = KeyMaterial.from_bytes(scheme, key_lengths(scheme), key)
    ct = prod_scheme(scheme, pt.right.length).encrypt(km, pt)
    return FileHeader(scheme).pack() + ct.join().to_bytes()


def decrypt_bytes(key: bytes, blob: bytes, scheme: str | None = None) -> bytes:
    hdr = FileHeader.unpack(blob)
    if scheme is not None and scheme.upper() != hdr.scheme:
        raise FormatError(f"file was written with {hdr.scheme}, not {scheme.upper()}")
    ct = _block_of(blob[HEADER_LEN:])
    km = KeyMaterial.from_bytes(hdr.scheme, key_lengths(hdr.scheme), key)
    pt = prod_scheme(hdr.scheme, ct.right.length).decrypt(km, ct)
    return pt.join().to_bytes()


# ---------------------------------------------------------------------------
# Subcommands


def cmd_keygen(args) -> int:
    Path(args.out).write_bytes(secrets.token_bytes(key_size(args.scheme.upper())))
    print(f"wrote {key_size(args.scheme.upper())}-byte {args.scheme.upper()} key to {args.out}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    blob = encrypt_bytes(args.scheme, Path(args.key).read_bytes(), Path(args.infile).read_bytes())
    Path(args.outfile).write_bytes(blob)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    data = decrypt_bytes(Path(args.key).read_bytes(), Path(args.infile).read_bytes(), args.scheme)
    Path(args.outfile).write_bytes(data)
    return EXIT_OK


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.load(args.config)
    else:
        theorems = list(THEOREMS) if "all" in args.theorem else args.theorem
        cfg = ExperimentConfig(
            theorems=theorems, l=args.l, r=args.r if args.r is not None else 2 * args.l,
            k=args.k if args.k is not None else args.l + 1, n=args.n, trials=args.trials,
            mode=args.mode, seed=args.seed, h1_mode=args.h1_mode, cap_bits=args.cap_bits,
        )
    if args.output:
        cfg.output = args.output
    return cfg


def cmd_reduce(args) -> int:
    cfg = _config_from_args(args)
    cfg.validate()
    t0 = time.perf_counter()
    results = run_experiment(cfg)
    report = format_report(results)
    if cfg.output:
        Path(cfg.output).write_text(report)
    print(f"# mode={cfg.mode} seed={cfg.seed} l={cfg.l} r={cfg.r} k={cfg.k} trials={cfg.trials}")
    for (th, n), rate in pass_rates(results).items():
        print(f"{th}\tn={n}\tpass_rate={rate:.2f}")
    bad = [r for r in results if not r.pairs_valid or r.solver_ok is False]
    print(f"# {len(results)} trials in {time.perf_counter() - t0:.1f}s; "
          f"{len(bad)} verification failure(s)")
    return EXIT_VERIFY if bad else EXIT_OK


def _toy_or_stub(kind: str, which: str, params: Params):
    if which == "stub":
        s, kh, h = stub_zero(params)
        return {"stream": s, "hash": h, "keyed": kh}[kind]
    return {"stream": toy_stream, "hash": toy_hash, "keyed": toy_keyed_hash}[kind](params)


def cmd_analyze(args) -> int:
    r = args.r if args.r is not None else 2 * args.l
    params = Params(args.l, r, args.k if args.k is not None else args.l + 1)
    lines = [f"analysis\t{args.sub}", f"l\t{params.l}", f"r\t{params.r}"]
    if args.sub == "image":
        img = analysis.image_of_stream(_toy_or_stub("stream", args.stream, params))
        lines += [f"stream\t{args.stream}", f"image_size\t{len(img)}",
                  "image\t" + ",".join(sorted(x.hex() for x in img))]
    elif args.sub == "good-pairing":
        prof = analysis.good_pairing_profile(
            _toy_or_stub("stream", args.stream, params), _toy_or_stub("hash", args.hash, params),
            params, samples=args.samples, rng=Rng(args.seed),
        )
        frac = Fraction(prof.covered, 1 << params.l)
        lines += [f"stream\t{args.stream}", f"hash\t{args.hash}",
                  f"fraction\t{frac.numerator}/{frac.denominator}\t{prof.fraction:.6g}",
                  f"image_size\t{prof.image_size}", f"exact\t{str(prof.exact).lower()}",
                  "preimage_histogram\t" + ",".join(f"{s}:{c}" for s, c in prof.preimage_histogram.items())]
    else:
        rep = analysis.hr_surjectivity(_toy_or_stub("keyed", args.hash, params), params,
                                       Rng(args.seed), args.samples or analysis.DEFAULT_SURJECTIVITY_SAMPLES)
        lines += [f"k\t{params.k}", f"hash\t{args.hash}", f"seed\t{args.seed}",
                  f"samples\t{rep.samples}", f"surjective\t{rep.surjective}", f"fraction\t{rep.fraction:.6g}"]
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bearlion", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    schemes = [s.lower() for s in SCHEME_IDS] + list(SCHEME_IDS)

    p = sub.add_parser("keygen", help="write a random key file of the right size")
    p.add_argument("--scheme", required=True, choices=schemes)
    p.add_argument("out")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a file as one wide block")
    p.add_argument("--scheme", required=True, choices=schemes)
    p.add_argument("--key", required=True, help="raw key file")
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a file written by encrypt")
    p.add_argument("--scheme", choices=schemes, help="optional; must match the header")
    p.add_argument("--key", required=True)
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("reduce", help="run reductions against brute-force oracles")
    p.add_argument("--theorem", action="append", choices=["all", *THEOREMS])
    p.add_argument("--l", type=int, default=4)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 4])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--mode", choices=[*MODES, *MODE_ALIASES, "planted"], default=ALL)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--h1-mode", choices=["collision", "preimage"], default="collision")
    p.add_argument("--cap-bits", type=int, default=DEFAULT_CAP_BITS)
    p.add_argument("--output", "-o")
    p.add_argument("--config", help="JSON experiment config (overrides the other flags)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("analyze", help="exhaustive checks on toy or stub primitives")
    p.add_argument("sub", choices=["image", "good-pairing", "surjectivity"])
    p.add_argument("--l", type=int, default=4)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--stream", choices=["toy", "stub"], default="toy")
    p.add_argument("--hash", choices=["toy", "stub"], default="toy")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "theorem", None) is None and args.command == "reduce":
        args.theorem = ["all"]
    try:
        return args.func(args)
    except FormatError as e:
        print(f"bearlion: format error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except (DimensionError, KeySpaceTooLarge) as e:
        print(f"bearlion: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValueError as e:
        print(f"bearlion: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
