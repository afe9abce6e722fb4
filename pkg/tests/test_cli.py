import json
import subprocess
import sys
import time

import pytest

from bearlion.cli import (
    EXIT_DIMENSION, EXIT_FORMAT, EXIT_OK, EXIT_USAGE, FileHeader, FormatError, decrypt_bytes,
    encrypt_bytes, key_size, main,
)
from bearlion.core import DimensionError, Rng

TAGS = ["BEAR", "LION", "LIONESS", "BEAR2", "LION2"]


def _key(tag, seed=0):
    rng = Rng(seed)
    return bytes(rng.below(256) for _ in range(key_size(tag)))


def test_header_bytes_are_exact():
    assert FileHeader("BEAR").pack() == b"LBLK\x01\x01\x00\x00\x01\x00"
    assert FileHeader("LION2").pack() == bytes.fromhex("4c424c4b0105") + (256).to_bytes(4, "big")
    for tag in TAGS:
        hdr = FileHeader(tag).pack()
        assert len(hdr) == 10
        assert FileHeader.unpack(hdr) == FileHeader(tag)


def test_key_sizes():
    assert {t: key_size(t) for t in TAGS} == {
        "BEAR": 128, "LION": 64, "LIONESS": 192, "BEAR2": 160, "LION2": 128,
    }


@pytest.mark.parametrize("tag", TAGS)
@pytest.mark.parametrize("size", [65, 1024, 1 << 20])
def test_file_roundtrip(tag, size):
    data = Rng(size).bits(8 * size).to_bytes()
    key = _key(tag, 1)
    t0 = time.perf_counter()
    blob = encrypt_bytes(tag, key, data)
    assert decrypt_bytes(key, blob) == data
    assert time.perf_counter() - t0 < 5.0
    assert blob[:10] == FileHeader(tag).pack()
    assert len(blob) == size + 10
    assert blob[10:] != data


def test_short_message_rejected():
    with pytest.raises(DimensionError, match="at least 65 bytes"):
        encrypt_bytes("LION", _key("LION"), b"\x00" * 64)


@pytest.mark.parametrize("blob,msg", [
    (b"LBLK\x01", "truncated"),
    (b"XBLK\x01\x02\x00\x00\x01\x00" + b"\x00" * 70, "magic"),
    (b"LBLK\x02\x02\x00\x00\x01\x00" + b"\x00" * 70, "version"),
    (b"LBLK\x01\x09\x00\x00\x01\x00" + b"\x00" * 70, "scheme"),
    (b"LBLK\x01\x02\x00\x00\x00\x80" + b"\x00" * 70, "l = 256"),
])
def test_bad_headers(blob, msg):
    with pytest.raises(FormatError, match=msg):
        decrypt_bytes(_key("LION"), blob)


def test_scheme_mismatch_on_decrypt():
    blob = encrypt_bytes("LION", _key("LION"), b"\x01" * 80)
    with pytest.raises(FormatError):
        decrypt_bytes(_key("LION"), blob, scheme="BEAR")


def test_wrong_key_length():
    with pytest.raises(DimensionError, match="64 bytes"):
        encrypt_bytes("LION", b"\x00" * 63, b"\x00" * 80)


def test_cli_file_commands(tmp_path):
    key, pt, ct, back = (tmp_path / n for n in ("k", "p", "c", "b"))
    assert main(["keygen", "--scheme", "lioness", str(key)]) == EXIT_OK
    assert len(key.read_bytes()) == 192
    pt.write_bytes(bytes(range(256)) * 3)
    assert main(["encrypt", "--scheme", "LIONESS", "--key", str(key), str(pt), str(ct)]) == EXIT_OK
    assert main(["decrypt", "--key", str(key), str(ct), str(back)]) == EXIT_OK
    assert back.read_bytes() == pt.read_bytes()

    pt.write_bytes(b"\x00" * 64)
    assert main(["encrypt", "--scheme", "LIONESS", "--key", str(key), str(pt), str(ct)]) == EXIT_DIMENSION
    ct.write_bytes(b"LBL")
    assert main(["decrypt", "--key", str(key), str(ct), str(back)]) == EXIT_FORMAT


def test_cli_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == EXIT_USAGE


def test_reduce_zero_trials(tmp_path, capsys):
    out = tmp_path / "r.tsv"
    assert main(["reduce", "--theorem", "R-LION-S", "--trials", "0", "-o", str(out)]) == EXIT_OK
    assert out.read_text().splitlines() == ["#theorem\tseed\tn\tverdict\toracle_cost\treduction_cost\textracted"]


def test_reduce_cap_refusal(capsys):
    assert main(["reduce", "--theorem", "R-LNS-S", "--l", "8", "--r", "12", "--k", "9"]) == EXIT_DIMENSION
    err = capsys.readouterr().err
    assert "2^34" in err


def test_reduce_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["reduce", "--theorem", "R-BEAR-H", "--theorem", "R-LION-H1", "--trials", "5", "--seed", "11"]
    assert main(args + ["-o", str(a)]) == EXIT_OK
    assert main(args + ["-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()[1:]
    assert len(rows) == 5 * 3 + 5
    for row in rows:
        fields = row.split("\t")
        assert len(fields) == 7 and fields[3] == "pass"


def test_reduce_from_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"theorems": ["R-LION2-H"], "n": 2, "trials": 4, "seed": 2, "mode": "first"}))
    out = tmp_path / "o"
    assert main(["reduce", "--config", str(cfg), "-o", str(out)]) == EXIT_OK
    assert len(out.read_text().splitlines()) == 5
    assert "mode=first" in capsys.readouterr().out


def test_analyze_outputs(capsys):
    assert main(["analyze", "good-pairing", "--hash", "stub"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "fraction\t1/16\t0.0625" in out
    assert main(["analyze", "image"]) == EXIT_OK
    assert "image_size\t16" in capsys.readouterr().out
    assert main(["analyze", "surjectivity", "--samples", "10"]) == EXIT_OK
    assert "samples\t10" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "bearlion", "analyze", "image", "--stream", "stub"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "image_size\t1" in proc.stdout
