import random

import pytest

from docexchange.bits import pack_bits, random_bits, unpack_bits
from docexchange.cli import main
from docexchange.ecc import ecc_encode
from docexchange.harness import apply_edits, random_edit_script
from docexchange.sketch import build_sketch


def test_sketch_and_reconstruct(tmp_path, capsys):
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    assert main(["gen", "--n", "8000", "--e", "5", "--seed", "3", "--a", str(a), "--b", str(b)]) == 0
    assert main(["sketch", "--in", str(a), "--k", "8", "--out", str(tmp_path / "a.dxs")]) == 0
    out = tmp_path / "out.bin"
    assert main(["reconstruct", "--in", str(b), "--sketch", str(tmp_path / "a.dxs"), "--out", str(out)]) == 0
    assert out.read_bytes() == a.read_bytes()
    capsys.readouterr()
    assert main(["verify", "--a", str(a), "--b", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_cli_matches_library(tmp_path):
    rng = random.Random(1)
    t = random_bits(5003, rng)
    (tmp_path / "t.bin").write_bytes(pack_bits(t))
    main(["sketch", "--in", str(tmp_path / "t.bin"), "--bits", "5003", "--k", "2", "--out", str(tmp_path / "t.dxs")])
    assert (tmp_path / "t.dxs").read_bytes() == build_sketch(t, 2).to_bytes()


def test_ecc_round_trip(tmp_path, capsys):
    rng = random.Random(2)
    s = random_bits(4096, rng)
    (tmp_path / "s.bin").write_bytes(pack_bits(s))
    assert main(["ecc-encode", "--in", str(tmp_path / "s.bin"), "--k", "2", "--out", str(tmp_path / "cw.bin")]) == 0
    length = int(capsys.readouterr().out)
    word = unpack_bits((tmp_path / "cw.bin").read_bytes(), length)
    assert word == ecc_encode(s, 2).bits
    damaged = apply_edits(word, random_edit_script(length, 2, rng))
    (tmp_path / "rx.bin").write_bytes(pack_bits(damaged))
    args = ["ecc-decode", "--in", str(tmp_path / "rx.bin"), "--bits", str(len(damaged)), "--n", "4096", "--k", "2"]
    assert main(args + ["--out", str(tmp_path / "d.bin")]) == 0
    assert unpack_bits((tmp_path / "d.bin").read_bytes(), 4096) == s


def test_detected_failure_exit_code(tmp_path):
    rng = random.Random(3)
    (tmp_path / "a.bin").write_bytes(pack_bits(random_bits(8192, rng)))
    (tmp_path / "b.bin").write_bytes(pack_bits(random_bits(8192, rng)))
    main(["sketch", "--in", str(tmp_path / "a.bin"), "--k", "1", "--out", str(tmp_path / "a.dxs")])
    code = main(["reconstruct", "--in", str(tmp_path / "b.bin"), "--sketch", str(tmp_path / "a.dxs"), "--out", str(tmp_path / "o")])
    assert code == 1


def test_usage_and_malformed_input(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["sketch", "--k", "1"])
    assert info.value.code == 2
    (tmp_path / "junk").write_bytes(b"not a sketch")
    (tmp_path / "a.bin").write_bytes(b"\x00")
    assert main(["reconstruct", "--in", str(tmp_path / "a.bin"), "--sketch", str(tmp_path / "junk"), "--out", str(tmp_path / "o")]) == 2
    assert main(["sketch", "--in", str(tmp_path / "missing"), "--k", "1", "--out", str(tmp_path / "o")]) == 2
    assert main(["sketch", "--in", str(tmp_path / "a.bin"), "--bits", "9", "--k", "1", "--out", str(tmp_path / "o")]) == 2
    assert "docexchange" in capsys.readouterr().err


def test_bench_is_reproducible(tmp_path):
    args = ["bench", "--nmin", "10", "--nmax", "11", "--ks", "1,2", "--trials", "2", "--seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(args + ["--out", str(tmp_path / "b.csv")]) == 0

    def strip(path):
        # drop the timing columns
        return [line.split(",")[:4] + line.split(",")[6:] for line in path.read_text().splitlines()]

    assert strip(tmp_path / "a.csv") == strip(tmp_path / "b.csv")
