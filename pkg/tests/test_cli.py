import struct
import subprocess
import sys

import pytest

from melg64 import bulk, jump
from melg64.cli import main
from melg64.core import Melg, init_array, init_seed, to_f52_ieee, to_f53_mult
from melg64.f2poly import deg, poly_from_hex
from melg64.params import GeneratorParams, get_params

P607 = get_params("MELG607-64")

FROZEN_607_SEED1 = ["2062ccef6a83edb4", "75b835793547d944",
                    "06843e46528f0483", "068126288ee76f72"]


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("MELG64_CACHE_DIR", str(tmp_path / "cache"))


# ---------------------------------------------------------------------------
# gen

def test_gen_hex_frozen_outputs(capsys):
    rc = main(["gen", "--gen", "MELG607-64", "--seed", "1", "--count", "4"])
    cap = capsys.readouterr()
    assert rc == 0
    assert cap.out.splitlines() == FROZEN_607_SEED1
    assert cap.err.startswith("melg64: MELG607-64 seed=1 ")


def test_gen_default_banner(capsys):
    rc = main(["gen", "--count", "1"])
    cap = capsys.readouterr()
    assert rc == 0
    assert "MELG19937-64 seed=5489 format=hex count=1" in cap.err


def test_gen_count_power_notation(capsys):
    rc = main(["gen", "--gen", "MELG607-64", "--count", "2^4"])
    assert rc == 0
    assert len(capsys.readouterr().out.splitlines()) == 16


def test_gen_raw64le_small(capsysbinary):
    rc = main(["gen", "--gen", "MELG607-64", "--seed", "1", "--count", "4",
               "--format", "raw64le"])
    cap = capsysbinary.readouterr()
    assert rc == 0
    want = b"".join(int(h, 16).to_bytes(8, "little") for h in FROZEN_607_SEED1)
    assert cap.out == want


def test_gen_raw64le_bulk_path(capsysbinary):
    count = 1 << 18                       # large enough for the block path
    rc = main(["gen", "--gen", "MELG607-64", "--seed", "1",
               "--count", str(count), "--format", "raw64le"])
    data = capsysbinary.readouterr().out
    assert rc == 0
    assert len(data) == 8 * count
    g = Melg(P607, seed=1)
    want = struct.pack("<1000Q", *(g.next_u64() for _ in range(1000)))
    assert data[:8000] == want


@pytest.mark.parametrize("fmt,conv", [("f53mul", to_f53_mult),
                                      ("f52ieee", to_f52_ieee)])
def test_gen_float_formats(capsys, fmt, conv):
    rc = main(["gen", "--gen", "MELG607-64", "--seed", "3", "--count", "5",
               "--format", fmt])
    lines = capsys.readouterr().out.splitlines()
    assert rc == 0
    g = Melg(P607, seed=3)
    assert [float(x) for x in lines] == [conv(g.next_u64()) for _ in range(5)]


def test_gen_seed_array(capsys):
    rc = main(["gen", "--gen", "MELG607-64", "--seed-array", "0x1,2,3",
               "--count", "3"])
    cap = capsys.readouterr()
    assert rc == 0
    state = init_array([1, 2, 3], P607)
    g = Melg(P607)
    g.state = state
    assert "seed-array[3]" in cap.err
    want = [f"{g.next_u64():016x}" for _ in range(3)]
    assert cap.out.splitlines() == want


def test_gen_jump_frozen_output(capsys):
    rc = main(["gen", "--gen", "MELG607-64", "--seed", "1", "--count", "1",
               "--jump", "1000"])
    cap = capsys.readouterr()
    assert rc == 0
    assert cap.out.strip() == "1416887a2287d27f"
    assert "jump=1000" in cap.err


def test_gen_stream_matches_api(capsys, tmp_path):
    rc = main(["gen", "--gen", "MELG607-64", "--seed", "8", "--count", "2",
               "--stream", "2"])
    cap = capsys.readouterr()
    assert rc == 0
    assert "stream=2" in cap.err
    state = jump.substream(init_seed(8, P607), P607, 2)
    g = Melg(P607)
    g.state = state
    want = [f"{g.next_u64():016x}" for _ in range(2)]
    assert cap.out.splitlines() == want


def test_gen_params_file(capsys, tmp_path):
    path = tmp_path / "m607.txt"
    path.write_text(P607.to_file_text())
    rc = main(["gen", "--params", str(path), "--seed", "1", "--count", "1"])
    cap = capsys.readouterr()
    assert rc == 0
    assert cap.out.strip() == FROZEN_607_SEED1[0]


def test_gen_and_params_are_mutually_exclusive(capsys, tmp_path):
    path = tmp_path / "m607.txt"
    path.write_text(P607.to_file_text())
    rc = main(["gen", "--gen", "MELG607-64", "--params", str(path)])
    cap = capsys.readouterr()
    assert rc == 1
    assert "mutually exclusive" in cap.err


def test_gen_unknown_generator(capsys):
    rc = main(["gen", "--gen", "MELG1234-64"])
    cap = capsys.readouterr()
    assert rc == 1
    assert "unknown generator" in cap.err


def test_gen_missing_params_file(capsys):
    rc = main(["gen", "--params", "/nonexistent/zzz.txt"])
    assert rc == 1


def test_usage_error_exits_1():
    with pytest.raises(SystemExit) as exc:
        main(["search", "--p", "607"])    # --trials and --rng-seed required
    assert exc.value.code == 1


# ---------------------------------------------------------------------------
# metrics

def test_metrics_certifies_melg607(capsys):
    rc = main(["metrics", "--gen", "MELG607-64"])
    cap = capsys.readouterr()
    assert rc == 0
    assert "N1=313" in cap.out
    assert "period 2^607 - 1 certified" in cap.out


def test_metrics_kv_and_charpoly_out(capsys, tmp_path):
    out = tmp_path / "cp.hex"
    rc = main(["metrics", "--gen", "MELG607-64", "--kv",
               "--charpoly-out", str(out)])
    cap = capsys.readouterr()
    assert rc == 0
    lines = cap.out.splitlines()
    assert "n1=313" in lines
    assert "maximal_period=1" in lines
    assert deg(poly_from_hex(out.read_text())) == 607


def test_metrics_delta_kv(capsys):
    rc = main(["metrics", "--gen", "MELG607-64", "--delta", "--kv"])
    cap = capsys.readouterr()
    assert rc == 0
    assert "delta=0" in cap.out.splitlines()
    assert "k64=9" in cap.out.splitlines()


def test_metrics_fails_on_broken_params(capsys, tmp_path):
    import dataclasses
    bad = dataclasses.replace(P607, a=P607.a ^ 1)
    path = tmp_path / "bad.txt"
    path.write_text(bad.to_file_text())
    rc = main(["metrics", "--params", str(path)])
    cap = capsys.readouterr()
    assert rc == 2
    assert "FAILED at stage irreducibility" in cap.out


# ---------------------------------------------------------------------------
# bench

def test_bench_rejects_small_counts(capsys):
    rc = main(["bench", "--gen", "MELG607-64", "--count", "1000"])
    cap = capsys.readouterr()
    assert rc == 1
    assert "10^6" in cap.err


def test_bench_reports_matching_checksum(capsys):
    rc = main(["bench", "--gen", "MELG607-64", "--count", "10^6"])
    cap = capsys.readouterr()
    assert rc == 0
    state = init_seed(5489, P607)
    want = bulk.checksum_stream(state, P607, 10 ** 6)
    assert f"checksum={want:#018x}" in cap.out
    assert "count=1000000" in cap.out


# ---------------------------------------------------------------------------
# search

def test_search_recursion_cli_round_trip(capsys):
    rc = main(["search", "--p", "607", "--trials", "40", "--rng-seed", "1"])
    cap = capsys.readouterr()
    assert rc == 0
    trailer = cap.out.splitlines()[-1]
    assert trailer.startswith("# hits=1 trials=40 rng-seed=1")
    # exactly one hit: the whole output parses back as one parameter file
    params = GeneratorParams.from_file_text(cap.out)
    assert params.p == 607 and params.name.startswith("search-p607-t")
    assert "# hit 0: n1=" in cap.out


def test_search_tempering_cli_published(capsys):
    rc = main(["search", "--p", "607", "--trials", "1", "--rng-seed", "0",
               "--tempering", "--inject-published"])
    cap = capsys.readouterr()
    assert rc == 0
    assert "delta=0" in cap.out.splitlines()[0]
    parsed = GeneratorParams.from_file_text(cap.out)
    assert (parsed.l, parsed.sigma3, parsed.b) == (P607.l, P607.sigma3, P607.b)


def test_search_unknown_p(capsys):
    rc = main(["search", "--p", "606", "--trials", "1", "--rng-seed", "0"])
    cap = capsys.readouterr()
    assert rc == 1
    assert "not a known prime" in cap.err


def test_search_tempering_needs_published_p(capsys):
    rc = main(["search", "--p", "521", "--trials", "1", "--rng-seed", "0",
               "--tempering"])
    cap = capsys.readouterr()
    assert rc == 1
    assert "no published parameter set" in cap.err


# ---------------------------------------------------------------------------
# selftest

def test_selftest_passes_on_default(capsys):
    rc = main(["selftest"])
    cap = capsys.readouterr()
    assert rc == 0
    assert cap.out.count(" PASS") == 5
    assert "all checks passed" in cap.out
    for label in ("stepping vs transparent twin", "maximal period certificate",
                  "maximal equidistribution", "jump-ahead consistency",
                  "float output ranges"):
        assert label in cap.out


def test_selftest_fails_on_broken_params(capsys, tmp_path):
    import dataclasses
    bad = dataclasses.replace(P607, a=P607.a ^ 1)
    path = tmp_path / "bad.txt"
    path.write_text(bad.to_file_text())
    rc = main(["selftest", "--params", str(path)])
    cap = capsys.readouterr()
    assert rc == 2
    assert "FAIL" in cap.out
    assert "check(s) failed" in cap.out


# ---------------------------------------------------------------------------
# module entry point

def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "melg64", "gen", "--gen", "MELG607-64",
         "--seed", "1", "--count", "2"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == FROZEN_607_SEED1[:2]
