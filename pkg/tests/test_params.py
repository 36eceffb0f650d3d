import dataclasses

import pytest

from melg64.params import (PARAMS, GeneratorParams, ParameterError,
                           get_params)

P607 = get_params("MELG607-64")


def test_registry_is_complete():
    assert sorted(PARAMS) == [
        "MELG11213-64", "MELG1279-64", "MELG19937-64", "MELG2281-64",
        "MELG4253-64", "MELG44497-64", "MELG607-64"]
    for params in PARAMS.values():
        assert params.p == 64 * params.n - params.r


def test_get_params_unknown_name():
    with pytest.raises(ParameterError):
        get_params("MELG1234-64")


def test_masks():
    assert P607.r == 33
    assert P607.himask == 0xFFFFFFFE00000000
    assert P607.lomask == 0x00000001FFFFFFFF
    assert P607.himask ^ P607.lomask == 0xFFFFFFFFFFFFFFFF


@pytest.mark.parametrize("field,value", [
    ("w", 32),
    ("r", 0),
    ("r", 64),
    ("n", 2),
    ("p", 608),
    ("m", 0),
    ("m", 9),           # must be <= n-2 = 8
    ("l", 0),
    ("sigma1", 0),
    ("sigma2", 64),
    ("sigma3", -1),
    ("a", 1 << 64),
    ("b", -2),
])
def test_validation_rejects_bad_fields(field, value):
    with pytest.raises(ParameterError):
        dataclasses.replace(P607, **{field: value})


def test_file_round_trip(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text(P607.to_file_text())
    assert GeneratorParams.from_file(path) == P607


def test_file_parser_accepts_comments_and_blanks(tmp_path):
    text = "# leading comment\n\n" + P607.to_file_text() + "\n# trailing\n"
    path = tmp_path / "p.txt"
    path.write_text(text)
    assert GeneratorParams.from_file(path) == P607


@pytest.mark.parametrize("mangle", [
    lambda t: t.replace("a=0x", "a="),              # a must be hex
    lambda t: t + "extra=3\n",                      # unknown key
    lambda t: t + "name=AGAIN\n",                   # duplicate key
    lambda t: "\n".join(ln for ln in t.splitlines()
                        if not ln.startswith("M=")),  # missing key
    lambda t: t.replace("M=", "M=x"),               # unparsable int
    lambda t: t.replace("r=33", "r 33"),            # no equals sign
])
def test_file_parser_rejects_malformed(mangle):
    with pytest.raises(ParameterError):
        GeneratorParams.from_file_text(mangle(P607.to_file_text()))
