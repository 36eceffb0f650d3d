import random

import pytest

from melg64.core import Melg, MelgState, init_seed, step_inplace
from melg64.jump import (SUBSTREAM_STRIDE, JumpFileError, JumpPoly,
                         apply_jump, canonicalize, char_poly_cached,
                         format_distance, get_jump_poly, jump_poly,
                         jump_state, load_jump_poly, parse_distance,
                         save_jump_poly, substream, wrap_hex, xor_states)
from melg64.params import get_params

P607 = get_params("MELG607-64")


def _outputs_after(state, params, skip, count):
    s = state.copy()
    for _ in range(skip):
        step_inplace(s, params)
    return [step_inplace(s, params) for _ in range(count)]


# ---------------------------------------------------------------------------
# state plumbing

def test_canonicalize_rotates_and_clears_dead_bits():
    s = init_seed(11, P607)
    for _ in range(4):
        step_inplace(s, P607)
    assert s.cursor == 4
    c = canonicalize(s, P607)
    assert c.cursor == 0
    assert c.words[0] == s.words[4] & P607.himask
    assert c.words[1] == s.words[5]
    assert c.words[-1] == s.words[3]
    assert canonicalize(c, P607) == c          # idempotent
    # dead bits do not affect future outputs
    dirty = MelgState(list(s.words), s.v, s.cursor)
    dirty.words[dirty.cursor] |= P607.lomask
    assert _outputs_after(dirty, P607, 0, 20) == _outputs_after(s, P607, 0, 20)


def test_canonicalize_validation():
    with pytest.raises(ValueError):
        canonicalize(MelgState([0] * 9, 0, 9), P607)
    with pytest.raises(ValueError):
        canonicalize(MelgState([0] * 8, 0, 0), P607)


def test_xor_states_requires_canonical_inputs():
    a = canonicalize(init_seed(1, P607), P607)
    b = canonicalize(init_seed(2, P607), P607)
    out = xor_states(a, b)
    assert out.words == [x ^ y for x, y in zip(a.words, b.words)]
    assert out.v == a.v ^ b.v
    with pytest.raises(ValueError):
        xor_states(a, MelgState(b.words, b.v, 1))
    with pytest.raises(ValueError):
        xor_states(a, MelgState(b.words[:-1], b.v, 0))


# ---------------------------------------------------------------------------
# jumping

@pytest.mark.parametrize("distance", [0, 1, 2, 7, 100, 1000])
def test_jump_equals_stepping(distance):
    base = init_seed(20180618, P607)
    want = _outputs_after(base, P607, distance, 8)
    jumped = jump_state(base, P607, distance)
    assert _outputs_after(jumped, P607, 0, 8) == want


def test_jump_from_rotated_cursor():
    base = init_seed(99, P607)
    for _ in range(5):
        step_inplace(base, P607)
    want = _outputs_after(base, P607, 123, 5)
    jumped = jump_state(base, P607, 123)
    assert _outputs_after(jumped, P607, 0, 5) == want


def test_jumps_compose():
    base = init_seed(7, P607)
    one = jump_state(jump_state(base, P607, 400), P607, 300)
    other = jump_state(base, P607, 700)
    assert one == other


def test_big_jump_distance_smoke():
    # degree of z**(2**256) mod charpoly is below p, so this is fast
    jp = get_jump_poly(P607, SUBSTREAM_STRIDE)
    assert 0 < jp.g.bit_length() <= P607.p
    jumped = apply_jump(init_seed(1, P607), jp, P607)
    again = apply_jump(init_seed(1, P607), jp, P607)
    assert jumped == again


def test_jump_poly_validation():
    with pytest.raises(ValueError):
        jump_poly(-1, 0b1011)
    with pytest.raises(ValueError):
        jump_poly(5, 0b11)                     # degree 1 modulus
    bad = JumpPoly(params_name="MELG607-64", distance=3, g=0)
    with pytest.raises(ValueError):
        apply_jump(init_seed(1, P607), bad, P607)
    mismatched = JumpPoly(params_name="MELG1279-64", distance=3, g=0b1000)
    with pytest.raises(ValueError):
        apply_jump(init_seed(1, P607), mismatched, P607)
    unknown = JumpPoly(params_name="nope", distance=3, g=0b1000)
    with pytest.raises(ValueError):
        apply_jump(init_seed(1, P607), unknown)


def test_apply_jump_resolves_registered_params_by_name():
    jp = get_jump_poly(P607, 50)
    assert jp.params_name == "MELG607-64"
    base = init_seed(4, P607)
    assert apply_jump(base, jp) == apply_jump(base, jp, P607)


# ---------------------------------------------------------------------------
# substreams

def test_substream_iterated_equals_folded():
    base = init_seed(12345, P607)
    cp = char_poly_cached(P607)
    for index in (1, 3, 5, 1 << 40):
        direct = apply_jump(base, jump_poly(index * SUBSTREAM_STRIDE, cp), P607)
        assert substream(base, P607, index) == direct


def test_substream_zero_is_canonical_identity():
    base = init_seed(3, P607)
    assert substream(base, P607, 0) == canonicalize(base, P607)


def test_substream_index_range():
    base = init_seed(3, P607)
    with pytest.raises(ValueError):
        substream(base, P607, -1)
    with pytest.raises(ValueError):
        substream(base, P607, 1 << 64)


def test_melg_class_jump_and_substream():
    g = Melg(P607, seed=20180618)
    h = Melg(P607, seed=20180618)
    want = [h.next_u64() for _ in range(1005)][1000:]
    g.jump(1000)
    assert [g.next_u64() for _ in range(5)] == want
    a = Melg(P607, seed=5)
    a.substream(2)
    b = Melg(P607, seed=5)
    b.jump(2 * SUBSTREAM_STRIDE)
    assert a.next_u64() == b.next_u64()


def test_frozen_output_1000():
    g = Melg(P607, seed=1)
    g.jump(1000)
    assert g.next_u64() == 0x1416887A2287D27F


# ---------------------------------------------------------------------------
# distance formatting

def test_distance_round_trip():
    for d in (0, 1, 65535, 65536, 1 << 256, 12345678901234567890):
        assert parse_distance(format_distance(d)) == d
    assert format_distance(1 << 256) == "2^256"
    assert format_distance(1000) == "1000"


# ---------------------------------------------------------------------------
# jump polynomial files

def test_file_round_trip(tmp_path):
    jp = get_jump_poly(P607, 1000)
    path = tmp_path / "p607.jump"
    save_jump_poly(jp, path)
    assert load_jump_poly(path) == jp
    head = path.read_text().splitlines()[0]
    assert head == "melg-jump v1 MELG607-64 J=1000"


def test_file_round_trip_power_of_two(tmp_path):
    jp = get_jump_poly(P607, SUBSTREAM_STRIDE)
    path = tmp_path / "stride.jump"
    save_jump_poly(jp, path)
    assert "J=2^256" in path.read_text().splitlines()[0]
    assert load_jump_poly(path) == jp


def test_file_hex_is_wrapped(tmp_path):
    jp = get_jump_poly(P607, 1000)
    path = tmp_path / "p607.jump"
    save_jump_poly(jp, path)
    for line in path.read_text().splitlines()[1:]:
        assert len(line) <= 128


@pytest.mark.parametrize("mutate,label", [
    (lambda t: "", "empty"),
    (lambda t: t.replace("melg-jump", "melg-dump"), "magic"),
    (lambda t: t.replace(" v1 ", " v9 "), "version"),
    (lambda t: t.replace("J=1000", "J=ten"), "distance"),
    (lambda t: t.replace("J=1000 ", "").replace("J=1000", ""), "fields"),
    (lambda t: t.splitlines()[0] + "\nzz\n", "hex"),
    (lambda t: t.splitlines()[0] + "\n00\n", "zero"),
    (lambda t: t.splitlines()[0] + "\n" + "ff" * 80 + "\n", "degree"),
])
def test_load_rejects_malformed(tmp_path, mutate, label):
    jp = get_jump_poly(P607, 1000)
    path = tmp_path / "p607.jump"
    save_jump_poly(jp, path)
    path.write_text(mutate(path.read_text()))
    with pytest.raises(JumpFileError):
        load_jump_poly(path)


def test_wrap_hex_terminates_with_newline():
    assert wrap_hex("ab" * 100).endswith("\n")


# ---------------------------------------------------------------------------
# disk cache

def test_disk_cache_write_and_reload(tmp_path, monkeypatch):
    import melg64.jump as jmod
    cp = char_poly_cached(P607)
    jump_state(init_seed(1, P607), P607, 777, cache_dir=tmp_path)
    assert (tmp_path / "MELG607-64.charpoly").is_file()
    assert (tmp_path / "MELG607-64.J777.jump").is_file()
    # a fresh process would reload from disk; simulate by clearing the caches
    monkeypatch.setattr(jmod, "_CHARPOLY_MEM", {})
    monkeypatch.setattr(jmod, "_JUMP_MEM", {})
    assert char_poly_cached(P607, cache_dir=tmp_path) == cp
    jp = get_jump_poly(P607, 777, cache_dir=tmp_path)
    assert jp.distance == 777 and jp.params_name == "MELG607-64"


def test_disk_cache_recovers_from_corruption(tmp_path, monkeypatch):
    import melg64.jump as jmod
    jump_state(init_seed(1, P607), P607, 777, cache_dir=tmp_path)
    good = (tmp_path / "MELG607-64.J777.jump").read_text()
    (tmp_path / "MELG64-607.charpoly").write_text("zz\n")
    (tmp_path / "MELG607-64.J777.jump").write_text("garbage\n")
    monkeypatch.setattr(jmod, "_CHARPOLY_MEM", {})
    monkeypatch.setattr(jmod, "_JUMP_MEM", {})
    jp = get_jump_poly(P607, 777, cache_dir=tmp_path)
    save = tmp_path / "rewritten.jump"
    save_jump_poly(jp, save)
    assert save.read_text() == good


def test_random_jump_pairs_compose():
    rng = random.Random(20260818)
    base = init_seed(31337, P607)
    for _ in range(5):
        j1 = rng.randrange(0, 3000)
        j2 = rng.randrange(0, 3000)
        split = jump_state(jump_state(base, P607, j1), P607, j2)
        whole = jump_state(base, P607, j1 + j2)
        assert split == whole
