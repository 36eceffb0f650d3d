"""Jump-ahead: advance a generator by huge step counts in polynomial time.

Advancing J steps multiplies the state (as a GF(2) vector) by the J-th power
of the transition matrix.  With the characteristic polynomial P available,
z**J mod P = g has degree below p, and g(transition) applied to the state is
the same jump; Horner evaluation needs deg(g) plain steps plus one state xor
per nonzero coefficient.  The default substream stride is 2**256 steps.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from . import f2poly
from .core import MelgState, advance_inplace
from .params import PARAMS, GeneratorParams

SUBSTREAM_STRIDE = 1 << 256

_FILE_MAGIC = "melg-jump"
_FILE_VERSION = "v1"
_HEX_WRAP = 128


class JumpFileError(ValueError):
    """A jump polynomial file failed validation."""


@dataclass(frozen=True)
class JumpPoly:
    """z**distance mod charpoly, tied to the parameter set it was built for."""

    params_name: str
    distance: int
    g: int


# in-process caches; disk caching is opt-in via cache_dir arguments
_CHARPOLY_MEM: dict[GeneratorParams, int] = {}
_JUMP_MEM: dict[tuple[GeneratorParams, int], JumpPoly] = {}


def canonicalize(state: MelgState, params: GeneratorParams) -> MelgState:
    """Rotate the ring so the cursor is 0 and zero the r dead bits."""
    if not 0 <= state.cursor < len(state.words):
        raise ValueError(f"cursor {state.cursor} outside the ring")
    if len(state.words) != params.n - 1:
        raise ValueError("state width does not match the parameter set")
    c = state.cursor
    words = state.words[c:] + state.words[:c]
    words[0] &= params.himask
    return MelgState(words, state.v, 0)


def xor_states(s1: MelgState, s2: MelgState) -> MelgState:
    """Coordinatewise xor of two canonical states."""
    if s1.cursor != 0 or s2.cursor != 0:
        raise ValueError("xor_states expects canonical (cursor 0) states")
    if len(s1.words) != len(s2.words):
        raise ValueError("state widths differ")
    return MelgState([a ^ b for a, b in zip(s1.words, s2.words)],
                     s1.v ^ s2.v, 0)


def jump_poly(distance: int, charpoly: int, params_name: str = "") -> JumpPoly:
    """Build the jump polynomial z**distance mod charpoly."""
    if distance < 0:
        raise ValueError("jump distance must be nonnegative")
    if f2poly.deg(charpoly) < 2:
        raise ValueError("charpoly must have degree >= 2")
    g = f2poly.poly_pow_mod(0b10, distance, charpoly)
    return JumpPoly(params_name=params_name, distance=distance, g=g)


def apply_jump(state: MelgState, jp: JumpPoly,
               params: GeneratorParams | None = None) -> MelgState:
    """Advance state by jp.distance steps via Horner evaluation of jp.g.

    The next output after the jump equals output number jp.distance of the
    unjumped stream (counting the first output as number 0).
    """
    if params is None:
        params = PARAMS.get(jp.params_name)
        if params is None:
            raise ValueError(f"unknown parameter set {jp.params_name!r}; "
                             "pass params explicitly")
    elif jp.params_name and jp.params_name != params.name:
        raise ValueError(f"jump polynomial is for {jp.params_name}, "
                         f"not {params.name}")
    g = jp.g
    if g == 0 or f2poly.deg(g) >= params.p:
        raise ValueError("jump polynomial degree out of range")
    src = canonicalize(state, params)
    nm1 = params.n - 1
    acc = MelgState([0] * nm1, 0, 0)
    words = acc.words
    srcw = src.words
    for i in range(f2poly.deg(g), -1, -1):
        advance_inplace(acc, params)
        if (g >> i) & 1:
            base = acc.cursor
            for idx in range(nm1):
                pos = base + idx
                if pos >= nm1:
                    pos -= nm1
                words[pos] ^= srcw[idx]
            acc.v ^= src.v
    return canonicalize(acc, params)


def char_poly_cached(params: GeneratorParams, cache_dir=None) -> int:
    """Characteristic polynomial with in-process and optional disk caching."""
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{params.name}.charpoly"
    cp = _CHARPOLY_MEM.get(params)
    if cp is not None:
        if path is not None and not path.is_file():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(wrap_hex(f2poly.poly_to_hex(cp)))
        return cp
    if path is not None:
        if path.is_file():
            try:
                cp = f2poly.poly_from_hex(path.read_text())
            except ValueError:
                cp = None
            if cp is not None and f2poly.deg(cp) == params.p:
                _CHARPOLY_MEM[params] = cp
                return cp
    cp = f2poly.char_poly(params)
    _CHARPOLY_MEM[params] = cp
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(wrap_hex(f2poly.poly_to_hex(cp)))
    return cp


def jump_state(state: MelgState, params: GeneratorParams, distance: int,
               cache_dir=None) -> MelgState:
    """One-call jump: fetch/derive the jump polynomial, then apply it."""
    jp = get_jump_poly(params, distance, cache_dir=cache_dir)
    return apply_jump(state, jp, params)


def substream(state: MelgState, params: GeneratorParams, index: int,
              cache_dir=None) -> MelgState:
    """Start of substream #index: index * 2**256 steps from the given state.

    Small indices reuse the cached stride jump repeatedly; large ones fold
    the multiple into a single power (the results agree either way).
    """
    if not 0 <= index < 1 << 64:
        raise ValueError("substream index must fit in 64 bits")
    if index == 0:
        return canonicalize(state, params)
    if index <= 4:
        jp = get_jump_poly(params, SUBSTREAM_STRIDE, cache_dir=cache_dir)
        out = state
        for _ in range(index):
            out = apply_jump(out, jp, params)
        return out
    cp = char_poly_cached(params, cache_dir=cache_dir)
    jp = jump_poly(index * SUBSTREAM_STRIDE, cp, params.name)
    return apply_jump(state, jp, params)


# ---------------------------------------------------------------------------
# jump polynomial files

def format_distance(distance: int) -> str:
    if distance >= 65536 and distance & (distance - 1) == 0:
        return f"2^{distance.bit_length() - 1}"
    return str(distance)


def parse_distance(text: str) -> int:
    if text.startswith("2^"):
        return 1 << int(text[2:], 10)
    return int(text, 10)


def wrap_hex(hx: str) -> str:
    lines = [hx[i:i + _HEX_WRAP] for i in range(0, len(hx), _HEX_WRAP)]
    return "\n".join(lines) + "\n"


def save_jump_poly(jp: JumpPoly, path) -> None:
    """Write '<magic> <version> <params_name> J=<distance>' plus hex coefficients."""
    head = (f"{_FILE_MAGIC} {_FILE_VERSION} {jp.params_name} "
            f"J={format_distance(jp.distance)}\n")
    Path(path).write_text(head + wrap_hex(f2poly.poly_to_hex(jp.g)))


def load_jump_poly(path) -> JumpPoly:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise JumpFileError(f"{path}: empty file")
    fields = lines[0].split()
    if len(fields) != 4 or fields[0] != _FILE_MAGIC:
        raise JumpFileError(f"{path}: bad header {lines[0]!r}")
    if fields[1] != _FILE_VERSION:
        raise JumpFileError(f"{path}: unsupported version {fields[1]!r}")
    name = fields[2]
    if not fields[3].startswith("J="):
        raise JumpFileError(f"{path}: missing J= field")
    try:
        distance = parse_distance(fields[3][2:])
    except ValueError:
        raise JumpFileError(f"{path}: bad distance {fields[3]!r}") from None
    try:
        g = f2poly.poly_from_hex("".join(lines[1:]))
    except ValueError:
        raise JumpFileError(f"{path}: bad hex payload") from None
    if g == 0:
        raise JumpFileError(f"{path}: zero jump polynomial")
    known = PARAMS.get(name)
    if known is not None and f2poly.deg(g) >= known.p:
        raise JumpFileError(f"{path}: degree {f2poly.deg(g)} too large for {name}")
    return JumpPoly(params_name=name, distance=distance, g=g)


def default_cache_dir() -> Path:
    env = os.environ.get("MELG64_CACHE_DIR")
    if env:
        return Path(env)
    xdg = os.environ.get("XDG_CACHE_HOME", "~/.cache")
    return Path(xdg).expanduser() / "melg64"


def get_jump_poly(params: GeneratorParams, distance: int,
                  cache_dir=None) -> JumpPoly:
    """Fetch a jump polynomial, consulting and maintaining the caches."""
    key = (params, distance)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{params.name}.J{format_distance(distance)}.jump"
    jp = _JUMP_MEM.get(key)
    if jp is not None:
        if path is not None and not path.is_file():
            path.parent.mkdir(parents=True, exist_ok=True)
            save_jump_poly(jp, path)
        return jp
    if path is not None:
        if path.is_file():
            try:
                jp = load_jump_poly(path)
            except JumpFileError:
                jp = None
            if (jp is not None and jp.params_name == params.name
                    and jp.distance == distance):
                _JUMP_MEM[key] = jp
                return jp
    cp = char_poly_cached(params, cache_dir=cache_dir)
    jp = jump_poly(distance, cp, params.name)
    _JUMP_MEM[key] = jp
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        save_jump_poly(jp, path)
    return jp
