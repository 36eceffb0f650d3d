"""Core stepping, seeding, and output conversion for the MELG-64 family.

State is n-1 ring-buffer words plus one extra word v that participates in
every transition, giving p = 64*(n-1) - r + 64 effective bits.  The word at
the cursor is the oldest; its low r bits are dead (never read, never affect
outputs).  One step replaces the oldest word, mixes v, and emits a tempered
64-bit output built from the just-written word and a lagged ring word.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .params import MASK64, GeneratorParams, get_params

_INIT_MULT = 6364136223846793005
_INIT_SHIFT = 62
_ARRAY_MULT1 = 3935559000370003845
_ARRAY_MULT2 = 2862933555777941757
_ARRAY_BASE_SEED = 19650218

_F53 = 2.0 ** -53  # == 1.0 / 9007199254740992.0, exact in binary64


class StateError(ValueError):
    """Raised for structurally broken or all-zero generator states."""


@dataclass
class MelgState:
    """Mutable generator state: ring words, extra word v, ring cursor."""

    words: list[int] = field(default_factory=list)
    v: int = 0
    cursor: int = 0

    def copy(self) -> "MelgState":
        return MelgState(list(self.words), self.v, self.cursor)


# ---------------------------------------------------------------------------
# word-level pieces of one transition

def concat_split(older: int, newer: int, r: int) -> int:
    """Join the 64-r live high bits of the older word with r low bits of the newer."""
    lomask = (1 << r) - 1
    return (older & (MASK64 ^ lomask)) | (newer & lomask)


def twist(x: int, a: int) -> int:
    """Multiply by the companion-form twist matrix: shift right, conditionally xor a."""
    return (x >> 1) ^ a if x & 1 else x >> 1


def xorshift_left(x: int, s: int) -> int:
    if not 1 <= s <= 63:
        raise ValueError(f"shift {s} outside 1..63")
    return x ^ ((x << s) & MASK64)


def xorshift_right(x: int, s: int) -> int:
    if not 1 <= s <= 63:
        raise ValueError(f"shift {s} outside 1..63")
    return x ^ (x >> s)


def and_mask(x: int, b: int) -> int:
    return x & b


# ---------------------------------------------------------------------------
# stepping

def step_inplace(state: MelgState, params: GeneratorParams) -> int:
    """Advance one step and return the tempered 64-bit output."""
    w = state.words
    nm1 = len(w)
    i = state.cursor
    x = (w[i] & params.himask) | (w[(i + 1) % nm1] & params.lomask)
    v = ((x >> 1) ^ (params.a if x & 1 else 0)
         ^ w[(i + params.m) % nm1]
         ^ state.v ^ ((state.v << params.sigma1) & MASK64))
    nw = x ^ v ^ (v >> params.sigma2)
    w[i] = nw
    y = nw ^ ((nw << params.sigma3) & MASK64) ^ (w[(i + params.l) % nm1] & params.b)
    state.v = v
    state.cursor = (i + 1) % nm1
    return y


def step(state: MelgState, params: GeneratorParams) -> tuple[MelgState, int]:
    """Pure variant of step_inplace: returns (next state, output)."""
    nxt = state.copy()
    y = step_inplace(nxt, params)
    return nxt, y


def advance_inplace(state: MelgState, params: GeneratorParams) -> None:
    """Advance the state transition only, skipping output tempering."""
    w = state.words
    nm1 = len(w)
    i = state.cursor
    x = (w[i] & params.himask) | (w[(i + 1) % nm1] & params.lomask)
    v = ((x >> 1) ^ (params.a if x & 1 else 0)
         ^ w[(i + params.m) % nm1]
         ^ state.v ^ ((state.v << params.sigma1) & MASK64))
    w[i] = x ^ v ^ (v >> params.sigma2)
    state.v = v
    state.cursor = (i + 1) % nm1


def generate_block(state: MelgState, params: GeneratorParams, count: int) -> list[int]:
    """Emit count tempered outputs, advancing state (tight pure-Python loop)."""
    w = state.words
    v = state.v
    i = state.cursor
    nm1 = len(w)
    hm, lm = params.himask, params.lomask
    m, l, a, b = params.m, params.l, params.a, params.b
    s1, s2, s3 = params.sigma1, params.sigma2, params.sigma3
    out = []
    ap = out.append
    for _ in range(count):
        x = (w[i] & hm) | (w[(i + 1) % nm1] & lm)
        v = ((x >> 1) ^ (a if x & 1 else 0) ^ w[(i + m) % nm1]
             ^ v ^ ((v << s1) & MASK64))
        nw = x ^ v ^ (v >> s2)
        w[i] = nw
        ap(nw ^ ((nw << s3) & MASK64) ^ (w[(i + l) % nm1] & b))
        i = (i + 1) % nm1
    state.v = v
    state.cursor = i
    return out


# ---------------------------------------------------------------------------
# seeding

def is_effectively_zero(state: MelgState, params: GeneratorParams) -> bool:
    """True when every live state bit is zero (a fixed point emitting only zeros)."""
    w = state.words
    c = state.cursor
    if w[c] & params.himask:
        return False
    if any(w[j] for j in range(len(w)) if j != c):
        return False
    return state.v == 0


def _check_nonzero(state: MelgState, params: GeneratorParams) -> MelgState:
    if is_effectively_zero(state, params):
        raise StateError("all-zero effective state is not a valid seed")
    return state


def init_seed(seed: int, params: GeneratorParams) -> MelgState:
    """Expand one 64-bit seed into a full state with an avalanche recurrence."""
    if not 0 <= seed <= MASK64:
        raise StateError(f"seed {seed} is not a 64-bit integer")
    nm1 = params.n - 1
    w = [0] * nm1
    w[0] = seed
    prev = seed
    for i in range(1, nm1):
        prev = (_INIT_MULT * (prev ^ (prev >> _INIT_SHIFT)) + i) & MASK64
        w[i] = prev
    v = (_INIT_MULT * (prev ^ (prev >> _INIT_SHIFT)) + nm1) & MASK64
    return _check_nonzero(MelgState(w, v, 0), params)


def init_array(seeds, params: GeneratorParams) -> MelgState:
    """Expand a nonempty sequence of 64-bit seeds (two mixing passes over the state).

    The n-1 ring words and v are treated as one flat array of n slots; both
    passes run over it in place starting from init_seed(19650218).  If the
    result is effectively zero, the top bit of words[0] is forced.
    """
    seeds = list(seeds)
    if not seeds:
        raise StateError("seed array must be nonempty")
    for s in seeds:
        if not 0 <= s <= MASK64:
            raise StateError(f"seed entry {s} is not a 64-bit integer")
    base = init_seed(_ARRAY_BASE_SEED, params)
    nn = params.n
    st = base.words + [base.v]
    i, j = 1, 0
    for _ in range(max(nn, len(seeds))):
        st[i] = ((st[i] ^ ((st[i - 1] ^ (st[i - 1] >> _INIT_SHIFT))
                           * _ARRAY_MULT1 & MASK64))
                 + seeds[j] + j) & MASK64
        i += 1
        j += 1
        if i >= nn:
            st[0] = st[nn - 1]
            i = 1
        if j >= len(seeds):
            j = 0
    for _ in range(nn - 1):
        st[i] = ((st[i] ^ ((st[i - 1] ^ (st[i - 1] >> _INIT_SHIFT))
                           * _ARRAY_MULT2 & MASK64))
                 - i) & MASK64
        i += 1
        if i >= nn:
            st[0] = st[nn - 1]
            i = 1
    state = MelgState(st[:nn - 1], st[nn - 1], 0)
    if is_effectively_zero(state, params):
        state.words[0] = 1 << 63
    return state


# ---------------------------------------------------------------------------
# output conversion

def to_f53_mult(y: int) -> float:
    """Map a 64-bit word to [0,1) with 53-bit resolution: (y >> 11) * 2**-53."""
    return (y >> 11) * _F53


def to_f52_ieee(y: int) -> float:
    """Map a 64-bit word to [0,1) by stuffing 52 bits into an IEEE mantissa."""
    bits = (y >> 12) | 0x3FF0000000000000
    return struct.unpack("<d", struct.pack("<Q", bits))[0] - 1.0


# ---------------------------------------------------------------------------
# convenience wrapper

class Melg:
    """One generator instance: parameters plus evolving state."""

    def __init__(self, params: GeneratorParams | str = "MELG19937-64",
                 seed: int = 5489, seed_array=None):
        if isinstance(params, str):
            params = get_params(params)
        self.params = params
        if seed_array is not None:
            self.state = init_array(seed_array, params)
        else:
            self.state = init_seed(seed, params)

    def next_u64(self) -> int:
        return step_inplace(self.state, self.params)

    def next_f53_mult(self) -> float:
        return to_f53_mult(step_inplace(self.state, self.params))

    def next_f52_ieee(self) -> float:
        return to_f52_ieee(step_inplace(self.state, self.params))

    def block(self, count: int) -> list[int]:
        return generate_block(self.state, self.params, count)

    def jump(self, distance: int) -> None:
        """Advance by distance steps in O(p^2)-ish time instead of O(distance)."""
        from . import jump as _jump
        self.state = _jump.jump_state(self.state, self.params, distance)

    def substream(self, index: int) -> None:
        """Move to the start of disjoint substream #index (2**256 steps apart)."""
        from . import jump as _jump
        self.state = _jump.substream(self.state, self.params, index)
