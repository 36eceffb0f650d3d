"""Transparently-indexed twin generator used as a self-check oracle.

Keeps the whole word sequence w_0, w_1, ... in a growing list instead of a
ring buffer, so every index in the recurrence is spelled out directly:

    x        = live bits of w_k joined with low bits of w_{k+1}
    v_{k+1}  = twist(x) ^ w_{k+m} ^ xorshift_left(v_k)
    w_{k+n-1} = x ^ xorshift_right(v_{k+1})
    y_k      = xorshift_left(w_{k+n-1}) ^ (w_{k+l} & b)

Slow and memory-hungry by design; exists only to cross-check the ring-buffer
implementation in core.
"""

from __future__ import annotations

from .params import MASK64, GeneratorParams

_INIT_MULT = 6364136223846793005


class NaiveMelg:
    def __init__(self, params: GeneratorParams, seed: int = 5489,
                 seed_array=None):
        self.params = params
        if seed_array is None:
            seq, v = _expand_seed(seed, params)
        else:
            seq, v = _expand_array(seed_array, params)
        self.seq = seq          # w_0 .. w_{k+n-2}, grows by one per step
        self.v = v
        self.k = 0

    def next_u64(self) -> int:
        pr = self.params
        seq = self.seq
        k = self.k
        x = (seq[k] & pr.himask) | (seq[k + 1] & pr.lomask)
        xa = (x >> 1) ^ pr.a if x & 1 else x >> 1
        v = xa ^ seq[k + pr.m] ^ self.v ^ ((self.v << pr.sigma1) & MASK64)
        new = x ^ v ^ (v >> pr.sigma2)
        seq.append(new)
        y = new ^ ((new << pr.sigma3) & MASK64) ^ (seq[k + pr.l] & pr.b)
        self.v = v
        self.k = k + 1
        return y


def _expand_seed(seed: int, params: GeneratorParams):
    nm1 = params.n - 1
    seq = [seed & MASK64]
    for i in range(1, nm1):
        prev = seq[-1]
        seq.append((_INIT_MULT * (prev ^ (prev >> 62)) + i) & MASK64)
    prev = seq[-1]
    v = (_INIT_MULT * (prev ^ (prev >> 62)) + nm1) & MASK64
    return seq, v


def _expand_array(seeds, params: GeneratorParams):
    # delegate: array seeding has no indexing shortcuts worth re-deriving
    from .core import init_array
    st = init_array(seeds, params)
    return list(st.words), st.v
