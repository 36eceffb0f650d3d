"""Dimension-wise equidistribution of the generator output.

The generator is k-distributed to v-bit accuracy when every length-k window
of v-bit output prefixes hits every possible value equally often over the
full period.  Since outputs are linear in the p state bits, that holds iff
the k*v linear forms (bits of v-bit prefixes over k consecutive outputs)
are linearly independent.  k(v) is the largest such k, bounded by floor(p/v);
the total shortfall delta = sum of floor(p/v) - k(v) over v = 1..64 is the
figure of merit, zero meaning maximal equidistribution.

Ranks are computed directly: all p canonical unit states are stepped in
lockstep with numpy, each step emits one p-column block of output-bit rows,
and rows feed an incremental GF(2) elimination until one fails.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .params import GeneratorParams

MODES = ("forward", "bit-reversed")


class GF2Echelon:
    """Incremental row-echelon rank tracker over GF(2); rows are ints."""

    def __init__(self):
        self.pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: int) -> bool:
        """Reduce row against the basis; keep it if independent."""
        pivots = self.pivots
        while row:
            lead = row.bit_length() - 1
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                return True
            row ^= piv
        return False


class _LockstepUnits:
    """All p canonical unit states advanced together (arrays indexed by state).

    State j has exactly one live bit set: j < 64 puts it in the extra word v,
    the rest enumerate live ring-word bits.  Which bit goes where does not
    matter for ranks (it only permutes matrix columns).
    """

    def __init__(self, params: GeneratorParams, raw=False, reverse=False):
        p, nm1, r = params.p, params.n - 1, params.r
        self.params = params
        self.raw = raw
        self.reverse = reverse
        self.p = p
        self.w = np.zeros((nm1, p), dtype=np.uint64)
        self.v = np.zeros(p, dtype=np.uint64)
        one = np.uint64(1)
        self.v[:64] = one << np.arange(64, dtype=np.uint64)
        col = 64
        self.w[0, col:col + 64 - r] = one << np.arange(r, 64, dtype=np.uint64)
        col += 64 - r
        for j in range(1, nm1):
            self.w[j, col:col + 64] = one << np.arange(64, dtype=np.uint64)
            col += 64
        assert col == p
        self.cursor = 0
        u64 = np.uint64
        self._c = (u64(params.himask), u64(params.lomask), u64(params.a),
                   u64(params.b), u64(params.sigma1), u64(params.sigma2),
                   u64(params.sigma3), u64(1))

    def step_bits(self) -> np.ndarray:
        """Advance one step; return the (p, 64) output bit matrix.

        Column q of the result is output bit 63-q (most significant first),
        already flipped when bit-reversed mode is selected.
        """
        pr = self.params
        hm, lm, a, b, s1, s2, s3, one = self._c
        w = self.w
        nm1 = w.shape[0]
        i = self.cursor
        i1 = (i + 1) % nm1
        x = (w[i] & hm) | (w[i1] & lm)
        vnew = ((x >> one) ^ ((x & one) * a) ^ w[(i + pr.m) % nm1]
                ^ self.v ^ (self.v << s1))
        wnew = x ^ vnew ^ (vnew >> s2)
        w[i] = wnew
        if self.raw:
            y = wnew
        else:
            y = wnew ^ (wnew << s3) ^ (w[(i + pr.l) % nm1] & b)
        self.v = vnew
        self.cursor = i1
        bits = np.unpackbits(y.astype(">u8").view(np.uint8)).reshape(self.p, 64)
        if self.reverse:
            bits = bits[:, ::-1]
        return bits


def _pack_rows(bits: np.ndarray, v: int) -> list[int]:
    """First v bit columns as GF(2) row vectors over the p state coordinates."""
    packed = np.packbits(bits[:, :v].T, axis=1, bitorder="little")
    return [int.from_bytes(packed[q].tobytes(), "little") for q in range(v)]


def k_of_v(params: GeneratorParams, v: int, mode: str = "forward",
           raw: bool = False) -> int:
    """Largest k with the k*v output-prefix forms linearly independent."""
    if not 1 <= v <= 64:
        raise ValueError(f"v={v} outside 1..64")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    units = _LockstepUnits(params, raw=raw, reverse=(mode == "bit-reversed"))
    ech = GF2Echelon()
    for block in range(params.p // v + 1):
        for row in _pack_rows(units.step_bits(), v):
            if not ech.add(row):
                return block
    raise AssertionError("rank exceeded the state dimension")


def functional_matrix(params: GeneratorParams, v: int, kmax: int,
                      mode: str = "forward", raw: bool = False) -> list[int]:
    """The kmax*v rows mapping state bits to the first v bits of kmax outputs."""
    if not 1 <= v <= 64:
        raise ValueError(f"v={v} outside 1..64")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    units = _LockstepUnits(params, raw=raw, reverse=(mode == "bit-reversed"))
    rows = []
    for _ in range(kmax):
        rows.extend(_pack_rows(units.step_bits(), v))
    return rows


@dataclass
class EquidistReport:
    """k(v) for v = 1..64 plus the defects they imply."""

    name: str
    p: int
    mode: str
    raw: bool
    ks: list[int] = field(repr=False)

    def k(self, v: int) -> int:
        return self.ks[v - 1]

    def d(self, v: int) -> int:
        return self.p // v - self.ks[v - 1]

    @property
    def delta(self) -> int:
        return sum(self.d(v) for v in range(1, 65))

    def to_text(self) -> str:
        head = (f"{self.name}: p={self.p} mode={self.mode}"
                f"{' raw-output' if self.raw else ''}\n")
        lines = [f"  v={v:<3d} k={self.k(v):<6d} bound={self.p // v:<6d} "
                 f"d={self.d(v)}" for v in range(1, 65)]
        return head + "\n".join(lines) + f"\ndelta={self.delta}\n"

    def to_kv(self) -> str:
        lines = [f"name={self.name}", f"p={self.p}", f"mode={self.mode}",
                 f"raw={int(self.raw)}"]
        lines += [f"k{v}={self.k(v)}" for v in range(1, 65)]
        lines.append(f"delta={self.delta}")
        return "\n".join(lines) + "\n"


def _kv_task(args):
    params, v, mode, raw = args
    return k_of_v(params, v, mode=mode, raw=raw)


def defect_report(params: GeneratorParams, mode: str = "forward",
                  raw: bool = False, workers: int = 1) -> EquidistReport:
    """Compute k(v) for every v; workers > 1 distributes v values across processes."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    vs = range(1, 65)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            ks = list(pool.map(_kv_task, [(params, v, mode, raw) for v in vs]))
    else:
        ks = [k_of_v(params, v, mode=mode, raw=raw) for v in vs]
    return EquidistReport(name=params.name, p=params.p, mode=mode, raw=raw,
                          ks=ks)


def total_defect(params: GeneratorParams, mode: str = "forward",
                 raw: bool = False, cap: int | None = None) -> int | None:
    """Delta for one parameter set; None as soon as it would exceed cap."""
    acc = 0
    for v in range(1, 65):
        acc += params.p // v - k_of_v(params, v, mode=mode, raw=raw)
        if cap is not None and acc > cap:
            return None
    return acc
