"""Polynomial arithmetic over GF(2) sized for degree-40000-plus work.

Polynomials are plain Python ints: bit i is the coefficient of z**i, so the
zero polynomial is 0 and normalization is automatic.  Multiplication uses
Kronecker substitution (spread each coefficient into a 16-bit slot, multiply
as integers, read column sums mod 2), which hands the heavy lifting to GMP
via gmpy2 when available.  Modular reduction uses a precomputed reciprocal
(Barrett style); with deg(t) <= 2n-1 the quotient estimate is exact, so no
correction pass is needed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import generate_block, init_seed
from .params import GeneratorParams

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a hard dependency normally
    _mpz = int

# exponents p for which 2**p - 1 is a known prime (covers supported sizes)
MERSENNE_EXPONENTS = frozenset({
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607, 1279, 2203,
    2281, 3217, 4253, 4423, 9689, 9941, 11213, 19937, 21701, 23209, 44497,
    86243, 110503, 132049, 216091,
})

# 16-bit slots keep carryless column sums exact up to operands of 2**16 bits
_SLOT_LIMIT = 1 << 16


class CharPolyError(Exception):
    """No probe of the output stream recovered a full-degree minimal polynomial."""

    def __init__(self, msg, best=0):
        super().__init__(msg)
        self.best = best  # highest-degree minimal polynomial seen


class CertificationError(Exception):
    """A maximal-period check failed; .stage says which one."""

    def __init__(self, stage, msg):
        super().__init__(msg)
        self.stage = stage


def deg(f: int) -> int:
    """Degree of f; -1 for the zero polynomial."""
    return f.bit_length() - 1


def weight(f: int) -> int:
    """Number of nonzero coefficients."""
    return f.bit_count()


# ---------------------------------------------------------------------------
# schoolbook fallbacks (also the oracles for the fast paths)

def mul_school(f: int, g: int) -> int:
    """Shift-and-xor product; quadratic, used for small operands and tests."""
    if f == 0 or g == 0:
        return 0
    if f.bit_count() > g.bit_count():
        f, g = g, f
    acc = 0
    while f:
        low = f & -f
        acc ^= g << (low.bit_length() - 1)
        f ^= low
    return acc


def divmod_school(f: int, g: int) -> tuple[int, int]:
    """Quotient and remainder of f by g, clearing top bits one at a time."""
    if g == 0:
        raise ZeroDivisionError("polynomial division by zero")
    dg = deg(g)
    q = 0
    r = f
    while r.bit_length() > dg:
        shift = r.bit_length() - 1 - dg
        r ^= g << shift
        q |= 1 << shift
    return q, r


def mod_school(f: int, g: int) -> int:
    return divmod_school(f, g)[1]


def gcd(f: int, g: int) -> int:
    while g:
        f, g = g, mod_school(f, g)
    return f


# ---------------------------------------------------------------------------
# Kronecker-substitution carryless multiply

def _bits_of(f: int) -> np.ndarray:
    """Coefficients of f as a uint8 array, index i = coefficient of z**i."""
    data = f.to_bytes((f.bit_length() + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")


def _spread16(f: int):
    """Move bit i of f to bit 16*i (one 16-bit counting slot per coefficient)."""
    return _mpz.from_bytes(_bits_of(f).astype("<u2").tobytes(), "little")


def _unspread16(x, nbits: int) -> int:
    """Collapse 16-bit slots back to coefficients: keep each slot's parity bit."""
    data = x.to_bytes(2 * nbits, "little")
    bits = np.frombuffer(data, dtype=np.uint8)[0::2] & 1
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _clmul_with_spread(f: int, g_spread, ng: int) -> int:
    if f == 0 or ng == 0:
        return 0
    return _unspread16(_spread16(f) * g_spread, f.bit_length() + ng - 1)


def clmul(f: int, g: int) -> int:
    """Carryless (GF(2)[z]) product of f and g."""
    if f == 0 or g == 0:
        return 0
    na, nb = f.bit_length(), g.bit_length()
    if min(na, nb) <= 64:
        return mul_school(f, g)
    if min(na, nb) >= _SLOT_LIMIT:
        raise ValueError("operand too large for 16-bit-slot carryless multiply")
    return _clmul_with_spread(f, _spread16(g), nb)


def sqr(f: int) -> int:
    """GF(2) square: interleave coefficients with zeros, no multiply needed."""
    if f == 0:
        return 0
    bits = _bits_of(f)
    out = np.zeros(2 * bits.size, dtype=np.uint8)
    out[0::2] = bits
    return int.from_bytes(np.packbits(out, bitorder="little").tobytes(), "little")


# ---------------------------------------------------------------------------
# modular arithmetic with a precomputed reciprocal

class BarrettReducer:
    """Reduction mod a fixed polynomial using mu = z**(2n) div modulus.

    For deg(t) <= 2n-1 the estimated quotient floor((floor(t/z**n)*mu)/z**n)
    equals the true quotient, so reduce() is a single xor of one product.
    """

    def __init__(self, modulus: int):
        n = deg(modulus)
        if n < 1:
            raise ValueError("modulus must have degree >= 1")
        self.modulus = modulus
        self.n = n
        self.mu = divmod_school(1 << (2 * n), modulus)[0]
        self._mod_spread = _spread16(modulus)
        self._mu_spread = _spread16(self.mu)

    def reduce(self, t: int) -> int:
        n = self.n
        if t.bit_length() <= n:
            return t
        if t.bit_length() > 2 * n:
            raise ValueError("reduce expects deg(t) <= 2n-1")
        q = _clmul_with_spread(t >> n, self._mu_spread, self.mu.bit_length()) >> n
        r = t ^ _clmul_with_spread(q, self._mod_spread, self.modulus.bit_length())
        return r

    def mulmod(self, f: int, g: int) -> int:
        return self.reduce(clmul(f, g))

    def sqrmod(self, f: int) -> int:
        return self.reduce(sqr(f))


_REDUCERS: dict[int, BarrettReducer] = {}


def _reducer(modulus: int) -> BarrettReducer:
    red = _REDUCERS.get(modulus)
    if red is None:
        red = _REDUCERS[modulus] = BarrettReducer(modulus)
    return red


def poly_mul_mod(f: int, g: int, modulus: int) -> int:
    """(f * g) mod modulus for operands already reduced below the modulus."""
    red = _reducer(modulus)
    if max(deg(f), deg(g)) >= red.n:
        raise ValueError("operands must be reduced below the modulus")
    return red.mulmod(f, g)


def poly_pow_mod(base: int, e: int, modulus: int) -> int:
    """base**e mod modulus by left-to-right square and multiply.

    A power of two exponent costs exactly log2(e) squarings, which is what
    makes jumping 2**256 steps practical.
    """
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    red = _reducer(modulus)
    if base.bit_length() > 2 * red.n:
        base = mod_school(base, modulus)
    elif base.bit_length() > red.n:
        base = red.reduce(base)
    if e == 0:
        return red.reduce(1)
    acc = base
    for bit in bin(e)[3:]:
        acc = red.sqrmod(acc)
        if bit == "1":
            acc = red.mulmod(acc, base)
    return acc


# ---------------------------------------------------------------------------
# minimal polynomials from output streams

def berlekamp_massey(bits) -> int:
    """Minimal LFSR connection polynomial of a 0/1 sequence, returned monic.

    The connection coefficients are accumulated LSB-first against a reversed
    window of the sequence so each discrepancy is one popcount.  The returned
    polynomial is the reversal of the connection polynomial: the minimal
    polynomial of the sequence, with degree equal to the final LFSR length.
    """
    conn = 1      # bit j = c_j, c_0 = 1
    prev = 1
    length = 0
    gap = 1
    window = 0    # most recent bit at position 0
    n = -1
    for n, s in enumerate(bits):
        if s not in (0, 1):
            raise ValueError("sequence entries must be 0 or 1")
        window = (window << 1) | s
        if (conn & window).bit_count() & 1:
            if 2 * length <= n:
                conn, prev = conn ^ (prev << gap), conn
                length = n + 1 - length
                gap = 1
            else:
                conn ^= prev << gap
                gap += 1
        else:
            gap += 1
    if n < 0:
        raise ValueError("empty sequence")
    return int(format(conn, f"0{length + 1}b")[::-1], 2)


def output_bit_stream(params: GeneratorParams, seed: int, bit: int,
                      count: int) -> list[int]:
    """The chosen bit of count consecutive outputs from a fresh seed."""
    state = init_seed(seed, params)
    return [(y >> bit) & 1 for y in generate_block(state, params, count)]


def min_poly_probe(params: GeneratorParams, seed: int = 19650218,
                   bit: int = 63) -> int:
    """Minimal polynomial of one output bit over 2p steps (single probe)."""
    return berlekamp_massey(output_bit_stream(params, seed, bit, 2 * params.p))


_PROBE_SEEDS = (19650218, 1, 2, 3)


def char_poly(params: GeneratorParams) -> int:
    """Characteristic polynomial of the state transition, recovered from outputs.

    Probes single output bits (bit 63 down to 0, then fallback seeds) until a
    minimal polynomial of full degree p appears; that polynomial divides the
    characteristic polynomial and has its degree, so it is the whole thing.
    Every successful probe recovers the same polynomial.
    """
    p = params.p
    best = 0
    for seed in _PROBE_SEEDS:
        state = init_seed(seed, params)
        ys = generate_block(state, params, 2 * p)
        for bit in range(63, -1, -1):
            mp = berlekamp_massey([(y >> bit) & 1 for y in ys])
            if deg(mp) == p:
                return mp
            if deg(mp) > deg(best):
                best = mp
        del ys
    raise CharPolyError(
        f"{params.name}: no output bit yields a degree-{p} minimal polynomial "
        f"(best degree {deg(best)})", best=best)


# ---------------------------------------------------------------------------
# irreducibility and the full period certificate

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def is_irreducible_prime_degree(f: int) -> bool:
    """Irreducibility test valid exactly when deg(f) is prime.

    z**(2**p) == z mod f forces every irreducible factor's degree to divide
    the prime p, and squarefreeness; the gcd with z**2 + z screens out the
    degree-1 factors (and is a cheap early reject).
    """
    p = deg(f)
    if p < 2 or not _is_prime(p):
        raise ValueError(f"degree {p} is not a prime >= 2")
    if gcd(f, 0b110) != 1:
        return False
    red = BarrettReducer(f)
    t = 0b10
    for _ in range(p):
        t = red.sqrmod(t)
    return t == 0b10


@dataclass
class PeriodCertificate:
    """Evidence that a parameter set reaches period 2**p - 1."""

    name: str
    p: int
    n1: int                    # nonzero coefficient count of the char poly
    charpoly: int
    charpoly_seconds: float
    irreducibility_seconds: float

    def summary(self) -> str:
        return (f"{self.name}: degree {self.p} characteristic polynomial, "
                f"irreducible, N1={self.n1} "
                f"(recovery {self.charpoly_seconds:.2f}s, "
                f"irreducibility {self.irreducibility_seconds:.2f}s)")


def assert_maximal_period(params: GeneratorParams) -> PeriodCertificate:
    """Prove period 2**p - 1 or raise CertificationError naming the failed stage.

    Stages: 'exponent' (2**p - 1 must be a known prime), 'degree' (a full-
    degree minimal polynomial must be recoverable from the outputs), and
    'irreducibility'.  With 2**p - 1 prime, an irreducible characteristic
    polynomial makes every nonzero state cycle through all 2**p - 1 of them.
    """
    if params.p not in MERSENNE_EXPONENTS:
        raise CertificationError(
            "exponent", f"{params.name}: 2**{params.p} - 1 is not a known prime")
    t0 = time.perf_counter()
    try:
        cp = char_poly(params)
    except CharPolyError as exc:
        raise CertificationError(
            "degree", f"{params.name}: {exc} after {time.perf_counter() - t0:.2f}s"
        ) from exc
    t1 = time.perf_counter()
    if not is_irreducible_prime_degree(cp):
        raise CertificationError(
            "irreducibility",
            f"{params.name}: characteristic polynomial is reducible")
    t2 = time.perf_counter()
    return PeriodCertificate(name=params.name, p=params.p, n1=weight(cp),
                             charpoly=cp, charpoly_seconds=t1 - t0,
                             irreducibility_seconds=t2 - t1)


# ---------------------------------------------------------------------------
# hex serialization (little-endian byte order, padded to 64-bit words)

def poly_to_hex(f: int) -> str:
    if f < 0:
        raise ValueError("polynomials are nonnegative ints")
    nbytes = max(1, (f.bit_length() + 7) // 8)
    nbytes = (nbytes + 7) // 8 * 8
    return f.to_bytes(nbytes, "little").hex()


def poly_from_hex(text: str) -> int:
    compact = "".join(text.split())
    return int.from_bytes(bytes.fromhex(compact), "little")
