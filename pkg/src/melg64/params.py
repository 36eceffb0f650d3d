"""Parameter sets for the 64-bit MELG generator family.

A parameter set fixes the state layout (N words of w=64 bits, r of which are
dead) and the constants of the linear recurrence and output tempering.  The
seven published sets below have maximal period 2**p - 1 with p = 64*N - r a
Mersenne exponent, and are maximally equidistributed (delta = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = 0xFFFFFFFFFFFFFFFF

# key order for the key=value parameter file format
_FILE_KEYS = ("name", "p", "w", "r", "N", "M", "L",
              "sigma1", "sigma2", "sigma3", "a", "b")


class ParameterError(ValueError):
    """Raised for structurally invalid or unknown parameter sets."""


@dataclass(frozen=True)
class GeneratorParams:
    """Constants of one generator: state shape, recurrence, tempering."""

    name: str
    p: int        # period exponent, = 64*n - r
    w: int        # word size in bits (always 64 here)
    r: int        # dead bits in the oldest state word
    n: int        # state size in words (n-1 ring words plus one extra)
    m: int        # middle-word offset of the recurrence
    l: int        # lag of the second tempering word
    sigma1: int   # left xor-shift in the extra-word feedback
    sigma2: int   # right xor-shift mixing the extra word into the ring
    sigma3: int   # left xor-shift of the first tempering stage
    a: int        # twist constant (xored when the shifted-out bit is 1)
    b: int        # and-mask of the second tempering stage

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.name:
            raise ParameterError("empty generator name")
        if self.w != 64:
            raise ParameterError(f"{self.name}: only w=64 is supported")
        if not 1 <= self.r <= 63:
            raise ParameterError(f"{self.name}: r={self.r} outside 1..63")
        if self.n < 3:
            raise ParameterError(f"{self.name}: n={self.n} too small")
        if self.p != 64 * self.n - self.r:
            raise ParameterError(
                f"{self.name}: p={self.p} != 64*{self.n} - {self.r}")
        if not 1 <= self.m <= self.n - 2:
            raise ParameterError(f"{self.name}: m={self.m} outside 1..n-2")
        if not 1 <= self.l <= self.n - 2:
            raise ParameterError(f"{self.name}: l={self.l} outside 1..n-2")
        for label, s in (("sigma1", self.sigma1), ("sigma2", self.sigma2),
                         ("sigma3", self.sigma3)):
            if not 1 <= s <= 63:
                raise ParameterError(f"{self.name}: {label}={s} outside 1..63")
        for label, c in (("a", self.a), ("b", self.b)):
            if not 0 <= c <= MASK64:
                raise ParameterError(f"{self.name}: {label} not a 64-bit word")

    @property
    def himask(self) -> int:
        """Mask of the 64-r live bits (the high part of the oldest word)."""
        return MASK64 ^ ((1 << self.r) - 1)

    @property
    def lomask(self) -> int:
        """Mask of the r low bits taken from the successor word."""
        return (1 << self.r) - 1

    def to_file_text(self) -> str:
        """Render as key=value lines (one parameter file)."""
        vals = {"name": self.name, "p": self.p, "w": self.w, "r": self.r,
                "N": self.n, "M": self.m, "L": self.l,
                "sigma1": self.sigma1, "sigma2": self.sigma2,
                "sigma3": self.sigma3,
                "a": f"0x{self.a:016x}", "b": f"0x{self.b:016x}"}
        return "".join(f"{k}={vals[k]}\n" for k in _FILE_KEYS)

    @classmethod
    def from_file_text(cls, text: str) -> "GeneratorParams":
        """Parse the key=value format; all keys required, unknown keys rejected."""
        seen = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"line {lineno}: expected key=value")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _FILE_KEYS:
                raise ParameterError(f"line {lineno}: unknown key {key!r}")
            if key in seen:
                raise ParameterError(f"line {lineno}: duplicate key {key!r}")
            seen[key] = val
        missing = [k for k in _FILE_KEYS if k not in seen]
        if missing:
            raise ParameterError(f"missing keys: {', '.join(missing)}")

        def _int(key, hexpref=False):
            s = seen[key]
            if hexpref and not s.lower().startswith("0x"):
                raise ParameterError(f"{key} must be 0x-prefixed hex")
            try:
                return int(s, 16) if hexpref else int(s, 10)
            except ValueError:
                raise ParameterError(f"bad integer for {key}: {s!r}") from None

        return cls(name=seen["name"], p=_int("p"), w=_int("w"), r=_int("r"),
                   n=_int("N"), m=_int("M"), l=_int("L"),
                   sigma1=_int("sigma1"), sigma2=_int("sigma2"),
                   sigma3=_int("sigma3"),
                   a=_int("a", hexpref=True), b=_int("b", hexpref=True))

    @classmethod
    def from_file(cls, path) -> "GeneratorParams":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_file_text(fh.read())


def _gp(name, p, r, n, m, sigma1, sigma2, a, l, sigma3, b):
    return GeneratorParams(name=name, p=p, w=64, r=r, n=n, m=m, l=l,
                           sigma1=sigma1, sigma2=sigma2, sigma3=sigma3,
                           a=a, b=b)


PARAMS = {g.name: g for g in (
    _gp("MELG607-64",   607,   33, 10,  5,   13, 35, 0x81F1FD68012348BC,
        3,  30, 0x66EDC62A6BF8C826),
    _gp("MELG1279-64",  1279,  1,  20,  7,   22, 37, 0x1AFEFD1526D3952B,
        5,  6,  0x3A23D78E8FB5E349),
    _gp("MELG2281-64",  2281,  23, 36,  17,  36, 21, 0x7CBE23EBCA8A6D36,
        6,  6,  0xE4E2242B6E15AEBE),
    _gp("MELG4253-64",  4253,  35, 67,  29,  30, 20, 0xFAC1E8C56471D722,
        9,  5,  0xCB67B0C18FE14F4D),
    _gp("MELG11213-64", 11213, 51, 176, 45,  33, 13, 0xDDBCD6E525E1C757,
        4,  5,  0xBD2D1251E589593F),
    _gp("MELG19937-64", 19937, 31, 312, 81,  23, 33, 0x5C32E06DF730FC42,
        19, 16, 0x6AEDE6FD97B338EC),
    _gp("MELG44497-64", 44497, 47, 696, 373, 37, 14, 0x4FA9CA36F293C9A9,
        95, 6,  0x06FBBEE29AAEFD91),
)}


def get_params(name: str) -> GeneratorParams:
    try:
        return PARAMS[name]
    except KeyError:
        known = ", ".join(sorted(PARAMS))
        raise ParameterError(f"unknown generator {name!r} (known: {known})") from None
