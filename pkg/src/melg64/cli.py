"""Command line interface: generate, verify, benchmark, search, self-test.

Exit codes: 0 success, 1 usage or input problems, 2 a verification check
failed (a metrics stage or a selftest case).
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import bulk, equidist, f2poly, jump, search
from .core import (Melg, MelgState, StateError, generate_block, init_array,
                   init_seed, to_f52_ieee, to_f53_mult)
from .params import PARAMS, GeneratorParams, ParameterError, get_params
from .reference import NaiveMelg

DEFAULT_GENERATOR = "MELG19937-64"
DEFAULT_SEED = 5489

FORMATS = ("raw64le", "hex", "f53mul", "f52ieee")

_USAGE_EXIT = 1
_VERIFY_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _parse_count(text: str) -> int:
    """Plain integers plus base^exp forms like 10^9 or 2^30."""
    if "^" in text:
        base, _, exp = text.partition("^")
        return int(base, 10) ** int(exp, 10)
    return int(text, 10)


def _parse_seed(text: str) -> int:
    return int(text, 0)


def _parse_seed_array(text: str) -> list[int]:
    return [int(tok, 0) for tok in text.split(",") if tok.strip()]


def _add_generator_args(sub, with_seed=True):
    sub.add_argument("--gen", default=None, metavar="NAME",
                     help=f"named parameter set (default {DEFAULT_GENERATOR})")
    sub.add_argument("--params", default=None, metavar="FILE",
                     help="load a key=value parameter file instead of --gen")
    if with_seed:
        sub.add_argument("--seed", type=_parse_seed, default=None,
                         help=f"64-bit seed (default {DEFAULT_SEED})")
        sub.add_argument("--seed-array", type=_parse_seed_array, default=None,
                         metavar="S0,S1,...",
                         help="comma-separated 64-bit seeds (overrides --seed)")


def _resolve_params(args) -> GeneratorParams:
    if args.params is not None and args.gen is not None:
        raise ParameterError("--gen and --params are mutually exclusive")
    if args.params is not None:
        return GeneratorParams.from_file(args.params)
    return get_params(args.gen or DEFAULT_GENERATOR)


def _resolve_state(args, params: GeneratorParams) -> tuple[MelgState, str]:
    if getattr(args, "seed_array", None) is not None:
        state = init_array(args.seed_array, params)
        label = f"seed-array[{len(args.seed_array)}]"
    else:
        seed = args.seed if args.seed is not None else DEFAULT_SEED
        state = init_seed(seed, params)
        label = f"seed={seed}"
    return state, label


def _banner(text: str) -> None:
    print(f"melg64: {text}", file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# gen

def _emit_raw64le(state, params, count) -> None:
    out = sys.stdout.buffer
    chunk = 1 << 16
    if count >= 1 << 18 or count == 0:
        buf = np.empty(chunk, dtype=np.uint64)
        emitted = 0
        while count == 0 or emitted < count:
            n = chunk if count == 0 else min(chunk, count - emitted)
            view = buf[:n]
            bulk.fill_block(state, params, view)
            out.write(view.astype("<u8").tobytes())
            emitted += n
    else:
        left = count
        while left:
            n = min(chunk, left)
            ys = generate_block(state, params, n)
            out.write(b"".join(y.to_bytes(8, "little") for y in ys))
            left -= n
    out.flush()


def _emit_lines(state, params, count, render) -> None:
    out = sys.stdout
    chunk = 1 << 14
    emitted = 0
    while count == 0 or emitted < count:
        n = chunk if count == 0 else min(chunk, count - emitted)
        ys = generate_block(state, params, n)
        out.write("".join(render(y) for y in ys))
        emitted += n
    out.flush()


def cmd_gen(args) -> int:
    params = _resolve_params(args)
    state, label = _resolve_state(args, params)
    extra = ""
    if args.stream is not None:
        state = jump.substream(state, params, args.stream,
                               cache_dir=jump.default_cache_dir())
        extra += f" stream={args.stream}"
    if args.jump is not None:
        state = jump.jump_state(state, params, args.jump,
                                cache_dir=jump.default_cache_dir())
        extra += f" jump={args.jump}"
    _banner(f"{params.name} {label}{extra} format={args.format} "
            f"count={args.count or 'unbounded'}")
    try:
        if args.format == "raw64le":
            _emit_raw64le(state, params, args.count)
        elif args.format == "hex":
            _emit_lines(state, params, args.count, lambda y: f"{y:016x}\n")
        elif args.format == "f53mul":
            _emit_lines(state, params, args.count,
                        lambda y: f"{to_f53_mult(y):.17g}\n")
        else:
            _emit_lines(state, params, args.count,
                        lambda y: f"{to_f52_ieee(y):.17g}\n")
    except BrokenPipeError:
        try:
            sys.stdout.close()
        except BrokenPipeError:
            pass
    return 0


# ---------------------------------------------------------------------------
# metrics

def cmd_metrics(args) -> int:
    params = _resolve_params(args)
    _banner(f"{params.name} metrics")
    try:
        cert = f2poly.assert_maximal_period(params)
    except f2poly.CertificationError as exc:
        print(f"{params.name}: FAILED at stage {exc.stage}: {exc}")
        return _VERIFY_EXIT
    if args.kv:
        print(f"name={params.name}")
        print(f"p={params.p}")
        print(f"n1={cert.n1}")
        print("maximal_period=1")
        print(f"charpoly_seconds={cert.charpoly_seconds:.3f}")
        print(f"irreducibility_seconds={cert.irreducibility_seconds:.3f}")
    else:
        print(cert.summary())
        print(f"{params.name}: period 2^{params.p} - 1 certified")
    if args.charpoly_out:
        hx = f2poly.poly_to_hex(cert.charpoly)
        with open(args.charpoly_out, "w", encoding="utf-8") as fh:
            fh.write(jump.wrap_hex(hx))
        print(f"characteristic polynomial written to {args.charpoly_out}")
    if args.delta:
        mode = "bit-reversed" if args.reversed else "forward"
        t0 = time.perf_counter()
        report = equidist.defect_report(params, mode=mode,
                                        workers=args.workers)
        dt = time.perf_counter() - t0
        sys.stdout.write(report.to_kv() if args.kv else report.to_text())
        print(f"defect table computed in {dt:.1f}s")
    return 0


# ---------------------------------------------------------------------------
# bench

def cmd_bench(args) -> int:
    params = _resolve_params(args)
    if args.count < 10 ** 6:
        raise ParameterError("bench needs --count >= 10^6")
    state = init_seed(DEFAULT_SEED if args.seed is None else args.seed, params)
    _banner(f"{params.name} bench count={args.count}")
    warm = state.copy()
    bulk.checksum_stream(warm, params, 10 ** 4)   # compile before timing
    t0 = time.perf_counter()
    checksum = bulk.checksum_stream(state, params, args.count)
    dt = time.perf_counter() - t0
    rate = args.count / dt / 1e6
    print(f"count={args.count} seconds={dt:.3f} rate={rate:.1f}M/s "
          f"checksum={checksum:#018x}")
    return 0


# ---------------------------------------------------------------------------
# search

def cmd_search(args) -> int:
    if args.tempering:
        return _search_tempering(args)
    inject = None
    if args.inject_published:
        pub = _published_for_p(args.p)
        inject = (pub.m, pub.sigma1, pub.sigma2, pub.a)
    t0 = time.perf_counter()
    hits = search.search_recursion(args.p, args.trials, args.rng_seed,
                                   inject_first=inject)
    dt = time.perf_counter() - t0
    for idx, verdict in enumerate(hits):
        print(f"# hit {idx}: n1={verdict.n1}")
        sys.stdout.write(verdict.params.to_file_text())
        print()
    print(f"# hits={len(hits)} trials={args.trials} rng-seed={args.rng_seed} "
          f"seconds={dt:.1f}")
    return 0


def _published_for_p(p: int) -> GeneratorParams:
    for params in PARAMS.values():
        if params.p == p:
            return params
    raise ParameterError(f"no published parameter set with p={p}")


def _search_tempering(args) -> int:
    core = _published_for_p(args.p)
    inject = (core.l, core.sigma3, core.b) if args.inject_published else None
    t0 = time.perf_counter()
    result = search.search_tempering(core, args.trials, args.rng_seed,
                                     inject_first=inject)
    dt = time.perf_counter() - t0
    print(f"# tempering search on {core.name} recurrence: delta={result.delta}")
    print(f"# accepted deltas: {' '.join(str(d) for d in result.history)}")
    sys.stdout.write(result.params.to_file_text())
    print(f"# trials={args.trials} rng-seed={args.rng_seed} seconds={dt:.1f}")
    return 0


# ---------------------------------------------------------------------------
# selftest

def _check_stepping(params):
    g = Melg(params, seed=1)
    n = NaiveMelg(params, seed=1)
    count = 3000
    if [g.next_u64() for _ in range(count)] != [n.next_u64() for _ in range(count)]:
        return "ring-buffer and transparent stepping disagree"
    return None


def _check_period(params):
    try:
        cert = f2poly.assert_maximal_period(params)
    except f2poly.CertificationError as exc:
        return f"stage {exc.stage}: {exc}"
    if params.name == "MELG607-64" and cert.n1 != 313:
        return f"charpoly weight {cert.n1} != 313"
    return None


def _check_equidist(params):
    report = equidist.defect_report(params)
    if report.delta != 0:
        return f"delta = {report.delta}, expected 0"
    return None


def _check_jump(params):
    start = init_seed(97, params)
    jumped = jump.jump_state(start.copy(), params, 1000)
    walked = start.copy()
    ys = generate_block(walked, params, 1000)
    del ys
    got = generate_block(jumped, params, 4)
    want = generate_block(walked, params, 4)
    if got != want:
        return "jump by 1000 does not match 1000 plain steps"
    return None


def _check_floats(params):
    g = Melg(params, seed=11)
    for _ in range(10 ** 4):
        f = g.next_f53_mult()
        if not 0.0 <= f < 1.0:
            return f"f53mul out of range: {f}"
    g = Melg(params, seed=12)
    for _ in range(10 ** 4):
        f = g.next_f52_ieee()
        if not 0.0 <= f < 1.0:
            return f"f52ieee out of range: {f}"
    return None


_SELFTEST_CHECKS = (
    ("stepping vs transparent twin", _check_stepping),
    ("maximal period certificate", _check_period),
    ("maximal equidistribution", _check_equidist),
    ("jump-ahead consistency", _check_jump),
    ("float output ranges", _check_floats),
)


def cmd_selftest(args) -> int:
    if args.gen is None and args.params is None:
        args.gen = "MELG607-64"      # small set keeps the selftest quick
    params = _resolve_params(args)
    _banner(f"{params.name} selftest")
    failed = 0
    for label, check in _SELFTEST_CHECKS:
        t0 = time.perf_counter()
        problem = check(params)
        dt = time.perf_counter() - t0
        status = "PASS" if problem is None else f"FAIL ({problem})"
        print(f"{label:<32s} {status}  [{dt:.2f}s]")
        if problem is not None:
            failed += 1
    if failed:
        print(f"{failed} check(s) failed")
        return _VERIFY_EXIT
    print("all checks passed")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="melg64",
                     description="64-bit MELG generators and their toolbox")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    gen = subs.add_parser("gen", help="emit pseudorandom output")
    _add_generator_args(gen)
    gen.add_argument("--count", type=_parse_count, default=16,
                     help="values to emit; 0 streams forever (default 16)")
    gen.add_argument("--format", choices=FORMATS, default="hex",
                     help="output format (default hex)")
    gen.add_argument("--jump", type=jump.parse_distance, default=None,
                     metavar="J", help="skip J steps first (decimal or 2^k)")
    gen.add_argument("--stream", type=_parse_count, default=None,
                     metavar="I", help="use disjoint substream I (2^256 apart)")
    gen.set_defaults(func=cmd_gen)

    met = subs.add_parser("metrics", help="verify period and equidistribution")
    _add_generator_args(met, with_seed=False)
    met.add_argument("--delta", action="store_true",
                     help="also compute the full defect table")
    met.add_argument("--reversed", action="store_true",
                     help="defect table on bit-reversed outputs")
    met.add_argument("--charpoly-out", default=None, metavar="FILE",
                     help="write the characteristic polynomial hex dump")
    met.add_argument("--workers", type=int, default=1,
                     help="processes for the defect table (default 1)")
    met.add_argument("--kv", action="store_true",
                     help="machine-readable key=value output")
    met.set_defaults(func=cmd_metrics)

    ben = subs.add_parser("bench", help="measure bulk generation speed")
    _add_generator_args(ben)
    ben.add_argument("--count", type=_parse_count, default=10 ** 9,
                     help="outputs to generate (default 10^9)")
    ben.set_defaults(func=cmd_bench)

    sea = subs.add_parser("search", help="look for new parameter sets")
    sea.add_argument("--p", type=int, required=True,
                     help="period exponent (a Mersenne prime exponent)")
    sea.add_argument("--trials", type=_parse_count, required=True)
    sea.add_argument("--rng-seed", type=int, required=True)
    sea.add_argument("--tempering", action="store_true",
                     help="tune tempering on the published recurrence for p")
    sea.add_argument("--inject-published", action="store_true",
                     help="evaluate the published constants as trial 0")
    sea.set_defaults(func=cmd_search)

    sel = subs.add_parser("selftest", help="quick end-to-end sanity checks")
    _add_generator_args(sel, with_seed=False)
    sel.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, StateError, jump.JumpFileError, ValueError) as exc:
        print(f"melg64: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except OSError as exc:
        print(f"melg64: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
