"""Command-line front end: ``exchcumulants {partitions,transform,verify,mobius}``."""
from __future__ import annotations

import argparse
import sys

from . import engine, verify
from .errors import CumulantError, OracleError, UnboundMomentError
from .moments import FunctionMoments, SymbolicMoments
from .momentspec import (
    Table,
    load_spec,
    parse_sequence,
    parse_word,
    render,
    words_for,
)
from .partitions import (
    DEFAULT_CAP,
    SetPartition,
    bell,
    catalan,
    enumerate_partitions,
    lattice,
    mobius_full,
    mobius_matrix,
    reduced_crossings,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FILTERS = ("all", "noncrossing", "interval", "connected", "irreducible")
LATTICE_NAMES = ("full", "nc", "interval")
MOBIUS_DUMP_CAP = 6


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"4"`` means 1..4; ``"2-5"`` or ``"2..5"`` an explicit range."""
    text = text.strip()
    for sep in ("..", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            lo, hi = int(lo), int(hi)
            break
    else:
        lo, hi = 1, int(text)
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=("pretty", "json", "csv"), default="pretty")
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest partition size allowed")
    parser.add_argument("--seed", type=int, default=0, help="seed for random moments (unsigned 64-bit)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for the root-of-unity oracle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exchcumulants",
        description="Exact cumulants for exchangeability systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", help="list partitions of [n] with their classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--filter", choices=FILTERS, default="all")
    _common(p)

    t = sub.add_parser("transform", help="moments <-> cumulants over a partition lattice")
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="MomentSpec JSON file")
    src.add_argument("--moments", help="comma separated univariate sequence m1,m2,...")
    src.add_argument("--symbolic", action="store_true", help="symbolic univariate moments")
    t.add_argument("--lattice", choices=LATTICE_NAMES, default="full")
    t.add_argument("--direction", choices=("m2k", "k2m"), default="m2k",
                   help="m2k: moments to cumulants, k2m: cumulants to moments")
    t.add_argument("--m0", action="store_true",
                   help="the --moments list starts with the order-0 value, which must be 1")
    t.add_argument("--n", type=int, help="highest order (defaults to the data given)")
    t.add_argument("--word", help="a single word such as x,y,x (spec input only)")
    t.add_argument("--roundtrip", action="store_true", help="re-invert and check equality")
    _common(t)

    v = sub.add_parser("verify", help="run identity suites")
    v.add_argument("suite", choices=sorted(verify.SUITES) + ["all"])
    v.add_argument("--system", action="append", choices=verify.SYSTEM_NAMES,
                   help="restrict to a system (repeatable); default all")
    v.add_argument("--n", default="4", help="word lengths: N for 1..N, or A-B")
    v.add_argument("--symbolic", action="store_true", help="symbolic moments instead of random ones")
    v.add_argument("--show-passed", action="store_true", help="list passing cases too")
    _common(v)

    m = sub.add_parser("mobius", help="dump a Moebius matrix")
    m.add_argument("--lattice", choices=LATTICE_NAMES, default="full")
    m.add_argument("--n", type=int, required=True)
    _common(m)
    return parser


# -- partitions ---------------------------------------------------------------------


def cmd_partitions(args) -> tuple[str, int]:
    parts = enumerate_partitions(args.n, args.cap)
    keep = {
        "all": lambda p: True,
        "noncrossing": SetPartition.is_noncrossing,
        "interval": SetPartition.is_interval,
        "connected": SetPartition.is_connected,
        "irreducible": SetPartition.is_irreducible,
    }[args.filter]
    top = SetPartition.one(args.n)
    table = Table(["rgs", "blocks", "noncrossing", "interval", "connected", "irreducible", "c0", "mu"])
    for p in parts:
        if keep(p):
            table.add(p.to_rgs_string(), str(p), p.is_noncrossing(), p.is_interval(),
                      p.is_connected(), p.is_irreducible(), reduced_crossings(p), mobius_full(p, top))
    table.meta = {
        "n": args.n,
        "filter": args.filter,
        "rows": len(table.rows),
        "bell": sum(1 for _ in parts),
        "catalan": sum(p.is_noncrossing() for p in parts),
        "interval": sum(p.is_interval() for p in parts),
        "connected": sum(p.is_connected() for p in parts),
    }
    assert table.meta["bell"] == bell(args.n) and table.meta["catalan"] == catalan(args.n)
    return render(table, args.format), EXIT_OK


# -- transform ----------------------------------------------------------------------


def _transform_inputs(args):
    """Return ``(source, words)`` for the requested transform."""
    if args.spec:
        spec = load_spec(args.spec)
        if spec.states or spec.psi_moments or spec.beta_moments:
            raise UsageError("transform takes single-state moments; use verify for composite systems")
        source = spec.source(spec.moments)
        if args.word:
            return source, [parse_word(args.word)]
        letters = spec.letters
        n = args.n or max((len(w) for w in spec.moments), default=0)
        if len(letters) > 1 and not args.n:
            raise UsageError("spec has several variables; pass --word or --n")
        return source, words_for(letters[:1] if len(letters) == 1 else letters, n)
    if args.word:
        raise UsageError("--word needs --spec")
    if args.symbolic:
        if not args.n:
            raise UsageError("--symbolic needs --n")
        return SymbolicMoments(), [("x",) * k for k in range(1, args.n + 1)]
    seq = parse_sequence(args.moments)
    if args.m0:
        if not seq or seq[0] != 1:
            raise UsageError("with --m0 the first value must be 1")
        seq = seq[1:]
    n = args.n or len(seq)
    if n > len(seq):
        raise UsageError(f"--n {n} exceeds the {len(seq)} values given")
    return FunctionMoments(lambda w: seq[len(w) - 1] if len(w) <= len(seq) else _missing(w)), [
        ("x",) * k for k in range(1, n + 1)
    ]


def _missing(w):
    raise UnboundMomentError(w)


def cmd_transform(args) -> tuple[str, int]:
    source, words = _transform_inputs(args)
    for w in words:
        enumerate_partitions(len(w), args.cap)
    forward = engine.lattice_cumulant if args.direction == "m2k" else engine.lattice_moment
    backward = engine.lattice_moment if args.direction == "m2k" else engine.lattice_cumulant
    values = {w: forward(source, w, args.lattice) for w in words}
    out_name, in_name = ("cumulant", "moment") if args.direction == "m2k" else ("moment", "cumulant")
    table = Table(["order", "word", in_name, out_name])
    for w in words:
        table.add(len(w), ",".join(w), source(w), values[w])
    table.meta = {"lattice": args.lattice, "direction": args.direction}
    code = EXIT_OK
    if args.roundtrip:
        image = FunctionMoments(lambda w: values[w] if w in values else forward(source, w, args.lattice))
        ok = all(backward(image, w, args.lattice) == source(w) for w in words)
        table.meta["roundtrip"] = "pass" if ok else "fail"
        code = EXIT_OK if ok else EXIT_FAIL
    return render(table, args.format), code


# -- verify -------------------------------------------------------------------------


def cmd_verify(args) -> tuple[str, int]:
    n_range = parse_range(args.n)
    if max(n_range) > args.cap:
        raise UsageError(f"--n {max(n_range)} exceeds --cap {args.cap}")
    cases = verify.run(args.suite, args.system, n_range, args.seed, args.symbolic, args.jobs)
    failed = [c for c in cases if not c.ok]
    shown = cases if args.show_passed else failed
    table = Table(["status", "suite", "system", "word", "partition", "detail"])
    for c in shown:
        table.add("PASS" if c.ok else "FAIL", c.suite, c.system, ",".join(c.word),
                  "-" if c.pi is None else c.pi.to_rgs_string(), c.detail)
    by_suite: dict[str, list[int]] = {}
    for c in cases:
        tally = by_suite.setdefault(c.suite, [0, 0])
        tally[0 if c.ok else 1] += 1
    if args.format == "pretty":
        lines = [c.line() for c in shown]
        lines += [f"{s}: {ok} passed, {bad} failed" for s, (ok, bad) in by_suite.items()]
        lines.append(f"total: {len(cases) - len(failed)} passed, {len(failed)} failed (seed {args.seed})")
        text = "\n".join(lines) + "\n"
    else:
        table.meta = {
            "seed": args.seed,
            "passed": len(cases) - len(failed),
            "failed": len(failed),
            "suites": {s: {"passed": ok, "failed": bad} for s, (ok, bad) in by_suite.items()},
        }
        text = render(table, args.format)
    return text, EXIT_FAIL if failed else EXIT_OK


# -- mobius ------------------------------------------------------------------------


def cmd_mobius(args) -> tuple[str, int]:
    if args.n > min(args.cap, MOBIUS_DUMP_CAP):
        raise UsageError(f"Moebius dumps are capped at n <= {min(args.cap, MOBIUS_DUMP_CAP)}")
    enum, mu = lattice(args.lattice)
    elements = list(enum(args.n))
    # zeta inversion needs a linear extension: finer partitions first
    order = sorted(range(len(elements)), key=lambda i: (-len(elements[i]), i))
    ext = [elements[i] for i in order]
    inverse = mobius_matrix(ext, lambda a, b: a <= b)
    pos = {p: k for k, p in enumerate(ext)}
    matrix = []
    for s in elements:
        row = []
        for p in elements:
            value = mu(s, p) if s <= p else 0
            if value != inverse[pos[s]][pos[p]]:
                raise OracleError(f"mu({s}, {p}) = {value} but zeta inversion gives {inverse[pos[s]][pos[p]]}")
            row.append(value)
        matrix.append(row)
    table = Table(["sigma"] + [p.to_rgs_string() for p in elements])
    for s, row in zip(elements, matrix):
        table.add(s.to_rgs_string(), *row)
    table.meta = {"lattice": args.lattice, "n": args.n, "size": len(elements),
                  "zeta_times_mu": "identity"}
    return render(table, args.format), EXIT_OK


COMMANDS = {
    "partitions": cmd_partitions,
    "transform": cmd_transform,
    "verify": cmd_verify,
    "mobius": cmd_mobius,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        text, code = COMMANDS[args.command](args)
    except UnboundMomentError as exc:
        print(f"error: missing moment for word {list(exc.word)}", file=sys.stderr)
        return EXIT_USAGE
    except OracleError as exc:
        print(f"identity failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, CumulantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

