"""``arcspace`` command line.

Exit status: 0 on success, 1 on semantic errors (a valid request that cannot
be carried out), 2 on malformed input.  Parse errors name the column.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import acceptance
from .cancellation import CancellationDiagram, search, verify
from .dyadic import Dyadic, Gen, Window
from .figures import arc_space_svg, chord_svg
from .nerve import build_cover, h1_image, nerve, word_edge_path
from .shift import decode, shift_iter
from .torus import (
    MixedWord,
    equal,
    normalize,
    separating_window,
    torus_window_member,
    undetectable_certificate,
)
from .words import Word, WordSyntaxError, reduce, retract, stage_member, window_member


class ParseError(Exception):
    def __init__(self, what: str, text: str, column: int, reason: str):
        super().__init__(f"cannot parse {what} at column {column}: {reason}\n  {text}\n  {' ' * (column - 1)}^")


def _word(text: str) -> Word:
    try:
        return Word.parse(text)
    except WordSyntaxError as exc:
        raise ParseError("word", text, exc.column, str(exc).split(" at column")[0]) from None


def _mixed(text: str) -> MixedWord:
    try:
        return MixedWord.parse(text)
    except WordSyntaxError as exc:
        raise ParseError("mixed word", text, exc.column, str(exc).split(" at column")[0]) from None


def _token(kind, what: str, text: str):
    try:
        return kind.parse(text)
    except ValueError as exc:
        raise ParseError(what, text, 1, str(exc)) from None


def _gen_set(text: str) -> frozenset[Gen]:
    out = set()
    for m in re.finditer(r"[^\s,{}]+", text):
        try:
            out.add(Gen.parse(m.group()))
        except ValueError as exc:
            raise ParseError("generator set", text, m.start() + 1, str(exc)) from None
    return frozenset(out)


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# -- subcommands ------------------------------------------------------------

def cmd_reduce(args):
    print(reduce(_word(args.word)))


def cmd_retract(args):
    print(retract(_word(args.word), args.level))


def cmd_shift(args):
    print(shift_iter(_word(args.word), args.k))


def cmd_decode(args):
    w = _word(args.word)
    pre = decode(reduce(w))
    if pre is None:
        raise ValueError(f"{w} is not in the image of the shift")
    print(pre)


def cmd_member(args):
    w = _word(args.word)
    if args.window is not None:
        win = _token(Window, "window", args.window)
        print(_bool(window_member(w, win, args.max_level)))
    else:
        print(_bool(stage_member(w, args.stage, args.max_level)))


def cmd_cancel(args):
    w = _word(args.word)
    S = _gen_set(args.set)
    if args.search:
        d = search(w, S)
        print(_dump(d.to_json()) if d is not None else "null")
    else:
        try:
            data = json.loads(Path(args.diagram).read_text())
            d = CancellationDiagram.from_json(data)
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError("diagram", args.diagram, 1, str(exc)) from None
        print(_bool(verify(w, S, d)))
    if args.svg and d is not None:
        Path(args.svg).write_text(chord_svg(w, d))


def cmd_torus_normalize(args):
    e = normalize(_mixed(args.mixed))
    print(_dump(e.to_json()) if args.json else e)


def cmd_torus_eq(args):
    print(_bool(equal(normalize(_mixed(args.left)), normalize(_mixed(args.right)))))


def cmd_torus_member(args):
    e = normalize(_mixed(args.mixed))
    win = _token(Window, "window", args.window)
    print(_bool(torus_window_member(e, win, args.max_level)))


def cmd_undetectable(args):
    w = reduce(_word(args.word))
    cert = undetectable_certificate(w, args.stage)
    if not cert.check():  # pragma: no cover - construction guarantees it
        raise ValueError("certificate failed its own replay")
    print(cert.dumps())


def cmd_separate(args):
    e = normalize(_mixed(args.mixed))
    x = _token(Dyadic, "dyadic", args.at)
    print(separating_window(x, e))


def cmd_nerve(args):
    cover = build_cover(args.stage, args.level)
    nc = nerve(cover)
    print(nc.dumps())
    if args.h1:
        g = nc.h1()
        print(_dump({"h1": {"rank": g.rank, "torsion": list(g.torsion)}}))
    if args.map_loop is not None:
        w = _word(args.map_loop)
        path = word_edge_path(w, cover)
        cls = h1_image(path, nc)
        print(_dump({"class": cls.to_json(), "loop": str(w), "path": path, "zero": cls.is_zero}))


def cmd_plot(args):
    Path(args.out).write_text(arc_space_svg(args.level))
    print(args.out)


def cmd_selftest(args):
    seed = args.seed if args.seed is not None else acceptance.default_seed()
    ok = True
    for check in acceptance.CHECKS:
        if check in (acceptance.check_cancellation, acceptance.check_point_groups):
            r = check(args.exhaustive, seed)
        else:
            r = check(args.exhaustive)
        print(r.line(), flush=True)
        ok &= r.passed
    return 0 if ok else 1


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def _positive(text: str) -> int:
    v = _natural(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arcspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", help="free reduction")
    s.add_argument("word")
    s.set_defaults(fn=cmd_reduce)

    s = sub.add_parser("retract", help="image under the retraction onto E_N")
    s.add_argument("word")
    s.add_argument("--level", type=_natural, required=True)
    s.set_defaults(fn=cmd_retract)

    s = sub.add_parser("shift", help="apply the shift substitution K times")
    s.add_argument("word")
    s.add_argument("--k", type=_natural, default=1)
    s.set_defaults(fn=cmd_shift)

    s = sub.add_parser("decode", help="unique shift preimage")
    s.add_argument("word")
    s.set_defaults(fn=cmd_decode)

    s = sub.add_parser("member", help="window or stage normal-closure membership")
    s.add_argument("word")
    where = s.add_mutually_exclusive_group(required=True)
    where.add_argument("--window", metavar="n,i")
    where.add_argument("--stage", type=_positive)
    s.add_argument("--max-level", type=_positive, required=True)
    s.set_defaults(fn=cmd_member)

    s = sub.add_parser("cancel", help="search for or verify a cancellation diagram")
    s.add_argument("word")
    s.add_argument("--set", required=True, metavar="GENS", help="comma-separated generators")
    how = s.add_mutually_exclusive_group(required=True)
    how.add_argument("--search", action="store_true")
    how.add_argument("--verify", action="store_true")
    s.add_argument("--diagram", metavar="FILE")
    s.add_argument("--svg", metavar="FILE", help="also write a chord picture")
    s.set_defaults(fn=cmd_cancel)

    s = sub.add_parser("torus-normalize", help="normal form t^a u t^-b")
    s.add_argument("mixed")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_torus_normalize)

    s = sub.add_parser("torus-eq", help="equality in the mapping-torus group")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(fn=cmd_torus_eq)

    s = sub.add_parser("torus-member", help="membership in a strip subgroup")
    s.add_argument("mixed")
    s.add_argument("--window", required=True, metavar="n,i")
    s.add_argument("--max-level", type=_positive)
    s.set_defaults(fn=cmd_torus_member)

    s = sub.add_parser("undetectable", help="certificate of stage invisibility")
    s.add_argument("word")
    s.add_argument("--stage", type=_positive, required=True)
    s.set_defaults(fn=cmd_undetectable)

    s = sub.add_parser("separate", help="window around a point missing an element")
    s.add_argument("mixed")
    s.add_argument("--at", required=True, metavar="DYADIC")
    s.set_defaults(fn=cmd_separate)

    s = sub.add_parser("nerve", help="nerve of a stage cover of E_N")
    s.add_argument("--stage", type=_positive, required=True)
    s.add_argument("--level", type=_natural, required=True)
    s.add_argument("--h1", action="store_true")
    s.add_argument("--map-loop", metavar="WORD")
    s.set_defaults(fn=cmd_nerve)

    s = sub.add_parser("plot", help="SVG of the arc space truncated at level N")
    s.add_argument("--level", type=_natural, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_plot)

    s = sub.add_parser("selftest", help="acceptance suite")
    s.add_argument("--exhaustive", action="store_true", help="full-size universes")
    s.add_argument("--seed", type=int)
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "cancel" and args.verify and not args.diagram:
        parser.error("cancel --verify needs --diagram FILE")
    try:
        return args.fn(args) or 0
    except ParseError as exc:
        print(f"arcspace: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"arcspace: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
