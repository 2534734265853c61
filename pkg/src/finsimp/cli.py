"""Deterministic command-line frontend.

Every command emits JSON (DOT for ``shuffles --dot``) with sorted keys and
sorted member lists, so identical invocations are byte-identical.  Exit
codes: 0 success, 1 invalid input or unmet hypothesis, 2 a certified claim
failed to verify.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CertificateError, InputError
from .grids import defect_subcomplex, grid_from_json
from .presentation import excess_strings, match_excess, order_excess, present, skeletal_dimension
from .shuffles import (
    attach_diagram,
    attachment_hypothesis,
    enumerate_shuffles,
    horn_certificate,
    poset_dot,
)
from .strings import MapString, StringComplex, core, defect, enumerate_nondegenerate, string_from_json


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _emit(args, payload: str) -> None:
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _read_json(path: str | None, what: str):
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{what}: {exc}") from None


def _complex_from_json(obj, where: str) -> StringComplex:
    if not isinstance(obj, list):
        raise InputError(f"{where}: expected a JSON array of strings")
    members = []
    for k, item in enumerate(obj):
        z = string_from_json(item, f"{where}[{k}]")
        members.append(core(z)[0])
    return StringComplex(frozenset(members))


def _cmd_f_enumerate(args) -> int:
    levels = enumerate_nondegenerate(
        args.alpha, args.degree_bound, args.allow_empty, max_defect=args.alpha
    )
    members = sorted((z for level in levels for z in level), key=MapString.sort_key)
    _emit_json(
        args,
        {
            "alpha": args.alpha,
            "degree_bound": args.degree_bound,
            "allow_empty": args.allow_empty,
            "count": len(members),
            "simplices": [z.to_json(canonical=True) for z in members],
        },
    )
    return 0


def _cmd_defect(args) -> int:
    z = string_from_json(_read_json(args.input, "input"), "input")
    _emit_json(args, {"degree": z.degree, "defect": defect(z)})
    return 0


def _cmd_e_alpha(args) -> int:
    C = defect_subcomplex(args.alpha, args.allow_empty)
    _emit_json(
        args,
        {
            "alpha": args.alpha,
            "allow_empty": args.allow_empty,
            "count": len(C),
            "simplices": C.to_json(),
        },
    )
    return 0


def _cmd_shuffles(args) -> int:
    if args.dot:
        _emit(args, poset_dot(args.r, args.s))
        return 0
    shs = enumerate_shuffles(args.r, args.s)
    _emit_json(
        args,
        {
            "r": args.r,
            "s": args.s,
            "count": len(shs),
            "shuffles": [sh.word for sh in shs],
            "minimal": shs[0].word,
            "maximal": shs[-1].word,
        },
    )
    return 0


def _cmd_horns(args) -> int:
    if args.r < 1 or args.s < 1:
        raise InputError("horns needs --r >= 1 and --s >= 1")
    certs = [horn_certificate(sh).to_json() for sh in enumerate_shuffles(args.r, args.s)]
    _emit_json(args, {"r": args.r, "s": args.s, "certificates": certs})
    return 0


def _cmd_attach(args) -> int:
    C = _complex_from_json(_read_json(args.subset, "subset"), "subset")
    grid = grid_from_json(_read_json(args.grid, "grid"), "grid")
    hypothesis = attachment_hypothesis(C, grid)
    result, records = attach_diagram(C, grid)
    _emit_json(
        args,
        {
            "hypothesis": hypothesis,
            "subset": result.to_json(),
            "certificates": [rec.to_json() for rec in records],
        },
    )
    return 0


def _cmd_present(args) -> int:
    skel = present(args.alpha, args.allow_empty)
    _emit_json(args, skel.to_json())
    return 0


def _cmd_t_match(args) -> int:
    profiles = excess_strings(args.alpha, args.degree_bound, args.allow_empty)
    matching = match_excess(profiles, args.alpha, args.degree_bound)
    ordered, report = order_excess(profiles, args.alpha)
    _emit_json(
        args,
        {
            "alpha": args.alpha,
            "degree_bound": args.degree_bound,
            "allow_empty": args.allow_empty,
            "profiles": [p.to_json() for p in profiles],
            "matching": matching.to_json(),
            "ordering": {
                "order": [p.string.to_json(canonical=True) for p in ordered],
                "report": report,
            },
        },
    )
    return 0


def _cmd_skeleton_dim(args) -> int:
    _emit_json(
        args,
        {
            "alpha": args.alpha,
            "allow_empty": args.allow_empty,
            "skeletal_dimension": skeletal_dimension(args.alpha, args.allow_empty),
        },
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="finsimp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--output", default="-", help="output path (default stdout)")
        return p

    p = add("f-enumerate", _cmd_f_enumerate, "strings of bounded defect up to a degree bound")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--degree-bound", type=int, required=True)
    p.add_argument("--allow-empty", action="store_true")

    p = add("defect", _cmd_defect, "defect of a string read from stdin (or --input)")
    p.add_argument("--input", default="-", help="path to a string JSON (default stdin)")

    p = add("e-alpha", _cmd_e_alpha, "the full defect-bounded complex")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--allow-empty", action="store_true")

    p = add("shuffles", _cmd_shuffles, "shuffle words in attachment order")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--dot", action="store_true", help="emit the poset Hasse diagram as DOT")

    p = add("horns", _cmd_horns, "horn certificates for every shuffle")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = add("attach", _cmd_attach, "attach a grid image to a complex")
    p.add_argument("--subset", required=True, help="path to a JSON array of strings ('-' for stdin)")
    p.add_argument("--grid", required=True, help="path to a grid JSON")

    p = add("present", _cmd_present, "certified presentation skeleton")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--allow-empty", action="store_true")

    p = add("t-match", _cmd_t_match, "excess-string matching and precedence audit")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--degree-bound", type=int, required=True)
    p.add_argument("--allow-empty", action="store_true")

    p = add("skeleton-dim", _cmd_skeleton_dim, "largest nondegenerate degree at the bound")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--allow-empty", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for name in ("alpha", "degree_bound"):
            if getattr(args, name, None) is not None and getattr(args, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be >= 1")
        for name in ("r", "s"):
            if getattr(args, name, None) is not None and getattr(args, name) < 0:
                raise InputError(f"--{name} must be >= 0")
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CertificateError as exc:
        payload = {"error": str(exc), "witness": exc.witness}
        print(json.dumps(payload, sort_keys=True, indent=2), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
