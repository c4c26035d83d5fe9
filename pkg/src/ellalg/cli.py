"""Command-line front end.

Exit codes: 0 ok, 1 failed verification, 2 parse error, 3 precondition
failure, 4 inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

import jsonschema

from .intersection import Record
from .scenario import BUILTINS, ScenarioError, run_scenario
from .surface import InconsistencyError
from .tcr import PreconditionError
from .verify import DEFAULT_SEED, DEFAULT_WINDOW, SUITES, run_all, run_suite
from .weierstrass import OrderGuardError

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INCONSISTENT = 0, 1, 2, 3, 4

RECORD_SCHEMA = {
    "type": "object",
    "properties": {
        "step": {"type": "string"},
        "anchor": {"type": "string"},
        "value": {},
        "provenance": {"type": "string", "minLength": 1},
    },
    "required": ["step", "anchor", "value", "provenance"],
    "additionalProperties": False,
}


class Printer:
    def __init__(self, fmt: str, out: TextIO):
        self.fmt = fmt
        self.out = out
        self.validator = jsonschema.Draft202012Validator(RECORD_SCHEMA)

    def __call__(self, rec: Record) -> None:
        self.write(rec.as_dict())

    def write(self, payload: dict) -> None:
        if self.fmt == "structured":
            self.validator.validate(payload)
            self.out.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
        else:
            value = payload["value"]
            if isinstance(value, dict):
                value = ", ".join(f"{k}={v}" for k, v in value.items())
            self.out.write(f"{payload['step']}: {value}    [{payload['anchor']}; {payload['provenance']}]\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ellalg",
        description="Exact Hilbert-series bookkeeping for elliptic algebras, blowups and line intersections.",
    )
    ap.add_argument("builtin", nargs="?", choices=sorted(BUILTINS), help="run a built-in scenario")
    ap.add_argument("--scenario", metavar="FILE", help="scenario file, or the name of a built-in scenario")
    ap.add_argument("--verify", metavar="SUITE", choices=sorted(SUITES) + ["all"], help="run a property suite")
    ap.add_argument("--window", type=int, default=DEFAULT_WINDOW, metavar="N", help="expansion window (default %(default)s)")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default %(default)s)")
    ap.add_argument("--trace", action="store_true", help="emit per-degree h0 audit rows")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    return ap


def _verify(args: argparse.Namespace, printer: Printer) -> int:
    results = run_all(args.window, args.seed) if args.verify == "all" else [run_suite(args.verify, args.window, args.seed)]
    for r in results:
        value = {"passed": r.passed, "checks": r.checks, "seconds": round(r.seconds, 3)}
        if r.detail:
            value["detail"] = "; ".join(r.detail)
        if r.counterexample:
            value["counterexample"] = r.counterexample
        printer.write({"step": f"verify {r.name}", "anchor": "property suite", "value": value, "provenance": f"seed={args.seed}"})
    ok = all(r.passed for r in results)
    printer.write({"step": "verify summary", "anchor": "property suite", "value": "pass" if ok else "fail", "provenance": "derived"})
    return EXIT_OK if ok else EXIT_FAIL


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.window < 1:
        err.write("error: --window must be positive\n")
        return EXIT_PARSE
    printer = Printer(args.format, out)

    if args.verify:
        return _verify(args, printer)

    source = args.scenario or args.builtin
    if source is None:
        ap.print_usage(err)
        err.write("error: give --scenario FILE, --verify SUITE or a built-in scenario name\n")
        return EXIT_PARSE
    if source in BUILTINS:
        text = BUILTINS[source]
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            err.write(f"error: cannot read scenario: {exc}\n")
            return EXIT_PARSE

    try:
        run_scenario(text, window=args.window, trace=args.trace, emit=printer)
    except ScenarioError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (PreconditionError, OrderGuardError) as exc:
        anchor = getattr(exc, "anchor", "") or "order guard"
        err.write(f"precondition failed: {exc} [{anchor}]\n")
        return EXIT_PRECONDITION
    except KeyError as exc:
        err.write(f"precondition failed: {exc.args[0]}\n")
        return EXIT_PRECONDITION
    except InconsistencyError as exc:
        err.write(f"inconsistent: {exc}\n")
        return EXIT_INCONSISTENT
    return EXIT_OK


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
