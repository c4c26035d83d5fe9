"""Line-oriented scenario files and their execution.

Format (one command per line, ``#`` starts a comment)::

    curve Q: a=0 b=-2; t=(3,5)
    bind A = 1*t
    bind B = (129/100, -383/1000)
    relation B = A:-3
    algebra T: M = 9*[O:0] smooth
    blowup [A:0] pdim=finite as E1 name=T(p)
    line L2 [A:4]
    facts add eq_line(L2) [declared]
    intersect E1 L2
    infer
    blowdown E1
    report
"""
from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .elliptic_curve import CurvePoint, GenericityContext, parse_divisor, parse_point
from .inference import parse_fact
from .intersection import Record, classify, ledger, resolve, section9_report
from .surface import (
    AlgebraDescriptor,
    InconsistencyError,
    LineModuleRef,
    Pdim,
    Smoothness,
    blowdown,
    blowup,
    hilb_R,
    line_hom,
)
from .tcr import PreconditionError, SaturatedModuleRef, TcrDescriptor, hom_saturated
from .weierstrass import OracleBinding, Point, WeierstrassCurve, order_guard, parse_curve

__all__ = ["ScenarioError", "Scenario", "Command", "parse_scenario", "run_scenario", "BUILTINS"]


class ScenarioError(ValueError):
    """Malformed scenario text."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class Command:
    lineno: int
    verb: str
    args: tuple[str, ...]
    text: str


@dataclass
class Scenario:
    curve: tuple[WeierstrassCurve, Point] | None = None
    bases: dict[str, Point] = field(default_factory=dict)
    relations: dict[str, tuple[str, int]] = field(default_factory=dict)
    commands: list[Command] = field(default_factory=list)


_SETUP = {"curve", "bind", "relation"}
_VERBS = _SETUP | {"algebra", "blowup", "blowdown", "line", "facts", "intersect", "infer", "report", "reproduce-section9"}


def _split(line: str) -> tuple[str, str]:
    verb, _, rest = line.strip().partition(" ")
    return verb, rest.strip()


def parse_scenario(text: str) -> Scenario:
    sc = Scenario()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        verb, rest = _split(line)
        if verb not in _VERBS:
            raise ScenarioError(lineno, f"unknown command {verb!r}")
        try:
            if verb == "curve":
                sc.curve = parse_curve(line)
            elif verb == "bind":
                name, _, value = rest.partition("=")
                name, value = name.strip(), value.strip()
                if not name or not value:
                    raise ValueError("expected bind NAME = (x, y) or bind NAME = k*t")
                if sc.curve is None:
                    raise ValueError("bind needs a curve line first")
                sc.bases[name] = _parse_concrete(value, *sc.curve)
            elif verb == "relation":
                m = re.fullmatch(r"(\w+)\s*=\s*(\w+)\s*:\s*([+-]?\d+)", rest)
                if not m:
                    raise ValueError("expected relation B = A:k")
                sc.relations[m.group(1)] = (m.group(2), int(m.group(3)))
            else:
                _validate(verb, rest)
                sc.commands.append(Command(lineno, verb, tuple(shlex.split(rest)), line))
        except ValueError as exc:
            raise ScenarioError(lineno, str(exc)) from None
    return sc


def _parse_concrete(value: str, E: WeierstrassCurve, t: Point) -> Point:
    m = re.fullmatch(r"([+-]?\d+)\s*\*\s*t", value)
    if m:
        return E.scalar_mul(int(m.group(1)), t)
    m = re.fullmatch(r"\(\s*([^,]+),\s*([^)]+)\)", value)
    if not m:
        raise ValueError(f"bad point {value!r}")
    num = Fraction if E.modulus is None else int
    return E.point(num(m.group(1).strip()), num(m.group(2).strip()))


_ALGEBRA = re.compile(r"(?:(?P<name>[^:\s]+)\s*:\s*)?M\s*=\s*(?P<div>.+?)(?:\s+(?P<smooth>smooth|not_smooth|unknown))?$")


def _validate(verb: str, rest: str) -> None:
    """Syntax checks up front so that a bad file fails before anything runs."""
    if verb == "algebra":
        m = _ALGEBRA.fullmatch(rest)
        if not m:
            raise ValueError("expected algebra [NAME:] M = DIVISOR [smooth|not_smooth|unknown]")
        parse_divisor(m.group("div"))
    elif verb == "blowup":
        parts = shlex.split(rest)
        if not parts:
            raise ValueError("blowup needs a point")
        parse_point(parts[0])
        _blowup_options(parts[1:])
    elif verb == "blowdown":
        if len(shlex.split(rest)) != 1:
            raise ValueError("blowdown takes one line id")
    elif verb == "line":
        parts = shlex.split(rest)
        if len(parts) != 2:
            raise ValueError("expected line ID [ORBIT:k]")
        parse_point(parts[1])
    elif verb == "facts":
        if not rest.startswith("add "):
            raise ValueError("expected facts add FACT")
        parse_fact(rest[4:])
    elif verb == "intersect":
        if len(shlex.split(rest)) != 2:
            raise ValueError("intersect takes two line ids")
    elif verb in ("infer", "report", "reproduce-section9") and rest:
        raise ValueError(f"{verb} takes no arguments")


def _blowup_options(parts: list[str]) -> dict[str, str]:
    opts: dict[str, str] = {}
    it = iter(parts)
    for tok in it:
        if tok == "as":
            opts["as"] = next(it, "")
            if not opts["as"]:
                raise ValueError("'as' needs a line id")
        elif "=" in tok:
            k, v = tok.split("=", 1)
            if k not in ("pdim", "name"):
                raise ValueError(f"unknown blowup option {k!r}")
            if k == "pdim" and v not in ("finite", "infinite", "unknown"):
                raise ValueError("pdim must be finite, infinite or unknown")
            opts[k] = v
        else:
            raise ValueError(f"unexpected token {tok!r}")
    return opts


@dataclass
class RunState:
    ctx: GenericityContext
    algebra: AlgebraDescriptor | None = None
    initial: AlgebraDescriptor | None = None
    records: list[Record] = field(default_factory=list)


class Runner:
    def __init__(self, scenario: Scenario, *, window: int = 50, trace: bool = False, emit: Callable[[Record], None] | None = None):
        self.window = window
        self.trace = trace
        self.emit = emit or (lambda r: None)
        binding = None
        if scenario.curve is not None:
            E, t = scenario.curve
            order_guard(E, t, max(window, 100))
            binding = OracleBinding(E, t, dict(scenario.bases))
        ctx = GenericityContext(dict(scenario.relations), binding)
        if binding is not None:
            for b, (a, k) in scenario.relations.items():
                if b in binding.bases and a in binding.bases:
                    if binding.concrete(CurvePoint(b, 0)) != binding.concrete(CurvePoint(a, k)):
                        raise InconsistencyError(f"relation {b} = {a}:{k} does not hold for the bound points")
        self.state = RunState(ctx)
        self.scenario = scenario

    def record(self, step: str, anchor: str, value, provenance: str) -> None:
        rec = Record(step, anchor, value, provenance)
        self.state.records.append(rec)
        self.emit(rec)

    def require_algebra(self) -> AlgebraDescriptor:
        if self.state.algebra is None:
            raise PreconditionError("no algebra declared yet", "scenario order")
        return self.state.algebra

    def run(self) -> RunState:
        for cmd in self.scenario.commands:
            getattr(self, "do_" + cmd.verb.replace("-", "_"))(cmd)
        return self.state

    # commands ---------------------------------------------------------------

    def do_algebra(self, cmd: Command) -> None:
        m = _ALGEBRA.fullmatch(cmd.text.partition(" ")[2].strip())
        M = parse_divisor(m.group("div"))
        A = AlgebraDescriptor(TcrDescriptor(M, self.state.ctx), m.group("name") or "R", Smoothness(m.group("smooth") or "unknown"))
        self.state.algebra = self.state.initial = A
        self.record("algebra", "elliptic algebra, degree = deg M", {"name": A.name, "mu": A.mu, "M": str(M)}, "declared")
        self._series(A)

    def _series(self, A: AlgebraDescriptor) -> None:
        self.record(f"hilb R ({A.name})", "hilb R = hilb B/(1-s)", hilb_R(A), "derived:hilb_R")
        if self.trace:
            rows = hom_saturated(A.tcr, SaturatedModuleRef(), SaturatedModuleRef()).rows(min(self.window, 10))
            for row in rows:
                self.record(f"h0 B_{row.n} ({A.name})", "Riemann-Roch", {"n": row.n, "divisor": str(row.divisor), "h0": row.h0}, "derived:h0")

    def do_blowup(self, cmd: Command) -> None:
        A = self.require_algebra()
        p = parse_point(cmd.args[0])
        opts = _blowup_options(list(cmd.args[1:]))
        res = blowup(A, p, pdim=Pdim(opts.get("pdim", "unknown")), line_id=opts.get("as"), name=opts.get("name"))
        B = res.algebra
        self.state.algebra = B
        self.record(
            f"blowup {p}",
            "blowup: exceptional line at tau(p)",
            {"name": B.name, "mu": B.mu, "M": str(B.M), "exceptional": str(res.exceptional), "smoothness": B.smoothness.value},
            "derived:blowup",
        )
        self.record(f"delta hilb R ({B.name})", "hilb R(p) - hilb R", hilb_R(B) - hilb_R(A), "derived:blowup")
        self._series(B)

    def do_blowdown(self, cmd: Command) -> None:
        A = self.require_algebra()
        B = blowdown(A, cmd.args[0])
        self.state.algebra = B
        self.record(
            f"blowdown {cmd.args[0]}",
            "blowdown: M gains tau^{-1}(Div L)",
            {"name": B.name, "mu": B.mu, "M": str(B.M), "smoothness": B.smoothness.value},
            "derived:blowdown",
        )
        self.record(f"delta hilb R ({B.name})", "blowdown adds the sum of L[-i], i >= 1", hilb_R(B) - hilb_R(A), "derived:blowdown")
        if self.state.initial is not None and B == self.state.initial:
            self.record("roundtrip", "blowdown undoes blowup", "descriptor equals the initial algebra", "derived:equality")

    def do_line(self, cmd: Command) -> None:
        A = self.require_algebra()
        line = LineModuleRef(cmd.args[0], parse_point(cmd.args[1]))
        self.state.algebra = A.with_line(line)
        self.record(f"line {line.line_id}", "hilb L = 1/(1-s)^2", str(line), "declared")

    def do_facts(self, cmd: Command) -> None:
        A = self.require_algebra()
        fact = parse_fact(cmd.text.partition("add")[2])
        self.state.algebra = A.with_facts([fact])
        self.record("fact", fact.provenance.anchor or "declared", str(fact), fact.provenance.tag())

    def do_infer(self, cmd: Command) -> None:
        A = self.require_algebra()
        closure = A.closure()
        for f in closure.derived():
            self.record(f"infer {f.predicate}({', '.join(f.subject)})", f.provenance.anchor, f.holds, f.provenance.tag())
        for note in closure.notes:
            self.record("coverage", "pair theorems", note, "derived:infer")
        if closure.contradiction:
            a, b = closure.contradictions[0]
            raise InconsistencyError(f"contradiction: {a} and {b}")

    def do_intersect(self, cmd: Command) -> None:
        A = self.require_algebra()
        a, b = A.line(cmd.args[0]), A.line(cmd.args[1])
        rel = classify(A, a, b)
        closure = A.closure()
        if closure.contradiction:
            x, y = closure.contradictions[0]
            raise InconsistencyError(f"contradiction: {x} and {y}")
        self.record(f"relation {a.line_id},{b.line_id}", "case split on p = tau^j(p')", str(rel), "derived:classify")
        options = resolve(rel, closure, a.line_id, None if rel.kind == "same_line" else b.line_id)
        if not options:
            raise InconsistencyError(f"no admissible C left for ({a.line_id}, {b.line_id})")
        for e in options:
            self.record(
                f"ledger {a.line_id},{b.line_id}",
                "X = (C - H)/(1-s)",
                {"H": str(e.H), "E": str(e.E), "C": str(e.C), "X": str(e.X), "dot": e.dot},
                "derived:ledger" if len(options) < len(ledger(rel)) else "derived:ledger (candidates)",
            )
        hom = line_hom(A, a, b)
        self.record(
            f"hilb Hom({a.line_id},{b.line_id})",
            "End(L) = k[g]" if rel.kind == "same_line" else "Hom of lines is 0 or s^j/(1-s)",
            {"series": str(hom.series), "conditional": hom.conditional},
            "derived:line_hom",
        )

    def do_report(self, cmd: Command) -> None:
        A = self.require_algebra()
        self.record(
            f"report {A.name}",
            "descriptor",
            {
                "mu": A.mu,
                "M": str(A.M),
                "smoothness": A.smoothness.value,
                "lines": [str(l) for l in A.lines],
                "hilb R": str(hilb_R(A)),
                "dims": hilb_R(A).coefficients(0, 4),
                "history": len(A.history),
            },
            "derived:report",
        )

    def do_reproduce_section9(self, cmd: Command) -> None:
        rep = section9_report()
        for rec in rep.records:
            self.state.records.append(rec)
            self.emit(rec)
        self.state.algebra = rep.final


BUILTINS = {"reproduce-section9": "reproduce-section9\n"}


def run_scenario(text: str, *, window: int = 50, trace: bool = False, emit: Callable[[Record], None] | None = None) -> RunState:
    return Runner(parse_scenario(text), window=window, trace=trace, emit=emit).run()
