"""Forward-chaining closure over the condition lists of the self-intersection theorems.

Facts are signed atoms ``predicate(subject...)``.  Rules are Horn clauses
over line roles; each rule is also used in contrapositive form, but no
converse that was not proved is ever added.  The closure is a
deterministic fixpoint, so the same input always yields the same output.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "Provenance",
    "Fact",
    "Rule",
    "RULES",
    "OPTIONAL_RULES",
    "InferenceResult",
    "PairScope",
    "infer",
    "parse_fact",
    "parse_facts",
    "P",
]


class P:
    """Predicate names."""

    # single line L = R/J
    EXT1_JJ_ZERO = "ext1_JJ_zero"
    EXT1_LL_ZERO = "ext1_LL_zero"
    EQ_LINE = "eq_line"
    HOM_JL_MINIMAL = "hom_JL_minimal"  # hilb Hom(J, L) = s/(1-s)^2
    SELF_DOT_MINUS_ONE = "self_dot_minus_one"
    J_PROJECTIVE = "J_projective"  # J localized at g, degree 0 part, is projective
    PDIM_FINITE = "pdim_finite"
    EXCEPTIONAL = "exceptional"
    NONSPLIT_SELF_EXT = "nonsplit_self_extension"
    MS_DEFINED = "ms_self_dot_defined"
    NO_LINE_AT_TAU_P = "no_line_at_tau_p"  # assumption slot, never derived
    # algebra
    QGR_SMOOTH = "qgr_smooth"
    R_CIRC_SIMPLE = "R_circ_simple"
    # pair (L, L') with Div L != Div L'
    PAIR_EXT1_JJ_ZERO = "pair_ext1_JJ_zero"
    PAIR_EXT1_EQ_HOM = "pair_ext1_LL_eq_hom"
    PAIR_HOMJJ_GAP_GEOM = "pair_homJJ_gap_geometric"  # hilb R - hilb Hom(J,J') = 1/(1-s)
    PAIR_HOMJL_INV_SQ = "pair_homJL_inverse_square"  # hilb Hom(J,L') = 1/(1-s)^2
    PAIR_DOT_ZERO = "pair_dot_zero"
    # pair with L not isomorphic to L'
    PAIR_EXT1_JJ_SMALL = "pair_ext1_JJ_sinv_plus_one"
    PAIR_X_GEOM = "pair_X_sinv_geometric"
    PAIR_HOMJJ_GAP_ONE_PLUS_S = "pair_homJJ_gap_one_plus_s"
    PAIR_HOMJL_SINV_SQ = "pair_homJL_sinv_square"
    PAIR_DOT_ONE = "pair_dot_one"
    ISOMORPHIC = "isomorphic"


KNOWN_PREDICATES = {v for k, v in vars(P).items() if not k.startswith("_")}


@dataclass(frozen=True)
class Provenance:
    kind: str  # cited | declared | derived | assumption
    anchor: str = ""
    rule: str | None = None
    premises: tuple[tuple[str, tuple[str, ...], bool], ...] = ()

    def tag(self) -> str:
        if self.kind == "derived":
            return f"derived:{self.rule}"
        return self.kind + (f": {self.anchor}" if self.anchor else "")


@dataclass(frozen=True)
class Fact:
    predicate: str
    subject: tuple[str, ...]
    holds: bool = True
    provenance: Provenance = field(default_factory=lambda: Provenance("declared"), compare=False)

    @property
    def key(self) -> tuple[str, tuple[str, ...], bool]:
        return (self.predicate, self.subject, self.holds)

    def __str__(self) -> str:
        atom = f"{self.predicate}({', '.join(self.subject)})"
        return atom if self.holds else f"not {atom}"


# A literal in a rule: (predicate, role, holds); roles are L, L2 (lines) and R (algebra).
Literal = tuple[str, str, bool]


@dataclass(frozen=True)
class Rule:
    rule_id: str
    anchor: str
    premises: tuple[Literal, ...]
    conclusion: Literal
    scope: str = "line"  # line | pair_distinct_points | pair_nonisomorphic


def _imp(rid: str, anchor: str, prem: Iterable[Literal], concl: Literal, scope: str = "line") -> list[Rule]:
    """The rule plus every contrapositive: not C and the other premises give not P_i."""
    prem = tuple(prem)
    out = [Rule(rid, anchor, prem, concl, scope)]
    for i, (pred, role, holds) in enumerate(prem):
        rest = prem[:i] + prem[i + 1 :]
        neg = (concl[0], concl[1], not concl[2])
        out.append(Rule(rid + "/contra", anchor, (neg,) + rest, (pred, role, not holds), scope))
    return out


def _chain_equiv(rid: str, anchor: str, atoms: list[Literal], scope: str) -> list[Rule]:
    out: list[Rule] = []
    for a, b in zip(atoms, atoms[1:]):
        out += _imp(rid, anchor, [a], b, scope) + _imp(rid, anchor, [b], a, scope)
    return out


def _L(pred: str) -> Literal:
    return (pred, "L", True)


def _L2(pred: str) -> Literal:
    return (pred, "L2", True)


def _R(pred: str) -> Literal:
    return (pred, "R", True)


def _build_rules() -> list[Rule]:
    r: list[Rule] = []
    one = [_L(P.EXT1_JJ_ZERO), _L(P.EXT1_LL_ZERO), _L(P.HOM_JL_MINIMAL), _L(P.SELF_DOT_MINUS_ONE)]
    r += _chain_equiv("self-dot-equiv", "self-intersection criterion: Ext^1(J,J)=0 <=> Ext^1(L,L)=0 <=> Hom(J,L) minimal <=> (L.L)=-1", one, "line")
    r += _imp("self-dot=>eq-line", "(L.L) = -1 forces hilb End(J) = hilb R", [_L(P.SELF_DOT_MINUS_ONE)], _L(P.EQ_LINE))
    r += _imp("projective+eq-line", "J projective with hilb End(J) = hilb R gives Ext^1(J,J) = 0", [_L(P.J_PROJECTIVE), _L(P.EQ_LINE)], _L(P.EXT1_JJ_ZERO))
    r += _imp("smooth=>Jproj", "smooth qgr makes every line ideal projective", [_R(P.QGR_SMOOTH)], _L(P.J_PROJECTIVE))
    r += _imp("pdim<=>projective", "finite pdim of L means pdim 1, so J is projective", [_L(P.PDIM_FINITE)], _L(P.J_PROJECTIVE))
    r += _imp("pdim<=>projective", "J projective gives pdim L <= 1", [_L(P.J_PROJECTIVE)], _L(P.PDIM_FINITE))
    r += _imp("pdim=>ms-defined", "finite pdim makes the Mori-Smith sum finite", [_L(P.PDIM_FINITE)], _L(P.MS_DEFINED))
    r += _imp("exceptional=>eq-line", "the exceptional line of a blowup has End(J) = R(tau p)", [_L(P.EXCEPTIONAL)], _L(P.EQ_LINE))
    r += _imp(
        "nonsplit=>ext1",
        "a nonsplit self-extension is a nonzero Ext^1(L, L)",
        [_L(P.NONSPLIT_SELF_EXT)],
        (P.EXT1_LL_ZERO, "L", False),
    )

    scope2 = "pair_distinct_points"
    two = [_L(P.PAIR_EXT1_JJ_ZERO), _L(P.PAIR_EXT1_EQ_HOM), _L(P.PAIR_HOMJL_INV_SQ), _L(P.PAIR_DOT_ZERO)]
    r += _chain_equiv("pair-dot-zero-equiv", "distinct points: Ext^1(J,J')=0 <=> Ext^1 = Hom <=> Hom(J,L') = 1/(1-s)^2 <=> dot 0", two, scope2)
    r += _imp("pair-dot-zero=>gap", "dot 0 forces hilb R - hilb Hom(J,J') = 1/(1-s)", [_L(P.PAIR_DOT_ZERO)], _L(P.PAIR_HOMJJ_GAP_GEOM), scope2)
    for role in ("L", "L2"):
        r += _imp(
            "projective+gap",
            "J projective with the 1/(1-s) gap gives Ext^1(J,J') = 0",
            [(P.J_PROJECTIVE, role, True), _L(P.PAIR_HOMJJ_GAP_GEOM)],
            _L(P.PAIR_EXT1_JJ_ZERO),
            scope2,
        )

    scope3 = "pair_nonisomorphic"
    r += _imp("pair-small-ext=>X", "Ext^1(J,J') = s^-1 + 1 gives X = s^-1/(1-s)", [_L(P.PAIR_EXT1_JJ_SMALL)], _L(P.PAIR_X_GEOM), scope3)
    r += _imp("pair-small-ext=>gap", "Ext^1(J,J') = s^-1 + 1 gives the (1+s) gap", [_L(P.PAIR_EXT1_JJ_SMALL)], _L(P.PAIR_HOMJJ_GAP_ONE_PLUS_S), scope3)
    three = [_L(P.PAIR_X_GEOM), _L(P.PAIR_HOMJL_SINV_SQ), _L(P.PAIR_DOT_ONE)]
    r += _chain_equiv("pair-dot-one-equiv", "non-isomorphic lines: X = s^-1/(1-s) <=> Hom(J,L') = s^-1/(1-s)^2 <=> dot 1", three, scope3)
    for role in ("L", "L2"):
        for cond in (P.PAIR_X_GEOM, P.PAIR_HOMJJ_GAP_ONE_PLUS_S):
            r += _imp(
                "projective+dot-one",
                "projective J with (L.L) = -1 and either condition gives Ext^1(J,J') = s^-1 + 1",
                [(P.J_PROJECTIVE, role, True), (P.SELF_DOT_MINUS_ONE, role, True), _L(cond)],
                _L(P.PAIR_EXT1_JJ_SMALL),
                scope3,
            )
    # the intersection of non-isomorphic lines is 0 or 1
    r += _imp("pair-dot-range", "non-isomorphic lines have dot 0 or 1", [(P.PAIR_DOT_ZERO, "L", False)], _L(P.PAIR_DOT_ONE), scope3)
    r += _imp("dot-value", "a dot product has one value", [_L(P.PAIR_DOT_ONE)], (P.PAIR_DOT_ZERO, "L", False), scope3)
    return r


RULES: tuple[Rule, ...] = tuple(_build_rules())

# conjectural implications; only used when explicitly switched on
OPTIONAL_RULES: Mapping[str, tuple[Rule, ...]] = {
    "smooth-self-dot": tuple(
        _imp(
            "smooth=>self-dot",
            "conjectural: smooth qgr gives (L.L) = -1",
            [_R(P.QGR_SMOOTH)],
            _L(P.SELF_DOT_MINUS_ONE),
        )
    ),
}


@dataclass(frozen=True)
class PairScope:
    """Which pair theorems apply to the ordered pair of lines (first, second)."""

    first: str
    second: str
    distinct_points: bool
    nonisomorphic: bool


@dataclass
class InferenceResult:
    facts: dict[tuple[str, tuple[str, ...], bool], Fact]
    contradictions: list[tuple[Fact, Fact]]
    notes: list[str]

    @property
    def contradiction(self) -> bool:
        return bool(self.contradictions)

    def status(self, predicate: str, *subject: str) -> bool | None:
        if (predicate, subject, True) in self.facts:
            return True
        if (predicate, subject, False) in self.facts:
            return False
        return None

    def derived(self) -> list[Fact]:
        return [f for f in self.ordered() if f.provenance.kind == "derived"]

    def ordered(self) -> list[Fact]:
        return [self.facts[k] for k in sorted(self.facts, key=lambda k: (k[1], k[0], not k[2]))]

    def chain(self, predicate: str, subject: tuple[str, ...], holds: bool = True) -> list[str]:
        """Rule ids on the derivation path of a fact, deepest first."""
        out: list[str] = []
        seen = set()

        def walk(key: tuple[str, tuple[str, ...], bool]) -> None:
            if key in seen or key not in self.facts:
                return
            seen.add(key)
            prov = self.facts[key].provenance
            for k in prov.premises:
                walk(k)
            if prov.rule:
                out.append(prov.rule)

        walk((predicate, subject, holds))
        return out


def _bindings(rule: Rule, lines: list[str], pairs: list[PairScope], algebra: str) -> Iterable[dict[str, tuple[str, ...]]]:
    if rule.scope == "line":
        for line in lines:
            yield {"L": (line,), "R": (algebra,)}
        return
    for pair in pairs:
        if rule.scope == "pair_distinct_points" and not pair.distinct_points:
            continue
        if rule.scope == "pair_nonisomorphic" and not pair.nonisomorphic:
            continue
        # pair predicates live on the pair subject; J_projective etc. on each line
        yield {"L": (pair.first, pair.second), "L2": (pair.second,), "R": (algebra,), "_line1": (pair.first,)}


def _subject(rule: Rule, role: str, pred: str, env: Mapping[str, tuple[str, ...]]) -> tuple[str, ...]:
    if rule.scope != "line" and role == "L" and not pred.startswith("pair_"):
        return env["_line1"]
    return env[role]


def infer(
    facts: Iterable[Fact],
    pairs: Iterable[PairScope] = (),
    *,
    algebra: str = "R",
    assumptions: Iterable[str] = (),
) -> InferenceResult:
    """Close the fact set under the rules; flag any atom derived with both signs."""
    known: dict[tuple[str, tuple[str, ...], bool], Fact] = {}
    for f in facts:
        known.setdefault(f.key, f)
    pairs = sorted(pairs, key=lambda p: (p.first, p.second))
    rules = list(RULES)
    for name in sorted(set(assumptions)):
        if name not in OPTIONAL_RULES:
            raise KeyError(f"unknown assumption {name!r}; available: {sorted(OPTIONAL_RULES)}")
        rules += OPTIONAL_RULES[name]

    lines = set()
    for f in known.values():
        if not f.predicate.startswith("pair_") and f.predicate not in (P.QGR_SMOOTH, P.R_CIRC_SIMPLE, P.ISOMORPHIC):
            lines.update(f.subject)
    for pair in pairs:
        lines.update((pair.first, pair.second))
    lines_sorted = sorted(lines)

    changed = True
    while changed:
        changed = False
        for rule in rules:
            for env in _bindings(rule, lines_sorted, pairs, algebra):
                keys = []
                for pred, role, holds in rule.premises:
                    k = (pred, _subject(rule, role, pred, env), holds)
                    if k not in known:
                        break
                    keys.append(k)
                else:
                    pred, role, holds = rule.conclusion
                    ck = (pred, _subject(rule, role, pred, env), holds)
                    if ck not in known:
                        known[ck] = Fact(pred, ck[1], holds, Provenance("derived", rule.anchor, rule.rule_id, tuple(keys)))
                        changed = True

    contradictions = []
    for (pred, subj, holds), f in sorted(known.items(), key=lambda kv: (kv[0][1], kv[0][0], not kv[0][2])):
        if holds and (pred, subj, False) in known:
            contradictions.append((f, known[(pred, subj, False)]))

    notes = []
    for pair in pairs:
        if not pair.distinct_points and pair.nonisomorphic:
            notes.append(
                f"({pair.first}, {pair.second}): distinct lines with equal divisor points are outside the "
                "coverage of the dot-zero theorem; only the dot-one theorem applies"
            )
    return InferenceResult(known, contradictions, notes)


_FACT = re.compile(
    r"^\s*(?P<neg>not\s+|!)?(?P<pred>[A-Za-z_][\w]*)\s*\(\s*(?P<args>[^)]*)\)\s*(?:\[(?P<prov>[^\]]*)\])?\s*$"
)


def parse_fact(text: str) -> Fact:
    """Parse ``[not] predicate(a, b) [tag]`` where tag is ``declared``, ``assumption`` or ``cited: anchor``."""
    m = _FACT.match(text)
    if not m:
        raise ValueError(f"bad fact literal {text!r}")
    pred = m.group("pred")
    if pred not in KNOWN_PREDICATES:
        raise ValueError(f"unknown predicate {pred!r}")
    subject = tuple(a.strip() for a in m.group("args").split(",") if a.strip())
    if not subject:
        raise ValueError(f"fact {text!r} has no subject")
    prov_text = (m.group("prov") or "declared").strip()
    kind, _, anchor = prov_text.partition(":")
    kind = kind.strip().lower()
    if kind not in ("cited", "declared", "assumption"):
        raise ValueError(f"unknown provenance tag {prov_text!r}")
    return Fact(pred, subject, m.group("neg") is None, Provenance(kind, anchor.strip()))


def parse_facts(text: str) -> list[Fact]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_fact(line))
    return out
