"""Hilbert-style proof objects, checking, and bounded proof search.

Four calculi are supported.  Cbr has axioms Ax1-Ax14 and detachment; Cie
swaps Ax12 for Ax15.  Their self-extensional extensions RCbr and RCie add
the global congruence rules for negation and for the consistency operator:
from a proved biconditional `a <-> b` infer `!a <-> !b` (Eneg) or
`@a <-> @b` (Ecirc).  Global means the rules apply to theorems only; in a
proof from premises they may cite only lines of the premise-free prefix.

Derivability from premises in the extended calculi follows the modal
convention: the goal is derivable from a set when the goal itself is a
theorem, or some right-associated conjunction of premises implies it as a
theorem.

Proof search is a bounded forward chaining over axiom instances whose
metavariables range over subformulas of the goal, closed under detachment
and (for the extended calculi) the congruence rules on proved
biconditionals.  The search is deterministic and sound but deliberately
incomplete: `unknown` is a first-class outcome and never a refutation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .formula import (
    And,
    Atom,
    Circ,
    Formula,
    Imp,
    Neg,
    UnboundMetavariable,
    parse,
    render,
    subformulas,
    substitute,
)


class LogicId(Enum):
    CBR = "cbr"
    CIE = "cie"
    RCBR = "rcbr"
    RCIE = "rcie"

    @property
    def self_extensional(self) -> bool:
        return self in (LogicId.RCBR, LogicId.RCIE)

    @property
    def base(self) -> "LogicId":
        return {LogicId.RCBR: LogicId.CBR, LogicId.RCIE: LogicId.CIE}.get(self, self)

    @classmethod
    def from_name(cls, name: str) -> "LogicId":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown logic {name!r}; expected one of "
                             f"{', '.join(m.value for m in cls)}") from None


AXIOM_SCHEMAS: dict[str, Formula] = {
    "Ax1": parse("alpha -> (beta -> alpha)"),
    "Ax2": parse("(alpha -> (beta -> gamma)) -> ((alpha -> beta) -> (alpha -> gamma))"),
    "Ax3": parse("alpha -> (beta -> (alpha & beta))"),
    "Ax4": parse("(alpha & beta) -> alpha"),
    "Ax5": parse("(alpha & beta) -> beta"),
    "Ax6": parse("alpha -> (alpha | beta)"),
    "Ax7": parse("beta -> (alpha | beta)"),
    "Ax8": parse("(alpha -> gamma) -> ((beta -> gamma) -> ((alpha | beta) -> gamma))"),
    "Ax9": parse("(alpha -> beta) | alpha"),
    "Ax10": parse("alpha | !alpha"),
    "Ax11": parse("@alpha -> (alpha -> (!alpha -> beta))"),
    "Ax12": parse("@alpha | (alpha & !alpha)"),
    "Ax13": parse("alpha -> !!alpha"),
    "Ax14": parse("!!alpha -> alpha"),
    "Ax15": parse("!@alpha -> (alpha & !alpha)"),
}

_CBR_AXIOMS = frozenset(f"Ax{i}" for i in range(1, 15))
_CIE_AXIOMS = frozenset(f"Ax{i}" for i in range(1, 16)) - {"Ax12"}

LOGIC_AXIOMS: dict[LogicId, frozenset[str]] = {
    LogicId.CBR: _CBR_AXIOMS,
    LogicId.CIE: _CIE_AXIOMS,
    LogicId.RCBR: _CBR_AXIOMS,
    LogicId.RCIE: _CIE_AXIOMS,
}

_METAVARS: dict[str, tuple[str, ...]] = {
    name: tuple(sorted({a.name for a in subformulas([schema]) if isinstance(a, Atom)}))
    for name, schema in AXIOM_SCHEMAS.items()
}


def axiom_instance(name: str, binding: Mapping[str, Formula]) -> Formula:
    """Instance of the named axiom schema under the binding."""
    return substitute(AXIOM_SCHEMAS[name], binding)


# ---------------------------------------------------------------------------
# Proof objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomStep:
    name: str
    binding: tuple[tuple[str, Formula], ...]  # sorted by metavariable name


@dataclass(frozen=True)
class MpStep:
    antecedent_line: int   # line holding phi
    implication_line: int  # line holding phi -> psi


@dataclass(frozen=True)
class EnegStep:
    source_line: int


@dataclass(frozen=True)
class EcircStep:
    source_line: int


@dataclass(frozen=True)
class PremiseStep:
    premise_number: int  # 1-based position in the premise list


Justification = AxiomStep | MpStep | EnegStep | EcircStep | PremiseStep


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


Proof = tuple[ProofLine, ...]


def axiom_line(name: str, binding: Mapping[str, Formula]) -> ProofLine:
    items = tuple(sorted(binding.items()))
    return ProofLine(axiom_instance(name, binding), AxiomStep(name, items))


def _biconditional_parts(f: Formula) -> tuple[Formula, Formula] | None:
    """Split `(a -> b) & (b -> a)` into (a, b); None when not of that shape."""
    if (isinstance(f, And) and isinstance(f.left, Imp) and isinstance(f.right, Imp)
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


def format_proof(proof: Sequence[ProofLine]) -> str:
    """One line per step: `n. <formula> ; <justification>`."""
    out = []
    for n, line in enumerate(proof, start=1):
        j = line.justification
        if isinstance(j, AxiomStep):
            binding = ", ".join(f"{m}={render(f)}" for m, f in j.binding)
            text = f"{j.name}[{binding}]"
        elif isinstance(j, MpStep):
            text = f"MP {j.antecedent_line} {j.implication_line}"
        elif isinstance(j, EnegStep):
            text = f"Eneg {j.source_line}"
        elif isinstance(j, EcircStep):
            text = f"Ecirc {j.source_line}"
        else:
            text = f"Prem {j.premise_number}"
        out.append(f"{n}. {render(line.formula)} ; {text}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# Proof checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_proof(logic: LogicId, premises: Sequence[Formula],
                proof: Sequence[ProofLine], *, eneg_only: bool = False) -> CheckResult:
    """Verify every line of the proof under the logic's axioms and rules.

    The first offending line is reported.  `eneg_only` restricts RCbr to
    the negation congruence rule, rejecting Ecirc steps even though they
    are admissible.
    """
    premises = list(premises)
    axioms = LOGIC_AXIOMS[logic]
    first_premise_line = None
    for n, line in enumerate(proof, start=1):
        if isinstance(line.justification, PremiseStep) and first_premise_line is None:
            first_premise_line = n

    def fail(n: int, reason: str) -> CheckResult:
        return CheckResult(False, n, reason)

    for n, line in enumerate(proof, start=1):
        j = line.justification
        if isinstance(j, PremiseStep):
            if not 1 <= j.premise_number <= len(premises):
                return fail(n, f"premise {j.premise_number} does not exist")
            if premises[j.premise_number - 1] != line.formula:
                return fail(n, f"line does not match premise {j.premise_number}")
        elif isinstance(j, AxiomStep):
            if j.name not in AXIOM_SCHEMAS:
                return fail(n, f"unknown axiom {j.name}")
            if j.name not in axioms:
                return fail(n, f"{j.name} is not an axiom of {logic.value}")
            try:
                expected = axiom_instance(j.name, dict(j.binding))
            except UnboundMetavariable as exc:
                return fail(n, f"unbound metavariable {exc.args[0]} in {j.name}")
            if expected != line.formula:
                return fail(n, f"line is not the stated instance of {j.name}")
        elif isinstance(j, MpStep):
            if not (1 <= j.antecedent_line < n and 1 <= j.implication_line < n):
                return fail(n, "detachment must cite earlier lines")
            phi = proof[j.antecedent_line - 1].formula
            impl = proof[j.implication_line - 1].formula
            if impl != Imp(phi, line.formula):
                return fail(n, "cited lines do not match a detachment step")
        elif isinstance(j, (EnegStep, EcircStep)):
            if not logic.self_extensional:
                return fail(n, f"global rules are not available in {logic.value}")
            if isinstance(j, EcircStep) and logic is LogicId.RCBR and eneg_only:
                return fail(n, "Ecirc is disabled for rcbr in eneg-only mode")
            if not 1 <= j.source_line < n:
                return fail(n, "global rule must cite an earlier line")
            if first_premise_line is not None and j.source_line >= first_premise_line:
                return fail(n, "global rule may only cite the premise-free prefix")
            parts = _biconditional_parts(proof[j.source_line - 1].formula)
            if parts is None:
                return fail(n, "global rule requires a biconditional source line")
            a, b = parts
            wrap = Neg if isinstance(j, EnegStep) else Circ
            expected = And(Imp(wrap(a), wrap(b)), Imp(wrap(b), wrap(a)))
            if expected != line.formula:
                return fail(n, "line is not the congruence image of the source")
        else:
            return fail(n, f"unrecognized justification {j!r}")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# Bounded proof search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    """Search limits: final proof length and distinct formulas generated."""

    max_lines: int = 200
    max_formulas: int = 5000

    def validate(self) -> None:
        if self.max_lines <= 0 or self.max_formulas <= 0:
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class SearchResult:
    proved: bool
    proof: Proof | None = None

    @property
    def status(self) -> str:
        return "proved" if self.proved else "unknown"


def _saturate(logic: LogicId, goal: Formula, budget: Budget) -> dict[Formula, tuple]:
    """Forward closure of goal-instantiated axioms under the logic's rules.

    Returns a map from each derived formula to the record of its first
    derivation; deterministic for fixed inputs.
    """
    terms = subformulas([goal]).entries
    known: dict[Formula, tuple] = {}
    agenda: deque[Formula] = deque()
    by_antecedent: dict[Formula, list[Formula]] = {}

    def derive(f: Formula, record: tuple) -> None:
        if f in known or len(known) >= budget.max_formulas:
            return
        known[f] = record
        agenda.append(f)

    for name in sorted(LOGIC_AXIOMS[logic], key=lambda s: int(s[2:])):
        metas = _METAVARS[name]
        for combo in product(terms, repeat=len(metas)):
            binding = dict(zip(metas, combo))
            derive(axiom_instance(name, binding),
                   ("axiom", name, tuple(sorted(binding.items()))))
            if len(known) >= budget.max_formulas:
                break
        if len(known) >= budget.max_formulas:
            break

    while agenda:
        f = agenda.popleft()
        if isinstance(f, Imp):
            by_antecedent.setdefault(f.left, []).append(f.right)
            if f.left in known:
                derive(f.right, ("mp", f.left, f))
        for consequent in by_antecedent.get(f, ()):
            derive(consequent, ("mp", f, Imp(f, consequent)))
        if logic.self_extensional:
            parts = _biconditional_parts(f)
            if parts is not None:
                a, b = parts
                derive(And(Imp(Neg(a), Neg(b)), Imp(Neg(b), Neg(a))), ("eneg", f))
                derive(And(Imp(Circ(a), Circ(b)), Imp(Circ(b), Circ(a))), ("ecirc", f))
        if goal in known:
            break
    return known


class _ProofTooLong(Exception):
    pass


def _reconstruct(goal: Formula, known: dict[Formula, tuple], max_lines: int) -> Proof:
    lines: list[ProofLine] = []
    line_no: dict[Formula, int] = {}

    def emit(f: Formula) -> int:
        if f in line_no:
            return line_no[f]
        record = known[f]
        if record[0] == "axiom":
            step: Justification = AxiomStep(record[1], record[2])
        elif record[0] == "mp":
            step = MpStep(emit(record[1]), emit(record[2]))
        elif record[0] == "eneg":
            step = EnegStep(emit(record[1]))
        else:
            step = EcircStep(emit(record[1]))
        if len(lines) >= max_lines:
            raise _ProofTooLong
        lines.append(ProofLine(f, step))
        line_no[f] = len(lines)
        return line_no[f]

    emit(goal)
    return tuple(lines)


def bounded_prove(logic: LogicId, goal: Formula,
                  budget: Budget = Budget()) -> SearchResult:
    """Search for a premise-free proof of the goal within the budget.

    `unknown` only means the bounded search failed; it is never a
    refutation.
    """
    budget.validate()
    known = _saturate(logic, goal, budget)
    if goal not in known:
        return SearchResult(False)
    try:
        return SearchResult(True, _reconstruct(goal, known, budget.max_lines))
    except _ProofTooLong:
        return SearchResult(False)


def _conjoin_right(formulas: Sequence[Formula]) -> Formula:
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = And(f, result)
    return result


def rl_derives(logic: LogicId, premises: Iterable[Formula], goal: Formula,
               budget: Budget = Budget()) -> SearchResult:
    """Bounded derivability from premises in an extended calculus.

    Tries a premise-free proof of the goal, then of `(g1 & (g2 & ...)) ->
    goal` for premise subsets in increasing size; the returned proof ends
    with premise lines and detachments discharging the implication.
    """
    budget.validate()
    premise_list: list[Formula] = []
    for f in premises:
        if f not in premise_list:
            premise_list.append(f)

    direct = bounded_prove(logic, goal, budget)
    if direct.proved:
        return direct

    for size in range(1, len(premise_list) + 1):
        for positions in combinations(range(len(premise_list)), size):
            subset = [premise_list[i] for i in positions]
            conj = _conjoin_right(subset)
            attempt = bounded_prove(logic, Imp(conj, goal), budget)
            if not attempt.proved:
                continue
            lines = list(attempt.proof)
            implication_line = len(lines)
            formula_line: dict[Formula, int] = {}
            for i, f in zip(positions, subset):
                lines.append(ProofLine(f, PremiseStep(i + 1)))
                formula_line[f] = len(lines)

            def build(fs: Sequence[Formula]) -> int:
                """Line number holding the right-associated conjunction."""
                if len(fs) == 1:
                    return formula_line[fs[0]]
                rest_line = build(fs[1:])
                rest = lines[rest_line - 1].formula
                lines.append(axiom_line("Ax3", {"alpha": fs[0], "beta": rest}))
                step1 = len(lines)
                lines.append(ProofLine(Imp(rest, And(fs[0], rest)),
                                       MpStep(formula_line[fs[0]], step1)))
                step2 = len(lines)
                lines.append(ProofLine(And(fs[0], rest), MpStep(rest_line, step2)))
                return len(lines)

            conj_line = build(subset)
            lines.append(ProofLine(goal, MpStep(conj_line, implication_line)))
            if len(lines) > budget.max_lines:
                continue
            return SearchResult(True, tuple(lines))
    return SearchResult(False)
