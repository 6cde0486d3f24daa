"""Three-valued nondeterministic matrix semantics for the logics Cbr and Cie.

Truth values are 1 (true), 1/2 (inconsistently true) and 0 (false); the
designated values are 1 and 1/2.  Each connective is interpreted by a table
whose cells are nonempty *sets* of values: a valuation picks one value per
formula, constrained to lie in the cell determined by the values of the
immediate subformulas.  Identical subformulas share a single value, so
valuations live on a SubformulaIndex.

Consequence holds when every legal valuation that designates all premises
also designates the conclusion.  By the soundness/completeness of the
Hilbert calculi for Cbr and Cie with respect to these matrices, `holds`
decides derivability in those logics.

Countermodel witnesses are deterministic: valuations are enumerated in
lexicographic order over the index with atoms first and values ordered
1 < 1/2 < 0, and the first countermodel in that order is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .formula import (
    And,
    Atom,
    Circ,
    Formula,
    Imp,
    Neg,
    Or,
    SubformulaIndex,
    children,
    iff,
    render,
    subformulas,
)


class TruthValue(Enum):
    ONE = "1"
    HALF = "1/2"
    ZERO = "0"

    @property
    def designated(self) -> bool:
        return self is not TruthValue.ZERO

    def __repr__(self) -> str:
        return f"TruthValue({self.value})"


ONE, HALF, ZERO = TruthValue.ONE, TruthValue.HALF, TruthValue.ZERO

#: Fixed enumeration order of values; drives witness determinism.
VALUE_ORDER: tuple[TruthValue, ...] = (ONE, HALF, ZERO)

DESIGNATED: frozenset[TruthValue] = frozenset({ONE, HALF})
_D = DESIGNATED
_ALL: frozenset[TruthValue] = frozenset(VALUE_ORDER)


def _cells(rows) -> dict:
    return {k: frozenset(v) for k, v in rows.items()}


_CONJ = _cells({
    (ONE, ONE): _D, (ONE, HALF): _D, (ONE, ZERO): {ZERO},
    (HALF, ONE): _D, (HALF, HALF): _D, (HALF, ZERO): {ZERO},
    (ZERO, ONE): {ZERO}, (ZERO, HALF): {ZERO}, (ZERO, ZERO): {ZERO},
})

_DISJ = _cells({
    (ONE, ONE): _D, (ONE, HALF): _D, (ONE, ZERO): _D,
    (HALF, ONE): _D, (HALF, HALF): _D, (HALF, ZERO): _D,
    (ZERO, ONE): _D, (ZERO, HALF): _D, (ZERO, ZERO): {ZERO},
})

_IMP = _cells({
    (ONE, ONE): _D, (ONE, HALF): _D, (ONE, ZERO): {ZERO},
    (HALF, ONE): _D, (HALF, HALF): _D, (HALF, ZERO): {ZERO},
    (ZERO, ONE): _D, (ZERO, HALF): _D, (ZERO, ZERO): _D,
})

_NEG = _cells({(ONE,): {ZERO}, (HALF,): {HALF}, (ZERO,): {ONE}})

_CIRC_CBR = _cells({(ONE,): _D, (HALF,): {ZERO}, (ZERO,): _D})

_CIRC_CIE = _cells({(ONE,): {ONE}, (HALF,): {ZERO}, (ZERO,): {ONE}})


@dataclass(frozen=True)
class Nmatrix:
    """A three-valued nondeterministic matrix over the five connectives."""

    name: str
    tables: Mapping[str, Mapping[tuple, frozenset[TruthValue]]]

    def cell(self, connective: str, args: tuple) -> frozenset[TruthValue]:
        return self.tables[connective][args]

    def __repr__(self) -> str:
        return f"Nmatrix({self.name})"


MATRIX_CBR = Nmatrix("cbr", {
    "and": _CONJ, "or": _DISJ, "imp": _IMP, "neg": _NEG, "circ": _CIRC_CBR,
})

MATRIX_CIE = Nmatrix("cie", {
    "and": _CONJ, "or": _DISJ, "imp": _IMP, "neg": _NEG, "circ": _CIRC_CIE,
})

_CONNECTIVE_OF = {And: "and", Or: "or", Imp: "imp", Neg: "neg", Circ: "circ"}


def connective_of(f: Formula) -> str | None:
    """Tag of the top connective, or None for atoms."""
    return _CONNECTIVE_OF.get(type(f))


def legal_values(matrix: Nmatrix, connective: str,
                 child_values: tuple[TruthValue, ...]) -> frozenset[TruthValue]:
    """The table cell for `connective` at the given argument values."""
    return matrix.cell(connective, tuple(child_values))


class BudgetExceededError(RuntimeError):
    """Raised when an instance exceeds the configured search budget."""


#: Decline instances with more distinct subformulas than this unless the
#: caller overrides; 3**18 legal paths is the practical ceiling for blind
#: enumeration.
DEFAULT_MAX_SUBFORMULAS = 18


# ---------------------------------------------------------------------------
# Valuation enumeration
# ---------------------------------------------------------------------------


def _ordered_positions(index: SubformulaIndex) -> list[int]:
    """Positions in enumeration order: atoms first, then compounds.

    Relative order within each group follows the index, so children still
    precede parents among the compounds.
    """
    atoms = [i for i, f in enumerate(index.entries) if isinstance(f, Atom)]
    compounds = [i for i, f in enumerate(index.entries) if not isinstance(f, Atom)]
    return atoms + compounds


def valuations(matrix: Nmatrix, index: SubformulaIndex) -> Iterator[dict[Formula, TruthValue]]:
    """All legal valuations on the index, lexicographically ordered.

    The order is over the sequence of index entries with atoms first, values
    ordered 1 < 1/2 < 0.  Each yielded dict maps every index entry to its
    value.
    """
    entries = index.entries
    order = _ordered_positions(index)
    child_pos: dict[int, tuple[int, ...]] = {}
    for i, f in enumerate(entries):
        if not isinstance(f, Atom):
            child_pos[i] = tuple(index.position[c] for c in children(f))

    values: list[TruthValue | None] = [None] * len(entries)

    def rec(k: int) -> Iterator[dict[Formula, TruthValue]]:
        if k == len(order):
            yield {entries[i]: values[i] for i in range(len(entries))}
            return
        pos = order[k]
        f = entries[pos]
        if isinstance(f, Atom):
            options: Iterable[TruthValue] = VALUE_ORDER
        else:
            args = tuple(values[c] for c in child_pos[pos])
            cell = matrix.cell(connective_of(f), args)
            options = [v for v in VALUE_ORDER if v in cell]
        for v in options:
            values[pos] = v
            yield from rec(k + 1)
        values[pos] = None

    return rec(0)


# ---------------------------------------------------------------------------
# Decision procedure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a consequence query.

    `assignment` is None for valid entailments; otherwise it lists the
    witness valuation over the whole subformula index, in enumeration order.
    """

    valid: bool
    assignment: tuple[tuple[Formula, TruthValue], ...] | None = None

    def to_json_dict(self) -> dict:
        if self.valid:
            return {"verdict": "valid"}
        return {
            "verdict": "countermodel",
            "assignment": {render(f): v.value for f, v in self.assignment},
        }

    def value_of(self, f: Formula) -> TruthValue:
        for g, v in self.assignment or ():
            if g == f:
                return v
        raise KeyError(render(f))


def _propagate(matrix, entries, child_pos, parents, domains, queue) -> bool:
    """Arc-consistency pass over the shared-subformula constraint graph.

    Returns False when some domain empties (no legal valuation remains).
    `queue` holds compound positions whose constraint must be re-checked.
    """
    from itertools import product

    while queue:
        i = queue.pop()
        kids = child_pos[i]
        conn = connective_of(entries[i])
        own = domains[i]
        new_own: set[TruthValue] = set()
        allowed_child: list[set[TruthValue]] = [set() for _ in kids]
        for combo in product(*(domains[c] for c in kids)):
            inter = matrix.cell(conn, combo) & own
            if inter:
                new_own |= inter
                for slot, v in enumerate(combo):
                    allowed_child[slot].add(v)
        if not new_own:
            return False
        if new_own != own:
            domains[i] = frozenset(new_own)
            for p in parents[i]:
                queue.add(p)
        for slot, c in enumerate(kids):
            if allowed_child[slot] != domains[c]:
                if not allowed_child[slot]:
                    return False
                domains[c] = frozenset(allowed_child[slot])
                queue.add(i)
                for p in parents[c]:
                    queue.add(p)
    return True


def _search(matrix: Nmatrix, index: SubformulaIndex,
            designated_at: frozenset[int], zero_at: frozenset[int],
            node_limit: int = 2_000_000) -> list[TruthValue] | None:
    """First legal valuation (in enumeration order) meeting the constraints.

    Positions in `designated_at` must get a designated value, positions in
    `zero_at` must get 0.  Returns the value vector over the index, or None.
    """
    entries = index.entries
    n = len(entries)
    child_pos: dict[int, tuple[int, ...]] = {}
    parents: list[list[int]] = [[] for _ in range(n)]
    for i, f in enumerate(entries):
        if not isinstance(f, Atom):
            kids = tuple(index.position[c] for c in children(f))
            child_pos[i] = kids
            for c in kids:
                parents[c].append(i)

    # 1 and 1/2 are interchangeable at a position when (a) every occurrence
    # feeds a binary connective, whose table rows and columns coincide for
    # the two values, and (b) the position's own cell, whenever it admits
    # 1/2, also admits 1 -- true for atoms, the binary connectives and the
    # consistency operator, but not for negation (whose 1/2 cell is a
    # singleton).  At such positions the 1/2 branch can be skipped: any
    # solution through it maps to a solution through 1.
    half_matters = [False] * n
    for i, f in enumerate(entries):
        if isinstance(f, (Neg, Circ)):
            half_matters[child_pos[i][0]] = True
        if isinstance(f, Neg):
            half_matters[i] = True

    domains: list[frozenset[TruthValue]] = [_ALL] * n
    for i in designated_at:
        domains[i] = domains[i] & DESIGNATED
    for i in zero_at:
        domains[i] = domains[i] & frozenset({ZERO})
        if not domains[i]:
            return None

    order = _ordered_positions(index)
    expansions = 0

    def dfs(domains: list[frozenset[TruthValue]], queue: set[int]) -> list[TruthValue] | None:
        nonlocal expansions
        expansions += 1
        if expansions > node_limit:
            raise BudgetExceededError(
                f"decision search exceeded {node_limit} expansions")
        doms = list(domains)
        if not _propagate(matrix, entries, child_pos, parents, doms, set(queue)):
            return None
        branch = next((p for p in order if len(doms[p]) > 1), None)
        if branch is None:
            return [next(iter(d)) for d in doms]
        options = [v for v in VALUE_ORDER if v in doms[branch]]
        if (not half_matters[branch] and ONE in doms[branch] and HALF in doms[branch]):
            options = [v for v in options if v is not HALF]
        for v in options:
            child = list(doms)
            child[branch] = frozenset({v})
            dirty = set(parents[branch])
            if branch in child_pos:
                dirty.add(branch)
            found = dfs(child, dirty)
            if found is not None:
                return found
        return None

    return dfs(domains, set(child_pos))


def holds(matrix: Nmatrix, premises: Iterable[Formula], conclusion: Formula,
          *, max_subformulas: int | None = DEFAULT_MAX_SUBFORMULAS) -> Verdict:
    """Decide whether the premises entail the conclusion in the matrix.

    Valid iff no legal valuation designates every premise while giving the
    conclusion an undesignated value; otherwise the first countermodel in
    enumeration order is returned.  Raises BudgetExceededError when the
    instance has more distinct subformulas than `max_subformulas` (pass
    None to disable the cap).
    """
    premises = list(premises)
    index = subformulas(premises + [conclusion])
    if max_subformulas is not None and len(index) > max_subformulas:
        raise BudgetExceededError(
            f"{len(index)} distinct subformulas exceed the cap of {max_subformulas}")
    designated_at = frozenset(index.position[p] for p in premises)
    zero_at = frozenset({index.position[conclusion]})
    if designated_at & zero_at:
        return Verdict(valid=True)
    vec = _search(matrix, index, designated_at, zero_at)
    if vec is None:
        return Verdict(valid=True)
    order = _ordered_positions(index)
    assignment = tuple((index.entries[i], vec[i]) for i in order)
    return Verdict(valid=False, assignment=assignment)


def is_theorem(matrix: Nmatrix, f: Formula, *,
               max_subformulas: int | None = DEFAULT_MAX_SUBFORMULAS) -> Verdict:
    """Validity of `f` (entailment from no premises)."""
    return holds(matrix, (), f, max_subformulas=max_subformulas)


def equivalent(matrix: Nmatrix, a: Formula, b: Formula, *,
               max_subformulas: int | None = DEFAULT_MAX_SUBFORMULAS) -> Verdict:
    """Theoremhood of the biconditional of `a` and `b`."""
    return is_theorem(matrix, iff(a, b), max_subformulas=max_subformulas)


def matrix_for_logic(name: str) -> Nmatrix:
    """Matrix deciding the named logic ('cbr' or 'cie')."""
    key = name.lower()
    if key == "cbr":
        return MATRIX_CBR
    if key == "cie":
        return MATRIX_CIE
    raise ValueError(f"no matrix decides {name!r}")
