"""Boolean algebras with LFI operators.

A structure here is a Boolean algebra carrying two extra unary operations:
a paraconsistent negation and a consistency operator.  Four nested classes
are distinguished by their defining equations (written with meet ⊓, join ⊔,
complement -, bottom 0, top 1):

* RmbC:     x ⊔ ~x = 1  and  x ⊓ ~x ⊓ ox = 0
* RmbCciw:  RmbC plus  ox = -(x ⊓ ~x)
* RCbr:     RmbCciw plus  ~~x = x
* RCie:     RmbC plus  ~ox = x ⊓ ~x  and  ~~x = x

Finite structures live on the powerset of up to four atoms, elements coded
as bitmasks.  `enumerate_balfis` streams every structure of a class in a
fixed order; the constrained classes are tiny (the involution pins the
negation down) while the loose ones grow doubly exponentially, so the
stream for RmbC/RmbCciw should only be consumed lazily beyond two atoms.

The module also provides one concrete infinite structure: the algebra of
integer interval sets, where the inconsistent elements are exactly the
half-lines.  It satisfies the RCie equations yet refutes explosion, which
is checkable here by symbolic evaluation.

Evaluation of formulas is generic over a small algebra protocol (`top`,
`bottom`, `meet`, `join`, `comp`, `imp`, `neg`, `circ`), shared by the
finite structures, the interval model, and the periodic-set model in the
companion module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .formula import And, Atom, Circ, Formula, Imp, Neg, Or, atoms_of, render


class BalfiClass(Enum):
    RMBC = "RmbC"
    RMBCCIW = "RmbCciw"
    RCBR = "RCbr"
    RCIE = "RCie"

    @classmethod
    def from_name(cls, name: str) -> "BalfiClass":
        for member in cls:
            if member.value.lower() == name.lower():
                return member
        raise ValueError(f"unknown structure class {name!r}")


# ---------------------------------------------------------------------------
# Generic equation checking and evaluation
# ---------------------------------------------------------------------------

#: Equations per class, as (name, predicate) pairs over the algebra protocol.
_EQUATIONS = {
    "x|~x=1": lambda a, x: a.join(x, a.neg(x)) == a.top,
    "x&~x&ox=0": lambda a, x: a.meet(a.meet(x, a.neg(x)), a.circ(x)) == a.bottom,
    "ox=-(x&~x)": lambda a, x: a.circ(x) == a.comp(a.meet(x, a.neg(x))),
    "~~x=x": lambda a, x: a.neg(a.neg(x)) == x,
    "~ox=x&~x": lambda a, x: a.neg(a.circ(x)) == a.meet(x, a.neg(x)),
}

_CLASS_EQUATIONS: dict[BalfiClass, tuple[str, ...]] = {
    BalfiClass.RMBC: ("x|~x=1", "x&~x&ox=0"),
    BalfiClass.RMBCCIW: ("x|~x=1", "x&~x&ox=0", "ox=-(x&~x)"),
    BalfiClass.RCBR: ("x|~x=1", "x&~x&ox=0", "ox=-(x&~x)", "~~x=x"),
    BalfiClass.RCIE: ("x|~x=1", "x&~x&ox=0", "~ox=x&~x", "~~x=x"),
}


def equation_violations(algebra: Any, cls: BalfiClass,
                        elements: Iterable[Any]) -> list[tuple[str, Any]]:
    """All (equation, witness) pairs where a class equation fails."""
    names = _CLASS_EQUATIONS[cls]
    out = []
    for x in elements:
        for name in names:
            if not _EQUATIONS[name](algebra, x):
                out.append((name, x))
    return out


def neg_injectivity_violations(algebra: Any, elements: Sequence[Any]) -> list[tuple[Any, Any]]:
    """Pairs of distinct elements whose negations coincide."""
    out = []
    for i, x in enumerate(elements):
        for y in elements[i + 1:]:
            if algebra.neg(x) == algebra.neg(y):
                out.append((x, y))
    return out


def consistency_lemma_violations(algebra: Any, elements: Iterable[Any]) -> list[tuple[int, Any]]:
    """Failures of the six consistent/inconsistent exchange laws.

    With consistency meaning x ⊓ ~x = 0: (1) x consistent iff x = ~-x;
    (2) iff x = -~x; (3) iff -x consistent; (4) iff ~x consistent;
    (5) x inconsistent iff -x inconsistent; (6) iff ~x inconsistent.
    """
    def consistent(x):
        return algebra.meet(x, algebra.neg(x)) == algebra.bottom

    out = []
    for x in elements:
        c = consistent(x)
        checks = [
            (1, c == (x == algebra.neg(algebra.comp(x)))),
            (2, c == (x == algebra.comp(algebra.neg(x)))),
            (3, c == consistent(algebra.comp(x))),
            (4, c == consistent(algebra.neg(x))),
            (5, (not c) == (not consistent(algebra.comp(x)))),
            (6, (not c) == (not consistent(algebra.neg(x)))),
        ]
        out.extend((item, x) for item, ok in checks if not ok)
    return out


def evaluate(algebra: Any, assignment: Mapping[Formula, Any], f: Formula) -> Any:
    """Homomorphic extension of an atom assignment into the algebra."""
    if isinstance(f, Atom):
        try:
            return assignment[f]
        except KeyError:
            raise ValueError(f"unassigned atom {f.name!r}") from None
    if isinstance(f, Neg):
        return algebra.neg(evaluate(algebra, assignment, f.operand))
    if isinstance(f, Circ):
        return algebra.circ(evaluate(algebra, assignment, f.operand))
    left = evaluate(algebra, assignment, f.left)
    right = evaluate(algebra, assignment, f.right)
    if isinstance(f, And):
        return algebra.meet(left, right)
    if isinstance(f, Or):
        return algebra.join(left, right)
    if isinstance(f, Imp):
        return algebra.imp(left, right)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Finite structures
# ---------------------------------------------------------------------------

MAX_ATOMS = 4


@dataclass(frozen=True)
class FiniteBalfi:
    """A structure on the powerset of `atom_count` atoms.

    Elements are bitmasks over the atoms; the unary tables are indexed by
    element.
    """

    atom_count: int
    neg_table: tuple[int, ...]
    circ_table: tuple[int, ...]
    cls: BalfiClass

    @property
    def top(self) -> int:
        return (1 << self.atom_count) - 1

    bottom = 0

    @property
    def elements(self) -> range:
        return range(1 << self.atom_count)

    def meet(self, x: int, y: int) -> int:
        return x & y

    def join(self, x: int, y: int) -> int:
        return x | y

    def comp(self, x: int) -> int:
        return self.top ^ x

    def imp(self, x: int, y: int) -> int:
        return self.comp(x) | y

    def neg(self, x: int) -> int:
        return self.neg_table[x]

    def circ(self, x: int) -> int:
        return self.circ_table[x]

    def element_name(self, x: int) -> str:
        if x == 0:
            return "{}"
        return "{" + ",".join(f"a{i + 1}" for i in range(self.atom_count)
                              if x >> i & 1) + "}"

    def to_json_dict(self) -> dict:
        return {
            "atoms": [f"a{i + 1}" for i in range(self.atom_count)],
            "class": self.cls.value,
            "neg": list(self.neg_table),
            "circ": list(self.circ_table),
        }


@dataclass(frozen=True)
class BalfiCheck:
    ok: bool
    violations: tuple[tuple[str, int], ...] = ()


def check_balfi(b: FiniteBalfi) -> BalfiCheck:
    """Verify every class equation at every element."""
    violations = tuple(equation_violations(b, b.cls, b.elements))
    return BalfiCheck(not violations, violations)


def _submasks_ascending(mask: int) -> Iterator[int]:
    s = 0
    while True:
        yield s
        if s == mask:
            return
        s = (s - mask) & mask


def _neg_candidates(x: int, top: int) -> Iterator[int]:
    """Values y with x | y = top, ascending: complements padded inside x."""
    base = top ^ x
    for s in _submasks_ascending(x):
        yield base | s


def _involutive_negations(top: int) -> Iterator[tuple[int, ...]]:
    """All involutions satisfying x | ~x = top, in lexicographic order."""
    n = top + 1
    table: list[int | None] = [None] * n

    def rec(x: int) -> Iterator[tuple[int, ...]]:
        while x < n and table[x] is not None:
            x += 1
        if x == n:
            yield tuple(table)  # type: ignore[arg-type]
            return
        for y in _neg_candidates(x, top):
            if y == x:
                # a fixed point needs x | x = top, so only the top itself
                table[x] = x
                yield from rec(x + 1)
                table[x] = None
            elif table[y] is None:
                # the pairing constraint is symmetric: y >= comp(x) iff
                # x >= comp(y), so y's own superset condition already holds
                table[x], table[y] = y, x
                yield from rec(x + 1)
                table[x] = table[y] = None

    yield from rec(0)


def enumerate_balfis(atom_count: int, cls: BalfiClass) -> Iterator[FiniteBalfi]:
    """Stream every structure of the class on `atom_count` atoms.

    Deterministic order.  The involutive classes are sparse; the others are
    not, so consume lazily for more than two atoms.
    """
    if not 0 < atom_count <= MAX_ATOMS:
        raise ValueError(f"atom count must be between 1 and {MAX_ATOMS}")
    top = (1 << atom_count) - 1
    elements = range(top + 1)

    if cls in (BalfiClass.RCBR, BalfiClass.RCIE):
        for neg in _involutive_negations(top):
            if cls is BalfiClass.RCBR:
                circ = tuple(top ^ (x & neg[x]) for x in elements)
            else:
                circ = tuple(neg[x & neg[x]] for x in elements)
            candidate = FiniteBalfi(atom_count, neg, circ, cls)
            if check_balfi(candidate).ok:
                yield candidate
        return

    for neg in product(*(_neg_candidates(x, top) for x in elements)):
        if cls is BalfiClass.RMBCCIW:
            circ = tuple(top ^ (x & neg[x]) for x in elements)
            yield FiniteBalfi(atom_count, neg, tuple(circ), cls)
        else:
            circ_choices = [_submasks_ascending(top ^ (x & neg[x])) for x in elements]
            for circ in product(*(list(c) for c in circ_choices)):
                yield FiniteBalfi(atom_count, neg, circ, cls)


# ---------------------------------------------------------------------------
# Interval sets over the integers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of maximal disjoint integer intervals, canonical form.

    Spans are (lo, hi) pairs with None for an infinite end; spans are
    sorted, pairwise disjoint and non-adjacent, so equality of sets is
    equality of representations.
    """

    spans: tuple[tuple[int | None, int | None], ...]

    def __str__(self) -> str:
        if not self.spans:
            return "∅"
        if self.spans == ((None, None),):
            return "Z"
        parts = []
        for lo, hi in self.spans:
            if lo is None:
                parts.append(f"(-inf,{hi}]")
            elif hi is None:
                parts.append(f"[{lo},inf)")
            else:
                parts.append(f"[{lo},{hi}]")
        return " ∪ ".join(parts)

    def __contains__(self, z: int) -> bool:
        return any((lo is None or z >= lo) and (hi is None or z <= hi)
                   for lo, hi in self.spans)

    @property
    def is_empty(self) -> bool:
        return not self.spans

    @property
    def is_all(self) -> bool:
        return self.spans == ((None, None),)


def _canonical(spans: Iterable[tuple[int | None, int | None]]) -> IntervalSet:
    def key(span):
        lo, _ = span
        return (0, 0) if lo is None else (1, lo)

    merged: list[list[int | None]] = []
    for lo, hi in sorted(spans, key=key):
        if merged:
            plo, phi = merged[-1]
            if phi is None or (lo is not None and hi is not None and lo > hi):
                continue  # previous span already reaches +inf, or span empty
            if lo is None or (phi is not None and lo <= phi + 1):
                if hi is None or (phi is not None and hi > phi):
                    merged[-1][1] = hi
                continue
        if lo is not None and hi is not None and lo > hi:
            continue
        merged.append([lo, hi])
    return IntervalSet(tuple((lo, hi) for lo, hi in merged))


def interval_empty() -> IntervalSet:
    return IntervalSet(())


def interval_all() -> IntervalSet:
    return IntervalSet(((None, None),))


def at_most(n: int) -> IntervalSet:
    """The lower half-line of integers up to and including n."""
    return IntervalSet(((None, n),))


def at_least(n: int) -> IntervalSet:
    """The upper half-line of integers from n on."""
    return IntervalSet(((n, None),))


def between(lo: int, hi: int) -> IntervalSet:
    if lo > hi:
        return interval_empty()
    return IntervalSet(((lo, hi),))


def interval_union(*xs: IntervalSet) -> IntervalSet:
    return _canonical(span for x in xs for span in x.spans)


def interval_complement(x: IntervalSet) -> IntervalSet:
    spans = []
    cursor: int | None = None  # None means -inf so far
    for lo, hi in x.spans:
        if lo is not None:
            spans.append((cursor, lo - 1))
        if hi is None:
            return _canonical(spans)
        cursor = hi + 1
    spans.append((cursor, None))
    return _canonical(spans)


def interval_intersection(x: IntervalSet, y: IntervalSet) -> IntervalSet:
    out = []
    for alo, ahi in x.spans:
        for blo, bhi in y.spans:
            lo = blo if alo is None else alo if blo is None else max(alo, blo)
            hi = bhi if ahi is None else ahi if bhi is None else min(ahi, bhi)
            if lo is None or hi is None or lo <= hi:
                out.append((lo, hi))
    return _canonical(out)


def _half_line_reflection(x: IntervalSet) -> IntervalSet | None:
    """The mirrored half-line when x is one, else None."""
    if len(x.spans) != 1:
        return None
    lo, hi = x.spans[0]
    if lo is None and hi is not None:
        return at_least(hi)
    if hi is None and lo is not None:
        return at_most(lo)
    return None


class IntervalAlgebra:
    """Interval sets with half-lines as the inconsistent elements.

    The paraconsistent negation reflects a half-line around its finite
    endpoint (so the endpoint itself is both in x and in ~x) and is the
    complement elsewhere; the consistency operator is the complement of
    the overlap.  The RCie equations hold throughout.
    """

    top = interval_all()
    bottom = interval_empty()

    def meet(self, x: IntervalSet, y: IntervalSet) -> IntervalSet:
        return interval_intersection(x, y)

    def join(self, x: IntervalSet, y: IntervalSet) -> IntervalSet:
        return interval_union(x, y)

    def comp(self, x: IntervalSet) -> IntervalSet:
        return interval_complement(x)

    def imp(self, x: IntervalSet, y: IntervalSet) -> IntervalSet:
        return interval_union(interval_complement(x), y)

    def neg(self, x: IntervalSet) -> IntervalSet:
        reflected = _half_line_reflection(x)
        return reflected if reflected is not None else interval_complement(x)

    def circ(self, x: IntervalSet) -> IntervalSet:
        return interval_complement(interval_intersection(x, self.neg(x)))


INTERVAL_ALGEBRA = IntervalAlgebra()


@dataclass(frozen=True)
class IntervalTableRow:
    x: IntervalSet
    neg_x: IntervalSet
    overlap: IntervalSet          # x ⊓ ~x
    circ_x: IntervalSet
    double_neg: IntervalSet       # ~~x
    circ_neg: IntervalSet         # o~x
    neg_circ: IntervalSet         # ~ox

    def to_json_dict(self) -> dict:
        return {
            "X": str(self.x), "~X": str(self.neg_x), "X&~X": str(self.overlap),
            "oX": str(self.circ_x), "~~X": str(self.double_neg),
            "o~X": str(self.circ_neg), "~oX": str(self.neg_circ),
        }


def interval_table_row(x: IntervalSet) -> IntervalTableRow:
    a = INTERVAL_ALGEBRA
    return IntervalTableRow(
        x=x,
        neg_x=a.neg(x),
        overlap=a.meet(x, a.neg(x)),
        circ_x=a.circ(x),
        double_neg=a.neg(a.neg(x)),
        circ_neg=a.circ(a.neg(x)),
        neg_circ=a.neg(a.circ(x)),
    )


def interval_table_report(n_range: Iterable[int],
                          consistent_samples: Sequence[IntervalSet] = ()) -> list[IntervalTableRow]:
    """Operator table for both half-lines at each n, plus consistent rows."""
    rows = []
    for n in n_range:
        rows.append(interval_table_row(at_most(n)))
        rows.append(interval_table_row(at_least(n)))
    samples = consistent_samples or (between(1, 2), between(-2, 0),
                                     interval_union(between(0, 1), between(5, 9)))
    rows.extend(interval_table_row(x) for x in samples)
    return rows


# ---------------------------------------------------------------------------
# Consequence and refutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConsequenceVerdict:
    """Per-structure consequence: holds, fails with a witness, or (for
    certificate-only searches over an infinite carrier) undetermined."""

    status: str  # "holds" | "fails" | "undetermined"
    witness: tuple[tuple[Formula, Any], ...] | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _sorted_atoms(formulas: Iterable[Formula]) -> list[Atom]:
    names = sorted(set().union(*(atoms_of(f) for f in formulas)) or set())
    return [Atom(name) for name in names]


def _conjoin_right(formulas: Sequence[Formula]) -> Formula:
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = And(f, result)
    return result


def _subset_implications(premises: Sequence[Formula], goal: Formula) -> Iterator[Formula]:
    """The goal, then each premise-subset implication, smallest subsets first."""
    from itertools import combinations

    yield goal
    for size in range(1, len(premises) + 1):
        for combo in combinations(premises, size):
            yield Imp(_conjoin_right(list(combo)), goal)


def consequence_in(algebra: Any, premises: Iterable[Formula], goal: Formula,
                   *, pool: Sequence[Any] | None = None) -> ConsequenceVerdict:
    """Consequence relative to one structure.

    On a finite structure (anything exposing `elements`) the result is
    exact: the goal follows when it, or some premise-subset implication, is
    valid there.  On an infinite structure a candidate `pool` of elements
    must be supplied and only failure is certified: a witness assignment
    falsifying the all-premise implication refutes every disjunct at once.
    """
    premises = list(premises)
    atoms = _sorted_atoms(premises + [goal])
    elements = getattr(algebra, "elements", None)
    if elements is not None:
        assignments = [dict(zip(atoms, combo))
                       for combo in product(elements, repeat=len(atoms))]
        for candidate in _subset_implications(premises, goal):
            if all(evaluate(algebra, a, candidate) == algebra.top for a in assignments):
                return ConsequenceVerdict("holds")
        full = _conjoin_right(premises + [goal]) if not premises else \
            Imp(_conjoin_right(premises), goal)
        for a in assignments:
            if evaluate(algebra, a, full) != algebra.top:
                return ConsequenceVerdict("fails", tuple(sorted(a.items(), key=lambda kv: kv[0].name)))
        raise AssertionError("unreachable: invalid implication without witness")
    if pool is None:
        raise ValueError("a candidate pool is required over an infinite carrier")
    full = goal if not premises else Imp(_conjoin_right(premises), goal)
    for combo in product(pool, repeat=len(atoms)):
        assignment = dict(zip(atoms, combo))
        if evaluate(algebra, assignment, full) != algebra.top:
            return ConsequenceVerdict(
                "fails", tuple(sorted(assignment.items(), key=lambda kv: kv[0].name)))
    return ConsequenceVerdict("undetermined")


@dataclass(frozen=True)
class RefutationResult:
    found: bool
    structure: FiniteBalfi | None = None
    assignment: tuple[tuple[Formula, int], ...] | None = None

    def to_json_dict(self) -> dict:
        if not self.found:
            return {"result": "none_found"}
        return {
            "result": "countermodel",
            "structure": self.structure.to_json_dict(),
            "assignment": {render(f): self.structure.element_name(x)
                           for f, x in self.assignment},
        }


def refute(cls: BalfiClass, max_atoms: int, goal: Formula) -> RefutationResult:
    """First finite structure and assignment giving the goal a value below
    top, scanning atom counts in increasing order.  `none_found` is not a
    validity proof."""
    if not 0 < max_atoms <= MAX_ATOMS:
        raise ValueError(f"max_atoms must be between 1 and {MAX_ATOMS}")
    atoms = _sorted_atoms([goal])
    for n in range(1, max_atoms + 1):
        for structure in enumerate_balfis(n, cls):
            for combo in product(structure.elements, repeat=len(atoms)):
                assignment = dict(zip(atoms, combo))
                if evaluate(structure, assignment, goal) != structure.top:
                    return RefutationResult(
                        True, structure,
                        tuple(sorted(assignment.items(), key=lambda kv: kv[0].name)))
    return RefutationResult(False)
