import random

import pytest

from lfikit.formula import And, Atom, Circ, Neg, Or, parse, render, subformulas
from lfikit.hilbert import AXIOM_SCHEMAS, LOGIC_AXIOMS, LogicId, axiom_instance
from lfikit.nmatrix import (
    HALF,
    MATRIX_CBR,
    MATRIX_CIE,
    ONE,
    ZERO,
    BudgetExceededError,
    equivalent,
    holds,
    is_theorem,
    legal_values,
    valuations,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


class TestTables:
    def test_conjunction_cell(self):
        assert legal_values(MATRIX_CBR, "and", (ONE, HALF)) == frozenset({ONE, HALF})

    def test_cbr_consistency_of_half(self):
        assert legal_values(MATRIX_CBR, "circ", (HALF,)) == frozenset({ZERO})

    def test_cie_consistency_is_deterministic(self):
        assert legal_values(MATRIX_CIE, "circ", (ZERO,)) == frozenset({ONE})
        assert legal_values(MATRIX_CIE, "circ", (ONE,)) == frozenset({ONE})

    def test_negation_fixes_half(self):
        assert legal_values(MATRIX_CBR, "neg", (HALF,)) == frozenset({HALF})
        assert legal_values(MATRIX_CBR, "neg", (ONE,)) == frozenset({ZERO})
        assert legal_values(MATRIX_CBR, "neg", (ZERO,)) == frozenset({ONE})

    def test_every_cell_nonempty(self):
        for matrix in (MATRIX_CBR, MATRIX_CIE):
            for table in matrix.tables.values():
                assert all(cell for cell in table.values())


class TestValuations:
    def test_single_atom(self):
        vals = list(valuations(MATRIX_CBR, subformulas([p])))
        assert [v[p] for v in vals] == [ONE, HALF, ZERO]

    def test_consistency_marker_branches(self):
        vals = list(valuations(MATRIX_CBR, subformulas([Circ(p)])))
        assert [(v[p], v[Circ(p)]) for v in vals] == [
            (ONE, ONE), (ONE, HALF), (HALF, ZERO), (ZERO, ONE), (ZERO, HALF)]

    def test_negation_is_deterministic(self):
        vals = list(valuations(MATRIX_CBR, subformulas([Neg(p)])))
        assert len(vals) == 3

    def test_shared_subformulas_share_values(self):
        idx = subformulas([And(p, q), And(q, p)])
        for v in valuations(MATRIX_CBR, idx):
            assert set(v) == set(idx.entries)


class TestHolds:
    def test_detachment(self):
        assert holds(MATRIX_CBR, [p, parse("p -> q")], q).valid

    def test_contradiction_does_not_explode(self):
        verdict = holds(MATRIX_CBR, [p, Neg(p)], q)
        assert not verdict.valid
        assert verdict.value_of(p) == HALF
        assert verdict.value_of(Neg(p)) == HALF
        assert verdict.value_of(q) == ZERO

    def test_nested_consistency_fails_in_cbr(self):
        verdict = is_theorem(MATRIX_CBR, parse("@@p"))
        assert not verdict.valid
        assert verdict.value_of(p) == ONE
        assert verdict.value_of(Circ(p)) == HALF
        assert verdict.value_of(Circ(Circ(p))) == ZERO

    def test_nested_consistency_holds_in_cie(self):
        assert is_theorem(MATRIX_CIE, parse("@@p")).valid

    def test_budget_cap(self):
        big = parse(" & ".join(f"a{i}" for i in range(20)))
        with pytest.raises(BudgetExceededError):
            is_theorem(MATRIX_CBR, big)
        assert not is_theorem(MATRIX_CBR, big, max_subformulas=None).valid

    def test_witness_deterministic(self):
        first = holds(MATRIX_CBR, [p, Neg(p)], q)
        for _ in range(3):
            again = holds(MATRIX_CBR, [p, Neg(p)], q)
            assert again.assignment == first.assignment

    def test_json_shapes(self):
        assert is_theorem(MATRIX_CBR, parse("p -> p")).to_json_dict() == {"verdict": "valid"}
        d = is_theorem(MATRIX_CBR, parse("@@p")).to_json_dict()
        assert d["verdict"] == "countermodel"
        assert d["assignment"] == {"p": "1", "@p": "1/2", "@@p": "0"}


class TestEquivalences:
    def test_consistency_transfers_to_negation(self):
        assert equivalent(MATRIX_CBR, Circ(p), Circ(Neg(p))).valid

    def test_double_negation(self):
        assert equivalent(MATRIX_CBR, p, Neg(Neg(p))).valid

    def test_commuted_conjunction_not_equivalent_under_negation(self):
        # the logic has no replacement property: !(p&q) and !(q&p) differ
        assert not equivalent(MATRIX_CBR, Neg(And(p, q)), Neg(And(q, p))).valid


def _distinct_atom_instance(name):
    schema = AXIOM_SCHEMAS[name]
    metas = sorted({a.name for a in subformulas([schema]) if isinstance(a, Atom)})
    binding = dict(zip(metas, (p, q, r)))
    return axiom_instance(name, binding)


class TestAxiomValidity:
    @pytest.mark.parametrize("name", sorted(LOGIC_AXIOMS[LogicId.CBR]))
    def test_cbr_axioms_valid_in_cbr(self, name):
        assert is_theorem(MATRIX_CBR, _distinct_atom_instance(name)).valid, name

    @pytest.mark.parametrize("name", sorted(LOGIC_AXIOMS[LogicId.CIE]))
    def test_cie_axioms_valid_in_cie(self, name):
        assert is_theorem(MATRIX_CIE, _distinct_atom_instance(name)).valid, name

    def test_inconsistency_axiom_fails_in_cbr(self):
        # the axiom exchanged between the two systems separates them
        assert not is_theorem(MATRIX_CBR, _distinct_atom_instance("Ax15")).valid


class TestParaconsistencyTriple:
    @pytest.mark.parametrize("matrix", [MATRIX_CBR, MATRIX_CIE], ids=["cbr", "cie"])
    def test_non_consequences_with_witnesses(self, matrix):
        for premises in ([p, Neg(p)], [p, Circ(p)], [Circ(p), Neg(p)]):
            verdict = holds(matrix, premises, q)
            assert not verdict.valid
            assert all(verdict.value_of(f).designated for f in premises)
            assert verdict.value_of(q) == ZERO


def _random_formula(rng, depth=3):
    from lfikit.formula import Imp

    if depth == 0 or rng.random() < 0.3:
        return rng.choice([p, q])
    kind = rng.choice(["neg", "circ", "and", "or", "imp"])
    if kind == "neg":
        return Neg(_random_formula(rng, depth - 1))
    if kind == "circ":
        return Circ(_random_formula(rng, depth - 1))
    a, b = _random_formula(rng, depth - 1), _random_formula(rng, depth - 1)
    return {"and": And, "or": Or, "imp": Imp}[kind](a, b)


class TestStructuralProperties:
    def test_monotonicity_spot_check(self):
        rng = random.Random(7)
        base = holds(MATRIX_CBR, [p], Or(p, q))
        assert base.valid
        for _ in range(20):
            extra = [_random_formula(rng) for _ in range(rng.randint(1, 3))]
            assert holds(MATRIX_CBR, [p, *extra], Or(p, q)).valid

    def test_cbr_theorems_hold_in_cie(self):
        rng = random.Random(11)
        checked = 0
        for _ in range(300):
            f = _random_formula(rng, depth=3)
            if is_theorem(MATRIX_CBR, f).valid:
                assert is_theorem(MATRIX_CIE, f).valid, render(f)
                checked += 1
        assert checked >= 5
