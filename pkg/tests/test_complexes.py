import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from floerbar.complexes import (
    F2,
    F2T,
    FilteredComplex,
    action_of,
    apply_basis_change,
    chain_add,
    complex_from_json,
    complex_to_json,
    evaluation_map,
    tensor_with_T,
    truncate_above,
    validate,
)
from floerbar.errors import InputError
from floerbar.poly2 import ONE, T, PolyT

from oracle import bruteforce_barcode, random_f2_complex


def simple_pair():
    return FilteredComplex.build(F2, [("a", 0.0), ("b", 1.0)], {"a": {"b": 1}})


class TestValidate:
    def test_one_pair_valid(self):
        assert validate(simple_pair()).ok

    def test_d_squared_violation(self):
        C = FilteredComplex.build(F2, [("a", 0.0), ("b", 1.0), ("c", 2.0)],
                                  {"a": {"b": 1}, "b": {"c": 1}})
        report = validate(C)
        assert any(k == "d_squared" and "'a'" in d and "'c'" in d
                   for k, d in report.errors)

    def test_action_violation_strict(self):
        C = FilteredComplex.build(F2, [("a", 1.0), ("b", 0.0)], {"a": {"b": 1}})
        report = validate(C)
        assert any(k == "action" for k, d in report.errors)

    def test_weak_allows_equal_actions(self):
        C = FilteredComplex.build(F2T, [("d", 1.0), ("c", 1.0)], {"c": {"d": 1}},
                                  strict=False)
        assert validate(C).ok

    def test_duplicate_name(self):
        C = FilteredComplex.build(F2, [("a", 0.0), ("a", 1.0)], {})
        assert any(k == "duplicate" for k, _ in validate(C).errors)

    def test_ring_discipline(self):
        C = FilteredComplex.build(F2, [("a", 0.0), ("b", 1.0)], {"a": {"b": T}})
        assert any(k == "ring" for k, _ in validate(C).errors)

    def test_near_tie_is_noted_not_fatal(self):
        C = FilteredComplex.build(F2, [("a", 0.0), ("b", 1e-12)], {})
        report = validate(C)
        assert report.ok and report.notes


class TestActionOf:
    def test_zero_chain_is_infinite(self):
        assert action_of(simple_pair(), {}) == math.inf

    def test_scaling_preserves_action(self):
        C = FilteredComplex.build(F2T, [("x", 0.5)], {})
        assert action_of(C, {"x": T}) == 0.5

    def test_inf_of_support(self):
        C = FilteredComplex.build(F2, [("x", 0.0), ("y", 1.0)], {})
        assert action_of(C, {"x": ONE, "y": ONE}) == 0.0

    def test_unknown_name(self):
        with pytest.raises(InputError):
            action_of(simple_pair(), {"zzz": ONE})

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_axioms_on_random_chains(self, data):
        rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
        C = random_f2_complex(rng, data.draw(st.integers(1, 6)))
        names = list(C.names)
        chain = {n: ONE for n in names if rng.random() < 0.5}
        other = {n: ONE for n in names if rng.random() < 0.5}
        la, lb = action_of(C, chain), action_of(C, other)
        # finiteness exactly off zero
        assert (la == math.inf) == (not chain)
        # scaling by a unit
        assert action_of(C, {g: ONE for g in chain}) == la
        # ultrametric bound
        assert action_of(C, chain_add(chain, other)) >= min(la, lb)
        # the differential does not lower the action
        assert action_of(C, C.boundary(chain)) >= la


class TestTruncate:
    def test_below_everything_is_identity(self):
        C = simple_pair()
        assert truncate_above(C, -100.0).differential == C.differential

    def test_drops_low_generator(self):
        C = truncate_above(simple_pair(), 0.0)
        assert C.names == ("b",) and not C.differential

    def test_support_filter(self):
        C = FilteredComplex.build(F2, [("a", 0.0), ("b", 1.0), ("c", 2.0)],
                                  {"a": {"b": 1}})
        got = truncate_above(C, 0.5)
        assert got.names == ("b", "c") and not got.differential

    @given(st.integers(0, 10 ** 6), st.floats(-6, 6))
    @settings(max_examples=60, deadline=None)
    def test_truncation_always_validates(self, seed, s):
        C = random_f2_complex(random.Random(seed), 6)
        assert validate(truncate_above(C, s)).ok


class TestEvaluation:
    def test_one_plus_T_cancels_at_one(self):
        C = FilteredComplex.build(F2T, [("x", 0.0), ("y", 1.0)], {"x": {"y": ONE + T}})
        got, _ = evaluation_map(C, 1)
        assert not got.differential

    def test_constant_term_at_zero(self):
        C = FilteredComplex.build(F2T, [("x", 0.0), ("y", 1.0)], {"x": {"y": ONE + T}})
        got, _ = evaluation_map(C, 0)
        assert got.differential == {"x": {"y": ONE}}

    def test_pure_T_square_vanishes_at_zero(self):
        C = FilteredComplex.build(F2T, [("x", 0.0), ("y", 1.0)], {"x": {"y": PolyT(4)}})
        got, _ = evaluation_map(C, 0)
        assert not got.differential

    def test_map_commutes_with_differentials(self):
        C = FilteredComplex.build(
            F2T, [("x", 0.0), ("y", 1.0), ("z", 2.0)],
            {"x": {"y": T, "z": ONE + T}})
        for beta in (0, 1):
            got, ev = evaluation_map(C, beta)
            assert ev.verify().ok
            for g in C.names:
                assert ev.apply(C.row(g)) == got.boundary({g: ONE})


class TestTensor:
    def test_promotes_entries(self):
        CT = tensor_with_T(simple_pair())
        assert CT.ring == F2T and CT.differential == {"a": {"b": ONE}}

    def test_round_trip_both_evaluations(self):
        C = FilteredComplex.build(F2, [("a", 0.0), ("b", 1.0), ("c", 2.0)],
                                  {"a": {"b": 1}})
        CT = tensor_with_T(C)
        for beta in (0, 1):
            back, _ = evaluation_map(CT, beta)
            assert back.differential == C.differential
            assert back.generators == C.generators

    def test_barcode_matches_field_barcode(self):
        # via the independent rank-count oracle on the quotient side
        C = simple_pair()
        from floerbar.barannikov import barannikov_reduce, barcode_of, quotient_mod_T

        CT = tensor_with_T(C)
        left = [(b.end, b.start) for b in barcode_of(barannikov_reduce(quotient_mod_T(CT)))]
        assert sorted(left) == bruteforce_barcode(C)


class TestBasisChange:
    def test_identity(self):
        C = simple_pair()
        M = {n: {n: ONE} for n in C.names}
        assert apply_basis_change(C, M).differential == C.differential

    def test_column_operation_changes_entries(self):
        C = FilteredComplex.build(
            F2T, [("b1", 2.0), ("d", 1.1), ("c", 1.0), ("a1", 0.0)],
            {"a1": {"d": T}, "c": {"d": 1}})
        M = {n: {n: ONE} for n in C.names}
        M["a1"] = {"a1": ONE, "c": T}  # a1' = a1 + T c
        got = apply_basis_change(C, M)
        assert got.entry("a1", "d") == T + T  # the two routes cancel
        assert got.entry("c", "d") == ONE

    def test_rejects_action_dropping_entry(self):
        C = simple_pair()
        M = {"a": {"a": ONE}, "b": {"b": ONE, "a": ONE}}  # b picks up a lower generator
        with pytest.raises(InputError):
            apply_basis_change(C, M)

    def test_rejects_non_invertible(self):
        C = FilteredComplex.build(F2T, [("a", 0.0), ("b", 1.0)], {})
        M = {"a": {"a": ONE + T}, "b": {"b": ONE}}
        with pytest.raises(InputError):
            apply_basis_change(C, M)


class TestJson:
    def test_round_trip(self):
        C = FilteredComplex.build(F2T, [("a", 0.0), ("b", 1.5)], {"a": {"b": ONE + T}})
        again = complex_from_json(json.loads(json.dumps(complex_to_json(C))))
        assert again == C

    def test_unknown_field_rejected(self):
        obj = complex_to_json(simple_pair())
        obj["extra"] = 1
        with pytest.raises(InputError):
            complex_from_json(obj)

    def test_poly_encoding(self):
        obj = complex_to_json(FilteredComplex.build(
            F2T, [("a", 0.0), ("b", 1.0)], {"a": {"b": ONE + T}}))
        assert obj["differential"] == [{"from": "a", "to": "b", "poly": [1, 1]}]

    def test_missing_field_rejected(self):
        obj = complex_to_json(simple_pair())
        del obj["strict"]
        with pytest.raises(InputError):
            complex_from_json(obj)

    def test_bad_poly_rejected(self):
        obj = complex_to_json(simple_pair())
        obj["differential"] = [{"from": "a", "to": "b", "poly": [2]}]
        with pytest.raises(InputError):
            complex_from_json(obj)
