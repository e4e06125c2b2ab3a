import json

import numpy as np
import pytest

from priorank import (
    ComparisonMatrix,
    FillMode,
    Normalization,
    ParseError,
    PriorityVector,
    ValidationError,
    build_matrix,
    from_weights,
    parse_csv,
    parse_json,
    parse_matrix,
    to_csv,
    to_json,
)
from priorank.core import DeviationMatrix

from conftest import random_reciprocal_entries


class TestBuildMatrix:
    def test_default_fill_gives_all_ones(self):
        m = build_matrix(3, [], fill=FillMode.RECIPROCAL)
        assert np.array_equal(m.entries, np.ones((3, 3)))
        assert m.is_transitive()

    def test_reciprocal_fill(self):
        m = build_matrix(2, [(0, 1, 2.0)], fill=FillMode.RECIPROCAL)
        assert np.array_equal(m.entries, [[1, 2], [0.5, 1]])
        assert m.is_reciprocal()

    def test_explicit_margins(self):
        m = build_matrix(2, [(0, 1, 2.1), (1, 0, 0.55)], fill=FillMode.EXPLICIT)
        assert m.entries[0, 1] * m.entries[1, 0] == pytest.approx(1.155)
        assert not m.is_reciprocal()

    def test_diagonal_always_one(self):
        m = build_matrix(4, [(0, 3, 7.0)], fill=FillMode.RECIPROCAL)
        assert np.all(np.diag(m.entries) == 1.0)

    @pytest.mark.parametrize("value", [0.0, -2.0, float("nan"), float("inf")])
    def test_bad_values_rejected(self, value):
        with pytest.raises(ValidationError):
            build_matrix(3, [(0, 1, value)])

    def test_missing_entry_in_explicit(self):
        with pytest.raises(ValidationError, match="missing"):
            build_matrix(2, [(0, 1, 2.0)], fill=FillMode.EXPLICIT)

    def test_duplicate_entry(self):
        with pytest.raises(ValidationError, match="duplicate"):
            build_matrix(3, [(0, 1, 2.0), (0, 1, 3.0)])

    def test_too_small(self):
        with pytest.raises(ValidationError):
            build_matrix(1, [])

    def test_lower_triangle_rejected_in_reciprocal_mode(self):
        with pytest.raises(ValidationError):
            build_matrix(3, [(1, 0, 2.0)], fill=FillMode.RECIPROCAL)

    def test_diagonal_entry_rejected(self):
        with pytest.raises(ValidationError):
            build_matrix(3, [(1, 1, 2.0)])

    def test_out_of_range_index(self):
        with pytest.raises(ValidationError):
            build_matrix(3, [(0, 5, 2.0)])


class TestFromWeights:
    def test_equal_weights(self):
        m = from_weights(np.array([1.0, 1.0, 1.0]))
        assert np.array_equal(m.entries, np.ones((3, 3)))

    def test_direct_ratios(self):
        m = from_weights(np.array([0.5, 0.25, 0.25]))
        assert np.array_equal(m.entries, [[1, 2, 2], [0.5, 1, 1], [0.5, 1, 1]])

    def test_transitivity_forced(self):
        m = from_weights(np.array([4.0, 2.0, 0.5]))
        assert m.entries[0, 2] == 8.0
        assert m.entries[0, 1] * m.entries[1, 2] == m.entries[0, 2]

    @pytest.mark.parametrize("n", range(2, 11))
    def test_always_reciprocal_and_transitive(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(20):
            m = from_weights(np.exp(rng.normal(size=n)))
            assert m.is_reciprocal(1e-12)
            assert m.is_transitive(1e-12)

    def test_nonpositive_weight(self):
        with pytest.raises(ValidationError):
            from_weights(np.array([1.0, 0.0, 2.0]))


def test_transitivity_implies_reciprocity():
    # setting the middle index equal to the target column turns the triple
    # rule into the pair rule, so any transitive matrix is reciprocal
    rng = np.random.default_rng(7)
    for n in range(2, 8):
        m = from_weights(np.exp(rng.normal(size=n)))
        assert m.is_transitive(1e-12)
        assert m.is_reciprocal(1e-12)


class TestComparisonMatrixValidation:
    def test_rejects_zero_diagonal(self):
        # an unquoted item (diagonal 0) is not representable here
        with pytest.raises(ValidationError):
            ComparisonMatrix(np.array([[0.0, 2.0], [0.5, 1.0]]))

    def test_rejects_near_one_diagonal(self):
        with pytest.raises(ValidationError, match="diagonal"):
            ComparisonMatrix(np.array([[1.0 + 1e-12, 2.0], [0.5, 1.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(ValidationError):
            ComparisonMatrix(np.ones((2, 3)))

    def test_rejects_n_below_two(self):
        with pytest.raises(ValidationError):
            ComparisonMatrix(np.ones((1, 1)))

    def test_entries_are_immutable(self):
        m = from_weights(np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            m.entries[0, 1] = 5.0

    def test_equality(self):
        a = from_weights(np.array([1.0, 2.0]))
        b = ComparisonMatrix(np.array([[1.0, 0.5], [2.0, 1.0]]))
        assert a == b
        assert a != from_weights(np.array([1.0, 3.0]))


class TestSerialization:
    def test_csv_round_trip(self):
        m = ComparisonMatrix(np.array([[1.0, 2.0], [0.5, 1.0]]))
        text = to_csv(m)
        assert text == "1.0,2.0\n0.5,1.0"
        assert parse_csv(text) == m

    def test_csv_round_trip_is_bit_exact(self):
        rng = np.random.default_rng(3)
        for n in (2, 5, 9):
            m = ComparisonMatrix(random_reciprocal_entries(n, rng))
            assert np.array_equal(parse_csv(to_csv(m)).entries, m.entries)

    def test_json_round_trip_is_bit_exact(self):
        rng = np.random.default_rng(4)
        m = ComparisonMatrix(random_reciprocal_entries(6, rng))
        parsed = parse_json(to_json(m))
        assert np.array_equal(parsed.entries, m.entries)

    def test_ragged_csv_names_row(self):
        with pytest.raises(ParseError, match="row 1"):
            parse_csv("1,2\n0.5")

    def test_json_dimension_mismatch(self):
        doc = json.dumps({"n": 3, "entries": [[1, 2], [0.5, 1]]})
        with pytest.raises(ParseError, match="mismatch"):
            parse_json(doc)

    def test_json_missing_keys(self):
        with pytest.raises(ParseError):
            parse_json(json.dumps({"entries": [[1]]}))

    def test_nonpositive_entry_rejected_at_parse(self):
        with pytest.raises(ValidationError):
            parse_csv("1,-2\n0.5,1")

    def test_parse_matrix_sniffs_format(self):
        m = ComparisonMatrix(np.array([[1.0, 4.0], [0.25, 1.0]]))
        assert parse_matrix(to_csv(m)) == m
        assert parse_matrix(to_json(m)) == m


class TestPriorityVector:
    def test_sum_one_accepts_exact(self):
        v = PriorityVector(np.array([0.5, 0.25, 0.25]), Normalization.SUM_ONE)
        assert v.n == 3

    def test_sum_one_rejects_off_gauge(self):
        with pytest.raises(ValidationError):
            PriorityVector(np.array([0.5, 0.6]), Normalization.SUM_ONE)

    def test_product_one_rejects_off_gauge(self):
        with pytest.raises(ValidationError):
            PriorityVector(np.array([2.0, 3.0]), Normalization.PRODUCT_ONE)

    def test_normalized_constructor(self):
        v = PriorityVector.normalized([3.0, 1.0], Normalization.SUM_ONE)
        assert v.weights[0] == pytest.approx(0.75)
        w = PriorityVector.normalized([3.0, 1.0], Normalization.PRODUCT_ONE)
        assert abs(np.log(w.weights).sum()) <= 1e-12

    def test_renormalized(self):
        v = PriorityVector.normalized([4.0, 1.0], Normalization.SUM_ONE)
        w = v.renormalized(Normalization.PRODUCT_ONE)
        assert w.weights[0] / w.weights[1] == pytest.approx(4.0, rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            PriorityVector.normalized([1.0, 0.0], Normalization.SUM_ONE)

    def test_json_round_trip(self):
        v = PriorityVector.normalized([1.0, 2.0, 4.0], Normalization.PRODUCT_ONE)
        parsed = PriorityVector.from_json(v.to_json())
        assert parsed == v

    def test_from_json_rejects_unknown_normalization(self):
        with pytest.raises(ParseError):
            PriorityVector.from_json('{"weights": [1.0], "normalization": "MAX_ONE"}')


class TestDeviationMatrix:
    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValidationError, match="diagonal"):
            DeviationMatrix(np.array([[0.1, 0.0], [0.0, 0.0]]))

    def test_rejects_unbalanced_residuals(self):
        # row sums minus column sums must vanish at the optimum
        with pytest.raises(ValidationError, match="balance"):
            DeviationMatrix(np.array([[0.0, 0.5], [-0.5, 0.0]]))

    def test_accepts_balanced(self):
        d = DeviationMatrix(np.array([[0.0, 0.3], [0.3, 0.0]]))
        assert d.frobenius_norm() == pytest.approx(0.3 * np.sqrt(2))
