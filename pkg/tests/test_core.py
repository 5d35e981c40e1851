import numpy as np
import pytest

from tsboost import Dataset, harden, validate_dataset, validate_membership
from tsboost.errors import (
    NonFiniteValue,
    NonIncreasingDomain,
    RaggedLengths,
    TooFewSeries,
)


def make(domain, rows, ids=None):
    return Dataset.from_values(domain, rows, ids)


class TestValidateDataset:
    def test_well_formed(self):
        data = make(np.linspace(0, 1, 10), np.random.default_rng(0).normal(size=(3, 10)))
        assert validate_dataset(data) is data

    def test_ragged_lengths(self):
        from tsboost import TimeSeriesRecord

        data = Dataset(
            domain=np.linspace(0, 1, 10),
            series=(
                TimeSeriesRecord("a", np.zeros(10)),
                TimeSeriesRecord("b", np.zeros(9)),
            ),
        )
        with pytest.raises(RaggedLengths):
            validate_dataset(data)

    def test_nan_rejected(self):
        rows = np.zeros((2, 10))
        rows[1, 3] = np.nan
        with pytest.raises(NonFiniteValue):
            validate_dataset(make(np.linspace(0, 1, 10), rows))

    def test_inf_rejected(self):
        rows = np.zeros((2, 5))
        rows[0, 0] = np.inf
        with pytest.raises(NonFiniteValue):
            validate_dataset(make(np.linspace(0, 1, 5), rows))

    def test_non_increasing_domain(self):
        with pytest.raises(NonIncreasingDomain):
            validate_dataset(make(np.array([0.0, 0.5, 0.5, 1.0]), np.zeros((2, 4))))

    def test_too_few_series(self):
        with pytest.raises(TooFewSeries):
            validate_dataset(make(np.linspace(0, 1, 5), np.zeros((1, 5))))

    def test_immutability(self):
        data = make(np.linspace(0, 1, 5), np.ones((2, 5)))
        with pytest.raises(ValueError):
            data.domain[0] = 99.0
        with pytest.raises(ValueError):
            data.series[0].values[0] = 99.0


class TestHarden:
    def test_simple_argmax(self):
        assert harden(np.array([[0.7, 0.3]])).tolist() == [1]

    def test_tie_goes_to_lowest_index(self):
        assert harden(np.array([[0.5, 0.5]])).tolist() == [1]

    def test_one_hot_rows(self):
        assert harden(np.eye(3)).tolist() == [1, 2, 3]

    def test_invariant_under_increasing_transform(self, rng):
        P = rng.dirichlet(np.ones(4), size=20)
        base = harden(P)
        for transform in (np.sqrt, np.log1p, lambda v: 3 * v + 7):
            assert np.array_equal(harden(transform(P)), base)


class TestValidateMembership:
    def test_valid(self, rng):
        P = rng.dirichlet(np.ones(3), size=10)
        assert validate_membership(P).shape == (10, 3)

    def test_row_sum_tolerance(self):
        P = np.array([[0.5, 0.5 + 5e-10]])
        validate_membership(P)  # within 1e-9
        with pytest.raises(ValueError):
            validate_membership(np.array([[0.5, 0.51]]))

    def test_range_check(self):
        with pytest.raises(ValueError):
            validate_membership(np.array([[1.2, -0.2]]))
