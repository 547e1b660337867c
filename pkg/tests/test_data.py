import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2kreg import (
    DataValidationError,
    FitQuality,
    MomentVector,
    RegressionData,
    sample_central_moments,
    validate_data,
)


class TestValidateData:
    def test_minimal_well_posed(self):
        data = validate_data([[1, 1], [1, 2], [1, 3]], [1, 2, 3],
                             add_intercept=False)
        assert data.n == 3 and data.p == 2

    def test_intercept_prepended(self):
        data = validate_data([[1.0], [2.0], [3.0]], [1, 2, 3])
        assert data.p == 2
        assert np.all(data.design[:, 0] == 1.0)
        assert np.all(data.design[:, 1] == [1, 2, 3])

    def test_no_intercept_flag_rejects_missing_column(self):
        with pytest.raises(DataValidationError):
            validate_data([[2.0], [3.0], [4.0]], [1, 2, 3], add_intercept=False)

    def test_duplicated_column_is_rank_error(self):
        X = np.column_stack([np.ones(5), np.arange(5.0), np.arange(5.0)])
        with pytest.raises(DataValidationError, match="rank"):
            validate_data(X, np.arange(5.0), add_intercept=False)

    def test_dimension_mismatch(self):
        with pytest.raises(DataValidationError, match="length"):
            validate_data([[1, 1], [1, 2], [1, 3]], [1, 2], add_intercept=False)

    def test_non_finite_rejected(self):
        with pytest.raises(DataValidationError):
            validate_data([[1, np.nan], [1, 2], [1, 3]], [1, 2, 3],
                          add_intercept=False)

    def test_too_few_rows(self):
        with pytest.raises(DataValidationError, match="n >= p"):
            validate_data([[1, 1], [1, 2]], [1, 2], add_intercept=False)

    def test_arrays_are_immutable(self):
        data = validate_data([[1.0], [2.0], [3.0]], [1, 2, 3])
        with pytest.raises(ValueError):
            data.design[0, 0] = 5.0
        with pytest.raises(ValueError):
            data.response[0] = 5.0


class TestMomentVector:
    def test_indexing_conventions(self):
        m = MomentVector(mu=(0.0, 2.0, 0.5, 13.0), provenance="population")
        assert m[0] == 1.0
        assert m[1] == 0.0
        assert m[2] == 2.0
        assert m.sigma2 == 2.0
        assert m.order == 4
        with pytest.raises(IndexError):
            m[5]

    def test_mu1_must_be_zero(self):
        with pytest.raises(DataValidationError):
            MomentVector(mu=(0.1, 1.0), provenance="population")

    def test_negative_variance_rejected(self):
        with pytest.raises(DataValidationError):
            MomentVector(mu=(0.0, -1.0), provenance="population")

    def test_cauchy_schwarz_mu4(self):
        with pytest.raises(DataValidationError, match="mu_4"):
            MomentVector(mu=(0.0, 2.0, 0.0, 1.0), provenance="population")

    def test_cauchy_schwarz_mu6(self):
        with pytest.raises(DataValidationError, match="mu_6"):
            MomentVector(mu=(0.0, 1.0, 5.0, 3.0, 0.0, 1.0),
                         provenance="population")

    def test_unknown_provenance(self):
        with pytest.raises(DataValidationError):
            MomentVector(mu=(0.0, 1.0), provenance="guess")

    def test_order_cap(self):
        with pytest.raises(DataValidationError):
            MomentVector(mu=(0.0,) + (1.0,) * 13, provenance="population")

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=60),
           st.floats(-1e6, 1e6))
    def test_sample_mu1_is_zero(self, xs, shift):
        xs = np.asarray(xs) + shift
        if np.ptp(xs) == 0:
            return
        m = sample_central_moments(xs, max_order=4)
        assert abs(m[1]) <= 1e-12 * max(1.0, np.max(np.abs(xs)))


class TestFitQuality:
    def test_ordering_enforced(self):
        with pytest.raises(DataValidationError):
            FitQuality(q_fit=-10.0, q_zero=-5.0, q_max=0.0, r2_rg=0.5)

    def test_valid_instance(self):
        q = FitQuality(q_fit=-2.0, q_zero=-10.0, q_max=0.0, r2_rg=0.8)
        assert q.r2_rg == 0.8
