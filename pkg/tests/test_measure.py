"""Radial measure: Meijer kernel routes, moment identity, basis resolution."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from mlcs import (
    DomainError,
    MLParams,
    MomentReport,
    QuadratureSpec,
    RouteMismatchError,
    UNIT_PARAMS,
    measure_weight_h,
    meijer_g_weight,
    meijer_g_weight_mb,
    moment_closed_form,
    resolution_identity_matrix,
    verify_resolution,
)

PARAM = st.floats(min_value=0.2, max_value=5.0, allow_nan=False)


def reference_kernel(params, x):
    """Independent oracle for the G^{2,0}_{1,2} kernel."""
    a1 = params.gamma_over_k - 1.0
    b2 = params.beta_over_alpha - 1.0
    y = params.k / params.alpha * x
    with mpmath.workdps(30):
        return float(mpmath.meijerg([[], [a1]], [[0.0, b2], []], y))


class TestMeijerKernel:
    def test_unit_parameters_collapse_to_exponential(self):
        for x in (0.05, 0.3, 1.0, 2.5, 8.0):
            assert meijer_g_weight(UNIT_PARAMS, x) == pytest.approx(
                math.exp(-x), rel=1e-13
            )

    def test_matches_independent_oracle(self):
        cases = [
            (MLParams(2.0, 3.0, 1.0, 1.0), 0.7),
            (MLParams(2.0, 5.0, 4.0, 1.0), 2.0),
            (MLParams(0.5, 1.5, 2.0, 0.8), 5.0),
            (MLParams(1.0, 4.0, 0.6, 1.0), 1.1),
        ]
        for params, x in cases:
            assert meijer_g_weight(params, x) == pytest.approx(
                reference_kernel(params, x), rel=1e-10
            )

    def test_origin_limit_frozen_value(self):
        # a1 = 3, b2 = 1.5: gamma(1.5)/gamma(3)
        assert meijer_g_weight(MLParams(2.0, 5.0, 4.0, 1.0), 0.0) == pytest.approx(
            0.44311346272637900, rel=1e-14
        )

    def test_origin_limit_branches(self):
        assert meijer_g_weight(UNIT_PARAMS, 0.0) == 1.0
        assert meijer_g_weight(MLParams(1.0, 1.0, 2.0, 1.0), 0.0) == math.inf
        assert meijer_g_weight(MLParams(2.0, 1.0, 1.0, 1.0), 0.0) == math.inf

    def test_domain(self):
        with pytest.raises(DomainError):
            meijer_g_weight(UNIT_PARAMS, -0.5)
        with pytest.raises(DomainError):
            meijer_g_weight(UNIT_PARAMS, math.nan)
        with pytest.raises(DomainError):
            meijer_g_weight_mb(UNIT_PARAMS, 0.0)

    def test_positive_on_reference_sets(self):
        for params in (UNIT_PARAMS, MLParams(2.0, 3.0, 1.0, 1.0),
                       MLParams(2.0, 5.0, 4.0, 1.0), MLParams(0.5, 1.5, 2.0, 0.8)):
            for x in np.geomspace(0.01, 30.0, 12):
                assert meijer_g_weight(params, float(x)) > 0.0

    def test_survives_second_index_near_integer(self):
        # binary division plants beta/alpha a few ulp away from an integer,
        # where the naive Tricomi backend loses up to 3e-2 of the value
        params = MLParams(0.2, 1.2, 1.0, 1.0)
        assert params.beta_over_alpha != 6.0
        assert meijer_g_weight(params, 0.2) == pytest.approx(math.exp(-1.0), rel=1e-13)

        nearly = MLParams(0.25, 0.99999, 1.0, 1.5)
        x = 2.0 * 0.25 / 1.5
        assert meijer_g_weight(nearly, x) == pytest.approx(
            reference_kernel(nearly, x), rel=1e-11
        )
        # negative first index takes the recurrence path
        neg = MLParams(1.0, 4.0000001, 1.0, 2.0)
        for x in (0.3, 2.0, 9.0):
            assert meijer_g_weight(neg, x) == pytest.approx(
                reference_kernel(neg, x), rel=1e-10
            )

    def test_large_first_index_stays_accurate(self):
        # gamma/k >> 1 suppresses the kernel far below the contour head;
        # the value must still carry ~1e-12 relative accuracy of its own
        params = MLParams(3.0, 1.0, 5.0, 0.375)
        x = 8.0
        assert meijer_g_weight(params, x) == pytest.approx(
            reference_kernel(params, x), rel=1e-11
        )

    @given(alpha=PARAM, beta=PARAM, gamma=PARAM, k=PARAM,
           y=st.floats(min_value=0.05, max_value=15.0))
    @settings(max_examples=60, deadline=None)
    def test_contour_referee_agrees(self, alpha, beta, gamma, k, y):
        # the contour sum resolves the kernel relative to the magnitude of
        # its t = 0 integrand; demand 1e-9 agreement only where the kernel
        # holds at least 1e-2 of that head, so roundoff sits below 1e-10
        params = MLParams(alpha, beta, gamma, k)
        a1 = gamma / k - 1.0
        b2 = beta / alpha - 1.0
        c = max(0.0, -b2) + 0.75
        assume(a1 + c != 0.0)
        head = math.exp(
            math.lgamma(c) + math.lgamma(b2 + c) - math.lgamma(a1 + c)
        ) * y ** (-c) / math.pi
        x = y * alpha / k
        fast = meijer_g_weight(params, x)
        assume(fast > 1e-2 * head)
        referee = meijer_g_weight_mb(params, x)
        assert abs(fast - referee) <= 1e-9 * max(fast, abs(referee))

    @given(alpha=PARAM, beta=PARAM, gamma=PARAM, k=PARAM,
           y=st.floats(min_value=0.05, max_value=30.0))
    @settings(max_examples=40, deadline=None)
    def test_checked_mode_accepts_honest_values(self, alpha, beta, gamma, k, y):
        # deep in the exponential tail the referee only resolves the kernel
        # to its own roundoff floor; checked mode must not cry wolf there
        params = MLParams(alpha, beta, gamma, k)
        x = y * alpha / k
        checked = meijer_g_weight(params, x, check=True, check_tol=1e-9)
        assert checked == meijer_g_weight(params, x)

    def test_checked_mode_passes_on_grid(self):
        params = MLParams(1.4, 2.6, 0.9, 1.7)
        for x in (0.2, 1.0, 4.0, 12.0):
            checked = meijer_g_weight(params, x, check=True)
            assert checked == meijer_g_weight(params, x)

    def test_route_mismatch_carries_both_values(self, monkeypatch):
        import mlcs.measure as measure_mod

        params = MLParams(1.4, 2.6, 0.9, 1.7)
        honest = meijer_g_weight(params, 1.0)
        monkeypatch.setattr(measure_mod, "meijer_g_weight_mb",
                            lambda p, x: 1.5 * honest)
        with pytest.raises(RouteMismatchError) as exc:
            meijer_g_weight(params, 1.0, check=True)
        assert exc.value.first == honest
        assert exc.value.second == pytest.approx(1.5 * honest, rel=1e-15)


class TestMeasureWeight:
    def test_unit_parameters_give_flat_weight(self):
        for x in (0.0, 0.1, 1.0, 3.0, 9.0):
            assert measure_weight_h(UNIT_PARAMS, x) == pytest.approx(1.0, rel=1e-12)

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            measure_weight_h(UNIT_PARAMS, -1.0)

    def test_nonnegative_on_reference_set(self):
        params = MLParams(2.0, 3.0, 1.0, 1.0)
        for x in np.linspace(0.05, 20.0, 15):
            assert measure_weight_h(params, float(x)) >= 0.0


class TestMomentIdentity:
    def test_closed_form_reduces_to_gamma(self):
        for s in (1.0, 2.0, 3.5, 6.0):
            assert moment_closed_form(UNIT_PARAMS, s) == pytest.approx(
                math.gamma(s), rel=1e-13
            )

    def test_closed_form_domain(self):
        with pytest.raises(DomainError):
            moment_closed_form(UNIT_PARAMS, 0.0)
        with pytest.raises(DomainError):
            moment_closed_form(UNIT_PARAMS, -2.0)

    def test_quadrature_matches_closed_form(self):
        for params in (UNIT_PARAMS, MLParams(2.0, 3.0, 1.0, 1.0),
                       MLParams(0.5, 1.5, 2.0, 0.8)):
            report = verify_resolution(params, s_max=6)
            assert report.max_rel_err <= 1e-8
            for l, r in zip(report.lhs, report.rhs):
                assert l == pytest.approx(r, rel=1e-8)

    def test_report_dict_shape(self):
        report = verify_resolution(UNIT_PARAMS, s_max=3)
        d = report.to_dict()
        assert set(d) == {"s_values", "lhs", "rhs", "max_rel_err"}
        assert d["s_values"] == [1.0, 2.0, 3.0]

    def test_report_validation(self):
        with pytest.raises(DomainError):
            MomentReport((1.0, 2.0), (1.0,), (1.0, 2.0))
        with pytest.raises(DomainError):
            MomentReport((), (), ())
        rep = MomentReport((1.0, 2.0), (1.0, 2.0), (1.0, 2.2))
        assert rep.max_rel_err == pytest.approx(0.2 / 2.2, rel=1e-12)


class TestResolutionIdentity:
    def test_gram_matrix_is_identity(self):
        params = MLParams(1.5, 2.5, 1.0, 1.0)
        mat = resolution_identity_matrix(params, n_max=5)
        assert np.allclose(np.diag(mat), 1.0, atol=1e-8)
        off = mat - np.diag(np.diag(mat))
        assert np.all(off == 0.0)

    def test_unit_parameters_identity(self):
        mat = resolution_identity_matrix(UNIT_PARAMS, n_max=4)
        assert np.allclose(mat, np.eye(5), atol=1e-9)

    def test_invalid_sizes(self):
        with pytest.raises(DomainError):
            resolution_identity_matrix(UNIT_PARAMS, n_max=-1)
        with pytest.raises(DomainError):
            verify_resolution(UNIT_PARAMS, s_max=0)

    def test_quadrature_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(upper_cutoff=-1.0)
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_nodes=10)
