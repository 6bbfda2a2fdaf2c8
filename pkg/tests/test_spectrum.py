import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracslab import (DomainError, FixedEpsilon, LandauLevel, ONE_PHASE, TWO_PHASE, PhaseConfig,
                       QuantizationProblem, all_variants, allowed_k, closed_form_roots, is_k_kind,
                       spectrum_sweep)
from diracslab.spectrum import phase_count_estimate


def one_phase_1(selector=0, **kw):
    kw.setdefault("k_window", (0.05, 10.0))
    return QuantizationProblem(ONE_PHASE[0], PhaseConfig.for_variant(ONE_PHASE[0], 0.6),
                               mass=1.0, field=1.0, root_selector=selector, **kw)


def expected(first, step, window):
    lo, hi = window
    n = np.arange(0, 200)
    v = first + step * n
    return v[(v > lo) & (v <= hi)]


class TestExamples:
    def test_k_plus_one(self):
        t = allowed_k(one_phase_1(0))
        assert np.allclose(t.ks(), expected(math.pi, math.pi, (0.05, 10)), atol=1e-11)

    def test_k_minus_one(self):
        t = allowed_k(one_phase_1(1))
        assert np.allclose(t.ks(), expected(math.pi / 2, math.pi, (0.05, 10)), atol=1e-11)

    def test_one_phase_2_delta_zero(self):
        prob = QuantizationProblem(ONE_PHASE[1], PhaseConfig.for_variant(ONE_PHASE[1], 0.0),
                                   mass=1.0, field=0.8, a_slab=1.3, k_window=(0.05, 8.0))
        t = allowed_k(prob)
        assert np.allclose(t.ks(), expected(math.pi / 2.6, math.pi / 2.6, (0.05, 8.0)),
                           atol=1e-10)

    def test_table_shape(self):
        t = allowed_k(one_phase_1(None))
        ks = t.ks()
        assert np.all(np.diff(ks) > 1e-10)
        assert all(r.residual < 1e-9 for r in t.rows)
        assert all(r.epsilon == pytest.approx(math.sqrt(1 + r.k ** 2 + 2)) for r in t.rows)


class TestValidation:
    @pytest.mark.parametrize("window", [(1.0, 1.0), (2.0, 1.0), (-1.0, 2.0)])
    def test_window(self, window):
        with pytest.raises(DomainError):
            one_phase_1(k_window=window)

    def test_fixed_energy_window(self):
        with pytest.raises(DomainError) as exc:
            one_phase_1(parameterization=FixedEpsilon(2.0), k_window=(0.1, 2.0))
        assert exc.value.field == "k_window"

    def test_landau_needs_field(self):
        with pytest.raises(DomainError):
            QuantizationProblem(ONE_PHASE[0], PhaseConfig.for_variant(ONE_PHASE[0], 0.0),
                                mass=1.0, field=0.0)

    def test_grid_minimum(self):
        with pytest.raises(DomainError):
            allowed_k(one_phase_1(), grid_points=10)

    def test_zero_k_min(self):
        t = allowed_k(one_phase_1(0, k_window=(0.0, 4.0)))
        assert np.allclose(t.ks(), [math.pi])
        assert any(k == 0 for k, _ in t.excluded)


class TestProperties:
    def test_scaling_law(self):
        t1 = allowed_k(one_phase_1(None, k_window=(0.05, 10.0)))
        t2 = allowed_k(one_phase_1(None, k_window=(0.025, 5.0), a_slab=2.0))
        assert np.allclose(t1.ks() / 2, t2.ks(), atol=1e-11)

    def test_phase_shift_invariance(self):
        base = dict(mass=1.0, parameterization=FixedEpsilon(4.0), k_window=(0.05, 3.8))
        ks = [allowed_k(QuantizationProblem(
            ONE_PHASE[0], PhaseConfig.for_variant(ONE_PHASE[0], d), **base)).ks()
            for d in (0.0, 1.1, 4.0)]
        for other in ks[1:]:
            assert np.allclose(ks[0], other, atol=1e-10)

    @pytest.mark.parametrize("v", list(all_variants()), ids=str)
    def test_residual_and_count(self, v):
        rng = np.random.default_rng(abs(hash(str(v))) % 2 ** 32)
        ph = PhaseConfig.for_variant(v, *rng.uniform(0, 2 * math.pi, v.n_params))
        prob = QuantizationProblem(v, ph, mass=1.0, field=0.7, k_window=(0.05, 9.0),
                                   a_slab=1.1, root_selector=0)
        t = allowed_k(prob)
        m = prob.m
        for r in t.rows:
            pp = prob.params_at(r.k)
            if pp.k != pp.p:
                vals = closed_form_roots(v, pp, prob.phases).values()
                assert np.min(np.abs(vals - r.root_value)) < 1e-9
            assert abs(np.exp(1j * m * r.k * prob.a_slab) - r.root_value) < 1e-9
        assert abs(len(t) - phase_count_estimate(prob)) <= 2 + 1e-9

    @settings(max_examples=15)
    @given(a=st.floats(0.3, 3.0))
    def test_constant_root_exact(self, a):
        t = allowed_k(one_phase_1(0, a_slab=a, k_window=(0.05, 12.0)))
        n = np.round(t.ks() * a / math.pi)
        assert np.allclose(t.ks(), n * math.pi / a, atol=1e-11)


class TestSweep:
    def test_a_slab(self):
        out = spectrum_sweep(one_phase_1(0), "a_slab", [1.0, 2.0])
        assert np.allclose(out[0].ks(), expected(math.pi, math.pi, (0.05, 10)))
        assert np.allclose(out[1].ks(), expected(math.pi / 2, math.pi / 2, (0.05, 10)))

    def test_empty(self):
        assert spectrum_sweep(one_phase_1(0), "field", []) == []

    def test_field_independence_lowest_level(self):
        prob = one_phase_1(None, parameterization=LandauLevel(0))
        out = spectrum_sweep(prob, "field", [0.5, 1.0, 3.0])
        for t in out[1:]:
            assert np.allclose(t.ks(), out[0].ks(), atol=1e-12)

    def test_error_recorded(self):
        out = spectrum_sweep(one_phase_1(0), "a_slab", [1.0, -1.0, 2.0])
        assert out[0].error is None and out[2].error is None
        assert "DomainError" in out[1].error
        assert len(out[1]) == 0

    def test_bad_parameter(self):
        with pytest.raises(DomainError):
            spectrum_sweep(one_phase_1(0), "mass", [1.0])
