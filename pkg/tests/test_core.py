import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diracslab import (DomainError, FOUR_PHASE, ONE_PHASE, THREE_PHASE, TWO_PHASE, PhaseConfig,
                       PhysicalParams, VariantId, all_variants, longitudinal_p, mobius_X,
                       polarization_ratios)
from diracslab.core import angle_distance, reduce_angle

energies = st.floats(0.1, 50.0)
angles = st.floats(-20.0, 20.0, allow_nan=False)


class TestLongitudinalP:
    def test_threshold(self):
        assert longitudinal_p(1.3, 1.3) == 0.0

    def test_sqrt2(self):
        assert longitudinal_p(math.sqrt(2), 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_pythagorean_triple(self):
        assert longitudinal_p(5.0, 3.0) == 4.0

    def test_below_mass(self):
        with pytest.raises(DomainError) as exc:
            longitudinal_p(0.9, 1.0)
        assert exc.value.field == "energy"

    @pytest.mark.parametrize("mass", [0.0, -1.0])
    def test_bad_mass(self, mass):
        with pytest.raises(DomainError):
            longitudinal_p(2.0, mass)


class TestPolarizationRatios:
    def test_threshold(self):
        assert polarization_ratios(2.0, 2.0) == (1.0, 1.0)

    def test_sqrt2(self):
        a, b = polarization_ratios(math.sqrt(2), 1.0)
        assert a == pytest.approx(1 + math.sqrt(2), rel=1e-15)
        assert b == pytest.approx(math.sqrt(2) - 1, rel=1e-14)

    @given(m=st.floats(0.01, 10.0), ratio=st.floats(1.0, 1e4))
    def test_product_is_one(self, m, ratio):
        a, b = polarization_ratios(m * ratio, m)
        assert abs(a * b - 1) < 1e-12
        assert a >= 1 and 0 < b <= 1


class TestMobius:
    def test_x_one(self):
        assert mobius_X(3.0, 1.0) == pytest.approx(-1.0)

    def test_x_minus_one(self):
        assert mobius_X(3.0, -1.0) == pytest.approx(1.0)

    def test_alpha2_x_i(self):
        assert abs(mobius_X(2.0, 1j) - (4 + 3j) / 5) < 1e-15

    @pytest.mark.parametrize("alpha", [1.0, 0.5])
    def test_bad_alpha(self, alpha):
        with pytest.raises(DomainError):
            mobius_X(alpha, 1.0)

    def test_array_input(self):
        x = np.exp(1j * np.linspace(0, 6, 7))
        X = mobius_X(2.5, x)
        assert X.shape == (7,)

    @given(alpha=st.floats(1.0 + 1e-6, 1e3), theta=angles)
    def test_unit_circle_and_involution(self, alpha, theta):
        x = complex(math.cos(theta), math.sin(theta))
        X = mobius_X(alpha, x)
        assert abs(abs(X) - 1) < 1e-12
        assert abs(X.conjugate() * X - 1) < 1e-12
        # conj(X) = 1/X, and the map undoes itself
        assert abs(X.conjugate() - 1 / X) < 1e-12
        assert abs(mobius_X(alpha, X) - x) < 1e-9 * max(1.0, alpha)


class TestPhysicalParams:
    def test_derived(self):
        pp = PhysicalParams(3.0, 5.0, 1.0)
        assert pp.p == 4.0
        assert pp.alpha == 3.0
        assert pp.beta == pytest.approx(1 / 3)

    def test_from_momentum(self):
        pp = PhysicalParams.from_momentum(3.0, 4.0, 1.0)
        assert pp.energy == 5.0

    @pytest.mark.parametrize("kw, field", [
        (dict(mass=1.0, energy=1.0, k=0.5), "energy"),
        (dict(mass=-1.0, energy=1.0, k=0.5), "mass"),
        (dict(mass=1.0, energy=2.0, k=0.5, a_slab=0.0), "a_slab"),
        (dict(mass=1.0, energy=2.0, k=0.5, field=-1.0), "field"),
        (dict(mass=1.0, energy=2.0, k=float("nan")), "k"),
    ])
    def test_rejects(self, kw, field):
        with pytest.raises(DomainError) as exc:
            PhysicalParams(**kw)
        assert exc.value.field == field

    def test_replace(self):
        pp = PhysicalParams(1.0, 2.0, 0.5).replace(a_slab=3.0)
        assert pp.a_slab == 3.0 and pp.k == 0.5


class TestVariantId:
    def test_count(self):
        vs = list(all_variants())
        assert len(vs) == 19
        assert len(set(vs)) == 19
        assert (len(ONE_PHASE), len(TWO_PHASE), len(THREE_PHASE)) == (8, 4, 6)

    @pytest.mark.parametrize("v", list(all_variants()), ids=str)
    def test_parse_roundtrip(self, v):
        assert VariantId.parse(str(v)) == v

    @pytest.mark.parametrize("text", ["OnePhase(9)", "TwoPhase(0)", "FivePhase(1)", "junk"])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            VariantId.parse(text)

    def test_param_counts(self):
        assert [v.n_params for v in (ONE_PHASE[0], TWO_PHASE[0], THREE_PHASE[0], FOUR_PHASE)] \
            == [1, 2, 3, 4]


class TestPhaseConfig:
    def test_reduced(self):
        ph = PhaseConfig(-0.5, 7.0, 2 * math.pi, 0.0)
        for v in ph.as_tuple():
            assert 0 <= v < 2 * math.pi
        assert ph.rho == pytest.approx(2 * math.pi - 0.5)

    def test_one_phase_1_all_equal(self):
        ph = PhaseConfig.for_variant(ONE_PHASE[0], 0.4)
        assert len(set(ph.as_tuple())) == 1

    def test_pattern_violation(self):
        with pytest.raises(DomainError):
            PhaseConfig(0.1, 0.2, 0.1, 0.1, variant=ONE_PHASE[0])

    def test_wrong_angle_count(self):
        with pytest.raises(DomainError):
            PhaseConfig.for_variant(TWO_PHASE[0], 0.1)

    @pytest.mark.parametrize("v", list(all_variants()), ids=str)
    def test_independent_roundtrip(self, v, rng):
        ang = rng.uniform(0, 2 * math.pi, v.n_params)
        ph = PhaseConfig.for_variant(v, *ang)
        back = PhaseConfig.for_variant(v, *ph.independent_phases())
        for a, b in zip(back.as_tuple(), ph.as_tuple()):
            assert angle_distance(a, b) < 1e-13

    @given(st.lists(angles, min_size=4, max_size=4))
    def test_unit_values(self, ang):
        ph = PhaseConfig(*ang)
        assert np.all(np.abs(np.abs(ph.unit_values()) - 1) < 1e-15)

    def test_mobius_images(self):
        ph = PhaseConfig(0.0, math.pi, 0.3, 1.0)
        X = ph.mobius_images(2.0)
        assert X[0] == pytest.approx(-1.0)
        assert X[1] == pytest.approx(1.0)


@given(angles)
def test_reduce_angle_range(theta):
    r = reduce_angle(theta)
    assert 0 <= r < 2 * math.pi
    assert angle_distance(r, theta) < 1e-12
