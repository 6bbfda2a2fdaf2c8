import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diracslab import (DomainError, InvalidModeError, NotARootError, ONE_PHASE, PhaseConfig,
                       PhysicalParams, SingularConfigurationError, SlabMode, TransverseMode,
                       all_variants, assemble_phi, boundary_residual, certify_mode,
                       closed_form_roots, current_Jz, eval_f, null_space_modes,
                       phase_condition_mismatch)
from diracslab.modes import slab_width_for_root
from diracslab.verify import random_draw

PARAMS = PhysicalParams(1.0, 2.3, 0.7, field=1.2)
PH1 = PhaseConfig.for_variant(ONE_PHASE[0], 0.9)


def plane_mode(A, n=1):
    return SlabMode(PARAMS, PH1, 1.0, A, TransverseMode(n, PARAMS.field, 0.0))


Y = np.linspace(-3, 3, 13)


class TestAssemble:
    def test_single_wave(self):
        m = plane_mode([1, 0, 0, 0])
        z = 0.37
        phi = assemble_phi(m, Y, z)
        f, e = eval_f(m.transverse, Y), np.exp(1j * PARAMS.k * z)
        assert np.allclose(phi[0], f * e)
        assert np.allclose(phi[2], PARAMS.alpha * f * e)

    def test_lowest_level_lower_components(self):
        phi = assemble_phi(plane_mode([0.3, 1j, 2, -1], n=0), Y, 0.2)
        assert np.all(phi[1] == 0) and np.all(phi[3] == 0)

    def test_standing_wave_at_centre(self):
        m = plane_mode([1, 0, 1, 0])
        assert np.allclose(assemble_phi(m, Y, 0.0)[0], 2 * eval_f(m.transverse, Y))

    def test_shape(self):
        m = plane_mode([1, 0, 0, 0])
        assert assemble_phi(m, Y[:, None], np.zeros((1, 3))).shape == (4, 13, 3)

    def test_outside_slab(self):
        with pytest.raises(DomainError):
            assemble_phi(plane_mode([1, 0, 0, 0]), 0.0, 1.5)

    def test_singular_weights(self):
        pp = PhysicalParams(1.0, 2.0, math.sqrt(3.0), field=1.0)
        m = SlabMode(pp, PH1, 1.0, [1, 0, 0, 0], TransverseMode(1, 1.0))
        with pytest.raises(SingularConfigurationError):
            assemble_phi(m, 0.0, 0.0)

    @given(st.floats(0, 2 * math.pi))
    def test_linearity_and_phase(self, theta):
        rng = np.random.default_rng(int(theta * 1e6))
        A, B = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
        c = complex(math.cos(theta), math.sin(theta))
        z = np.linspace(-1, 1, 5)[None, :]
        y = Y[:, None]
        lhs = assemble_phi(plane_mode(A + c * B), y, z)
        rhs = assemble_phi(plane_mode(A), y, z) + c * assemble_phi(plane_mode(B), y, z)
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1, np.max(np.abs(lhs)))
        j0 = current_Jz(plane_mode(A), y, z)
        j1 = current_Jz(plane_mode(c * A), y, z)
        assert np.max(np.abs(j0 - j1)) < 1e-12 * max(1, np.max(np.abs(j0)))


class TestCurrent:
    def test_plane_wave_z_independent(self):
        m = plane_mode([1, 0, 0, 0])
        j = current_Jz(m, Y[:, None], np.linspace(-1, 1, 9)[None, :])
        assert np.allclose(j, j[:, :1], rtol=1e-13, atol=1e-15)

    def test_real(self):
        j = current_Jz(plane_mode([1, 2j, 0.3, -1]), Y, 0.1)
        assert np.isrealobj(j)

    def test_uncertified_residual_order_one(self):
        rep = boundary_residual(plane_mode([1, 0, 0, 0]))
        assert 0.5 < rep.residual <= 1.0 + 1e-12

    def test_zero_mode(self):
        with pytest.raises(InvalidModeError):
            boundary_residual(plane_mode([0, 0, 0, 0]))

    def test_one_phase_1_walls(self):
        for m in null_space_modes(PARAMS, PH1, 1.0, landau_index=1, rng=3):
            assert boundary_residual(m).residual < 1e-8
            assert phase_condition_mismatch(m) < 1e-8

    def test_lowest_level_flag(self):
        m = certify_mode(PARAMS, PH1, -1.0, landau_index=0)
        rep = boundary_residual(m)
        assert rep.residual < 1e-8 and rep.lower_zero

    def test_phase_relations_give_zero_current(self):
        # Phi3 = e^{i rho} Phi1 and Phi4 = e^{i sigma} Phi2 cancel exactly
        phi = np.array([0.3 + 0.2j, -1.1j, 0.0, 0.0])
        rho, sigma = 0.7, 2.2
        phi[2], phi[3] = np.exp(1j * rho) * phi[0], np.exp(1j * sigma) * phi[1]
        jz = (abs(phi[0]) ** 2 - abs(phi[2]) ** 2) - (abs(phi[1]) ** 2 - abs(phi[3]) ** 2)
        assert abs(jz) < 1e-15


class TestCertify:
    @pytest.mark.parametrize("v", list(all_variants()), ids=str)
    def test_every_variant(self, v):
        rng = np.random.default_rng(99)
        pp, ph = random_draw(rng, v)
        pp = pp.replace(field=0.9)
        for K in closed_form_roots(v, pp, ph).k_roots():
            for n in (0, 2):
                m = certify_mode(pp, ph, K, landau_index=n)
                assert m.phase_mismatch() < 1e-12
                assert m.s_residual() < 1e-12
                assert boundary_residual(m).residual < 1e-8
                assert phase_condition_mismatch(m) < 1e-8

    def test_width_mismatch(self):
        with pytest.raises(NotARootError):
            certify_mode(PARAMS.replace(a_slab=1.0), PH1, -1.0, 1, fit_width=False)

    def test_width_fit(self):
        a = slab_width_for_root(0.7, 1j)
        assert np.exp(2j * 0.7 * a) == pytest.approx(1j)
        assert slab_width_for_root(2.0, 1.0) == pytest.approx(math.pi / 2)

    def test_not_unit(self):
        with pytest.raises(DomainError):
            plane_mode([1, 0, 0, 0]).__class__(PARAMS, PH1, 1.1, [1, 0, 0, 0],
                                                 TransverseMode(1, 1.2))

    def test_coeffs(self):
        m = certify_mode(PARAMS, PH1, 1.0, 1, coeffs=[1, 1j])
        assert np.linalg.norm(m.A) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            certify_mode(PARAMS, PH1, 1.0, 1, coeffs=[1, 1, 1])

    def test_random_combinations(self):
        modes = null_space_modes(PARAMS, PH1, 1.0, 1, rng=0)
        assert len(modes) == 12
