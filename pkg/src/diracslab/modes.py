"""Explicit four-spinor modes and the current through the walls.

A mode is the combination ``Phi = A1 Psi1 + A2 Psi2 + A3 Psi3 + A4 Psi4`` of
the waves

    Psi1: e^{+ikz} (f, g/(k-p),  alpha f,  alpha g/(k-p))
    Psi2: e^{+ikz} (f, g/(k+p),  beta f,   beta g/(k+p))
    Psi3: e^{-ikz} (f, -g/(k+p), alpha f, -alpha g/(k+p))
    Psi4: e^{-ikz} (f, -g/(k-p), beta f,  -beta g/(k-p))

with the common factor ``exp(-i eps t + i p_x x)`` dropped; it does not
affect ``J^z``.  A certified mode has ``A`` in the null space of ``S(K)`` and
``exp(2 i k a_slab) = K``, so that ``Phi3 = e^{i rho} Phi1`` and
``Phi4 = e^{i sigma} Phi2`` at ``z = -a_slab`` (``mu``, ``nu`` at ``+a_slab``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary import build_S, nullspace_A
from .core import PhaseConfig, PhysicalParams
from .errors import DomainError, InvalidModeError, NotARootError, SingularConfigurationError
from .transverse import TransverseMode, eval_f, eval_g

UNIT_TOL = 1e-10
DEFAULT_Y_POINTS = 41
DEFAULT_T_SPAN = 6.0
INTERIOR_Z_POINTS = 65
INTERIOR_ZERO_RTOL = 1e-10  # interior J^z below this is rounding noise


@dataclass(frozen=True)
class SlabMode:
    """A boundary mode: physical state, phases, root, amplitudes and level.

    Construction only checks shapes and ``|K_root| = 1``; use
    :func:`certify_mode` to build modes whose amplitudes solve ``S A = 0``.
    """

    params: PhysicalParams
    phases: PhaseConfig
    K_root: complex
    A: np.ndarray
    transverse: TransverseMode

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex).reshape(-1)
        if A.shape != (4,):
            raise DomainError(f"A needs four components, got shape {A.shape}", field="A")
        object.__setattr__(self, "A", A)
        K = complex(self.K_root)
        if not abs(abs(K) - 1.0) < UNIT_TOL:
            raise DomainError(f"|K_root| must be 1, got {abs(K)!r}", field="K_root")
        object.__setattr__(self, "K_root", K)

    @property
    def a_slab(self) -> float:
        return self.params.a_slab

    def with_A(self, A) -> "SlabMode":
        return SlabMode(self.params, self.phases, self.K_root, A, self.transverse)

    def s_residual(self) -> float:
        """``||S(K) A|| / (||S|| ||A||)``."""
        S = build_S(self.params, self.phases, self.K_root).entries
        den = np.linalg.norm(S, 2) * np.linalg.norm(self.A)
        return float(np.linalg.norm(S @ self.A) / den) if den > 0 else math.inf

    def phase_mismatch(self) -> float:
        """``|exp(2 i k a_slab) - K_root|``."""
        return float(abs(np.exp(2j * self.params.k * self.a_slab) - self.K_root))


def slab_width_for_root(k: float, K_root: complex, branch: int = 0) -> float:
    """Smallest ``a_slab > 0`` (plus ``branch`` periods) with ``exp(2 i k a) = K``."""
    if not k > 0:
        raise DomainError(f"k must be positive, got {k!r}", field="k")
    theta = math.atan2(complex(K_root).imag, complex(K_root).real) % (2 * math.pi)
    if theta == 0.0:
        theta = 2 * math.pi
    return (theta + 2 * math.pi * branch) / (2 * k)


def certify_mode(params: PhysicalParams, phases: PhaseConfig, K_root: complex,
                 landau_index: int = 0, *, coeffs=None, fit_width: bool = True) -> SlabMode:
    """Build a mode at a root of ``det S`` with amplitudes from its null space.

    Parameters
    ----------
    params, phases
        Physical state and wall phases; ``params.field`` must be positive.
    K_root : complex
        A unit-modulus root of ``det S(K)``.
    landau_index : int
        Transverse level ``n``.
    coeffs : array_like, optional
        Weights combining the null-space basis vectors; the first basis
        vector by default.
    fit_width : bool
        Replace ``params.a_slab`` by :func:`slab_width_for_root` so that
        ``exp(2 i k a_slab) = K_root``.  Otherwise a mismatch raises.

    Raises
    ------
    NotARootError
        If ``K_root`` is not a root, or the slab width does not fit it.
    """
    if fit_width:
        params = params.replace(a_slab=slab_width_for_root(params.k, K_root))
    elif abs(np.exp(2j * params.k * params.a_slab) - K_root) > 1e-10:
        raise NotARootError(
            f"exp(2 i k a_slab) = {np.exp(2j * params.k * params.a_slab)!r} "
            f"does not match K_root = {complex(K_root)!r}")
    basis = nullspace_A(params, phases, K_root)
    if coeffs is None:
        A = basis[0]
    else:
        coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
        if coeffs.shape != (basis.shape[0],):
            raise DomainError(
                f"need {basis.shape[0]} null-space weights, got {coeffs.shape[0]}",
                field="coeffs")
        A = coeffs @ basis
        A = A / np.linalg.norm(A)
    tm = TransverseMode(landau_index, params.field, params.p_x)
    return SlabMode(params, phases, K_root, A, tm)


def _weights(k: float, p: float):
    km, kp = k - p, k + p
    if abs(km) <= 1e-14 * max(abs(k), abs(p)) or abs(kp) <= 1e-14 * max(abs(k), abs(p)):
        raise SingularConfigurationError(f"k = +-p: weights 1/(k-+p) diverge (k={k!r}, p={p!r})",
                                         expression="k - p" if abs(km) < abs(kp) else "k + p")
    return 1.0 / km, 1.0 / kp


def assemble_phi(mode: SlabMode, y, z) -> np.ndarray:
    """The four components of ``Phi`` at ``(y, z)``; broadcasts over arrays.

    Returns an array of shape ``(4,) + broadcast(y, z).shape``.
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    a = mode.a_slab
    if np.any(np.abs(z) > a * (1 + 1e-12)):
        raise DomainError(f"z must lie in [-{a}, {a}]", field="z")
    p, k = mode.params.p, mode.params.k
    alpha = mode.params.alpha
    beta = 1.0 / alpha
    w_m, w_p = _weights(k, p)
    A1, A2, A3, A4 = mode.A
    f = eval_f(mode.transverse, y)
    g = eval_g(mode.transverse, y)
    ep, em = np.exp(1j * k * z), np.exp(-1j * k * z)
    phi1 = f * (ep * (A1 + A2) + em * (A3 + A4))
    phi3 = f * (ep * (A1 * alpha + A2 * beta) + em * (A3 * alpha + A4 * beta))
    phi2 = g * (ep * (A1 * w_m + A2 * w_p) - em * (A3 * w_p + A4 * w_m))
    phi4 = g * (ep * (A1 * alpha * w_m + A2 * beta * w_p)
                - em * (A3 * alpha * w_p + A4 * beta * w_m))
    return np.stack(np.broadcast_arrays(phi1, phi2, phi3, phi4))


def current_Jz(mode: SlabMode, y, z):
    """``J^z = (|Phi1|^2 - |Phi3|^2) - (|Phi2|^2 - |Phi4|^2)``."""
    phi = assemble_phi(mode, y, z)
    sq = phi.real ** 2 + phi.imag ** 2
    out = (sq[0] - sq[2]) - (sq[1] - sq[3])
    return out[()] if out.ndim == 0 else out


def default_y_grid(mode: SlabMode, n: int = DEFAULT_Y_POINTS,
                   t_span: float = DEFAULT_T_SPAN) -> np.ndarray:
    """``n`` values of y covering ``t in [-t_span, t_span]``."""
    tm = mode.transverse
    t = np.linspace(-t_span, t_span, n)
    return (t * math.sqrt(tm.field) - tm.p_x) / tm.field


@dataclass(frozen=True)
class BoundaryReport:
    """Wall current relative to a reference scale.

    ``residual = boundary_max / reference``.  The reference is the largest
    interior ``|J^z|`` unless that is negligible against
    :func:`amplitude_scale`, in which case the amplitude scale itself is used
    and ``interior_zero`` is set.  ``lower_zero`` flags
    ``g = 0`` (lowest Landau level), where ``Phi2 = Phi4 = 0``.
    """

    residual: float
    boundary_max: float
    reference: float
    interior_zero: bool
    lower_zero: bool


def amplitude_scale(mode: SlabMode, y) -> float:
    """Largest ``sum_i (sum_j |A_j Psi_j,i|)**2`` over ``y``.

    Unlike ``|Phi|**2`` this has no cancellation between the four waves, so
    it bounds the rounding error of ``J^z`` even when ``Phi`` nearly vanishes.
    """
    p, k = mode.params.p, mode.params.k
    alpha = mode.params.alpha
    beta = 1.0 / alpha
    w_m, w_p = (abs(w) for w in _weights(k, p))
    a = np.abs(mode.A)
    f = np.abs(eval_f(mode.transverse, y))
    g = np.abs(eval_g(mode.transverse, y))
    c1 = f * a.sum()
    c3 = f * (alpha * (a[0] + a[2]) + beta * (a[1] + a[3]))
    c2 = g * ((a[0] + a[3]) * w_m + (a[1] + a[2]) * w_p)
    c4 = g * (alpha * (a[0] * w_m + a[2] * w_p) + beta * (a[1] * w_p + a[3] * w_m))
    return float(np.max(c1 ** 2 + c2 ** 2 + c3 ** 2 + c4 ** 2))


def boundary_residual(mode: SlabMode, y_grid=None,
                      z_points: int = INTERIOR_Z_POINTS) -> BoundaryReport:
    """Largest ``|J^z|`` on the walls, scaled as described in :class:`BoundaryReport`.

    Raises
    ------
    InvalidModeError
        If ``A = 0``.
    """
    if not np.any(mode.A != 0):
        raise InvalidModeError("zero mode: A = 0")
    y = default_y_grid(mode) if y_grid is None else np.asarray(y_grid, dtype=float)
    if y.size == 0:
        raise DomainError("y grid is empty", field="y_grid")
    a = mode.a_slab
    Y, Zw = np.meshgrid(y, np.array([-a, a]), indexing="ij")
    wall = float(np.max(np.abs(current_Jz(mode, Y, Zw))))
    zi = np.linspace(-a, a, z_points)[1:-1]
    Yi, Zi = np.meshgrid(y, zi, indexing="ij")
    interior = float(np.max(np.abs(current_Jz(mode, Yi, Zi))))
    norm_scale = amplitude_scale(mode, y)
    if norm_scale == 0.0:
        raise InvalidModeError("mode vanishes on the grid")
    interior_zero = interior <= INTERIOR_ZERO_RTOL * norm_scale
    reference = norm_scale if interior_zero else interior
    g = eval_g(mode.transverse, y)
    lower_zero = bool(np.all(g == 0))
    return BoundaryReport(wall / reference, wall, reference, interior_zero, lower_zero)


def phase_condition_mismatch(mode: SlabMode, y_grid=None,
                             z_points: int = INTERIOR_Z_POINTS) -> float:
    """Largest ``|Phi3 - e^{i theta} Phi1|``, ``|Phi4 - e^{i theta'} Phi2|`` on the
    walls, relative to the largest ``||Phi||`` over the whole (y, z) grid."""
    y = default_y_grid(mode) if y_grid is None else np.asarray(y_grid, dtype=float)
    a = mode.a_slab
    ph = mode.phases
    lo = assemble_phi(mode, y, -a * np.ones_like(y))
    hi = assemble_phi(mode, y, a * np.ones_like(y))
    d = max(np.max(np.abs(lo[2] - ph.x * lo[0])), np.max(np.abs(lo[3] - ph.v * lo[1])),
            np.max(np.abs(hi[2] - ph.y * hi[0])), np.max(np.abs(hi[3] - ph.w * hi[1])))
    Y, Z = np.meshgrid(y, np.linspace(-a, a, z_points), indexing="ij")
    scale = float(np.max(np.linalg.norm(assemble_phi(mode, Y, Z), axis=0)))
    return float(d / scale) if scale > 0 else 0.0


def null_space_modes(params: PhysicalParams, phases: PhaseConfig, K_root: complex,
                     landau_index: int = 0, rng=None, n_random: int = 10) -> list[SlabMode]:
    """Every basis vector as a mode; for a null space of dimension > 1 also
    ``n_random`` random unit combinations."""
    first = certify_mode(params, phases, K_root, landau_index)
    basis = nullspace_A(first.params, phases, K_root)
    modes = [first.with_A(b) for b in basis]
    if basis.shape[0] > 1:
        rng = np.random.default_rng(rng)
        for _ in range(n_random):
            c = rng.normal(size=basis.shape[0]) + 1j * rng.normal(size=basis.shape[0])
            A = c @ basis
            modes.append(first.with_A(A / np.linalg.norm(A)))
    return modes
