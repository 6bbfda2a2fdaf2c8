"""The 4x4 boundary matrix S(K) and its numerical analysis.

The coefficients ``A = (A1, A2, A3, A4)`` of the combination
``A1 Psi1 + A2 Psi2 + A3 Psi3 + A4 Psi4`` (waves ``+k`` alpha, ``+k`` beta,
``-k`` alpha, ``-k`` beta) make the current ``J^z`` vanish on both walls iff
``S(K) A = 0`` with ``K = exp(2 i k a_slab)``.  Rows 1 and 3 encode the wall
``z = -a`` (phases rho, sigma), rows 2 and 4 the wall ``z = +a`` (mu, nu).

``det S`` is a polynomial of degree <= 4 in K.  :func:`quartic_from_samples`
recovers it by interpolation; the closed forms in :mod:`diracslab.catalog`
are checked against its roots.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PhaseConfig, PhysicalParams
from .errors import ConsistencyError, DegeneratePolynomialError, NotARootError

SAMPLE_POINTS = np.array([0, 1, -1, 2, 1j], dtype=complex)
CERTIFY_POINT = -2j
RANK_RTOL = 1e-10


def boundary_entries(alpha: float, k: float, p: float, units, K) -> np.ndarray:
    """Raw entries of S(K) for unit phases ``units = (x, y, v, w)``."""
    beta = 1.0 / alpha
    x, y, v, w = units
    kp, km = k + p, k - p
    return np.array([
        [alpha - x, beta - x, (alpha - x) * K, (beta - x) * K],
        [(alpha - y) * K, (beta - y) * K, alpha - y, beta - y],
        [(alpha - v) * kp, (beta - v) * km, -(alpha - v) * km * K, -(beta - v) * kp * K],
        [(alpha - w) * kp * K, (beta - w) * km * K, -(alpha - w) * km, -(beta - w) * kp],
    ], dtype=complex)


@dataclass(frozen=True)
class BoundaryMatrix:
    entries: np.ndarray
    params: PhysicalParams
    phases: PhaseConfig
    K: complex

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def scale(self) -> float:
        return row_scale(self.entries)


def build_S(params: PhysicalParams, phases: PhaseConfig, K) -> BoundaryMatrix:
    """Assemble S(K) for the given physical state and wall phases."""
    ent = boundary_entries(params.alpha, params.k, params.p, phases.unit_values(), K)
    return BoundaryMatrix(ent, params, phases, complex(K))


def row_scale(m) -> float:
    """Product of the row max-magnitudes, the yardstick for "det is zero"."""
    m = np.asarray(m)
    return float(np.prod(np.max(np.abs(m), axis=1)))


def det_lu(m) -> complex:
    """Determinant by Gaussian elimination with partial pivoting."""
    a = [[complex(v) for v in row] for row in np.asarray(m)]
    n = len(a)
    det = 1.0 + 0j
    for j in range(n):
        piv = max(range(j, n), key=lambda i: abs(a[i][j]))
        if a[piv][j] == 0:
            return 0j
        if piv != j:
            a[j], a[piv] = a[piv], a[j]
            det = -det
        pivot_row = a[j]
        d = pivot_row[j]
        det *= d
        for i in range(j + 1, n):
            f = a[i][j] / d
            if f:
                row = a[i]
                for c in range(j + 1, n):
                    row[c] -= f * pivot_row[c]
    return det


def det_cofactor(m) -> complex:
    """Determinant by Laplace expansion along the first row (reference route)."""
    a = np.asarray(m, dtype=complex)
    n = a.shape[0]
    if n == 1:
        return complex(a[0, 0])
    if n == 2:
        return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    total = 0j
    for j in range(n):
        minor = np.delete(a[1:], j, axis=1)
        total += (-1) ** j * a[0, j] * det_cofactor(minor)
    return total


def det_S(params: PhysicalParams, phases: PhaseConfig, K) -> complex:
    return det_lu(build_S(params, phases, K).entries)


@dataclass(frozen=True)
class QuarticPoly:
    """``det S`` as ``c0 + c1 K + c2 K**2 + c3 K**3 + c4 K**4``."""

    coeffs: np.ndarray  # c0..c4, ascending powers

    def __call__(self, K):
        return np.polynomial.polynomial.polyval(K, self.coeffs)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def odd_part(self) -> float:
        """``|c1| + |c3|``; zero for a bi-quadratic."""
        return float(abs(self.coeffs[1]) + abs(self.coeffs[3]))

    def normalized(self) -> "QuarticPoly":
        """Scaled so the largest-magnitude coefficient is 1."""
        c = self.coeffs
        return QuarticPoly(c / c[np.argmax(np.abs(c))])


def quartic_from_samples(params: PhysicalParams, phases: PhaseConfig) -> QuarticPoly:
    """Interpolate ``det S(K)`` at five points and certify at a sixth.

    Raises
    ------
    ConsistencyError
        If the interpolant misses ``det S(-2i)``, i.e. the degree exceeds 4.
    """
    alpha, k, p = params.alpha, params.k, params.p
    units = phases.unit_values()
    mats = [boundary_entries(alpha, k, p, units, K) for K in SAMPLE_POINTS]
    dets = np.array([det_lu(m) for m in mats])
    vander = np.vander(SAMPLE_POINTS, 5, increasing=True)
    coeffs = np.linalg.solve(vander, dets)
    m_cert = boundary_entries(alpha, k, p, units, CERTIFY_POINT)
    scale = max(max(row_scale(m) for m in mats), row_scale(m_cert))
    q = QuarticPoly(coeffs)
    miss = abs(q(CERTIFY_POINT) - det_lu(m_cert))
    if miss > 1e-9 * scale:
        raise ConsistencyError(
            f"det S is not a quartic in K: certification miss {miss:.3e} "
            f"(scale {scale:.3e})")
    return q


def _horner(coeffs_desc, z):
    acc = 0j
    for c in coeffs_desc:
        acc = acc * z + c
    return acc


def _newton(coeffs_desc, z, steps=4):
    """Newton refinement that only accepts steps reducing ``|q|``."""
    dq = np.polyder(coeffs_desc)
    fz = _horner(coeffs_desc, z)
    for _ in range(steps):
        d = _horner(dq, z)
        if d == 0:
            break
        z_new = z - fz / d
        f_new = _horner(coeffs_desc, z_new)
        if not abs(f_new) < abs(fz):
            break
        z, fz = z_new, f_new
    return z


def numeric_roots(q: QuarticPoly, *, cluster_tol: float = 1e-5) -> np.ndarray:
    """All roots of ``q`` with multiplicity, sorted by argument then modulus.

    Companion-matrix eigenvalues (``numpy.roots``), then two refinements.
    A multiple root of multiplicity m is split by rounding into m roots
    of spread ``~eps**(1/m)``; such clusters are replaced by their centroid,
    which is accurate to ``~eps``, and polished by Newton on the
    ``(m-1)``-th derivative.  A cluster is accepted only if ``q`` is
    negligible at the polished point, so close but distinct roots stay
    apart.  Simple roots get Newton steps on ``q`` itself.
    """
    c = np.asarray(q.coeffs, dtype=complex)
    norm = float(np.linalg.norm(c))
    if norm == 0.0:
        raise DegeneratePolynomialError("det S vanishes identically in K")
    c = c / norm
    deg = 4
    while deg > 0 and abs(c[deg]) < 1e-12:
        deg -= 1
    if deg == 0:
        if abs(c[0]) < 1e-12:
            raise DegeneratePolynomialError("det S vanishes identically in K")
        return np.array([], dtype=complex)
    desc = c[:deg + 1][::-1]
    raw = list(np.roots(desc))

    out = []
    used = [False] * len(raw)
    for i, r in enumerate(raw):
        if used[i]:
            continue
        members = [i]
        for j in range(i + 1, len(raw)):
            if not used[j] and abs(raw[j] - r) < cluster_tol * (1 + abs(r)):
                members.append(j)
        if len(members) > 1:
            m = len(members)
            centre = np.mean([raw[j] for j in members])
            deriv = desc
            for _ in range(m - 1):
                deriv = np.polyder(deriv)
            centre = _newton(deriv, centre)
            if abs(_horner(desc, centre)) < 1e-14 * max(1.0, abs(centre)) ** deg:
                for j in members:
                    used[j] = True
                out.extend([centre] * m)
                continue
        used[i] = True
        out.append(_newton(desc, r))
    roots = np.array(out, dtype=complex)
    order = np.lexsort((np.abs(roots), np.round(np.angle(roots), 12)))
    return roots[order]


def rank_S(params: PhysicalParams, phases: PhaseConfig, K, rtol: float = RANK_RTOL) -> int:
    """Numeric rank: singular values above ``rtol`` times the largest."""
    s = np.linalg.svd(build_S(params, phases, K).entries, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def nullspace_A(params: PhysicalParams, phases: PhaseConfig, K_root,
                rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the null space of S(K_root), one vector per row.

    Raises
    ------
    NotARootError
        If ``det S(K_root)`` is not negligible against the row scale.
    """
    S = build_S(params, phases, K_root).entries
    scale = row_scale(S)
    d = det_lu(S)
    if abs(d) > 1e-8 * scale:
        raise NotARootError(
            f"K = {complex(K_root)!r} is not a root: |det S| = {abs(d):.3e}, "
            f"scale {scale:.3e}")
    _, s, vh = np.linalg.svd(S)
    rank = int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0
    dim = max(1, 4 - rank)
    basis = vh[4 - dim:].conj()
    norm_S = float(np.linalg.norm(S, 2))
    for vec in basis:
        if np.linalg.norm(S @ vec) > 1e-8 * norm_S:
            raise NotARootError(
                f"no null vector of S at K = {complex(K_root)!r} "
                f"(residual {np.linalg.norm(S @ vec):.3e})")
    return basis
