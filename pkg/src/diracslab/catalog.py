"""Closed-form roots of ``det S = 0`` for every boundary-phase pattern.

Throughout, ``X, Y, Z`` (three-phase) or ``X, Y, V, W`` (four-phase) are the
Möbius images ``(alpha - e^{i theta}) / (1 - alpha e^{i theta})`` of the
independent phases.  After the substitution ``beta = 1 / alpha`` the
determinant no longer involves ``alpha`` except through these images, and in
all but four patterns it is a quadratic in ``Lambda = K**2``.

Roots of a quadratic in ``Lambda`` are reported as ``Lambda``-kind entries;
the corresponding ``K`` are ``+-sqrt(Lambda)``.  Patterns whose roots are
given directly in ``K`` are reported as ``K``-kind.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Family, PhaseConfig, PhysicalParams, VariantId, mobius_X
from .errors import DomainError, NotApplicableError, SingularConfigurationError

UNIT_TOL = 1e-10


class RootKind(enum.Enum):
    K = "K"
    LAMBDA = "Lambda"


@dataclass(frozen=True)
class RootEntry:
    value: complex
    multiplicity: int
    kind: RootKind


@dataclass(frozen=True)
class RootSet:
    entries: tuple[RootEntry, ...]
    variant: VariantId

    @property
    def kind(self) -> RootKind:
        return self.entries[0].kind

    def values(self) -> np.ndarray:
        """Entry values with multiplicity, in the entry's own variable."""
        return np.array([e.value for e in self.entries for _ in range(e.multiplicity)],
                        dtype=complex)

    def k_roots(self) -> np.ndarray:
        """All four K-roots; Lambda entries expand to ``+-sqrt(Lambda)``."""
        out = []
        for e in self.entries:
            if e.kind is RootKind.K:
                out.extend([e.value] * e.multiplicity)
            else:
                s = np.sqrt(complex(e.value))
                out.extend([s, -s] * e.multiplicity)
        return np.array(out, dtype=complex)

    def lambda_roots(self) -> np.ndarray:
        """Roots in ``Lambda = K**2``; K entries are squared and paired."""
        if self.kind is RootKind.LAMBDA:
            return self.values()
        sq = list(self.values() ** 2)
        # each Lambda root appears once per +-K pair
        out = []
        while sq:
            lam = sq.pop(0)
            j = int(np.argmin(np.abs(np.array(sq) - lam)))
            sq.pop(j)
            out.append(lam)
        return np.array(out, dtype=complex)


@dataclass
class _Ctx:
    alpha: float
    k: float
    p: float
    x: np.ndarray       # unit values of the independent phases
    X: np.ndarray       # their Möbius images


def _guard(den: complex, expression: str, ctx: _Ctx, order: int = 2) -> complex:
    if abs(den) < 1e-13 * (max(abs(ctx.k), abs(ctx.p)) ** order):
        raise SingularConfigurationError(
            f"vanishing denominator {expression} = {den!r}", expression=expression)
    return den


def _lam(*values_mult) -> tuple[RootEntry, ...]:
    return tuple(RootEntry(complex(v), m, RootKind.LAMBDA) for v, m in values_mult)


def _kk(*values_mult) -> tuple[RootEntry, ...]:
    return tuple(RootEntry(complex(v), m, RootKind.K) for v, m in values_mult)


def _quadratic_pair(sq, rest, den, ctx, name):
    """``(rest + sq) / den`` and ``(rest - sq) / den`` as two Lambda entries."""
    _guard(den, name, ctx, order=2)
    return _lam(((rest + sq) / den, 1), ((rest - sq) / den, 1))


# ----------------------------------------------------------------------------
# one independent phase Delta; X is the image of exp(i Delta)

def _one_1(c):
    return _kk((1.0, 2), (-1.0, 2))


def _one_2(c):
    a, k, p, x = c.alpha, c.k, c.p, c.x[0]
    x2 = x * x
    u = (x2 - 1) * a * a - x2 + 1
    num = u * k + ((-x2 - 1) * a * a + 4 * a * x - x2 - 1) * p
    den = u * k + ((x2 + 1) * a * a - 4 * a * x + x2 + 1) * p
    _guard(den, "[(x^2-1)a^2-x^2+1]k + [(x^2+1)a^2-4ax+x^2+1]p", c, order=1)
    return _lam((1.0, 1), (-num / den, 1))


def _ratio_3(c):
    k, p, X2 = c.k, c.p, c.X[0] ** 2
    den = _guard((k + p) * X2 - k + p, "(k+p)X^2 - k + p", c, order=1)
    return ((p - k) * X2 + k + p) / den


def _one_3(c):
    return _lam((1.0, 1), (_ratio_3(c), 1))


def _one_5(c):
    # reciprocal of the variant-3 root; the form linear in X does not solve det S = 0
    k, p, X2 = c.k, c.p, c.X[0] ** 2
    den = _guard((p - k) * X2 + k + p, "(p-k)X^2 + k + p", c, order=1)
    return _lam((1.0, 1), (((k + p) * X2 - k + p) / den, 1))


def _one_6(c):
    # det S reduces to (Lambda - 1)**2 times a nonvanishing factor
    return _lam((1.0, 2))


def _one_7(c):
    k, p, X = c.k, c.p, c.X[0]
    L = k * k / (p * p)
    W = X * X + 1 / (X * X)
    W = W.real  # W is real for |X| = 1
    t = L * (W - 2)
    sq = np.sqrt(complex(t * (4 + t)))
    return _lam((1 + t / 2 + sq / 2, 1), (1 + t / 2 - sq / 2, 1))


def _one_8(c):
    return _lam((_ratio_3(c), 2))


# ----------------------------------------------------------------------------
# two independent phases (Delta, W); X, Y images of exp(i Delta), exp(i W)

def _two_1(c):
    return _kk((1.0, 2), (-1.0, 2))


def _two_2(c):
    k, p = c.k, c.p
    X, Y = c.X
    num = (Y * X * (k + p) - k + p) * (X * (k - p) - Y * (k + p))
    den = (Y * X * (k - p) - k - p) * (X * (k + p) - Y * (k - p))
    _guard(den, "[YX(k-p)-k-p][X(k+p)-Y(k-p)]", c)
    r = np.sqrt(num / den)
    return _kk((1.0, 1), (-1.0, 1), (r, 1), (-r, 1))


def _two_3(c):
    k, p = c.k, c.p
    X, Y = c.X
    num = (Y * X * (k - p) - k - p) * (X * (k - p) - Y * (k + p))
    den = (Y * X * (k + p) - k + p) * (X * (k + p) - Y * (k - p))
    _guard(den, "[YX(k+p)-k+p][X(k+p)-Y(k-p)]", c)
    r = np.sqrt(num / den)
    return _kk((1.0, 1), (-1.0, 1), (r, 1), (-r, 1))


def _two_4(c):
    k, p = c.k, c.p
    k2, p2 = k * k, p * p
    X, Y = c.X
    den = ((k + p) * X - (k - p) * Y) ** 2
    sq = 2 * k * np.sqrt((Y * X - 1) ** 2
                         * (((Y * Y - 1) * X * X - Y * Y + 1) * k2 + p2 * (X + Y) ** 2))
    rest = (2 * k2 * Y * Y + p2 - k2) * X * X + Y * (p2 - k2) * (2 * X + Y) + 2 * k2
    return _quadratic_pair(sq, rest, den, c, "((k+p)X - (k-p)Y)^2")


# ----------------------------------------------------------------------------
# three independent phases (F, G, H); X, Y, Z their images

def _three_1(c):
    k, p = c.k, c.p
    X, Y, Z = c.X
    den = ((k + p) * X - (k - p) * Y) * ((k - p) * X - Z * (k + p))
    _guard(den, "[(k+p)X-(k-p)Y][(k-p)X-Z(k+p)]", c)
    # second numerator factor carries Z
    num = ((k - p) * X - (k + p) * Y) * ((k + p) * X - Z * (k - p))
    return _lam((1.0, 1), (num / den, 1))


def _three_2(c):
    k, p = c.k, c.p
    X, Y, Z = c.X
    den = ((k + p) * X - (k - p) * Z) * ((k - p) * X - (k + p) * Y)
    _guard(den, "[(k+p)X-(k-p)Z][(k-p)X-(k+p)Y]", c)
    num = ((k - p) * X - (k + p) * Z) * ((k + p) * X - (k - p) * Y)
    return _lam((1.0, 1), (num / den, 1))


def _three_3(c):
    k, p = c.k, c.p
    k2, p2 = k * k, p * p
    X, Y, Z = c.X
    den = p * X * ((Y - Z) * k - (Y + Z) * p)
    sq = np.sqrt(k2 * ((X - Z) ** 2 * (X - Y) ** 2 * k2
                       + 2 * p2 * ((Y + Z) * X - 2 * Y * Z) * X * (X - (Y + Z) / 2)))
    rest = -(k2 * (X * X + Y * Z) - (Y + Z) * (k2 - p2) * X)
    return _quadratic_pair(sq, rest, den, c, "pX[(Y-Z)k - (Y+Z)p]")


def _three_4(c):
    k, p = c.k, c.p
    k2, p2 = k * k, p * p
    X, Y, Z = c.X
    X2 = X * X
    den = ((X2 - 1) * k + p * (X2 + 1)) * ((Y - Z) * k - p * (Y + Z))
    sq = 2 * k * np.sqrt((X * Z - 1) * (X - Z) * (X * Y - 1) * (X - Y) * k2
                         - (Y * Z * (X2 + 1) - X * (Y + Z)) * (1 + X2 - X * (Y + Z)) * p2)
    rest = ((Y + Z) * X2 - 2 * (Y * Z + 1) * X + Y + Z) * k2 - p2 * (Y + Z) * (X2 + 1)
    return _quadratic_pair(sq, rest, den, c, "[(X^2-1)k + p(X^2+1)][(Y-Z)k - p(Y+Z)]")


def _three_5(c):
    # det S factors into one linear-in-Lambda factor in Y and one in Z
    k, p = c.k, c.p
    X, Y, Z = c.X
    den_y = _guard((k + p) * X - Y * (k - p), "(k+p)X - Y(k-p)", c, order=1)
    den_z = _guard((k + p) * X - Z * (k - p), "(k+p)X - Z(k-p)", c, order=1)
    lam_y = -(X * (k - p) - Y * (k + p)) / den_y
    lam_z = -(X * (k - p) - Z * (k + p)) / den_z
    return _lam((lam_y, 1), (lam_z, 1))


def _three_6(c):
    k, p = c.k, c.p
    k2, p2 = k * k, p * p
    X, Y, Z = c.X
    X2 = X * X
    den = (Y * (k - p) * X - k - p) * (X * (k + p) - Z * (k - p))
    # balanced pairing: the two products under the root are of equal order
    t1 = ((Y - Z) * (X2 - 1)) * ((X * Z - 1) * (X - Y)) * k2
    t2 = (Y * Z * (X2 - 1) + (Z - Y) * X) * (X2 + (Z - Y) * X - 1) * p2
    sq = 2 * k * np.sqrt(-(t1 - t2))
    rest = ((Y - 2 * Z) * k2 - Y * p2) * X2 + (Y * Z + 1) * (k2 - p2) * X \
        + (Z - 2 * Y) * k2 - Z * p2
    return _quadratic_pair(sq, rest, den, c, "[Y(k-p)X - k - p][X(k+p) - Z(k-p)]")


# ----------------------------------------------------------------------------
# general case; X, Y, V, W images of the rho, mu, sigma, nu phases

def _four(c):
    k, p = c.k, c.p
    k2, p2 = k * k, p * p
    X, Y, V, W = c.X
    den = ((W - Y) * k + (W + Y) * p) * ((V - X) * k - (V + X) * p)
    sq = 2 * k * np.sqrt((((X - Y) * W + X * Y) * V - W * X * Y) * (V + X - Y - W) * p2
                         - (X - Y) * (W - X) * (V - Y) * (V - W) * k2)
    rest = ((W - 2 * X + Y) * V + (X - 2 * Y) * W + X * Y) * k2 - (W + Y) * (V + X) * p2
    return _quadratic_pair(sq, rest, den, c, "[(W-Y)k + (W+Y)p][(V-X)k - (V+X)p]")


_FORMULAS: dict[tuple[Family, int], Callable[[_Ctx], tuple[RootEntry, ...]]] = {
    (Family.ONE, 1): _one_1, (Family.ONE, 2): _one_2, (Family.ONE, 3): _one_3,
    (Family.ONE, 4): _one_3, (Family.ONE, 5): _one_5, (Family.ONE, 6): _one_6,
    (Family.ONE, 7): _one_7, (Family.ONE, 8): _one_8,
    (Family.TWO, 1): _two_1, (Family.TWO, 2): _two_2, (Family.TWO, 3): _two_3,
    (Family.TWO, 4): _two_4,
    (Family.THREE, 1): _three_1, (Family.THREE, 2): _three_2, (Family.THREE, 3): _three_3,
    (Family.THREE, 4): _three_4, (Family.THREE, 5): _three_5, (Family.THREE, 6): _three_6,
    (Family.FOUR, 1): _four,
}

K_KIND = frozenset({(Family.ONE, 1), (Family.TWO, 1), (Family.TWO, 2), (Family.TWO, 3)})


def is_k_kind(variant: VariantId) -> bool:
    return (variant.family, variant.index) in K_KIND


def _context(variant: VariantId, params: PhysicalParams, phases: PhaseConfig) -> _Ctx:
    if phases.variant != variant:
        # re-validate the raw phases against the requested pattern
        phases = PhaseConfig(*phases.as_tuple(), variant=variant)
    p, k = params.p, params.k
    if not p > 0:
        raise DomainError("closed forms need p > 0", field="energy")
    if not k > 0:
        raise DomainError(f"closed forms need k > 0, got {k!r}", field="k")
    if abs(k - p) <= 1e-14 * p:
        raise DomainError("closed forms need k != p", field="k")
    x = np.exp(1j * np.array(phases.independent_phases()))
    return _Ctx(params.alpha, k, p, x, mobius_X(params.alpha, x))


def closed_form_roots(variant: VariantId, params: PhysicalParams,
                      phases: PhaseConfig) -> RootSet:
    """Closed-form roots of ``det S = 0`` for the given pattern.

    Raises
    ------
    SingularConfigurationError
        If a denominator of the closed form vanishes.
    DomainError
        If ``k <= 0``, ``k == p`` or the phases do not follow ``variant``.
    """
    ctx = _context(variant, params, phases)
    entries = _FORMULAS[(variant.family, variant.index)](ctx)
    return RootSet(entries, variant)


def biquadratic_coefficients(variant: VariantId, params: PhysicalParams,
                             phases: PhaseConfig) -> tuple[complex, complex, complex]:
    """``(a, b, c)`` of the pattern's reduced equation ``a L**2 + b L + c = 0``.

    Only meaningful up to a common factor.  Not defined for K-kind patterns.
    """
    if is_k_kind(variant):
        raise NotApplicableError(f"{variant} has roots given directly in K")
    c = _context(variant, params, phases)
    k, p = c.k, c.p
    k2, p2 = k * k, p * p
    key = (variant.family, variant.index)
    if variant.family is Family.ONE:
        X = c.X[0]
        X2 = X * X
        if key[1] == 2:
            a_, x = c.alpha, c.x[0]
            x2 = x * x
            A = (k * x2 * a_ ** 2 + p * x2 * a_ ** 2 - k * x2 - k * a_ ** 2 + p * x2
                 - 4 * p * x * a_ + p * a_ ** 2 + k + p)
            B = -2 * p * x2 * a_ ** 2 - 2 * p * x2 + 8 * p * x * a_ - 2 * p * a_ ** 2 - 2 * p
            C = (-k * x2 * a_ ** 2 + p * x2 * a_ ** 2 + k * x2 + k * a_ ** 2 + p * x2
                 - 4 * p * x * a_ + p * a_ ** 2 - k + p)
            return A, B, C
        if key[1] in (3, 4):
            return (k + p) * X2 - k + p, -2 * p * (X2 + 1), -((k - p) * X2 - k - p)
        if key[1] == 5:
            return (p - k) * X2 + k + p, -2 * p * (X2 + 1), (k + p) * X2 - k + p
        if key[1] == 6:
            f = ((p - k) * X2 + k + p) * ((k + p) * X2 - k + p)
            return f, -2 * f, f
        if key[1] == 7:
            L = k2 / p2
            W = (X2 + 1 / X2).real
            return 1.0, -(L * (W - 2) + 2), 1.0
        if key[1] == 8:
            u, v = X2 * (k + p) - k + p, X2 * (k - p) - k - p
            return u * u, 2 * u * v, v * v
    if key == (Family.TWO, 4):
        X, Y = c.X
        return (((k + p) * X - (k - p) * Y) ** 2,
                -((4 * k2 * Y * Y - 2 * k2 + 2 * p2) * X * X + (4 * p2 - 4 * k2) * Y * X
                  + (2 * p2 - 2 * k2) * Y * Y + 4 * k2),
                (X * (k - p) - (k + p) * Y) ** 2)
    if variant.family is Family.THREE:
        X, Y, Z = c.X
        i = key[1]
        if i == 1:
            return (((k + p) * X - (k - p) * Y) * ((k - p) * X - Z * (k + p)),
                    2 * (X * (k2 + p2) * (Y + Z) - (k2 - p2) * (X * X + Y * Z)),
                    ((k - p) * X - (k + p) * Y) * ((k + p) * X - Z * (k - p)))
        if i == 2:
            return (((k + p) * X - Z * (k - p)) * ((k - p) * X - Y * (k + p)),
                    2 * ((k2 + p2) * (Y + Z) * X - (k2 - p2) * (X * X + Y * Z)),
                    ((k + p) * X - Y * (k - p)) * ((k - p) * X - Z * (k + p)))
        if i == 3:
            return (p * X * (k * (Y - Z) - (Y + Z) * p),
                    2 * ((X * X + Y * Z) * k2 - (k2 - p2) * (Y + Z) * X),
                    -p * X * (k * (Y - Z) + (Y + Z) * p))
        if i == 4:
            X2 = X * X
            return (((X2 - 1) * k + p * (X2 + 1)) * ((Y - Z) * k - p * (Y + Z)),
                    -((2 * (Y + Z) * X2 - 4 * (Y * Z + 1) * X + 2 * (Y + Z)) * k2
                      - 2 * p2 * (X2 + 1) * (Y + Z)),
                    ((X2 - 1) * k - (X2 + 1) * p) * ((Y - Z) * k + p * (Y + Z)))
        if i == 5:
            a1, c1 = (k + p) * X - Y * (k - p), X * (k - p) - Y * (k + p)
            a2, c2 = (k + p) * X - Z * (k - p), X * (k - p) - Z * (k + p)
            return a1 * a2, a1 * c2 + a2 * c1, c1 * c2
        if i == 6:
            X2 = X * X
            # constant term: (k^2 - p^2) multiplies (Y X^2 + Z), as in the leading one
            return (-(k2 - p2) * (Y * X2 + Z) + ((k - p) ** 2 * Z * Y + (k + p) ** 2) * X,
                    (2 * (k2 - p2) * Y - 4 * Z * k2) * X2 + 2 * (k2 - p2) * (Z * Y + 1) * X
                    - 4 * k2 * Y + 2 * (k2 - p2) * Z,
                    -(k2 - p2) * (Y * X2 + Z) + ((k + p) ** 2 * Z * Y + (k - p) ** 2) * X)
    X, Y, V, W = c.X
    return (((V - X) * k - p * (V + X)) * ((W - Y) * k + p * (W + Y)),
            2 * (((2 * X - W - Y) * V - (X - 2 * Y) * W - X * Y) * k2
                 + p2 * (W + Y) * (V + X)),
            ((W - Y) * k - p * (W + Y)) * ((V - X) * k + p * (V + X)))


@dataclass(frozen=True)
class UnitModulusReport:
    max_deviation: float
    passed: bool


def verify_unit_modulus(roots: RootSet, tol: float = UNIT_TOL) -> UnitModulusReport:
    """Largest ``| |root| - 1 |`` over the entries."""
    vals = np.array([e.value for e in roots.entries], dtype=complex)
    if not np.all(np.isfinite(vals)):
        return UnitModulusReport(float("inf"), False)
    dev = float(np.max(np.abs(np.abs(vals) - 1.0)))
    return UnitModulusReport(dev, dev < tol)


@dataclass(frozen=True)
class VietaReport:
    product: complex
    ratio: complex
    deviation: float
    passed: bool


def vieta_check(variant: VariantId, params: PhysicalParams, phases: PhaseConfig,
                tol: float = 1e-10) -> VietaReport:
    """Compare ``Lambda1 * Lambda2`` with ``c / a`` of the reduced equation."""
    roots = closed_form_roots(variant, params, phases)
    if roots.kind is RootKind.K:
        raise NotApplicableError(f"{variant} has roots given directly in K")
    a, _, c = biquadratic_coefficients(variant, params, phases)
    lam = roots.values()
    prod = complex(lam[0] * lam[1])
    ratio = complex(c / a)
    dev = abs(prod - ratio)
    return VietaReport(prod, ratio, dev, dev < tol)


def multiset_distance(a, b) -> float:
    """Worst nearest-neighbour distance after greedy pairing of two multisets."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return float("inf")
    # closest pairs first
    worst = 0.0
    while a:
        dists = np.abs(np.subtract.outer(np.array(a), np.array(b)))
        i, j = np.unravel_index(int(np.argmin(dists)), dists.shape)
        worst = max(worst, float(dists[i, j]))
        a.pop(i)
        b.pop(j)
    return worst
