"""Physical parameters, boundary phase configurations and the Möbius map.

Conventions
-----------
Natural units. A mode of energy ``energy`` and mass ``mass`` carries the
momentum ``p = sqrt(energy**2 - mass**2)``; the two polarization branches are
tied to the ratios ``alpha = (energy + p) / mass`` and ``beta = 1 / alpha``.
The slab occupies ``-a_slab <= z <= a_slab`` and ``k`` is the momentum along
the field.  The plane-wave momentum along x is a separate field, ``p_x``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def longitudinal_p(energy: float, mass: float) -> float:
    """Return ``p = +sqrt(energy**2 - mass**2)``.

    Raises
    ------
    DomainError
        If ``mass <= 0`` or ``energy < mass`` (evanescent modes are not modelled).
    """
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}", field="mass")
    if energy < mass:
        raise DomainError(
            f"energy {energy!r} below the mass {mass!r}", field="energy")
    # (e - m)(e + m) keeps precision near threshold
    return math.sqrt((energy - mass) * (energy + mass))


def polarization_ratios(energy: float, mass: float) -> tuple[float, float]:
    """Return ``(alpha, beta)`` with ``alpha = (energy + p) / mass``.

    ``beta`` is computed as ``1 / alpha`` rather than ``(energy - p) / mass`` so
    that ``alpha * beta == 1`` holds to rounding and the small branch does not
    suffer cancellation at high energy.
    """
    p = longitudinal_p(energy, mass)
    alpha = (energy + p) / mass
    return alpha, 1.0 / alpha


def mobius_X(alpha: float, phase):
    """Map a unit-modulus phase ``x`` to ``X = (alpha - x) / (1 - alpha x)``.

    For real ``alpha > 1`` the map sends the unit circle onto itself and is
    an involution, so ``conj(X) == 1 / X`` and ``mobius_X(alpha, X) == x``.
    Accepts scalars or numpy arrays.

    ``x`` is taken as ``exp(i t)`` with ``t = arg x``.  The result is
    built as ``1 + (X - 1)`` or ``-1 + (X + 1)``, whichever offset is
    smaller, with ``X -+ 1`` formed from ``alpha - 1`` and the half-angle
    forms of ``1 -+ x``.  This keeps full relative accuracy as
    ``alpha -> 1``, where the plain quotient cancels.
    """
    if not alpha > 1.0:
        raise DomainError(
            f"Möbius map needs alpha > 1, got {alpha!r}", field="alpha")
    t = np.angle(np.asarray(phase, dtype=complex))
    x = np.exp(1j * t)
    d = alpha - 1.0
    half = np.exp(0.5j * t)
    one_minus_x = -2j * np.sin(0.5 * t) * half
    one_plus_x = 2.0 * np.cos(0.5 * t) * half
    den = one_minus_x - d * x
    with np.errstate(divide="ignore", invalid="ignore"):
        to_one = d * one_plus_x / den                 # X - 1
        to_minus_one = (2.0 + d) * one_minus_x / den  # X + 1
    out = np.where(np.abs(to_one) <= np.abs(to_minus_one), 1.0 + to_one, to_minus_one - 1.0)
    return out[()] if out.ndim == 0 else out


def reduce_angle(theta: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``."""
    r = math.fmod(theta, TWO_PI)
    if r < 0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


def angle_distance(a: float, b: float) -> float:
    """Smallest absolute difference between two angles modulo ``2*pi``."""
    d = math.fmod(a - b, TWO_PI)
    if d < 0:
        d += TWO_PI
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class PhysicalParams:
    """Physical state of one mode family.

    ``energy == mass`` is rejected: at ``p = 0`` the two polarization
    branches coincide and most closed-form denominators vanish.
    """

    mass: float
    energy: float
    k: float
    a_slab: float = 1.0
    p_x: float = 0.0
    field: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass!r}", field="mass")
        if not self.energy > self.mass:
            raise DomainError(
                f"energy {self.energy!r} must exceed mass {self.mass!r}", field="energy")
        if not self.a_slab > 0:
            raise DomainError(f"a_slab must be positive, got {self.a_slab!r}", field="a_slab")
        if not self.field >= 0:
            raise DomainError(f"field must be non-negative, got {self.field!r}", field="field")
        for name in ("k", "p_x"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite", field=name)

    @classmethod
    def from_momentum(cls, mass: float, p: float, k: float, **kw) -> "PhysicalParams":
        """Build from ``p`` instead of the energy."""
        if not p > 0:
            raise DomainError(f"p must be positive, got {p!r}", field="p")
        return cls(mass=mass, energy=math.hypot(mass, p), k=k, **kw)

    @property
    def p(self) -> float:
        return longitudinal_p(self.energy, self.mass)

    @property
    def alpha(self) -> float:
        return (self.energy + self.p) / self.mass

    @property
    def beta(self) -> float:
        return 1.0 / self.alpha

    def replace(self, **changes) -> "PhysicalParams":
        from dataclasses import replace
        return replace(self, **changes)


class Family(enum.Enum):
    ONE = "OnePhase"
    TWO = "TwoPhase"
    THREE = "ThreePhase"
    FOUR = "FourPhase"


_FAMILY_SIZE = {Family.ONE: 8, Family.TWO: 4, Family.THREE: 6, Family.FOUR: 1}
_FAMILY_PARAMS = {Family.ONE: 1, Family.TWO: 2, Family.THREE: 3, Family.FOUR: 4}

# (independent-parameter index, sign) for the slots rho, mu, sigma, nu
_P = +1
_M = -1
_PATTERNS = {
    # one phase Delta
    (Family.ONE, 1): ((0, _P), (0, _P), (0, _P), (0, _P)),
    (Family.ONE, 2): ((0, _M), (0, _P), (0, _P), (0, _P)),
    (Family.ONE, 3): ((0, _P), (0, _M), (0, _P), (0, _P)),
    (Family.ONE, 4): ((0, _P), (0, _P), (0, _M), (0, _P)),
    (Family.ONE, 5): ((0, _P), (0, _P), (0, _P), (0, _M)),
    (Family.ONE, 6): ((0, _P), (0, _P), (0, _M), (0, _M)),
    (Family.ONE, 7): ((0, _P), (0, _M), (0, _P), (0, _M)),
    (Family.ONE, 8): ((0, _P), (0, _M), (0, _M), (0, _P)),
    # two phases (Delta, W)
    (Family.TWO, 1): ((0, _P), (0, _P), (1, _P), (1, _P)),
    (Family.TWO, 2): ((0, _P), (0, _P), (1, _P), (1, _M)),
    (Family.TWO, 3): ((0, _P), (0, _M), (1, _P), (1, _P)),
    (Family.TWO, 4): ((0, _P), (0, _M), (1, _P), (1, _M)),
    # three phases (F, G, H)
    (Family.THREE, 1): ((0, _P), (0, _P), (1, _P), (2, _P)),
    (Family.THREE, 2): ((1, _P), (2, _P), (0, _P), (0, _P)),
    (Family.THREE, 3): ((0, _P), (1, _P), (0, _P), (2, _P)),
    (Family.THREE, 4): ((0, _P), (1, _P), (0, _M), (2, _P)),
    (Family.THREE, 5): ((0, _P), (1, _P), (2, _P), (0, _P)),
    (Family.THREE, 6): ((0, _P), (1, _P), (2, _P), (0, _M)),
    (Family.FOUR, 1): ((0, _P), (1, _P), (2, _P), (3, _P)),
}

_SLOTS = ("rho", "mu", "sigma", "nu")


@dataclass(frozen=True, order=True)
class VariantId:
    """One of the 19 boundary-phase patterns.

    ``VariantId(Family.ONE, 3)`` is the third one-phase pattern; the general
    four-phase case is ``VariantId(Family.FOUR, 1)``.
    """

    family: Family
    index: int = 1

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(self.family))
        n = _FAMILY_SIZE[self.family]
        if not (isinstance(self.index, (int, np.integer)) and 1 <= self.index <= n):
            raise DomainError(
                f"{self.family.value} index must be in 1..{n}, got {self.index!r}",
                field="variant")

    def __str__(self):
        if self.family is Family.FOUR:
            return "FourPhase"
        return f"{self.family.value}({self.index})"

    __repr__ = __str__

    @property
    def n_params(self) -> int:
        return _FAMILY_PARAMS[self.family]

    @property
    def pattern(self):
        return _PATTERNS[(self.family, self.index)]

    @classmethod
    def parse(cls, text: str) -> "VariantId":
        """Parse ``"OnePhase(3)"``, ``"ThreePhase 6"``, ``"one:2"`` or ``"FourPhase"``."""
        s = str(text).strip()
        aliases = {"one": Family.ONE, "two": Family.TWO, "three": Family.THREE,
                   "four": Family.FOUR}
        for fam in Family:
            aliases[fam.value.lower()] = fam
        head = s.rstrip(")").replace("(", " ").replace(":", " ").split()
        if not head or head[0].lower() not in aliases:
            raise DomainError(f"unknown variant {text!r}", field="variant")
        fam = aliases[head[0].lower()]
        if len(head) == 1:
            if fam is not Family.FOUR:
                raise DomainError(f"variant {text!r} needs an index", field="variant")
            return cls(fam, 1)
        try:
            idx = int(head[1])
        except ValueError:
            raise DomainError(f"bad variant index in {text!r}", field="variant") from None
        return cls(fam, idx)


def all_variants() -> Iterator[VariantId]:
    """Iterate over all 19 variants in table order."""
    for fam in Family:
        for i in range(1, _FAMILY_SIZE[fam] + 1):
            yield VariantId(fam, i)


ONE_PHASE = tuple(VariantId(Family.ONE, i) for i in range(1, 9))
TWO_PHASE = tuple(VariantId(Family.TWO, i) for i in range(1, 5))
THREE_PHASE = tuple(VariantId(Family.THREE, i) for i in range(1, 7))
FOUR_PHASE = VariantId(Family.FOUR, 1)


@dataclass(frozen=True)
class PhaseConfig:
    """The boundary phases ``(rho, mu, sigma, nu)`` in radians.

    ``rho`` and ``sigma`` act on the wall ``z = -a``, ``mu`` and ``nu`` on
    ``z = +a``. Angles are stored reduced to ``[0, 2*pi)``; construction
    checks that they follow the pattern of ``variant``.
    """

    rho: float
    mu: float
    sigma: float
    nu: float
    variant: VariantId = FOUR_PHASE

    def __post_init__(self):
        for name in _SLOTS:
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise DomainError(f"phase {name} must be finite", field=name)
            object.__setattr__(self, name, reduce_angle(val))
        indep = self.independent_phases()
        expect = _expand(self.variant, indep)
        for name, want in zip(_SLOTS, expect):
            if angle_distance(getattr(self, name), want) > 1e-9:
                raise DomainError(
                    f"phases do not follow the {self.variant} pattern "
                    f"({name} = {getattr(self, name)!r}, expected {want!r})",
                    field=name)

    @classmethod
    def for_variant(cls, variant: VariantId, *angles: float) -> "PhaseConfig":
        """Build the phases of ``variant`` from its independent angles.

        ``PhaseConfig.for_variant(VariantId.parse("OnePhase(7)"), delta)``
        """
        if len(angles) != variant.n_params:
            raise DomainError(
                f"{variant} takes {variant.n_params} angle(s), got {len(angles)}",
                field="phases")
        return cls(*_expand(variant, angles), variant=variant)

    def independent_phases(self) -> tuple[float, ...]:
        """Recover the independent angles (Delta, W, F, G, H, ...) of the pattern."""
        vals = self.as_tuple()
        out: list[float | None] = [None] * self.variant.n_params
        for (idx, sign), v in zip(self.variant.pattern, vals):
            if out[idx] is None:
                out[idx] = reduce_angle(sign * v)
        return tuple(out)  # type: ignore[arg-type]

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.rho, self.mu, self.sigma, self.nu)

    def unit_values(self) -> np.ndarray:
        """``[x, y, v, w] = exp(1j * [rho, mu, sigma, nu])``."""
        return np.exp(1j * np.array(self.as_tuple()))

    @property
    def x(self) -> complex:
        return complex(np.exp(1j * self.rho))

    @property
    def y(self) -> complex:
        return complex(np.exp(1j * self.mu))

    @property
    def v(self) -> complex:
        return complex(np.exp(1j * self.sigma))

    @property
    def w(self) -> complex:
        return complex(np.exp(1j * self.nu))

    def mobius_images(self, alpha: float) -> np.ndarray:
        """``[X, Y, V, W]``: Möbius images of the four unit values."""
        return mobius_X(alpha, self.unit_values())


def _expand(variant: VariantId, angles: Sequence[float]) -> tuple[float, ...]:
    return tuple(sign * angles[idx] for idx, sign in variant.pattern)
