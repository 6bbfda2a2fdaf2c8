"""Landau-level profiles across the field.

In the gauge ``A = (-B y, 0, 0)`` the upper spinor component obeys the
oscillator equation::

    f'' + [B - (p_x + B y)**2 + lambda_sq] f = 0,

whose normalizable solutions are Hermite functions of
``t = (p_x + B y) / sqrt(B)`` with ``lambda_sq = 2 n B``.  The companion
profile ``g = (d/dy + p_x + B y) f`` is again a Hermite function, one level
lower.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_LEVEL = 64


@dataclass(frozen=True)
class TransverseMode:
    landau_index: int
    field: float
    p_x: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.landau_index, (int, np.integer)) and self.landau_index >= 0):
            raise DomainError(
                f"Landau index must be a non-negative integer, got {self.landau_index!r}",
                field="landau_index")
        if self.landau_index > MAX_LEVEL:
            raise DomainError(
                f"Landau index capped at {MAX_LEVEL}, got {self.landau_index}",
                field="landau_index")
        if not self.field > 0:
            raise DomainError(
                f"transverse profiles need a positive field, got {self.field!r}",
                field="field")

    @property
    def lambda_sq(self) -> float:
        return 2 * self.landau_index * self.field

    def scaled(self, y):
        """The oscillator variable ``t = (p_x + B y) / sqrt(B)``."""
        return (self.p_x + self.field * np.asarray(y, dtype=float)) / math.sqrt(self.field)


def hermite(n: int, t):
    """Physicists' Hermite polynomial ``H_n(t)`` by upward recurrence."""
    t = np.asarray(t, dtype=float)
    h_prev = np.ones_like(t)
    if n == 0:
        return h_prev
    h = 2.0 * t
    for m in range(1, n):
        h_prev, h = h, 2.0 * t * h - 2.0 * m * h_prev
    return h


def eval_f(mode: TransverseMode, y):
    """Unnormalized profile ``H_n(t) exp(-t**2 / 2)``."""
    t = mode.scaled(y)
    out = hermite(mode.landau_index, t) * np.exp(-0.5 * t * t)
    return out[()] if out.ndim == 0 else out


def eval_g(mode: TransverseMode, y):
    """``(d/dy + p_x + B y) f``, i.e. ``2 n sqrt(B) H_{n-1}(t) exp(-t**2 / 2)``."""
    n = mode.landau_index
    t = mode.scaled(y)
    if n == 0:
        out = np.zeros_like(t)
    else:
        out = 2.0 * n * math.sqrt(mode.field) * hermite(n - 1, t) * np.exp(-0.5 * t * t)
    return out[()] if out.ndim == 0 else out


def eval_f_normalized(mode: TransverseMode, y):
    """``f`` divided by ``sqrt(2**n n! sqrt(pi))``: unit norm in ``t``."""
    n = mode.landau_index
    norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return eval_f(mode, y) / norm


def energy_from_landau(mass: float, k: float, n: int, field: float) -> float:
    """Energy ``sqrt(M**2 + k**2 + 2 n B)`` of Landau level ``n``."""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}", field="mass")
    if field < 0:
        raise DomainError(f"field must be non-negative, got {field!r}", field="field")
    if n < 0:
        raise DomainError(f"Landau index must be non-negative, got {n!r}", field="landau_index")
    return math.sqrt(mass * mass + k * k + 2.0 * n * field)
