"""Quantization of the longitudinal momentum k.

A unit-modulus root turns into a transcendental condition on ``k``::

    exp(2 i k a_slab) = K(k)        (K-kind roots, m = 2)
    exp(4 i k a_slab) = Lambda(k)   (Lambda-kind roots, m = 4)

Writing ``root(k) = exp(i theta(k))`` with ``theta`` unwrapped along the
window, solutions are the zeros of ``m a_slab k - theta(k) - 2 pi n_b`` for
integer branch indices ``n_b``.  They are bracketed on a grid and refined by
bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .catalog import RootKind, closed_form_roots, is_k_kind
from .core import Family, PhaseConfig, PhysicalParams, VariantId
from .errors import DiracSlabError, DomainError, SingularConfigurationError

RESIDUAL_TOL = 1e-9
MIN_GRID = 64
MAX_REFINE = 40
DISTINCT_K = 1e-10
K0_OFFSET = 1e-9  # relative start of a window opened at k = 0

# patterns whose roots are constants: usable even where the closed forms are not
_CONSTANT_ROOTS = {
    (Family.ONE, 1): (RootKind.K, (1.0, -1.0)),
    (Family.TWO, 1): (RootKind.K, (1.0, -1.0)),
    (Family.ONE, 6): (RootKind.LAMBDA, (1.0,)),
}


@dataclass(frozen=True)
class FixedEpsilon:
    """Energy held fixed while ``k`` varies; ``p`` is then a constant."""
    energy: float


@dataclass(frozen=True)
class LandauLevel:
    """Landau level ``n`` held fixed; ``p(k) = sqrt(k**2 + 2 n B)``."""
    n: int


@dataclass(frozen=True)
class QuantizationProblem:
    """Everything needed to turn one catalog root into allowed ``k`` values.

    The window is ``(k_min, k_max]``; ``k = 0`` itself is never a solution
    (several closed forms degenerate there) and ``k_min = 0`` starts the grid
    just above it.  ``root_selector`` indexes the distinct entries of the variant's
    :class:`~diracslab.catalog.RootSet` at ``k_min``; ``None`` tracks all of
    them and merges the results.
    """

    variant: VariantId
    phases: PhaseConfig
    mass: float
    field: float = 0.0
    parameterization: FixedEpsilon | LandauLevel = LandauLevel(1)
    a_slab: float = 1.0
    k_window: tuple[float, float] = (0.05, 10.0)
    root_selector: int | None = None

    def __post_init__(self):
        k_min, k_max = (float(v) for v in self.k_window)
        object.__setattr__(self, "k_window", (k_min, k_max))
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass!r}", field="mass")
        if not self.field >= 0:
            raise DomainError(f"field must be non-negative, got {self.field!r}", field="field")
        if not self.a_slab > 0:
            raise DomainError(f"a_slab must be positive, got {self.a_slab!r}", field="a_slab")
        if not (0 <= k_min < k_max and math.isfinite(k_max)):
            raise DomainError(
                f"k window must satisfy 0 <= k_min < k_max, got {self.k_window!r}",
                field="k_window")
        par = self.parameterization
        if isinstance(par, FixedEpsilon):
            if not par.energy > self.mass:
                raise DomainError(
                    f"energy {par.energy!r} must exceed mass {self.mass!r}", field="energy")
            p = math.sqrt((par.energy - self.mass) * (par.energy + self.mass))
            if k_max > p * (1 + 1e-15):
                raise DomainError(
                    f"k_max {k_max!r} exceeds p = {p!r} at fixed energy", field="k_window")
        elif isinstance(par, LandauLevel):
            if not (isinstance(par.n, (int, np.integer)) and par.n >= 0):
                raise DomainError(f"Landau index must be a non-negative integer, got {par.n!r}",
                                  field="landau_index")
            if par.n > 0 and not self.field > 0:
                raise DomainError("Landau levels n > 0 need a positive field", field="field")
        else:
            raise DomainError(f"unknown parameterization {par!r}", field="parameterization")
        if self.phases.variant != self.variant:
            object.__setattr__(
                self, "phases", PhaseConfig(*self.phases.as_tuple(), variant=self.variant))

    @property
    def m(self) -> int:
        """Multiplier of ``k a_slab`` in the exponent: 2 for K, 4 for Lambda."""
        return 2 if is_k_kind(self.variant) else 4

    def params_at(self, k: float) -> PhysicalParams:
        par = self.parameterization
        if isinstance(par, FixedEpsilon):
            energy = par.energy
        else:
            energy = math.sqrt(self.mass ** 2 + k * k + 2.0 * par.n * self.field)
        return PhysicalParams(self.mass, energy, k, a_slab=self.a_slab, field=self.field)

    def replace(self, **changes) -> "QuantizationProblem":
        from dataclasses import replace
        return replace(self, **changes)


@dataclass(frozen=True)
class SpectrumRow:
    branch: int
    root_index: int
    k: float
    epsilon: float
    root_value: complex
    residual: float


@dataclass(frozen=True)
class SpectrumTable:
    """Allowed ``k`` in ascending order, with the points cut out of the window.

    ``excluded`` holds ``(k, reason)`` pairs where the root could not be
    evaluated; ``error`` is set when the whole computation failed (sweeps).
    """

    rows: tuple[SpectrumRow, ...]
    problem: QuantizationProblem | None = None
    excluded: tuple[tuple[float, str], ...] = ()
    rejected: tuple[float, ...] = ()
    error: str | None = None

    def __len__(self):
        return len(self.rows)

    def ks(self) -> np.ndarray:
        return np.array([r.k for r in self.rows], dtype=float)

    def branches(self) -> np.ndarray:
        return np.array([r.branch for r in self.rows], dtype=int)


# ----------------------------------------------------------------------------
# root evaluation along k

def _entries_at(problem: QuantizationProblem, k: float) -> np.ndarray:
    """Distinct root values of the problem's variant at momentum ``k``."""
    const = _CONSTANT_ROOTS.get((problem.variant.family, problem.variant.index))
    if const is not None:
        return np.array(const[1], dtype=complex)
    params = problem.params_at(k)
    if abs(params.k - params.p) <= 1e-14 * params.p:
        raise SingularConfigurationError(
            "k = p: closed forms undefined (lowest Landau level or k at the window edge)",
            expression="k - p")
    rs = closed_form_roots(problem.variant, params, problem.phases)
    vals = np.array([e.value for e in rs.entries], dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise SingularConfigurationError("non-finite root", expression="root")
    return vals


def n_roots(problem: QuantizationProblem) -> int:
    """Number of distinct catalog entries tracked for the problem."""
    const = _CONSTANT_ROOTS.get((problem.variant.family, problem.variant.index))
    if const is not None:
        return len(const[1])
    if (problem.variant.family, problem.variant.index) == (Family.ONE, 8):
        return 1  # a single double Lambda root
    return 2 if not is_k_kind(problem.variant) else 4


class _Tracker:
    """Follows one root entry along k by nearest-branch continuation."""

    def __init__(self, problem: QuantizationProblem, index: int):
        self.problem = problem
        self.index = index

    def start(self, k: float) -> complex:
        vals = _entries_at(self.problem, k)
        if self.index >= len(vals):
            raise DomainError(
                f"root_selector {self.index} out of range for {self.problem.variant} "
                f"({len(vals)} entries)", field="root_selector")
        return complex(vals[self.index])

    def step(self, k: float, previous: complex) -> complex:
        vals = _entries_at(self.problem, k)
        return complex(vals[int(np.argmin(np.abs(vals - previous)))])


def _wrap(d: float) -> float:
    """Map an angle difference into ``(-pi, pi]``."""
    return d - 2 * math.pi * math.floor((d + math.pi) / (2 * math.pi))


@dataclass
class _Sample:
    k: float
    root: complex
    theta: float


@dataclass
class _Segment:
    samples: list = dc_field(default_factory=list)


def _sample_segments(problem, tracker, grid, excluded):
    """Evaluate the tracked root on the grid, splitting at singular points.

    Adjacent samples whose arguments differ by more than pi/2 get bisected
    until they do not; a gap that will not close marks a singular point.
    """
    segments: list[_Segment] = []
    current: _Segment | None = None

    def singular(k, reason):
        nonlocal current
        excluded.append((float(k), reason))
        current = None

    for k in grid:
        try:
            if current is None:
                r = tracker.start(k) if not segments else _restart(tracker, segments, k)
                current = _Segment([_Sample(k, r, math.atan2(r.imag, r.real))])
                segments.append(current)
                continue
            prev = current.samples[-1]
            new = _refine_towards(tracker, prev, k, current)
            if new is None:
                singular(k, "root jumps faster than the grid can follow")
                continue
        except (SingularConfigurationError, FloatingPointError, ZeroDivisionError) as exc:
            singular(k, str(exc))
    return [s for s in segments if len(s.samples) >= 2]


def _restart(tracker, segments, k):
    # continue the same label across a cut: nearest to the last value seen
    last = segments[-1].samples[-1].root
    return tracker.step(k, last)


def _refine_towards(tracker, prev: _Sample, k: float, seg: _Segment):
    """Append samples from ``prev`` up to ``k`` with argument jumps <= pi/2."""
    stack = [k]
    left = prev
    depth = 0
    while stack:
        target = stack[-1]
        r = tracker.step(target, left.root)
        d = _wrap(math.atan2(r.imag, r.real) - left.theta)
        if abs(d) > math.pi / 2:
            depth += 1
            if depth > MAX_REFINE or target - left.k < 1e-14 * max(1.0, target):
                return None
            stack.append(0.5 * (left.k + target))
            continue
        stack.pop()
        left = _Sample(target, r, left.theta + d)
        seg.samples.append(left)
    return left


def _theta_between(tracker, left: _Sample, k: float):
    r = tracker.step(k, left.root)
    return r, left.theta + _wrap(math.atan2(r.imag, r.real) - left.theta)


def _bisect(problem, tracker, left: _Sample, right: _Sample, level: float, tol: float):
    """Zero of ``m a k - theta(k) - level`` between two samples."""
    ma = problem.m * problem.a_slab
    lo, hi = left, right
    g_lo = ma * lo.k - lo.theta - level
    for _ in range(200):
        if hi.k - lo.k <= tol:
            break
        km = 0.5 * (lo.k + hi.k)
        if km <= lo.k or km >= hi.k:
            break
        r, th = _theta_between(tracker, lo, km)
        mid = _Sample(km, r, th)
        g_mid = ma * km - th - level
        if g_mid == 0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    km = 0.5 * (lo.k + hi.k)
    r, th = _theta_between(tracker, lo, km)
    return _Sample(km, r, th)


def _track_one(problem: QuantizationProblem, index: int, grid_points: int):
    k_min, k_max = problem.k_window
    excluded: list = []
    if k_min == 0.0:
        excluded.append((0.0, "k = 0 excluded"))
        k_min = K0_OFFSET * k_max
    grid = np.linspace(k_min, k_max, grid_points)
    tracker = _Tracker(problem, index)
    segments = _sample_segments(problem, tracker, grid, excluded)
    tol = 1e-12 * k_max
    ma = problem.m * problem.a_slab
    two_pi = 2 * math.pi
    found, rejected = [], []
    for seg in segments:
        s = seg.samples
        F = np.array([ma * q.k - q.theta for q in s])
        for i in range(len(s) - 1):
            f0, f1 = F[i], F[i + 1]
            lo_f, hi_f = min(f0, f1), max(f0, f1)
            n_lo = math.ceil(lo_f / two_pi)
            n_hi = math.floor(hi_f / two_pi)
            for n in range(n_lo, n_hi + 1):
                level = two_pi * n
                # a zero sitting on a shared sample shows up twice; merged later
                if f0 == level:
                    hit = s[i]
                elif f1 == level:
                    hit = s[i + 1]
                else:
                    hit = _bisect(problem, tracker, s[i], s[i + 1], level, tol)
                resid = abs(np.exp(1j * ma * hit.k) - hit.root)
                if resid < RESIDUAL_TOL:
                    found.append((n, hit))
                else:
                    rejected.append(hit.k)
    return found, excluded, rejected


def allowed_k(problem: QuantizationProblem, grid_points: int = 256) -> SpectrumTable:
    """Solve the quantization condition for every ``k`` in the window.

    Parameters
    ----------
    problem : QuantizationProblem
    grid_points : int
        Initial grid size (at least 64); refined locally where the root's
        argument moves fast.

    Returns
    -------
    SpectrumTable
        Rows sorted by ``k``.  Points where the root is singular are cut out
        of the window and listed in ``excluded``.  An empty table is a valid
        answer.
    """
    if grid_points < MIN_GRID:
        raise DomainError(f"grid_points must be at least {MIN_GRID}, got {grid_points}",
                          field="grid_points")
    if problem.root_selector is None:
        indices = range(n_roots(problem))
    else:
        indices = [int(problem.root_selector)]
    rows, excluded, rejected = [], [], []
    for idx in indices:
        found, exc, rej = _track_one(problem, idx, grid_points)
        excluded.extend(exc)
        rejected.extend(rej)
        for n, s in found:
            eps = problem.params_at(s.k).energy
            resid = float(abs(np.exp(1j * problem.m * problem.a_slab * s.k) - s.root))
            rows.append(SpectrumRow(n, idx, float(s.k), float(eps), complex(s.root), resid))
    rows.sort(key=lambda r: (r.k, r.root_index))
    merged: list[SpectrumRow] = []
    for r in rows:
        # coincident roots (e.g. Lambda1 = Lambda2) give the same k twice
        if merged and abs(r.k - merged[-1].k) <= DISTINCT_K * max(1.0, r.k):
            continue
        merged.append(r)
    excluded = sorted(set(excluded))
    return SpectrumTable(tuple(merged), problem, tuple(excluded), tuple(sorted(rejected)))


def phase_count_estimate(problem: QuantizationProblem) -> float:
    """``m a_slab (k_max - k_min) / (2 pi)``: expected count for a slow root."""
    k_min, k_max = problem.k_window
    return problem.m * problem.a_slab * (k_max - k_min) / (2 * math.pi)


def spectrum_sweep(problem: QuantizationProblem, parameter: str,
                   values: Sequence[float], grid_points: int = 256) -> list[SpectrumTable]:
    """Recompute the spectrum for each value of ``field`` or ``a_slab``.

    A failure at one point is recorded in that table's ``error`` and does
    not stop the sweep.  Output order follows ``values``.
    """
    if parameter not in ("field", "a_slab"):
        raise DomainError(f"can sweep 'field' or 'a_slab', not {parameter!r}",
                          field="parameter")
    out = []
    for v in values:
        try:
            prob = problem.replace(**{parameter: float(v)})
            out.append(allowed_k(prob, grid_points))
        except DiracSlabError as exc:
            out.append(SpectrumTable((), None, error=f"{type(exc).__name__}: {exc}"))
    return out
