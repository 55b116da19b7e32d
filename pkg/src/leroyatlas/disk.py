"""Grid verification of geometric properties on the open unit disk.

Each ``verify_*`` function samples a polar grid, reduces the property's
metric to its extremal value with a deterministic tie-break (first in
``(radius, angle index)`` order) and reports a witness point when the
property fails.  Grid evaluation goes through
:func:`~leroyatlas.series.evaluate_many`; :func:`property_value` recomputes
the same metric at a single point through the scalar series path and is
what witnesses are re-checked with.

Metrics, with ``N`` the normalized function and ``F`` the plain one:

========================  ================================  =========
property                  metric                            passes if
========================  ================================  =========
``bound``                 ``|F(z) - 1|`` (max)              ``< 1 - 1/e``
``exp_subordination``     ``|Log F(z)|`` (max)              ``< 1``
``starlike``              ``Re z N'/N`` (min)               ``> order``
``convex``                ``Re 1 + z N''/N'`` (min)         ``> order``
``exp_starlike``          ``|Log z N'/N|`` (max)            ``< 1``
``exp_convex``            ``|Log 1 + z N''/N'|`` (max)      ``< 1``
``close_to_convex``       ``Re (1 - z) N'(z)`` (min)        ``> 0``
========================  ================================  =========
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from leroyatlas.criteria import Certificate
from leroyatlas.errors import (
    BranchGuardError,
    ConvergenceError,
    DomainError,
    GammaOverflowError,
    NormalizationError,
)
from leroyatlas.series import (
    LeRoyParams,
    evaluate,
    evaluate_derivative,
    evaluate_many,
    evaluate_normalized,
    theta,
)
from leroyatlas.special import CONSTANTS

__all__ = [
    "Agreement",
    "CONCLUSIONS",
    "GridSpec",
    "PROPERTIES",
    "Samples",
    "VerificationReport",
    "cross_validate",
    "estimate_radius",
    "property_value",
    "sample_property",
    "verify_bound",
    "verify_close_to_convex",
    "verify_convex",
    "verify_exp_convex",
    "verify_exp_starlike",
    "verify_exp_subordination",
    "verify_growth_inequality",
    "verify_starlike",
]

MAX_RADIUS = 0.999
HALF_RADIUS = 0.499
DEFAULT_RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.999)
DEFAULT_ANGLES = 720
RAY_DIRECTIONS = 16
RAY_SAMPLES = 100
STRICT_TOL = 1e-10
ZERO_GUARD = 1e-13
NORMALIZATION_TOL = 1e-9
GROWTH_TOL = 1e-9
CONTINUATION_STEP = 0.01
SERIES_TOL = 1e-13
GROWTH_SERIES_TOL = 1e-14

SCHWARZ_NOTE = (
    "exponential class read as q(0)=1 and sup|Log q| < 1 on the grid (Schwarz criterion for q < e^z)"
)


@dataclass(frozen=True)
class GridSpec:
    radii: tuple[float, ...] = DEFAULT_RADII
    angles_per_circle: int = DEFAULT_ANGLES
    include_radial_rays: bool = False

    def __post_init__(self) -> None:
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise DomainError("grid needs at least one radius")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise DomainError(f"grid radii must be strictly increasing, got {radii}")
        if radii[0] <= 0.0 or radii[-1] > MAX_RADIUS + 1e-12:
            raise DomainError(f"grid radii must lie in (0, {MAX_RADIUS}], got {radii}")
        if int(self.angles_per_circle) < 64:
            raise DomainError("angles_per_circle must be at least 64")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "angles_per_circle", int(self.angles_per_circle))

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    def scaled(self, radius_limit: float) -> GridSpec:
        """Rescale the radii so the outermost equals ``radius_limit``."""
        target = min(radius_limit, MAX_RADIUS)
        if target <= 0.0:
            raise DomainError(f"radius limit must be positive, got {radius_limit!r}")
        factor = target / self.r_max
        radii = tuple(r * factor for r in self.radii[:-1]) + (target,)
        return replace(self, radii=radii)

    def refined(self) -> GridSpec:
        return replace(self, angles_per_circle=2 * self.angles_per_circle)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample radii and angle indices, sorted by ``(radius, angle index)``."""
        n = self.angles_per_circle
        r = np.repeat(np.array(self.radii), n)
        j = np.tile(np.arange(n), len(self.radii))
        if self.include_radial_rays:
            ray_j = np.unique((np.arange(RAY_DIRECTIONS) * n) // RAY_DIRECTIONS)
            ray_r = np.linspace(self.r_max / RAY_SAMPLES, self.r_max, RAY_SAMPLES)
            ray_r = ray_r[~np.isin(np.round(ray_r, 12), np.round(self.radii, 12))]
            r = np.concatenate([r, np.repeat(ray_r, len(ray_j))])
            j = np.concatenate([j, np.tile(ray_j, len(ray_r))])
            order = np.lexsort((j, r))
            r, j = r[order], j[order]
        return r, j

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "angles": self.angles_per_circle}


def _z(grid: GridSpec, r: np.ndarray, j: np.ndarray) -> np.ndarray:
    return r * np.exp(2j * np.pi * j / grid.angles_per_circle)


@dataclass(frozen=True)
class VerificationReport:
    property: str
    radius_limit: float
    grid: GridSpec | None
    extremal_value: float
    witness: complex | None
    passed: bool
    notes: str = ""

    def to_dict(self) -> dict:
        w = None if self.witness is None else {"re": self.witness.real, "im": self.witness.imag}
        return {
            "property": self.property,
            "radius_limit": self.radius_limit,
            "grid": None if self.grid is None else self.grid.to_dict(),
            "extremal_value": self.extremal_value,
            "witness": w,
            "pass": self.passed,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        g = d["grid"]
        grid = None if g is None else GridSpec(tuple(g["radii"]), g["angles"])
        w = d["witness"]
        return cls(
            d["property"], d["radius_limit"], grid, d["extremal_value"],
            None if w is None else complex(w["re"], w["im"]), d["pass"], d["notes"],
        )


@dataclass(frozen=True)
class _Property:
    name: str
    sense: str  # "min" or "max"
    threshold: Callable[[float], float]
    uses_log: bool
    inner: str  # which analytic function the metric is built from


_ONE_MINUS_INV_E = lambda order: 1.0 - 1.0 / CONSTANTS.euler_number  # noqa: E731

PROPERTIES: dict[str, _Property] = {
    "bound": _Property("bound_1_minus_1_over_e", "max", _ONE_MINUS_INV_E, False, "F"),
    "exp_subordination": _Property("exp_subordination", "max", lambda order: 1.0, True, "F"),
    "starlike": _Property("starlike", "min", lambda order: order, False, "q_star"),
    "convex": _Property("convex", "min", lambda order: order, False, "q_cvx"),
    "exp_starlike": _Property("exp_starlike", "max", lambda order: 1.0, True, "q_star"),
    "exp_convex": _Property("exp_convex", "max", lambda order: 1.0, True, "q_cvx"),
    "close_to_convex": _Property("close_to_convex", "min", lambda order: 0.0, False, "ctc"),
}


def _property_label(key: str, order: float) -> str:
    name = PROPERTIES[key].name
    if key in ("starlike", "convex") and order > 0.0:
        return f"{name}_order({order:g})"
    return name


# -- vectorized inner functions -------------------------------------------------


def _inner_many(params: LeRoyParams, inner: str, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values of the inner analytic function and a validity mask."""
    if inner == "F":
        f, _ = evaluate_many(params, z, SERIES_TOL)
        return f, np.ones(z.shape, dtype=bool)
    n1, _ = evaluate_many(params, z, SERIES_TOL, normalized=True, order=1)
    if inner == "ctc":
        return (1.0 - z) * n1, np.ones(z.shape, dtype=bool)
    if inner == "q_star":
        n0, _ = evaluate_many(params, z, SERIES_TOL, normalized=True, order=0)
        ok = np.abs(n0) >= ZERO_GUARD
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(ok, z * n1 / np.where(ok, n0, 1.0), np.nan), ok
    n2, _ = evaluate_many(params, z, SERIES_TOL, normalized=True, order=2)
    ok = np.abs(n1) >= ZERO_GUARD
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ok, 1.0 + z * n2 / np.where(ok, n1, 1.0), np.nan), ok


def _inner_scalar(params: LeRoyParams, inner: str, z: complex) -> complex | None:
    z = complex(z)
    if inner == "F":
        return evaluate(params, z, SERIES_TOL).value
    n1 = evaluate_derivative(params, z, 1, SERIES_TOL).value
    if inner == "ctc":
        return (1.0 - z) * n1
    if inner == "q_star":
        if z == 0:
            return 1.0 + 0j
        n0 = evaluate_normalized(params, z, SERIES_TOL).value
        return None if abs(n0) < ZERO_GUARD else z * n1 / n0
    if abs(n1) < ZERO_GUARD:
        return None
    return 1.0 + z * evaluate_derivative(params, z, 2, SERIES_TOL).value / n1


def _continued_log_many(params: LeRoyParams, inner: str, r: np.ndarray, angle: np.ndarray) -> np.ndarray:
    """Logarithm continued radially from ``z = 0`` (where the inner function is 1)."""
    out = np.empty(r.shape, dtype=complex)
    targets = np.unique(r)
    nodes = np.unique(np.concatenate([np.arange(1, int(targets[-1] / CONTINUATION_STEP) + 1) * CONTINUATION_STEP, targets]))
    nodes = nodes[nodes <= targets[-1]]
    for a in np.unique(angle):
        vals, ok = _inner_many(params, inner, nodes * np.exp(1j * a))
        if not ok.all() or np.any(np.abs(vals) < ZERO_GUARD):
            raise BranchGuardError(f"{inner} vanishes on the ray at angle {a:.6f}; log continuation undefined")
        ratio = vals / np.concatenate([[1.0 + 0j], vals[:-1]])
        logs = np.cumsum(np.log(ratio))
        sel = angle == a
        out[sel] = logs[np.searchsorted(nodes, r[sel])]
    return out


def _continued_log_scalar(params: LeRoyParams, inner: str, z: complex) -> complex:
    r, a = abs(z), cmath.phase(z)
    steps = max(1, math.ceil(r / CONTINUATION_STEP - 1e-9))
    acc, prev = 0j, 1.0 + 0j
    for s in range(1, steps + 1):
        rr = min(r, s * CONTINUATION_STEP)
        v = _inner_scalar(params, inner, cmath.rect(rr, a))
        if v is None or abs(v) < ZERO_GUARD:
            raise BranchGuardError(f"{inner} vanishes on the ray to {z}")
        acc += cmath.log(v / prev)
        prev = v
    return acc


def property_value(params: LeRoyParams, key: str, z: complex, order: float = 0.0) -> float:
    """Metric of ``key`` at one point via the scalar series path.

    Vanishing denominators return the violating infinity (``-inf`` for
    minimized metrics).
    """
    prop = PROPERTIES[key]
    if prop.uses_log:
        try:
            if key == "exp_subordination":
                return abs(_continued_log_scalar(params, "F", z))
            return abs(_continued_log_scalar(params, prop.inner, z))
        except BranchGuardError:
            return math.inf
    v = _inner_scalar(params, prop.inner, z)
    if v is None:
        return -math.inf if prop.sense == "min" else math.inf
    if key == "bound":
        return abs(v - 1.0)
    return v.real


# -- sampling and reduction ------------------------------------------------------


@dataclass
class Samples:
    """Metric values on a grid, ordered by ``(radius, angle index)``."""

    grid: GridSpec
    radius: np.ndarray
    angle_index: np.ndarray
    z: np.ndarray
    values: np.ndarray
    valid: np.ndarray
    notes: list[str] = field(default_factory=list)

    @property
    def angle(self) -> np.ndarray:
        return 2.0 * np.pi * self.angle_index / self.grid.angles_per_circle


def sample_property(params: LeRoyParams, key: str, grid: GridSpec) -> Samples:
    prop = PROPERTIES[key]
    r, j = grid.points()
    z = _z(grid, r, j)
    inner, valid = _inner_many(params, prop.inner, z)
    notes: list[str] = []
    if key == "bound":
        values = np.abs(inner - 1.0)
    elif prop.uses_log:
        if valid.all() and np.all(inner.real > 0.0):
            values = np.abs(np.log(inner))
        else:
            notes.append("Re <= 0 on the grid: principal log unsafe, used radial path continuation")
            angle = 2.0 * np.pi * j / grid.angles_per_circle
            values = np.abs(_continued_log_many(params, prop.inner, r, angle))
    else:
        values = inner.real
    values = np.where(valid, values, -np.inf if prop.sense == "min" else np.inf)
    return Samples(grid, r, j, z, values, valid, notes)


def _reduce(samples: Samples, key: str, order: float, radius_limit: float, notes: list[str]) -> VerificationReport:
    prop = PROPERTIES[key]
    threshold = prop.threshold(order)
    if prop.sense == "min":
        idx = int(np.argmin(samples.values))
        ext = float(samples.values[idx])
        ok = ext > threshold - STRICT_TOL
        boundary = ok and ext <= threshold
    else:
        idx = int(np.argmax(samples.values))
        ext = float(samples.values[idx])
        ok = ext < threshold + STRICT_TOL
        boundary = ok and ext >= threshold
    notes = list(notes) + samples.notes
    if not samples.valid.all():
        notes.append("denominator vanishes at a grid point")
    if boundary:
        notes.append("boundary-grade pass")
    if samples.grid.include_radial_rays:
        notes.append(f"radial rays: {RAY_DIRECTIONS} directions x {RAY_SAMPLES} radii")
    witness = None if ok else complex(samples.z[idx])
    return VerificationReport(
        _property_label(key, order), radius_limit, samples.grid, ext, witness, bool(ok), "; ".join(notes)
    )


def _verify(params: LeRoyParams, key: str, grid: GridSpec, order: float, radius_limit: float,
            notes: list[str] | None = None) -> VerificationReport:
    return _reduce(sample_property(params, key, grid), key, order, radius_limit, notes or [])


def _require_unit_value(params: LeRoyParams) -> None:
    f0 = math.exp(-params.log_norm)
    if abs(f0 - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"F(0) = prod Gamma(beta_i)^-gamma_i = {f0:.17g}, not 1")


def _check_order(order: float) -> None:
    if not 0.0 <= order < 1.0:
        raise DomainError(f"order must lie in [0, 1), got {order!r}")


def _check_radius(radius_limit: float) -> None:
    if not 0.0 < radius_limit < 1.0:
        raise DomainError(f"radius_limit must lie in (0, 1), got {radius_limit!r}")


def verify_bound(params: LeRoyParams, grid: GridSpec | None = None) -> VerificationReport:
    """``sup |F(z) - 1| < 1 - 1/e`` on the grid (needs ``F(0) = 1``)."""
    grid = grid or GridSpec()
    _require_unit_value(params)
    return _verify(params, "bound", grid, 0.0, grid.r_max)


def verify_exp_subordination(params: LeRoyParams, grid: GridSpec | None = None) -> VerificationReport:
    """``F < e^z`` through the Schwarz function ``w = Log F``: pass iff ``sup |w| < 1``."""
    grid = grid or GridSpec()
    _require_unit_value(params)
    return _verify(params, "exp_subordination", grid, 0.0, grid.r_max)


def verify_starlike(params: LeRoyParams, radius_limit: float = MAX_RADIUS, order: float = 0.0,
                    grid: GridSpec | None = None) -> VerificationReport:
    _check_radius(radius_limit)
    _check_order(order)
    g = (grid or GridSpec()).scaled(radius_limit)
    return _verify(params, "starlike", g, order, radius_limit)


def verify_convex(params: LeRoyParams, radius_limit: float = MAX_RADIUS, order: float = 0.0,
                  grid: GridSpec | None = None) -> VerificationReport:
    _check_radius(radius_limit)
    _check_order(order)
    g = (grid or GridSpec()).scaled(radius_limit)
    return _verify(params, "convex", g, order, radius_limit)


def verify_exp_starlike(params: LeRoyParams, radius_limit: float = MAX_RADIUS,
                        grid: GridSpec | None = None) -> VerificationReport:
    """``z N'/N`` subordinate to ``e^z`` on the sampled disk."""
    _check_radius(radius_limit)
    g = (grid or GridSpec()).scaled(radius_limit)
    return _verify(params, "exp_starlike", g, 0.0, radius_limit, [SCHWARZ_NOTE])


def verify_exp_convex(params: LeRoyParams, radius_limit: float = MAX_RADIUS,
                      grid: GridSpec | None = None) -> VerificationReport:
    """``1 + z N''/N'`` subordinate to ``e^z`` on the sampled disk."""
    _check_radius(radius_limit)
    g = (grid or GridSpec()).scaled(radius_limit)
    return _verify(params, "exp_convex", g, 0.0, radius_limit, [SCHWARZ_NOTE])


def verify_close_to_convex(params: LeRoyParams, radius_limit: float = MAX_RADIUS,
                           grid: GridSpec | None = None) -> VerificationReport:
    """``Re N'(z) / g'(z) > 0`` with ``g(z) = -log(1 - z)``."""
    _check_radius(radius_limit)
    g = (grid or GridSpec()).scaled(radius_limit)
    return _verify(params, "close_to_convex", g, 0.0, radius_limit, ["with respect to -log(1-z)"])


def growth_hypothesis_met(params: LeRoyParams) -> bool:
    return all(min(a, g) >= 1.0 for a, _, g in params.triples) and any(
        a + b >= 2.0 for a, b, _ in params.triples
    )


def verify_growth_inequality(params: LeRoyParams, x_max: float = 5.0, points: int = 100) -> VerificationReport:
    """``N(x) <= x + x theta (e^x - 1)`` on ``x = x_max * j / points``, ``j = 1..points``.

    ``extremal_value`` is the largest excess of the left side over the right.
    """
    if not x_max > 0.0:
        raise DomainError(f"x_max must be positive, got {x_max!r}")
    if points < 10:
        raise DomainError(f"points must be at least 10, got {points!r}")
    x = x_max * np.arange(1, points + 1) / points
    notes = [] if growth_hypothesis_met(params) else ["hypothesis unmet, result informational"]
    try:
        lhs = evaluate_many(params, x.astype(complex), GROWTH_SERIES_TOL, normalized=True)[0].real
    except (ConvergenceError, GammaOverflowError):
        lhs = np.full(x.shape, np.nan)
        for i, xi in enumerate(x):
            try:
                lhs[i] = evaluate_normalized(params, complex(xi), GROWTH_SERIES_TOL).value.real
            except (ConvergenceError, GammaOverflowError):
                break
        done = int(np.count_nonzero(~np.isnan(lhs)))
        notes.append(f"series did not converge for x >= {x[done]:.6g}; those points skipped")
        x, lhs = x[:done], lhs[:done]
    if x.size == 0:
        return VerificationReport("growth_inequality", float(x_max), None, math.nan, None, False, "; ".join(notes))
    rhs = x + x * theta(params) * np.expm1(x)
    excess = lhs - rhs
    idx = int(np.argmax(excess))
    ext = float(excess[idx])
    ok = ext <= GROWTH_TOL
    return VerificationReport(
        "growth_inequality", float(x_max), None, ext, None if ok else complex(x[idx]), bool(ok), "; ".join(notes)
    )


# -- binding theorems to their conclusions ------------------------------------------

CONCLUSIONS: dict[str, tuple[str, float]] = {
    "thm-3-1": ("exp_subordination", MAX_RADIUS),
    "thm-3-2": ("exp_subordination", MAX_RADIUS),
    "thm-4-1-star": ("exp_starlike", MAX_RADIUS),
    "thm-4-1-cvx": ("exp_convex", MAX_RADIUS),
    "thm-4-2-star": ("exp_starlike", MAX_RADIUS),
    "thm-4-2-cvx": ("exp_convex", HALF_RADIUS),
    "thm-5-1-star": ("starlike", MAX_RADIUS),
    "thm-5-1-cvx": ("convex", HALF_RADIUS),
    "thm-5-3a": ("starlike", HALF_RADIUS),
    "thm-5-3b": ("convex", HALF_RADIUS),
    "ozaki": ("close_to_convex", MAX_RADIUS),
}


@dataclass(frozen=True)
class Agreement:
    certificate: Certificate
    report: VerificationReport
    agree: bool

    def to_dict(self) -> dict:
        return {
            "certificate": self.certificate.to_dict(),
            "report": self.report.to_dict(),
            "agree": self.agree,
        }


def verify_conclusion(theorem_id: str, params: LeRoyParams, grid: GridSpec | None = None) -> VerificationReport:
    key, radius = CONCLUSIONS[theorem_id]
    grid = (grid or GridSpec()).scaled(radius)
    if key == "exp_subordination":
        try:
            return verify_exp_subordination(params, grid)
        except NormalizationError as exc:
            f0 = math.exp(-params.log_norm)
            return VerificationReport(
                PROPERTIES[key].name, radius, grid, abs(math.log(f0)), 0j, False,
                f"{exc}; subordination to e^z needs F(0) = 1",
            )
    if key == "starlike":
        return verify_starlike(params, radius, 0.0, grid)
    if key == "convex":
        return verify_convex(params, radius, 0.0, grid)
    if key == "exp_starlike":
        return verify_exp_starlike(params, radius, grid)
    if key == "exp_convex":
        return verify_exp_convex(params, radius, grid)
    return verify_close_to_convex(params, radius, grid)


def cross_validate(certificate: Certificate, grid: GridSpec | None = None) -> Agreement:
    """Run the conclusion's verifier; disagreement means hypothesis holds and conclusion fails."""
    report = verify_conclusion(certificate.theorem_id, certificate.params, grid)
    agree = (not certificate.satisfied) or report.passed
    if not agree:
        note = f"DISAGREEMENT: {certificate.theorem_id} hypotheses hold but {report.property} fails"
        report = replace(report, notes="; ".join(filter(None, [report.notes, note])))
    return Agreement(certificate, report, agree)


def estimate_radius(params: LeRoyParams, key: str = "starlike", order: float = 0.0,
                    grid: GridSpec | None = None, resolution: float = 1e-4) -> float:
    """Largest sampled radius in ``(0, 0.999]`` where ``key`` verifies, by bisection.

    Returns ``0.0`` when the property already fails at radius ``1e-3``.
    """
    if key not in ("starlike", "convex"):
        raise DomainError(f"radius estimation supports starlike and convex, got {key!r}")
    verify = verify_starlike if key == "starlike" else verify_convex
    lo, hi = 1e-3, MAX_RADIUS
    if verify(params, hi, order, grid).passed:
        return hi
    if not verify(params, lo, order, grid).passed:
        return 0.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if verify(params, mid, order, grid).passed:
            lo = mid
        else:
            hi = mid
    return lo
