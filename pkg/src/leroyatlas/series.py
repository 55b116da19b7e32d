"""Le Roy type Mittag-Leffler series.

The multi-index function with triples ``(alpha_i, beta_i, gamma_i)`` is

    F(z) = sum_{k>=0} z**k / prod_i Gamma(alpha_i k + beta_i)**gamma_i

and its normalization is ``N(z) = z * prod_i Gamma(beta_i)**gamma_i * F(z)``,
so that ``N(z) = z + sum_{k>=2} A_k z**k``.  A single triple gives the
three-parameter function.

All coefficients are computed in log space. Because ``log Gamma`` is
convex, the ratio of consecutive terms of every series here is
nonincreasing in the index; once a ratio drops below 1/2 the remaining
tail is bounded by the last term, which is what the stopping rule relies on.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from leroyatlas.errors import ConvergenceError, DomainError, GammaOverflowError
from leroyatlas.special import log_gamma

__all__ = [
    "CoefficientKind",
    "LeRoyParams",
    "MonotonicityReport",
    "SeriesValue",
    "coefficient",
    "coefficient_monotone",
    "evaluate",
    "evaluate_derivative",
    "evaluate_many",
    "evaluate_normalized",
    "log_coefficient",
    "power_coefficients",
    "theta",
]

MAX_TERMS = 10_000
MIN_TOL = 1e-15
MAX_TOL = 1e-2
_STOP_RUN = 3
_LOG_HALF = -math.log(2.0)
_LOG_DBL_MAX = 709.0
_MONOTONE_RTOL = 1e-12

Triple = tuple[float, float, float]


@dataclass(frozen=True)
class LeRoyParams:
    """Parameter triples ``(alpha_i, beta_i, gamma_i)``, all positive."""

    triples: tuple[Triple, ...]

    def __post_init__(self) -> None:
        triples = tuple(tuple(float(v) for v in t) for t in self.triples)
        if not triples:
            raise DomainError("LeRoyParams needs at least one triple")
        for t in triples:
            if len(t) != 3:
                raise DomainError(f"triple must have three entries, got {t!r}")
            if not all(math.isfinite(v) and v > 0.0 for v in t):
                raise DomainError(f"alpha, beta, gamma must be positive, got {t!r}")
        object.__setattr__(self, "triples", triples)

    @classmethod
    def single(cls, alpha: float, beta: float, gamma: float) -> LeRoyParams:
        return cls(((alpha, beta, gamma),))

    @classmethod
    def of(cls, *triples: Sequence[float]) -> LeRoyParams:
        return cls(tuple(tuple(t) for t in triples))  # type: ignore[arg-type]

    @classmethod
    def parse(cls, text: str | Iterable[str]) -> LeRoyParams:
        """Parse ``"a,b,c"`` or ``"a,b,c;a,b,c"`` (or a list of such strings)."""
        chunks = [text] if isinstance(text, str) else list(text)
        triples = []
        for chunk in chunks:
            for part in chunk.split(";"):
                part = part.strip()
                if not part:
                    continue
                try:
                    values = tuple(float(v) for v in part.split(","))
                except ValueError as exc:
                    raise DomainError(f"cannot parse triple {part!r}") from exc
                triples.append(values)
        return cls(tuple(triples))

    @property
    def n(self) -> int:
        return len(self.triples)

    @property
    def log_norm(self) -> float:
        """``log prod_i Gamma(beta_i)**gamma_i``."""
        return math.fsum(g * log_gamma(b) for _, b, g in self.triples)

    def log_gamma_product(self, k: float) -> float:
        """``log prod_i Gamma(alpha_i k + beta_i)**gamma_i``."""
        return math.fsum(g * log_gamma(a * k + b) for a, b, g in self.triples)

    def to_list(self) -> list[list[float]]:
        return [list(t) for t in self.triples]

    def __str__(self) -> str:
        return ";".join(",".join(f"{v:g}" for v in t) for t in self.triples)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_bound: float
    terms_used: int

    def to_dict(self) -> dict:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "tail_bound": self.tail_bound,
            "terms_used": self.terms_used,
        }


class CoefficientKind(str, enum.Enum):
    RAW = "raw"
    NORMALIZED = "normalized"
    PROOF_B = "proof_b"
    PROOF_C = "proof_c"
    PROOF_D = "proof_d"
    PROOF_G = "proof_g"
    LEMMA_X = "lemma_x"
    LEMMA_Y = "lemma_y"


@dataclass(frozen=True)
class MonotonicityReport:
    is_nonincreasing: bool
    first_violation: int | None


def _check_tol(tol: float) -> None:
    if not MIN_TOL < tol <= MAX_TOL:
        raise DomainError(f"tol must lie in ({MIN_TOL:g}, {MAX_TOL:g}], got {tol!r}")


def _log_power_coefficient(params: LeRoyParams, m: int, normalized: bool, order: int) -> float:
    """log of the m-th power-series coefficient (``-inf`` for a zero)."""
    if not normalized:
        return -params.log_gamma_product(m)
    # coefficient of z**m in the order-th derivative of N is (m+order)!/m! * A_{m+order}
    j = m + order
    if j == 0:
        return -math.inf
    falling = math.fsum(math.log(j - i) for i in range(order))
    if j == 1:
        return falling
    return falling + params.log_norm - params.log_gamma_product(j - 1)


def _term(log_c: float, z: complex, log_abs_z: float, m: int) -> complex:
    if log_c == -math.inf:
        return 0j
    log_mag = log_c + m * log_abs_z
    if log_mag > _LOG_DBL_MAX:
        raise GammaOverflowError(f"series term {m} overflows (log magnitude {log_mag:.1f})")
    if abs(log_c) < _LOG_DBL_MAX and abs(m * log_abs_z) < _LOG_DBL_MAX:
        return math.exp(log_c) * z**m
    return cmath.rect(math.exp(log_mag), m * cmath.phase(z))


def _sum(params: LeRoyParams, z: complex, tol: float, normalized: bool, order: int) -> SeriesValue:
    _check_tol(tol)
    z = complex(z)
    if z == 0:
        c0 = _log_power_coefficient(params, 0, normalized, order)
        value = 0j if c0 == -math.inf else complex(math.exp(c0))
        return SeriesValue(value, 0.0, 1)

    log_abs_z = math.log(abs(z))
    threshold = tol / 4.0
    re_parts: list[float] = []
    im_parts: list[float] = []
    run = 0
    prev_log = None
    for m in range(MAX_TERMS):
        log_c = _log_power_coefficient(params, m, normalized, order)
        t = _term(log_c, z, log_abs_z, m)
        re_parts.append(t.real)
        im_parts.append(t.imag)
        log_t = log_c + m * log_abs_z
        ratio_ok = prev_log is not None and (log_t == -math.inf or log_t - prev_log <= _LOG_HALF)
        if ratio_ok and abs(t) <= threshold:
            run += 1
        else:
            run = 0
        prev_log = log_t
        if run >= _STOP_RUN:
            value = complex(math.fsum(re_parts), math.fsum(im_parts))
            return SeriesValue(value, 2.0 * abs(t), m + 1)
    raise ConvergenceError(
        f"series for {params} at z={z} did not converge within {MAX_TERMS} terms"
    )


def evaluate(params: LeRoyParams, z: complex, tol: float = 1e-12) -> SeriesValue:
    """Sum ``F(z)`` to absolute accuracy ``tol``."""
    return _sum(params, z, tol, normalized=False, order=0)


def evaluate_normalized(params: LeRoyParams, z: complex, tol: float = 1e-12) -> SeriesValue:
    """Sum the normalized function ``N(z) = z + sum_{k>=2} A_k z**k``."""
    return _sum(params, z, tol, normalized=True, order=0)


def evaluate_derivative(
    params: LeRoyParams, z: complex, order: int = 1, tol: float = 1e-12
) -> SeriesValue:
    """First or second derivative of the normalized function, term by term."""
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    return _sum(params, z, tol, normalized=True, order=order)


@lru_cache(maxsize=512)
def power_coefficients(
    params: LeRoyParams, radius: float, tol: float, normalized: bool = False, order: int = 0
) -> tuple[np.ndarray, float]:
    """Truncated coefficient vector valid on the closed disk ``|z| <= radius``.

    The stopping rule is run on ``z = radius``; since each term's modulus
    grows with ``|z|``, the returned tail bound holds at every point of the
    disk. Coefficients are ordered by increasing power.
    """
    _check_tol(tol)
    if radius <= 0.0:
        c0 = _log_power_coefficient(params, 0, normalized, order)
        return np.array([0.0 if c0 == -math.inf else math.exp(c0)]), 0.0
    sv = _sum(params, complex(radius), tol, normalized, order)
    logs = [_log_power_coefficient(params, m, normalized, order) for m in range(sv.terms_used)]
    coef = np.exp(np.array(logs))
    coef.setflags(write=False)
    return coef, sv.tail_bound


def evaluate_many(
    params: LeRoyParams,
    z: np.ndarray,
    tol: float = 1e-13,
    normalized: bool = False,
    order: int = 0,
) -> tuple[np.ndarray, float]:
    """Vectorized evaluation by Horner's rule on a shared truncation.

    Returns the values and a tail bound valid for every entry.
    """
    z = np.asarray(z, dtype=complex)
    radius = float(np.max(np.abs(z))) if z.size else 0.0
    coef, tail = power_coefficients(params, radius, tol, normalized, order)
    acc = np.zeros_like(z)
    for c in coef[::-1]:
        acc = acc * z + c
    return acc, tail


def log_coefficient(params: LeRoyParams, kind: CoefficientKind | str, k: int) -> float:
    """Natural log of the named coefficient family at index ``k >= 1``."""
    kind = CoefficientKind(kind)
    if k < 1:
        raise DomainError(f"coefficient index must be >= 1, got {k!r}")
    lraw = -params.log_gamma_product(k)
    if kind is CoefficientKind.RAW:
        return lraw
    if kind is CoefficientKind.LEMMA_X:
        return log_gamma(k + 1) + lraw
    lnorm = params.log_norm
    if kind is CoefficientKind.NORMALIZED:
        return lnorm + lraw
    if kind is CoefficientKind.PROOF_C:
        return log_gamma(k + 1) + lnorm + lraw
    if kind is CoefficientKind.PROOF_B:
        return math.log(k) + log_gamma(k + 1) + lnorm + lraw
    if kind is CoefficientKind.PROOF_D:
        # (k+1) k Gamma(k), kept in the printed form
        return math.log(k + 1) + math.log(k) + log_gamma(k) + lnorm + lraw
    if kind is CoefficientKind.PROOF_G:
        return math.log(k + 1) + log_gamma(k + 1) + lnorm + lraw
    return lnorm + log_gamma(k + 2) + lraw  # LEMMA_Y


def coefficient(params: LeRoyParams, kind: CoefficientKind | str, k: int) -> float:
    """Value of a coefficient family.

    ``raw`` is ``1 / prod Gamma(alpha_i k + beta_i)**gamma_i`` and
    ``normalized`` is ``A_{k+1}``. The ``proof_*`` and ``lemma_*`` kinds
    are the weighted families used to bound the series: with
    ``P = prod Gamma(beta_i)**gamma_i``,

    * ``proof_c = k! P raw``, ``proof_b = k proof_c``,
    * ``proof_d = (k+1) k Gamma(k) P raw``, ``proof_g = (k+1) k! P raw``,
    * ``lemma_x = k! raw``, ``lemma_y = (k+1)! P raw``.
    """
    lc = log_coefficient(params, kind, k)
    if lc > _LOG_DBL_MAX:
        raise GammaOverflowError(f"{CoefficientKind(kind).value} coefficient {k} overflows")
    return math.exp(lc)


def theta(params: LeRoyParams) -> float:
    """``prod_i [Gamma(beta_i) / Gamma(alpha_i + beta_i)]**gamma_i``."""
    lt = math.fsum(g * (log_gamma(b) - log_gamma(a + b)) for a, b, g in params.triples)
    if lt > _LOG_DBL_MAX:
        raise GammaOverflowError("theta overflows")
    return math.exp(lt)


def coefficient_monotone(
    params: LeRoyParams, kind: CoefficientKind | str, k_max: int
) -> MonotonicityReport:
    """Scan ``k = 1..k_max`` for the first increase of a coefficient family.

    Comparison is in log space with a relative slack of 1e-12, so constant
    families (for instance ``lemma_x`` at ``(1, 1, 1)``) count as
    nonincreasing. ``first_violation`` is the index ``k`` whose value
    exceeds that of ``k - 1``.
    """
    if not 2 <= k_max <= 10_000:
        raise DomainError(f"k_max must lie in [2, 10000], got {k_max!r}")
    prev = log_coefficient(params, kind, 1)
    for k in range(2, k_max + 1):
        cur = log_coefficient(params, kind, k)
        if cur > prev + _MONOTONE_RTOL:
            return MonotonicityReport(False, k)
        prev = cur
    return MonotonicityReport(True, None)
