"""Gamma, log-gamma and digamma evaluation.

``log_gamma`` uses the Lanczos approximation with ``g = 7`` and nine
coefficients (relative accuracy around 1e-15 for ``Re(z) >= 1/2``);
arguments with ``0 < Re(z) < 1/2`` are shifted up by one first.
``gamma`` continues to the left half-plane with the reflection formula.
``digamma`` shifts the argument above 10 with the recurrence
``psi(s) = psi(s + 1) - 1/s`` and finishes with the asymptotic series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import overload

from leroyatlas.errors import DomainError, GammaOverflowError, PoleError

__all__ = [
    "CONSTANTS",
    "MathConstants",
    "digamma",
    "gamma",
    "log_gamma",
]


@dataclass(frozen=True)
class MathConstants:
    euler_number: float = math.e
    euler_mascheroni: float = 0.57721566490153286061


CONSTANTS = MathConstants()

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_DBL_MAX = math.log(1.7976931348623157e308)

# B_{2k} / (2k) for k = 1..7
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_DIGAMMA_SHIFT = 10.0


def _lanczos(z: complex) -> complex:
    # Re(z) >= 1/2
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _wrap_phase(phi: float) -> float:
    # principal value in (-pi, pi]
    phi = math.remainder(phi, 2.0 * math.pi)
    if phi == -math.pi:
        phi = math.pi
    return phi


@overload
def log_gamma(z: float) -> float: ...
@overload
def log_gamma(z: complex) -> complex: ...


def log_gamma(z: float | complex) -> float | complex:
    """Principal logarithm of the gamma function for ``Re(z) > 0``.

    Real arguments return a float. Positive integers up to 171 are
    computed from the exact factorial, so ``log_gamma(1)`` and
    ``log_gamma(2)`` are exactly zero.

    Raises
    ------
    DomainError
        If ``Re(z) <= 0``; use :func:`gamma` there.
    """
    if isinstance(z, complex):
        if z.real <= 0.0:
            raise DomainError(f"log_gamma requires Re(z) > 0, got {z!r}")
        if z.imag == 0.0:
            return complex(log_gamma(z.real), 0.0)
        w = z
        shift = 0j
        if w.real < 0.5:
            shift = cmath.log(w)
            w = w + 1.0
        res = _lanczos(w) - shift
        return complex(res.real, _wrap_phase(res.imag))

    x = float(z)
    if not x > 0.0:
        raise DomainError(f"log_gamma requires z > 0, got {x!r}")
    if x.is_integer() and x <= 171.0:
        return math.log(math.factorial(int(x) - 1))
    shift = 0.0
    if x < 0.5:
        shift = math.log(x)
        x += 1.0
    return _lanczos(complex(x, 0.0)).real - shift


def _sinpi(x: float) -> float:
    # sin(pi x) with exact zeros at the integers
    r = math.fmod(x, 2.0)
    if r < 0.0:
        r += 2.0
    if r <= 0.25:
        return math.sin(math.pi * r)
    if r <= 0.75:
        return math.cos(math.pi * (r - 0.5))
    if r <= 1.25:
        return math.sin(math.pi * (1.0 - r))
    if r <= 1.75:
        return -math.cos(math.pi * (r - 1.5))
    return math.sin(math.pi * (r - 2.0))


@overload
def gamma(z: float) -> float: ...
@overload
def gamma(z: complex) -> complex: ...


def gamma(z: float | complex) -> float | complex:
    """Gamma function on the complex plane minus the poles.

    For ``Re(z) <= 0`` the value is ``pi / (sin(pi z) * Gamma(1 - z))``,
    otherwise ``exp(log_gamma(z))``.

    Raises
    ------
    PoleError
        At ``z = 0, -1, -2, ...``.
    GammaOverflowError
        When ``|Gamma(z)|`` exceeds the double range (real z above
        about 171.6).
    """
    is_complex = isinstance(z, complex)
    zc = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0 and zc.real.is_integer():
        raise PoleError(f"gamma has a pole at {zc.real!r}")

    if zc.real <= 0.0:
        lg = log_gamma(1.0 - zc) if is_complex else log_gamma(1.0 - zc.real)
        if is_complex:
            return math.pi * cmath.exp(-lg) / cmath.sin(math.pi * zc)
        return math.pi * math.exp(-lg) / _sinpi(zc.real)

    lg = log_gamma(zc) if is_complex else log_gamma(zc.real)
    if lg.real > _LOG_DBL_MAX:
        raise GammaOverflowError(f"gamma({z!r}) overflows; work with log_gamma")
    return cmath.exp(lg) if is_complex else math.exp(lg)


def digamma(s: float) -> float:
    """Digamma function ``psi(s) = Gamma'(s) / Gamma(s)`` for real ``s > 0``."""
    x = float(s)
    if not x > 0.0:
        raise DomainError(f"digamma requires s > 0, got {x!r}")
    acc = 0.0
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_DIGAMMA_ASYMPTOTIC):
        series = series * inv2 + c
    series *= inv2
    return acc + math.log(x) - 0.5 / x - series
