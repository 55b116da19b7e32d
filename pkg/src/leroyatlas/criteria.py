"""Sufficient-condition checks as clause-by-clause certificates.

Every checker takes a :class:`~leroyatlas.series.LeRoyParams` and returns a
:class:`Certificate` whose clauses appear in the order the theorem states
its hypotheses. Informational clauses are recorded but never affect
``Certificate.satisfied``.

Constants are derived from :data:`~leroyatlas.special.CONSTANTS` at call
time by :func:`derived_constants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from leroyatlas.errors import ArityError, DomainError
from leroyatlas.series import CoefficientKind, LeRoyParams, log_coefficient
from leroyatlas.special import CONSTANTS, MathConstants, log_gamma

__all__ = [
    "Certificate",
    "Clause",
    "THEOREMS",
    "THEOREM_IDS",
    "check",
    "check_convex_half",
    "check_convex_half_multi",
    "check_exp_convex_3",
    "check_exp_convex_multi",
    "check_exp_starlike_3",
    "check_exp_starlike_multi",
    "check_exp_subordination_3",
    "check_exp_subordination_multi",
    "check_ozaki_close_to_convex",
    "check_starlike_half",
    "check_starlike_unit_multi",
    "derived_constants",
]

RELATIONS = ("<", "<=", ">", ">=", "=")
EQUALITY_TOL = 1e-12
OZAKI_LIMIT_TOL = 1e-6


@dataclass(frozen=True)
class Clause:
    name: str
    lhs: float
    relation: str
    rhs: float
    margin: float
    passed: bool
    informational: bool = False

    @classmethod
    def compare(cls, name: str, lhs: float, relation: str, rhs: float, *, informational: bool = False) -> Clause:
        if relation == "<":
            margin, ok = rhs - lhs, lhs < rhs
        elif relation == "<=":
            margin, ok = rhs - lhs, lhs <= rhs
        elif relation == ">":
            margin, ok = lhs - rhs, lhs > rhs
        elif relation == ">=":
            margin, ok = lhs - rhs, lhs >= rhs
        elif relation == "=":
            margin = -abs(lhs - rhs)
            ok = abs(lhs - rhs) <= EQUALITY_TOL
        else:
            raise DomainError(f"unknown relation {relation!r}")
        return cls(name, float(lhs), relation, float(rhs), float(margin), bool(ok), informational)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "informational": self.informational,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Clause:
        return cls(
            d["name"], d["lhs"], d["relation"], d["rhs"], d["margin"], d["pass"],
            d.get("informational", False),
        )


@dataclass(frozen=True)
class Certificate:
    theorem_id: str
    params: LeRoyParams
    clauses: tuple[Clause, ...]
    notes: str = field(default="")

    def __post_init__(self) -> None:
        if not self.clauses:
            raise DomainError("a certificate needs at least one clause")

    @property
    def satisfied(self) -> bool:
        return all(c.passed for c in self.clauses if not c.informational)

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "params": self.params.to_list(),
            "satisfied": self.satisfied,
            "clauses": [c.to_dict() for c in self.clauses],
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        return cls(
            d["theorem_id"],
            LeRoyParams.of(*d["params"]),
            tuple(Clause.from_dict(c) for c in d["clauses"]),
            d.get("notes", ""),
        )


def derived_constants(c: MathConstants = CONSTANTS) -> dict[str, float]:
    e = c.euler_number
    e2 = e * e
    return {
        "e": e,
        "delta": c.euler_mascheroni,
        "sqrt5": math.sqrt(5),
        "e^2": e2,
        "e-1": e - 1,
        "e-2": e - 2,
        "2e-1": 2 * e - 1,
        "4e^2-10e+2": 4 * e2 - 10 * e + 2,
        "4e^2-3e+2": 4 * e2 - 3 * e + 2,
        "e^2/(e^2-1)": e2 / (e2 - 1),
        "e(e-2)": e * (e - 2),
        "1-1/e": 1 - 1 / e,
    }


def _gamma_pow_product(params: LeRoyParams, shift: float) -> float:
    """``prod_i Gamma(alpha_i * shift + beta_i)**gamma_i``; ``inf`` on overflow."""
    lg = math.fsum(g * log_gamma(a * shift + b) for a, b, g in params.triples)
    try:
        return math.exp(lg)
    except OverflowError:
        return math.inf


def _single(params: LeRoyParams, theorem_id: str) -> tuple[float, float, float]:
    if params.n != 1:
        raise ArityError(f"{theorem_id} takes exactly one triple, got {params.n}")
    return params.triples[0]


def _suffix(params: LeRoyParams, i: int) -> str:
    return f"[{i + 1}]" if params.n > 1 else ""


def _positivity(params: LeRoyParams) -> Clause:
    return Clause.compare("min(alpha,beta,gamma) > 0", min(min(t) for t in params.triples), ">", 0.0)


def _exp_class_hypotheses(params: LeRoyParams) -> list[Clause]:
    out = []
    for i, (a, b, g) in enumerate(params.triples):
        s = _suffix(params, i)
        out.append(Clause.compare(f"alpha{s}*gamma{s} >= 1", a * g, ">=", 1.0))
        out.append(Clause.compare(f"alpha{s}^2*gamma{s} >= beta{s}", a * a * g, ">=", b))
    return out


# -- exponential subordination -------------------------------------------------


def check_exp_subordination_3(params: LeRoyParams) -> Certificate:
    a, b, g = _single(params, "thm-3-1")
    k = derived_constants()
    clauses = (
        _positivity(params),
        Clause.compare("max(alpha,beta) < alpha^2*gamma", max(a, b), "<", a * a * g),
        Clause.compare("Gamma(beta)^gamma = 1", _gamma_pow_product(params, 0.0), "=", 1.0),
        Clause.compare(
            "log2 - alpha*gamma*log(alpha+beta) + alpha*gamma*delta < 0",
            math.log(2) - a * g * math.log(a + b) + a * g * k["delta"],
            "<",
            0.0,
        ),
        Clause.compare(
            "(e-1)*Gamma(alpha+beta)^gamma > e^2",
            k["e-1"] * _gamma_pow_product(params, 1.0),
            ">",
            k["e^2"],
        ),
    )
    return Certificate("thm-3-1", params, clauses)


def check_exp_subordination_multi(params: LeRoyParams) -> Certificate:
    k = derived_constants()
    clauses = [
        _positivity(params),
        Clause.compare("prod Gamma(beta_i)^gamma_i = 1", _gamma_pow_product(params, 0.0), "=", 1.0),
    ]
    for i, (a, _, g) in enumerate(params.triples):
        s = _suffix(params, i)
        clauses.append(Clause.compare(f"alpha{s}*gamma{s} >= 1", a * g, ">=", 1.0))
    clauses.append(
        Clause.compare(
            "prod Gamma(alpha_i+beta_i)^gamma_i > e^2/(e^2-1)",
            _gamma_pow_product(params, 1.0),
            ">",
            k["e^2/(e^2-1)"],
        )
    )
    return Certificate("thm-3-2", params, tuple(clauses))


# -- exponential starlikeness / convexity -------------------------------------


def _dangling_clause(a: float, g: float) -> Clause:
    return Clause.compare(
        "alpha*gamma*log(alpha+gamma) - log2 - 3/4 - alpha*gamma/(alpha+gamma) < 0",
        a * g * math.log(a + g) - math.log(2) - 3 / 4 - a * g / (a + g),
        "<",
        0.0,
        informational=True,
    )


def check_exp_starlike_3(params: LeRoyParams) -> Certificate:
    a, _, g = _single(params, "thm-4-1-star")
    k = derived_constants()
    clauses = (
        *_exp_class_hypotheses(params),
        _dangling_clause(a, g),
        Clause.compare(
            "(2e-1)*Gamma(beta)^gamma < 2*Gamma(alpha+beta)^gamma",
            k["2e-1"] * _gamma_pow_product(params, 0.0),
            "<",
            2 * _gamma_pow_product(params, 1.0),
        ),
    )
    return Certificate(
        "thm-4-1-star", params, clauses,
        notes="dangling expression carries no relation in the statement; recorded as informational '< 0'",
    )


def check_exp_convex_3(params: LeRoyParams) -> Certificate:
    a, _, g = _single(params, "thm-4-1-cvx")
    k = derived_constants()
    gb = _gamma_pow_product(params, 0.0)
    gab = _gamma_pow_product(params, 1.0)
    clauses = (
        *_exp_class_hypotheses(params),
        _dangling_clause(a, g),
        Clause.compare("(4e^2-10e+2)*Gamma(beta)^gamma < Gamma(alpha+beta)^gamma", k["4e^2-10e+2"] * gb, "<", gab),
        Clause.compare(
            "variant-from-proof: (4e^2-3e+2)*Gamma(beta)^gamma < (e-1)*Gamma(alpha+beta)^gamma",
            k["4e^2-3e+2"] * gb,
            "<",
            k["e-1"] * gab,
            informational=True,
        ),
    )
    return Certificate(
        "thm-4-1-cvx", params, clauses,
        notes="statement constant 4e^2-10e+2 differs from the constant 4e^2-3e+2 reached in the proof; "
        "the latter is informational",
    )


def _exp_multi(params: LeRoyParams, theorem_id: str) -> Certificate:
    k = derived_constants()
    clauses = (
        *_exp_class_hypotheses(params),
        Clause.compare(
            "e(e-2)*prod Gamma(beta_i)^gamma_i < (e-1)*prod Gamma(alpha_i+beta_i)^gamma_i",
            k["e(e-2)"] * _gamma_pow_product(params, 0.0),
            "<",
            k["e-1"] * _gamma_pow_product(params, 1.0),
        ),
    )
    return Certificate(
        theorem_id, params, clauses,
        notes="starlike and convex parts print the same inequality",
    )


def check_exp_starlike_multi(params: LeRoyParams) -> Certificate:
    return _exp_multi(params, "thm-4-2-star")


def check_exp_convex_multi(params: LeRoyParams) -> Certificate:
    return _exp_multi(params, "thm-4-2-cvx")


# -- starlikeness / convexity of the normalized function ----------------------


def _unit_multi_hypotheses(params: LeRoyParams) -> list[Clause]:
    s = math.fsum(a * g * math.log(a + g) for a, _, g in params.triples)
    r = math.fsum(a * g / (a + g) for a, _, g in params.triples)
    return [
        *_exp_class_hypotheses(params),
        Clause.compare(
            "sum alpha_i*gamma_i*log(alpha_i+gamma_i) - log2 - 3/4 - sum alpha_i*gamma_i/(alpha_i+gamma_i) < 0",
            s - math.log(2) - 3 / 4 - r,
            "<",
            0.0,
        ),
    ]


def check_starlike_unit_multi(params: LeRoyParams) -> Certificate:
    k = derived_constants()
    clauses = (
        *_unit_multi_hypotheses(params),
        Clause.compare(
            "sqrt5*(e-2)*prod Gamma(beta_i)^gamma_i < 2*prod Gamma(alpha_i+beta_i)^gamma_i",
            k["sqrt5"] * k["e-2"] * _gamma_pow_product(params, 0.0),
            "<",
            2 * _gamma_pow_product(params, 1.0),
        ),
    )
    return Certificate("thm-5-1-star", params, clauses)


def check_convex_half_multi(params: LeRoyParams) -> Certificate:
    k = derived_constants()
    clauses = (
        *_unit_multi_hypotheses(params),
        Clause.compare(
            "(e-2)*prod Gamma(beta_i)^gamma_i < prod Gamma(alpha_i+beta_i)^gamma_i",
            k["e-2"] * _gamma_pow_product(params, 0.0),
            "<",
            _gamma_pow_product(params, 1.0),
        ),
    )
    return Certificate("thm-5-1-cvx", params, clauses)


def _half_disk_hypotheses(params: LeRoyParams) -> list[Clause]:
    out = []
    for i, (a, _, g) in enumerate(params.triples):
        out.append(Clause.compare(f"min(alpha{_suffix(params, i)},gamma{_suffix(params, i)}) >= 1", min(a, g), ">=", 1.0))
    out.append(Clause.compare("min beta_i > 0", min(b for _, b, _ in params.triples), ">", 0.0))
    out.append(Clause.compare("max alpha_j+beta_j >= 2", max(a + b for a, b, _ in params.triples), ">=", 2.0))
    return out


def check_starlike_half(params: LeRoyParams) -> Certificate:
    k = derived_constants()
    clauses = (
        *_half_disk_hypotheses(params),
        Clause.compare(
            "(e-1)*prod Gamma(beta_i)^gamma_i < prod Gamma(alpha_i+beta_i)^gamma_i",
            k["e-1"] * _gamma_pow_product(params, 0.0),
            "<",
            _gamma_pow_product(params, 1.0),
        ),
    )
    return Certificate("thm-5-3a", params, clauses)


def check_convex_half(params: LeRoyParams) -> Certificate:
    k = derived_constants()
    clauses = (
        *_half_disk_hypotheses(params),
        Clause.compare(
            "2(e-1)*prod Gamma(beta_i)^gamma_i < prod Gamma(alpha_i+beta_i)^gamma_i",
            2 * k["e-1"] * _gamma_pow_product(params, 0.0),
            "<",
            _gamma_pow_product(params, 1.0),
        ),
        Clause.compare("min beta_i >= 2", min(b for _, b, _ in params.triples), ">=", 2.0),
    )
    return Certificate("thm-5-3b", params, clauses)


# -- Ozaki coefficient chains --------------------------------------------------


def _ozaki_chain_clauses(weighted: list[float], prefix: str, descending: bool, informational: bool) -> list[Clause]:
    # weighted[j] = (j+1) * A_{j+1}, weighted[0] = 1
    steps = [weighted[j + 1] - weighted[j] for j in range(len(weighted) - 1)]
    rtol = [EQUALITY_TOL * max(abs(weighted[j]), abs(weighted[j + 1])) for j in range(len(steps))]
    if descending:
        worst = max(s - t for s, t in zip(steps, rtol))
        return [
            Clause.compare(f"{prefix}: 1 >= 2*A_2", 1.0, ">=", weighted[1], informational=informational),
            Clause.compare(f"{prefix}: max_k [(k+1)A_(k+1) - k*A_k] <= 0", worst, "<=", 0.0, informational=informational),
            Clause.compare(f"{prefix}: k_max*A_(k_max) -> 0", weighted[-1], "<=", OZAKI_LIMIT_TOL, informational=informational),
        ]
    worst = min(s + t for s, t in zip(steps, rtol))
    return [
        Clause.compare(f"{prefix}: 1 <= 2*A_2", 1.0, "<=", weighted[1], informational=informational),
        Clause.compare(f"{prefix}: min_k [(k+1)A_(k+1) - k*A_k] >= 0", worst, ">=", 0.0, informational=informational),
        Clause.compare(f"{prefix}: max_k k*A_k <= 2", max(weighted), "<=", 2.0, informational=informational),
    ]


def check_ozaki_close_to_convex(params: LeRoyParams, k_max: int = 50) -> Certificate:
    """Ozaki's monotone chain test on ``k A_k`` for ``k <= k_max``.

    Both chains are computed. The chain that holds (if any) is binding and
    the other one is kept as informational; when neither holds both are
    binding, so the certificate is unsatisfied. ``notes`` names the chain.
    """
    if not 3 <= k_max <= 1000:
        raise DomainError(f"k_max must lie in [3, 1000], got {k_max!r}")
    weighted = [1.0]
    for j in range(2, k_max + 1):
        weighted.append(j * math.exp(log_coefficient(params, CoefficientKind.NORMALIZED, j - 1)))

    desc = _ozaki_chain_clauses(weighted, "descending", True, False)
    asc = _ozaki_chain_clauses(weighted, "ascending", False, False)
    desc_ok = all(c.passed for c in desc)
    asc_ok = all(c.passed for c in asc)
    if desc_ok:
        clauses = desc + _ozaki_chain_clauses(weighted, "ascending", False, True)
        note = "chain=descending"
    elif asc_ok:
        clauses = _ozaki_chain_clauses(weighted, "descending", True, True) + asc
        note = "chain=ascending"
    else:
        clauses = desc + asc
        note = "chain=none"
    return Certificate("ozaki", params, tuple(clauses), notes=f"{note}; k_max={k_max}")


THEOREMS: dict[str, Callable[[LeRoyParams], Certificate]] = {
    "thm-3-1": check_exp_subordination_3,
    "thm-3-2": check_exp_subordination_multi,
    "thm-4-1-star": check_exp_starlike_3,
    "thm-4-1-cvx": check_exp_convex_3,
    "thm-4-2-star": check_exp_starlike_multi,
    "thm-4-2-cvx": check_exp_convex_multi,
    "thm-5-1-star": check_starlike_unit_multi,
    "thm-5-1-cvx": check_convex_half_multi,
    "thm-5-3a": check_starlike_half,
    "thm-5-3b": check_convex_half,
    "ozaki": check_ozaki_close_to_convex,
}
THEOREM_IDS = tuple(THEOREMS)
SINGLE_TRIPLE_THEOREMS = frozenset({"thm-3-1", "thm-4-1-star", "thm-4-1-cvx"})


def check(theorem_id: str, params: LeRoyParams) -> Certificate:
    try:
        fn = THEOREMS[theorem_id]
    except KeyError:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: {', '.join(THEOREM_IDS)}") from None
    return fn(params)
