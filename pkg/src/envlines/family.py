"""Straight line families t -> {(X, Y) : X cos(theta(t)) + Y sin(theta(t)) = a(t)}.

Four input modes build the same normalized object: the unit normal
nu(t) = (c(t), s(t)) and the signed offset a(t), each available as a jet of
any order up to 6.  The rotation angle itself is never materialized; every
downstream formula needs only (c, s) and derivatives of theta, and the
rotation rate comes branch-free from theta' = c s' - s c'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import jets
from .expr import ExpressionAst, evaluate_jet, unparse
from .jets import Jet, differentiate, truncate

DEFAULT_DOMAIN = (-10.0, 10.0)
EPS_DEGENERATE = 1e-12  # threshold on A^2 + B^2 below which no line is defined
UNIT_TOL = 1e-12
_BUILD_GRID_N = 257
_MAX_COEFF_ORDER = 6

_Recipe = Callable[[float, int], tuple[Jet, Jet, Jet]]


class DegenerateFamilyError(ValueError):
    """A^2 + B^2 fell below the degeneracy threshold at some parameter."""

    def __init__(self, t: float, value: float):
        self.t = t
        super().__init__(
            f"degenerate line coefficients at t = {t!r}: A^2 + B^2 = {value!r} <= {EPS_DEGENERATE}"
        )


class OutOfDomainError(ValueError):
    def __init__(self, t: float, domain: tuple[float, float]):
        self.t = t
        super().__init__(f"parameter t = {t!r} outside domain [{domain[0]}, {domain[1]}]")


@dataclass(frozen=True)
class LineCoefficients:
    """One line of the family: {(X, Y) : X*nu_x + Y*nu_y = offset}, |nu| = 1."""

    nu: tuple[float, float]
    offset: float


@dataclass(frozen=True)
class GaussDerivativeSample:
    """Rotation and offset derivatives at one parameter value."""

    t: float
    theta_prime: float
    a_prime: float
    theta_double_prime: float
    a_double_prime: float
    theta_triple: float
    a_triple: float


class LineFamily:
    """Immutable normalized family; all evaluation goes through cached jets."""

    def __init__(self, mode: str, domain: tuple[float, float],
                 source_exprs: dict[str, ExpressionAst], recipe: _Recipe):
        lo, hi = float(domain[0]), float(domain[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise ValueError(f"domain must be a non-degenerate interval, got [{lo}, {hi}]")
        self.mode = mode
        self.domain = (lo, hi)
        self.source_exprs = dict(source_exprs)
        self._jets = lru_cache(maxsize=None)(recipe)

    def __repr__(self) -> str:
        exprs = ", ".join(f"{k}={unparse(v)!r}" for k, v in self.source_exprs.items())
        return f"LineFamily(mode={self.mode!r}, domain={self.domain}, {exprs})"

    def contains(self, t: float) -> bool:
        lo, hi = self.domain
        slack = 1e-12 * (1.0 + abs(t))
        return lo - slack <= t <= hi + slack

    def require_in_domain(self, t: float) -> None:
        if not self.contains(t):
            raise OutOfDomainError(t, self.domain)

    def coeff_jets(self, t: float, order: int) -> tuple[Jet, Jet, Jet]:
        """Jets of (cos theta, sin theta, a) at t; order <= 6."""
        if not 0 <= order <= _MAX_COEFF_ORDER:
            raise ValueError(f"order must be in [0, {_MAX_COEFF_ORDER}], got {order}")
        return self._jets(float(t), order)

    def a_jet(self, t: float, order: int) -> Jet:
        return self.coeff_jets(t, order)[2]

    def theta_prime_jet(self, t: float, order: int) -> Jet:
        """Jet of theta'(t) = c s' - s c', valid to order <= 5."""
        c, s, _ = self.coeff_jets(t, order + 1)
        return truncate(c, order) * differentiate(s) - truncate(s, order) * differentiate(c)


def _validated(family: LineFamily) -> LineFamily:
    lo, hi = family.domain
    step = (hi - lo) / (_BUILD_GRID_N - 1)
    for i in range(_BUILD_GRID_N):
        t = lo + i * step
        c, s, _ = family.coeff_jets(t, _MAX_COEFF_ORDER)
        unit_defect = abs(c.value * c.value + s.value * s.value - 1.0)
        if unit_defect > UNIT_TOL:
            raise ValueError(
                f"Gauss map left the unit circle at t = {t!r} (|c^2 + s^2 - 1| = {unit_defect!r})"
            )
    return family


def build_family_normalized(theta: ExpressionAst, a: ExpressionAst,
                            domain: tuple[float, float] = DEFAULT_DOMAIN) -> LineFamily:
    """Family given directly by a rotation angle theta(t) and offset a(t)."""

    def recipe(t: float, order: int) -> tuple[Jet, Jet, Jet]:
        th = evaluate_jet(theta, t, order)
        return jets.cos(th), jets.sin(th), evaluate_jet(a, t, order)

    return _validated(LineFamily("normalized", domain, {"theta": theta, "a": a}, recipe))


def build_family_general(A: ExpressionAst, B: ExpressionAst, C: ExpressionAst,
                         domain: tuple[float, float] = DEFAULT_DOMAIN) -> LineFamily:
    """Family from a general defining equation A(t) X + B(t) Y + C(t) = 0.

    Normalizes to c = A/r, s = B/r, a = -C/r with r = sqrt(A^2 + B^2); the
    formula is continuous in t wherever A^2 + B^2 > 0, so the normal never
    flips sign between neighboring parameters.
    """

    def recipe(t: float, order: int) -> tuple[Jet, Jet, Jet]:
        ja = evaluate_jet(A, t, order)
        jb = evaluate_jet(B, t, order)
        jc = evaluate_jet(C, t, order)
        n2 = ja * ja + jb * jb
        if n2.value <= EPS_DEGENERATE:
            raise DegenerateFamilyError(t, n2.value)
        r = jets.sqrt(n2)
        return ja / r, jb / r, -jc / r

    return _validated(LineFamily("general", domain, {"A": A, "B": B, "C": C}, recipe))


def build_family_clairaut(g: ExpressionAst,
                          domain: tuple[float, float] = DEFAULT_DOMAIN) -> LineFamily:
    """Family of general solutions Y = t X + g(t) of a Clairaut equation."""

    def recipe(t: float, order: int) -> tuple[Jet, Jet, Jet]:
        v = Jet.variable(t, order)
        r = jets.sqrt(v * v + 1.0)
        one = Jet.constant(1.0, t, order)
        return v / r, -(one / r), -(evaluate_jet(g, t, order) / r)

    return _validated(LineFamily("clairaut", domain, {"g": g}, recipe))


def build_family_hedgehog(a: ExpressionAst,
                          domain: tuple[float, float] = DEFAULT_DOMAIN) -> LineFamily:
    """Support-function family: theta(t) = t with offset a(t)."""

    def recipe(t: float, order: int) -> tuple[Jet, Jet, Jet]:
        v = Jet.variable(t, order)
        return jets.cos(v), jets.sin(v), evaluate_jet(a, t, order)

    return _validated(LineFamily("hedgehog", domain, {"a": a}, recipe))


def line_at(family: LineFamily, t: float) -> LineCoefficients:
    """The line of the family at parameter t."""
    family.require_in_domain(t)
    c, s, a = family.coeff_jets(t, 0)
    return LineCoefficients((c.value, s.value), a.value)


def gauss_sample(family: LineFamily, t: float) -> GaussDerivativeSample:
    """theta', a' and the next two derivatives of each at parameter t."""
    family.require_in_domain(t)
    tp = family.theta_prime_jet(t, 2)
    a3 = family.a_jet(t, 3)
    return GaussDerivativeSample(
        t=float(t),
        theta_prime=tp.coeffs[0],
        a_prime=a3.coeffs[1],
        theta_double_prime=tp.coeffs[1],
        a_double_prime=a3.coeffs[2],
        theta_triple=tp.coeffs[2],
        a_triple=a3.coeffs[3],
    )
