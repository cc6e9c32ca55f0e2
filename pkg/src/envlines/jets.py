"""Truncated Taylor (jet) arithmetic for scalar functions of one variable.

A jet carries the value and the first k derivatives of a function at a
point.  Arithmetic and the elementary functions propagate derivatives
through the standard truncated-series recurrences, so derivatives come out
exact (to rounding) with no step sizes to tune.

Internally the recurrences run on normalized Taylor coefficients
u_k = f^(k)/k!; the public ``Jet.coeffs`` tuple holds plain derivative
values [f, f', f'', ...].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_ORDER = 6

_FACT = tuple(float(math.factorial(k)) for k in range(MAX_ORDER + 1))


class JetDomainError(ValueError):
    """An elementary operation left its real domain (log of <= 0, etc.)."""


@dataclass(frozen=True)
class Jet:
    """Derivative values [f(t), f'(t), ..., f^(k)(t)] of a function at ``center``."""

    center: float
    coeffs: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> float:
        return self.coeffs[0]

    @staticmethod
    def constant(value: float, center: float, order: int) -> "Jet":
        return Jet(center, (float(value),) + (0.0,) * order)

    @staticmethod
    def variable(center: float, order: int) -> "Jet":
        # the identity function t -> t: value center, slope 1, rest 0
        if order == 0:
            return Jet(center, (float(center),))
        return Jet(center, (float(center), 1.0) + (0.0,) * (order - 1))

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.center != self.center or other.order != self.order:
                raise ValueError(
                    "jet arithmetic requires equal center and order: "
                    f"({self.center}, {self.order}) vs ({other.center}, {other.order})"
                )
            return other
        return Jet.constant(float(other), self.center, self.order)

    def __add__(self, other) -> "Jet":
        o = self._coerce(other)
        return Jet(self.center, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        o = self._coerce(other)
        return Jet(self.center, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other) -> "Jet":
        return self._coerce(other).__sub__(self)

    def __neg__(self) -> "Jet":
        return Jet(self.center, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "Jet":
        o = self._coerce(other)
        return _wrap(self, _mul(_taylor(self), _taylor(o)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        o = self._coerce(other)
        return _wrap(self, _div(_taylor(self), _taylor(o)))

    def __rtruediv__(self, other) -> "Jet":
        return self._coerce(other).__truediv__(self)


def _taylor(j: Jet) -> list[float]:
    return [c / _FACT[k] for k, c in enumerate(j.coeffs)]


def _wrap(like: Jet, taylor: list[float]) -> Jet:
    return Jet(like.center, tuple(a * _FACT[k] for k, a in enumerate(taylor)))


# -- recurrences on normalized Taylor coefficients -----------------------

def _mul(u: list[float], v: list[float]) -> list[float]:
    n = len(u)
    return [sum(u[j] * v[k - j] for j in range(k + 1)) for k in range(n)]


def _div(u: list[float], v: list[float]) -> list[float]:
    if v[0] == 0.0:
        raise JetDomainError("division by zero")
    w: list[float] = []
    for k in range(len(u)):
        acc = u[k] - sum(w[j] * v[k - j] for j in range(k))
        w.append(acc / v[0])
    return w


def _exp(u: list[float]) -> list[float]:
    w = [math.exp(u[0])]
    for k in range(1, len(u)):
        w.append(sum(j * u[j] * w[k - j] for j in range(1, k + 1)) / k)
    return w


def _log(u: list[float]) -> list[float]:
    if u[0] <= 0.0:
        raise JetDomainError(f"log of non-positive value {u[0]!r}")
    w = [math.log(u[0])]
    for k in range(1, len(u)):
        acc = u[k] - sum(j * w[j] * u[k - j] for j in range(1, k)) / k
        w.append(acc / u[0])
    return w


def _sincos(u: list[float]) -> tuple[list[float], list[float]]:
    s = [math.sin(u[0])]
    c = [math.cos(u[0])]
    for k in range(1, len(u)):
        s.append(sum(j * u[j] * c[k - j] for j in range(1, k + 1)) / k)
        c.append(-sum(j * u[j] * s[k - j] for j in range(1, k + 1)) / k)
    return s, c


def _sqrt(u: list[float]) -> list[float]:
    if u[0] < 0.0:
        raise JetDomainError(f"sqrt of negative value {u[0]!r}")
    if u[0] == 0.0:
        if len(u) == 1:
            return [0.0]
        raise JetDomainError("derivative of sqrt at zero")
    w = [math.sqrt(u[0])]
    for k in range(1, len(u)):
        acc = u[k] - sum(w[j] * w[k - j] for j in range(1, k))
        w.append(acc / (2.0 * w[0]))
    return w


def _atan(u: list[float]) -> list[float]:
    n = len(u)
    w = [math.atan(u[0])]
    if n == 1:
        return w
    # integrate w' = u' / (1 + u^2) term by term
    du = [(j + 1) * u[j + 1] for j in range(n - 1)]
    usq = _mul(u, u)[: n - 1]
    den = [1.0 + usq[0]] + usq[1:]
    q = _div(du, den)
    for k in range(1, n):
        w.append(q[k - 1] / k)
    return w


# -- elementary functions on jets -----------------------------------------

def sin(j: Jet) -> Jet:
    return _wrap(j, _sincos(_taylor(j))[0])


def cos(j: Jet) -> Jet:
    return _wrap(j, _sincos(_taylor(j))[1])


def tan(j: Jet) -> Jet:
    s, c = _sincos(_taylor(j))
    if c[0] == 0.0:
        raise JetDomainError("tan undefined where cos vanishes")
    return _wrap(j, _div(s, c))


def atan(j: Jet) -> Jet:
    return _wrap(j, _atan(_taylor(j)))


def exp(j: Jet) -> Jet:
    return _wrap(j, _exp(_taylor(j)))


def log(j: Jet) -> Jet:
    return _wrap(j, _log(_taylor(j)))


def sqrt(j: Jet) -> Jet:
    return _wrap(j, _sqrt(_taylor(j)))


def absolute(j: Jet) -> Jet:
    # smooth germ away from zeros of the argument; no one-sided derivatives
    if j.value > 0.0:
        return j
    if j.value < 0.0:
        return -j
    if j.order == 0:
        return Jet(j.center, (0.0,))
    raise JetDomainError("derivative of abs at zero")


def powi(j: Jet, n: int) -> Jet:
    """Integer power by repeated multiplication (valid for any base)."""
    if n == 0:
        return Jet.constant(1.0, j.center, j.order)
    if n < 0:
        return Jet.constant(1.0, j.center, j.order) / powi(j, -n)
    result = j
    for _ in range(n - 1):
        result = result * j
    return result


def powr(j: Jet, r: float) -> Jet:
    """Real power via exp(r * log(base)); requires a positive base."""
    if j.value <= 0.0:
        raise JetDomainError(f"real power of non-positive base {j.value!r}")
    return _wrap(j, _exp([r * a for a in _log(_taylor(j))]))


def differentiate(j: Jet) -> Jet:
    """Jet of f' from the jet of f (order drops by one)."""
    if j.order == 0:
        raise ValueError("cannot differentiate an order-0 jet")
    return Jet(j.center, j.coeffs[1:])


def truncate(j: Jet, order: int) -> Jet:
    if order > j.order:
        raise ValueError(f"cannot extend a jet of order {j.order} to {order}")
    return Jet(j.center, j.coeffs[: order + 1])
