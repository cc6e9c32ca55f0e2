"""Envelope parametrization E(t) = a(t) nu(t) + b(t) J nu(t) and its verification.

J nu = (-sin theta, cos theta) is nu rotated a quarter turn, so membership
E . nu = a holds as an algebraic identity no matter what b is; tangency
E' . nu = 0 holds exactly when b is a genuine creator.  Verification
therefore differentiates the sampled curve by finite differences rather
than reusing the jets that produced it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import CreatorFunction, parameter_grid
from .expr import unparse
from .family import LineFamily

MEMBERSHIP_TOL = 1e-9
TANGENCY_TOL = 1e-5  # scaled by (1 + max |E'|); doubled at the endpoints

Creator = CreatorFunction | Callable[[float], float]


class TooFewSamplesError(ValueError):
    def __init__(self, n: int):
        super().__init__(f"envelope verification needs at least 5 samples, got {n}")


@dataclass(frozen=True)
class EnvelopePoint:
    t: float
    point: tuple[float, float]
    nu: tuple[float, float]
    b_value: float


@dataclass(frozen=True)
class EnvelopeCurve:
    samples: tuple[EnvelopePoint, ...]
    family_id: str
    creator_id: str


@dataclass(frozen=True)
class VerificationReport:
    max_tangency_residual: float
    max_membership_residual: float
    passed: bool


def _family_token(family: LineFamily) -> str:
    text = family.mode + "|" + "|".join(
        f"{k}={unparse(v)}" for k, v in sorted(family.source_exprs.items())
    ) + f"|{family.domain}"
    return "family-" + hashlib.sha256(text.encode()).hexdigest()[:12]


def _creator_token(creator: Creator) -> str:
    if isinstance(creator, CreatorFunction):
        if creator.user_expr is not None:
            text = "user:" + unparse(creator.user_expr)
        else:
            text = f"canonical:grid={creator.grid_n}"
        return "creator-" + hashlib.sha256(text.encode()).hexdigest()[:12]
    return "creator-callable"


def envelope_point(family: LineFamily, creator: Creator, t: float) -> EnvelopePoint:
    """One point of the envelope at parameter t."""
    family.require_in_domain(t)
    c, s, a = family.coeff_jets(t, 0)
    b = creator(float(t))
    x = a.value * c.value - b * s.value
    y = a.value * s.value + b * c.value
    return EnvelopePoint(float(t), (x, y), (c.value, s.value), b)


def sample_envelope(family: LineFamily, creator: Creator, n: int) -> EnvelopeCurve:
    """The envelope at n uniform parameters across the family's domain."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    samples = tuple(envelope_point(family, creator, float(t))
                    for t in parameter_grid(family.domain, n))
    return EnvelopeCurve(samples, _family_token(family), _creator_token(creator))


def verify_envelope(curve: EnvelopeCurve, family: LineFamily) -> VerificationReport:
    """Check the defining conditions of an envelope on a sampled curve.

    Membership: max |E(t) . nu(t) - a(t)| over the samples.  Tangency:
    max |E'(t) . nu(t)| with E' from central differences (second-order
    one-sided stencils at the endpoints, where the tolerance doubles).
    """
    n = len(curve.samples)
    if n < 5:
        raise TooFewSamplesError(n)
    ts = np.array([p.t for p in curve.samples])
    pts = np.array([p.point for p in curve.samples])
    nus = np.array([p.nu for p in curve.samples])

    offsets = np.array([family.coeff_jets(float(t), 0)[2].value for t in ts])
    membership = float(np.max(np.abs(np.einsum("ij,ij->i", pts, nus) - offsets)))

    deriv = np.empty_like(pts)
    deriv[1:-1] = (pts[2:] - pts[:-2]) / (ts[2:] - ts[:-2])[:, None]
    h0, h1 = ts[1] - ts[0], ts[-1] - ts[-2]
    deriv[0] = (-3.0 * pts[0] + 4.0 * pts[1] - pts[2]) / (2.0 * h0)
    deriv[-1] = (3.0 * pts[-1] - 4.0 * pts[-2] + pts[-3]) / (2.0 * h1)

    tangency = np.abs(np.einsum("ij,ij->i", deriv, nus))
    scale = TANGENCY_TOL * (1.0 + float(np.max(np.linalg.norm(deriv, axis=1))))
    tangency_ok = (float(np.max(tangency[1:-1])) <= scale
                   and float(max(tangency[0], tangency[-1])) <= 2.0 * scale)
    passed = membership <= MEMBERSHIP_TOL and tangency_ok
    return VerificationReport(float(np.max(tangency)), membership, passed)
