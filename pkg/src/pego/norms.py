"""Schatten, summed-over-the-dual, and function-space norms, with the
Plancherel residual and Hausdorff-Young inequality checks built on them.

The dual-side norm at exponent p weights each irrep by its dimension,

    ||c||_p = ( sum over pi of dim(pi) * ||c(pi)||_{S_p}^p )^(1/p),

with the p = inf case the plain supremum of operator norms.  At p = 2 the
norm squares to the Plancherel mass and matches ||f||_2 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fourier, irreps

__all__ = [
    "ExponentPair",
    "NormReport",
    "ResidualReport",
    "HausdorffYoungCheck",
    "schatten_norm",
    "lp_oplus_norm",
    "lp_function_norm",
    "plancherel_residual",
    "plancherel_residual_report",
    "hausdorff_young_check",
]


@dataclass(frozen=True)
class ExponentPair:
    """An exponent p in [1, 2] together with its conjugate p' = p/(p-1)."""

    p: float
    p_conj: float

    @classmethod
    def of(cls, p):
        p = float(p)
        if not 1.0 <= p <= 2.0:
            raise ValueError("exponent must lie in [1, 2]")
        conj = math.inf if p == 1.0 else p / (p - 1.0)
        return cls(p, conj)

    def __post_init__(self):
        if not 1.0 <= self.p <= 2.0:
            raise ValueError("exponent must lie in [1, 2]")
        want = math.inf if self.p == 1.0 else self.p / (self.p - 1.0)
        if not (self.p_conj == want or abs(self.p_conj - want) < 1e-12):
            raise ValueError("conjugate exponent does not match")


@dataclass(frozen=True)
class NormReport:
    """A norm value plus what was summed: exponent, labels, truncation."""

    value: float
    p: float
    subset_names: tuple
    truncated: bool


def schatten_norm(mat, p):
    """Schatten p-norm of a matrix (p >= 1 or inf) via singular values."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("schatten_norm expects a square matrix")
    if p != math.inf and p < 1:
        raise ValueError("schatten exponent must be >= 1 or inf")
    if p == 2:
        return float(np.sqrt(np.sum(np.abs(mat) ** 2)))
    sv = np.linalg.svd(mat, compute_uv=False)
    if p == math.inf:
        return float(sv[0]) if sv.size else 0.0
    return float(np.sum(sv**p) ** (1.0 / p))


def lp_oplus_norm(coeffs, p, subset=None):
    """Dimension-weighted l^p combination of Schatten norms over the dual.

    ``subset`` restricts the sum (default: the full computed coverage).  The
    report's ``truncated`` flag is set when the defaulted coverage cannot
    exhaust an infinite dual; an explicitly passed subset is summed exactly
    and reported untruncated.
    """
    if p != math.inf and p < 1:
        raise ValueError("exponent must be >= 1 or inf")
    defaulted = subset is None
    labels = tuple(coeffs.labels if defaulted else subset)
    if p == math.inf:
        value = 0.0
        for lab in labels:
            value = max(value, schatten_norm(coeffs[lab], math.inf))
    else:
        total = 0.0
        for lab in labels:
            total += lab.dim * schatten_norm(coeffs[lab], p) ** p
        value = float(total ** (1.0 / p)) if labels else 0.0
    truncated = defaulted and not coeffs.group.is_finite
    return NormReport(value, p, tuple(lab.name for lab in labels), truncated)


def lp_function_norm(f, p):
    """Quadrature L^p norm; p = inf takes the max over nodes."""
    if p != math.inf and p < 1:
        raise ValueError("exponent must be >= 1 or inf")
    a = np.abs(f.values)
    if p == math.inf:
        return float(a.max()) if a.size else 0.0
    return float(np.sum(f.rule.weights * a**p) ** (1.0 / p))


@dataclass(frozen=True)
class ResidualReport:
    """Tail mass outside a subset: value, and the roundoff clamp applied."""

    value: float
    clamp: float
    subset_names: tuple


def plancherel_residual_report(f, coeffs, subset):
    """sqrt of ||f||_2^2 minus the head mass on ``subset``, with clamp info.

    Negative radicands (pure roundoff: the head can exceed the total by
    ~1e-15 relative) are clamped to zero; the clamp magnitude is recorded so
    anything beyond 1e-12 is visible to the caller.
    """
    mass = lp_function_norm(f, 2) ** 2
    head = coeffs.head_mass(subset)
    diff = mass - head
    clamp = max(0.0, -diff)
    return ResidualReport(
        math.sqrt(max(diff, 0.0)), clamp, tuple(lab.name for lab in subset)
    )


def plancherel_residual(f, coeffs, subset):
    """The l2 tail of f outside ``subset``, through the Plancherel identity."""
    return plancherel_residual_report(f, coeffs, subset).value


def beyond_cutoff_mass(f, coeffs, floor=1e-12):
    """Squared l2 mass of f beyond the labels held in ``coeffs``.

    Computed as ||f||_2^2 minus the full head mass.  A difference within
    ``floor * max(mass, 1)`` of zero is float cancellation noise, not
    spectrum, and is returned as exactly 0; without that floor the square
    root of the difference never drops below ~1e-8 even for band-limited f.
    """
    mass = lp_function_norm(f, 2) ** 2
    diff = mass - coeffs.head_mass(coeffs.labels)
    if abs(diff) <= floor * max(mass, 1.0):
        return 0.0
    return max(diff, 0.0)


@dataclass(frozen=True)
class HausdorffYoungCheck:
    """Both sides of one Hausdorff-Young inequality at one exponent."""

    direction: str
    p: float
    p_conj: float
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    truncated: bool


def hausdorff_young_check(f, pair, direction="forward", cutoff=None, slack=1e-10):
    """Check a Hausdorff-Young inequality on one sampled function.

    forward:  ||fhat||_{p'-oplus} <= ||f||_p        (p in [1, 2])
    reverse:  ||f||_{p'} <= ||fhat||_{p-oplus}

    Coefficients are taken against the canonical dual at ``cutoff`` (default:
    the rule's alias-free band).  For band-limited f within that band both
    sides are exact and the inequalities are theorems; the ``truncated`` flag
    marks dual-side sums that cannot be certified complete.
    """
    if direction not in ("forward", "reverse"):
        raise ValueError("direction must be 'forward' or 'reverse'")
    if not isinstance(pair, ExponentPair):
        pair = ExponentPair.of(pair)
    coeffs = fourier.forward_to_cutoff(f, cutoff)
    if direction == "forward":
        dual_side = lp_oplus_norm(coeffs, pair.p_conj)
        lhs, rhs = dual_side.value, lp_function_norm(f, pair.p)
    else:
        dual_side = lp_oplus_norm(coeffs, pair.p)
        lhs, rhs = lp_function_norm(f, pair.p_conj), dual_side.value
    return HausdorffYoungCheck(
        direction,
        pair.p,
        pair.p_conj,
        lhs,
        rhs,
        slack,
        lhs <= rhs + slack,
        dual_side.truncated,
    )
