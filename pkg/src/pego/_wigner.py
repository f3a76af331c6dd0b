"""Wigner d and D matrices for SU(2), vectorized over evaluation points.

Spins are handled as integers ``two_l = 2*l`` so half-integer representations
stay exact.  Rows and columns are ordered by descending weight
``m = l, l-1, ..., -l``.  The small-d matrix is evaluated through the Jacobi
polynomial three-term recursion in cos(beta), which is stable for the spins
used here, instead of the alternating factorial sum.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["wigner_d", "wigner_D", "euler_from_quaternion", "two_m_values"]


def two_m_values(two_l):
    """Weights 2m in row order: two_l, two_l - 2, ..., -two_l."""
    return np.arange(two_l, -two_l - 2, -2)


def _jacobi(k, mu, nu, x):
    """Jacobi polynomial P_k^(mu, nu) on an array, by three-term recursion."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if k == 0:
        return p_prev
    p_cur = 0.5 * ((mu - nu) + (mu + nu + 2) * x)
    for i in range(2, k + 1):
        s = 2 * i + mu + nu
        c1 = 2 * i * (i + mu + nu) * (s - 2)
        c2a = (s - 1) * (mu * mu - nu * nu)
        c2b = (s - 1) * s * (s - 2)
        c3 = 2 * (i + mu - 1) * (i + nu - 1) * s
        p_next = ((c2a + c2b * x) * p_cur - c3 * p_prev) / c1
        p_prev, p_cur = p_cur, p_next
    return p_cur


def _d_entry(two_l, two_mp, two_m, cos_b, cos_half, sin_half):
    """One entry d^l_{m',m}(beta), vectorized over beta."""
    # Map into the region a >= |b| via the standard symmetries
    # d_{m'm} = (-1)^{m-m'} d_{mm'} = d_{-m,-m'}.
    if two_mp >= abs(two_m):
        a2, b2, sign = two_mp, two_m, 1.0
    elif two_m >= abs(two_mp):
        a2, b2 = two_m, two_mp
        sign = -1.0 if ((two_m - two_mp) // 2) % 2 else 1.0
    elif -two_m >= abs(two_mp):
        a2, b2, sign = -two_m, -two_mp, 1.0
    else:
        a2, b2 = -two_mp, -two_m
        sign = -1.0 if ((two_m - two_mp) // 2) % 2 else 1.0
    mu = (a2 - b2) // 2
    nu = (a2 + b2) // 2
    k = (two_l - a2) // 2
    ln_norm = 0.5 * (
        math.lgamma((two_l + a2) // 2 + 1)
        + math.lgamma((two_l - a2) // 2 + 1)
        - math.lgamma((two_l + b2) // 2 + 1)
        - math.lgamma((two_l - b2) // 2 + 1)
    )
    val = sign * math.exp(ln_norm) * _jacobi(k, mu, nu, cos_b)
    if nu:
        val = val * cos_half**nu
    if mu:
        val = val * (-sin_half) ** mu
    return val


def wigner_d(two_l, beta):
    """Small Wigner d-matrix d^l(beta).

    Parameters
    ----------
    two_l : int
        Twice the spin.
    beta : float or ndarray
        Rotation angle(s) about the y axis.

    Returns
    -------
    ndarray
        Real array of shape ``beta.shape + (two_l + 1, two_l + 1)``.
    """
    beta = np.asarray(beta, dtype=float)
    d = two_l + 1
    cos_b = np.cos(beta)
    cos_half = np.cos(beta / 2.0)
    sin_half = np.sin(beta / 2.0)
    out = np.empty(beta.shape + (d, d), dtype=float)
    tms = two_m_values(two_l)
    for i, two_mp in enumerate(tms):
        for j, two_m in enumerate(tms):
            out[..., i, j] = _d_entry(two_l, two_mp, two_m, cos_b, cos_half, sin_half)
    return out


def wigner_D(two_l, alpha, beta, gamma):
    """Full Wigner D-matrix D^l(alpha, beta, gamma), z-y-z convention.

    D^l_{m'm} = exp(-i m' alpha) d^l_{m'm}(beta) exp(-i m gamma), with rows
    and columns ordered by descending weight.  For two_l == 1 this equals the
    defining 2x2 matrix of the group element itself.
    """
    alpha = np.asarray(alpha, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    half_m = two_m_values(two_l) / 2.0
    ph_a = np.exp(-1j * alpha[..., None] * half_m)
    ph_c = np.exp(-1j * gamma[..., None] * half_m)
    return ph_a[..., :, None] * wigner_d(two_l, beta) * ph_c[..., None, :]


def euler_from_quaternion(w, x, y, z):
    """Euler angles (z-y-z) whose rotation equals the given unit quaternion.

    Exact for every input, including the beta = 0 and beta = pi fibers: the
    returned triple always reproduces the quaternion's SU(2) matrix, not just
    its rotation, so half-integer representations evaluate consistently.
    """
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    a = w - 1j * z
    b = y - 1j * x
    beta = 2.0 * np.arctan2(np.abs(b), np.abs(a))
    ph_a = np.angle(a)
    ph_b = np.angle(b)
    return ph_b - ph_a, beta, -ph_b - ph_a
