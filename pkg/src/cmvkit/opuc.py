"""Spectral transforms for orthogonal polynomials on the unit circle.

Forward direction: eigensolve a CMV or Jacobi matrix and read off the
spectral measure attached to the first coordinate vector.  Inverse
direction: run the Szego recursion on a finitely supported circle
measure to recover the Verblunsky coefficients.  The circle and the
interval [-2, 2] are connected by the pushforward of z + 1/z and, on the
coefficient side, by the Geronimus relations.

All functions are pure maps of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    CMVMatrix,
    JacobiMatrix,
    SpectralMeasureCircle,
    SpectralMeasureLine,
    VerblunskySet,
    build_jacobi,
)
from .errors import IllConditioned, InvalidBoundary, NotSymmetric, OutOfRange, SupportAtRealAxis, SupportTooSmall

NORM_FLOOR = 1e-13          # squared-norm floor for the Szego recursion
BOUNDARY_RECOVERY_TOL = 1e-6  # how far the recovered boundary coefficient may sit off the circle
AXIS_TOL = 1e-8             # support this close to angle 0 or pi blocks the circle->interval map
PAIR_TOL = 1e-10            # conjugate pairs must match within this angular tolerance


def unitary_eigensystem(C: CMVMatrix) -> SpectralMeasureCircle:
    """Spectral measure of a CMV matrix and the vector e_1.

    Uses a complex Schur decomposition, which for a unitary (normal)
    matrix yields an orthonormal eigenbasis; the weights are the squared
    overlaps of the eigenvectors with e_1, renormalized to sum 1.
    Eigenvector phases are irrelevant because only squared moduli enter.
    """
    t, q = scipy.linalg.schur(np.asarray(C.entries), output="complex")
    lam = np.diag(t)
    theta = np.angle(lam)
    weights = np.abs(q[0, :]) ** 2
    return SpectralMeasureCircle(theta, weights)


def jacobi_eigensystem(J: JacobiMatrix) -> SpectralMeasureLine:
    """Spectral measure of a Jacobi matrix and the vector e_1."""
    if J.n == 1:
        return SpectralMeasureLine(J.b.copy(), np.array([1.0]))
    lam, vec = scipy.linalg.eigh_tridiagonal(J.b, J.a)
    return SpectralMeasureLine(lam, vec[0, :] ** 2)


@dataclass(frozen=True, eq=False)
class MonicPolynomial:
    """Polynomial with coefficients in ascending order and leading coefficient 1."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0 or c[-1] != 1.0:
            raise OutOfRange("leading coefficient must be exactly 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)


def reversed_poly(p: MonicPolynomial) -> np.ndarray:
    """Coefficients of the reversed polynomial, c_l -> conj(c_{k-l}).

    Equivalently z^k conj(p(1/conj(z))) for a degree-k input.  The result
    is generally not monic, so plain coefficients are returned (ascending
    order, same length as the input).
    """
    return np.conj(p.coeffs[::-1])


def monic_opuc(mu: SpectralMeasureCircle, k_max: int) -> list[MonicPolynomial]:
    """Monic orthogonal polynomials of the measure, degrees 0..k_max.

    Gram-Schmidt on monomials in the discrete inner product
    sum_j w_j f(z_j) conj(g(z_j)), with two projection passes per degree
    so that orthogonality survives small weights.  k_max may equal the
    support size n, in which case the last polynomial is the monic
    polynomial vanishing on the support.
    """
    n = mu.n
    if k_max > n:
        raise SupportTooSmall(f"k_max = {k_max} exceeds support size {n}")
    if k_max < 0:
        raise OutOfRange("k_max must be nonnegative")
    z = mu.points
    w = mu.weights
    monomials = z[:, None] ** np.arange(k_max + 1)[None, :]
    coeffs: list[np.ndarray] = []
    values: list[np.ndarray] = []
    norms2: list[float] = []
    for k in range(k_max + 1):
        c = np.zeros(k + 1, dtype=complex)
        c[-1] = 1.0
        val = monomials[:, k].astype(complex)
        for _ in range(2):
            for l in range(k):
                proj = np.sum(w * val * np.conj(values[l])) / norms2[l]
                val = val - proj * values[l]
                c[: l + 1] -= proj * coeffs[l]
        coeffs.append(c)
        values.append(val)
        norms2.append(float(np.sum(w * np.abs(val) ** 2)))
    return [MonicPolynomial(c) for c in coeffs]


def szego_coefficients(mu: SpectralMeasureCircle, count: int) -> np.ndarray:
    """First `count` Verblunsky coefficients of the measure.

    Runs the Szego recursion on point values:
        p_{k+1} = z p_k - conj(a_k) q_k,   q_{k+1} = q_k - a_k z p_k,
    where p_k, q_k are the monic polynomial and its reversal evaluated on
    the support, and a_k is fixed by orthogonality,
    conj(a_k) = <z p_k, q_k> / ||p_k||^2.  Raises IllConditioned when an
    intermediate squared norm falls below 1e-13.
    """
    n = mu.n
    if count > n:
        raise SupportTooSmall(f"cannot produce {count} coefficients from {n} support points")
    z = mu.points
    w = mu.weights
    p = np.ones(n, dtype=complex)
    q = np.ones(n, dtype=complex)
    alphas = np.empty(count, dtype=complex)
    for k in range(count):
        norm2 = float(np.sum(w * (p.real * p.real + p.imag * p.imag)))
        if norm2 < NORM_FLOOR:
            raise IllConditioned(f"||Phi_{k}||^2 = {norm2:.3e} below {NORM_FLOOR:g}")
        inner = np.sum(w * z * p * np.conj(q))
        ak = np.conj(inner) / norm2
        alphas[k] = ak
        zp = z * p
        p = zp - np.conj(ak) * q
        q = q - ak * zp
    return alphas


def verblunsky_from_measure(mu: SpectralMeasureCircle) -> VerblunskySet:
    """Recover the full coefficient set of an n-point circle measure.

    The final coefficient is renormalized onto the unit circle; if the
    recursion returns it further than 1e-6 from the circle the
    computation is considered lost and IllConditioned is raised.
    """
    alphas = szego_coefficients(mu, mu.n)
    last = abs(alphas[-1])
    if abs(last - 1.0) > BOUNDARY_RECOVERY_TOL:
        raise IllConditioned(f"recovered boundary modulus {last:.17g} is too far from 1")
    alphas[-1] /= last
    return VerblunskySet(alphas)


def geronimus(v: VerblunskySet) -> JacobiMatrix:
    """Jacobi matrix of the pushed-forward measure of a symmetric circle measure.

    Input: 2n real coefficients with alpha_{2n-1} = -1 (the boundary
    convention also sets alpha_{-1} = -1, so terms multiplied by
    1 + alpha_{-1} drop out).  Output entries:
        b_{k+1} = (1 - alpha_{2k-1}) alpha_{2k} - (1 + alpha_{2k-1}) alpha_{2k-2}
        a_{k+1} = sqrt((1 - alpha_{2k-1})(1 - alpha_{2k}^2)(1 + alpha_{2k+1}))
    for 0 <= k <= n-1, with a_n dropped because its last factor vanishes.
    """
    if v.n % 2 != 0:
        raise InvalidBoundary(f"need an even number of coefficients, got {v.n}")
    if np.abs(v.alpha.imag).max() > 1e-12:
        raise InvalidBoundary("coefficients must be real")
    al = v.alpha.real.copy()
    if abs(al[-1] + 1.0) > 1e-12:
        raise InvalidBoundary(f"last coefficient must be -1, got {al[-1]:.17g}")
    al[-1] = -1.0
    m = v.n // 2
    b = np.empty(m)
    a = np.empty(m - 1)
    for k in range(m):
        prev_odd = al[2 * k - 1] if k > 0 else -1.0
        b[k] = (1.0 - prev_odd) * al[2 * k]
        if k > 0:
            b[k] -= (1.0 + prev_odd) * al[2 * k - 2]
        if k < m - 1:
            a[k] = np.sqrt((1.0 - prev_odd) * (1.0 - al[2 * k] ** 2) * (1.0 + al[2 * k + 1]))
    return build_jacobi(b, a)


def szego_project(mu: SpectralMeasureCircle) -> SpectralMeasureLine:
    """Push a conjugation-symmetric circle measure forward under z + 1/z.

    Each conjugate pair {theta, -theta} maps to x = 2 cos(theta) carrying
    the combined weight.  Support at angle 0 or pi (within 1e-8) is
    rejected because the pair collapses there.
    """
    theta = mu.theta
    if np.any(np.abs(theta) < AXIS_TOL) or np.any(np.pi - np.abs(theta) < AXIS_TOL):
        raise SupportAtRealAxis("support point within 1e-8 of angle 0 or pi")
    pos = np.flatnonzero(theta > 0.0)
    neg = np.flatnonzero(theta < 0.0)
    if pos.size != neg.size:
        raise NotSymmetric("unequal numbers of points in the upper and lower half circle")
    pos = pos[np.argsort(theta[pos])]
    neg = neg[np.argsort(-theta[neg])]
    mismatch = np.abs(theta[pos] + theta[neg])
    if mismatch.size and mismatch.max() > PAIR_TOL:
        raise NotSymmetric(f"conjugate pair mismatch {mismatch.max():.3e} exceeds {PAIR_TOL:g}")
    half_angle = 0.5 * (theta[pos] - theta[neg])
    x = 2.0 * np.cos(half_angle)
    w = mu.weights[pos] + mu.weights[neg]
    return SpectralMeasureLine(x, w)
