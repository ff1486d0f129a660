"""Verblunsky coefficients and the matrices built from them.

A coefficient set alpha_0..alpha_{n-1}, with the interior entries in the
open unit disk and the last one on the unit circle, is equivalent to an
n-point probability measure on the circle and to an n x n unitary
five-diagonal matrix.  This module holds the immutable containers
(coefficients, CMV and Jacobi matrices, finitely supported spectral
measures) together with the structural builders and their validation.

All types are immutable values after construction and safe to share
between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrum, NonPositiveOffDiagonal, OutOfRange

# Validation tolerances for construction-time invariants.
INTERIOR_MARGIN = 1e-12     # interior coefficients must satisfy |a| <= 1 - margin
BOUNDARY_TOL = 1e-12        # allowed deviation of |alpha_{n-1}| from 1 before renormalizing
UNITARITY_TOL = 1e-12
TRACE_TOL = 1e-12
DET_TOL = 1e-10
SEPARATION_TOL = 1e-10      # minimal distance between spectral points
WEIGHT_SUM_TOL = 1e-12

TWO_PI = 2.0 * math.pi


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def principal_angle(theta):
    """Map angles to the principal branch (-pi, pi]."""
    t = np.angle(np.exp(1j * np.asarray(theta, dtype=float)))
    return t + 0.0  # normalize -0.0


@dataclass(frozen=True, eq=False)
class VerblunskySet:
    """Coefficients alpha_0..alpha_{n-1}; the last one is unimodular.

    The interior entries must satisfy |alpha_k| <= 1 - 1e-12; the last is
    renormalized to exact unit modulus provided it starts within 1e-12 of
    the circle.  rho_k = sqrt(1 - |alpha_k|^2) is cached for the n-1
    interior coefficients.
    """

    alpha: np.ndarray
    rho: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a = np.array(self.alpha, dtype=complex).reshape(-1)
        if a.size == 0:
            raise OutOfRange("need at least one coefficient")
        if not np.all(np.isfinite(a)):
            raise OutOfRange("coefficients must be finite")
        mods = np.abs(a[:-1])
        if mods.size and mods.max() > 1.0 - INTERIOR_MARGIN:
            raise OutOfRange(
                f"interior coefficient modulus {mods.max():.17g} exceeds 1 - {INTERIOR_MARGIN:g}"
            )
        last = abs(a[-1])
        if abs(last - 1.0) > BOUNDARY_TOL:
            raise OutOfRange(f"|alpha_{a.size - 1}| = {last:.17g}, expected 1 within {BOUNDARY_TOL:g}")
        a[-1] = a[-1] / last
        rho = np.sqrt(1.0 - mods * mods)
        object.__setattr__(self, "alpha", _frozen(a))
        object.__setattr__(self, "rho", _frozen(rho))

    @property
    def n(self) -> int:
        return self.alpha.size

    @property
    def interior(self) -> np.ndarray:
        """The n-1 coefficients strictly inside the disk."""
        return self.alpha[:-1]

    def replace_interior(self, interior) -> "VerblunskySet":
        """New coefficient set with the same boundary coefficient."""
        interior = np.asarray(interior, dtype=complex).reshape(-1)
        if interior.size != self.n - 1:
            raise OutOfRange(f"expected {self.n - 1} interior coefficients, got {interior.size}")
        return VerblunskySet(np.concatenate([interior, self.alpha[-1:]]))


def verblunsky_block(alpha_k: complex) -> np.ndarray:
    """The 2x2 unitary block [[conj(a), rho], [rho, -a]], rho = sqrt(1 - |a|^2)."""
    a = complex(alpha_k)
    mod2 = a.real * a.real + a.imag * a.imag
    if mod2 > 1.0 + 1e-12:
        raise OutOfRange(f"|alpha| = {math.sqrt(mod2):.17g} exceeds 1")
    rho = math.sqrt(max(1.0 - mod2, 0.0))
    return np.array([[np.conj(a), rho], [rho, -a]], dtype=complex)


def lm_factors(v: VerblunskySet) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal unitary factors of the CMV matrix.

    L carries the 2x2 blocks at even coefficient indices, M a leading 1x1
    identity block and the blocks at odd indices.  The boundary
    coefficient contributes a 1x1 block [conj(alpha_{n-1})] to whichever
    factor the parity of n-1 assigns it (including n = 1, where L itself
    degenerates to that block).
    """
    n = v.n
    L = np.zeros((n, n), dtype=complex)
    M = np.zeros((n, n), dtype=complex)
    M[0, 0] = 1.0
    for k in range(0, n - 1, 2):
        L[k : k + 2, k : k + 2] = verblunsky_block(v.alpha[k])
    for k in range(1, n - 1, 2):
        M[k : k + 2, k : k + 2] = verblunsky_block(v.alpha[k])
    if (n - 1) % 2 == 0:
        L[n - 1, n - 1] = np.conj(v.alpha[n - 1])
    else:
        M[n - 1, n - 1] = np.conj(v.alpha[n - 1])
    return L, M


@dataclass(frozen=True, eq=False)
class CMVMatrix:
    """Dense unitary five-diagonal matrix together with its coefficients.

    Construction checks unitarity, bandedness, and the trace and
    determinant identities
        tr C  = conj(alpha_0) - sum_{k>=1} alpha_{k-1} conj(alpha_k)
        det C = (-1)^(n-1) conj(alpha_{n-1}).
    """

    entries: np.ndarray
    source: VerblunskySet

    def __post_init__(self):
        c = np.array(self.entries, dtype=complex)
        n = self.source.n
        if c.shape != (n, n):
            raise OutOfRange(f"expected a {n} x {n} matrix, got {c.shape}")
        resid = np.abs(c.conj().T @ c - np.eye(n)).max()
        if resid > UNITARITY_TOL:
            raise OutOfRange(f"unitarity residual {resid:.3e} exceeds {UNITARITY_TOL:g}")
        rows, cols = np.indices((n, n))
        if np.any(c[np.abs(rows - cols) > 2] != 0.0):
            raise OutOfRange("nonzero entry outside the five-diagonal band")
        a = self.source.alpha
        tr_expected = np.conj(a[0]) - np.sum(a[:-1] * np.conj(a[1:]))
        if abs(np.trace(c) - tr_expected) > TRACE_TOL:
            raise OutOfRange("trace identity violated")
        det_expected = (-1.0) ** (n - 1) * np.conj(a[-1])
        if abs(np.linalg.det(c) - det_expected) > DET_TOL:
            raise OutOfRange("determinant identity violated")
        object.__setattr__(self, "entries", _frozen(c))

    @property
    def n(self) -> int:
        return self.source.n


def build_cmv(v: VerblunskySet) -> CMVMatrix:
    """Assemble the CMV matrix L @ M of a coefficient set."""
    L, M = lm_factors(v)
    return CMVMatrix(L @ M, v)


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Real symmetric tridiagonal matrix with positive off-diagonal."""

    b: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=float).reshape(-1)
        a = np.array(self.a, dtype=float).reshape(-1)
        if b.size == 0:
            raise OutOfRange("need at least one diagonal entry")
        if a.size != b.size - 1:
            raise OutOfRange(f"expected {b.size - 1} off-diagonal entries, got {a.size}")
        if a.size and a.min() <= 0.0:
            raise NonPositiveOffDiagonal(f"off-diagonal minimum {a.min():.17g} is not positive")
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "a", _frozen(a))

    @property
    def n(self) -> int:
        return self.b.size

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.b)
        if self.a.size:
            m += np.diag(self.a, 1) + np.diag(self.a, -1)
        return m


def build_jacobi(b, a) -> JacobiMatrix:
    """Jacobi matrix from diagonal b and positive off-diagonal a."""
    return JacobiMatrix(np.asarray(b, dtype=float), np.asarray(a, dtype=float))


def _check_weights(w: np.ndarray) -> np.ndarray:
    if w.size == 0:
        raise OutOfRange("measure needs at least one point")
    if not np.all(np.isfinite(w)) or w.min() <= 0.0:
        raise OutOfRange("weights must be finite and positive")
    total = w.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise OutOfRange(f"weights sum to {total:.17g}, expected 1 within {WEIGHT_SUM_TOL:g}")
    return w / total


@dataclass(frozen=True, eq=False)
class SpectralMeasureCircle:
    """Finitely supported probability measure on the unit circle.

    Stored canonically: angles on the principal branch (-pi, pi], sorted
    ascending, pairwise angular separation > 1e-10, weights positive and
    renormalized to sum exactly 1.
    """

    theta: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        t = principal_angle(np.array(self.theta, dtype=float).reshape(-1))
        w = np.array(self.weights, dtype=float).reshape(-1)
        if t.size != w.size:
            raise OutOfRange("points and weights must have equal length")
        w = _check_weights(w)
        order = np.argsort(t)
        t, w = t[order], w[order]
        if t.size > 1:
            gaps = np.diff(t)
            wrap = t[0] + TWO_PI - t[-1]
            if min(gaps.min(), wrap) <= SEPARATION_TOL:
                raise DegenerateSpectrum("two support angles closer than 1e-10")
        object.__setattr__(self, "theta", _frozen(t))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.theta.size

    @property
    def points(self) -> np.ndarray:
        """Support points z_j = exp(i theta_j)."""
        return np.exp(1j * self.theta)


@dataclass(frozen=True, eq=False)
class SpectralMeasureLine:
    """Finitely supported probability measure on the real line."""

    x: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if x.size != w.size:
            raise OutOfRange("points and weights must have equal length")
        if not np.all(np.isfinite(x)):
            raise OutOfRange("points must be finite")
        w = _check_weights(w)
        order = np.argsort(x)
        x, w = x[order], w[order]
        if x.size > 1 and np.diff(x).min() <= SEPARATION_TOL:
            raise DegenerateSpectrum("two support points closer than 1e-10")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.x.size
