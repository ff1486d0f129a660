"""Exact sparse matrix models for beta ensembles.

Coefficient distributions:

* circular ensemble: independent alpha_k on the disk with rotation
  invariant density proportional to (1 - |z|^2)^((nu-3)/2), nu = beta(n-k-1)+1;
  the boundary case nu = 1 is uniform on the circle itself.
* Jacobi ensemble: independent real alpha_k on (-1, 1) with density
  proportional to (1-x)^(s-1) (1+x)^(t-1), pushed to a tridiagonal matrix
  through the Geronimus relations.
* Hermite ensemble: Gaussian diagonal, chi off-diagonal over sqrt(2) with
  beta*(n-k) degrees of freedom (the bottom row gets beta).

Samplers are pure given a generator; Monte Carlo batches parallelize
across independent stream ids with no cross-talk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import JacobiMatrix, VerblunskySet, build_jacobi, lm_factors
from .errors import (
    DomainViolation,
    EmptySample,
    InvalidNu,
    InvalidParams,
)
from .opuc import geronimus

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream: (seed, stream_id) pins the sequence."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream or a live Generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidParams(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble to draw from and with which parameters."""

    family: str
    n: int
    beta: float
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.family not in ("circular", "jacobi", "hermite"):
            raise InvalidParams(f"unknown family {self.family!r}")
        if self.n < 1:
            raise InvalidParams("need at least one particle")
        if not self.beta > 0.0:
            raise InvalidParams("beta must be positive")
        if self.family == "jacobi" and (self.a <= -1.0 or self.b <= -1.0):
            raise InvalidParams("jacobi exponents must exceed -1")


def _disk_samples(nu: float, size, rng: np.random.Generator) -> np.ndarray:
    """Rotation-invariant disk variates with density ~ (1-|z|^2)^((nu-3)/2).

    Realized as sqrt(s) e^(i phi): phi uniform, and s such that
    (1-s)^((nu-1)/2) is uniform on (0, 1].  For nu = 1 the modulus is
    exactly 1 and only the angle is random.
    """
    if nu < 1.0:
        raise InvalidNu(f"nu = {nu} must be >= 1")
    phase = np.exp(1j * TWO_PI * rng.random(size))
    if nu == 1.0:
        return phase
    u = 1.0 - rng.random(size)  # in (0, 1], keeps the modulus strictly below 1
    s = 1.0 - u ** (2.0 / (nu - 1.0))
    return np.sqrt(s) * phase


def sample_theta(nu: float, rng) -> complex:
    """One draw from the disk distribution with parameter nu >= 1."""
    return complex(_disk_samples(float(nu), None, as_generator(rng)))


def _beta_interval_samples(s: float, t: float, size, rng: np.random.Generator) -> np.ndarray:
    """Variates on (-1, 1) with density ~ (1-x)^(s-1) (1+x)^(t-1).

    x = 1 - 2 Y for Y ~ Beta(s, t) built from two gamma draws.  Underflowed
    draws (possible for tiny shapes) are rejected and redrawn so the result
    stays strictly inside the interval.
    """
    if not (s > 0.0 and t > 0.0):
        raise InvalidParams(f"beta parameters must be positive, got ({s}, {t})")
    scalar = size is None
    m = 1 if scalar else int(size)
    g1 = rng.gamma(s, size=m)
    g2 = rng.gamma(t, size=m)
    x = 1.0 - 2.0 * g1 / (g1 + g2)
    bad = ~(np.abs(x) < 1.0)
    while np.any(bad):
        k = int(np.count_nonzero(bad))
        r1 = rng.gamma(s, size=k)
        r2 = rng.gamma(t, size=k)
        x[bad] = 1.0 - 2.0 * r1 / (r1 + r2)
        bad = ~(np.abs(x) < 1.0)
    return x[0] if scalar else x


def sample_beta_interval(s: float, t: float, rng) -> float:
    """One draw from the interval beta distribution on (-1, 1)."""
    return float(_beta_interval_samples(float(s), float(t), None, as_generator(rng)))


def _circular_nus(n: int, beta: float) -> np.ndarray:
    return beta * (n - 1.0 - np.arange(n)) + 1.0


def sample_circular_beta(n: int, beta: float, rng) -> VerblunskySet:
    """Coefficient draw whose CMV eigenvalues follow the circular beta ensemble."""
    if n < 1:
        raise InvalidParams("need n >= 1")
    if not beta > 0.0:
        raise InvalidParams("beta must be positive")
    gen = as_generator(rng)
    alphas = np.array([_disk_samples(nu, None, gen) for nu in _circular_nus(n, beta)])
    return VerblunskySet(alphas)


def _jacobi_shapes(n: int, beta: float, a: float, b: float) -> list[tuple[float, float]]:
    shapes = []
    for k in range(2 * n - 1):
        if k % 2 == 0:
            s = (2 * n - k - 2) * beta / 4.0 + a + 1.0
            t = (2 * n - k - 2) * beta / 4.0 + b + 1.0
        else:
            s = (2 * n - k - 3) * beta / 4.0 + a + b + 2.0
            t = (2 * n - k - 1) * beta / 4.0
        shapes.append((s, t))
    return shapes


def sample_jacobi_beta(n: int, beta: float, a: float, b: float, rng) -> JacobiMatrix:
    """Tridiagonal draw whose eigenvalues follow the Jacobi beta ensemble on [-2, 2]."""
    spec = EnsembleSpec("jacobi", n, beta, a, b)  # validates parameters
    gen = as_generator(rng)
    al = np.empty(2 * n)
    for k, (s, t) in enumerate(_jacobi_shapes(spec.n, spec.beta, spec.a, spec.b)):
        al[k] = _beta_interval_samples(s, t, None, gen)
    al[2 * n - 1] = -1.0
    return geronimus(VerblunskySet(al.astype(complex)))


def sample_hermite_beta(n: int, beta: float, rng) -> JacobiMatrix:
    """Tridiagonal draw whose eigenvalues follow the Hermite beta ensemble.

    Diagonal entries are standard Gaussian; the off-diagonal entry in row
    k is chi with beta*(n-k) degrees of freedom over sqrt(2), so the
    degrees of freedom shrink toward the bottom row.  chi_nu / sqrt(2) is
    realized exactly as sqrt(Gamma(nu/2, scale=1)).
    """
    if n < 1:
        raise InvalidParams("need n >= 1")
    if not beta > 0.0:
        raise InvalidParams("beta must be positive")
    gen = as_generator(rng)
    diag = gen.standard_normal(n)
    if n == 1:
        return build_jacobi(diag, np.empty(0))
    dof = beta * (n - np.arange(1, n))
    off = np.sqrt(gen.gamma(dof / 2.0))
    while np.any(off <= 0.0):
        k = off <= 0.0
        off[k] = np.sqrt(gen.gamma(dof[k] / 2.0))
    return build_jacobi(diag, off)


def gibbs_log_density(spec: EnsembleSpec, points) -> float:
    """Unnormalized log density of the ensemble's eigenvalue distribution.

    beta * sum_{j<k} log of the pairwise distances plus the one-body
    potential terms of the family.  Intended as a test oracle, not a
    sampling device.
    """
    pts = np.asarray(points, dtype=float).reshape(-1)
    if pts.size != spec.n:
        raise DomainViolation(f"expected {spec.n} points, got {pts.size}")
    if not np.all(np.isfinite(pts)):
        raise DomainViolation("points must be finite")
    if spec.family == "circular":
        z = np.exp(1j * pts)
        diffs = np.abs(z[:, None] - z[None, :])[np.triu_indices(spec.n, 1)]
        if np.any(diffs == 0.0):
            return -np.inf
        return float(spec.beta * np.log(diffs).sum())
    if spec.family == "hermite":
        diffs = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(spec.n, 1)]
        if np.any(diffs == 0.0):
            return -np.inf
        return float(spec.beta * np.log(diffs).sum() - 0.5 * np.sum(pts * pts))
    if np.any(np.abs(pts) > 2.0):
        raise DomainViolation("jacobi points must lie in [-2, 2]")
    diffs = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(spec.n, 1)]
    with np.errstate(divide="ignore"):
        body = spec.a * np.log(2.0 - pts) + spec.b * np.log(2.0 + pts)
        pair = np.log(diffs) if diffs.size else np.zeros(0)
    if np.any(diffs == 0.0):
        return -np.inf
    return float(spec.beta * pair.sum() + body.sum())


def ks_statistic(samples, cdf) -> float:
    """Sup-norm distance between the empirical CDF of sorted samples and cdf."""
    x = np.asarray(samples, dtype=float).reshape(-1)
    if x.size == 0:
        raise EmptySample("no samples")
    if np.any(np.diff(x) < 0.0):
        raise InvalidParams("samples must be sorted ascending")
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except TypeError:
        f = np.array([float(cdf(t)) for t in x])
    if np.any(f < -1e-12) or np.any(f > 1.0 + 1e-12):
        raise InvalidParams("cdf values must lie in [0, 1]")
    if np.any(np.diff(f) < -1e-12):
        raise InvalidParams("cdf must be monotone over the sample")
    m = x.size
    grid = np.arange(1, m + 1) / m
    return float(max((grid - f).max(), (f - (grid - 1.0 / m)).max()))


# --- batched eigenvalue draws (used by the CLI and the statistical tests) ---


def _batched_cmv(alpha: np.ndarray) -> np.ndarray:
    """Stack of CMV matrices from a (count, n) coefficient array."""
    count, n = alpha.shape
    rho = np.sqrt(np.clip(1.0 - np.abs(alpha[:, :-1]) ** 2, 0.0, None))

    def block(k):
        out = np.empty((count, 2, 2), dtype=complex)
        out[:, 0, 0] = np.conj(alpha[:, k])
        out[:, 0, 1] = rho[:, k]
        out[:, 1, 0] = rho[:, k]
        out[:, 1, 1] = -alpha[:, k]
        return out

    L = np.zeros((count, n, n), dtype=complex)
    M = np.zeros((count, n, n), dtype=complex)
    M[:, 0, 0] = 1.0
    for k in range(0, n - 1, 2):
        L[:, k : k + 2, k : k + 2] = block(k)
    for k in range(1, n - 1, 2):
        M[:, k : k + 2, k : k + 2] = block(k)
    if (n - 1) % 2 == 0:
        L[:, n - 1, n - 1] = np.conj(alpha[:, n - 1])
    else:
        M[:, n - 1, n - 1] = np.conj(alpha[:, n - 1])
    return L @ M


def _batched_tridiagonal(b: np.ndarray, a: np.ndarray) -> np.ndarray:
    count, n = b.shape
    m = np.zeros((count, n, n))
    idx = np.arange(n)
    m[:, idx, idx] = b
    if n > 1:
        j = np.arange(n - 1)
        m[:, j, j + 1] = a
        m[:, j + 1, j] = a
    return m


def eigenvalue_samples(spec: EnsembleSpec, count: int, rng) -> np.ndarray:
    """(count, n) array of sorted eigenvalue draws for the given ensemble.

    Circular draws are angles in (-pi, pi]; the real-line families return
    plain reals.  Each row is one independent matrix draw, columns sorted
    ascending.
    """
    if count < 1:
        raise InvalidParams("need count >= 1")
    gen = as_generator(rng)
    n = spec.n
    if spec.family == "circular":
        alpha = np.empty((count, n), dtype=complex)
        for k, nu in enumerate(_circular_nus(n, spec.beta)):
            alpha[:, k] = _disk_samples(nu, count, gen)
        lam = np.linalg.eigvals(_batched_cmv(alpha))
        return np.sort(np.angle(lam), axis=1)
    if spec.family == "jacobi":
        al = np.empty((count, 2 * n))
        for k, (s, t) in enumerate(_jacobi_shapes(n, spec.beta, spec.a, spec.b)):
            al[:, k] = _beta_interval_samples(s, t, count, gen)
        al[:, 2 * n - 1] = -1.0
        b = np.empty((count, n))
        a = np.empty((count, n - 1))
        for k in range(n):
            prev_odd = al[:, 2 * k - 1] if k > 0 else -1.0
            b[:, k] = (1.0 - prev_odd) * al[:, 2 * k]
            if k > 0:
                b[:, k] -= (1.0 + prev_odd) * al[:, 2 * k - 2]
            if k < n - 1:
                a[:, k] = np.sqrt((1.0 - prev_odd) * (1.0 - al[:, 2 * k] ** 2) * (1.0 + al[:, 2 * k + 1]))
        return np.sort(np.linalg.eigvalsh(_batched_tridiagonal(b, a)), axis=1)
    diag = gen.standard_normal((count, n))
    if n == 1:
        return np.sort(diag, axis=1)
    dof = spec.beta * (n - np.arange(1, n))
    off = np.sqrt(gen.gamma(np.broadcast_to(dof / 2.0, (count, n - 1))))
    return np.sort(np.linalg.eigvalsh(_batched_tridiagonal(diag, off)), axis=1)


def random_verblunsky(n: int, rng, radius: float = 0.7, min_separation: float | None = None) -> VerblunskySet:
    """Generic coefficient set: interior uniform in a disk, boundary uniform.

    With min_separation set, redraws until all eigenvalue angles of the
    CMV matrix are at least that far apart (circularly).
    """
    gen = as_generator(rng)
    if not 0.0 < radius < 1.0:
        raise InvalidParams("radius must lie in (0, 1)")
    for _ in range(256):
        mod = radius * np.sqrt(gen.random(n - 1))
        arg = TWO_PI * gen.random(n - 1)
        interior = mod * np.exp(1j * arg)
        last = np.exp(1j * TWO_PI * gen.random())
        v = VerblunskySet(np.concatenate([interior, [last]]))
        if min_separation is None:
            return v
        L, M = lm_factors(v)
        theta = np.sort(np.angle(np.linalg.eigvals(L @ M)))
        gaps = np.diff(theta)
        wrap = theta[0] + TWO_PI - theta[-1]
        if n == 1 or min(gaps.min(initial=np.inf), wrap) > min_separation:
            return v
    raise InvalidParams("could not find a coefficient set with the requested separation")
