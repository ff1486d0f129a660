"""Finite-difference Poisson bracket engine on Verblunsky coefficients.

The bracket acts on real observables of the interior coordinates
(u_j, v_j), alpha_j = u_j + i v_j, with the boundary coefficient frozen:

    {f, g} = sum_j rho_j^2 [df/du_j dg/dv_j - df/dv_j dg/du_j].

Partial derivatives are central differences evaluated at two step sizes
(h and h/2) and Richardson-extrapolated; the two raw values also provide
the error estimate and a non-smoothness guard.  Evaluating brackets
numerically exercises the eigensolver and both spectral maps end to end,
which is exactly what the identity suites are for.

Every bracket evaluation is independent and pure; verification sweeps may
run probe points in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import SpectralMeasureCircle, VerblunskySet, build_cmv
from .errors import (
    BranchProximity,
    DegenerateSpectrum,
    InvalidParams,
    MatchingAmbiguous,
    NonDifferentiable,
    RhoTooSmall,
)
from .opuc import unitary_eigensystem, verblunsky_from_measure

DEFAULT_STEP = 1e-5
GRADIENT_AGREEMENT = 1e-4   # max relative disagreement between the two step sizes
PROBE_RHO_FLOOR = 1e-6
BRANCH_MARGIN = 0.1         # keep arg(alpha_{n-1}) this far from +-pi
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Observable:
    """Named real-valued function of a coefficient set (boundary frozen)."""

    name: str
    fn: Callable[[VerblunskySet], float]

    def __call__(self, v: VerblunskySet) -> float:
        return float(self.fn(v))


@dataclass(frozen=True)
class BracketReport:
    """Extrapolated bracket value with the steps used and an error estimate."""

    value: float
    steps: tuple[float, float]
    error: float


def interior_coordinates(v: VerblunskySet) -> np.ndarray:
    """Flat real coordinates [u_0, v_0, ..., u_{n-2}, v_{n-2}]."""
    out = np.empty(2 * (v.n - 1))
    out[0::2] = v.interior.real
    out[1::2] = v.interior.imag
    return out


def with_coordinates(v: VerblunskySet, coords: np.ndarray) -> VerblunskySet:
    """Coefficient set at the given interior coordinates, same boundary."""
    return v.replace_interior(coords[0::2] + 1j * coords[1::2])


def _raw_gradient(obs: Observable, v: VerblunskySet, h: float) -> np.ndarray:
    x0 = interior_coordinates(v)
    grad = np.empty(x0.size)
    for i in range(x0.size):
        xp = x0.copy()
        xp[i] += h
        fp = obs(with_coordinates(v, xp))
        xp[i] = x0[i] - h
        fm = obs(with_coordinates(v, xp))
        grad[i] = (fp - fm) / (2.0 * h)
    return grad


def coordinate_gradient(obs: Observable, v: VerblunskySet, h: float = DEFAULT_STEP):
    """Richardson-extrapolated gradient plus the raw two-step values.

    Raises NonDifferentiable when the step-h and step-h/2 gradients
    disagree beyond 1e-4 relative to the gradient scale (constant
    observables come out as zero gradients, not as errors).
    """
    g1 = _raw_gradient(obs, v, h)
    g2 = _raw_gradient(obs, v, h / 2.0)
    scale = max(np.abs(g1).max(initial=0.0), np.abs(g2).max(initial=0.0), 1.0)
    if np.abs(g1 - g2).max(initial=0.0) > GRADIENT_AGREEMENT * scale:
        raise NonDifferentiable(
            f"{obs.name}: two-step gradients disagree by "
            f"{np.abs(g1 - g2).max() / scale:.3e} relative"
        )
    return (4.0 * g2 - g1) / 3.0, g1, g2


def _check_probe(v: VerblunskySet, h: float):
    if v.n == 1:
        return
    if v.rho.min() <= PROBE_RHO_FLOOR:
        raise RhoTooSmall(f"probe point has rho = {v.rho.min():.3e}")
    # the stencil must not push a coefficient out of the disk
    if np.abs(v.interior).max() + 2.0 * h >= 1.0 - 1e-12:
        raise RhoTooSmall(f"step {h:g} would push a coefficient onto the circle")


def bracket_from_gradients(gf: np.ndarray, gg: np.ndarray, rho: np.ndarray) -> float:
    """Assemble sum_j rho_j^2 (df/du dg/dv - df/dv dg/du) from flat gradients."""
    rho2 = rho * rho
    return float(np.sum(rho2 * (gf[0::2] * gg[1::2] - gf[1::2] * gg[0::2])))


def al_bracket(f: Observable, g: Observable, v: VerblunskySet, h: float = DEFAULT_STEP) -> BracketReport:
    """Numerical Ablowitz-Ladik bracket {f, g} at the probe point v."""
    _check_probe(v, h)
    _, f1, f2 = coordinate_gradient(f, v, h)
    _, g1, g2 = coordinate_gradient(g, v, h)
    coarse = bracket_from_gradients(f1, g1, v.rho)
    fine = bracket_from_gradients(f2, g2, v.rho)
    value = (4.0 * fine - coarse) / 3.0
    return BracketReport(value=value, steps=(h, h / 2.0), error=abs(fine - coarse) / 3.0)


class SpectralObservables:
    """Eigenvalue angles and weights with labels stable under perturbation.

    Labels refer to the base point's spectral measure sorted by angle.
    Evaluation at a perturbed coefficient set matches each base angle to
    the nearest perturbed angle (circularly); a second candidate within
    twice the best distance raises MatchingAmbiguous.  Matched angles are
    unwrapped to the branch closest to the base angle so the observables
    stay continuous.
    """

    def __init__(self, v: VerblunskySet, separation: float = 1e-6):
        base = unitary_eigensystem(build_cmv(v))
        gaps = np.diff(base.theta)
        wrap = base.theta[0] + TWO_PI - base.theta[-1]
        if base.n > 1 and min(gaps.min(), wrap) <= separation:
            raise DegenerateSpectrum(f"base spectrum separation below {separation:g}")
        self.base = base
        self.n = base.n

    def _matched(self, w: VerblunskySet):
        mu = unitary_eigensystem(build_cmv(w))
        taken = set()
        theta = np.empty(self.n)
        weights = np.empty(self.n)
        for j in range(self.n):
            delta = mu.theta - self.base.theta[j]
            dist = np.abs(delta - TWO_PI * np.round(delta / TWO_PI))
            order = np.argsort(dist)
            i = int(order[0])
            if self.n > 1 and dist[order[1]] < 2.0 * dist[order[0]]:
                raise MatchingAmbiguous(f"labels {j}: two candidates within a factor 2")
            if i in taken:
                raise MatchingAmbiguous("two base labels matched the same eigenvalue")
            taken.add(i)
            d = delta[i] - TWO_PI * np.round(delta[i] / TWO_PI)
            theta[j] = self.base.theta[j] + d
            weights[j] = mu.weights[i]
        return theta, weights

    def theta(self, j: int) -> Observable:
        return Observable(f"theta_{j}", lambda w, j=j: self._matched(w)[0][j])

    def mass(self, j: int) -> Observable:
        return Observable(f"mu_{j}", lambda w, j=j: self._matched(w)[1][j])

    def log_mass_ratio(self, j: int, l: int) -> Observable:
        def fn(w, j=j, l=l):
            weights = self._matched(w)[1]
            return np.log(weights[j] / weights[l])

        return Observable(f"log(mu_{j}/mu_{l})", fn)

    def total_mass(self) -> Observable:
        return Observable("total_mass", lambda w: self._matched(w)[1].sum())


def spectral_observables(v: VerblunskySet, separation: float = 1e-6) -> SpectralObservables:
    """Labelled angle/weight observables at the probe point."""
    return SpectralObservables(v, separation)


def hamiltonian_observables(v: VerblunskySet, m: int) -> tuple[Observable, Observable]:
    """(Re K_m, Im K_m) as observables; v only fixes the boundary coefficient."""
    if m < 1:
        raise InvalidParams("need m >= 1")

    def re_km(w, m=m):
        return np.trace(np.linalg.matrix_power(np.asarray(build_cmv(w).entries), m)).real / m

    def im_km(w, m=m):
        return np.trace(np.linalg.matrix_power(np.asarray(build_cmv(w).entries), m)).imag / m

    return Observable(f"Re K_{m}", re_km), Observable(f"Im K_{m}", im_km)


def coordinate_observables(v: VerblunskySet, j: int) -> tuple[Observable, Observable]:
    """(u_j, v_j) as observables, 0 <= j <= n-2."""
    if not 0 <= j <= v.n - 2:
        raise InvalidParams(f"coordinate index {j} outside 0..{v.n - 2}")
    return (
        Observable(f"u_{j}", lambda w, j=j: w.alpha[j].real),
        Observable(f"v_{j}", lambda w, j=j: w.alpha[j].imag),
    )


def cotangent_residual(v: VerblunskySet, labels: tuple[int, int, int] = (0, 1, 2), h: float = DEFAULT_STEP) -> float:
    """Defect of the mass-ratio bracket against the cotangent sum.

    For any three labels (i, j, k) of the eigenvalues:
        {log(mu_j/mu_i), log(mu_k/mu_i)}
          - [2 cot((th_i - th_j)/2) + 2 cot((th_j - th_k)/2) + 2 cot((th_k - th_i)/2)]
    which should vanish; the returned residual is that difference.
    """
    if v.n < 3:
        raise InvalidParams("need n >= 3")
    i, j, k = labels
    obs = spectral_observables(v)
    f = obs.log_mass_ratio(j, i)
    g = obs.log_mass_ratio(k, i)
    numeric = al_bracket(f, g, v, h).value
    th = obs.base.theta
    predicted = (
        2.0 / np.tan(0.5 * (th[i] - th[j]))
        + 2.0 / np.tan(0.5 * (th[j] - th[k]))
        + 2.0 / np.tan(0.5 * (th[k] - th[i]))
    )
    return float(numeric - predicted)


def jacobian_prediction(mu: SpectralMeasureCircle) -> float:
    """Closed-form value -2^(1-n) prod(rho_j^2) / prod(mu_j) of the spectral
    Jacobian at the given measure."""
    v = verblunsky_from_measure(mu)
    rho2 = np.prod(v.rho * v.rho) if v.n > 1 else 1.0
    return float(-(2.0 ** (1 - mu.n)) * rho2 / np.prod(mu.weights))


JACOBIAN_STEP = 4e-4  # larger than the bracket step: the map is smooth and
#                       arg() rounding noise scales like eps / h


def spectral_to_verblunsky_jacobian(mu: SpectralMeasureCircle, h: float = JACOBIAN_STEP) -> float:
    """Numerical Jacobian determinant of the spectral-to-coefficient map.

    Coordinates (theta_1, mu_1, ..., theta_{n-1}, mu_{n-1}, theta_n) with
    mu_n dependent map to (u_0, v_0, ..., u_{n-2}, v_{n-2}, phi) with
    phi = arg(alpha_{n-1}); differentiation is by central differences at
    steps h and h/2 with Richardson extrapolation of the matrix.
    """
    n = mu.n
    theta0 = mu.theta.copy()
    w0 = mu.weights.copy()

    def outputs(theta, weights):
        v = verblunsky_from_measure(SpectralMeasureCircle(theta, weights))
        phi = np.angle(v.alpha[-1])
        return np.concatenate([interior_coordinates(v), [phi]]) if n > 1 else np.array([phi])

    base_phi = np.angle(verblunsky_from_measure(mu).alpha[-1])
    if np.pi - abs(base_phi) < BRANCH_MARGIN:
        raise BranchProximity(f"arg(alpha_{n-1}) = {base_phi:.6f} is within 0.1 of the cut")
    if np.pi - np.abs(theta0).max() < 10.0 * h:
        raise BranchProximity("support too close to angle pi for stable differentiation")

    def column(plus, minus):
        # unwrap the phase component relative to the base value
        d = plus - minus
        d[-1] -= TWO_PI * np.round(d[-1] / TWO_PI)
        return d

    def jacobian_at(step):
        dim = 2 * n - 1
        jac = np.empty((dim, dim))
        col = 0
        for j in range(n):
            tp = theta0.copy()
            tp[j] += step
            plus = outputs(tp, w0)
            tp[j] = theta0[j] - step
            minus = outputs(tp, w0)
            jac[:, col] = column(plus, minus) / (2.0 * step)
            col += 1
            if j < n - 1:
                hw = min(step, 0.25 * w0[j], 0.25 * w0[-1])
                wp = w0.copy()
                wp[j] += hw
                wp[-1] -= hw
                plus = outputs(theta0, wp)
                wp[j] = w0[j] - hw
                wp[-1] = w0[-1] + hw
                minus = outputs(theta0, wp)
                jac[:, col] = column(plus, minus) / (2.0 * hw)
                col += 1
        return jac

    refined = (4.0 * jacobian_at(h / 2.0) - jacobian_at(h)) / 3.0
    return float(np.linalg.det(refined))
