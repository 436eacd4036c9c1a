"""Logarithmic negativity of the beam-splitter output and its thresholds.

The two positive roots xi_- <= xi_+ of

    xi^4 - (det A + det B - 2 det C) xi^2 + det V = 0

are the symplectic eigenvalues of the partially transposed two-mode
covariance, and N = max{0, -log2(2 xi_-)}.  For the squeezed-thermal
scenario the same quantity has a closed form in (tau, u, nbar, theta)
alone, independent of both phases; this module provides both routes, the
critical thermal occupation at which N reaches zero (analytic, with a
bisection fallback), the optimal-angle dichotomy, and the small-deviation
expansion of the threshold around the 50:50 setting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import (
    BeamSplitter,
    CovMat2,
    DomainError,
    GaussianSpec,
    ThermalParams,
    apply_beam_splitter,
    covariance_from_spec,
    symplectic_eigenvalues,
    thermal_covariance,
    to_quadrature,
)

# cos(4*theta) at or above this value means no mixing at all (theta a
# multiple of pi/2 up to float rounding): the output is a product state.
_NO_MIXING_COS = 1.0 - 1e-14

_PT_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


class SymplecticPTSpectrum(NamedTuple):
    """Positive roots of the partial-transpose characteristic equation."""

    xi_minus: float
    xi_plus: float


class CriticalNoise(NamedTuple):
    """Critical thermal occupation plus a status flag.

    flag is "ok" for a genuine threshold, "classical-input" or "no-mixing"
    when the output is never entangled (value 0 by convention), and
    "infinite" when the threshold exceeds every representable occupation.
    """

    value: float
    flag: str

    @property
    def never_entangled(self) -> bool:
        return self.flag in ("classical-input", "no-mixing")

    @property
    def infinite(self) -> bool:
        return self.flag == "infinite"


class ClosedFormTerms(NamedTuple):
    s: float
    s_plus: float
    s_minus: float


class OptimalAngle(NamedTuple):
    theta: float
    diagnosis: str
    s_at_zero: float
    s_at_quarter: float


@dataclass(frozen=True)
class ScenarioParams:
    """Full parameter set: squeezed-thermal input, thermal input, splitter."""

    tau: float
    u: float
    nbar: float
    theta: float
    phi: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        # Delegate range checks to the component constructors.
        self.spec()
        self.thermal()
        self.splitter()

    def spec(self) -> GaussianSpec:
        return GaussianSpec(self.tau, self.u, self.phi_b)

    def thermal(self) -> ThermalParams:
        return ThermalParams(self.nbar)

    def splitter(self) -> BeamSplitter:
        return BeamSplitter(self.theta, self.phi)


def output_covariance(p: ScenarioParams) -> CovMat2:
    """Two-mode covariance produced by the scenario's beam splitter."""
    return apply_beam_splitter(
        covariance_from_spec(p.spec()), thermal_covariance(p.thermal()), p.splitter()
    )


def pt_symplectic_spectrum(v: CovMat2) -> SymplecticPTSpectrum:
    """PT symplectic eigenvalues from the block determinants of V."""
    m = v.matrix
    det_a = np.linalg.det(m[:2, :2]).real
    det_b = np.linalg.det(m[2:, 2:]).real
    det_c = np.linalg.det(m[:2, 2:]).real
    det_v = np.linalg.det(m).real
    if det_v <= 0.0:
        raise DomainError(f"covariance determinant must be positive, got {det_v}")
    delta = det_a + det_b - 2.0 * det_c
    disc = delta * delta - 4.0 * det_v
    if disc < -1e-9 * max(delta * delta, 1.0):
        raise DomainError(
            "complex partial-transpose roots signal an unphysical covariance "
            f"(discriminant {disc})"
        )
    root = math.sqrt(max(disc, 0.0))
    xi_plus_sq = 0.5 * (delta + root)
    xi_minus_sq = det_v / xi_plus_sq  # stable form of (delta - root)/2
    return SymplecticPTSpectrum(math.sqrt(xi_minus_sq), math.sqrt(xi_plus_sq))


def pt_symplectic_spectrum_quadrature(v: CovMat2) -> SymplecticPTSpectrum:
    """Same spectrum via eigendecomposition of the momentum-flipped
    quadrature covariance against the symplectic form (independent route)."""
    vr = _PT_FLIP @ to_quadrature(v) @ _PT_FLIP
    lo, hi = symplectic_eigenvalues(vr)
    return SymplecticPTSpectrum(float(lo), float(hi))


def log_negativity(v: CovMat2) -> float:
    """N = max{0, -log2(2 xi_-)}; zero exactly when the PT state is physical."""
    spectrum = pt_symplectic_spectrum(v)
    return max(0.0, -math.log2(2.0 * spectrum.xi_minus))


def closed_form_terms(tau: float, u: float, nbar: float, theta: float) -> ClosedFormTerms:
    """The scalar combinations entering the closed-form negativity.

    s_plus/s_minus = 1/(u^2 (1-2 tau)) +/- (2 nbar + 1) and
    s = [(nbar - tau + 1) s_plus - (nbar + tau) s_minus cos(4 theta)] / 2.
    Inputs are assumed validated (see ScenarioParams).
    """
    w = 1.0 - 2.0 * tau
    g = 1.0 / (u * u * w)
    m = 2.0 * nbar + 1.0
    s_plus = g + m
    s_minus = g - m
    s = 0.5 * ((nbar - tau + 1.0) * s_plus - (nbar + tau) * s_minus * math.cos(4.0 * theta))
    return ClosedFormTerms(s, s_plus, s_minus)


def negativity_closed_form(p: ScenarioParams) -> float:
    """Closed-form N(tau, u, nbar, theta); independent of phi and phi_b.

    Whether N is zero is decided by the polynomial entanglement margin,
    which has no square-root cancellation: near degenerate angles the
    direct expression s - sqrt(s^2 - k^2) loses half the machine digits
    exactly where N must vanish identically.
    """
    m = 2.0 * p.nbar + 1.0
    if _entanglement_margin(p.tau, p.u, math.cos(4.0 * p.theta), m) <= 0.0:
        return 0.0
    terms = closed_form_terms(p.tau, p.u, p.nbar, p.theta)
    k_sq = (m / p.u) ** 2
    disc = max(terms.s * terms.s - k_sq, 0.0)
    # (2 xi_-)^2 = s - sqrt(s^2 - k^2), evaluated in cancellation-free form.
    two_xi_minus_sq = k_sq / (terms.s + math.sqrt(disc))
    return max(0.0, -0.5 * math.log2(two_xi_minus_sq))


def negativity_5050(tau: float, nbar: float) -> float:
    """N at a 50:50 splitter: max{0, -log2 sqrt((2 nbar + 1)(1 - 2 tau))}.

    Independent of the input purity.
    """
    GaussianSpec(tau, 1.0)
    ThermalParams(nbar)
    return max(0.0, -0.5 * math.log2((2.0 * nbar + 1.0) * (1.0 - 2.0 * tau)))


def critical_noise_5050(tau: float) -> float:
    """Thermal occupation killing 50:50 entanglement: tau / (1 - 2 tau).

    Strictly increasing in tau and divergent as tau approaches 1/2.
    """
    GaussianSpec(tau, 1.0)
    return tau / (1.0 - 2.0 * tau)


def _entanglement_margin(tau: float, u: float, cos4t: float, m: float) -> float:
    """Positive exactly when the output with 2 nbar + 1 = m is entangled.

    Quadratic in m: alpha m^2 + beta m + gamma = 2 (2 s - 1 - m^2/u^2).
    """
    w = 1.0 - 2.0 * tau
    g = 1.0 / (u * u * w)
    alpha = (1.0 + cos4t) - 2.0 / (u * u)
    beta = (1.0 - cos4t) * (g + w)
    gamma = (1.0 + cos4t) / (u * u) - 2.0
    return alpha * m * m + beta * m + gamma


def critical_noise(tau: float, u: float, theta: float) -> CriticalNoise:
    """Occupation nbar_c where the output negativity transitions to zero.

    Solved analytically: the vanishing condition is quadratic in
    m = 2 nbar + 1 with a downward parabola, and for tau > 0 with genuine
    mixing the margin at nbar = 0 is tau (1 - cos 4 theta) (g - 1) > 0, so
    exactly one root exceeds m = 1.  For u = 1 the result collapses to
    tau / (1 - 2 tau) at every mixing angle.  Degenerate angles (theta a
    multiple of pi/2) and classical inputs (tau = 0) never entangle and
    return 0 with distinct flags.
    """
    GaussianSpec(tau, u)
    if not math.isfinite(theta):
        raise DomainError("beam splitter angle must be finite")
    if tau == 0.0:
        return CriticalNoise(0.0, "classical-input")
    cos4t = math.cos(4.0 * theta)
    if cos4t >= _NO_MIXING_COS:
        return CriticalNoise(0.0, "no-mixing")
    w = 1.0 - 2.0 * tau
    g = 1.0 / (u * u * w)
    alpha = (1.0 + cos4t) - 2.0 / (u * u)  # < 0 for u <= 1, cos4t < 1
    beta = (1.0 - cos4t) * (g + w)
    gamma = (1.0 + cos4t) / (u * u) - 2.0
    disc = beta * beta - 4.0 * alpha * gamma
    q = -0.5 * (beta + math.sqrt(disc))  # beta > 0, so q is the stable pivot
    m_star = max(q / alpha, gamma / q)
    if not math.isfinite(m_star):
        return CriticalNoise(math.inf, "infinite")
    return CriticalNoise(0.5 * (m_star - 1.0), "ok")


def critical_noise_bisection(
    tau: float,
    u: float,
    theta: float,
    bracket: tuple[float, float] = (0.0, 1.0e3),
    tol: float = 1e-10,
) -> CriticalNoise:
    """Bisection fallback for ``critical_noise`` on the same margin function.

    Returns the "infinite" sentinel when the threshold exceeds the bracket.
    Raises RuntimeError if the margin is not positive at the lower end for
    parameters that must entangle, since that indicates a broken formula
    rather than a domain issue.
    """
    GaussianSpec(tau, u)
    if tau == 0.0:
        return CriticalNoise(0.0, "classical-input")
    cos4t = math.cos(4.0 * theta)
    if cos4t >= _NO_MIXING_COS:
        return CriticalNoise(0.0, "no-mixing")
    lo, hi = bracket

    def margin(nbar: float) -> float:
        return _entanglement_margin(tau, u, cos4t, 2.0 * nbar + 1.0)

    if margin(lo) <= 0.0:
        raise RuntimeError(
            "no sign change in bracket: entangled margin not positive at "
            f"nbar={lo} for tau={tau}, u={u}, theta={theta}"
        )
    if margin(hi) > 0.0:
        return CriticalNoise(math.inf, "infinite")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if margin(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return CriticalNoise(0.5 * (lo + hi), "ok")


def critical_noise_near_optimal(tau: float, u: float, e: float) -> float:
    """Threshold for a splitter detuned from 50:50 by transmittance error e.

    Second-order expansion in e (angle theta = pi/4 + e/2), accurate to a
    few percent for |e| <= 0.2 and reducing to tau / (1 - 2 tau) at e = 0
    or u = 1.
    """
    GaussianSpec(tau, u)
    if not math.isfinite(e):
        raise DomainError("transmittance error must be finite")
    w = 1.0 - 2.0 * tau
    base = tau / w
    denom = 1.0 - u * u * w * w
    if denom == 0.0:  # u = 1 and tau = 0: no correction either way
        return base
    return base * (1.0 - 2.0 * e * e * (1.0 - tau) * (1.0 - u * u) / denom)


def optimal_angle(tau: float, u: float, nbar: float) -> OptimalAngle:
    """Which mixing angle maximizes the negativity.

    The argument of the negativity is extremal at theta = 0 and pi/4; the
    pi/4 extremum wins exactly when 1/(u^2 (1 - 2 tau)) > 2 nbar + 1, which
    is reported as "entangling".  Otherwise the maximum sits at theta = 0,
    i.e. no beam-splitter action and no entanglement at any angle.  Note
    that for mixed inputs the 50:50 maximum can itself be zero (whenever
    (2 nbar + 1)(1 - 2 tau) >= 1), so "entangling" labels the location of
    the optimum, not a guarantee of nonzero output entanglement.
    """
    GaussianSpec(tau, u)
    ThermalParams(nbar)
    w = 1.0 - 2.0 * tau
    g = 1.0 / (u * u * w)
    m = 2.0 * nbar + 1.0
    s_at_zero = 0.5 / (u * u) + 0.5 * m * m
    s_at_quarter = 0.5 * m * (g + w)
    if g - m > 0.0:
        return OptimalAngle(0.25 * math.pi, "entangling", s_at_zero, s_at_quarter)
    return OptimalAngle(0.0, "no entanglement achievable", s_at_zero, s_at_quarter)
