"""Single- and two-mode Gaussian covariance toolkit.

All states are zero mean and described at the covariance level in the
complex-amplitude convention: a one-mode state is

    [[a, b], [b*, a]],    a real,  b complex,  vacuum a = 1/2, b = 0,

and a two-mode state is the Hermitian 4x4 block matrix [[A, C], [C^, B]]
over the amplitude ordering (mode1, mode1*, mode2, mode2*).  One-mode
states are parametrized by the nonclassical depth tau in [0, 1/2) and the
purity u in (0, 1]; the phase of b is carried separately so that phase
independence of downstream results can be tested instead of assumed.

A real quadrature representation (ordering x1, p1, x2, p2; vacuum I/2;
commutator [x, p] = i) backs the symplectic machinery.  ``to_quadrature``
and ``from_quadrature`` convert between the two conventions exactly, and
every operation here is a pure function of immutable values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

# Matrices within this distance of a physicality boundary are clamped onto
# the boundary instead of rejected: round-trip conversions must not reject
# boundary states such as pure squeezed states.
BOUNDARY_TOL = 1e-9

# Mode-wise change of basis from the (alpha, alpha*) amplitude pair to the
# (x, p) quadrature pair.  Unitary, so physicality is basis independent.
_MODE_BRIDGE = np.array([[1.0, -1.0], [-1.0j, -1.0j]]) / math.sqrt(2.0)

_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


class DomainError(ValueError):
    """A parameter or matrix violates its physical domain."""


@dataclass(frozen=True)
class GaussianSpec:
    """One-mode Gaussian state as (nonclassical depth, purity, phase of b).

    tau: nonclassical depth, dimensionless, 0 <= tau < 1/2.
    u: purity tr(rho^2), dimensionless, 0 < u <= 1.
    phi_b: phase of the off-diagonal covariance element, radians,
        normalized into [0, 2*pi).
    """

    tau: float
    u: float
    phi_b: float = 0.0

    def __post_init__(self):
        tau, u, phi_b = float(self.tau), float(self.u), float(self.phi_b)
        if not (math.isfinite(tau) and math.isfinite(u) and math.isfinite(phi_b)):
            raise DomainError("state parameters must be finite")
        if not 0.0 <= tau < 0.5:
            raise DomainError(
                f"nonclassical depth must satisfy 0 <= tau < 1/2, got tau={tau}"
            )
        if not 0.0 < u <= 1.0:
            raise DomainError(f"purity must satisfy 0 < u <= 1, got u={u}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "phi_b", phi_b % (2.0 * math.pi))


@dataclass(frozen=True)
class CovMat1:
    """One-mode covariance [[a, b], [b*, a]]; vacuum is a = 1/2, b = 0."""

    a: float
    b: complex = 0j

    def __post_init__(self):
        a, b = float(self.a), complex(self.b)
        if not (math.isfinite(a) and cmath.isfinite(b)):
            raise DomainError("covariance entries must be finite")
        if a <= 0.0:
            raise DomainError(f"diagonal covariance element must be positive, got a={a}")
        det = a * a - (b.real * b.real + b.imag * b.imag)
        if det < 0.25 - BOUNDARY_TOL:
            raise DomainError(
                f"unphysical one-mode covariance: a^2 - |b|^2 = {det} < 1/4"
            )
        if det < 0.25:
            # Clamp onto the uncertainty boundary, keeping b.
            a = math.sqrt(0.25 + abs(b) ** 2)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a]])


@dataclass(frozen=True)
class ThermalParams:
    """Thermal occupation; induced covariance is (nbar + 1/2) * I."""

    nbar: float

    def __post_init__(self):
        nbar = float(self.nbar)
        if not math.isfinite(nbar) or nbar < 0.0:
            raise DomainError(f"thermal occupation must satisfy nbar >= 0, got {nbar}")
        object.__setattr__(self, "nbar", nbar)


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless beam splitter: mixing angle theta (transmittance cos^2 theta)
    and reflected/transmitted phase difference phi, both in radians."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise DomainError("beam splitter angles must be finite")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @property
    def matrix(self) -> np.ndarray:
        """2x2 unitary acting on the mode amplitudes; theta = 0 is the identity."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        e = cmath.exp(1j * self.phi)
        return np.array([[c, s * e], [-s * e.conjugate(), c]])


@dataclass(frozen=True, eq=False)
class CovMat2:
    """Two-mode covariance [[A, C], [C^, B]] as a 4x4 complex matrix.

    Blocks A and B carry the one-mode structure [[a, b], [b*, a]]; the
    intermodal block C satisfies C[1,1] = C[0,0]* and C[1,0] = C[0,1]*,
    which is what makes the matrix the covariance of a valid (real-valued
    quadrature) state rather than merely Hermitian.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise DomainError(f"two-mode covariance must be 4x4, got shape {m.shape}")
        scale = max(float(np.abs(m).max()), 1.0)
        if np.abs(m - m.conj().T).max() > BOUNDARY_TOL * scale:
            raise DomainError("two-mode covariance must be Hermitian")
        swap = np.kron(np.eye(2), _SWAP)
        if np.abs(swap @ m @ swap - m.conj()).max() > BOUNDARY_TOL * scale:
            raise DomainError(
                "two-mode covariance must satisfy mode conjugation symmetry"
            )
        m = 0.5 * (m + m.conj().T)
        nu_min = float(symplectic_eigenvalues(_quadrature_matrix(m)).min())
        if nu_min < 0.5 - BOUNDARY_TOL:
            raise DomainError(
                "two-mode covariance violates the uncertainty bound: "
                f"min symplectic eigenvalue = {nu_min} < 1/2"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_blocks(cls, block_a: CovMat1, block_b: CovMat1, block_c: np.ndarray) -> "CovMat2":
        c = np.asarray(block_c, dtype=complex)
        m = np.zeros((4, 4), dtype=complex)
        m[:2, :2] = block_a.matrix
        m[2:, 2:] = block_b.matrix
        m[:2, 2:] = c
        m[2:, :2] = c.conj().T
        return cls(m)

    @property
    def block_a(self) -> CovMat1:
        return CovMat1(self.matrix[0, 0].real, self.matrix[0, 1])

    @property
    def block_b(self) -> CovMat1:
        return CovMat1(self.matrix[2, 2].real, self.matrix[2, 3])

    @property
    def block_c(self) -> np.ndarray:
        return self.matrix[:2, 2:].copy()


def covariance_from_spec(spec: GaussianSpec) -> CovMat1:
    """Covariance of the state with given depth, purity and squeezing phase.

    a = 1/(4 u^2 (1 - 2 tau)) + (1 - 2 tau)/4 and |b| is the same with a
    minus sign, so the smaller quadrature eigenvalue a - |b| equals
    (1 - 2 tau)/2 exactly.
    """
    w = 1.0 - 2.0 * spec.tau
    common = 1.0 / (4.0 * spec.u * spec.u * w)
    mag = common - 0.25 * w
    return CovMat1(common + 0.25 * w, mag * cmath.exp(1j * spec.phi_b))


def nonclassical_depth(v: CovMat1) -> float:
    """max{0, -a + |b| + 1/2}: how far the smallest quadrature variance
    dips below the vacuum value."""
    return max(0.0, 0.5 - (v.a - abs(v.b)))


def purity(v: CovMat1) -> float:
    """tr(rho^2) = 1/(2 sqrt(a^2 - |b|^2)), in (0, 1]."""
    det = v.a * v.a - abs(v.b) ** 2
    if det <= 0.0:
        raise DomainError(f"covariance determinant must be positive, got {det}")
    # Boundary clamping at construction keeps det >= 1/4 up to rounding.
    return min(0.5 / math.sqrt(det), 1.0)


def thermal_covariance(t: ThermalParams) -> CovMat1:
    """Isotropic covariance (nbar + 1/2) * I of a thermal state."""
    return CovMat1(t.nbar + 0.5, 0j)


def thermal_occupation(temperature: float, frequency: float) -> ThermalParams:
    """Bose-Einstein occupation 1/(exp(hbar*w/(kB*T)) - 1).

    temperature in kelvin, frequency in rad/s.  T = 0 maps to nbar = 0
    without evaluating the divergent exponent.
    """
    if not (math.isfinite(temperature) and math.isfinite(frequency)):
        raise DomainError("temperature and frequency must be finite")
    if temperature < 0.0:
        raise DomainError(f"temperature must satisfy T >= 0, got {temperature}")
    if frequency <= 0.0:
        raise DomainError(f"frequency must be positive, got {frequency}")
    if temperature == 0.0:
        return ThermalParams(0.0)
    x = constants.hbar * frequency / (constants.k * temperature)
    if x > 700.0:  # nbar underflows to zero well before expm1 overflows
        return ThermalParams(0.0)
    return ThermalParams(1.0 / math.expm1(x))


def _embed(m: np.ndarray) -> np.ndarray:
    """Embed a 2x2 amplitude map into the interleaved (a1, a1*, a2, a2*) basis."""
    out = np.zeros((4, 4), dtype=complex)
    out[0::2, 0::2] = m
    out[1::2, 1::2] = m.conj()
    return out


def apply_beam_splitter(v1: CovMat1, v2: CovMat1, bs: BeamSplitter) -> CovMat2:
    """Mix two one-mode states; returns the output two-mode covariance.

    Implemented as the congruence of V1 (+) V2 by the embedded beam-splitter
    matrix; preserves the total determinant for every (theta, phi).
    """
    v_in = np.zeros((4, 4), dtype=complex)
    v_in[:2, :2] = v1.matrix
    v_in[2:, 2:] = v2.matrix
    t = _embed(bs.matrix)
    v_out = t.conj().T @ v_in @ t
    return CovMat2(0.5 * (v_out + v_out.conj().T))


def _quadrature_matrix(m: np.ndarray) -> np.ndarray:
    n = m.shape[0] // 2
    bridge = _MODE_BRIDGE if n == 1 else np.kron(np.eye(2), _MODE_BRIDGE)
    q = bridge @ m @ bridge.conj().T
    scale = max(float(np.abs(q).max()), 1.0)
    if np.abs(q.imag).max() > BOUNDARY_TOL * scale:
        raise DomainError("covariance has no real quadrature representation")
    q = q.real
    return 0.5 * (q + q.T)


def to_quadrature(v: CovMat1 | CovMat2) -> np.ndarray:
    """Real symmetric covariance over (x1, p1[, x2, p2]); vacuum is I/2."""
    return _quadrature_matrix(v.matrix)


def from_quadrature(m: np.ndarray) -> CovMat1 | CovMat2:
    """Inverse of ``to_quadrature``; dispatches on matrix size."""
    m = np.asarray(m, dtype=float)
    if m.shape == (2, 2):
        vc = _MODE_BRIDGE.conj().T @ m @ _MODE_BRIDGE
        return CovMat1(vc[0, 0].real, vc[0, 1])
    if m.shape == (4, 4):
        bridge = np.kron(np.eye(2), _MODE_BRIDGE)
        return CovMat2(bridge.conj().T @ m @ bridge)
    raise DomainError(f"expected a 2x2 or 4x4 quadrature matrix, got shape {m.shape}")


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal form sigma with [R_i, R_j] = i*sigma_ij in (x, p) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(vr: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a real quadrature covariance, ascending.

    The eigenvalues of i * V * sigma come in +/- nu pairs; physical states
    have every nu >= 1/2.
    """
    vr = np.asarray(vr, dtype=float)
    n = vr.shape[0] // 2
    ev = np.linalg.eigvals(1j * (vr @ symplectic_form(n)))
    vals = np.sort(np.abs(ev))
    # Average each +/- pair to suppress eigensolver noise.
    return vals.reshape(n, 2).mean(axis=1)
