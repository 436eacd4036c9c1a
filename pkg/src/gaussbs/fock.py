"""Independent verification engine in a truncated Fock basis.

Builds the squeezed-thermal and thermal inputs as explicit density
matrices, applies the beam-splitter unitary, and evaluates the logarithmic
negativity as the log trace norm of the partially transposed output.  No
covariance-level shortcut is used anywhere, so agreement with the Gaussian
formulas is a genuine cross-check.

Truncation is handled honestly: every builder measures the probability
mass lost at the cutoff and raises ``TruncationError`` when it exceeds the
configured budget instead of silently renormalizing.  The comparison
harness escalates the cutoff in steps of 20 up to 120 and records a skip
if even that is not enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .entanglement import ScenarioParams, negativity_closed_form
from .states import BeamSplitter, CovMat1, DomainError, GaussianSpec

_HERMITICITY_TOL = 1e-10
_MAX_ESCALATION_DIM = 120
_ESCALATION_STEP = 20
# Single-mode states are synthesized on an enlarged working space before
# being compressed to the requested cutoff: exponentiating the generator
# truncated at the cutoff itself reflects amplitude off the boundary and
# corrupts the delivered window, while compressing a wider build leaves
# only the honestly reported tail loss.
_WORK_MARGIN = 64
# The trace norm of a partial transpose amplifies input tail loss by up to
# two orders of magnitude, so the comparison harness pads the two-mode
# stage with a guard band sized from the measured window leakage instead
# of trusting the bare cutoff.
_COMPARE_GUARDS = (0, 8, 16, 24)
# Window leakage this far below the comparison tolerance keeps the
# amplified tail error out of the reported negativity difference.
_GUARD_SAFETY = 300.0


class TruncationError(RuntimeError):
    """Cutoff too small: measured leakage above the configured budget."""

    def __init__(self, leakage: float, dim: int, tol: float):
        super().__init__(
            f"truncation leakage {leakage:.3e} exceeds {tol:.3e} at dim={dim}; "
            "increase the cutoff"
        )
        self.leakage = leakage
        self.dim = dim


@dataclass(frozen=True)
class OracleConfig:
    """Cutoff and tolerances for the Fock-space checks."""

    dim: int = 40
    tol_trace: float = 1e-8
    tol_compare: float = 1e-3

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 4:
            raise DomainError(f"cutoff dimension must be an integer >= 4, got {self.dim}")
        if not (self.tol_trace > 0.0 and self.tol_compare > 0.0):
            raise DomainError("tolerances must be positive")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    """Hermitian operator on one or two truncated modes.

    The trace may fall short of 1 by the truncation leakage, which is
    reported through ``leakage`` rather than hidden by renormalization.
    """

    data: np.ndarray
    n_modes: int

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        if self.n_modes not in (1, 2):
            raise DomainError("n_modes must be 1 or 2")
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise DomainError("density matrix must be square")
        scale = max(float(np.abs(data).max()), 1.0)
        if np.abs(data - data.conj().T).max() > _HERMITICITY_TOL * scale:
            raise DomainError("density matrix must be Hermitian")
        if self.n_modes == 2:
            dim = math.isqrt(data.shape[0])
            if dim * dim != data.shape[0]:
                raise DomainError("two-mode matrix size must be a perfect square")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0] if self.n_modes == 1 else math.isqrt(self.data.shape[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.data).real)

    @property
    def leakage(self) -> float:
        return abs(1.0 - self.trace)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.data).min())


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1)


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Normalized coherent-state amplitudes up to the cutoff."""
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return amps
    n = np.arange(dim)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1.0, dim)))))
    return np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(complex(alpha)) - 0.5 * log_fact)


def _thermal_weights(nbar: float, dim: int) -> np.ndarray:
    n = np.arange(dim)
    if nbar == 0.0:
        weights = np.zeros(dim)
        weights[0] = 1.0
        return weights
    return (nbar / (nbar + 1.0)) ** n / (nbar + 1.0)


def fock_thermal(nbar: float, cfg: OracleConfig) -> FockDensityMatrix:
    """Truncated thermal state: geometric weights nbar^n / (nbar+1)^(n+1)."""
    if nbar < 0.0:
        raise DomainError(f"thermal occupation must satisfy nbar >= 0, got {nbar}")
    weights = _thermal_weights(nbar, cfg.dim)
    leakage = abs(1.0 - weights.sum())
    if leakage > cfg.tol_trace:
        raise TruncationError(leakage, cfg.dim, cfg.tol_trace)
    return FockDensityMatrix(np.diag(weights.astype(complex)), n_modes=1)


def fock_squeezed_thermal(spec: GaussianSpec, cfg: OracleConfig) -> FockDensityMatrix:
    """S rho_th S^ with the thermal seed and squeezing matched to (tau, u).

    The seed occupation is (1 - u) / (2 u) (the symplectic eigenvalue
    1/(2u) minus the vacuum half) and the squeezing obeys
    e^{-2r} = u (1 - 2 tau), so the first and second moments of the result
    reproduce ``covariance_from_spec`` exactly in the untruncated limit.
    Synthesized on a working space ``dim + _WORK_MARGIN`` wide and then
    compressed, so the delivered matrix agrees with the exact state up to
    the reported tail leakage.
    """
    nbar_seed = (1.0 - spec.u) / (2.0 * spec.u)
    r = -0.5 * math.log(spec.u * (1.0 - 2.0 * spec.tau))
    xi = r * complex(math.cos(spec.phi_b), math.sin(spec.phi_b))
    work = cfg.dim + _WORK_MARGIN
    seed = np.diag(_thermal_weights(nbar_seed, work).astype(complex))
    a = annihilation(work)
    generator = 0.5 * (xi.conjugate() * (a @ a) - xi * (a.T @ a.T))
    squeezer = expm(generator)
    rho = (squeezer @ seed @ squeezer.conj().T)[: cfg.dim, : cfg.dim]
    rho = 0.5 * (rho + rho.conj().T)
    leakage = abs(1.0 - np.trace(rho).real)
    if leakage > cfg.tol_trace:
        raise TruncationError(leakage, cfg.dim, cfg.tol_trace)
    return FockDensityMatrix(rho, n_modes=1)


@lru_cache(maxsize=8)
def _beam_splitter_sectors(theta: float, phi: float, dim: int):
    """Per-sector blocks of exp(theta (e^{i phi} a1^ a2 - e^{-i phi} a1 a2^)).

    The generator conserves total photon number, so it is exponentiated
    sector by sector; the assembled operator equals the exponential of the
    truncated generator, is exactly unitary on the truncated space, and
    satisfies U^ a_i U = (M_B a)_i exactly within complete sectors (total
    number <= dim - 1).  Returns (flat indices, block) pairs.
    """
    e = complex(math.cos(phi), math.sin(phi))
    sectors = []
    for total in range(2 * dim - 1):
        n1_lo = max(0, total - dim + 1)
        n1_hi = min(total, dim - 1)
        n1 = np.arange(n1_lo, n1_hi + 1)
        size = n1.size
        gen = np.zeros((size, size), dtype=complex)
        # a1^ a2 sends (n1, n2) -> (n1 + 1, n2 - 1) within the sector.
        hop = theta * e * np.sqrt((n1[:-1] + 1.0) * (total - n1[:-1]))
        gen[np.arange(1, size), np.arange(size - 1)] = hop
        gen[np.arange(size - 1), np.arange(1, size)] = -hop.conj()
        flat = n1 * dim + (total - n1)
        block = expm(gen)
        sectors.append((flat, block, block.conj().T))
    return tuple(sectors)


def _beam_splitter_unitary(theta: float, phi: float, dim: int) -> np.ndarray:
    """Dense form of the sector-blocked beam-splitter unitary."""
    u = np.zeros((dim * dim, dim * dim), dtype=complex)
    for flat, block, _ in _beam_splitter_sectors(theta, phi, dim):
        u[np.ix_(flat, flat)] = block
    return u


def _sector_conjugate(rho: np.ndarray, sectors) -> np.ndarray:
    """U rho U^ using the block structure of U (far cheaper than dense)."""
    tmp = np.empty_like(rho)
    for flat, block, _ in sectors:
        tmp[flat, :] = block @ rho[flat, :]
    out = np.empty_like(rho)
    for flat, _, block_ct in sectors:
        out[:, flat] = tmp[:, flat] @ block_ct
    return out


def _wrap_hermitian_two_mode(data: np.ndarray) -> FockDensityMatrix:
    """Construction bypass for matrices Hermitian by construction."""
    obj = object.__new__(FockDensityMatrix)
    data.setflags(write=False)
    object.__setattr__(obj, "data", data)
    object.__setattr__(obj, "n_modes", 2)
    return obj


def fock_beam_splitter(
    rho1: FockDensityMatrix,
    rho2: FockDensityMatrix,
    bs: BeamSplitter,
    cfg: OracleConfig,
) -> FockDensityMatrix:
    """U (rho1 x rho2) U^ for the beam-splitter unitary pinned to M_B."""
    if rho1.n_modes != 1 or rho2.n_modes != 1:
        raise DomainError("beam splitter inputs must be one-mode states")
    if rho1.dim != rho2.dim:
        raise DomainError(f"input cutoffs differ: {rho1.dim} != {rho2.dim}")
    sectors = _beam_splitter_sectors(bs.theta, bs.phi, rho1.dim)
    rho = _sector_conjugate(np.kron(rho1.data, rho2.data), sectors)
    rho = 0.5 * (rho + rho.conj().T)
    leakage = abs(1.0 - np.trace(rho).real)
    if leakage > cfg.tol_trace:
        raise TruncationError(leakage, rho1.dim, cfg.tol_trace)
    return FockDensityMatrix(rho, n_modes=2)


def fock_partial_transpose(rho: FockDensityMatrix) -> FockDensityMatrix:
    """Transpose the second mode's indices; preserves trace and Hermiticity."""
    if rho.n_modes != 2:
        raise DomainError("partial transpose needs a two-mode state")
    d = rho.dim
    arr = np.ascontiguousarray(
        rho.data.reshape(d, d, d, d).transpose(0, 3, 2, 1)
    ).reshape(d * d, d * d)
    # The index permutation maps Hermitian matrices to Hermitian matrices
    # entry for entry, so the validating constructor is not re-run.
    return _wrap_hermitian_two_mode(arr)


class LogNegativityResult(NamedTuple):
    value: float
    raw: float


def _abs_eigenvalue_sum(matrix: np.ndarray, dim: int) -> float:
    """Sum |eigenvalues| of a Hermitian two-mode operator.

    The scenario states only carry coherences between Fock numbers of equal
    parity, so the partially transposed matrix splits into two blocks over
    the parity of n1 + n2; when that structure holds (checked, not assumed)
    the two blocks are diagonalized separately.
    """
    n1, n2 = np.divmod(np.arange(dim * dim), dim)
    even = (n1 + n2) % 2 == 0
    cross = matrix[np.ix_(even, ~even)]
    if np.abs(cross).max() > 1e-12 * max(float(np.abs(matrix).max()), 1.0):
        return float(np.abs(np.linalg.eigvalsh(matrix)).sum())
    total = 0.0
    for mask in (even, ~even):
        total += float(np.abs(np.linalg.eigvalsh(matrix[np.ix_(mask, mask)])).sum())
    return total


def fock_log_negativity(rho: FockDensityMatrix) -> LogNegativityResult:
    """log2 of the trace norm of the partial transpose.

    ``raw`` keeps the unclamped logarithm (slightly negative values arise
    from truncation leakage); ``value`` is max{0, raw}.
    """
    pt = fock_partial_transpose(rho)
    raw = math.log2(_abs_eigenvalue_sum(pt.data, rho.dim))
    return LogNegativityResult(max(0.0, raw), raw)


def covariance_from_fock(rho: FockDensityMatrix) -> CovMat1:
    """Second moments of a one-mode matrix as a covariance (a, b) pair."""
    if rho.n_modes != 1:
        raise DomainError("moment extraction implemented for one-mode states")
    a_op = annihilation(rho.dim)
    mean_n = float(np.trace(rho.data @ (a_op.T @ a_op)).real)
    mean_aa = complex(np.trace(rho.data @ (a_op @ a_op)))
    return CovMat1(mean_n + 0.5, -mean_aa)


@dataclass(frozen=True)
class OracleComparison:
    """One grid point of the Gaussian-vs-Fock cross-check."""

    params: ScenarioParams
    n_gaussian: float
    n_fock: float
    abs_diff: float
    leakage: float
    dim_used: int
    status: str  # "pass", "fail", or "skip"
    note: str = ""


def _pick_guard(wide: np.ndarray, base_dim: int, target: float) -> int:
    """Smallest guard whose window keeps the tail loss below ``target``.

    ``wide`` is the single-mode state built at ``base_dim`` plus the
    largest guard; smaller windows are exact compressions of it, so their
    leakage is read off the diagonal instead of rebuilding.
    """
    occupations = np.cumsum(np.diag(wide).real)
    for guard in _COMPARE_GUARDS:
        if abs(1.0 - occupations[base_dim + guard - 1]) <= target:
            return guard
    return _COMPARE_GUARDS[-1]


def compare_with_gaussian(params: ScenarioParams, cfg: OracleConfig) -> OracleComparison:
    """Evaluate both routes at one parameter point, escalating the cutoff.

    The Fock side runs at ``cfg.dim`` plus an adaptive guard band: the
    partial-transpose trace norm amplifies whatever probability mass the
    window misses, so the window is widened until the measured tail loss
    sits well below the comparison tolerance.  Base dimensions grow in
    steps of 20 up to 120; if the leakage budget still cannot be met the
    point is skipped with the measured leakage recorded.
    """
    n_gaussian = negativity_closed_form(params)
    dims = list(range(cfg.dim, _MAX_ESCALATION_DIM + 1, _ESCALATION_STEP))
    if dims[-1] != _MAX_ESCALATION_DIM:
        dims.append(_MAX_ESCALATION_DIM)
    last_leakage = math.nan
    target = cfg.tol_compare / _GUARD_SAFETY
    for dim in dims:
        probe = OracleConfig(
            dim=dim + _COMPARE_GUARDS[-1], tol_trace=1.0, tol_compare=cfg.tol_compare
        )
        wide = fock_squeezed_thermal(params.spec(), probe)
        guard = _pick_guard(wide.data, dim, target)
        window = dim + guard
        rho1 = FockDensityMatrix(wide.data[:window, :window], n_modes=1)
        attempt = OracleConfig(dim=window, tol_trace=cfg.tol_trace, tol_compare=cfg.tol_compare)
        try:
            if rho1.leakage > cfg.tol_trace:
                raise TruncationError(rho1.leakage, window, cfg.tol_trace)
            rho2 = fock_thermal(params.nbar, attempt)
            out = fock_beam_splitter(rho1, rho2, params.splitter(), attempt)
        except TruncationError as err:
            last_leakage = err.leakage
            continue
        n_fock = fock_log_negativity(out).value
        diff = abs(n_gaussian - n_fock)
        leakage = max(rho1.leakage, rho2.leakage, out.leakage)
        status = "pass" if diff <= cfg.tol_compare else "fail"
        note = f"guard={guard}" if guard else ""
        return OracleComparison(params, n_gaussian, n_fock, diff, leakage, dim, status, note)
    return OracleComparison(
        params,
        n_gaussian,
        math.nan,
        math.nan,
        last_leakage,
        _MAX_ESCALATION_DIM,
        "skip",
        note=f"leakage {last_leakage:.3e} above budget at dim={_MAX_ESCALATION_DIM}",
    )
