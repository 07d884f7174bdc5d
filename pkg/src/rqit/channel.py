"""The Unruh channel for a qubit carried by free scalar-field modes.

A uniformly accelerated observer sees the Minkowski vacuum and one-particle
states as two-mode squeezed states over the two Rindler wedges,

    |0>_M = (1/cosh r) sum_n tanh^n r |n>_I |n>_II,
    |1>_M = (1/cosh^2 r) sum_n tanh^n r sqrt(n+1) |n+1>_I |n>_II,

with cosh r = (1 - exp(-2 pi Omega))^(-1/2) and Omega = omega_R / (a/c).
Tracing the causally disconnected wedge II turns acceleration into an open
quantum channel on the wedge-I Fock tower.  The infinite tower is truncated
at a cutoff chosen so the geometric tail tanh^{2n} r is below tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidBlochError, TruncationError
from .linalg import DenseOperator

DEFAULT_TRUNCATION_TOL = 1e-12
SMALL_R_LIMIT = 0.3


@dataclass(frozen=True)
class AccelerationParam:
    """Squeezing parameter r >= 0 of the Rindler-wedge mode transformation."""

    r: float

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.r}")

    @property
    def C(self) -> float:
        return math.cosh(self.r)

    @property
    def T(self) -> float:
        return math.tanh(self.r)

    @classmethod
    def from_omega(cls, omega: float) -> "AccelerationParam":
        """From the dimensionless mode frequency Omega = omega_R / (a/c).

        Inverts cosh r = (1 - exp(-2 pi Omega))^(-1/2) through the
        equivalent tanh r = exp(-pi Omega), which stays well conditioned
        for large Omega where cosh r - 1 underflows.
        """
        if not omega > 0:
            raise ValueError(f"Omega must be positive, got {omega}")
        return cls(math.atanh(math.exp(-math.pi * omega)))

    def to_omega(self) -> float:
        if self.r == 0:
            return math.inf
        return -math.log(self.T**2) / (2.0 * math.pi)


def _as_accel(r) -> AccelerationParam:
    return r if isinstance(r, AccelerationParam) else AccelerationParam(float(r))


@dataclass(frozen=True)
class OrthogonalityParam:
    """Overlap parameter xi in [0, 1) between the encoding states.

    The encoding basis is |+> = (|0>+|1>)/sqrt2 and
    |phi> = sqrt((1-xi)/2)|0> - sqrt((1+xi)/2)|1>; xi = 0 makes them
    orthogonal (|phi> = |->).
    """

    xi: float

    def __post_init__(self):
        if not 0.0 <= self.xi < 1.0:
            raise ValueError(f"xi must lie in [0, 1), got {self.xi}")

    def plus_state(self) -> np.ndarray:
        return np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)

    def phi_state(self) -> np.ndarray:
        return np.array(
            [math.sqrt((1.0 - self.xi) / 2.0), -math.sqrt((1.0 + self.xi) / 2.0)],
            dtype=complex,
        )

    def overlap(self) -> float:
        """<+|phi> = (sqrt((1-xi)/2) - sqrt((1+xi)/2)) / sqrt2, real."""
        return float((self.plus_state().conj() @ self.phi_state()).real)

    def eta(self, outer: int, inner: int) -> float:
        """eta_{s1 s2} = 1 + s1*sqrt(1 + s2*xi) for signs s1, s2 in {+1, -1}."""
        return 1.0 + outer * math.sqrt(1.0 + inner * self.xi)

    def bloch_plus(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0])

    def bloch_phi(self) -> np.ndarray:
        return np.array([-math.sqrt(1.0 - self.xi**2), 0.0, -self.xi])


def _as_xi(xi) -> OrthogonalityParam:
    return xi if isinstance(xi, OrthogonalityParam) else OrthogonalityParam(float(xi))


@dataclass(frozen=True)
class FockCutoff:
    """Truncation level of the wedge-I Fock tower.

    Amplitude lists run over n = 0..n_max and the truncated one-particle
    tower reaches level n_max + 1, so operators live on n_max + 2 levels.
    """

    n_max: int
    tol: float = DEFAULT_TRUNCATION_TOL

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max}")
        if not 0 < self.tol < 1:
            raise ValueError(f"tol must lie in (0, 1), got {self.tol}")

    @property
    def levels(self) -> int:
        return self.n_max + 2

    @classmethod
    def for_acceleration(cls, r, tol: float = DEFAULT_TRUNCATION_TOL) -> "FockCutoff":
        """Smallest cutoff whose truncation tails stay below ``tol``.

        Starts from max(16, ceil(ln tol / (2 ln tanh r))), which bounds the
        geometric vacuum tail tanh^{2(n+1)} r exactly, then raises n_max the
        few extra levels needed for the (n+1)-weighted one-particle tail
        tanh^{2(n+1)} r [(n+2) - (n+1) tanh^2 r].  At r = 0 the series
        terminates and the floor of 16 applies.
        """
        a = _as_accel(r)
        if a.T == 0.0:
            return cls(16, tol)
        t2 = a.T**2
        m = max(16, math.ceil(math.log(tol) / (2.0 * math.log(a.T))))
        while t2 ** (m + 1) * ((m + 2) - (m + 1) * t2) > tol:
            m += 1
        return cls(m, tol)

    def doubled(self) -> "FockCutoff":
        return FockCutoff(2 * self.n_max, self.tol)


def _as_cutoff(cutoff, r) -> FockCutoff:
    if cutoff is None:
        return FockCutoff.for_acceleration(r)
    if isinstance(cutoff, FockCutoff):
        return cutoff
    return FockCutoff(int(cutoff))


def unruh_vacuum_amplitudes(r, cutoff: FockCutoff | None = None) -> np.ndarray:
    """Coefficients c_n = tanh^n r / cosh r of |0>_M on |n>_I |n>_II.

    Raises TruncationError when 1 - sum c_n^2 exceeds the cutoff tolerance.
    """
    a, cut = _as_accel(r), _as_cutoff(cutoff, r)
    n = np.arange(cut.n_max + 1)
    c = a.T**n / a.C
    deficit = 1.0 - float(np.sum(c**2))
    if deficit > cut.tol:
        raise TruncationError(
            f"vacuum norm deficit {deficit:.3e} exceeds tol {cut.tol:.1e} at n_max {cut.n_max}"
        )
    return c


def unruh_one_particle_amplitudes(r, cutoff: FockCutoff | None = None) -> np.ndarray:
    """Coefficients d_n = tanh^n r sqrt(n+1) / cosh^2 r of |1>_M on |n+1>_I |n>_II."""
    a, cut = _as_accel(r), _as_cutoff(cutoff, r)
    n = np.arange(cut.n_max + 1)
    d = a.T**n * np.sqrt(n + 1.0) / a.C**2
    deficit = 1.0 - float(np.sum(d**2))
    if deficit > cut.tol:
        raise TruncationError(
            f"one-particle norm deficit {deficit:.3e} exceeds tol {cut.tol:.1e} at n_max {cut.n_max}"
        )
    return d


def _as_bloch(bloch) -> np.ndarray:
    n = np.asarray(bloch, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {n.shape}")
    norm2 = float(n @ n)
    if norm2 > 1.0 + 1e-12:
        raise InvalidBlochError(f"Bloch vector norm {math.sqrt(norm2):.12f} exceeds 1")
    return n


def minkowski_qubit(bloch) -> DenseOperator:
    """Density matrix (1 + n.sigma)/2 of an inertial qubit."""
    x, y, z = _as_bloch(bloch)
    m = 0.5 * np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]])
    return DenseOperator(m, (2,))


def effective_qubit(bloch, r, cutoff: FockCutoff | None = None) -> DenseOperator:
    """Wedge-I state of an accelerated qubit: trace of wedge II.

    The channel is linear on the 2x2 input and couples Fock levels n and
    n+1 only; the output is exactly trace preserving up to the geometric
    tail of the truncation.
    """
    x, y, z = _as_bloch(bloch)
    cut = _as_cutoff(cutoff, r)
    c = unruh_vacuum_amplitudes(r, cut)
    d = unruh_one_particle_amplitudes(r, cut)
    p00, p11, p01 = (1.0 + z) / 2.0, (1.0 - z) / 2.0, (x - 1j * y) / 2.0
    nlev = cut.levels
    rho = np.zeros((nlev, nlev), dtype=complex)
    idx = np.arange(cut.n_max + 1)
    rho[idx, idx] += p00 * c**2
    rho[idx + 1, idx + 1] += p11 * d**2
    rho[idx, idx + 1] += p01 * c * d
    rho[idx + 1, idx] += np.conj(p01) * c * d
    return DenseOperator(rho, (nlev,))


def entangled_state(xi, r, cutoff: FockCutoff | None = None) -> DenseOperator:
    """Shared state after one party accelerates, on (2) x (n_max + 2).

    rho = (1/(8 cosh^2 r)) sum_n tanh^{2n} r |v_n><v_n| with

        |v_n> = eta_{+-}|0,n> + eta_{--}|1,n>
                + (eta_{-+} sqrt(n+1)/cosh r)|0,n+1>
                + (eta_{++} sqrt(n+1)/cosh r)|1,n+1>,

    where eta_{s1 s2} = 1 + s1*sqrt(1 + s2*xi).  The prefactor makes the
    trace exactly 1 in the untruncated tower; this is checked numerically
    at r = 0 in the test suite.
    """
    ox, a = _as_xi(xi), _as_accel(r)
    cut = _as_cutoff(cutoff, r)
    nlev = cut.levels
    epm, emm = ox.eta(+1, -1), ox.eta(-1, -1)
    emp, epp = ox.eta(-1, +1), ox.eta(+1, +1)
    rho = np.zeros((2 * nlev, 2 * nlev), dtype=complex)
    for n in range(cut.n_max + 1):
        v = np.zeros(2 * nlev, dtype=complex)
        v[n] = epm
        v[nlev + n] = emm
        s = math.sqrt(n + 1.0) / a.C
        v[n + 1] += emp * s
        v[nlev + n + 1] += epp * s
        rho += a.T ** (2 * n) * np.outer(v, v.conj())
    rho /= 8.0 * a.C**2
    deficit = abs(1.0 - float(np.trace(rho).real))
    if deficit > cut.tol:
        raise TruncationError(
            f"shared-state trace deficit {deficit:.3e} exceeds tol {cut.tol:.1e} at n_max {cut.n_max}"
        )
    return DenseOperator(rho, (2, nlev))


def small_r_qubit(bloch, r) -> DenseOperator:
    """Low-acceleration 3x3 family, keeping terms through O(r^2).

    With C = cosh r and T = tanh r:

        (1/(2C^2)) [[1+z,        (x-iy)/C,               0           ],
                    [(x+iy)/C,   (1-z)/C^2 + T^2 (1+z),  s2 T^2 (x-iy)/C],
                    [0,          s2 T^2 (x+iy)/C,        2 T^2 (1-z)/C^2]]

    with s2 = sqrt 2.  The trace is 1 - (2 - z) r^4 + O(r^6): subnormalized
    at order r^4, which the generalized distance of the geometry module is
    designed to absorb.  No renormalization is applied.
    """
    x, y, z = _as_bloch(bloch)
    a = _as_accel(r)
    if a.r > SMALL_R_LIMIT:
        warnings.warn(
            f"small_r_qubit called with r={a.r:.3f} > {SMALL_R_LIMIT}; "
            "the O(r^4) accuracy guarantee degrades",
            stacklevel=2,
        )
    C, T = a.C, a.T
    w = x - 1j * y
    m = np.array(
        [
            [1.0 + z, w / C, 0.0],
            [np.conj(w) / C, (1.0 - z) / C**2 + T**2 * (1.0 + z), math.sqrt(2) * T**2 * w / C],
            [0.0, math.sqrt(2) * T**2 * np.conj(w) / C, 2.0 * T**2 * (1.0 - z) / C**2],
        ],
        dtype=complex,
    )
    return DenseOperator(m / (2.0 * C**2), (3,))
