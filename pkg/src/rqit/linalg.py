"""Dense complex linear algebra over truncated and composite mode spaces.

Every operator carries a ``space_tag``, the ordered tuple of tensor-factor
dimensions, so that partial operations (trace, transpose) address factors
explicitly instead of relying on caller bookkeeping.

Hermitian eigendecomposition (``numpy.linalg.eigh``) is the single primitive
behind the matrix square root, the trace norm and positivity checks; no
general non-Hermitian decompositions are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, SizeError

HERMITIAN_ATOL = 1e-12
PSD_CLAMP = -1e-10
DEFAULT_ENTRY_CAP = 2**20


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Complex square matrix on a (possibly composite) truncated mode space.

    Attributes:
        entries: dim x dim complex matrix, stored read-only.
        space_tag: ordered factor dimensions; their product equals dim.
    """

    entries: np.ndarray
    space_tag: tuple[int, ...]

    def __init__(self, entries: np.ndarray, space_tag=None):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if space_tag is None:
            space_tag = (m.shape[0],)
        tag = tuple(int(d) for d in space_tag)
        if any(d <= 0 for d in tag) or math.prod(tag) != m.shape[0]:
            raise ValueError(f"space_tag {tag} does not factor dim {m.shape[0]}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "space_tag", tag)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self, atol: float = HERMITIAN_ATOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= atol)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(_hermitian_part(self.entries))[0])

    def retag(self, space_tag) -> "DenseOperator":
        """Same entries under a different factorization."""
        return DenseOperator(self.entries, space_tag)


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def _require_hermitian(op: DenseOperator, what: str) -> np.ndarray:
    if not op.is_hermitian():
        dev = np.max(np.abs(op.entries - op.entries.conj().T))
        raise ValueError(f"{what} requires a Hermitian operator (max deviation {dev:.3e})")
    return _hermitian_part(op.entries)


def tensor(a: DenseOperator, b: DenseOperator, entry_cap: int = DEFAULT_ENTRY_CAP) -> DenseOperator:
    """Tensor product; the space_tag is the concatenation of the factors'.

    Raises SizeError when the result would hold more than ``entry_cap``
    matrix entries (default 2**20).
    """
    dim = a.dim * b.dim
    if dim * dim > entry_cap:
        raise SizeError(f"tensor product dim {dim} exceeds entry cap {entry_cap}")
    return DenseOperator(np.kron(a.entries, b.entries), a.space_tag + b.space_tag)


def _factored(op: DenseOperator, factor_index: int):
    dims = op.space_tag
    if not 0 <= factor_index < len(dims):
        raise IndexError(f"factor index {factor_index} invalid for space_tag {dims}")
    return op.entries.reshape(dims + dims), len(dims)


def partial_trace(op: DenseOperator, factor_index: int) -> DenseOperator:
    """Trace out one tensor factor (0-based index into space_tag)."""
    t, k = _factored(op, factor_index)
    out = np.trace(t, axis1=factor_index, axis2=factor_index + k)
    tag = op.space_tag[:factor_index] + op.space_tag[factor_index + 1:]
    d = math.prod(tag) if tag else 1
    return DenseOperator(out.reshape(d, d), tag or (1,))


def partial_transpose(op: DenseOperator, factor_index: int) -> DenseOperator:
    """Transpose the indices of one tensor factor only; an involution."""
    t, k = _factored(op, factor_index)
    axes = list(range(2 * k))
    axes[factor_index], axes[factor_index + k] = axes[factor_index + k], axes[factor_index]
    out = t.transpose(axes).reshape(op.dim, op.dim)
    return DenseOperator(out, op.space_tag)


def eigh(op: DenseOperator):
    """Eigendecomposition of a Hermitian operator: (eigenvalues, eigenvectors)."""
    return np.linalg.eigh(_require_hermitian(op, "eigh"))


def matrix_sqrt(op: DenseOperator) -> DenseOperator:
    """Hermitian PSD square root.

    Eigenvalues in [PSD_CLAMP, 0) are clamped to zero so that truncation
    noise from the Fock cutoff never aborts a run; anything below the clamp
    raises NotPSDError.
    """
    w, v = eigh(op)
    if w[0] < PSD_CLAMP:
        raise NotPSDError(f"smallest eigenvalue {w[0]:.3e} below clamp {PSD_CLAMP:.1e}")
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return DenseOperator(_hermitian_part(root), op.space_tag)


def trace_norm(op: DenseOperator) -> float:
    """Sum of absolute eigenvalues (Hermitian input only)."""
    w = np.linalg.eigvalsh(_require_hermitian(op, "trace_norm"))
    return float(np.sum(np.abs(w)))
