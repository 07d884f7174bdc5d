"""Bures angle between the accelerated images of the two encoding states.

theta = arccos( Tr sqrt( rho1^(1/2) rho2 rho1^(1/2) ) ) is maximal exactly
when the optimal same-or-different measurement succeeds with the highest
probability, so the sweep over xi locates the most distinguishable encoding
at a given acceleration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import FockCutoff, OrthogonalityParam, _as_accel, _as_cutoff, _as_xi, effective_qubit
from .geometry import root_fidelity
from .linalg import DenseOperator

_TRACE_ATOL = 1e-6


@dataclass(frozen=True)
class AngleResult:
    xi: float
    r: float
    theta: float


def bures_angle(rho1: DenseOperator, rho2: DenseOperator) -> float:
    """arccos of the root fidelity, in [0, pi/2]; symmetric in its arguments.

    Both inputs must be unit-trace density operators on the same space.  The
    arccos argument is clipped to [0, 1] to absorb roundoff-level excess.
    """
    if rho1.dim != rho2.dim:
        raise ValueError(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    for op in (rho1, rho2):
        tr = op.trace()
        if abs(tr.real - 1.0) > _TRACE_ATOL or abs(tr.imag) > _TRACE_ATOL:
            raise ValueError(f"bures_angle expects unit-trace inputs, got trace {tr}")
    return math.acos(float(np.clip(root_fidelity(rho1, rho2), 0.0, 1.0)))


def angle_sweep(r, xi_grid: Sequence[float], cutoff: FockCutoff | None = None) -> list[AngleResult]:
    """theta(xi) between the accelerated images of |+> and |phi>.

    Both states pass through the identical wedge-I channel; the labels on
    the two arguments carry no asymmetry.
    """
    a = _as_accel(r)
    cut = _as_cutoff(cutoff, r)
    plus_img = effective_qubit(OrthogonalityParam(0.0).bloch_plus(), a, cut)
    out = []
    for xi in xi_grid:
        phi_img = effective_qubit(_as_xi(xi).bloch_phi(), a, cut)
        out.append(AngleResult(float(xi), a.r, bures_angle(plus_img, phi_img)))
    return out
