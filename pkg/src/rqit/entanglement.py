"""Logarithmic negativity of the shared state and its sweep over xi.

E_N(rho) = log2 || rho^Gamma ||_1, the log trace norm of the partial
transpose.  E_N > 0 is sufficient for entanglement and is the figure of
merit used throughout; the partial transpose is taken on the inertial
party's factor by default (transposing the other factor gives the same
trace norm, which the test suite asserts).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import FockCutoff, _as_accel, _as_cutoff, entangled_state
from .linalg import DenseOperator, partial_transpose, trace_norm

_LOG_NEG_FLOOR = 1e-12


@dataclass(frozen=True)
class NegativityResult:
    xi: float
    r: float
    log_negativity: float


def log_negativity(state: DenseOperator, factor_index: int = 0) -> float:
    """log2 of the trace norm of the partial transpose; >= 0 up to roundoff."""
    value = math.log2(trace_norm(partial_transpose(state, factor_index)))
    if -_LOG_NEG_FLOOR < value < 0.0:
        return 0.0
    return value


def negativity_sweep(
    r, xi_grid: Sequence[float], cutoff: FockCutoff | None = None
) -> list[NegativityResult]:
    """One NegativityResult per grid point, in grid order."""
    a = _as_accel(r)
    cut = _as_cutoff(cutoff, r)
    out = []
    for xi in xi_grid:
        state = entangled_state(xi, a, cut)
        out.append(NegativityResult(float(xi), a.r, log_negativity(state, 0)))
    return out
