"""Time evolution of two cavity-reservoir qubit pairs.

Each cavity qubit dumps its excitation into its own reservoir qubit through
the isometry ``|0>_c |0>_r -> |00>``, ``|1>_c |0>_r -> c0(t)|10> + c(t)|01>``.
Starting from an X state on the cavities and both reservoirs in vacuum, the
cavity-cavity and reservoir-reservoir marginals stay in the X family and
have closed forms; the full four-qubit state is built by applying the
isometry per pair (dilation), so the closed forms double as independent
cross-checks.

Qubit ordering of the four-qubit state is ``(c1, c2, r1, r2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitude import AmplitudeModel, c0 as _c0, c_excitation as _cexc
from .states import DensityMatrix, XState, permute_subsystems

__all__ = ["EvolvedPair", "evolve_cc", "evolve_rr", "evolve_four", "evolve_pair"]


@dataclass(frozen=True)
class EvolvedPair:
    """Evolved marginals and full state at one instant."""

    cc: XState
    rr: XState
    full: DensityMatrix
    t: float
    c0: float
    c: float


def _amplitudes(model: AmplitudeModel, t: float) -> tuple[float, float]:
    a = float(_c0(model, t))
    c = float(_cexc(model, t))
    return a, c


def evolve_cc(s0: XState, model: AmplitudeModel, t: float) -> XState:
    """Cavity-cavity X state at time t."""
    a, c = _amplitudes(model, t)
    a2, c2 = a * a, c * c
    r11 = s0.rho11 + (s0.rho22 + s0.rho33 + s0.rho44 * c2) * c2
    return XState(
        r11,
        (s0.rho22 + s0.rho44 * c2) * a2,
        (s0.rho33 + s0.rho44 * c2) * a2,
        s0.rho44 * a2 * a2,
        s0.rho14 * a2,
        s0.rho23 * a2,
    )


def evolve_rr(s0: XState, model: AmplitudeModel, t: float) -> XState:
    """Reservoir-reservoir X state at time t (roles of c0 and c swapped)."""
    a, c = _amplitudes(model, t)
    a2, c2 = a * a, c * c
    s11 = s0.rho11 + (s0.rho22 + s0.rho33 + s0.rho44 * a2) * a2
    return XState(
        s11,
        (s0.rho22 + s0.rho44 * a2) * c2,
        (s0.rho33 + s0.rho44 * a2) * c2,
        s0.rho44 * c2 * c2,
        s0.rho14 * c2,
        s0.rho23 * c2,
    )


def _pair_isometry(a: float, c: float) -> np.ndarray:
    # Columns: image of |0>_cavity and |1>_cavity in the (cavity, reservoir)
    # pair basis |00>, |01>, |10>, |11>.
    v = np.zeros((4, 2))
    v[0, 0] = 1.0
    v[2, 1] = a
    v[1, 1] = c
    return v


def evolve_four(s0: XState, model: AmplitudeModel, t: float) -> DensityMatrix:
    """Full four-qubit state at time t, ordered (c1, c2, r1, r2)."""
    a, c = _amplitudes(model, t)
    v = _pair_isometry(a, c)
    big = np.kron(v, v)                      # (c1, r1, c2, r2) <- (c1, c2)
    rho = big @ s0.to_density().entries @ big.T
    full = DensityMatrix(rho, (2, 2, 2, 2), validate=False)
    return permute_subsystems(full, (0, 2, 1, 3))


def evolve_pair(s0: XState, model: AmplitudeModel, t: float) -> EvolvedPair:
    """Closed-form marginals plus the dilated four-qubit state."""
    a, c = _amplitudes(model, t)
    return EvolvedPair(
        cc=evolve_cc(s0, model, t),
        rr=evolve_rr(s0, model, t),
        full=evolve_four(s0, model, t),
        t=float(t),
        c0=a,
        c=c,
    )
