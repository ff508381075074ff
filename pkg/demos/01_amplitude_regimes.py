"""Survival amplitude of a cavity excitation across damping regimes.

The ratio x = gamma / gamma0 of reservoir spectral width to relaxation rate
controls everything: x > 2 decays monotonically (Markovian), x = 2 is the
critical point, and x < 2 oscillates with memory (non-Markovian), with
exact zeros where the excitation sits entirely in the reservoir.
"""

import numpy as np

from entdyn import AmplitudeModel, c0, c_excitation, first_zero


def main():
    ts = np.linspace(0.0, 12.0, 7)
    print("c0(t) across regimes (rows: x, columns: gamma0*t)")
    print("gamma0*t:", "  ".join(f"{t:7.1f}" for t in ts))
    for x in (5.0, 2.0, 0.5, 0.1, 0.01):
        model = AmplitudeModel(gamma0=1.0, x=x)
        vals = np.asarray(c0(model, ts))
        print(f"x={x:<5g} [{model.regime:>14s}]", "  ".join(f"{v:7.3f}" for v in vals))

    print()
    print("population conservation: c0^2 + c^2 = 1 at every instant")
    model = AmplitudeModel(1.0, 0.3)
    grid = np.linspace(0.0, 30.0, 3001)
    a = np.asarray(c0(model, grid))
    c = np.asarray(c_excitation(model, grid))
    print(f"  max |c0^2 + c^2 - 1| over {grid.size} samples:",
          f"{np.max(np.abs(a * a + c * c - 1.0)):.2e}")

    print()
    print("first zeros of c0 (only the oscillatory regime has them):")
    for x in (0.01, 0.1, 1.0, 1.9, 2.0, 5.0):
        root = first_zero(AmplitudeModel(1.0, x))
        msg = f"gamma0*t = {root:.4f}" if root is not None else "none"
        print(f"  x={x:<5g} -> {msg}")


if __name__ == "__main__":
    main()
