"""
Demo: a certified mode carries no current through the walls.

Build the mode from a null vector of S(K), print J^z along z at the centre of
the transverse profile, and compare with a single travelling wave, which
pushes the same current through every plane.  For a single transverse level
J^z does not depend on z, so a current that vanishes on the walls vanishes
throughout the slab.
"""

import numpy as np

from diracslab import (FOUR_PHASE, PhaseConfig, PhysicalParams, SlabMode, boundary_residual,
                       certify_mode, closed_form_roots, current_Jz)


def main():
    params = PhysicalParams(mass=1.0, energy=2.2, k=0.8, field=1.0)
    phases = PhaseConfig.for_variant(FOUR_PHASE, 0.2, 1.1, 2.5, 4.0)
    K = closed_form_roots(FOUR_PHASE, params, phases).k_roots()[0]
    mode = certify_mode(params, phases, K, landau_index=1)
    print(f"K = {K:.6f}, slab half-width a = {mode.a_slab:.6f}")
    print("A =", np.array2string(mode.A, precision=4))

    travelling = SlabMode(mode.params, phases, K, [1, 0, 0, 0], mode.transverse)
    y0 = 0.7
    z = np.linspace(-mode.a_slab, mode.a_slab, 9)
    print(f"\n{'z / a':>8}{'J^z mode':>14}{'J^z wave':>14}")
    for zi, j1, j2 in zip(z / mode.a_slab, current_Jz(mode, y0, z), current_Jz(travelling, y0, z)):
        print(f"{zi:8.3f}{j1:14.3e}{j2:14.3e}")

    print()
    for name, m in (("mode", mode), ("wave", travelling)):
        rep = boundary_residual(m)
        ref = "amplitude scale" if rep.interior_zero else "interior current"
        print(f"{name}: wall current / {ref} = {rep.residual:.2e}")


if __name__ == "__main__":
    main()
