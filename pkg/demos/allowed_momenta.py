"""
Demo: from a root K(k) to the allowed longitudinal momenta.

The all-equal pattern gives K = +1 and K = -1, so the allowed k are plain
multiples of pi / (2a).  A two-phase pattern with a k-dependent root shifts
the levels away from that ladder; each level is listed with its branch and root.
"""

import math

import numpy as np

from diracslab import (LandauLevel, ONE_PHASE, TWO_PHASE, PhaseConfig, QuantizationProblem,
                       allowed_k, spectrum_sweep)


def main():
    a = 1.0
    simple = QuantizationProblem(ONE_PHASE[0], PhaseConfig.for_variant(ONE_PHASE[0], 0.4),
                                 mass=1.0, field=0.5, a_slab=a, k_window=(0.05, 10.0))
    table = allowed_k(simple)
    print("All-equal phases: k a / pi")
    print("  " + " ".join(f"{k * a / math.pi:.6f}" for k in table.ks()))

    shifted = QuantizationProblem(TWO_PHASE[3], PhaseConfig.for_variant(TWO_PHASE[3], 0.3, 1.7),
                                  mass=1.0, field=0.5, parameterization=LandauLevel(1),
                                  a_slab=a, k_window=(0.05, 10.0))
    table = allowed_k(shifted)
    print("\nTwoPhase(4): k, branch, root, residual")
    for r in table.rows:
        print(f"  k = {r.k:9.6f}  n_b = {r.branch:3d}  root_index = {r.root_index}"
              f"  arg/pi = {np.angle(r.root_value) / np.pi:+.4f}  residual = {r.residual:.1e}")

    print("\nWidening the slab packs the levels closer (all-equal pattern, K = +1):")
    for w, t in zip((0.5, 1.0, 2.0), spectrum_sweep(simple.replace(root_selector=0), "a_slab",
                                                    [0.5, 1.0, 2.0])):
        print(f"  a = {w:3.1f}: " + " ".join(f"{k:.4f}" for k in t.ks()[:5]))


if __name__ == "__main__":
    main()
