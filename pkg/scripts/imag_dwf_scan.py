"""How far the fractional-phase DWF is from real: max |Im W| over pure states.

The imaginary part of the AITTS DWF is p times that of the pure state, so the
pure states bound the whole family.  Also reports the largest Wigner
negativity found on the same grid.
"""
import argparse
import math

import numpy as np

from aitts.explore import Metric, angle_grid, max_imag_scan, maximize
from aitts.wigner import WignerConvention, max_imag_aitts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta-steps", type=int, default=361)
    ap.add_argument("--phi-steps", type=int, default=721)
    args = ap.parse_args()
    t = angle_grid(args.theta_steps, math.pi)
    f = angle_grid(args.phi_steps, 2 * math.pi)
    for conv in WignerConvention:
        value, at_t, at_f = max_imag_scan(t, f, conv)
        T, F = np.meshgrid(t, f, indexing="ij")
        frac = float(np.mean(max_imag_aitts(T, F, conv) > 1e-10))
        best = maximize(Metric.wigner(conv))
        print(f"{conv.value:6} max |Im W| = {value:.6g} at ({at_t:.6f}, {at_f:.6f}); "
              f"{100 * frac:.1f}% of grid above 1e-10; max N = {best.value:.6f} at "
              f"({best.theta:.6f}, {best.phi:.6f})")


if __name__ == "__main__":
    main()
