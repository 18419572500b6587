"""Feasibility regions E > 0, N > 0, I3 > 2 and I3 > I3(iso) over (theta, phi, p).

For each region prints the lowest p on the grid with a nonempty slab and the
(theta, phi) bounding boxes at p = 1, then stores the masks as .npz.
"""
import argparse
import math
import time
from pathlib import Path

import numpy as np

from aitts.explore import Metric, angle_grid, region_mask


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/regions"))
    ap.add_argument("--theta-steps", type=int, default=181)
    ap.add_argument("--phi-steps", type=int, default=361)
    ap.add_argument("--p-steps", type=int, default=101)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    grids = (angle_grid(args.theta_steps, math.pi), angle_grid(args.phi_steps, 2 * math.pi),
             angle_grid(args.p_steps, 1.0))
    jobs = [("entanglement", Metric.entanglement(), 0.0), ("wigner", Metric.wigner(), 0.0),
            ("bell", Metric.bell(), 2.0), ("bell_above_iso", Metric.bell(), 2.87293)]
    for name, metric, level in jobs:
        start = time.perf_counter()
        mask = region_mask(metric, level, *grids, threads=args.threads)
        boxes = mask.slab_boxes(len(grids[2]) - 1)
        print(f"{name:15} level {level:<8g} lowest p {mask.lowest_p()}  "
              f"{len(boxes)} component(s) at p=1  ({time.perf_counter() - start:.1f} s)")
        for b in boxes[:4]:
            print("    theta [{:.4f}, {:.4f}]  phi [{:.4f}, {:.4f}]".format(*b))
        np.savez_compressed(args.out / f"{name}.npz", theta=grids[0], phi=grids[1], p=grids[2], mask=mask.mask)


if __name__ == "__main__":
    main()
