"""Maximal CGLMP value over the AITTS angles and the p needed to exceed 2.

Optionally scans alternative measurement phases given as a1,a2,b1,b2.
"""
import argparse

from aitts.bell import DEFAULT_PHASES, MeasurementPhases, bell_operator
from aitts.explore import Metric, global_threshold, maximize

import numpy as np


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("phases", nargs="*", default=[], help="extra phase sets a1,a2,b1,b2")
    args = ap.parse_args()
    for phases in [DEFAULT_PHASES] + [MeasurementPhases.parse(s) for s in args.phases]:
        metric = Metric.bell(phases)
        res = maximize(metric)
        thr = global_threshold(metric, 2.0)
        top = float(np.linalg.eigvalsh(bell_operator(phases)).max())
        print(f"phases {phases.as_tuple()}: max I3 {res.value:.6f} (operator bound {top:.6f})")
        for o in res.optima:
            print(f"    optimum at theta {o.theta:.6f}, phi {o.phi:.6f}")
        print("    I3 > 2 needs p > " + (f"{thr.value:.6f}" if thr else "never reached"))


if __name__ == "__main__":
    main()
