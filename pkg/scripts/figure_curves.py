"""Metric-versus-p curves for the catalog states, with detected kinks.

Writes one CSV per metric (columns state,theta,phi,p,value) and prints the
kinks found on each distinct curve.
"""
import argparse
from pathlib import Path

import numpy as np

from aitts.explore import Metric, detect_breakpoints, sweep_p
from aitts.export import to_csv
from aitts.states import catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/curves"))
    ap.add_argument("--p-steps", type=int, default=201)
    ap.add_argument("--convention", default="paper")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    ps = np.linspace(0.0, 1.0, args.p_steps)
    for metric in (Metric.entanglement(), Metric.wigner(args.convention), Metric.bell()):
        rows, seen = [], set()
        for entry in catalog(include_noise=False):
            samples = sweep_p(entry.theta, entry.phi, ps, metric)
            rows += [[entry.name, entry.theta, entry.phi, s.p, s.value] for s in samples]
            key = tuple(round(s.value, 9) for s in samples)
            if key in seen:
                continue
            seen.add(key)
            kinks = detect_breakpoints(samples, func=lambda p, e=entry: metric(e.theta, e.phi, p))
            print(f"{metric.symbol:>2} {entry.name:5} value(1) = {samples[-1].value:.6f}  kinks: "
                  + (", ".join(f"{k:.6f}" for k in kinks) or "none"))
        path = args.out / f"{metric.kind.value}.csv"
        path.write_text(to_csv(["state", "theta", "phi", "p", "value"], rows))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
