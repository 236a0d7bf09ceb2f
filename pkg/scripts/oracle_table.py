"""Closed-form Gaussian/Haar map values against Romberg quadrature.

Sweeps the 5 x 5 (w, u) lattice for both parameter sets and both Gaussian
width pairs and prints the worst disagreement per combination.
"""
import argparse
import json
from dataclasses import dataclass

import numpy as np

from qwlct.oracle import analytic_qwlct_gaussian_haar, quadrature_qwlct_gaussian_haar
from qwlct.verify import CHIRPY, FOURIER_LIKE


@dataclass(frozen=True)
class OracleConfig:
    w_max: float = 2.0
    u_range: tuple[float, float] = (-0.5, 1.0)
    points: int = 5
    alphas: tuple[tuple[float, float], ...] = ((1.0, 1.0), (2.0, 0.5))
    tol: float = 1e-6


def sweep(cfg: OracleConfig) -> list[dict]:
    rows = []
    for name, P in (("fourier", FOURIER_LIKE), ("chirpy", CHIRPY)):
        for alpha in cfg.alphas:
            for t in np.linspace(-cfg.w_max, cfg.w_max, cfg.points):
                for v in np.linspace(*cfg.u_range, cfg.points):
                    w, u = (float(t), 0.5 * float(t)), (float(v), float(v))
                    exact = analytic_qwlct_gaussian_haar(P, alpha, w, u)
                    quad, change = quadrature_qwlct_gaussian_haar(P, alpha, w, u)
                    rows.append({"params": name, "alpha": list(alpha), "w": list(w), "u": list(u),
                                 "analytic": list(exact), "quadrature": list(quad),
                                 "error": (exact - quad).norm() / (1 + quad.norm()),
                                 "self_convergence": change})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", help="also write every row to this file")
    args = ap.parse_args()
    cfg = OracleConfig()
    rows = sweep(cfg)
    print(f"{'params':<8} {'alpha':<11} {'worst error':>12} {'worst self-conv':>16}")
    for name in ("fourier", "chirpy"):
        for alpha in cfg.alphas:
            sel = [r for r in rows if r["params"] == name and tuple(r["alpha"]) == alpha]
            print(f"{name:<8} {str(alpha):<11} {max(r['error'] for r in sel):>12.3e} "
                  f"{max(r['self_convergence'] for r in sel):>16.3e}")
    worst = max(r["error"] for r in rows)
    print(f"overall worst {worst:.3e} ({'within' if worst <= cfg.tol else 'above'} {cfg.tol:.0e})")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
