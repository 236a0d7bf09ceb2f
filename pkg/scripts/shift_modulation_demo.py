"""Shift and modulation covariance of the windowed transform, with images.

Computes the map of a Gaussian, of its shifted copy and of its modulated
copy, compares each direct map with the one predicted from the original, and
writes |G| slices at u = 0 and u = r as 16-bit PGM files.
"""
import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from qwlct.field import Grid2D, modulate_field, shift_field
from qwlct.io import export_magnitude_pgm
from qwlct.lct import LCTPair, parse_params
from qwlct.qwlct import predicted_modulation_image, predicted_shift_image, qwlct_forward
from qwlct.verify import gaussian_field, modulation_on_lattice, shift_aligned_wgrid


@dataclass(frozen=True)
class DemoConfig:
    half_width: float = 8.0
    n: int = 96
    u_spacing: float = 1.0
    u_count: int = 24
    shift: tuple[float, float] = (2.0, -1.0)
    modulation_steps: tuple[int, int] = (3, -2)
    signal_sigma: float = 0.6
    window_sigma: float = 0.8


def u_index(G, u) -> tuple[int, int]:
    return tuple(int(np.argmin(np.abs(G.ugrid.axis(k) - u[k - 1]))) for k in (1, 2))


def run(cfg: DemoConfig, P: LCTPair, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    xg = Grid2D.centered(cfg.half_width, cfg.n)
    ug = Grid2D.symmetric(cfg.u_spacing, cfg.u_count)
    f = gaussian_field(xg, sigma=cfg.signal_sigma)
    phi = gaussian_field(xg, sigma=cfg.window_sigma)
    r = cfg.shift
    wg = shift_aligned_wgrid(xg, P, r)
    G = qwlct_forward(f, phi, P, wg, ug)
    shifted = qwlct_forward(shift_field(f, r), phi, P, wg, ug)
    pred = predicted_shift_image(G, P, r)
    err = np.linalg.norm(shifted.data - pred.data) / np.linalg.norm(pred.data)
    print(f"shift r={r}: relative L2 difference {err:.3e}")
    s = modulation_on_lattice(P, wg, cfg.modulation_steps)
    modulated = qwlct_forward(modulate_field(f, s), phi, P, wg, ug)
    pred_m = predicted_modulation_image(G, P, s)
    err = np.linalg.norm(modulated.data - pred_m.data) / np.linalg.norm(pred_m.data)
    print(f"modulation s=({s[0]:.4f}, {s[1]:.4f}): relative L2 difference {err:.3e}")
    # symmetric even-count lattice: nearest point to the origin sits half a step out
    u0 = (0.5 * cfg.u_spacing, 0.5 * cfg.u_spacing)
    u_moved = (u0[0] + r[0], u0[1] + r[1])
    for label, M, u in (("original", G, u0), ("shifted", shifted, u_moved), ("modulated", modulated, u0)):
        i1, i2 = u_index(M, u)
        lo, hi = export_magnitude_pgm(M.abs()[:, :, i1, i2], out / f"{label}.pgm")
        print(f"wrote {out / f'{label}.pgm'} (u={u}, |G| in [{lo:.3e}, {hi:.3e}])")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A1", default="2,1,1,1")
    ap.add_argument("--A2", default="1,1,0,1")
    ap.add_argument("--out", default="demo_out")
    args = ap.parse_args()
    run(DemoConfig(), LCTPair(parse_params(args.A1), parse_params(args.A2)), Path(args.out))


if __name__ == "__main__":
    main()
