"""Mesh vs voxel vs analytic transform of the unit sphere along Qx.

Writes one CSV with |FT| for the analytic sphere, volume-matched icospheres,
and the voxelized sphere, plus the absolute errors of each approximation.

    python scripts/sphere_comparison.py --out sphere_comparison.csv
"""

import argparse
import csv
from dataclasses import dataclass, field, fields

import numpy as np

from polyft import ft_mesh, ft_sphere_analytic
from polyft.mesh_io import format_number, icosphere, match_volume
from polyft.voxel_ref import voxel_ft, voxelize


@dataclass
class Config:
    radius: float = 1.0
    q_min: float = 0.5
    q_max: float = 40.0
    n_q: int = 200
    levels: tuple = field(default=(1, 2, 3))
    voxel_level: int = 4  # icosphere level used as the voxelization input
    pitch: float = 0.2
    out: str = "sphere_comparison.csv"


def run(cfg):
    q = np.linspace(cfg.q_min, cfg.q_max, cfg.n_q)
    qs = np.stack([q, np.zeros_like(q), np.zeros_like(q)], axis=1)
    target = 4.0 * np.pi * cfg.radius**3 / 3.0
    cols = {"Qx": q, "analytic": ft_sphere_analytic(q, cfg.radius)}
    for level in cfg.levels:
        mesh = match_volume(icosphere(cfg.radius, level), target)
        cols[f"mesh_L{level}"] = ft_mesh(qs, mesh)
    grid = voxelize(icosphere(cfg.radius, cfg.voxel_level), cfg.pitch)
    cols["voxel"] = voxel_ft(grid, qs)

    names = ["Qx", "analytic"] + [k for k in cols if k not in ("Qx", "analytic")]
    header = ["Qx", "abs_analytic"]
    for k in names[2:]:
        header += [f"abs_{k}", f"err_{k}"]
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i in range(len(q)):
            row = [q[i], abs(cols["analytic"][i])]
            for k in names[2:]:
                row += [abs(cols[k][i]), abs(cols[k][i] - cols["analytic"][i])]
            w.writerow([format_number(v) for v in row])
    print(f"voxels={grid.count} pitch={cfg.pitch}")
    for k in names[2:]:
        err = np.abs(cols[k] - cols["analytic"])
        print(f"{k}: max_abs_err={err.max():.4g} at Qx={q[np.argmax(err)]:.3f}")
    print(f"wrote {cfg.out}")


def parse_args(argv=None):
    cfg = Config()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(Config):
        if f.name == "levels":
            p.add_argument("--levels", type=int, nargs="+", default=list(cfg.levels))
        else:
            p.add_argument("--" + f.name.replace("_", "-"), type=type(getattr(cfg, f.name)),
                           default=getattr(cfg, f.name))
    ns = vars(p.parse_args(argv))
    ns["levels"] = tuple(ns["levels"])
    return Config(**ns)


if __name__ == "__main__":
    run(parse_args())
