"""Voxel reference path: center-inside voxelization plus an exact box-sum FT.

Every occupied cell is a cube of edge ``pitch``; the grid transform is the sum
of per-cell box transforms, so the only error against the true shape is the
discretization itself.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError
from .ft_core import ft_prism

GRAZE_TOL = 1e-12
JITTER_REL = 1e-7
_MAX_JITTER_TRIES = 8
# unequal y/z steps so the recast ray leaves diagonals such as y = z
_JITTER_DIR = (1.0, 0.6180339887498949)


@dataclass(frozen=True, eq=False)
class VoxelGrid:
    pitch: float
    origin: np.ndarray  # corner of cell (0, 0, 0)
    dims: tuple
    occupancy: np.ndarray  # bool, shape dims, indexed [ix, iy, iz]

    def __post_init__(self):
        if not self.pitch > 0:
            raise ValueError("pitch must be positive")
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.shape != tuple(self.dims):
            raise ValueError(f"occupancy shape {occ.shape} does not match dims {self.dims}")
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float))

    @property
    def count(self):
        return int(self.occupancy.sum())

    def occupied_indices(self):
        """(n, 3) integer indices in ascending C order (iz fastest)."""
        return np.argwhere(self.occupancy)

    def corners(self):
        return self.origin + self.pitch * self.occupied_indices()

    def centers(self):
        return self.corners() + 0.5 * self.pitch


def _axis_cells(half_extent, pitch):
    # even count so the bounding-box center sits on a cell corner
    return max(1, math.ceil(half_extent / pitch - 1e-12)) * 2


def _crossings(tris, y, z):
    """x-coordinates where the line (., y, z) pierces the triangles.

    Returns None when the line comes within GRAZE_TOL of a triangle edge or
    vertex in the yz projection, i.e. the parity count would be ambiguous.
    """
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]

    def edge(p, q):
        return (q[:, 1] - p[:, 1]) * (z - p[:, 2]) - (q[:, 2] - p[:, 2]) * (y - p[:, 1])

    w0, w1, w2 = edge(b, c), edge(c, a), edge(a, b)
    det = w0 + w1 + w2
    lens = np.stack([
        np.hypot(c[:, 1] - b[:, 1], c[:, 2] - b[:, 2]),
        np.hypot(a[:, 1] - c[:, 1], a[:, 2] - c[:, 2]),
        np.hypot(b[:, 1] - a[:, 1], b[:, 2] - a[:, 2]),
    ], axis=1)
    # distance in the yz plane from the line to each edge (|w| / edge length)
    dist = np.abs(np.stack([w0, w1, w2], axis=1)) / np.maximum(lens, 1e-300)
    inside = ((w0 >= 0) & (w1 >= 0) & (w2 >= 0)) | ((w0 <= 0) & (w1 <= 0) & (w2 <= 0))
    inside &= det != 0
    if np.any(inside[:, None] & (dist < GRAZE_TOL)):
        return None
    sel = np.nonzero(inside)[0]
    x = (w0[sel] * a[sel, 0] + w1[sel] * b[sel, 0] + w2[sel] * c[sel, 0]) / det[sel]
    return np.sort(x)


def voxelize(mesh, pitch):
    """Occupancy of a grid centred on the mesh bounding box.

    A cell is occupied when its center is inside the mesh, decided by the
    parity of surface crossings along +x. Rows whose ray grazes an edge or
    vertex are recast with a fixed small offset in y and z. The offset is
    below any meaningful geometry scale, so counts do not depend on it.
    """
    pitch = float(pitch)
    if not pitch > 0:
        raise ValueError("pitch must be positive")
    mesh.require_watertight()
    lo, hi = mesh.vertices.min(0), mesh.vertices.max(0)
    center = mesh.center
    dims = tuple(_axis_cells(h, pitch) for h in 0.5 * (hi - lo))
    origin = center - 0.5 * pitch * np.array(dims)
    tris = mesh.fan_triangles
    # drop triangles that are edge-on to the x direction; they never count
    tris = tris[np.abs(np.cross(tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 0])[:, 0]) > 0]
    xc = origin[0] + pitch * (np.arange(dims[0]) + 0.5)
    occ = np.zeros(dims, dtype=bool)
    jitter = JITTER_REL * pitch
    for iy in range(dims[1]):
        y = origin[1] + pitch * (iy + 0.5)
        for iz in range(dims[2]):
            z = origin[2] + pitch * (iz + 0.5)
            xs = None
            for k in range(_MAX_JITTER_TRIES):
                xs = _crossings(tris, y + k * jitter * _JITTER_DIR[0], z + k * jitter * _JITTER_DIR[1])
                if xs is not None:
                    break
            if xs is None:
                raise NumericError(f"could not find a clean ray for row ({iy}, {iz})")
            # crossings strictly to the right of each center
            right = len(xs) - np.searchsorted(xs, xc, side="right")
            occ[:, iy, iz] = (right % 2) == 1
    return VoxelGrid(pitch, origin, dims, occ)


def voxel_ft(grid, q):
    """Sum of per-cell box transforms; cells accumulate in ascending index order."""
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    qs = np.atleast_2d(q)
    d = grid.pitch
    corners = grid.corners()
    if len(corners) == 0:
        out = np.zeros(len(qs), dtype=complex)
    else:
        phase = np.exp(1j * np.einsum("ik,jk->ij", qs, corners))
        out = np.cumsum(phase, axis=1)[:, -1] * ft_prism(qs, d, d, d)
    return complex(out[0]) if single else out


def write_occupancy(grid):
    """Text list of occupied cells, one ``ix iy iz`` per line."""
    out = io.StringIO()
    for ix, iy, iz in grid.occupied_indices().tolist():
        out.write(f"{ix} {iy} {iz}\n")
    return out.getvalue().encode("ascii")
