"""Mesh and polygon data model plus the measure operations built on it.

Vectors are plain float64 numpy arrays of shape ``(3,)`` or ``(2,)``. A facet
is a tuple of zero-based vertex indices, wound counter-clockwise when seen
from outside the volume so that the right-hand-rule normal points outward.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateFacet, DegenerateSegment, InputDataError, OpenMesh

SEGMENT_EPS = 1e-14
PLANE_REL_EPS = 1e-9
# |e1 x e2| below this fraction of |e1||e2| counts as collinear
COLLINEAR_REL_EPS = 1e-12

Facet = tuple  # tuple[int, ...]


def _as_vertex_array(vertices, dim):
    arr = np.array(vertices, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, dim)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InputDataError(f"expected an (N, {dim}) vertex array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputDataError("vertex coordinates must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Polygon2D:
    """Closed planar loop; the last vertex connects back to the first."""

    vertices: np.ndarray

    def __post_init__(self):
        verts = _as_vertex_array(self.vertices, 2)
        if len(verts) < 3:
            raise InputDataError("a polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", verts)

    @property
    def edges(self):
        """Segment start and end points, shape ``(n, 2)`` each."""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    @cached_property
    def bbox_diagonal(self):
        return float(np.linalg.norm(self.vertices.max(0) - self.vertices.min(0)))


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Vertex table plus facet table.

    Construction only checks index ranges and repeated consecutive indices;
    closedness, planarity and orientation are the job of :func:`validate_mesh`.
    """

    vertices: np.ndarray
    facets: tuple = field(default=())

    def __post_init__(self):
        verts = _as_vertex_array(self.vertices, 3)
        facets = tuple(tuple(int(i) for i in f) for f in self.facets)
        n = len(verts)
        for k, f in enumerate(facets):
            if len(f) < 3:
                raise InputDataError(f"facet {k} has fewer than 3 vertices")
            if min(f) < 0 or max(f) >= n:
                raise InputDataError(f"facet {k} references a vertex outside [0, {n})")
            if any(f[i] == f[(i + 1) % len(f)] for i in range(len(f))):
                raise InputDataError(f"facet {k} repeats a vertex consecutively")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "facets", facets)

    def __len__(self):
        return len(self.facets)

    def same_as(self, other):
        """Exact equality of vertex and facet tables."""
        return (
            self.vertices.shape == other.vertices.shape
            and bool(np.array_equal(self.vertices, other.vertices))
            and self.facets == other.facets
        )

    @cached_property
    def bbox_diagonal(self):
        if len(self.vertices) == 0:
            return 0.0
        return float(np.linalg.norm(self.vertices.max(0) - self.vertices.min(0)))

    @cached_property
    def center(self):
        """Bounding-box center; used as the anchor for rescaling and voxel grids."""
        if len(self.vertices) == 0:
            return np.zeros(3)
        return 0.5 * (self.vertices.max(0) + self.vertices.min(0))

    @cached_property
    def edge_defects(self):
        """Undirected edges that break the closed-surface condition.

        Returns ``(boundary, bad)``: edges used by a single facet, and edges
        used more than twice or twice in the same direction.
        """
        directed = Counter()
        for f in self.facets:
            for a, b in zip(f, f[1:] + f[:1]):
                directed[a, b] += 1
        boundary, bad = [], []
        seen = set()
        for a, b in directed:
            key = (min(a, b), max(a, b))
            if key in seen:
                continue
            seen.add(key)
            fwd, rev = directed.get((a, b), 0), directed.get((b, a), 0)
            if fwd + rev == 1:
                boundary.append(key)
            elif fwd != 1 or rev != 1:
                bad.append(key)
        return sorted(boundary), sorted(bad)

    @cached_property
    def fan_triangles(self):
        """Fan triangulation of every facet, shape ``(T, 3, 3)``, facet order kept."""
        idx = [(f[0], f[k], f[k + 1]) for f in self.facets for k in range(1, len(f) - 1)]
        if not idx:
            return np.zeros((0, 3, 3))
        return self.vertices[np.array(idx)]

    @property
    def is_watertight(self):
        boundary, bad = self.edge_defects
        return not boundary and not bad

    def require_watertight(self):
        boundary, bad = self.edge_defects
        if boundary or bad:
            raise OpenMesh(
                f"mesh is not closed: {len(boundary)} boundary edge(s), "
                f"{len(bad)} non-manifold or misoriented edge(s)"
            )

    # -- derived meshes --------------------------------------------------
    def translated(self, t):
        return SurfaceMesh(self.vertices + np.asarray(t, dtype=float), self.facets)

    def transformed(self, matrix):
        """Apply a 3x3 linear map to every vertex (rotation, uniform scale)."""
        m = np.asarray(matrix, dtype=float)
        return SurfaceMesh(self.vertices @ m.T, self.facets)

    def scaled(self, s, about=None):
        about = np.zeros(3) if about is None else np.asarray(about, dtype=float)
        return SurfaceMesh(about + s * (self.vertices - about), self.facets)

    def reversed(self):
        """Same surface with every facet wound the other way."""
        return SurfaceMesh(self.vertices, [f[::-1] for f in self.facets])

    @staticmethod
    def concatenate(*meshes):
        verts, facets, offset = [], [], 0
        for m in meshes:
            verts.append(m.vertices)
            facets.extend(tuple(i + offset for i in f) for f in m.facets)
            offset += len(m.vertices)
        return SurfaceMesh(np.concatenate(verts) if verts else np.zeros((0, 3)), facets)


def _facet_points(mesh, facet):
    return mesh.vertices[list(facet)]


def _raw_normal(p):
    e1, e2 = p[1] - p[0], p[2] - p[0]
    n = np.cross(e1, e2)
    norm = np.linalg.norm(n)
    scale = np.linalg.norm(e1) * np.linalg.norm(e2)
    if scale == 0.0 or norm <= COLLINEAR_REL_EPS * scale:
        raise DegenerateFacet("first three facet vertices are collinear")
    return n / norm


def facet_normal(mesh, facet):
    """Unit outward normal from the first two edges of the facet."""
    return _raw_normal(_facet_points(mesh, facet))


def segment_normal_2d(r0, r1):
    """Unit normal to the right of the direction of travel from r0 to r1.

    For a counter-clockwise polygon this points out of the enclosed area.
    """
    (x0, y0), (x1, y1) = np.asarray(r0, float), np.asarray(r1, float)
    d = np.hypot(x1 - x0, y1 - y0)
    if d < SEGMENT_EPS:
        raise DegenerateSegment(f"segment length {d!r} below {SEGMENT_EPS}")
    return np.array([(y1 - y0) / d, (x0 - x1) / d])


def polygon_area(poly):
    """Signed shoelace area, positive for counter-clockwise traversal."""
    p, q = poly.edges
    return 0.5 * float(np.sum(p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]))


def _fan_cross_sum(p):
    # sum of (p_k - p_0) x (p_{k+1} - p_0) over the fan; equals 2 * area * n
    rel = p[1:] - p[0]
    return np.cross(rel[:-1], rel[1:]).sum(axis=0)


def facet_area(mesh, facet):
    p = _facet_points(mesh, facet)
    n = _raw_normal(p)
    return 0.5 * float(np.dot(_fan_cross_sum(p), n))


def facet_centroid(mesh, facet):
    """Area centroid of a planar facet (fan decomposition)."""
    p = _facet_points(mesh, facet)
    n = _raw_normal(p)
    rel = p[1:] - p[0]
    w = np.cross(rel[:-1], rel[1:]) @ n
    tri_c = (p[0] + p[1:-1] + p[2:]) / 3.0
    return (w[:, None] * tri_c).sum(0) / w.sum()


def mesh_volume(mesh):
    """Signed enclosed volume; positive for an outward-wound closed surface."""
    mesh.require_watertight()
    return _signed_volume(mesh)


def _signed_volume(mesh):
    # triple products about the bbox center; the sum is origin-independent for
    # a closed surface, and a nearby origin avoids cancellation
    t = mesh.fan_triangles - mesh.center
    triple = np.einsum("ij,ij->i", t[:, 0], np.cross(t[:, 1], t[:, 2]))
    return float(triple.sum()) / 6.0


@dataclass
class ValidationReport:
    boundary_edges: list
    bad_edges: list
    nonplanar_facets: list  # (facet index, max deviation)
    degenerate_facets: list
    volume: float | None
    plane_tolerance: float

    @property
    def negative_volume(self):
        return self.volume is not None and self.volume <= 0.0

    @property
    def clean(self):
        return not (
            self.boundary_edges
            or self.bad_edges
            or self.nonplanar_facets
            or self.degenerate_facets
            or self.negative_volume
        )

    def lines(self):
        out = [
            f"boundary_edges={len(self.boundary_edges)}",
            f"nonmanifold_edges={len(self.bad_edges)}",
            f"nonplanar_facets={len(self.nonplanar_facets)}",
            f"degenerate_facets={len(self.degenerate_facets)}",
            f"volume={'n/a' if self.volume is None else repr(self.volume)}",
            f"clean={self.clean}",
        ]
        return out


def validate_mesh(mesh):
    """Collect every closedness, planarity and orientation problem in one pass."""
    boundary, bad = mesh.edge_defects
    tol = PLANE_REL_EPS * mesh.bbox_diagonal
    nonplanar, degenerate = [], []
    for k, f in enumerate(mesh.facets):
        p = _facet_points(mesh, f)
        try:
            n = _raw_normal(p)
        except DegenerateFacet:
            degenerate.append(k)
            continue
        if len(f) > 3:
            dev = float(np.max(np.abs((p - p[0]) @ n)))
            if dev > tol:
                nonplanar.append((k, dev))
    volume = None if (boundary or bad) else _signed_volume(mesh)
    return ValidationReport(boundary, bad, nonplanar, degenerate, volume, tol)
