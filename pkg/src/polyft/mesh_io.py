"""surfacemesh reader/writer, canonical test meshes, and field CSV output.

The surfacemesh layout is the one netgen writes::

    surfacemesh
    <npoints>
    x y z            (npoints lines)
    <nelements>
    i j k            (nelements lines, 1-based point indices)
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (
    BadHeader,
    CountMismatch,
    FieldFormatError,
    IndexOutOfRange,
    InvalidSpec,
    MalformedNumber,
)
from .geometry import SurfaceMesh, mesh_volume

MAX_SUBDIVISION = 7


def _text(data):
    if isinstance(data, (bytes, bytearray)):
        return data.decode("ascii")
    if isinstance(data, str):
        return data
    raw = data.read()
    return raw.decode("ascii") if isinstance(raw, bytes) else raw


def _lines(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if fields:
            yield lineno, fields


def _count(item, what):
    if item is None:
        raise CountMismatch(f"file ended before the {what} count")
    lineno, fields = item
    if len(fields) != 1:
        raise MalformedNumber(f"expected a single {what} count", lineno)
    try:
        n = int(fields[0])
    except ValueError:
        raise MalformedNumber(f"bad {what} count {fields[0]!r}", lineno) from None
    if n < 0:
        raise MalformedNumber(f"negative {what} count", lineno)
    return n


def parse_surfacemesh(data):
    """Parse surfacemesh text (str, bytes or a file object) into a SurfaceMesh.

    Element indices are shifted from 1-based to 0-based.
    """
    lines = _lines(_text(data))
    first = next(lines, None)
    if first is None or first[1] != ["surfacemesh"]:
        raise BadHeader("not a surfacemesh file", None if first is None else first[0])

    npoints = _count(next(lines, None), "point")
    points = np.empty((npoints, 3))
    for i in range(npoints):
        item = next(lines, None)
        if item is None:
            raise CountMismatch(f"expected {npoints} points, found {i}")
        lineno, fields = item
        if len(fields) != 3:
            raise MalformedNumber(f"expected 3 coordinates, got {len(fields)}", lineno)
        try:
            points[i] = [float(v) for v in fields]
        except ValueError:
            raise MalformedNumber(f"bad coordinate in {' '.join(fields)!r}", lineno) from None
        if not np.all(np.isfinite(points[i])):
            raise MalformedNumber("non-finite coordinate", lineno)

    nelem = _count(next(lines, None), "element")
    facets = []
    for j in range(nelem):
        item = next(lines, None)
        if item is None:
            raise CountMismatch(f"expected {nelem} elements, found {j}")
        lineno, fields = item
        if len(fields) != 3:
            raise MalformedNumber(f"expected 3 point indices, got {len(fields)}", lineno)
        try:
            idx = [int(v) for v in fields]
        except ValueError:
            raise MalformedNumber(f"bad index in {' '.join(fields)!r}", lineno) from None
        if any(i < 1 or i > npoints for i in idx):
            raise IndexOutOfRange(f"index outside [1, {npoints}]", lineno)
        facets.append(tuple(i - 1 for i in idx))

    extra = next(lines, None)
    if extra is not None:
        raise CountMismatch("trailing data after the declared elements", extra[0])
    return SurfaceMesh(points, facets)


def write_surfacemesh(mesh):
    """Serialize to surfacemesh bytes; coordinates use shortest round-trip repr."""
    out = io.StringIO()
    out.write("surfacemesh\n")
    out.write(f"{len(mesh.vertices)}\n")
    for x, y, z in mesh.vertices.tolist():
        out.write(f"{x!r} {y!r} {z!r}\n")
    out.write(f"{len(mesh.facets)}\n")
    for f in mesh.facets:
        out.write(" ".join(str(i + 1) for i in f) + "\n")
    return out.getvalue().encode("ascii")


def two_spheres():
    """Union of two unit spheres centred at x = -0.6 and x = 0.6 (83 nodes, 160 triangles)."""
    data = resources.files("polyft").joinpath("data/two_spheres.surfacemesh").read_bytes()
    return parse_surfacemesh(data)


# ---------------------------------------------------------------- generators

@dataclass(frozen=True)
class GeneratorSpec:
    kind: str  # cube | prism | icosphere | uvsphere
    dims: tuple = (1.0, 1.0, 1.0)
    radius: float = 1.0
    subdivision: int = 0
    volume_match: float | None = None

    def __post_init__(self):
        if self.kind not in ("cube", "prism", "icosphere", "uvsphere"):
            raise InvalidSpec(f"unknown shape kind {self.kind!r}")
        if not 0 <= self.subdivision <= MAX_SUBDIVISION:
            raise InvalidSpec(f"subdivision must be in [0, {MAX_SUBDIVISION}]")
        if self.kind == "prism" and len(self.dims) != 3:
            raise InvalidSpec("prism needs three dimensions a, b, c")
        if self.kind == "cube" and len(self.dims) not in (1, 3):
            raise InvalidSpec("cube takes one edge length")
        if self.kind == "cube" and len(set(self.dims)) != 1:
            raise InvalidSpec("cube edges must be equal; use prism")
        sizes = list(self.dims) + [self.radius]
        if not all(math.isfinite(v) and v > 0 for v in sizes):
            raise InvalidSpec("dimensions must be positive and finite")
        if self.volume_match is not None and not (
            math.isfinite(self.volume_match) and self.volume_match > 0
        ):
            raise InvalidSpec("volume_match must be positive")


def box_mesh(a, b, c):
    """12-triangle box [0,a]x[0,b]x[0,c], outward winding."""
    verts = np.array(
        [[x, y, z] for x in (0.0, a) for y in (0.0, b) for z in (0.0, c)]
    )
    # vertex index = 4*ix + 2*iy + iz
    quads = [(0, 2, 6, 4), (1, 5, 7, 3), (0, 4, 5, 1), (2, 3, 7, 6), (0, 1, 3, 2), (4, 6, 7, 5)]
    tris = [t for q in quads for t in ((q[0], q[1], q[2]), (q[0], q[2], q[3]))]
    return SurfaceMesh(verts, tris)


def icosphere(radius=1.0, level=0):
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    verts = [np.array(v, float) / np.linalg.norm(v) for v in verts]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(level):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return SurfaceMesh(radius * np.array(verts), faces)


def uvsphere(radius=1.0, level=0, ngon_caps=False):
    """Latitude/longitude sphere with flat caps normal to z.

    Bands between latitude rings are split into triangles. Each cap is the
    planar polygon of the first/last ring, so q along z hits the q_perp = 0
    limit on every cap facet. By default the caps are fan-triangulated so the
    mesh fits the triangle-only file format; ``ngon_caps=True`` keeps each cap
    as a single n-gon facet.
    """
    n_lon = 8 * (level + 1)
    n_lat = 4 * (level + 1)
    rings = []
    verts = []
    for j in range(1, n_lat):
        theta = math.pi * j / n_lat
        z, rho = math.cos(theta), math.sin(theta)
        ring = []
        for k in range(n_lon):
            az = 2.0 * math.pi * k / n_lon
            verts.append((rho * math.cos(az), rho * math.sin(az), z))
            ring.append(len(verts) - 1)
        rings.append(ring)
    # top cap counter-clockwise seen from +z, bottom cap reversed
    caps = [tuple(rings[0]), tuple(reversed(rings[-1]))]
    if not ngon_caps:
        caps = [[(c[0], c[k], c[k + 1]) for k in range(1, len(c) - 1)] for c in caps]
    else:
        caps = [[c] for c in caps]
    facets = list(caps[0])
    for upper, lower in zip(rings[:-1], rings[1:]):
        for k in range(n_lon):
            k1 = (k + 1) % n_lon
            facets.append((upper[k], lower[k], lower[k1]))
            facets.append((upper[k], lower[k1], upper[k1]))
    facets += caps[1]
    return SurfaceMesh(radius * np.array(verts), facets)


def generate(spec):
    """Build a closed, outward-wound mesh from a GeneratorSpec."""
    if spec.kind == "cube":
        a = spec.dims[0]
        mesh = box_mesh(a, a, a)
    elif spec.kind == "prism":
        mesh = box_mesh(*spec.dims)
    elif spec.kind == "icosphere":
        mesh = icosphere(spec.radius, spec.subdivision)
    else:
        mesh = uvsphere(spec.radius, spec.subdivision)
    if spec.volume_match is not None:
        mesh = match_volume(mesh, spec.volume_match)
    return mesh


def match_volume(mesh, target):
    """Uniformly rescale about the bounding-box center to hit a target volume."""
    for _ in range(3):
        v = mesh_volume(mesh)
        if abs(v - target) <= 1e-15 * target:
            break
        mesh = mesh.scaled((target / v) ** (1.0 / 3.0), about=mesh.center)
    return mesh


# ---------------------------------------------------------------- field CSV

CSV_HEADER = "Qx,Qy,Qz,re,im,abs"


def format_number(x):
    """Shortest round-trip decimal; integral values drop the trailing '.0'."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def write_field_csv(field):
    """Serialize an FTField as CSV bytes, rows in Qx-fastest order."""
    q = field.points
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for (qx, qy, qz), v in zip(q.tolist(), field.values.tolist()):
        re, im = v.real, v.imag
        row = (qx, qy, qz, re, im, math.hypot(re, im))
        out.write(",".join(format_number(x) for x in row) + "\n")
    return out.getvalue().encode("ascii")


def read_field_csv(data):
    """Read CSV written by :func:`write_field_csv` back into an FTField."""
    from .qfield import FTField, QGrid

    lines = [l for l in _text(data).splitlines() if l.strip()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise FieldFormatError(f"expected header {CSV_HEADER!r}")
    try:
        rows = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
    except ValueError as exc:
        raise FieldFormatError(f"bad number: {exc}") from None
    if rows.size == 0:
        raise FieldFormatError("field has no rows")
    if rows.ndim != 2 or rows.shape[1] != 6:
        raise FieldFormatError("expected 6 columns per row")
    grid = QGrid.from_points(rows[:, :3])
    return FTField(grid, rows[:, 3] + 1j * rows[:, 4])
