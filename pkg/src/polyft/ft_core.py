r"""Fourier transforms of constant density over polygons and polyhedra.

All transforms use the forward kernel ``exp(+i q.r)``. The area (volume)
integral is turned into a sum over perimeter segments (facet edges) by the
divergence theorem; each segment contributes a closed-form term written in
midpoint/sinc form so that nothing divides by ``q.d``.

For a planar facet with outward unit normal ``n`` the transform splits as::

    I_m = (-i q_par / |q|^2) exp(i q_par r_par) * A(q_perp)

where ``A(q_perp)`` is the 2-D transform of the facet area, evaluated with the
in-plane part of ``q`` and full 3-D vertex positions (``q_perp . r`` only sees
the in-plane part of ``r`` anyway).

Edge sums are evaluated as ``sum_l i w_l (exp(i phi_l) sinc(u_l) - 1)``: the
dropped ``sum_l w_l`` is exactly zero for a closed loop, and leaving it out
keeps full relative precision when ``q_perp`` is tiny.
"""

from __future__ import annotations

import weakref

import numpy as np

from .errors import DegenerateSegment, ZeroWavevector
from .geometry import (
    SEGMENT_EPS,
    facet_area,
    facet_centroid,
    facet_normal,
    mesh_volume,
    polygon_area,
    segment_normal_2d,
)

EPS_PERP = 1e-9
Q_ZERO_REL = 1e-12
SINC_SERIES_CUTOFF = 1e-4
_SINCM1_SERIES_CUTOFF = 1e-2
_SPHERE_SERIES_CUTOFF = 0.05


def sinc(u):
    """sin(u)/u with sinc(0) = 1; Taylor series below |u| = 1e-4."""
    u = np.asarray(u, dtype=float)
    u2 = u * u
    series = 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0))
    small = np.abs(u) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    return np.where(small, series, np.sin(safe) / safe)


def _sinc_minus_one(u):
    u2 = u * u
    # -u^2/6 + u^4/120 - u^6/5040 + u^8/362880
    series = -u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)))
    small = np.abs(u) < _SINCM1_SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    return np.where(small, series, np.sin(safe) / safe - 1.0)


def _expi_minus_one(phi):
    s = np.sin(0.5 * phi)
    return -2.0 * s * s + 1j * np.sin(phi)


def _loop_kernel(phase, half_proj):
    """exp(i phase) * sinc(half_proj) - 1, without cancellation near zero."""
    return _expi_minus_one(phase) * sinc(half_proj) + _sinc_minus_one(half_proj)


def _as_points(q, dim):
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != dim:
        raise ValueError(f"expected wave vectors with {dim} components, got shape {q.shape}")
    return q, q.ndim == 1


# ---------------------------------------------------------------- 2-D

def ft_segment_2d(q, r0, r1):
    """Contribution of one directed perimeter segment to the polygon transform."""
    q = np.asarray(q, dtype=float)
    r0, r1 = np.asarray(r0, dtype=float), np.asarray(r1, dtype=float)
    qq = float(q @ q)
    if qq == 0.0:
        raise ZeroWavevector("segment term is undefined at q = 0")
    n = segment_normal_2d(r0, r1)
    d = r1 - r0
    length = float(np.hypot(*d))
    mid = 0.5 * (r0 + r1)
    weight = -float(q @ n) * length / qq
    return complex(weight * np.exp(1j * float(q @ mid)) * 1j * sinc(0.5 * float(q @ d)))


def ft_polygon_2d(q, poly):
    """Transform of the area enclosed by a counter-clockwise polygon.

    ``q`` may be a single 2-vector or an ``(n, 2)`` array.
    """
    q, single = _as_points(q, 2)
    qs = np.atleast_2d(q)
    p0, p1 = poly.edges
    d = p1 - p0
    if np.any(np.hypot(d[:, 0], d[:, 1]) < SEGMENT_EPS):
        raise DegenerateSegment("polygon has a zero-length edge")
    mid = 0.5 * (p0 + p1)
    qq = np.einsum("ij,ij->i", qs, qs)
    zero = np.sqrt(qq) <= Q_ZERO_REL / poly.bbox_diagonal
    acc = np.zeros(len(qs), dtype=complex)
    for l in range(len(d)):
        # -(q . n_hat)|d| = qy dx - qx dy
        w = qs[:, 1] * d[l, 0] - qs[:, 0] * d[l, 1]
        acc = acc + 1j * w * _loop_kernel(np.einsum("ik,k->i", qs, mid[l]), 0.5 * np.einsum("ik,k->i", qs, d[l]))
    out = np.where(zero, polygon_area(poly), acc / np.where(zero, 1.0, qq))
    return complex(out[0]) if single else out


def _box_factor(qc, length):
    # integral of exp(i qc x) over [0, length]
    return length * np.exp(0.5j * qc * length) * sinc(0.5 * qc * length)


def ft_rectangle(q, a, b):
    """Closed-form transform of the rectangle [0, a] x [0, b]."""
    q, single = _as_points(q, 2)
    out = _box_factor(q[..., 0], a) * _box_factor(q[..., 1], b)
    return complex(out) if single else out


def ft_prism(q, a, b, c):
    """Closed-form transform of the box [0, a] x [0, b] x [0, c]."""
    q, single = _as_points(q, 3)
    out = _box_factor(q[..., 0], a) * _box_factor(q[..., 1], b) * _box_factor(q[..., 2], c)
    return complex(out) if single else out


def ft_sphere_analytic(qmag, radius):
    """Transform of a solid sphere of the given radius, 4 pi (sin x - x cos x) / q^3."""
    q = np.asarray(qmag, dtype=float)
    x = q * radius
    x2 = x * x
    # 3 (sin x - x cos x) / x^3 = sum_k (-1)^k 3 (2k+2) x^2k / (2k+3)!
    series = 1.0 + x2 * (-1 / 10 + x2 * (1 / 280 + x2 * (-1 / 15120 + x2 * (1 / 1330560 + x2 * (-1 / 172972800)))))
    small = x < _SPHERE_SERIES_CUTOFF
    xs = np.where(small, 1.0, x)
    direct = 3.0 * (np.sin(xs) - xs * np.cos(xs)) / xs**3
    vol = 4.0 * np.pi * radius**3 / 3.0
    out = vol * np.where(small, series, direct) + 0j
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------- 3-D

class _FacetGroup:
    """Facets sharing a vertex count, stacked for vectorized evaluation."""

    def __init__(self, mesh, indices):
        facets = [mesh.facets[i] for i in indices]
        self.indices = np.asarray(indices, dtype=int)
        self.points = mesh.vertices[np.array(facets)]  # (F, k, 3)
        self.normals = np.array([facet_normal(mesh, f) for f in facets])
        self.areas = np.array([facet_area(mesh, f) for f in facets])
        self.centroids = np.array([facet_centroid(mesh, f) for f in facets])
        self.offsets = np.einsum("ij,ij->i", self.normals, self.points[:, 0])
        nxt = np.roll(self.points, -1, axis=1)
        self.edges = nxt - self.points
        self.mids = 0.5 * (nxt + self.points)
        self.n_cross_d = np.cross(self.normals[:, None, :], self.edges)

    def terms(self, qs, qq, perp_tol=EPS_PERP):
        """Per-facet contributions, shape ``(len(qs), F)``; requires qq > 0."""
        qpar = np.einsum("ik,jk->ij", qs, self.normals)  # (nq, F)
        qperp = qs[:, None, :] - qpar[..., None] * self.normals[None]
        qperp2 = np.einsum("ijk,ijk->ij", qperp, qperp)
        flat = qperp2 <= (perp_tol * perp_tol) * qq[:, None]

        acc = np.zeros(qpar.shape, dtype=complex)
        for l in range(self.edges.shape[1]):
            w = np.einsum("ijk,jk->ij", qperp, self.n_cross_d[:, l])
            phase = np.einsum("ijk,jk->ij", qperp, self.mids[:, l])
            half = 0.5 * np.einsum("ijk,jk->ij", qperp, self.edges[:, l])
            acc = acc + 1j * w * _loop_kernel(phase, half)
        # q_perp -> 0: the in-plane integral tends to area * exp(i q_perp . centroid)
        flat_val = self.areas[None] * np.exp(1j * np.einsum("ijk,jk->ij", qperp, self.centroids))
        inplane = np.where(flat, flat_val, acc / np.where(flat, 1.0, qperp2))
        pref = (-1j * qpar / qq[:, None]) * np.exp(1j * qpar * self.offsets[None])
        return pref * inplane


class _FacetTable:
    def __init__(self, mesh):
        by_size = {}
        for i, f in enumerate(mesh.facets):
            by_size.setdefault(len(f), []).append(i)
        self.groups = [_FacetGroup(mesh, idx) for _, idx in sorted(by_size.items())]
        self.n_facets = len(mesh.facets)
        self.volume = mesh_volume(mesh)
        self.q_zero = Q_ZERO_REL / mesh.bbox_diagonal if mesh.bbox_diagonal > 0 else 0.0


_tables = weakref.WeakKeyDictionary()


def _facet_table(mesh):
    table = _tables.get(mesh)
    if table is None:
        mesh.require_watertight()
        table = _tables[mesh] = _FacetTable(mesh)
    return table


def ft_facet(q, mesh, facet, perp_tol=EPS_PERP):
    """Contribution of one planar facet to the enclosed-volume transform.

    ``perp_tol`` is the |q_perp|/|q| ratio below which the in-plane integral
    is replaced by its small-q_perp limit.
    """
    q = np.asarray(q, dtype=float)
    qq = float(q @ q)
    scale = mesh.bbox_diagonal
    if qq == 0.0 or np.sqrt(qq) <= (Q_ZERO_REL / scale if scale else 0.0):
        raise ZeroWavevector("facet term is undefined at q = 0")
    sub = type(mesh)(mesh.vertices, [facet])
    group = _FacetGroup(sub, [0])
    return complex(group.terms(q[None], np.array([qq]), perp_tol)[0, 0])


def ft_mesh(q, mesh):
    """Transform of the volume enclosed by a closed, outward-wound mesh.

    ``q`` may be a single 3-vector or an ``(n, 3)`` array. Facets are
    accumulated in index order and edges in winding order, so results are
    reproducible bit for bit.
    """
    q, single = _as_points(q, 3)
    qs = np.atleast_2d(q)
    table = _facet_table(mesh)
    qq = np.einsum("ij,ij->i", qs, qs)
    zero = np.sqrt(qq) <= table.q_zero
    out = np.full(len(qs), table.volume, dtype=complex)
    live = ~zero
    if np.any(live) and table.n_facets:
        ql, qql = qs[live], qq[live]
        contrib = np.empty((len(ql), table.n_facets), dtype=complex)
        for g in table.groups:
            contrib[:, g.indices] = g.terms(ql, qql)
        # cumsum is a strict left-to-right accumulation
        out[live] = np.cumsum(contrib, axis=1)[:, -1]
    return complex(out[0]) if single else out


__all__ = [
    "EPS_PERP",
    "sinc",
    "ft_segment_2d",
    "ft_polygon_2d",
    "ft_rectangle",
    "ft_prism",
    "ft_sphere_analytic",
    "ft_facet",
    "ft_mesh",
]
