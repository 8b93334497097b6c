"""Q-grid sampling, batch field evaluation and field comparison."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import FieldEvaluationError, FieldFormatError, GridMismatch, NonFiniteValue, PolyFTError
from .ft_core import ft_mesh, ft_prism, ft_sphere_analytic
from .voxel_ref import voxel_ft

# Work is split into fixed-size chunks independent of the worker count, so
# each point is evaluated in exactly the same array context every run.
CHUNK = 256


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("axis count must be >= 1")
        if self.count > 1 and not self.start <= self.stop:
            raise ValueError("axis start must not exceed stop")

    @classmethod
    def parse(cls, text):
        """``START:STOP:COUNT`` (inclusive ends) or a single value."""
        parts = text.split(":")
        if len(parts) == 1:
            return cls(float(parts[0]), float(parts[0]), 1)
        if len(parts) != 3:
            raise ValueError(f"axis spec {text!r} is not START:STOP:COUNT")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self):
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class QGrid:
    qx: Axis
    qy: Axis
    qz: Axis

    @property
    def shape(self):
        return (self.qx.count, self.qy.count, self.qz.count)

    def __len__(self):
        return self.qx.count * self.qy.count * self.qz.count

    def points(self):
        """All grid points, shape ``(n, 3)``, Qx varying fastest, then Qy, then Qz."""
        z, y, x = np.meshgrid(self.qz.values(), self.qy.values(), self.qx.values(), indexing="ij")
        return np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)

    @classmethod
    def from_points(cls, pts):
        """Recover the grid from an explicit Qx-fastest point list."""
        pts = np.asarray(pts, dtype=float)
        axes = []
        stride = 1
        for col in range(3):
            vals = pts[::stride, col]
            first = vals[0]
            # count = length of the run before this axis returns to its first value
            repeats = np.nonzero(vals[1:] == first)[0]
            n = int(repeats[0]) + 1 if len(repeats) else len(vals)
            if col == 2:
                n = len(vals)
            try:
                axes.append(Axis(float(vals[0]), float(vals[n - 1]), n))
            except ValueError as exc:
                raise FieldFormatError(str(exc)) from None
            stride *= n
        grid = cls(*axes)
        if len(grid) != len(pts) or not np.array_equal(grid.points(), pts):
            raise FieldFormatError("Q columns do not form an inclusive linear Qx-fastest grid")
        return grid


@dataclass(frozen=True, eq=False)
class FTField:
    grid: QGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (len(self.grid),):
            raise ValueError(f"expected {len(self.grid)} values, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def points(self):
        return self.grid.points()


def _backend(kind, subject):
    if kind == "mesh":
        return lambda qs: ft_mesh(qs, subject)
    if kind == "voxel":
        return lambda qs: voxel_ft(subject, qs)
    if kind == "sphere":
        return lambda qs: ft_sphere_analytic(np.linalg.norm(qs, axis=1), float(subject))
    if kind == "prism":
        a, b, c = subject
        return lambda qs: ft_prism(qs, a, b, c)
    raise ValueError(f"unknown backend {kind!r}")


def _run_chunk(fn, qs):
    try:
        vals = np.asarray(fn(qs), dtype=complex)
    except PolyFTError as exc:
        # find the first offending point
        for q in qs:
            try:
                fn(q[None])
            except PolyFTError as inner:
                raise FieldEvaluationError(q, inner) from inner
        raise FieldEvaluationError(qs[0], exc) from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        q = qs[np.argmax(bad)]
        raise FieldEvaluationError(q, NonFiniteValue("non-finite transform value"))
    return vals


def evaluate_field(backend, subject, grid, threads=None):
    """Evaluate ``backend`` ('mesh', 'voxel', 'sphere', 'prism') at every grid point.

    Output is bitwise independent of ``threads``.
    """
    fn = _backend(backend, subject)
    if backend == "mesh":
        fn(np.zeros((1, 3)))  # surface errors (open mesh) before fanning out
    pts = grid.points()
    chunks = [pts[i:i + CHUNK] for i in range(0, len(pts), CHUNK)]
    threads = threads or os.cpu_count() or 1
    out = np.empty(len(pts), dtype=complex)
    if threads == 1 or len(chunks) == 1:
        results = [_run_chunk(fn, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _run_chunk(fn, c), chunks))
    for i, vals in enumerate(results):
        out[i * CHUNK:i * CHUNK + len(vals)] = vals
    return FTField(grid, out)


@dataclass
class ErrorReport:
    max_abs: float
    mean_abs: float
    max_rel: float
    at_q: tuple

    def lines(self):
        from .mesh_io import format_number

        return [
            f"max_abs={format_number(self.max_abs)}",
            f"mean_abs={format_number(self.mean_abs)}",
            f"max_rel={format_number(self.max_rel)}",
            "at_q=" + ",".join(format_number(v) for v in self.at_q),
        ]


def compare_fields(a, b, rel_floor=1e-12):
    """Error of ``a`` against reference ``b`` on an identical grid.

    ``max_rel`` only considers points where ``|b| > rel_floor``; ``at_q`` is
    where the absolute difference peaks.
    """
    if a.grid != b.grid:
        raise GridMismatch(f"grids differ: {a.grid} vs {b.grid}")
    diff = np.abs(a.values - b.values)
    ref = np.abs(b.values)
    k = int(np.argmax(diff))
    mask = ref > rel_floor
    max_rel = float(np.max(diff[mask] / ref[mask])) if np.any(mask) else 0.0
    return ErrorReport(
        max_abs=float(diff[k]),
        mean_abs=float(diff.mean()),
        max_rel=max_rel,
        at_q=tuple(float(v) for v in a.points[k]),
    )
