"""Exact Fourier transforms of constant density over polygons and polyhedra."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    Polygon2D,
    SurfaceMesh,
    ValidationReport,
    facet_area,
    facet_normal,
    mesh_volume,
    polygon_area,
    segment_normal_2d,
    validate_mesh,
)
from .ft_core import (  # noqa: E402
    ft_facet,
    ft_mesh,
    ft_polygon_2d,
    ft_prism,
    ft_rectangle,
    ft_segment_2d,
    ft_sphere_analytic,
)
from .mesh_io import (  # noqa: E402
    GeneratorSpec,
    generate,
    parse_surfacemesh,
    two_spheres,
    write_field_csv,
    write_surfacemesh,
)
from .voxel_ref import VoxelGrid, voxel_ft, voxelize  # noqa: E402
from .qfield import Axis, FTField, QGrid, compare_fields, evaluate_field  # noqa: E402
