import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polyft.mesh_io import box_mesh, two_spheres  # noqa: E402


@pytest.fixture(scope="session")
def cube():
    return box_mesh(1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def fixture_mesh():
    return two_spheres()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_tetrahedron(rng, scale=1.0):
    """Well-shaped tetrahedron, vertices wound so every face normal points out."""
    while True:
        v = scale * rng.uniform(-1, 1, size=(4, 3))
        det = np.linalg.det(np.stack([v[1] - v[0], v[2] - v[0], v[3] - v[0]]))
        if abs(det) > 0.2 * scale**3:
            break
    if det < 0:
        v[[1, 2]] = v[[2, 1]]
    return v


TETRA_FACETS = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
