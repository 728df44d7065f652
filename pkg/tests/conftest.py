import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sublevelstat import Disk, Sphere, Torus, triangulate


@pytest.fixture(scope="session")
def disk_mesh():
    return triangulate(Disk(10.0), 4)


@pytest.fixture(scope="session")
def sphere_mesh():
    return triangulate(Sphere(), 1)


@pytest.fixture(scope="session")
def torus_mesh():
    return triangulate(Torus(1.0, 1.0), 4)


@pytest.fixture(scope="session")
def all_meshes(disk_mesh, sphere_mesh, torus_mesh):
    return {"disk": disk_mesh, "sphere": sphere_mesh, "torus": torus_mesh}
