import numpy as np
import pytest

from girre import PlanarImage, generate_dataset, load_manifest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def rand_image(rng: np.random.Generator, height: int, width: int, channels: int = 1) -> PlanarImage:
    return PlanarImage(rng.uniform(0.0, 1.0, size=(channels, height, width)))


@pytest.fixture(scope="session")
def synthetic_manifest(tmp_path_factory):
    """One shared synthetic dataset for every harness/CLI test."""
    root = tmp_path_factory.mktemp("dataset") / "synthetic"
    return generate_dataset(root)


@pytest.fixture(scope="session")
def synthetic_dataset(synthetic_manifest):
    return load_manifest(synthetic_manifest)
