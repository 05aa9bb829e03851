import sys
from pathlib import Path

import pytest

from mbfcount import layers, orbits

sys.path.insert(0, str(Path(__file__).parent))

_classes_cache: dict[int, list] = {}


def cached_classify(n: int):
    """Classification is the expensive prerequisite; share it per session."""
    if n not in _classes_cache:
        _classes_cache[n] = orbits.classify(layers.generate_layer(n))
    return _classes_cache[n]


@pytest.fixture(scope="session")
def classes():
    return cached_classify
