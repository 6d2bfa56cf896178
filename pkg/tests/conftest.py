"""Pytest configuration and fixtures for testing the power-structure engine."""
import json
import logging
import random

import pytest

from powerstruct.rings import MOTIVIC, MotivicClass
from powerstruct.wreath import sample_action

# Disable logging during tests
logging.disable(logging.CRITICAL)

L = MotivicClass.lefschetz()


@pytest.fixture
def rng():
    """A seeded random generator so randomized checks are reproducible."""
    return random.Random(20240607)


@pytest.fixture
def lefschetz():
    """The class of the affine line."""
    return L


@pytest.fixture
def point():
    return MOTIVIC.one


@pytest.fixture(params=["trivial", "z2", "z3", "s3"])
def sample_group(request):
    """Each sample action together with its name."""
    return request.param, sample_action(request.param)


@pytest.fixture
def z2_action():
    """Z/2 swapping two points."""
    return sample_action("z2")


@pytest.fixture
def write_json(tmp_path):
    """Write an object to a JSON file under tmp_path and return the path as a string."""
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj), encoding="utf-8")
        return str(path)

    return _write
