import json
import os

import pytest

from lodeg.conormal import VarietySpec

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


def load_spec(name: str) -> VarietySpec:
    with open(data_path(name)) as fh:
        doc = json.load(fh)
    return VarietySpec.define(
        doc["variables"],
        doc["polynomials"],
        assumed_irreducible=doc.get("assumed_irreducible", True),
    )


@pytest.fixture(scope="session")
def sphere() -> VarietySpec:
    return load_spec("sphere.json")


@pytest.fixture(scope="session")
def space_curve() -> VarietySpec:
    return load_spec("space_curve.json")


@pytest.fixture(scope="session")
def cubic_binomial() -> VarietySpec:
    return load_spec("cubic_binomial.json")


@pytest.fixture(scope="session")
def affine_cubic() -> VarietySpec:
    return load_spec("affine_cubic.json")


@pytest.fixture(scope="session")
def quadric_cone() -> VarietySpec:
    return load_spec("quadric_cone.json")
