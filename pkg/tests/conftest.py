import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FROZEN = Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text())


def algebra_terms(terms) -> dict:
    """Oracle ``[[exps], k, "p/q"]`` list -> ``{(mono, k): Fraction}``."""
    return {(tuple(e), k): Fraction(c) for e, k, c in terms}


def poly_terms(terms) -> dict:
    """Oracle ``[i, j, k, "p/q"]`` list -> ``{((i, j), k): Fraction}``."""
    return {((i, j), k): Fraction(c) for i, j, k, c in terms}
