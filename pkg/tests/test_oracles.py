"""The frozen oracle file must match a fresh sympy computation."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "oracles"))

import build_oracles  # noqa: E402


def test_frozen_values_are_current(frozen):
    fresh = json.loads(json.dumps(build_oracles.build(), sort_keys=True))
    assert fresh == frozen
