import numpy as np
import pytest


def approx(expected, rel=1e-12):
    """Relative-only comparison; pytest.approx's default abs=1e-12 swamps GeV-scale values."""
    return pytest.approx(expected, rel=rel, abs=0)


def rel_err(actual, expected):
    return abs(actual - expected) / abs(expected)


def ulps(actual, expected):
    return abs(actual - expected) / np.spacing(abs(expected))
