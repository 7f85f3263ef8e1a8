import numpy as np
import pytest

from avcsym.avc import validate_avc


def _two_outcome(w0):
    """2x2x2 tensor from the four P(y=0 | x, s) values, w0 indexed [x][s]."""
    w = np.empty((2, 2, 2))
    w[:, :, 0] = w0
    w[:, :, 1] = 1.0 - w[:, :, 0]
    return w


@pytest.fixture
def swap_symmetric_avc():
    # W(0|x,s) = W(0|s,x): identity U symmetrizes it exactly.
    return validate_avc(_two_outcome([[0.9, 0.4], [0.4, 0.2]]), 2, 2, 2)


@pytest.fixture
def x_independent_avc():
    # rows depend only on s, so any shared U mixes both sides identically
    return validate_avc(_two_outcome([[0.7, 0.3], [0.7, 0.3]]), 2, 2, 2)


@pytest.fixture
def s_independent_avc():
    # jammer has no influence; defect is |0.9-0.1| + |0.1-0.9| = 1.6 for every U
    return validate_avc(_two_outcome([[0.9, 0.9], [0.1, 0.1]]), 2, 2, 2)
