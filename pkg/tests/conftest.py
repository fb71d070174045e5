import sys
from pathlib import Path

import numpy as np
import pytest

# make the shared oracle helpers importable from any invocation directory
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session", autouse=True)
def warm_gauss_seidel():
    # trigger the jit compile once so timed tests measure the solver, not numba
    from adaptseg.solver import gauss_seidel

    gauss_seidel(np.zeros((2, 2)), np.zeros((2, 2)), 1e-2, 2)
