import pytest

import proms


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # one tiny run so numba compilation cost lands here, not in a timed test
    f = proms.Formula.from_signed(2, [(1, 2), (-1, 2), (1, -2)])
    params = proms.default_params(f, seed=0, max_steps=64)
    proms.solve(f, params, stop_at=-1)
