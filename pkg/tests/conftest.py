import pytest

import htgroups as hg

# the built-in families exercised across the suite
BUILTIN_FACTORIES = (
    ("heisenberg:1", lambda: hg.heisenberg(1)),
    ("heisenberg:2", lambda: hg.heisenberg(2)),
    ("heisenberg:3", lambda: hg.heisenberg(3)),
    ("quaternionic:1", lambda: hg.quaternionic(1)),
    ("quaternionic:2", lambda: hg.quaternionic(2)),
    ("octonionic", lambda: hg.octonionic()),
)


def truncated_quaternionic():
    """H-type but not Iwasawa: only the first two quaternionic U matrices."""
    return hg.custom(4, 2, hg.quaternionic(1).U[:2])


def random_points(alg, rng, count):
    """Standard-normal coordinate batches (x, t) for an algebra."""
    return rng.standard_normal((count, alg.m)), rng.standard_normal((count, alg.n))


@pytest.fixture(params=[name for name, _ in BUILTIN_FACTORIES])
def builtin_algebra(request):
    factory = dict(BUILTIN_FACTORIES)[request.param]
    return factory()
