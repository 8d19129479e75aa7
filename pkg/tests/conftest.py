import functools
import itertools
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from eqehrhart import instances  # noqa: E402
from eqehrhart.group_action import AffineMap, close_group  # noqa: E402
from eqehrhart.polytope import RationalPolytope  # noqa: E402


@functools.lru_cache(maxsize=None)
def corpus_instance(name: str):
    for inst in instances.standard_corpus():
        if inst.name == name:
            return inst
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def corpus():
    return tuple(instances.standard_corpus())


# finite integer matrix groups of order at most 8, by dimension
_GENS = {
    1: [[[[-1]]]],
    2: [
        [[[0, -1], [1, 0]]],
        [[[0, 1], [1, 0]]],
        [[[-1, 0], [0, -1]]],
        [[[0, -1], [1, 0]], [[0, 1], [1, 0]]],
        [[[0, -1], [1, -1]]],
        [[[0, -1], [1, 1]]],
        [[[-1, 0], [0, 1]]],
    ],
    3: [
        [[[0, 0, 1], [1, 0, 0], [0, 1, 0]]],
        [[[0, 1, 0], [1, 0, 0], [0, 0, 1]]],
        [[[-1, 0, 0], [0, -1, 0], [0, 0, -1]]],
        [[[0, 1, 0], [1, 0, 0], [0, 0, -1]], [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]],
        [[[0, -1, 0], [1, 0, 0], [0, 0, 1]]],
    ],
}


def random_instance(rng: random.Random, max_dim: int = 3, name: str = "random"):
    """Orbit hull of a few random lattice points under a random small group, shifted by a random translation."""
    while True:
        d = rng.choice([x for x in (1, 2, 2, 2, 3, 3) if x <= max_dim])
        lins = rng.choice(_GENS[d])
        shift = [rng.randint(-2, 2) for _ in range(d)]
        gens = []
        for A in lins:
            # conjugate x -> A x by the translation x -> x + shift
            b = [shift[i] - sum(A[i][j] * shift[j] for j in range(d)) for i in range(d)]
            gens.append(AffineMap.from_parts(A, b))
        group = close_group(gens)
        if group.order > 8:
            continue
        seeds = [tuple(rng.randint(-2, 2) + shift[i] for i in range(d)) for _ in range(rng.randint(1, 2))]
        pts = {g(s) for g in group.elements for s in seeds}
        if len(pts) <= d:
            pts |= {tuple(x + shift[i] for i, x in enumerate(e)) for e in itertools.product([-1, 1], repeat=d)}
        P = RationalPolytope(sorted(pts))
        if P.dim != d or len(P.vertices) > 10:
            continue
        return instances.Instance(name, P, gens, group=group)


@functools.lru_cache(maxsize=None)
def random_instances(count: int = 20, seed: int = 20240613, max_dim: int = 3):
    rng = random.Random(seed)
    return tuple(random_instance(rng, max_dim, f"random_{i}") for i in range(count))


@pytest.fixture(scope="session")
def cube():
    return corpus_instance("klein_cube")
