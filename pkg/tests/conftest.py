import random

import pytest

from knapvote import Instance


def make_instance(utilities, costs=None, budget=0, names=None) -> Instance:
    utilities = tuple(tuple(row) for row in utilities)
    m = len(utilities[0])
    if costs is None:
        costs = (1,) * m
    if names is None:
        names = tuple(f"a{j}" for j in range(m))
    return Instance(
        item_names=tuple(names),
        costs=tuple(costs),
        utilities=utilities,
        budget=budget,
    )


def random_instance(
    rng: random.Random,
    max_voters=4,
    max_items=10,
    max_utility=5,
    max_cost=5,
    max_budget=15,
) -> Instance:
    n = rng.randint(1, max_voters)
    m = rng.randint(1, max_items)
    return make_instance(
        [[rng.randint(0, max_utility) for _ in range(m)] for _ in range(n)],
        costs=[rng.randint(1, max_cost) for _ in range(m)],
        budget=rng.randint(0, max_budget),
    )


def random_single_peaked(rng, max_voters=5, max_items=8, max_utility=5):
    """Instance unimodal along a hidden random item order; returns both."""
    n = rng.randint(1, max_voters)
    m = rng.randint(1, max_items)
    order = list(range(m))
    rng.shuffle(order)
    utilities = []
    for _ in range(n):
        along = [0] * m
        peak = rng.randrange(m)
        along[peak] = rng.randint(0, max_utility)
        for p in range(peak - 1, -1, -1):
            along[p] = max(0, along[p + 1] - rng.randint(0, 2))
        for p in range(peak + 1, m):
            along[p] = max(0, along[p - 1] - rng.randint(0, 2))
        row = [0] * m
        for p, j in enumerate(order):
            row[j] = along[p]
        utilities.append(row)
    inst = make_instance(
        utilities,
        costs=[rng.randint(1, 5) for _ in range(m)],
        budget=rng.randint(0, 12),
    )
    return inst, tuple(order)


def random_single_crossing(rng, max_voters=5, max_items=8):
    """Voters are points on a line, items are affine functions of the point:
    utility differences between any two items change sign at most once, so a
    crossing order always exists."""
    n = rng.randint(1, max_voters)
    m = rng.randint(1, max_items)
    slopes = [rng.randint(0, 2) for _ in range(m)]
    intercepts = [rng.randint(0, 4) for _ in range(m)]
    spots = [rng.randint(0, 3) for _ in range(n)]
    return make_instance(
        [[slopes[j] * t + intercepts[j] for j in range(m)] for t in spots],
        costs=[rng.randint(1, 5) for _ in range(m)],
        budget=rng.randint(0, 12),
    )


# Benchmark profile used across the suite: six item groups of sizes
# 6/3/2/1/1/1, six voter blocks of sizes 300/200/100/1/1/1, block g valuing
# exactly the items of group g at 1. Item names carry the group so selections
# can be checked per group.
GROUP_SIZES = (6, 3, 2, 1, 1, 1)
VOTER_BLOCKS = (300, 200, 100, 1, 1, 1)


def grouped_instance(group_costs=(1, 1, 1, 1, 1, 1), budget=6) -> Instance:
    names = []
    costs = []
    group_of = []
    for g, size in enumerate(GROUP_SIZES):
        for t in range(size):
            names.append(f"A{g + 1}_{t}")
            costs.append(group_costs[g])
            group_of.append(g)
    utilities = []
    for g, block in enumerate(VOTER_BLOCKS):
        row = tuple(1 if group_of[j] == g else 0 for j in range(len(names)))
        utilities.extend([row] * block)
    return Instance(
        item_names=tuple(names),
        costs=tuple(costs),
        utilities=tuple(utilities),
        budget=budget,
    )


def group_counts(instance: Instance, selected) -> tuple[int, ...]:
    counts = [0] * len(GROUP_SIZES)
    for j in selected:
        counts[int(instance.item_names[j][1]) - 1] += 1
    return tuple(counts)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
