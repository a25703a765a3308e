from hypothesis import given, settings, strategies as st

from sumradii.generate import random_metric_instance
from sumradii.kcenter import farthest_first
from sumradii.oracle import opt_kcenter


def test_line5_two_centers(line5):
    res = farthest_first(line5, line5.points(), 2)
    assert res.centers == (0, 4)
    assert res.radius == 2


def test_budget_covers_everything(line5):
    res = farthest_first(line5, {1, 3, 4}, 3)
    assert res.radius == 0
    assert set(res.centers) == {1, 3, 4}


def test_singleton(line5):
    res = farthest_first(line5, {2}, 1)
    assert res.centers == (2,)
    assert res.radius == 0


def test_radius_monotone_in_k(line5):
    radii = [farthest_first(line5, line5.points(), k).radius
             for k in range(1, 6)]
    assert radii == sorted(radii, reverse=True)
    assert radii[-1] == 0


def test_deterministic(line5):
    a = farthest_first(line5, line5.points(), 2)
    b = farthest_first(line5, line5.points(), 2)
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 10), st.integers(1, 4))
def test_two_approximation(seed, n, k):
    inst = random_metric_instance(n, k, f"kc:{seed}")
    ff = farthest_first(inst, inst.points(), k)
    opt, _ = opt_kcenter(inst, k)
    assert opt <= ff.radius <= 2 * opt
    # every point is within the claimed radius of some chosen center
    for p in inst.points():
        assert min(inst.d(p, c) for c in ff.centers) <= ff.radius
