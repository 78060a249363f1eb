from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipolar import cfk
from bipolar.cfk import (
    ConnectedSum,
    FilteredComplex,
    Generator,
    VSequence,
    convolve,
    default_depth,
    mirror,
    model_D_k,
    staircase,
    tensor,
    tower_bottom_plus,
    trefoil,
    unknot,
    v_sequence,
    v_value,
)

STEP_VECTORS = [[1, 1], [1, 2, 2, 1], [2, 2], [1, 1, 1, 1], [3, 3], [1, 3, 3, 1]]


def symmetric_steps():
    half = st.lists(st.integers(1, 3), min_size=1, max_size=3)
    return half.map(lambda h: h + h[::-1] if len(h) % 2 == 0 else h[:-1] + [h[-1], h[-1]] + h[:-1][::-1])


def test_unknot_and_trefoil_shapes():
    assert len(staircase([])) == 1
    t = staircase([1, 1])
    assert len(t) == 3
    assert len(t.differential) == 2
    assert t.homology_rank == 1
    assert [(g.i, g.j, g.maslov) for g in t.generators] == [(0, 1, 0), (1, 1, 1), (1, 0, 0)]


def test_staircase_rejects_asymmetric():
    with pytest.raises(ValueError):
        staircase([1, 2])
    with pytest.raises(ValueError):
        staircase([1])


def test_constructor_checks():
    with pytest.raises(ValueError):  # arrow raises a filtration
        FilteredComplex((Generator(0, 0, 1), Generator(1, 0, 0)), ((0, 1),))
    with pytest.raises(ValueError):  # Maslov drop of 2
        FilteredComplex((Generator(1, 1, 2), Generator(0, 0, 0)), ((0, 1),))
    with pytest.raises(ValueError):  # d^2 != 0
        FilteredComplex(
            (Generator(2, 2, 2), Generator(1, 1, 1), Generator(0, 0, 0)), ((0, 1), (1, 2))
        )


@pytest.mark.parametrize("steps", STEP_VECTORS)
def test_staircases_are_knot_like(steps):
    c = staircase(steps)
    assert c.homology_rank == 1
    assert all(c.boundary(c.boundary(1 << x)) == 0 for x in range(len(c)))
    v_sequence(c)  # normalization check passes


def test_tensor_counts_and_identity():
    t = trefoil()
    assert len(tensor(t, t)) == 9
    for c in (t, staircase([1, 2, 2, 1])):
        assert len(tensor(unknot(), c)) == len(c)
        assert v_sequence(tensor(unknot(), c)) == v_sequence(c)


@pytest.mark.parametrize("a, b", [([1, 1], [1, 2, 2, 1]), ([2, 2], [1, 1]), ([1, 1, 1, 1], [1, 1])])
def test_tensor_order_independent(a, b):
    x, y = staircase(a), staircase(b)
    assert v_sequence(tensor(x, y)) == v_sequence(tensor(y, x))


def test_known_v_sequences():
    assert v_sequence(unknot()) == VSequence((0,))
    assert v_sequence(trefoil()) == VSequence((1, 0))
    assert v_sequence(mirror(trefoil())) == VSequence((0,))
    # T(3,4): semigroup <3,4>, gaps {1,2,5}
    assert v_sequence(staircase([1, 2, 2, 1])) == VSequence((1, 1, 1, 0))


def brute_v0_by_cycles(c, s=0):
    """Enumerate every chain in each grading slice of the region; return V_s."""
    gens = c.generators
    best = None
    par = c.tower_parity
    for r in range(max(g.maslov for g in gens) + 2, min(g.maslov for g in gens) - 2 * len(gens) - 10, -1):
        if r % 2 != par:
            continue
        slice_ = [x for x, g in enumerate(gens) if g.maslov % 2 == par]
        region = [x for x in slice_ if (gens[x].maslov - r) // 2 >= max(gens[x].i, gens[x].j - s)]
        others = [x for x, g in enumerate(gens) if g.maslov % 2 != par]
        boundaries = set()
        for mask in range(1 << len(others)):
            chain = sum(1 << others[t] for t in range(len(others)) if mask >> t & 1)
            boundaries.add(c.boundary(chain))
        for mask in range(1, 1 << len(region)):
            chain = sum(1 << region[t] for t in range(len(region)) if mask >> t & 1)
            if c.boundary(chain) == 0 and chain not in boundaries:
                best = r
                break
        if best is not None:
            return -best // 2
    raise AssertionError


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("s", [0, 1, 2])
def test_v_value_against_exhaustive_chains(k, s):
    c = model_D_k(k).complex()
    assert v_value(c, s) == brute_v0_by_cycles(c, s)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_v0_of_trefoil_sums(k):
    c = model_D_k(k).complex()
    assert v_sequence(c).V(0) == ceil(k / 2)
    depth = default_depth(c)
    assert tower_bottom_plus(c, 0, depth) == -2 * ceil(k / 2)
    assert tower_bottom_plus(c, 0, depth + 2) == -2 * ceil(k / 2)


@pytest.mark.parametrize("steps", STEP_VECTORS[:4])
def test_plus_oracle_agrees_for_all_s(steps):
    c = staircase(steps)
    for s in range(-4, 5):
        assert tower_bottom_plus(c, s) == -2 * v_value(c, s)


def test_plus_oracle_rejects_tiny_window():
    with pytest.raises(ValueError):
        tower_bottom_plus(tensor(trefoil(), trefoil()), 0, depth=0)


@pytest.mark.parametrize("steps", STEP_VECTORS)
def test_negative_index_symmetry(steps):
    c = staircase(steps)
    seq = v_sequence(c)
    for s in range(0, 6):
        assert v_value(c, -s) == seq.V(s) + s == seq.V(-s)
        assert seq.H(s) - seq.V(s) == s


@pytest.mark.parametrize("steps", [[1, 1], [2, 2], [1, 1, 1, 1], [1, 2, 2, 1]])
def test_sum_with_mirror_has_v0_zero(steps):
    c = staircase(steps)
    assert v_sequence(tensor(c, mirror(c))).V(0) == 0


def test_model_D_k():
    assert model_D_k(1).complex() == trefoil()
    assert len(model_D_k(2).complex()) == 9
    assert model_D_k(2).v_sequence().V(0) == 1
    with pytest.raises(ValueError):
        model_D_k(0)
    custom = staircase([2, 2])
    assert model_D_k(2, custom).factors == (custom, custom)


@pytest.mark.parametrize(
    "factors",
    [
        [[1, 1]] * 5,
        [[1, 1]] * 6,
        [[1, 2, 2, 1], [1, 1]],
        [[1, 2, 2, 1], [1, 2, 2, 1]],
        [[2, 2], [1, 1], [1, 1, 1, 1]],
        [[3, 3], [1, 2, 2, 1], [1, 1]],
    ],
)
def test_convolution_matches_exact(factors):
    cs = ConnectedSum([staircase(f) for f in factors])
    assert cs.v_sequence("convolution") == cs.v_sequence("exact")


def test_convolution_needs_staircases():
    cs = ConnectedSum([mirror(trefoil())] * 9)
    with pytest.raises(ValueError):
        cs.v_sequence()


def test_vsequence_invariants():
    with pytest.raises(ValueError):
        VSequence((2, 0))
    with pytest.raises(ValueError):
        VSequence((1,))
    v = VSequence((2, 1, 1, 0))
    assert [v.V(s) for s in range(-2, 6)] == [3, 2, 2, 1, 1, 0, 0, 0]
    assert convolve(VSequence.zero(), v) == v


@settings(max_examples=25, deadline=None)
@given(symmetric_steps(), symmetric_steps())
def test_random_tensor_invariants(a, b):
    x, y = staircase(a), staircase(b)
    c = tensor(x, y)
    assert all(c.boundary(c.boundary(1 << g)) == 0 for g in range(len(c)))
    seq = v_sequence(c)
    assert seq == v_sequence(tensor(y, x))
    assert seq == convolve(v_sequence(x), v_sequence(y))


def test_json_round_trip(tmp_path):
    for c in (trefoil(), tensor(trefoil(), mirror(staircase([1, 2, 2, 1])))):
        text = c.to_json()
        back = FilteredComplex.from_json(text)
        assert back == c
        assert back.to_json() == text
    assert FilteredComplex.from_json(trefoil().to_json()).staircase_steps == (1, 1)


def test_rejects_non_knot_like():
    two = FilteredComplex((Generator(0, 0, 0), Generator(0, 0, 0)), ())
    with pytest.raises(ValueError):
        v_sequence(two)
    shifted = FilteredComplex((Generator(0, 0, 2),), ())
    with pytest.raises(ValueError):
        v_sequence(shifted)


def test_exact_limit_guard():
    assert ConnectedSum([trefoil()] * 9).num_generators > cfk.EXACT_LIMIT
    with pytest.raises(ValueError):
        ConnectedSum([trefoil()] * 9).complex()
