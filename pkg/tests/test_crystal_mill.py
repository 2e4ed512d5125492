import itertools
import random

import pytest

from crystalforge.tensor_core import (
    IntTensor,
    add,
    is_affine,
    is_hollow,
    project,
    scale,
    support,
    total,
)
from crystalforge.crystal_mill import (
    BadDimension,
    CoordinateClash,
    NotACrystal,
    NotCubical,
    crystalise,
    is_crystal,
    mine_hollow_crystal,
    mine_hollow_shadowed_crystal,
    pad,
    quartz,
    shadow,
)
from crystalforge.shadow_realiser import increasing_tuples


def dense(shape, rows):
    """Row-major literal -> tensor (for readable fixtures)."""
    entries = {}
    flat = list(rows)
    for idx, v in zip(itertools.product(*(range(1, w + 1) for w in shape)), flat):
        if v:
            entries[idx] = v
    return IntTensor(shape, entries)


# -- is_crystal / shadow ----------------------------------------------------


def test_every_cubical_tensor_is_a_1_crystal_iff_margins_agree():
    t = IntTensor((2, 2), {(1, 1): 1, (2, 2): 1})
    assert is_crystal(t, 1).is_crystal  # both margins are (1,1)
    u = IntTensor((2, 2), {(1, 2): 1})
    rep = is_crystal(u, 1)
    assert not rep.is_crystal
    assert rep.failing_pair == ((1,), (2,))


def test_is_crystal_k_equals_q_trivial():
    t = IntTensor((2, 2), {(1, 2): 3})
    rep = is_crystal(t, 2)
    assert rep.is_crystal and rep.shadow == t


def test_is_crystal_rejects_non_cubical():
    with pytest.raises(NotCubical):
        is_crystal(IntTensor((2, 3), {}), 1)


def test_shadow_raises_on_non_crystal():
    with pytest.raises(NotACrystal):
        shadow(IntTensor((2, 2), {(1, 2): 1}), 1)


# -- crystalise -------------------------------------------------------------


def test_crystalise_dimensions_and_shadows():
    s = IntTensor((3,), {(2,): 1})  # every 1-d tensor is a 0-crystal
    c = crystalise(s, 4)
    assert c.shape == (3, 3, 3, 3)
    rep = is_crystal(c, 1)
    assert rep.is_crystal and rep.shadow == s


def test_crystalise_requires_crystal_input():
    # margins (2,0) vs (1,1) disagree, so this is not a 1-crystal
    bad = IntTensor((2, 2), {(1, 1): 2, (1, 2): 0, (2, 1): -1, (2, 2): 1})
    with pytest.raises(NotACrystal):
        crystalise(bad, 3)


def test_crystalise_q_bounds():
    s = IntTensor((2, 2), {(1, 2): 1, (2, 1): 1, (1, 1): -1})
    with pytest.raises(BadDimension):
        crystalise(s, 1)


# -- quartz -----------------------------------------------------------------


def test_quartz_2d_explicit():
    q = quartz(3, (1, 2), (3, 3))
    assert q.entries == {(1, 2): 1, (3, 2): -1, (1, 3): -1, (3, 3): 1}


def test_quartz_coordinate_clash():
    with pytest.raises(CoordinateClash):
        quartz(3, (1, 2), (1, 3))


def quartz_laws_hold(n, a, b):
    k = len(a)
    g = quartz(n, a, b)
    # (i) total is zero
    assert total(g) == 0
    # (ii) every single-mode margin vanishes, hence all projections onto
    #      fewer modes do too
    for p in range(k):
        sel = tuple(m + 1 for m in range(k) if m != p)
        assert project(g, sel).entries == {}
    # (iii) support is exactly the 2^k box vertices
    assert len(support(g)) == 2 ** k
    # (iv) values are +-1 with the parity sign
    for z in itertools.product((0, 1), repeat=k):
        idx = tuple(b[i] if z[i] else a[i] for i in range(k))
        assert g[idx] == (-1) ** sum(z)
    # (v) swapping a and b scales by (-1)^k
    assert quartz(n, b, a) == scale(g, (-1) ** k)


def test_quartz_laws_small():
    quartz_laws_hold(4, (1, 2, 3), (2, 3, 4))
    quartz_laws_hold(2, (1,), (2,))
    quartz_laws_hold(5, (5, 1), (1, 5))


def test_quartz_disjoint_supports_cancel_ties():
    # two quartzes on disjoint boxes have disjoint supports
    g1 = quartz(6, (1, 2), (4, 5))
    g2 = quartz(6, (2, 3), (5, 6))
    assert not (support(g1) & support(g2))
    s = add(g1, g2)
    assert total(s) == 0


# -- pad --------------------------------------------------------------------


def test_pad_keeps_entries():
    t = IntTensor((2, 2), {(1, 2): 3})
    p = pad(t, 2)
    assert p.shape == (4, 4) and p.entries == t.entries
    assert pad(t, 0) == t
    with pytest.raises(BadDimension):
        pad(t, -1)


# -- the miner --------------------------------------------------------------


def test_mine_base_case():
    c = mine_hollow_crystal(1)
    assert c.shape == (1,) and c.entries == {(1,): 1}


def test_mine_k2_matches_known_matrix():
    # width 3 matrix, margins both (1,0,0), entries sum to 1, no diagonal
    u = mine_hollow_crystal(2)
    expected = dense((3, 3), [0, 0, 1, 1, 0, -1, 0, 0, 0])
    assert u == expected


def test_mine_invariants():
    for k in (1, 2, 3, 4):
        c = mine_hollow_crystal(k)
        n = (k * k + k) // 2
        assert c.shape == (n,) * k
        assert is_affine(c)
        rep = is_crystal(c, k - 1)
        assert rep.is_crystal
        assert is_hollow(rep.shadow)


def test_mine_rejects_bad_k():
    with pytest.raises(BadDimension):
        mine_hollow_crystal(0)


def test_shadowed_miner():
    c = mine_hollow_shadowed_crystal(2, 4)
    assert c.shape == (3, 3, 3, 3)
    rep = is_crystal(c, 2)
    assert rep.is_crystal and is_hollow(rep.shadow) and is_affine(c)
    assert rep.shadow == mine_hollow_shadowed_crystal(2, 2)
    with pytest.raises(BadDimension):
        mine_hollow_shadowed_crystal(3, 2)


def test_width3_shadow_is_minimal_support():
    # the k=2 miner output has support 3; width 3 forces at least 3 cells
    # for a hollow affine tensor with vanishing-margin structure
    u = mine_hollow_crystal(2)
    assert len(support(u)) == 3
