from __future__ import annotations

import numpy as np
import pytest
from conftest import el

from weylrack.conjugacy import enumerate_class, representatives
from weylrack.core import GroupSpec, SignedElement, group_elements
from weylrack.nichols import (
    BraidedSpace,
    BudgetExceeded,
    Cocycle,
    braiding_matrix,
    centralizer,
    centralizer_characters,
    check_braid_equation,
    graded_dims,
    is_character,
    sign_character,
    symmetrizer,
    yd_cocycle,
    yd_data,
    yd_rack,
    yd_space,
)
from weylrack.oracles import dense_braiding, dense_symmetrizer, rank_rational
from weylrack.rack import FiniteRack, check_rack_axioms

SINGLETON = FiniteRack([[0]])
TRANSPOSITIONS = [el("000:(1 2)"), el("000:(1 3)"), el("000:(2 3)")]


def three_point(q=-1):
    return BraidedSpace.constant(FiniteRack.from_elements(TRANSPOSITIONS), q)


def test_singleton_braiding():
    assert braiding_matrix(BraidedSpace.constant(SINGLETON, 1)).tolist() == [[1]]
    assert braiding_matrix(BraidedSpace.constant(SINGLETON, -1)).tolist() == [[-1]]
    assert check_braid_equation(BraidedSpace.constant(SINGLETON, -1))


def test_three_point_braiding_is_signed_permutation():
    c = braiding_matrix(three_point())
    assert c.shape == (9, 9)
    assert (np.abs(c).sum(axis=0) == 1).all() and (np.abs(c).sum(axis=1) == 1).all()
    i3 = np.eye(3, dtype=np.int64)
    c12, c23 = np.kron(c, i3), np.kron(i3, c)
    assert (c12 @ c23 @ c12 == c23 @ c12 @ c23).all()
    assert check_braid_equation(three_point())
    assert (c == dense_braiding(three_point().rack.table, three_point().cocycle.q)).all()


def test_braid_check_detects_corruption():
    space = three_point()
    q = [row[:] for row in space.cocycle.q]
    q[0][1] = -q[0][1]
    bad = BraidedSpace(space.rack, Cocycle(q))
    assert not check_braid_equation(bad)


@pytest.mark.parametrize("spec", [GroupSpec("B", 3), GroupSpec("D", 4), GroupSpec("B", 4)])
def test_constant_cocycles_braid_on_class_racks(spec):
    for _, rep in representatives(spec):
        rack = FiniteRack.from_elements(enumerate_class(spec, rep).elements)
        for qv in (1, -1):
            assert check_braid_equation(BraidedSpace.constant(rack, qv))


def test_symmetrizer_singleton():
    assert symmetrizer(BraidedSpace.constant(SINGLETON, -1), 2).tolist() == [[0]]
    assert symmetrizer(BraidedSpace.constant(SINGLETON, 1), 2).tolist() == [[2]]


def test_symmetrizer_three_point_degree_two():
    space = three_point()
    s2 = symmetrizer(space, 2)
    oracle = dense_symmetrizer(space.rack.table, space.cocycle.q, 2)
    assert (s2 == oracle).all()
    # id + c^-1 for a signed permutation braiding
    assert (oracle == np.eye(9, dtype=np.int64) + braiding_matrix(space).T).all()
    assert rank_rational(oracle) == 4


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("qv", [1, -1])
def test_symmetrizer_matches_dense_oracle(m, qv):
    space = three_point(qv)
    assert (symmetrizer(space, m) == dense_symmetrizer(space.rack.table, space.cocycle.q, m)).all()


def test_singleton_graded_dims():
    assert graded_dims(BraidedSpace.constant(SINGLETON, -1), 3).dims == [1, 1, 0, 0]
    assert graded_dims(BraidedSpace.constant(SINGLETON, 1), 4).dims == [1, 1, 1, 1, 1]


def test_three_point_graded_dims():
    rep = graded_dims(three_point(), 5)
    assert rep.dims == [1, 3, 4, 3, 1, 0]
    assert sum(rep.dims) == 12
    for d in rep.degrees:
        assert d["rank"] + d["kernel"] == d["tensor_dim"]


def test_graded_dims_invariant_under_relabeling():
    space = three_point()
    for perm in ([1, 2, 0], [2, 0, 1], [0, 2, 1]):
        rack = space.rack.relabel(perm)
        assert graded_dims(BraidedSpace.constant(rack, -1), 4).dims == [1, 3, 4, 3, 1]


def test_yd_dims_invariant_under_relabeling():
    spec = GroupSpec("B", 3)
    chars = centralizer_characters(spec, el("000:(1 2)"))
    space = yd_space(yd_data(spec, el("000:(1 2)"), chars[1]))
    perm = [5, 3, 1, 0, 2, 4]
    inv = [perm.index(i) for i in range(6)]
    q = [[space.cocycle.q[inv[i]][inv[j]] for j in range(6)] for i in range(6)]
    moved = BraidedSpace(space.rack.relabel(perm), Cocycle(q))
    assert check_braid_equation(moved)
    assert graded_dims(moved, 3).dims == graded_dims(space, 3).dims


def test_budget_truncates():
    spec = GroupSpec("B", 4)
    rack = FiniteRack.from_elements(enumerate_class(spec, el("0000:(1 2)")).elements)
    assert rack.size == 12
    rep = graded_dims(BraidedSpace.constant(rack, -1), 8, max_rows=2000)
    assert rep.truncated and rep.reason
    assert len(rep.dims) == 4  # 12^3 rows fit, 12^4 do not
    with pytest.raises(BudgetExceeded):
        symmetrizer(BraidedSpace.constant(rack, -1), 2, max_rack=6)


def test_trivial_character_gives_constant_one():
    spec = GroupSpec("B", 3)
    data = yd_data(spec, el("000:(1 2)"))
    assert yd_cocycle(data).q == Cocycle.constant(6, 1).q
    assert check_rack_axioms(yd_rack(data)).passed


def test_sign_character_gives_constant_minus_one():
    spec = GroupSpec("B", 3)
    s = el("000:(1 2)")
    chi = sign_character(centralizer(spec, s))
    assert is_character(chi)
    data = yd_data(spec, s, chi)
    space = yd_space(data)
    assert check_braid_equation(space)
    # q(i, j) = -sgn(g_j) sgn(g_j'); rescaling basis vector j by sgn(g_j) is a
    # coboundary that turns it into the constant -1 cocycle
    eps = [-1 if sum(len(c) - 1 for c in g.perm.cycles()) % 2 else 1 for g in data.section]
    t = space.rack.table
    rescaled = [[space.cocycle.q[i][j] * eps[j] * eps[t[i][j]] for j in range(6)] for i in range(6)]
    assert rescaled == Cocycle.constant(6, -1).q
    assert graded_dims(space, 3).dims == graded_dims(BraidedSpace.constant(space.rack, -1), 3).dims
    # the zero-sign transpositions form the 3-point rack with the same constant cocycle
    zero = [i for i, t in enumerate(space.rack.labels) if t.sign.bits == 0]
    assert len(zero) == 3
    assert {space.rack.labels[i] for i in zero} == set(TRANSPOSITIONS)


def test_yd_numeration_and_section():
    spec = GroupSpec("D", 4)
    s = el("1100:(1 2)(3 4)")
    data = yd_data(spec, s)
    assert data.points[0] == s
    assert len(data.points) == enumerate_class(spec, s).size


@pytest.mark.parametrize("spec", [GroupSpec(f, n) for f in "BD" for n in range(2, 5)])
def test_yd_cocycles_braid(spec):
    for _, rep in representatives(spec):
        for chi in centralizer_characters(spec, rep):
            assert is_character(chi)
            assert check_braid_equation(yd_space(yd_data(spec, rep, chi, check=False)))


@pytest.mark.parametrize("spec", [GroupSpec(f, n) for f in "BD" for n in range(2, 5)])
def test_orbit_stabilizer(spec):
    for _, rep in representatives(spec):
        assert len(centralizer(spec, rep)) * enumerate_class(spec, rep).size == spec.order


def test_centralizer_of_identity_is_group():
    spec = GroupSpec("B", 3)
    assert set(centralizer(spec, SignedElement.identity(3))) == set(group_elements(spec))


def test_character_count_is_a_power_of_two():
    spec = GroupSpec("B", 3)
    chars = centralizer_characters(spec, el("000:(1 2)"))
    assert len(chars) & (len(chars) - 1) == 0
    assert all(v == 1 for v in chars[0].values())
    assert len({tuple(sorted((str(k), v) for k, v in c.items())) for c in chars}) == len(chars)


def test_bad_character_rejected():
    spec = GroupSpec("B", 3)
    s = el("000:(1 2)")
    chi = {g: 1 for g in centralizer(spec, s)}
    chi[s] = -1
    chi[SignedElement.identity(3)] = -1
    with pytest.raises(ValueError):
        yd_data(spec, s, chi)
