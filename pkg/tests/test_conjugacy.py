from __future__ import annotations

import pytest
from conftest import el

from weylrack.conjugacy import (
    ClassLabel,
    are_conjugate,
    canonical_element,
    class_label,
    enumerate_class,
    orbit_oracle,
    representatives,
    signed_cycle_types,
)
from weylrack.core import GroupSpec, SignedElement, group_elements, member, sign_cycle_type

SMALL = [GroupSpec(f, n) for f in "BD" for n in range(1, 5) if (f, n) != ("D", 1)]


def _partition(spec):
    """Classes found by repeated orbit search, independent of labels."""
    left = set(group_elements(spec))
    parts = []
    while left:
        g = min(left, key=str)
        orb = orbit_oracle(spec, g)
        parts.append(orb)
        left -= orb
    return parts


def test_enumerate_examples():
    b2 = GroupSpec("B", 2)
    cls = enumerate_class(b2, el("00:(1 2)"))
    assert set(cls.elements) == {el("00:(1 2)"), el("11:(1 2)")}
    assert enumerate_class(b2, SignedElement.identity(2)).size == 1
    assert enumerate_class(GroupSpec("D", 3), SignedElement.identity(3)).size == 1
    assert enumerate_class(GroupSpec("B", 3), el("000:(1 2)")).size == 6


def test_are_conjugate_examples():
    b2 = GroupSpec("B", 2)
    g = el("10:(1 2)")
    assert are_conjugate(b2, g, g)
    assert are_conjugate(b2, el("00:(1 2)"), el("11:(1 2)"))
    assert not are_conjugate(b2, g, el("00:(1 2)"))
    assert orbit_oracle(b2, g) == {el("10:(1 2)"), el("01:(1 2)")}


@pytest.mark.parametrize("spec,count", [
    (GroupSpec("B", 1), 2), (GroupSpec("B", 2), 5), (GroupSpec("B", 3), 10),
    (GroupSpec("B", 4), 20), (GroupSpec("D", 2), 4), (GroupSpec("D", 3), 5), (GroupSpec("D", 4), 13),
])
def test_class_counts_match_orbit_partition(spec, count):
    reps = representatives(spec)
    assert len(reps) == count == len(_partition(spec))


@pytest.mark.parametrize("spec", SMALL)
def test_classes_partition_group(spec):
    reps = representatives(spec)
    seen = set()
    for label, rep in reps:
        cls = enumerate_class(spec, rep)
        assert cls.label == label == class_label(spec, rep)
        assert cls.representative == rep
        assert not seen & set(cls.elements)
        seen |= set(cls.elements)
        if spec.family == "B":
            assert {sign_cycle_type(x) for x in cls.elements} == {label.type}
    assert len(seen) == spec.order


@pytest.mark.parametrize("spec", [GroupSpec("B", 4), GroupSpec("D", 4)])
def test_are_conjugate_matches_orbits_exhaustively(spec):
    parts = _partition(spec)
    where = {g: k for k, part in enumerate(parts) for g in part}
    els = list(where)
    for g in els:
        for h in els:
            assert are_conjugate(spec, g, h) == (where[g] == where[h])


def test_conjugators_map_representative():
    from weylrack.core import conjugate
    spec = GroupSpec("D", 4)
    for _, rep in representatives(spec):
        cls = enumerate_class(spec, rep)
        for x, g in zip(cls.elements, cls.conjugators):
            assert member(spec, g)
            assert conjugate(g, rep) == x


def test_split_classes_in_d4():
    spec = GroupSpec("D", 4)
    splits = [lab for lab, _ in representatives(spec) if lab.split != "none"]
    # (4) and (2,2) with all cycle parities 0 split into plus/minus halves
    assert len(splits) == 4
    plus = enumerate_class(spec, el("0000:(1 2 3 4)"))
    minus_rep = [g for lab, g in representatives(spec)
                 if lab.split == "minus" and lab.type.cycle_type == (4,)][0]
    assert not are_conjugate(spec, plus.representative, minus_rep)
    b_class = enumerate_class(GroupSpec("B", 4), el("0000:(1 2 3 4)"))
    assert b_class.size == plus.size + enumerate_class(spec, minus_rep).size


def test_canonical_elements_have_their_type():
    for n in range(1, 6):
        for t in signed_cycle_types(n):
            assert sign_cycle_type(canonical_element(t)) == t


def test_label_json():
    lab = class_label(GroupSpec("B", 2), el("10:(1 2)"))
    assert isinstance(lab, ClassLabel)
    assert lab.to_json() == {"type": [[2, 1]], "split": "none"}


def test_foreign_element_rejected():
    with pytest.raises(ValueError):
        enumerate_class(GroupSpec("D", 3), el("100:()"))
