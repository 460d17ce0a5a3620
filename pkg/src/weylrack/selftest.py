"""Exhaustive invariant checks on the groups of degree at most 4.

Each check returns ``(passed, detail)``; ``run_selftest`` prints one line per
check and reports overall success.
"""
from __future__ import annotations

from itertools import product

from .conjugacy import are_conjugate, enumerate_class, orbit_oracle, representatives
from .core import (
    GroupSpec,
    SignedElement,
    commutes,
    compose,
    conjugate,
    conjugate_multiply,
    format_element,
    group_elements,
    inverse,
    parse_element,
)
from .linalg import sparse_rank
from .nichols import BraidedSpace, centralizer_characters, check_braid_equation, symmetrizer_columns, yd_data, yd_space
from .oracles import dense_symmetrizer, group_by_closure, rank_rational, sq_is_trivial_by_products
from .rack import FiniteRack, check_rack_axioms, sq
from .verify import commuting_sq_criterion, involution_sq_criterion

SPECS = [GroupSpec("B", n) for n in (1, 2, 3, 4)] + [GroupSpec("D", n) for n in (2, 3, 4)]


def check_group_orders():
    for spec in SPECS:
        if len(group_by_closure(spec)) != spec.order or len(set(group_elements(spec))) != spec.order:
            return False, str(spec)
    return True, f"{len(SPECS)} groups"


def check_conjugation_formula():
    els = list(group_elements(GroupSpec("B", 4)))
    e = SignedElement.identity(4)
    for g in els:
        gi = inverse(g)
        if compose(g, gi) != e or compose(gi, g) != e:
            return False, f"inverse of {format_element(g)}"
        for x in els:
            if conjugate(g, x) != conjugate_multiply(g, x):
                return False, f"{format_element(g)} on {format_element(x)}"
    return True, f"{len(els) ** 2} pairs"


def check_associativity():
    els = list(group_elements(GroupSpec("B", 3)))
    for x, y, z in product(els, repeat=3):
        if compose(compose(x, y), z) != compose(x, compose(y, z)):
            return False, "triple"
    return True, f"{len(els) ** 3} triples"


def check_round_trip():
    for g in group_elements(GroupSpec("B", 4)):
        if parse_element(format_element(g)) != g:
            return False, format_element(g)
    return True, "B4"


def check_conjugacy():
    for spec in (GroupSpec("B", 4), GroupSpec("D", 4), GroupSpec("D", 2)):
        seen = 0
        for _, rep in representatives(spec):
            cls = enumerate_class(spec, rep)
            if set(cls.elements) != orbit_oracle(spec, rep):
                return False, f"{spec} class of {format_element(rep)}"
            seen += cls.size
        if seen != spec.order:
            return False, f"{spec} classes do not partition the group"
    spec = GroupSpec("D", 3)
    els = list(group_elements(spec))
    for g in els:
        orbit = orbit_oracle(spec, g)
        if any(are_conjugate(spec, g, h) != (h in orbit) for h in els):
            return False, f"{spec} pair at {format_element(g)}"
    return True, "B4, D4, D2 classes; all D3 pairs"


def check_class_racks():
    count = 0
    for spec in SPECS:
        for _, rep in representatives(spec):
            rack = FiniteRack.from_elements(enumerate_class(spec, rep).elements)
            if not check_rack_axioms(rack).passed:
                return False, f"{spec} class of {format_element(rep)}"
            count += 1
    return True, f"{count} racks"


def check_sq_identity():
    els = list(group_elements(GroupSpec("B", 3)))
    for x, y in product(els, repeat=2):
        if (sq(x, y) == y) != sq_is_trivial_by_products(x, y):
            return False, f"{format_element(x)}, {format_element(y)}"
    return True, f"{len(els) ** 2} pairs"


def check_sq_criteria():
    els = list(group_elements(GroupSpec("B", 3)))
    n = 0
    for x, y in product(els, repeat=2):
        if x.perm * y.perm == y.perm * x.perm:
            n += 1
            if commuting_sq_criterion(x, y) != (sq(x, y) == y):
                return False, f"{format_element(x)}, {format_element(y)}"
    invol = [g for g in group_elements(GroupSpec("B", 4)) if (g.perm * g.perm).is_identity()]
    m = 0
    for x, y in product(invol, repeat=2):
        if x.perm * y.perm == y.perm * x.perm:
            m += 1
            if involution_sq_criterion(x, y) != commuting_sq_criterion(x, y):
                return False, f"{format_element(x)}, {format_element(y)}"
    return True, f"{n} commuting pairs, {m} involution pairs"


def check_yd_braiding():
    count = 0
    for spec in SPECS:
        for _, rep in representatives(spec):
            for chi in centralizer_characters(spec, rep):
                if not check_braid_equation(yd_space(yd_data(spec, rep, chi, check=False))):
                    return False, f"{spec} class of {format_element(rep)}"
                count += 1
    return True, f"{count} cocycles"


def check_symmetrizer_paths():
    els = [parse_element(t) for t in ("000:(1 2)", "000:(1 3)", "000:(2 3)")]
    rack = FiniteRack.from_elements(els)
    for qv in (1, -1):
        space = BraidedSpace.constant(rack, qv)
        for m in (2, 3, 4):
            main = sparse_rank(symmetrizer_columns(space, m))
            oracle = rank_rational(dense_symmetrizer(rack.table, space.cocycle.q, m))
            if main != oracle:
                return False, f"q={qv} m={m}: {main} vs {oracle}"
    return True, "3-point rack, q=+-1, m=2..4"


def check_commuting_helper():
    els = list(group_elements(GroupSpec("B", 2)))
    for x, y in product(els, repeat=2):
        if commutes(x, y) != (compose(x, y) == compose(y, x)):
            return False, "commutes"
    return True, "B2"


CHECKS = [
    ("group orders", check_group_orders),
    ("conjugation closed form and inverses", check_conjugation_formula),
    ("associativity", check_associativity),
    ("element grammar round trip", check_round_trip),
    ("conjugacy invariants vs orbits", check_conjugacy),
    ("class rack axioms", check_class_racks),
    ("sq fixed iff squares agree", check_sq_identity),
    ("commuting sq criteria", check_sq_criteria),
    ("braid equation for YD cocycles", check_yd_braiding),
    ("symmetrizer rank vs dense oracle", check_symmetrizer_paths),
    ("commutation helper", check_commuting_helper),
]


def run_selftest() -> tuple[list[str], bool]:
    lines = []
    ok = True
    for name, fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failed check, not an abort
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name} ({detail})")
    return lines, ok
