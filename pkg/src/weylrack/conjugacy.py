"""Conjugacy classes of W(B_n) and W(D_n).

The breadth-first orbit under conjugation by the group generators is the
ground truth.  ``are_conjugate`` answers from the signed cycle type where that
is known to be complete and defers to the orbit otherwise (the split classes
of the D family).
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .core import (
    GroupSpec,
    SignedCycleType,
    SignedElement,
    _el,
    conjugate,
    format_element,
    generators,
    member,
    sign_cycle_type,
)

# class enumeration is breadth-first over explicit elements; keep it desk scale
MAX_CLASS_DEGREE = 10


@dataclass(frozen=True)
class ClassLabel:
    type: SignedCycleType
    split: str = "none"  # "none" | "plus" | "minus"

    def __str__(self) -> str:
        return str(self.type) if self.split == "none" else f"{self.type}{self.split}"

    def to_json(self) -> dict:
        return {"type": self.type.as_list(), "split": self.split}


@dataclass
class ConjClass:
    spec: GroupSpec
    label: ClassLabel
    representative: SignedElement
    elements: list[SignedElement]
    conjugators: list[SignedElement] = field(repr=False)
    _index: dict[SignedElement, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {x: i for i, x in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, x: SignedElement) -> bool:
        return x in self._index

    def index(self, x: SignedElement) -> int:
        return self._index[x]


def orbit_with_conjugators(start: SignedElement, gens: list[SignedElement]):
    """Breadth-first orbit of ``start`` under conjugation by ``gens``.

    Returns ``(elements, conjugators)`` with ``conjugators[i] start conjugators[i]^-1
    == elements[i]`` and ``elements[0] == start``.
    """
    from .core import compose

    elements = [start]
    conj = [SignedElement.identity(start.degree)]
    seen = {start: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x = elements[i]
        for h in gens:
            y = conjugate(h, x)
            if y not in seen:
                seen[y] = len(elements)
                elements.append(y)
                conj.append(compose(h, conj[i]))
                queue.append(seen[y])
    return elements, conj


def orbit_oracle(spec: GroupSpec, g: SignedElement) -> set[SignedElement]:
    """Plain orbit of ``g`` under conjugation by ``generators(spec)``."""
    gens = generators(spec)
    seen = {g}
    stack = [g]
    while stack:
        x = stack.pop()
        for h in gens:
            y = conjugate(h, x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


# --- labels and representatives ------------------------------------------------

def _partitions(n: int, largest: int | None = None):
    """Partitions of n as non-increasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def signed_cycle_types(n: int) -> list[SignedCycleType]:
    """Every signed cycle type of degree n, in a fixed order."""
    out = []
    seen = set()
    for part in _partitions(n):
        for pars in product((0, 1), repeat=len(part)):
            t = SignedCycleType(tuple(sorted(zip(part, pars))))
            if t not in seen:
                seen.add(t)
                out.append(t)
    return out


def canonical_element(t: SignedCycleType) -> SignedElement:
    """Cycles laid out consecutively, longest first; a negative cycle carries its
    sign bit on its first point."""
    n = t.degree
    images = list(range(1, n + 1))
    bits = 0
    pos = 1
    for length, par in sorted(t.entries, key=lambda e: (-e[0], -e[1])):
        pts = list(range(pos, pos + length))
        for k, i in enumerate(pts):
            images[i - 1] = pts[(k + 1) % length]
        if par:
            bits |= 1 << (pos - 1)
        pos += length
    return _el(bits, tuple(images))


def _minus_representative(plus: SignedElement) -> SignedElement:
    # conjugate by (e_1, id), which lies in W(B_n) but not in W(D_n)
    n = plus.degree
    e1 = _el(1, tuple(range(1, n + 1)))
    return conjugate(e1, plus)


def representatives(spec: GroupSpec) -> list[tuple[ClassLabel, SignedElement]]:
    if spec.degree > MAX_CLASS_DEGREE:
        raise ValueError(f"degree {spec.degree} above class enumeration cap {MAX_CLASS_DEGREE}")
    out = []
    for t in signed_cycle_types(spec.degree):
        if spec.family == "D" and t.parity:
            continue
        rep = canonical_element(t)
        if spec.family == "D" and t.splits_in_D():
            out.append((ClassLabel(t, "plus"), rep))
            out.append((ClassLabel(t, "minus"), _minus_representative(rep)))
        else:
            out.append((ClassLabel(t), rep))
    return out


# --- memoized class enumeration --------------------------------------------------

_memo: dict[tuple[GroupSpec, ClassLabel], ConjClass] = {}
_memo_lock = threading.Lock()


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()


def _require_member(spec: GroupSpec, g: SignedElement) -> None:
    if not member(spec, g):
        raise ValueError(f"{format_element(g)} is not an element of {spec}")


def _enumerate_label(spec: GroupSpec, label: ClassLabel) -> ConjClass:
    key = (spec, label)
    cls = _memo.get(key)
    if cls is not None:
        return cls
    rep = canonical_element(label.type)
    if label.split == "minus":
        rep = _minus_representative(rep)
    elements, conj = orbit_with_conjugators(rep, generators(spec))
    cls = ConjClass(spec, label, rep, elements, conj)
    with _memo_lock:
        return _memo.setdefault(key, cls)


def class_label(spec: GroupSpec, g: SignedElement) -> ClassLabel:
    _require_member(spec, g)
    t = sign_cycle_type(g)
    if spec.family == "B" or not t.splits_in_D():
        return ClassLabel(t)
    plus = _enumerate_label(spec, ClassLabel(t, "plus"))
    return ClassLabel(t, "plus" if g in plus else "minus")


def enumerate_class(spec: GroupSpec, g: SignedElement) -> ConjClass:
    """Full conjugacy class of ``g``; its representative is the canonical one for the label."""
    if spec.degree > MAX_CLASS_DEGREE:
        raise ValueError(f"degree {spec.degree} above class enumeration cap {MAX_CLASS_DEGREE}")
    return _enumerate_label(spec, class_label(spec, g))


def are_conjugate(spec: GroupSpec, g: SignedElement, h: SignedElement) -> bool:
    _require_member(spec, g)
    _require_member(spec, h)
    t = sign_cycle_type(g)
    if t != sign_cycle_type(h):
        return False
    if spec.family == "B" or not t.splits_in_D():
        return True
    return h in enumerate_class(spec, g)
