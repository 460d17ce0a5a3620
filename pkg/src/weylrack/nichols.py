"""Rack braidings, rank-one Yetter-Drinfeld data and quantum symmetrizer ranks.

A braided space here is a finite rack ``X`` with a ``+-1`` table ``q`` and
braiding ``c(x (x) y) = q(x, y) (x |> y) (x) x`` on the span of ``X``.  Basis
words of ``V^{(x) m}`` are indexed big-endian: the first tensor factor is the
most significant digit.  All arithmetic is exact integer arithmetic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .conjugacy import orbit_with_conjugators
from .core import (
    GroupSpec,
    SignedElement,
    compose,
    conjugate,
    format_element,
    generators,
    group_elements,
    inverse,
    member,
)
from .linalg import sparse_rank
from .rack import FiniteRack

MAX_RACK_SIZE = 12
MAX_TENSOR_ROWS = 3_000_000
MAX_CENTRALIZER_DEGREE = 6


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Cocycle:
    q: list[list[int]]

    def __post_init__(self):
        n = len(self.q)
        for row in self.q:
            if len(row) != n or any(v not in (1, -1) for v in row):
                raise ValueError("cocycle must be a square table of +-1 values")

    @classmethod
    def constant(cls, n: int, value: int) -> Cocycle:
        return cls([[value] * n for _ in range(n)])

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.q]


@dataclass
class BraidedSpace:
    rack: FiniteRack
    cocycle: Cocycle

    def __post_init__(self):
        if len(self.cocycle.q) != self.rack.size:
            raise ValueError("cocycle size does not match the rack")

    @property
    def dimension(self) -> int:
        return self.rack.size

    @classmethod
    def constant(cls, rack: FiniteRack, value: int) -> BraidedSpace:
        return cls(rack, Cocycle.constant(rack.size, value))


def _inverse_table(table):
    n = len(table)
    inv = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            inv[x][table[x][y]] = y
    return inv


def braiding_matrix(space: BraidedSpace) -> np.ndarray:
    """Dense signed permutation matrix of ``c`` on ``V (x) V``."""
    t = space.rack.table
    q = space.cocycle.q
    n = space.dimension
    c = np.zeros((n * n, n * n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            c[t[x][y] * n + x, x * n + y] = q[x][y]
    return c


def check_braid_equation(space: BraidedSpace) -> bool:
    """``c_12 c_23 c_12 == c_23 c_12 c_23`` on every basis triple."""
    t = space.rack.table
    q = space.cocycle.q
    n = space.dimension

    def c12(sgn, w):
        x, y, z = w
        return sgn * q[x][y], (t[x][y], x, z)

    def c23(sgn, w):
        x, y, z = w
        return sgn * q[y][z], (x, t[y][z], y)

    for w in product(range(n), repeat=3):
        lhs = c12(*c23(*c12(1, w)))
        rhs = c23(*c12(*c23(1, w)))
        if lhs != rhs:
            return False
    return True


# --- centralizers and characters ---------------------------------------------------

def centralizer(spec: GroupSpec, s: SignedElement) -> list[SignedElement]:
    if spec.degree > MAX_CENTRALIZER_DEGREE:
        raise BudgetExceeded(f"centralizer filtration capped at degree {MAX_CENTRALIZER_DEGREE}")
    if not member(spec, s):
        raise ValueError(f"{format_element(s)} is not an element of {spec}")
    return [g for g in group_elements(spec) if compose(g, s) == compose(s, g)]


def _generating_subset(elements: Sequence[SignedElement]) -> list[SignedElement]:
    gens: list[SignedElement] = []
    span = {SignedElement.identity(elements[0].degree)}
    for g in elements:
        if g in span:
            continue
        gens.append(g)
        # re-close; the sets involved are small
        queue = deque(span)
        while queue:
            x = queue.popleft()
            for h in gens:
                y = compose(x, h)
                if y not in span:
                    span.add(y)
                    queue.append(y)
    return gens


def centralizer_characters(spec: GroupSpec, s: SignedElement) -> list[dict[SignedElement, int]]:
    """Every homomorphism from the centralizer of ``s`` to ``{+1, -1}``.

    The trivial character comes first; the rest follow the binary order of
    their values on a fixed generating set.
    """
    cent = centralizer(spec, s)
    gens = _generating_subset(cent)
    e = SignedElement.identity(spec.degree)
    chars = []
    for values in product((1, -1), repeat=len(gens)):
        chi = {e: 1}
        queue = deque([e])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for h, v in zip(gens, values):
                y = compose(x, h)
                w = chi[x] * v
                got = chi.get(y)
                if got is None:
                    chi[y] = w
                    queue.append(y)
                elif got != w:
                    ok = False
                    break
        if ok:
            chars.append(chi)
    return chars


def is_character(chi: Mapping[SignedElement, int]) -> bool:
    """``chi(gh) == chi(g) chi(h)`` over all pairs of the value table."""
    for g, a in chi.items():
        for h, b in chi.items():
            v = chi.get(compose(g, h))
            if v is None or v != a * b:
                return False
    return True


def sign_character(cent: Sequence[SignedElement]) -> dict[SignedElement, int]:
    """Restriction of the sign of the underlying permutation of S_n."""
    from .core import Permutation

    def sgn(p: Permutation) -> int:
        return -1 if sum(len(c) - 1 for c in p.cycles()) % 2 else 1

    return {g: sgn(g.perm) for g in cent}


# --- Yetter-Drinfeld data -----------------------------------------------------------

@dataclass
class YDData:
    spec: GroupSpec
    s: SignedElement
    points: list[SignedElement]      # t_1 = s, t_2, ..., t_m
    section: list[SignedElement]     # g_i with g_i s g_i^-1 = t_i
    chi: dict[SignedElement, int] = field(repr=False)

    def __post_init__(self):
        if self.points[0] != self.s:
            raise ValueError("numeration must start at s")
        for t, g in zip(self.points, self.section):
            if conjugate(g, self.s) != t:
                raise ValueError(f"section element {format_element(g)} does not map s to {format_element(t)}")
        if any(v not in (1, -1) for v in self.chi.values()):
            raise ValueError("only +-1 valued characters are supported")


def yd_data(spec: GroupSpec, s: SignedElement, chi: Mapping[SignedElement, int] | None = None,
            check: bool = True) -> YDData:
    """Breadth-first numeration of the class of ``s`` with its conjugator section.

    ``chi`` defaults to the trivial character; a supplied table is checked to be
    a homomorphism when ``check`` is set.
    """
    if not member(spec, s):
        raise ValueError(f"{format_element(s)} is not an element of {spec}")
    pts, sec = orbit_with_conjugators(s, generators(spec))
    if chi is None:
        chi = {g: 1 for g in centralizer(spec, s)}
    chi = dict(chi)
    if check and not is_character(chi):
        raise ValueError("chi is not a homomorphism on its value table")
    return YDData(spec, s, pts, sec, chi)


def yd_rack(data: YDData) -> FiniteRack:
    return FiniteRack.from_elements(data.points)


def yd_cocycle(data: YDData) -> Cocycle:
    """``q(i, j) = chi(nu_j(t_i))`` with ``t_i g_j = g_j' nu_j(t_i)``."""
    index = {t: i for i, t in enumerate(data.points)}
    m = len(data.points)
    q = [[0] * m for _ in range(m)]
    sec_inv = [inverse(g) for g in data.section]
    for i, ti in enumerate(data.points):
        for j, gj in enumerate(data.section):
            jp = index[conjugate(ti, data.points[j])]
            nu = compose(sec_inv[jp], compose(ti, gj))
            v = data.chi.get(nu)
            if v is None:
                raise RuntimeError(f"nu = {format_element(nu)} is outside the centralizer table")
            q[i][j] = v
    return Cocycle(q)


def yd_space(data: YDData) -> BraidedSpace:
    return BraidedSpace(yd_rack(data), yd_cocycle(data))


# --- quantum symmetrizers ---------------------------------------------------------------

def _check_budget(n: int, m: int, max_rack: int, max_rows: int) -> None:
    if n > max_rack:
        raise BudgetExceeded(f"rack of size {n} above budget {max_rack}")
    if n ** m > max_rows:
        raise BudgetExceeded(f"{n}^{m} basis words above budget {max_rows}")


def symmetrizer_columns(space: BraidedSpace, m: int) -> list[dict[int, int]]:
    """Column ``w`` of ``S_m`` (the image of basis word ``w``) as a sparse dict.

    ``S_m = prod_{j=1}^{m-1} (id^{(x) m-j-1} (x) S_{1,j})`` with
    ``S_{1,j} = id + C_12^-1 + C_12^-1 C_23^-1 + ... + C_12^-1 ... C_{j,j+1}^-1``.
    """
    if m < 2:
        raise ValueError("symmetrizers start at degree 2")
    n = space.dimension
    inv = _inverse_table(space.rack.table)
    q = space.cocycle.q

    def cinv(coef, w, p):
        # c^-1(u (x) v) = q(v, y) v (x) y where v |> y = u
        u, v = w[p], w[p + 1]
        y = inv[v][u]
        w = list(w)
        w[p], w[p + 1] = v, y
        return coef * q[v][y], tuple(w)

    def apply_s1(vec, j):
        off = m - j - 1
        out: dict[tuple, int] = {}
        for w, coef in vec.items():
            out[w] = out.get(w, 0) + coef
            for k in range(1, j + 1):
                # C_12^-1 ... C_k,k+1^-1: the rightmost factor acts first
                c, x = coef, w
                for p in range(k, 0, -1):
                    c, x = cinv(c, x, off + p - 1)
                out[x] = out.get(x, 0) + c
        return {w: c for w, c in out.items() if c}

    def index(w):
        k = 0
        for x in w:
            k = k * n + x
        return k

    cols = []
    for w in product(range(n), repeat=m):
        vec = {w: 1}
        for j in range(m - 1, 0, -1):
            vec = apply_s1(vec, j)
        cols.append({index(x): c for x, c in vec.items()})
    return cols


def symmetrizer(space: BraidedSpace, m: int, max_rack: int = MAX_RACK_SIZE,
                max_rows: int = MAX_TENSOR_ROWS) -> np.ndarray:
    """Dense integer matrix of ``S_m``."""
    n = space.dimension
    _check_budget(n, m, max_rack, max_rows)
    cols = symmetrizer_columns(space, m)
    out = np.zeros((n ** m, n ** m), dtype=np.int64)
    for k, col in enumerate(cols):
        for r, v in col.items():
            out[r, k] = v
    return out


@dataclass
class GradedReport:
    dimension: int
    degrees: list[dict] = field(default_factory=list)
    truncated: bool = False
    reason: str | None = None

    @property
    def dims(self) -> list[int]:
        return [d["nichols_dim"] for d in self.degrees]

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "degrees": self.degrees,
                "dims": self.dims, "truncated": self.truncated, "reason": self.reason}


def graded_dims(space: BraidedSpace, max_degree: int, max_rack: int = MAX_RACK_SIZE,
                max_rows: int = MAX_TENSOR_ROWS) -> GradedReport:
    """Graded dimensions ``|X|^m - dim ker S_m`` for ``m = 0..max_degree``.

    Stops with ``truncated`` set at the first degree over budget.
    """
    n = space.dimension
    rep = GradedReport(n)
    for m in range(max_degree + 1):
        tdim = n ** m
        if m < 2:
            rep.degrees.append({"degree": m, "tensor_dim": tdim, "rank": tdim,
                                "kernel": 0, "nichols_dim": tdim})
            continue
        try:
            _check_budget(n, m, max_rack, max_rows)
        except BudgetExceeded as exc:
            rep.truncated = True
            rep.reason = str(exc)
            break
        r = sparse_rank(symmetrizer_columns(space, m))
        rep.degrees.append({"degree": m, "tensor_dim": tdim, "rank": r,
                            "kernel": tdim - r, "nichols_dim": r})
    return rep
