"""Finite racks, the sq test, subrack decompositions and type D certificates."""
from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .conjugacy import ConjClass
from .core import (
    SignedElement,
    conjugate,
    format_element,
    from_points,
    grammar_key,
    pt_conj,
    pt_mul,
    to_points,
)

DEFAULT_SUBGROUP_CAP = 200_000

EVIDENCE_PAIR = "pair-nonconjugate-in-generated-subgroup"
EVIDENCE_WITNESS = "witness-decomposition"


class ForeignElement(ValueError):
    pass


class SubgroupCapExceeded(OverflowError):
    def __init__(self, cap: int, reached: int):
        super().__init__(f"subgroup closure exceeded cap of {cap} elements")
        self.cap = cap
        self.reached = reached


# --- tabulated racks -----------------------------------------------------------

class FiniteRack:
    """A rack on points ``0..N-1`` with ``table[x][y] = x |> y``.

    ``labels`` optionally names the points (e.g. the signed elements of a
    conjugacy class); lookups by label go through :meth:`index`.
    """

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[Hashable] | None = None):
        n = len(table)
        if any(len(row) != n for row in table):
            raise ValueError("rack table must be square")
        if labels is not None and len(labels) != n:
            raise ValueError("one label per point required")
        self.table = [list(row) for row in table]
        self.labels = list(labels) if labels is not None else list(range(n))
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def from_elements(cls, elements: Iterable[SignedElement]) -> FiniteRack:
        """Conjugation rack ``x |> y = x y x^-1`` on a conjugation-closed set."""
        elements = list(elements)
        pts = [to_points(x) for x in elements]
        where = {p: i for i, p in enumerate(pts)}
        table = []
        for px in pts:
            row = []
            for py in pts:
                z = pt_conj(px, py)
                if z not in where:
                    raise ValueError("element set is not closed under conjugation")
                row.append(where[z])
            table.append(row)
        return cls(table, elements)

    @property
    def size(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ForeignElement(f"{label} is not a point of this rack") from None

    def op(self, x, y):
        """``x |> y`` on labels."""
        return self.labels[self.table[self.index(x)][self.index(y)]]

    def sq(self, x, y):
        i, j = self.index(x), self.index(y)
        t = self.table
        return self.labels[t[i][t[j][t[i][j]]]]

    def relabel(self, perm: Sequence[int]) -> FiniteRack:
        """Isomorphic copy in which old point ``i`` becomes point ``perm[i]``."""
        n = self.size
        table = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                table[perm[i]][perm[j]] = perm[self.table[i][j]]
        labels = [None] * n
        for i in range(n):
            labels[perm[i]] = self.labels[i]
        return FiniteRack(table, labels)


@dataclass
class RackAxiomReport:
    size: int
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_rack_axioms(rack: FiniteRack, limit: int = 10) -> RackAxiomReport:
    """Idempotence, bijective left translations and left self-distributivity.

    At most ``limit`` violations are collected per axiom.
    """
    t = rack.table
    n = rack.size
    report = RackAxiomReport(n)
    bad = [(("idempotent", (x,))) for x in range(n) if t[x][x] != x]
    report.violations.extend(bad[:limit])
    bad = [("bijective", (x,)) for x in range(n) if len(set(t[x])) != n]
    report.violations.extend(bad[:limit])
    found = 0
    for x in range(n):
        tx = t[x]
        for y in range(n):
            txy = t[tx[y]]
            ty = t[y]
            for z in range(n):
                if tx[ty[z]] != txy[tx[z]]:
                    report.violations.append(("self-distributive", (x, y, z)))
                    found += 1
                    if found >= limit:
                        return report
    return report


# --- conjugation racks on signed elements -----------------------------------------

def rack_op(x: SignedElement, y: SignedElement, rack: FiniteRack | None = None) -> SignedElement:
    if rack is not None:
        return rack.op(x, y)
    return conjugate(x, y)


def sq(x: SignedElement, y: SignedElement, rack: FiniteRack | None = None) -> SignedElement:
    """``x |> (y |> (x |> y))``."""
    if rack is not None:
        return rack.sq(x, y)
    return conjugate(x, conjugate(y, conjugate(x, y)))


def _pt_sq(r, s):
    return pt_conj(r, pt_conj(s, pt_conj(r, s)))


def _pt_closure(gens, cap):
    n2 = len(gens[0])
    e = tuple(range(n2))
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = pt_mul(x, g)
            if y not in seen:
                seen.add(y)
                if cap is not None and len(seen) > cap:
                    raise SubgroupCapExceeded(cap, len(seen))
                queue.append(y)
    return seen


def subgroup_closure(r: SignedElement, s: SignedElement,
                     cap: int | None = DEFAULT_SUBGROUP_CAP) -> set[SignedElement]:
    if r.degree != s.degree:
        raise ValueError("generators of different degree")
    return {from_points(p) for p in _pt_closure([to_points(r), to_points(s)], cap)}


def _pt_orbit(start, gens, stop=None):
    """Orbit of ``start`` under conjugation by ``gens``; returns early (with the
    partial orbit and True) once ``stop`` is reached."""
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for g in gens:
            y = pt_conj(g, x)
            if y not in seen:
                if y == stop:
                    seen.add(y)
                    return seen, True
                seen.add(y)
                stack.append(y)
    return seen, stop in seen


def inner_orbit(x: SignedElement, r: SignedElement, s: SignedElement) -> set[SignedElement]:
    """Orbit of ``x`` under conjugation by the subgroup generated by ``r`` and ``s``."""
    orb, _ = _pt_orbit(to_points(x), [to_points(r), to_points(s)])
    return {from_points(p) for p in orb}


# --- decompositions ------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionWitness:
    R: frozenset
    S: frozenset
    a: SignedElement
    b: SignedElement


@dataclass
class DecompositionReport:
    checks: dict[str, bool]
    counterexamples: dict[str, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": dict(self.checks),
                "counterexamples": {k: v for k, v in self.counterexamples.items() if v}}


def validate_decomposition(w: DecompositionWitness, max_examples: int = 3) -> DecompositionReport:
    """Check every defining property of a subrack decomposition with ``sq(a, b) != b``.

    Failures are report entries, never exceptions.
    """
    R = {to_points(x) for x in w.R}
    S = {to_points(x) for x in w.S}
    a, b = to_points(w.a), to_points(w.b)
    ex: dict[str, list[str]] = {k: [] for k in
                                ("disjoint", "R_subrack", "S_subrack", "R_acts_on_S",
                                 "S_acts_on_R", "union_subrack")}

    def note(key, *pts):
        if len(ex[key]) < max_examples:
            ex[key].append(" , ".join(format_element(from_points(p)) for p in pts))

    for x in R & S:
        note("disjoint", x)
    U = R | S
    for x in R:
        for y in R:
            z = pt_conj(x, y)
            if z not in R:
                note("R_subrack", x, y)
            if z not in U:
                note("union_subrack", x, y)
        for y in S:
            z = pt_conj(x, y)
            if z not in S:
                note("R_acts_on_S", x, y)
            if z not in U:
                note("union_subrack", x, y)
    for x in S:
        for y in S:
            z = pt_conj(x, y)
            if z not in S:
                note("S_subrack", x, y)
            if z not in U:
                note("union_subrack", x, y)
        for y in R:
            z = pt_conj(x, y)
            if z not in R:
                note("S_acts_on_R", x, y)
            if z not in U:
                note("union_subrack", x, y)
    checks = {
        "nonempty": bool(R) and bool(S),
        "disjoint": not ex["disjoint"],
        "a_in_R": a in R,
        "b_in_S": b in S,
        "R_subrack": not ex["R_subrack"],
        "S_subrack": not ex["S_subrack"],
        "R_acts_on_S": not ex["R_acts_on_S"],
        "S_acts_on_R": not ex["S_acts_on_R"],
        "union_subrack": not ex["union_subrack"],
        "sq_differs": _pt_sq(a, b) != b,
    }
    return DecompositionReport(checks, ex)


def orbit_witness(r: SignedElement, s: SignedElement) -> DecompositionWitness:
    """The two orbits of ``r`` and ``s`` under the subgroup they generate."""
    return DecompositionWitness(frozenset(inner_orbit(r, r, s)), frozenset(inner_orbit(s, r, s)), r, s)


# --- certificates ----------------------------------------------------------------------

@dataclass
class TypeDCertificate:
    r: SignedElement
    s: SignedElement
    subgroup_order: int
    evidence: str
    checks: dict[str, bool]
    R_size: int = 0
    S_size: int = 0

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "r": format_element(self.r),
            "s": format_element(self.s),
            "subgroupOrder": self.subgroup_order,
            "evidence": self.evidence,
            "checks": dict(self.checks),
            "R_size": self.R_size,
            "S_size": self.S_size,
        }


@dataclass
class CertificateSearch:
    """Outcome of scanning ``(representative, s)`` over a class.

    ``status`` is ``"certificate"``, ``"exhausted"`` or ``"incomplete"`` (no
    certificate found but some candidate pairs were skipped on the subgroup cap).
    """

    status: str
    certificate: TypeDCertificate | None
    scanned: int
    sq_candidates: int
    skipped: list[str]


def _scan_block(r_pt, cand_pts, start, stop, cap):
    """First qualifying index in ``[start, stop)``; returns (index, subgroup_order,
    sq_candidates, skipped_indices)."""
    gens = None
    nsq = 0
    skipped = []
    for k in range(start, stop):
        s_pt = cand_pts[k]
        if _pt_sq(r_pt, s_pt) == s_pt:
            continue
        nsq += 1
        gens = [r_pt, s_pt]
        _, conj = _pt_orbit(r_pt, gens, stop=s_pt)
        if conj:
            continue
        try:
            order = len(_pt_closure(gens, cap))
        except SubgroupCapExceeded:
            skipped.append(k)
            continue
        return k, order, nsq, skipped
    return None, 0, nsq, skipped


def _scan_block_job(args):
    return _scan_block(*args)


def type_D_certificate(cls: ConjClass, cap: int | None = DEFAULT_SUBGROUP_CAP,
                       jobs: int = 1) -> CertificateSearch:
    """Search for ``s`` with ``sq(r, s) != s`` and ``r``, ``s`` not conjugate in
    ``<r, s>``, where ``r`` is the class representative.

    Candidates are scanned in element-grammar order, so the certificate is the
    lowest such ``s`` regardless of ``jobs``.  Scanning a single ``r`` is
    complete because the group acts transitively on its class by rack
    automorphisms.
    """
    r = cls.representative
    cands = sorted(cls.elements, key=grammar_key)
    r_pt = to_points(r)
    pts = [to_points(x) for x in cands]
    n = len(pts)

    if jobs <= 1 or n < 64:
        hit, order, nsq, skipped = _scan_block(r_pt, pts, 0, n, cap)
        scanned = hit + 1 if hit is not None else n
    else:
        bounds = [n * k // jobs for k in range(jobs + 1)]
        tasks = [(r_pt, pts, bounds[k], bounds[k + 1], cap) for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_scan_block_job, tasks))
        hit, order, nsq, skipped = None, 0, 0, []
        for k, (h, o, q, sk) in enumerate(results):
            if hit is None:
                skipped.extend(sk)
                nsq += q
                if h is not None:
                    hit, order = h, o
        scanned = hit + 1 if hit is not None else n
        if hit is not None:
            # per-block counters past the winning block are discarded
            skipped = [k for k in skipped if k < hit]
    skipped_txt = [format_element(cands[k]) for k in skipped]
    if hit is None:
        return CertificateSearch("incomplete" if skipped else "exhausted", None, scanned, nsq, skipped_txt)

    s = cands[hit]
    wit = orbit_witness(r, s)
    rep = validate_decomposition(wit)
    cert = TypeDCertificate(
        r=r, s=s, subgroup_order=order, evidence=EVIDENCE_PAIR,
        checks={"sq": sq(r, s) != s, "nonconjugate": s not in wit.R, "decomposition": rep.passed},
        R_size=len(wit.R), S_size=len(wit.S),
    )
    return CertificateSearch("certificate", cert, scanned, nsq, skipped_txt)


def pair_qualifies(r: SignedElement, s: SignedElement) -> bool:
    """``sq(r, s) != s`` and ``s`` outside the ``<r, s>``-orbit of ``r``."""
    rp, sp = to_points(r), to_points(s)
    if _pt_sq(rp, sp) == sp:
        return False
    _, conj = _pt_orbit(rp, [rp, sp], stop=sp)
    return not conj
