"""Signed permutations and the Weyl groups W(B_n) and W(D_n).

An element ``(a, sigma)`` of Z_2^n x| S_n is stored as a packed sign word plus a
permutation in one-line notation.  The product is

    (a, sigma)(b, tau) = (a + sigma(b), sigma tau)

with ``sigma(b)_i = b_{sigma^-1(i)}``.  Positions are 1-indexed everywhere.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

MAX_DEGREE = 64


class DegreeMismatch(ValueError):
    pass


class ElementSyntaxError(ValueError):
    """Raised by :func:`parse_element`; ``kind`` names the failed rule."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _check_degree(n: int) -> None:
    if not 0 <= n <= MAX_DEGREE:
        raise ValueError(f"degree {n} outside supported range 0..{MAX_DEGREE}")


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        _check_degree(n)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{n}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return _perm(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> Permutation:
        images = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            for i in cyc:
                if not 1 <= i <= n:
                    raise ValueError(f"index {i} out of range 1..{n}")
                if i in seen:
                    raise ValueError(f"index {i} repeated")
                seen.add(i)
            for k, i in enumerate(cyc):
                images[i - 1] = cyc[(k + 1) % len(cyc)]
        return _perm(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        # (self * other)(i) = self(other(i))
        if len(self.images) != len(other.images):
            raise DegreeMismatch("permutations of different degree")
        p = self.images
        return _perm(tuple(p[j - 1] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return _perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.images, 1))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest point, sorted by that point."""
        seen = [False] * (len(self.images) + 1)
        out = []
        for start in range(1, len(self.images) + 1):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i - 1]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles(include_fixed=True)))

    def order(self) -> int:
        from math import lcm
        return lcm(*self.cycle_type()) if self.images else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def _perm(images: tuple[int, ...]) -> Permutation:
    # trusted constructor for internally computed images
    p = object.__new__(Permutation)
    object.__setattr__(p, "images", images)
    return p


@dataclass(frozen=True, slots=True)
class SignVector:
    """Vector in Z_2^n packed into an int; bit ``i-1`` holds ``a_i``."""

    bits: int
    degree: int

    def __post_init__(self):
        _check_degree(self.degree)
        if self.bits < 0 or self.bits >> self.degree:
            raise ValueError(f"sign word {self.bits:#x} does not fit degree {self.degree}")

    @classmethod
    def from_seq(cls, seq: Sequence[int]) -> SignVector:
        bits = 0
        for i, v in enumerate(seq):
            if v not in (0, 1):
                raise ValueError(f"sign entries must be 0 or 1, got {v!r}")
            bits |= v << i
        return cls(bits, len(seq))

    @classmethod
    def zero(cls, n: int) -> SignVector:
        return _sv(0, n)

    def __getitem__(self, i: int) -> int:
        """1-indexed component."""
        if not 1 <= i <= self.degree:
            raise IndexError(i)
        return (self.bits >> (i - 1)) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.degree))

    def __add__(self, other: SignVector) -> SignVector:
        if self.degree != other.degree:
            raise DegreeMismatch("sign vectors of different degree")
        return _sv(self.bits ^ other.bits, self.degree)

    __sub__ = __add__

    def __neg__(self) -> SignVector:
        return self

    @property
    def parity(self) -> int:
        return self.bits.bit_count() & 1

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self)

    def __str__(self) -> str:
        return "".join(str(v) for v in self)


def _sv(bits: int, n: int) -> SignVector:
    v = object.__new__(SignVector)
    object.__setattr__(v, "bits", bits)
    object.__setattr__(v, "degree", n)
    return v


def _act_bits(images: tuple[int, ...], bits: int) -> int:
    # bit j-1 of the input moves to bit sigma(j)-1
    out = 0
    j = 0
    while bits:
        if bits & 1:
            out |= 1 << (images[j] - 1)
        bits >>= 1
        j += 1
    return out


def act(sigma: Permutation, a: SignVector) -> SignVector:
    """``sigma(a)``: component ``i`` of the result is ``a_{sigma^-1(i)}``."""
    if sigma.degree != a.degree:
        raise DegreeMismatch("permutation and sign vector of different degree")
    return _sv(_act_bits(sigma.images, a.bits), a.degree)


@dataclass(frozen=True, slots=True)
class SignedElement:
    sign: SignVector
    perm: Permutation

    def __post_init__(self):
        if self.sign.degree != self.perm.degree:
            raise DegreeMismatch(
                f"sign degree {self.sign.degree} != permutation degree {self.perm.degree}")

    @classmethod
    def identity(cls, n: int) -> SignedElement:
        return _el(0, tuple(range(1, n + 1)))

    @classmethod
    def make(cls, signs: Sequence[int] | str, cycles: Sequence[Sequence[int]] = ()) -> SignedElement:
        """Convenience constructor: ``SignedElement.make("10010", [(1, 2), (3, 4)])``."""
        if isinstance(signs, str):
            signs = [int(c) for c in signs]
        sv = SignVector.from_seq(signs)
        return cls(sv, Permutation.from_cycles(sv.degree, cycles))

    @property
    def degree(self) -> int:
        return self.sign.degree

    def __mul__(self, other: SignedElement) -> SignedElement:
        return compose(self, other)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"SignedElement({format_element(self)!r})"


def _el(bits: int, images: tuple[int, ...]) -> SignedElement:
    g = object.__new__(SignedElement)
    object.__setattr__(g, "sign", _sv(bits, len(images)))
    object.__setattr__(g, "perm", _perm(images))
    return g


def compose(g: SignedElement, h: SignedElement) -> SignedElement:
    gp = g.perm.images
    hp = h.perm.images
    if len(gp) != len(hp):
        raise DegreeMismatch(f"cannot compose degree {len(gp)} with degree {len(hp)}")
    return _el(g.sign.bits ^ _act_bits(gp, h.sign.bits), tuple(gp[j - 1] for j in hp))


def inverse(g: SignedElement) -> SignedElement:
    """``(a, sigma)^-1 = (-sigma^-1(a), sigma^-1)``; the minus is void mod 2."""
    inv = g.perm.inverse().images
    return _el(_act_bits(inv, g.sign.bits), inv)


def conjugate(g: SignedElement, x: SignedElement) -> SignedElement:
    """``g x g^-1`` through the closed form.

    For ``g = (b, tau)`` and ``x = (a, sigma)`` the result is
    ``(b + tau(a) + tau sigma tau^-1 (b), tau sigma tau^-1)``.
    """
    if g.degree != x.degree:
        raise DegreeMismatch(f"cannot conjugate degree {x.degree} by degree {g.degree}")
    tau = g.perm.images
    sig = x.perm.images
    n = len(tau)
    # tau sigma tau^-1 maps tau(i) to tau(sigma(i))
    conj = [0] * n
    for i in range(n):
        conj[tau[i] - 1] = tau[sig[i] - 1]
    conj = tuple(conj)
    b = g.sign.bits
    bits = b ^ _act_bits(tau, x.sign.bits) ^ _act_bits(conj, b)
    return _el(bits, conj)


def conjugate_multiply(g: SignedElement, x: SignedElement) -> SignedElement:
    """``g x g^-1`` by multiplying out; kept as an independent path for cross-checks."""
    return compose(compose(g, x), inverse(g))


def commutes(g: SignedElement, h: SignedElement) -> bool:
    return compose(g, h) == compose(h, g)


def power(g: SignedElement, k: int) -> SignedElement:
    if k < 0:
        g, k = inverse(g), -k
    result = SignedElement.identity(g.degree)
    while k:
        if k & 1:
            result = compose(result, g)
        g = compose(g, g)
        k >>= 1
    return result


def element_order(g: SignedElement) -> int:
    e = SignedElement.identity(g.degree)
    x, k = g, 1
    while x != e:
        x = compose(x, g)
        k += 1
    return k


# --- group families ---------------------------------------------------------

@dataclass(frozen=True, slots=True)
class GroupSpec:
    family: str
    degree: int

    def __post_init__(self):
        if self.family not in ("B", "D"):
            raise ValueError(f"family must be 'B' or 'D', got {self.family!r}")
        if not 1 <= self.degree <= MAX_DEGREE:
            raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {self.degree}")

    @property
    def order(self) -> int:
        from math import factorial
        o = 2 ** self.degree * factorial(self.degree)
        return o // 2 if self.family == "D" else o

    def __str__(self) -> str:
        return f"W({self.family}{self.degree})"


def member(spec: GroupSpec, g: SignedElement) -> bool:
    if g.degree != spec.degree:
        raise DegreeMismatch(f"element of degree {g.degree} tested against {spec}")
    return spec.family == "B" or g.sign.parity == 0


def generators(spec: GroupSpec) -> list[SignedElement]:
    """Adjacent transpositions with zero signs, then ``e_1`` (B) or ``e_1 + e_2`` (D)."""
    n = spec.degree
    gens = []
    for i in range(1, n):
        images = list(range(1, n + 1))
        images[i - 1], images[i] = i + 1, i
        gens.append(_el(0, tuple(images)))
    ident = tuple(range(1, n + 1))
    if spec.family == "B":
        gens.append(_el(1, ident))
    elif n >= 2:
        gens.append(_el(0b11, ident))
    return gens


def closure(gens: Sequence[SignedElement], cap: int | None = None) -> list[SignedElement]:
    """Breadth-first closure of ``gens`` under right multiplication by ``gens``.

    Raises ``OverflowError`` once more than ``cap`` elements are found.
    """
    if not gens:
        raise ValueError("empty generating set")
    e = SignedElement.identity(gens[0].degree)
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                order.append(y)
                if cap is not None and len(order) > cap:
                    raise OverflowError(f"closure exceeds cap {cap}")
                queue.append(y)
    return order


def group_elements(spec: GroupSpec) -> Iterator[SignedElement]:
    """All elements, ordered by permutation (lexicographic one-line) then sign word."""
    from itertools import permutations
    n = spec.degree
    for images in permutations(range(1, n + 1)):
        for bits in range(1 << n):
            if spec.family == "D" and bits.bit_count() & 1:
                continue
            yield _el(bits, images)


# --- signed cycle type ------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SignedCycleType:
    """Sorted ``(length, parity)`` pairs, fixed points included as length 1."""

    entries: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(l for l, _ in self.entries)

    @property
    def parity(self) -> int:
        return sum(p for _, p in self.entries) & 1

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(l for l, _ in self.entries))

    def splits_in_D(self) -> bool:
        return all(l % 2 == 0 and p == 0 for l, p in self.entries)

    def as_list(self) -> list[list[int]]:
        return [list(e) for e in self.entries]

    def __str__(self) -> str:
        return "[" + ",".join(f"({l},{p})" for l, p in self.entries) + "]"


def sign_cycle_type(g: SignedElement) -> SignedCycleType:
    bits = g.sign.bits
    entries = []
    for cyc in g.perm.cycles(include_fixed=True):
        par = 0
        for i in cyc:
            par ^= (bits >> (i - 1)) & 1
        entries.append((len(cyc), par))
    return SignedCycleType(tuple(sorted(entries)))


def sigma_type_string(cycle_type: Sequence[int]) -> str:
    """Exponent notation: ``(1, 1, 3) -> "(1^2,3)"``."""
    from collections import Counter
    parts = []
    for l, m in sorted(Counter(cycle_type).items()):
        parts.append(str(l) if m == 1 else f"{l}^{m}")
    return "(" + ",".join(parts) + ")"


# --- element grammar ----------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def format_element(g: SignedElement) -> str:
    return f"{g.sign}:{g.perm}"


def parse_element(text: str) -> SignedElement:
    """Parse ``<bits>:<cycles>``, e.g. ``10010:(1 2)(3 4)`` or ``000:()``."""
    text = text.strip()
    if text.count(":") != 1:
        raise ElementSyntaxError("format", f"expected '<bits>:<cycles>', got {text!r}")
    bits_s, cyc_s = text.split(":")
    if not bits_s or any(c not in "01" for c in bits_s):
        raise ElementSyntaxError("bits", f"malformed sign bits {bits_s!r}")
    n = len(bits_s)
    if n > MAX_DEGREE:
        raise ElementSyntaxError("bits", f"degree {n} exceeds cap {MAX_DEGREE}")
    cyc_s = cyc_s.strip()
    if not cyc_s or _CYCLE_RE.sub("", cyc_s).strip():
        raise ElementSyntaxError("cycles", f"malformed cycle product {cyc_s!r}")
    cycles = []
    seen = set()
    for body in _CYCLE_RE.findall(cyc_s):
        tokens = body.replace(",", " ").split()
        if not tokens:
            if cyc_s != "()":
                raise ElementSyntaxError("cycles", "empty cycle inside a product")
            continue
        try:
            cyc = [int(t) for t in tokens]
        except ValueError:
            raise ElementSyntaxError("cycles", f"non-integer entry in ({body})") from None
        for i in cyc:
            if not 1 <= i <= n:
                raise ElementSyntaxError("range", f"index {i} out of range 1..{n}")
            if i in seen:
                raise ElementSyntaxError("repeat", f"index {i} repeated")
            seen.add(i)
        cycles.append(cyc)
    return SignedElement(SignVector.from_seq([int(c) for c in bits_s]),
                         Permutation.from_cycles(n, cycles))


def grammar_key(g: SignedElement) -> str:
    return format_element(g)


# --- 2n-point encoding ----------------------------------------------------------
# (a, sigma) acts on +-e_j; point j-1 stands for +e_j and j-1+n for -e_j.
# Composition of elements is composition of these point maps, which makes
# tuple indexing the fast path for bulk conjugation.

def to_points(g: SignedElement) -> tuple[int, ...]:
    n = g.degree
    bits = g.sign.bits
    out = [0] * (2 * n)
    for j, s in enumerate(g.perm.images):
        neg = (bits >> (s - 1)) & 1
        out[j] = s - 1 + n * neg
        out[j + n] = s - 1 + n * (1 - neg)
    return tuple(out)


def from_points(p: Sequence[int]) -> SignedElement:
    n = len(p) // 2
    images = []
    bits = 0
    for j in range(n):
        t = p[j]
        if t >= n:
            t -= n
            bits |= 1 << t
        images.append(t + 1)
    return _el(bits, tuple(images))


def pt_mul(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    return tuple([x[i] for i in y])


def pt_conj(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    """``x y x^-1`` on point tuples."""
    z = [0] * len(x)
    for i, yi in enumerate(y):
        z[x[i]] = x[yi]
    return tuple(z)
