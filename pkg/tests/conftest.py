from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from weylrack.core import Permutation, SignedElement, SignVector


def matrix(g: SignedElement) -> np.ndarray:
    """Signed permutation matrix: column j is (-1)^{a_sigma(j)} e_sigma(j)."""
    n = g.degree
    m = np.zeros((n, n), dtype=int)
    for j, s in enumerate(g.perm.images, start=1):
        m[s - 1, j - 1] = -1 if g.sign[s] else 1
    return m


def from_matrix(m: np.ndarray) -> SignedElement:
    n = m.shape[0]
    images, signs = [0] * n, [0] * n
    for j in range(n):
        (i,) = np.nonzero(m[:, j])[0]
        images[j] = i + 1
        signs[i] = int(m[i, j] < 0)
    return SignedElement(SignVector.from_seq(signs), Permutation(tuple(images)))


@st.composite
def elements(draw, n: int | None = None, min_n: int = 1, max_n: int = 8):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    images = draw(st.permutations(range(1, n + 1)))
    bits = draw(st.integers(0, 2 ** n - 1))
    return SignedElement(SignVector(bits, n), Permutation(tuple(images)))


def el(text: str) -> SignedElement:
    from weylrack.core import parse_element
    return parse_element(text)
