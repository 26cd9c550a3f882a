"""Morphisms between finite direct sums of words.

An object is a tuple of words (one word per summand).  A :class:`SumHom`
stores only its nonzero blocks, keyed ``(target summand, source summand)``.
Tensor products order summands lexicographically: summand ``(i, j)`` of
``X⊗Y`` sits at position ``i*len(Y) + j`` with word ``X[i] + Y[j]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import homspace as hs
from .category import Category
from .diagrams import dual_word, word_coev, word_ev_right
from .homspace import Hom

Word = tuple[int, ...]
Obj = tuple[Word, ...]
UNIT: Obj = ((),)


def obj(words: Iterable[Sequence[int]]) -> Obj:
    return tuple(tuple(int(x) for x in w) for w in words)


def dual_obj(cat: Category, X: Obj) -> Obj:
    return tuple(dual_word(cat, w) for w in X)


def tensor_obj(X: Obj, Y: Obj) -> Obj:
    return tuple(x + y for x in X for y in Y)


@dataclass(eq=False)
class SumHom:
    cat: Category
    src: Obj
    tgt: Obj
    blocks: dict[tuple[int, int], Hom] = field(default_factory=dict)

    def block(self, j: int, i: int) -> Hom:
        h = self.blocks.get((j, i))
        return h if h is not None else hs.zero(self.cat, self.src[i], self.tgt[j])

    def _add_block(self, j: int, i: int, h: Hom) -> None:
        old = self.blocks.get((j, i))
        self.blocks[(j, i)] = h if old is None else old + h

    def __matmul__(self, other: SumHom) -> SumHom:
        if other.tgt != self.src:
            raise ValueError("source/target mismatch in composition")
        by_mid: dict[int, list[tuple[int, Hom]]] = {}
        for (j, i), h in other.blocks.items():
            by_mid.setdefault(j, []).append((i, h))
        out = SumHom(self.cat, other.src, self.tgt)
        for (k, j), g in self.blocks.items():
            for i, h in by_mid.get(j, ()):
                out._add_block(k, i, g @ h)
        return out

    def __add__(self, other: SumHom) -> SumHom:
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise ValueError("type mismatch in sum")
        out = SumHom(self.cat, self.src, self.tgt, dict(self.blocks))
        for key, h in other.blocks.items():
            out._add_block(*key, h)
        return out

    def __neg__(self) -> SumHom:
        return self * -1.0

    def __sub__(self, other: SumHom) -> SumHom:
        return self + (-other)

    def __mul__(self, s: complex) -> SumHom:
        return SumHom(self.cat, self.src, self.tgt, {k: h * s for k, h in self.blocks.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return max((h.norm() for h in self.blocks.values()), default=0.0)

    def dist(self, other: SumHom) -> float:
        return (self - other).norm()

    def worst_block(self, other: SumHom) -> tuple[float, tuple[int, int] | None]:
        d = self - other
        best, where = 0.0, None
        for k, h in d.blocks.items():
            n = h.norm()
            if n > best:
                best, where = n, k
        return best, where

    def __repr__(self) -> str:
        return f"SumHom({len(self.src)} → {len(self.tgt)} summands, {len(self.blocks)} blocks)"


def from_blocks(cat: Category, src: Obj, tgt: Obj, blocks: dict[tuple[int, int], Hom]) -> SumHom:
    return SumHom(cat, src, tgt, dict(blocks))


def identity(cat: Category, X: Obj) -> SumHom:
    return SumHom(cat, X, X, {(i, i): hs.identity(cat, w) for i, w in enumerate(X)})


def zero(cat: Category, src: Obj, tgt: Obj) -> SumHom:
    return SumHom(cat, src, tgt)


def tensor(f: SumHom, g: SumHom) -> SumHom:
    ns, nt = len(g.src), len(g.tgt)
    out = SumHom(f.cat, tensor_obj(f.src, g.src), tensor_obj(f.tgt, g.tgt))
    for (j1, i1), a in f.blocks.items():
        for (j2, i2), b in g.blocks.items():
            out._add_block(j1 * nt + j2, i1 * ns + i2, hs.tensor(a, b))
    return out


def tensor_all(*fs: SumHom) -> SumHom:
    out = fs[0]
    for f in fs[1:]:
        out = tensor(out, f)
    return out


def compose_all(*fs: SumHom) -> SumHom:
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = f @ out
    return out


def braid(cat: Category, X: Obj, Y: Obj, inverse: bool = False) -> SumHom:
    """``c_{X,Y}: X⊗Y → Y⊗X`` summand by summand, or its inverse ``Y⊗X → X⊗Y``."""
    nx, ny = len(X), len(Y)
    if not inverse:
        out = SumHom(cat, tensor_obj(X, Y), tensor_obj(Y, X))
        for i in range(nx):
            for j in range(ny):
                out.blocks[(j * nx + i, i * ny + j)] = hs.braid(cat, X[i], Y[j])
        return out
    out = SumHom(cat, tensor_obj(Y, X), tensor_obj(X, Y))
    for i in range(nx):
        for j in range(ny):
            out.blocks[(i * ny + j, j * nx + i)] = hs.braid(cat, X[i], Y[j], inverse=True)
    return out


def twist(cat: Category, X: Obj, power: int = 1) -> SumHom:
    return SumHom(cat, X, X, {(i, i): hs.twist(cat, w, power) for i, w in enumerate(X)})


def word_ev(cat: Category, word: Sequence[int]) -> Hom:
    """Nested caps ``X'⊗X → 1``."""
    word = tuple(word)
    out = hs.identity(cat, dual_word(cat, word) + word)
    cur = word
    while cur:
        x, rest = cur[0], cur[1:]
        out = hs.embed(hs.ev(cat, x), dual_word(cat, rest), rest) @ out
        cur = rest
    return out


def word_coev_right(cat: Category, word: Sequence[int]) -> Hom:
    """Nested cups ``1 → X'⊗X``."""
    word = tuple(word)
    out = hs.identity(cat, ())
    cur: tuple[int, ...] = ()
    for x in reversed(word):
        out = hs.embed(hs.coev_right(cat, x), dual_word(cat, cur), cur) @ out
        cur = (x,) + cur
    return out


def ev(cat: Category, X: Obj) -> SumHom:
    """``e_X: X'⊗X → 1``."""
    n = len(X)
    return SumHom(cat, tensor_obj(dual_obj(cat, X), X), UNIT, {(0, i * n + i): word_ev(cat, w) for i, w in enumerate(X)})


def coev(cat: Category, X: Obj) -> SumHom:
    """``i_X: 1 → X⊗X'``."""
    n = len(X)
    return SumHom(cat, UNIT, tensor_obj(X, dual_obj(cat, X)), {(i * n + i, 0): word_coev(cat, w) for i, w in enumerate(X)})


def ev_right(cat: Category, X: Obj) -> SumHom:
    """``e'_X: X⊗X' → 1``."""
    n = len(X)
    return SumHom(cat, tensor_obj(X, dual_obj(cat, X)), UNIT, {(0, i * n + i): word_ev_right(cat, w) for i, w in enumerate(X)})


def coev_right(cat: Category, X: Obj) -> SumHom:
    """``i'_X: 1 → X'⊗X``."""
    n = len(X)
    return SumHom(cat, UNIT, tensor_obj(dual_obj(cat, X), X), {(i * n + i, 0): word_coev_right(cat, w) for i, w in enumerate(X)})


def _charge_layout(cat: Category, X: Obj) -> dict[int, list[tuple[int, int]]]:
    """Per charge c, the list of (summand, tree count) in order."""
    lay: dict[int, list[tuple[int, int]]] = {}
    for i, w in enumerate(X):
        for c in hs.charges(cat, w):
            lay.setdefault(c, []).append((i, len(hs.trees(cat, w, c))))
    return lay


def charge_matrix(f: SumHom, c: int) -> np.ndarray:
    """The full matrix of ``f`` on charge ``c`` with summands stacked in order."""
    cat = f.cat
    rows = _charge_layout(cat, f.tgt).get(c, [])
    cols = _charge_layout(cat, f.src).get(c, [])
    roff, coff, r, s = {}, {}, 0, 0
    for j, n in rows:
        roff[j] = (r, n)
        r += n
    for i, n in cols:
        coff[i] = (s, n)
        s += n
    M = np.zeros((r, s), dtype=complex)
    for (j, i), h in f.blocks.items():
        if j in roff and i in coff and c in h.blocks:
            r0, rn = roff[j]
            c0, cn = coff[i]
            M[r0:r0 + rn, c0:c0 + cn] = h.blocks[c]
    return M


def from_charge_matrices(cat: Category, src: Obj, tgt: Obj, mats: dict[int, np.ndarray]) -> SumHom:
    rows_l, cols_l = _charge_layout(cat, tgt), _charge_layout(cat, src)
    out = SumHom(cat, src, tgt)
    for c, M in mats.items():
        r = 0
        for j, rn in rows_l.get(c, []):
            s = 0
            for i, cn in cols_l.get(c, []):
                blk = M[r:r + rn, s:s + cn]
                if np.any(blk != 0):
                    h = out.blocks.get((j, i)) or hs.zero(cat, src[i], tgt[j])
                    h.blocks[c] = h.blocks[c] + blk
                    out.blocks[(j, i)] = h
                s += cn
            r += rn
    return out


def inverse(f: SumHom) -> SumHom:
    """Inverse of an isomorphism, charge by charge."""
    charges = set(_charge_layout(f.cat, f.src)) | set(_charge_layout(f.cat, f.tgt))
    mats = {}
    for c in charges:
        M = charge_matrix(f, c)
        if M.shape[0] != M.shape[1]:
            raise ValueError("not an isomorphism")
        mats[c] = np.linalg.inv(M)
    return from_charge_matrices(f.cat, f.tgt, f.src, mats)


def condition_number(f: SumHom) -> float:
    charges = set(_charge_layout(f.cat, f.src)) | set(_charge_layout(f.cat, f.tgt))
    return max((float(np.linalg.cond(charge_matrix(f, c))) for c in charges), default=1.0)


def transpose(f: SumHom) -> SumHom:
    """``f^∨: B' → A'`` for ``f: A → B``, built with ``i_A`` and ``e_B``."""
    cat = f.cat
    A, B = f.src, f.tgt
    Ad, Bd = dual_obj(cat, A), dual_obj(cat, B)
    return compose_all(
        tensor(ev(cat, B), identity(cat, Ad)),
        tensor_all(identity(cat, Bd), f, identity(cat, Ad)),
        tensor(identity(cat, Bd), coev(cat, A)),
    )
