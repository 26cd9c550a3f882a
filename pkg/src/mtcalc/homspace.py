"""Morphisms between tensor words in left-associated fusion-tree bases.

A word is a tuple of simple labels.  For a word ``w`` and a charge ``c`` the
basis of ``hom(w, c)`` consists of left-associated trees

    e_T = e^{z_n}_{z_{n-1} w_n; μ_n} ∘ ... ∘ (e^{z_2}_{w_1 w_2; μ_2} ⊗ id ...)

stored as ``(zs, mus)`` with ``zs[0] = w[0]``, ``zs[-1] = c`` and a dummy
``mus[0] = 0``.  A morphism ``g: S → T`` is the family of matrices with
``e_T ∘ g = Σ_S M[T, S] e_S`` per charge, so composition is matrix product.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .category import Category, InputError

Word = tuple[int, ...]
Tree = tuple[tuple[int, ...], tuple[int, ...]]


def as_word(cat: Category, w: Iterable[int | str]) -> Word:
    return tuple(cat.index(x) for x in w)


def trees(cat: Category, word: Sequence[int], c: int) -> list[Tree]:
    """Left-associated fusion trees of ``word`` with total charge ``c``."""
    word = tuple(word)
    key = ("trees", word, c)
    hit = cat._cache.get(key)
    if hit is not None:
        return hit
    out: list[Tree] = []
    if not word:
        if c == cat.unit:
            out = [((), ())]
    else:
        partial: list[Tree] = [((word[0],), (0,))]
        for w in word[1:]:
            nxt = []
            for zs, mus in partial:
                z = zs[-1]
                for y in np.nonzero(cat.N[z, w])[0]:
                    for mu in range(cat.N[z, w, y]):
                        nxt.append((zs + (int(y),), mus + (mu,)))
            partial = nxt
        out = [t for t in partial if t[0][-1] == c]
        out.sort(key=lambda t: (t[0][1:-1], t[1]))
    cat._cache[key] = out
    return out


def tree_index(cat: Category, word: Sequence[int], c: int) -> dict[Tree, int]:
    key = ("tindex", tuple(word), c)
    hit = cat._cache.get(key)
    if hit is None:
        hit = {t: i for i, t in enumerate(trees(cat, word, c))}
        cat._cache[key] = hit
    return hit


def charges(cat: Category, word: Sequence[int]) -> list[int]:
    return [c for c in range(cat.rank) if trees(cat, word, c)]


def hom_dim(cat: Category, src: Sequence[int], tgt: Sequence[int]) -> int:
    return sum(len(trees(cat, src, c)) * len(trees(cat, tgt, c)) for c in range(cat.rank))


@dataclass(eq=False)
class Hom:
    """A morphism ``src → tgt`` between words, stored blockwise by charge."""

    cat: Category
    src: Word
    tgt: Word
    blocks: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.src = tuple(self.src)
        self.tgt = tuple(self.tgt)
        for c in range(self.cat.rank):
            shape = (len(trees(self.cat, self.tgt, c)), len(trees(self.cat, self.src, c)))
            if shape[0] and shape[1]:
                b = self.blocks.get(c)
                if b is None:
                    self.blocks[c] = np.zeros(shape, dtype=complex)
                else:
                    b = np.asarray(b, dtype=complex)
                    if b.shape != shape:
                        raise ValueError(f"block {c} has shape {b.shape}, expected {shape}")
                    self.blocks[c] = b
            else:
                self.blocks.pop(c, None)

    # arithmetic ------------------------------------------------------------

    def _same_type(self, other: Hom) -> None:
        if self.src != other.src or self.tgt != other.tgt:
            raise ValueError(f"type mismatch: {self.src}→{self.tgt} vs {other.src}→{other.tgt}")

    def __add__(self, other: Hom) -> Hom:
        self._same_type(other)
        return Hom(self.cat, self.src, self.tgt, {c: b + other.blocks[c] for c, b in self.blocks.items()})

    def __sub__(self, other: Hom) -> Hom:
        self._same_type(other)
        return Hom(self.cat, self.src, self.tgt, {c: b - other.blocks[c] for c, b in self.blocks.items()})

    def __neg__(self) -> Hom:
        return self * -1.0

    def __mul__(self, s: complex) -> Hom:
        return Hom(self.cat, self.src, self.tgt, {c: b * s for c, b in self.blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, s: complex) -> Hom:
        return self * (1.0 / s)

    def __matmul__(self, other: Hom) -> Hom:
        """Composition ``self ∘ other``."""
        if other.tgt != self.src:
            raise ValueError(f"cannot compose {self.src}→{self.tgt} after {other.src}→{other.tgt}")
        return Hom(
            self.cat, other.src, self.tgt,
            {c: self.blocks[c] @ other.blocks[c] for c in self.blocks if c in other.blocks},
        )

    def norm(self) -> float:
        """Largest absolute coefficient."""
        return max((float(np.max(np.abs(b))) for b in self.blocks.values() if b.size), default=0.0)

    def dist(self, other: Hom) -> float:
        return (self - other).norm()

    def scalar(self) -> complex:
        """The number represented by an endomorphism of the empty word."""
        if self.src or self.tgt:
            raise ValueError("scalar() needs a morphism between empty words")
        return complex(self.blocks[self.cat.unit][0, 0])

    def vector(self) -> np.ndarray:
        """All coefficients concatenated in charge order."""
        parts = [self.blocks[c].ravel() for c in sorted(self.blocks)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def __repr__(self) -> str:
        L = self.cat.labels
        return f"Hom({'⊗'.join(L[x] for x in self.src) or '1'} → {'⊗'.join(L[x] for x in self.tgt) or '1'})"


# ----- constructors ----------------------------------------------------------


def zero(cat: Category, src: Sequence[int], tgt: Sequence[int]) -> Hom:
    return Hom(cat, tuple(src), tuple(tgt))


def identity(cat: Category, word: Sequence[int]) -> Hom:
    word = tuple(word)
    return Hom(cat, word, word, {c: np.eye(len(trees(cat, word, c))) for c in charges(cat, word)})


def from_vector(cat: Category, src: Sequence[int], tgt: Sequence[int], vec: np.ndarray) -> Hom:
    h = zero(cat, src, tgt)
    pos = 0
    for c in sorted(h.blocks):
        b = h.blocks[c]
        h.blocks[c] = np.asarray(vec[pos:pos + b.size], dtype=complex).reshape(b.shape)
        pos += b.size
    return h


def vertex(cat: Category, a: int, b: int, c: int, mu: int = 0) -> Hom:
    """The basis vertex ``e^c_{ab;μ}: a⊗b → c``."""
    if not mu < cat.N[a, b, c]:
        raise InputError(f"no vertex {cat.label_names((a, b, c))} with index {mu}")
    h = zero(cat, (a, b), (c,))
    h.blocks[c][0, mu] = 1.0
    return h


def covertex(cat: Category, a: int, b: int, c: int, mu: int = 0) -> Hom:
    """The dual vertex ``f^{ab}_{c;μ}: c → a⊗b`` with ``e^c_{ab;ν} ∘ f^{ab}_{c;μ} = δ_{μν}``."""
    if not mu < cat.N[a, b, c]:
        raise InputError(f"no vertex {cat.label_names((a, b, c))} with index {mu}")
    h = zero(cat, (c,), (a, b))
    h.blocks[c][mu, 0] = 1.0
    return h


def inverse(h: Hom) -> Hom:
    """Inverse of an isomorphism (every block square and invertible)."""
    out = {}
    for c, b in h.blocks.items():
        if b.shape[0] != b.shape[1]:
            raise ValueError("not an isomorphism")
        out[c] = np.linalg.inv(b)
    if set(charges(h.cat, h.src)) != set(out):
        raise ValueError("not an isomorphism")
    return Hom(h.cat, h.tgt, h.src, out)


def twist(cat: Category, word: Sequence[int], power: int = 1) -> Hom:
    """θ on a word acts on charge c by θ_c."""
    word = tuple(word)
    th = cat.twists
    return Hom(cat, word, word, {c: np.eye(len(trees(cat, word, c))) * th[c] ** power for c in charges(cat, word)})


def crossing(cat: Category, a: int, b: int, inverse: bool = False) -> Hom:
    """``c_{a,b}: a⊗b → b⊗a``, or ``c_{a,b}⁻¹: b⊗a → a⊗b``."""
    if not inverse:
        return Hom(cat, (a, b), (b, a), {c: cat.R_block(a, b, c).T for c in cat.channels(a, b)})
    return Hom(cat, (b, a), (a, b), {c: np.linalg.inv(cat.R_block(a, b, c).T) for c in cat.channels(a, b)})


def braid(cat: Category, X: Sequence[int], Y: Sequence[int], inverse: bool = False) -> Hom:
    """``c_{X,Y}: X⊗Y → Y⊗X`` built from elementary crossings; or its inverse."""
    X, Y = tuple(X), tuple(Y)
    word = list(X + Y)
    steps: list[tuple[int, int, int]] = []  # (position, x, y) with x, y adjacent at position
    m = len(X)
    for j in range(len(Y)):
        for i in range(m - 1, -1, -1):
            pos = j + i
            steps.append((pos, word[pos], word[pos + 1]))
            word[pos], word[pos + 1] = word[pos + 1], word[pos]
    if not inverse:
        out = identity(cat, X + Y)
        cur = list(X + Y)
        for pos, x, y in steps:
            out = embed(crossing(cat, x, y), cur[:pos], cur[pos + 2:]) @ out
            cur[pos], cur[pos + 1] = cur[pos + 1], cur[pos]
        return out
    out = identity(cat, Y + X)
    cur = list(Y + X)
    for pos, x, y in reversed(steps):
        out = embed(crossing(cat, x, y, inverse=True), cur[:pos], cur[pos + 2:]) @ out
        cur[pos], cur[pos + 1] = cur[pos + 1], cur[pos]
    return out


# ----- duality maps ------------------------------------------------------------


def _ee_entries(cat: Category, a: int) -> tuple[complex, complex]:
    """``F^{a a' a}_a[e,e]`` and the corresponding inverse entry."""
    ab, u = int(cat.dual[a]), cat.unit
    rows, cols, M = cat.F_block(a, ab, a, a)
    r_, c_, Minv = cat.F_inv_block(a, ab, a, a)
    return (
        complex(M[rows.index((u, 0, 0)), cols.index((u, 0, 0))]),
        complex(Minv[r_.index((u, 0, 0)), c_.index((u, 0, 0))]),
    )


def ev(cat: Category, a: int) -> Hom:
    """``e_a: a'⊗a → 1``, the unit-normalised vertex."""
    h = zero(cat, (int(cat.dual[a]), a), ())
    h.blocks[cat.unit][0, 0] = 1.0
    return h


def coev(cat: Category, a: int) -> Hom:
    """``i_a: 1 → a⊗a'``, normalised by the zigzag with :func:`ev`."""
    _, g = _ee_entries(cat, a)
    h = zero(cat, (), (a, int(cat.dual[a])))
    h.blocks[cat.unit][0, 0] = 1.0 / g
    return h


def ev_right(cat: Category, a: int) -> Hom:
    """``e'_a: a⊗a' → 1``."""
    f, _ = _ee_entries(cat, a)
    h = zero(cat, (a, int(cat.dual[a])), ())
    h.blocks[cat.unit][0, 0] = 1.0 / (cat.dims[a] * f)
    return h


def coev_right(cat: Category, a: int) -> Hom:
    """``i'_a: 1 → a'⊗a`` with ``e_a ∘ i'_a = dim a``."""
    h = zero(cat, (), (int(cat.dual[a]), a))
    h.blocks[cat.unit][0, 0] = cat.dims[a]
    return h


# ----- tensoring with identities ---------------------------------------------


def _split(tree: Tree, p: int, m: int, unit: int):
    """Cut a tree on P+S+Q into (P part, u, S part, v, Q part)."""
    zs, mus = tree
    u = zs[p - 1] if p else unit
    s_part = (zs[p:p + m], mus[p:p + m])
    v = zs[p + m - 1] if m else u
    return (zs[:p], mus[:p]), u, s_part, v, (zs[p + m:], mus[p + m:])


def _amatrix(cat: Category, u: int, word: Word, v: int):
    """Change of basis on ``u⊗s_1⊗...⊗s_m → v``.

    Rows are left-associated trees starting from the leaf ``u`` (stored as the
    S-part ``(zs, mus)``); columns are ``(c, T, k)`` meaning
    ``e^v_{uc;k} ∘ (id_u ⊗ e_T)`` with ``T`` a tree on the word.
    """
    key = ("A", u, word, v)
    hit = cat._cache.get(key)
    if hit is not None:
        return hit
    m = len(word)
    if m == 0:
        out = ([((), ())], [(cat.unit, ((), ()), 0)], np.eye(1)) if u == v else ([], [], np.zeros((0, 0)))
    elif m == 1:
        s = word[0]
        rows = [((v,), (nu,)) for nu in range(cat.N[u, s, v])]
        cols = [(s, ((s,), (0,)), nu) for nu in range(cat.N[u, s, v])]
        out = (rows, cols, np.eye(len(rows)))
    else:
        s = word[-1]
        head = word[:-1]
        cols = []
        for f in range(cat.rank):
            lam_n = cat.N[u, f, v]
            if not lam_n:
                continue
            for T in trees(cat, word, f):
                for lam in range(lam_n):
                    cols.append((f, T, lam))
        col_idx = {c: i for i, c in enumerate(cols)}
        rows = []
        data = []
        for z in range(cat.rank):
            nu_n = cat.N[z, s, v]
            if not nu_n:
                continue
            prow, pcol, pM = _amatrix(cat, u, head, z)
            if not prow:
                continue
            for r, (zs, mus) in enumerate(prow):
                for nu in range(nu_n):
                    rows.append((zs + (v,), mus + (nu,)))
                    vec = np.zeros(len(cols), dtype=complex)
                    for q, (c2, T2, k2) in enumerate(pcol):
                        coef = pM[r, q]
                        if coef == 0:
                            continue
                        frows, fcols, FM = cat.F_block(u, c2, s, v)
                        ridx = frows.index((z, k2, nu))
                        for t, (f, ka, la) in enumerate(fcols):
                            val = FM[ridx, t]
                            if val == 0:
                                continue
                            T = (T2[0] + (f,), T2[1] + (ka,))
                            vec[col_idx[(f, T, la)]] += coef * val
                    data.append(vec)
        M = np.array(data, dtype=complex).reshape(len(rows), len(cols))
        order = sorted(range(len(rows)), key=lambda i: (rows[i][0], rows[i][1]))
        rows = [rows[i] for i in order]
        M = M[order]
        out = (rows, cols, M)
    cat._cache[key] = out
    return out


def _amatrix_inv(cat: Category, u: int, word: Word, v: int) -> np.ndarray:
    key = ("Ainv", u, word, v)
    hit = cat._cache.get(key)
    if hit is None:
        M = _amatrix(cat, u, word, v)[2]
        hit = np.linalg.inv(M) if M.size else M.copy()
        cat._cache[key] = hit
    return hit


def embed(g: Hom, P: Sequence[int] = (), Q: Sequence[int] = ()) -> Hom:
    """``id_P ⊗ g ⊗ id_Q``."""
    cat = g.cat
    P, Q = tuple(P), tuple(Q)
    if not P and not Q:
        return g
    S, T = g.src, g.tgt
    src, tgt = P + S + Q, P + T + Q
    p, ms, mt = len(P), len(S), len(T)
    unit = cat.unit
    middle: dict[tuple[int, int], tuple[dict, dict, np.ndarray]] = {}

    def mid(u: int, v: int):
        hit = middle.get((u, v))
        if hit is not None:
            return hit
        rS, cS, AS = _amatrix(cat, u, S, v)
        rT, cT, AT = _amatrix(cat, u, T, v)
        G = np.zeros((len(cT), len(cS)), dtype=complex)
        if cS and cT:
            iS = {c: i for i, c in enumerate(cS)}
            for a, (c, tT, k) in enumerate(cT):
                blk = g.blocks.get(c)
                if blk is None:
                    continue
                tiT = tree_index(cat, T, c)[tT] if T else 0
                for tS, tiS in (tree_index(cat, S, c).items() if S else [(((), ()), 0)]):
                    b = iS.get((c, tS, k))
                    if b is not None:
                        G[a, b] = blk[tiT, tiS]
        M = AT @ G @ _amatrix_inv(cat, u, S, v) if AS.size and AT.size else np.zeros((len(rT), len(rS)))
        hit = ({r: i for i, r in enumerate(rT)}, {r: i for i, r in enumerate(rS)}, M)
        middle[(u, v)] = hit
        return hit

    blocks = {}
    for c in range(cat.rank):
        ts = trees(cat, src, c)
        tt = trees(cat, tgt, c)
        if not ts or not tt:
            continue
        B = np.zeros((len(tt), len(ts)), dtype=complex)
        groups: dict[tuple, list[tuple[int, tuple]]] = {}
        for j, tr in enumerate(ts):
            pp, u, sp, v, qp = _split(tr, p, ms, unit)
            groups.setdefault((pp, u, v, qp), []).append((j, sp))
        for i, tr in enumerate(tt):
            pp, u, tp, v, qp = _split(tr, p, mt, unit)
            cands = groups.get((pp, u, v, qp))
            if not cands:
                continue
            rT, rS, M = mid(u, v)
            ri = rT[tp]
            for j, sp in cands:
                B[i, j] = M[ri, rS[sp]]
        blocks[c] = B
    return Hom(cat, src, tgt, blocks)


def tensor(f: Hom, g: Hom) -> Hom:
    """``f ⊗ g = (f ⊗ id) ∘ (id ⊗ g)``."""
    return embed(f, (), g.tgt) @ embed(g, f.src, ())


def tensor_all(*hs: Hom) -> Hom:
    out = hs[0]
    for h in hs[1:]:
        out = tensor(out, h)
    return out


def compose_all(*hs: Hom) -> Hom:
    """``hs[0] ∘ hs[1] ∘ ...``."""
    out = hs[-1]
    for h in reversed(hs[:-1]):
        out = h @ out
    return out


def word_hom_basis(cat: Category, src: Sequence[int], tgt: Sequence[int]) -> list[Hom]:
    """The standard basis ``f_T ∘ e_S`` of ``hom(src, tgt)``."""
    base = zero(cat, src, tgt)
    out = []
    for c in sorted(base.blocks):
        r, s = base.blocks[c].shape
        for i, j in itertools.product(range(r), range(s)):
            h = zero(cat, src, tgt)
            h.blocks[c][i, j] = 1.0
            out.append(h)
    return out
