"""The doubled category ``C ⊠ C^rev`` and the tensor functor ``T`` back to ``C``.

Labels of the double are pairs ``(a, b)`` stored at index ``a*n + b``.  All
structure is the componentwise product; a multiplicity pair ``(i1, i2)`` is
flattened to ``i1*N2 + i2`` with ``N2`` the second factor's multiplicity.

``T`` sends a word of pairs ``((a1,b1),…,(ak,bk))`` to the unshuffled base
word ``(a1,…,ak,b1,…,bk)``.  With this convention ``T(f⊠g) = f⊗g`` and the
monoidal structure ``φ₂: T(X)⊗T(Y) → T(X⊗Y)`` braids the second half of
``T(X)`` past the first half of ``T(Y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import homspace as hs
from . import sums
from .category import Category, reverse_braiding
from .homspace import Hom
from .report import CheckReport, composite, timer


@dataclass
class DoubleInfo:
    left: Category
    right: Category

    @property
    def n2(self) -> int:
        return self.right.rank

    def pair(self, x: int) -> tuple[int, int]:
        return divmod(int(x), self.n2)

    def label(self, a: int, b: int) -> int:
        return int(a) * self.n2 + int(b)


def _flat(N1: np.ndarray, N2: np.ndarray, n2: int) -> np.ndarray:
    n1 = N1.shape[0]
    return np.einsum("abc,xyz->axbycz", N1, N2).reshape(n1 * n2, n1 * n2, n1 * n2)


def deligne(c1: Category, c2: Category, name: str | None = None, cmod8: float | None = None) -> Category:
    """Product category ``c1 ⊠ c2`` with product F, R, twists and dimensions."""
    n1, n2 = c1.rank, c2.rank
    N = _flat(c1.N, c2.N, n2)
    lab = lambda a, b: a * n2 + b  # noqa: E731

    F: dict[tuple[int, ...], complex] = {}
    by_labels2: dict[tuple[int, ...], list[tuple[tuple[int, ...], complex]]] = {}
    for k2, v2 in c2.F.items():
        by_labels2.setdefault(k2[:6], []).append((k2[6:], v2))
    for k1, v1 in c1.F.items():
        a1, b1, cc1, d1, e1, f1 = k1[:6]
        i1, j1, kk1, l1 = k1[6:]
        for labs2, entries in by_labels2.items():
            a2, b2, cc2, d2, e2, f2 = labs2
            m_i = c2.N[a2, b2, e2]
            m_j = c2.N[e2, cc2, d2]
            m_k = c2.N[b2, cc2, f2]
            m_l = c2.N[a2, f2, d2]
            for (i2, j2, kk2, l2), v2 in entries:
                F[(lab(a1, a2), lab(b1, b2), lab(cc1, cc2), lab(d1, d2), lab(e1, e2), lab(f1, f2),
                   i1 * m_i + i2, j1 * m_j + j2, kk1 * m_k + kk2, l1 * m_l + l2)] = v1 * v2
    R: dict[tuple[int, ...], complex] = {}
    for (a1, b1, cc1, i1, j1), v1 in c1.R.items():
        for (a2, b2, cc2, i2, j2), v2 in c2.R.items():
            m_i = c2.N[a2, b2, cc2]
            m_j = c2.N[b2, a2, cc2]
            R[(lab(a1, a2), lab(b1, b2), lab(cc1, cc2), i1 * m_i + i2, j1 * m_j + j2)] = v1 * v2

    labels = tuple(f"{x}|{y}" for x in c1.labels for y in c2.labels)
    dual = np.array([lab(int(c1.dual[a]), int(c2.dual[b])) for a in range(n1) for b in range(n2)], dtype=int)
    out = Category(
        name=name or f"{c1.name}*{c2.name}",
        labels=labels,
        unit=lab(c1.unit, c2.unit),
        dual=dual,
        N=N,
        F=F,
        R=R,
        dims=np.outer(c1.dims, c2.dims).reshape(-1),
        twists=np.outer(c1.twists, c2.twists).reshape(-1),
        fs=np.outer(c1.fs, c2.fs).reshape(-1),
        cmod8=(c1.cmod8 + c2.cmod8) % 8.0 if cmod8 is None else cmod8,
        comment="Deligne product",
    )
    out._cache["double"] = DoubleInfo(c1, c2)
    return out


def build_double(cat: Category) -> Category:
    """``C ⊠ C^rev``: braiding of the first factor, reversed braiding on the second, c = 0."""
    hit = cat._cache.get("double")
    if isinstance(hit, Category):
        return hit
    rev = cat._cache.get("reversed")
    if rev is None:
        rev = cat._cache["reversed"] = reverse_braiding(cat)
    d = deligne(cat, rev, name=f"{cat.name}-double", cmod8=0.0)
    d._cache["base"] = cat
    cat._cache["double"] = d
    return d


def info(dcat: Category) -> DoubleInfo:
    hit = dcat._cache.get("double")
    if not isinstance(hit, DoubleInfo):
        raise ValueError(f"{dcat.name} is not a Deligne product")
    return hit


def base_of(dcat: Category) -> Category:
    return dcat._cache.get("base") or info(dcat).left


def split_label(dcat: Category, x) -> tuple[int, int]:
    return info(dcat).pair(dcat.index(x))


def pair_label(dcat: Category, a: int, b: int) -> int:
    return info(dcat).label(a, b)


# ----- the functor T ------------------------------------------------------------


def t_word(dcat: Category, word: Sequence[int]) -> tuple[int, ...]:
    """``T`` on objects: ``((a1,b1),…,(ak,bk)) ↦ (a1,…,ak,b1,…,bk)``."""
    di = info(dcat)
    ps = [di.pair(x) for x in word]
    return tuple(a for a, _ in ps) + tuple(b for _, b in ps)


def t_object(dcat: Category, x) -> dict[int, int]:
    """Decomposition of ``T(x)`` for a double label into base simples with multiplicity."""
    a, b = split_label(dcat, x)
    cat = base_of(dcat)
    return {c: int(cat.N[a, b, c]) for c in cat.channels(a, b)}


def _split_tree(dcat: Category, word: Sequence[int], tree) -> tuple[tuple, tuple]:
    """A double fusion tree as the pair of base trees it is the product of."""
    di = info(dcat)
    c2 = di.right
    zs, mus = tree
    if not zs:
        return ((), ()), ((), ())
    p = [di.pair(z) for z in zs]
    w = [di.pair(x) for x in word]
    z1 = tuple(a for a, _ in p)
    z2 = tuple(b for _, b in p)
    m1, m2 = [0], [0]
    for k in range(1, len(zs)):
        m = c2.N[z2[k - 1], w[k][1], z2[k]]
        q, r = divmod(mus[k], m)
        m1.append(q)
        m2.append(r)
    return (z1, tuple(m1)), (z2, tuple(m2))


def _unit_hom(cat: Category, src, tgt, c: int, r: int, s: int) -> Hom:
    h = hs.zero(cat, src, tgt)
    h.blocks[c][r, s] = 1.0
    return h


def t_hom(dcat: Category, f: Hom) -> Hom:
    """``T`` on morphisms: each double matrix unit becomes a tensor product of base matrix units."""
    cat = base_of(dcat)
    di = info(dcat)
    S1 = tuple(di.pair(x)[0] for x in f.src)
    S2 = tuple(di.pair(x)[1] for x in f.src)
    T1 = tuple(di.pair(x)[0] for x in f.tgt)
    T2 = tuple(di.pair(x)[1] for x in f.tgt)
    out = hs.zero(cat, S1 + S2, T1 + T2)
    # base tree indices
    idx = {}
    for w in (S1, S2, T1, T2):
        for c in hs.charges(cat, w):
            idx[(w, c)] = hs.tree_index(cat, w, c)
    for x, B in f.blocks.items():
        rows = hs.trees(dcat, f.tgt, x)
        cols = hs.trees(dcat, f.src, x)
        c1, c2 = di.pair(x)
        for r, s in zip(*np.nonzero(B)):
            (tr1, tr2) = _split_tree(dcat, f.tgt, rows[r])
            (sc1, sc2) = _split_tree(dcat, f.src, cols[s])
            u = _unit_hom(cat, S1, T1, c1, idx[(T1, c1)][tr1], idx[(S1, c1)][sc1])
            v = _unit_hom(cat, S2, T2, c2, idx[(T2, c2)][tr2], idx[(S2, c2)][sc2])
            out = out + hs.tensor(u, v) * B[r, s]
    return out


def phi2_word(dcat: Category, X: Sequence[int], Y: Sequence[int], inverse: bool = False) -> Hom:
    """``φ₂: T(X)⊗T(Y) → T(X⊗Y)`` on words; braids ``X₂`` past ``Y₁`` with ``c⁻¹_{Y₁,X₂}``.

    With ``inverse=True`` returns the other candidate, built from ``c_{X₂,Y₁}``.
    """
    cat = base_of(dcat)
    di = info(dcat)
    X1 = tuple(di.pair(x)[0] for x in X)
    X2 = tuple(di.pair(x)[1] for x in X)
    Y1 = tuple(di.pair(y)[0] for y in Y)
    Y2 = tuple(di.pair(y)[1] for y in Y)
    mid = hs.braid(cat, X2, Y1) if inverse else hs.braid(cat, Y1, X2, inverse=True)
    return hs.embed(mid, X1, Y2)


def t_sum(dcat: Category, f: sums.SumHom) -> sums.SumHom:
    cat = base_of(dcat)
    return sums.SumHom(cat, tuple(t_word(dcat, w) for w in f.src), tuple(t_word(dcat, w) for w in f.tgt),
                       {k: t_hom(dcat, h) for k, h in f.blocks.items()})


def phi2_sum(dcat: Category, X: sums.Obj, Y: sums.Obj, inverse: bool = False) -> sums.SumHom:
    """``φ₂`` between ``T(X)⊗T(Y)`` and ``T(X⊗Y)`` summand by summand."""
    cat = base_of(dcat)
    src = sums.tensor_obj(tuple(t_word(dcat, w) for w in X), tuple(t_word(dcat, w) for w in Y))
    tgt = tuple(t_word(dcat, w) for w in sums.tensor_obj(X, Y))
    ny = len(Y)
    return sums.SumHom(cat, src, tgt, {
        (i * ny + j, i * ny + j): phi2_word(dcat, X[i], Y[j], inverse)
        for i in range(len(X)) for j in range(ny)
    })


# ----- checks -------------------------------------------------------------------


def check_s_factorization(dcat: Category, tol: float = 1e-9) -> CheckReport:
    """``S_double = S ⊗ S'`` with ``S'`` the base S-matrix in the reversed category."""
    from .modular import s_matrix

    di = info(dcat)
    with timer() as t:
        r = float(np.max(np.abs(s_matrix(dcat) - np.kron(s_matrix(di.left), s_matrix(di.right)))))
    return CheckReport("double-S-factorization", r, tol, ms=t[0])


def _random_hom(dcat: Category, src, tgt, rng: np.random.Generator) -> Hom:
    n = hs.hom_dim(dcat, src, tgt)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return hs.from_vector(dcat, src, tgt, v)


def check_t_functor(dcat: Category, tol: float = 1e-10, samples: int = 6, seed: int = 0) -> CheckReport:
    """``T(f∘g) = T(f)∘T(g)``, naturality ``φ₂∘(T f⊗T g) = T(f⊗g)∘φ₂`` and the φ₂ associativity square."""
    rng = np.random.default_rng(seed)
    n = dcat.rank
    r_comp = r_nat = r_assoc = 0.0
    with timer() as t:
        for _ in range(samples):
            x, y, z = (int(v) for v in rng.integers(0, n, 3))
            chans = dcat.channels(x, y)
            c = chans[int(rng.integers(len(chans)))]
            f = _random_hom(dcat, (x, y), (c,), rng)
            g = _random_hom(dcat, (x, y), (x, y), rng)
            r_comp = max(r_comp, t_hom(dcat, f @ g).dist(t_hom(dcat, f) @ t_hom(dcat, g)))
            h = _random_hom(dcat, (z,), (z,), rng)
            lhs = phi2_word(dcat, (c,), (z,)) @ hs.tensor(t_hom(dcat, f), t_hom(dcat, h))
            rhs = t_hom(dcat, hs.tensor(f, h)) @ phi2_word(dcat, (x, y), (z,))
            r_nat = max(r_nat, lhs.dist(rhs))
            # (X⊗Y)⊗Z versus X⊗(Y⊗Z)
            X, Y, Z = (x,), (y,), (z,)
            TX, TY, TZ = (t_word(dcat, w) for w in (X, Y, Z))
            a = phi2_word(dcat, X + Y, Z) @ hs.tensor(phi2_word(dcat, X, Y), hs.identity(base_of(dcat), TZ))
            b = phi2_word(dcat, X, Y + Z) @ hs.tensor(hs.identity(base_of(dcat), TX), phi2_word(dcat, Y, Z))
            r_assoc = max(r_assoc, a.dist(b))
    return composite("t-functor", [
        CheckReport("T-composition", r_comp, tol),
        CheckReport("phi2-naturality", r_nat, tol),
        CheckReport("phi2-associativity", r_assoc, tol),
    ], tol, t[0])


def double_summary(cat: Category) -> dict:
    d = build_double(cat)
    diag = [pair_label(d, a, int(cat.dual[a])) for a in range(cat.rank)]
    return {
        "base": cat.name,
        "labels": list(d.labels),
        "rank": d.rank,
        "Dsq": float(np.sum(d.dims**2)),
        "cmod8": d.cmod8,
        "diagonal_twists": {d.labels[x]: [float(d.twists[x].real), float(d.twists[x].imag)] for x in diag},
    }

