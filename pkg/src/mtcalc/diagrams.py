"""String diagrams over a category and the operators built from them.

Diagrams are small expression trees of generators combined with
:class:`Compose` (``Compose(f, g)`` means ``f ∘ g``), :class:`Tensor` and
:class:`Trace`.  :func:`eval_diagram` turns them into :class:`~mtcalc.homspace.Hom`
matrices.

Duality maps (with ``a'`` the dual label):

* ``Cap(a)  = e_a : a'⊗a → 1`` with coefficient 1 on the unit channel,
* ``Cup(a)  = i_a : 1 → a⊗a'`` fixed by the zigzag with ``e_a``,
* ``CupL(a) = i'_a: 1 → a'⊗a`` with coefficient ``dim a``,
* ``CapL(a) = e'_a: a⊗a' → 1`` fixed by the zigzag with ``i'_a``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import homspace as hs
from .category import Category, InputError
from .homspace import Hom
from .report import CheckReport, composite, timer


class DiagramTypeError(InputError):
    """Boundary words of a composite do not match."""


# ----- expression tree --------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    kind: str
    args: tuple = ()
    hom: Any = None

    def __repr__(self) -> str:
        if self.kind == "hom":
            return f"<{self.hom!r}>"
        return f"({self.kind} {' '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Compose:
    parts: tuple

    def __repr__(self) -> str:
        return f"(compose {' '.join(map(repr, self.parts))})"


@dataclass(frozen=True)
class Tensor:
    parts: tuple

    def __repr__(self) -> str:
        return f"(tensor {' '.join(map(repr, self.parts))})"


@dataclass(frozen=True)
class Trace:
    body: Any

    def __repr__(self) -> str:
        return f"(trace {self.body!r})"


def Id(*word) -> Gen:
    return Gen("id", tuple(word))


def Cup(a) -> Gen:
    return Gen("cup", (a,))


def Cap(a) -> Gen:
    return Gen("cap", (a,))


def CupL(a) -> Gen:
    return Gen("cupL", (a,))


def CapL(a) -> Gen:
    return Gen("capL", (a,))


def Braid(a, b) -> Gen:
    return Gen("braid", (a, b))


def BraidInv(a, b) -> Gen:
    """The reverse braiding ``a⊗b → b⊗a``, i.e. ``(c_{b,a})⁻¹``."""
    return Gen("braidinv", (a, b))


def Twist(a) -> Gen:
    return Gen("twist", (a,))


def TwistInv(a) -> Gen:
    return Gen("twistinv", (a,))


def Vertex(a, b, c, i: int = 0) -> Gen:
    return Gen("basis", (a, b, c, i))


def DualVertex(a, b, c, j: int = 0) -> Gen:
    return Gen("dualbasis", (a, b, c, j))


def Morph(h: Hom) -> Gen:
    return Gen("hom", (), h)


def C(*parts) -> Compose:
    return Compose(tuple(parts))


def T(*parts) -> Tensor:
    return Tensor(tuple(parts))


# ----- evaluation -------------------------------------------------------------


def dual_word(cat: Category, word: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(cat.dual[x]) for x in reversed(tuple(word)))


def _gen_hom(cat: Category, g: Gen) -> Hom:
    k = g.kind
    if k == "hom":
        if g.hom.cat is not cat:
            raise DiagramTypeError(f"{g!r} belongs to another category")
        return g.hom
    ix = [cat.index(x) if i < 3 or k not in ("basis", "dualbasis") else int(x) for i, x in enumerate(g.args)]
    arity = {"cup": 1, "cap": 1, "cupL": 1, "capL": 1, "braid": 2, "braidinv": 2,
             "twist": 1, "twistinv": 1, "basis": 4, "dualbasis": 4}
    if k == "id":
        return hs.identity(cat, ix)
    if k not in arity:
        raise DiagramTypeError(f"unknown generator {k!r}")
    if k in ("basis", "dualbasis"):
        if len(ix) == 3:
            ix.append(0)
        if len(ix) != 4:
            raise DiagramTypeError(f"{k} takes labels a b c and an optional index")
    elif len(ix) != arity[k]:
        raise DiagramTypeError(f"{k} takes {arity[k]} label(s), got {len(ix)}")
    if k == "cup":
        return hs.coev(cat, ix[0])
    if k == "cap":
        return hs.ev(cat, ix[0])
    if k == "cupL":
        return hs.coev_right(cat, ix[0])
    if k == "capL":
        return hs.ev_right(cat, ix[0])
    if k == "braid":
        return hs.crossing(cat, ix[0], ix[1])
    if k == "braidinv":
        return hs.crossing(cat, ix[1], ix[0], inverse=True)
    if k == "twist":
        return hs.twist(cat, (ix[0],))
    if k == "twistinv":
        return hs.twist(cat, (ix[0],), power=-1)
    if k == "basis":
        return hs.vertex(cat, *ix)
    return hs.covertex(cat, *ix)


def eval_diagram(cat: Category, d: Any) -> Hom:
    """Evaluate a diagram to its hom-space matrix.

    Closed diagrams give a morphism between empty words; use ``.scalar()``.
    """
    if isinstance(d, Hom):
        return d
    if isinstance(d, Gen):
        return _gen_hom(cat, d)
    if isinstance(d, Compose):
        if not d.parts:
            raise DiagramTypeError("empty composite")
        hs_ = [eval_diagram(cat, p) for p in d.parts]
        out = hs_[-1]
        for p, h in zip(reversed(d.parts[:-1]), reversed(hs_[:-1])):
            if h.src != out.tgt:
                raise DiagramTypeError(
                    f"cannot compose {p!r} (source {cat.label_names(h.src)}) after a map with target "
                    f"{cat.label_names(out.tgt)}"
                )
            out = h @ out
        return out
    if isinstance(d, Tensor):
        if not d.parts:
            return hs.identity(cat, ())
        return hs.tensor_all(*[eval_diagram(cat, p) for p in d.parts])
    if isinstance(d, Trace):
        return quantum_trace(eval_diagram(cat, d.body))
    raise DiagramTypeError(f"not a diagram: {d!r}")


def word_coev(cat: Category, word: Sequence[int]) -> Hom:
    """Nested cups ``1 → X ⊗ X'``."""
    word = tuple(word)
    # outside in: i_{x1 x2} = (id_{x1} ⊗ i_{x2} ⊗ id_{x1'}) ∘ i_{x1}
    out = hs.identity(cat, ())
    left: tuple[int, ...] = ()
    for x in word:
        right = dual_word(cat, left)
        out = hs.embed(hs.coev(cat, x), left, right) @ out
        left = left + (x,)
    return out


def word_ev_right(cat: Category, word: Sequence[int]) -> Hom:
    """Nested caps ``X ⊗ X' → 1``."""
    word = tuple(word)
    out = hs.identity(cat, word + dual_word(cat, word))
    cur = word
    while cur:
        x = cur[-1]
        left = cur[:-1]
        out = hs.embed(hs.ev_right(cat, x), left, dual_word(cat, left)) @ out
        cur = left
    return out


def quantum_trace(f: Hom) -> Hom:
    """Right trace ``e'_X ∘ (f ⊗ id_{X'}) ∘ i_X`` of an endomorphism."""
    if f.src != f.tgt:
        raise DiagramTypeError("trace needs an endomorphism")
    cat = f.cat
    X = f.src
    Xd = dual_word(cat, X)
    return word_ev_right(cat, X) @ hs.embed(f, (), Xd) @ word_coev(cat, X)


# ----- operators on three-point hom spaces --------------------------------------


def _legs(f: Hom) -> tuple[int, int, int]:
    if len(f.src) != 2 or len(f.tgt) != 1:
        raise DiagramTypeError(f"expected a morphism a⊗b → c, got {f!r}")
    return f.src[0], f.src[1], f.tgt[0]


def omega0(cat: Category, f: Hom) -> Hom:
    """``hom(a⊗b, c) → hom(b⊗a, c)``: precompose with the inverse braiding."""
    a, b, _ = _legs(f)
    return eval_diagram(cat, C(Morph(f), BraidInv(b, a)))


def omega_minus1(cat: Category, f: Hom) -> Hom:
    """Inverse of :func:`omega0`: precompose with ``c_{b,a}``."""
    a, b, _ = _legs(f)
    return eval_diagram(cat, C(Morph(f), Braid(b, a)))


def sigma123(cat: Category, f: Hom) -> Hom:
    """Planar rotation ``hom(a1⊗a2, a3) → hom(a3'⊗a1, a2')``."""
    a1, a2, a3 = _legs(f)
    d = cat.dual
    return eval_diagram(cat, C(
        T(Cap(a3), Id(d[a2])),
        T(Id(d[a3]), Morph(f), Id(d[a2])),
        T(Id(d[a3], a1), Cup(a2)),
    ))


def sigma132(cat: Category, f: Hom) -> Hom:
    """Planar rotation ``hom(a1⊗a2, a3) → hom(a2⊗a3', a1')``, inverse of :func:`sigma123`."""
    a1, a2, a3 = _legs(f)
    d = cat.dual
    return eval_diagram(cat, C(
        T(Id(d[a1]), CapL(a3)),
        T(Id(d[a1]), Morph(f), Id(d[a3])),
        T(CupL(a1), Id(a2, d[a3])),
    ))


def _bent(cat: Category, f: Hom, twist_first: bool) -> Hom:
    a1, a2, a3 = _legs(f)
    d = cat.dual
    bottom = T(Twist(a1) if twist_first else Id(a1), Cup(a2), TwistInv(d[a3]))
    return eval_diagram(cat, C(
        T(CapL(a3), Id(d[a2])),
        T(Id(a3), Braid(d[a2], d[a3])),
        T(Morph(f), Id(d[a2], d[a3])),
        bottom,
    ))


def tilde_A0(cat: Category, f: Hom) -> Hom:
    """``hom(a1⊗a2, a3) → hom(a1⊗a3', a2')``: bend a2 up, a3 down, one crossing."""
    return _bent(cat, f, twist_first=False)


def hat_A0(cat: Category, f: Hom) -> Hom:
    """Inverse of :func:`tilde_A0`; the same bent diagram with a twist on the first leg."""
    return _bent(cat, f, twist_first=True)


def hom_basis3(cat: Category, a1: int, a2: int, a3: int) -> list[Hom]:
    return [hs.vertex(cat, a1, a2, a3, i) for i in range(cat.N[a1, a2, a3])]


def operator_matrix(cat: Category, op, a1: int, a2: int, a3: int) -> np.ndarray:
    """Matrix of a linear operator on ``hom(a1⊗a2, a3)`` in the vertex basis."""
    cols = []
    for f in hom_basis3(cat, a1, a2, a3):
        g = op(cat, f)
        _, _, c = _legs(g)
        cols.append(g.blocks[c][0] if c in g.blocks else np.zeros(0))
    return np.array(cols, dtype=complex).T if cols else np.zeros((0, 0), dtype=complex)


# ----- named checks -------------------------------------------------------------


def pivotal_table(cat: Category) -> list[dict]:
    """Coefficients of every cup and cap on the unit channel, per label."""
    rows = []
    for a in range(cat.rank):
        f, g = hs._ee_entries(cat, a)
        rows.append({
            "label": cat.labels[a],
            "dual": cat.labels[int(cat.dual[a])],
            "cap": 1.0,
            "cup": complex(1.0 / g),
            "cupL": float(cat.dims[a]),
            "capL": complex(1.0 / (cat.dims[a] * f)),
            "fs": int(cat.fs[a]),
            "dim": float(cat.dims[a]),
        })
    return rows


def check_biorthogonality(cat: Category, tol: float = 1e-9) -> CheckReport:
    """``e^c_{ab;i} ∘ f^{ab}_{c;j} = δ_{ij} id_c`` for every admissible triple."""
    with timer() as t:
        res, wit = 0.0, None
        for a, b in itertools.product(range(cat.rank), repeat=2):
            for c in cat.channels(a, b):
                n = cat.N[a, b, c]
                for i, j in itertools.product(range(n), repeat=2):
                    h = hs.vertex(cat, a, b, c, i) @ hs.covertex(cat, a, b, c, j)
                    r = h.dist(hs.identity(cat, (c,)) * float(i == j))
                    if r > res:
                        res, wit = r, cat.label_names((a, b, c)) + [i, j]
    return CheckReport("biorthogonality", res, tol, wit, t[0])


def resolve_identity(cat: Category, a, b, tol: float = 1e-9) -> CheckReport:
    """``Σ_{c,i} f^{ab}_{c;i} ∘ e^c_{ab;i} = id_{a⊗b}``."""
    a, b = cat.index(a), cat.index(b)
    with timer() as t:
        acc = hs.zero(cat, (a, b), (a, b))
        for c in cat.channels(a, b):
            for i in range(cat.N[a, b, c]):
                acc = acc + hs.covertex(cat, a, b, c, i) @ hs.vertex(cat, a, b, c, i)
        r = acc.dist(hs.identity(cat, (a, b)))
    return CheckReport(f"resolve-identity[{cat.labels[a]},{cat.labels[b]}]", r, tol, cat.label_names((a, b)), t[0])


def dual_twist_forms(cat: Category, a) -> list[Hom]:
    """Three diagrams for ``a'⊗a → 1`` that agree in a ribbon category."""
    a = cat.index(a)
    ab = int(cat.dual[a])
    return [
        eval_diagram(cat, Cap(a)),
        eval_diagram(cat, C(CapL(a), T(TwistInv(a), Id(ab)), BraidInv(ab, a))),
        eval_diagram(cat, C(CapL(a), T(Twist(a), Id(ab)), Braid(ab, a))),
    ]


def check_dual_twist(cat: Category, tol: float = 1e-9) -> CheckReport:
    with timer() as t:
        res, wit = 0.0, None
        for a in range(cat.rank):
            forms = dual_twist_forms(cat, a)
            r = max(forms[0].dist(forms[1]), forms[0].dist(forms[2]))
            if r > res:
                res, wit = r, [cat.labels[a]]
    return CheckReport("dual-twist", res, tol, wit, t[0])


def check_zigzag(cat: Category, tol: float = 1e-9) -> CheckReport:
    """Snake identities for both duality pairs and loop value ``dim a``."""
    with timer() as t:
        res, wit = 0.0, None
        for a in range(cat.rank):
            ab = int(cat.dual[a])
            vals = {
                "right": eval_diagram(cat, C(T(Id(a), Cap(a)), T(Cup(a), Id(a)))).dist(hs.identity(cat, (a,))),
                "right'": eval_diagram(cat, C(T(Cap(a), Id(ab)), T(Id(ab), Cup(a)))).dist(hs.identity(cat, (ab,))),
                "left": eval_diagram(cat, C(T(CapL(a), Id(a)), T(Id(a), CupL(a)))).dist(hs.identity(cat, (a,))),
                "left'": eval_diagram(cat, C(T(Id(ab), CapL(a)), T(CupL(a), Id(ab)))).dist(hs.identity(cat, (ab,))),
                "loop": abs(eval_diagram(cat, C(CapL(a), Cup(a))).scalar() - cat.dims[a]),
                "loopL": abs(eval_diagram(cat, C(Cap(a), CupL(a))).scalar() - cat.dims[a]),
            }
            for k, v in vals.items():
                if v > res:
                    res, wit = v, [k, cat.labels[a]]
    return CheckReport("zigzag-and-loops", res, tol, wit, t[0])


def encircle(cat: Category, word: Sequence[int], a: int) -> Hom:
    """An ``a`` loop linked once around the strands of ``word``."""
    word = tuple(word)
    ab = int(cat.dual[a])
    return eval_diagram(cat, C(
        T(Id(*word), CapL(a)),
        T(Morph(hs.braid(cat, (a,), word)), Id(ab)),
        T(Morph(hs.braid(cat, word, (a,))), Id(ab)),
        T(Id(*word), Cup(a)),
    ))


def check_bk_lemma(cat: Category, a1, a2, tol: float = 1e-9) -> CheckReport:
    """Σ_a (dim a2 · dim a / D²) [a-loop around a1 ⊗ a2'] = δ_{a1 a2} i_{a1} ∘ e'_{a1}."""
    a1, a2 = cat.index(a1), cat.index(a2)
    with timer() as t:
        word = (a1, int(cat.dual[a2]))
        D2 = float(np.sum(cat.dims**2))
        lhs = hs.zero(cat, word, word)
        for a in range(cat.rank):
            lhs = lhs + encircle(cat, word, a) * (cat.dims[a2] * cat.dims[a] / D2)
        if a1 == a2:
            rhs = eval_diagram(cat, C(Cup(a1), CapL(a1)))
        else:
            rhs = hs.zero(cat, word, word)
        r = lhs.dist(rhs)
    return CheckReport(f"bk-lemma[{cat.labels[a1]},{cat.labels[a2]}]", r, tol, cat.label_names((a1, a2)), t[0])


def check_dual_basis_lemma(cat: Category, a3, b, tol: float = 1e-9) -> CheckReport:
    """Σ_{a4,l} (dim a4/dim b) · bent vertex pair = id_{a3'⊗b}.

    The lower half bends the dual vertex ``f^{a3 a4}_{b;l}`` into ``a3'⊗b → a4``
    and the upper half bends ``e^b_{a3 a4;l}`` into ``a4 → a3'⊗b``.
    """
    a3, b = cat.index(a3), cat.index(b)
    d3 = int(cat.dual[a3])
    with timer() as t:
        acc = hs.zero(cat, (d3, b), (d3, b))
        for a4 in range(cat.rank):
            for l in range(cat.N[a3, a4, b]):
                lower = eval_diagram(cat, C(T(Cap(a3), Id(a4)), T(Id(d3), DualVertex(a3, a4, b, l))))
                upper = eval_diagram(cat, C(T(Id(d3), Vertex(a3, a4, b, l)), T(CupL(a3), Id(a4))))
                acc = acc + (upper @ lower) * (cat.dims[a4] / cat.dims[b])
        r = acc.dist(hs.identity(cat, (d3, b)))
    return CheckReport(f"dual-basis-lemma[{cat.labels[a3]},{cat.labels[b]}]", r, tol, cat.label_names((a3, b)), t[0])


def graphical_suite(cat: Category, tol: float = 1e-9) -> CheckReport:
    """Biorthogonality, resolution of identity, dual-twist, dual-basis lemma, BK lemma."""
    with timer() as t:
        parts = [check_biorthogonality(cat, tol), check_zigzag(cat, tol), check_dual_twist(cat, tol)]
        labs = range(cat.rank)
        parts.append(composite("resolve-identity", [resolve_identity(cat, a, b, tol) for a in labs for b in labs], tol))
        parts.append(composite("dual-basis-lemma", [check_dual_basis_lemma(cat, a, b, tol) for a in labs for b in labs], tol))
        parts.append(composite("bk-lemma", [check_bk_lemma(cat, a, b, tol) for a in labs for b in labs], tol))
    return composite(f"graphical[{cat.name}]", parts, tol, t[0])


def operator_suite(cat: Category, tol: float = 1e-10) -> CheckReport:
    """Ω₀Ω₋₁ = id, ÃÂ = ÂÃ = id, σ₁₂₃³ = id, σ₁₃₂σ₁₂₃ = id and σ₁₂₃ = Ω₀Ã₀ on every space."""
    names = ["omega", "tildeA-hatA", "sigma-cube", "sigma-inverse", "sigma-vs-omega-A", "sigma132-vs-hatA-omega"]
    worst = {k: (0.0, None) for k in names}
    with timer() as t:
        for a1, a2, a3 in itertools.product(range(cat.rank), repeat=3):
            for f in hom_basis3(cat, a1, a2, a3):
                vals = {
                    "omega": max(omega0(cat, omega_minus1(cat, f)).dist(f), omega_minus1(cat, omega0(cat, f)).dist(f)),
                    "tildeA-hatA": max(tilde_A0(cat, hat_A0(cat, f)).dist(f), hat_A0(cat, tilde_A0(cat, f)).dist(f)),
                    "sigma-cube": sigma123(cat, sigma123(cat, sigma123(cat, f))).dist(f),
                    "sigma-inverse": sigma132(cat, sigma123(cat, f)).dist(f),
                    "sigma-vs-omega-A": sigma123(cat, f).dist(omega0(cat, tilde_A0(cat, f))),
                    "sigma132-vs-hatA-omega": sigma132(cat, f).dist(hat_A0(cat, omega_minus1(cat, f))),
                }
                for k, v in vals.items():
                    if v > worst[k][0] or math.isnan(v):
                        worst[k] = (v, cat.label_names((a1, a2, a3)))
    parts = [CheckReport(k, v, tol, w) for k, (v, w) in worst.items()]
    return composite(f"operators[{cat.name}]", parts, tol, t[0])
