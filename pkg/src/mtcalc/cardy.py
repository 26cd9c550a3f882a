"""Diagonal closed algebras, boundary algebras ``X⊗X'`` and the Cardy condition.

The closed algebra lives in the double and has one component ``(a, a')`` per
base label.  A brane ``X`` (a list of base labels with repetition) gives the
open algebra on ``⊕_{p,q} x_p⊗x_q'``; it is decomposed into simple
components before the Cardy condition is evaluated.  The map from the closed
to the open sector is a clasp: the ``a`` and ``a'`` legs are braided around
the ``X`` strand.

The stored braiding is the mirror of the one the closed-form formulas are
usually written for, so the normative Cardy check intertwines with S where
those formulas say S⁻¹.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import frobenius as fr
from . import homspace as hs
from . import modular as md
from . import sl2z
from . import sums
from .category import Category, InputError, ParseError, SchemaError
from .diagrams import (
    Braid, BraidInv, C, CapL, Cup, Id, T, eval_diagram, omega0, sigma123, sigma132,
)
from .double import base_of, build_double, pair_label, phi2_sum, split_label, t_sum
from .report import CheckReport, composite, timer
from .sums import SumHom

Brane = tuple[int, ...]


# ----- closed sector ---------------------------------------------------------


def _pairing_coefficient(cat: Category, a: int, b: int, c: int, i: int, j: int) -> complex:
    """``(1/dim c)`` times the closed diagram pairing ``f^{ab}_{c;i}`` with ``f^{a'b'}_{c';j}``."""
    ad, bd, cd = (int(cat.dual[x]) for x in (a, b, c))
    B = hs.crossing(cat, bd, ad, inverse=True)
    g = hs.compose_all(
        sums.word_ev(cat, (a, b)),
        hs.tensor(B @ hs.covertex(cat, ad, bd, cd, j), hs.covertex(cat, a, b, c, i)),
        hs.coev_right(cat, c),
    )
    return g.scalar() / cat.dims[c]


def closed_phi_scalar(cat: Category, a: int) -> complex:
    """The value of ``φ_cl`` on the component ``(a, a')``: ``(D/dim a)·θ_a``."""
    return cat.global_dim / cat.dims[a] * cat.twists[a]


def build_diagonal_closed(cat: Category, phases: bool = True) -> fr.Algebra:
    """The diagonal closed algebra ``⊕_a a⊠a'`` in the double.

    ``phases=False`` replaces ``φ_cl`` by the identity on every component;
    the result is still an algebra but no longer modular invariant.
    """
    d = build_double(cat)
    n = cat.rank
    du = [int(x) for x in cat.dual]
    comps = [pair_label(d, a, du[a]) for a in range(n)]
    mu = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        N1 = int(cat.N[a, b, c])
        if not N1:
            continue
        N2 = int(cat.N[du[a], du[b], du[c]])
        v = np.zeros(N1 * N2, dtype=complex)
        for i in range(N1):
            for j in range(N2):
                v[i * N2 + j] = _pairing_coefficient(cat, a, b, c, i, j)
        mu[(a, b, c)] = v
    phi = {(du[a], a): (closed_phi_scalar(cat, a) if phases else 1.0) for a in range(n)}
    A = fr.from_tables(d, comps, mu, {cat.unit: 1.0}, phi, name="closed")
    A = fr.with_coalgebra(A)
    A.meta["phases"] = phases
    return A


def _component(A: fr.Algebra, k: int) -> SumHom:
    return SumHom(A.host, (A.obj[k],), A.obj, {(k, 0): hs.identity(A.host, A.obj[k])})


def _diag_vector(A: fr.Algebra, k: int) -> tuple[np.ndarray, list]:
    """Coefficients of ``μ`` restricted to ``(k, j) → j`` summed over ``j`` with the same label."""
    d = A.host
    x = A.obj[k][0]
    ob = md.one_point_basis(d, x)
    idx = {b: p for p, b in enumerate(ob)}
    v = np.zeros(len(ob), dtype=complex)
    for (j, kj), h in A.mu.blocks.items():
        i, jj = divmod(kj, A.n)
        if i == k and jj == j:
            y = A.obj[j][0]
            for t in range(d.N[x, y, y]):
                v[idx[(y, t)]] += h.blocks[y][0, t]
    return v, ob


def _frobenius_loop(A: fr.Algebra, k: int, z: int) -> hs.Hom | None:
    """The ``k``-th product with its second leg closed through ``Δ∘ι`` and ``ε∘μ`` around a ``z`` strand."""
    cat = A.host
    I = A.id()
    Z = ((z,),)
    xa = (A.obj[k],)
    loop_open = A.delta @ A.iota
    loop_close = A.eps @ A.mu
    muk = A.mu @ sums.tensor(_component(A, k), I)
    G = sums.compose_all(
        sums.tensor(sums.identity(cat, Z), loop_close),
        sums.tensor(sums.braid(cat, A.obj, Z), I),
        sums.tensor(I, sums.braid(cat, Z, A.obj, inverse=True)),
        sums.tensor(muk, sums.identity(cat, sums.tensor_obj(A.obj, Z))),
        sums.tensor_all(sums.identity(cat, xa), loop_open, sums.identity(cat, Z)),
    )
    return G.blocks.get((0, 0))


def multiplicity_matrix(A: fr.Algebra) -> np.ndarray:
    base = base_of(A.host)
    M = np.zeros((base.rank, base.rank))
    for (x,) in A.obj:
        a, b = split_label(A.host, x)
        M[a, b] += 1
    return M


def check_modular_invariance(A: fr.Algebra, tol: float = 1e-8) -> CheckReport:
    """S-invariance of the closed product, algebraically and through the Frobenius loop.

    ``S-invariance``: the diagonal projection of ``μ`` is fixed by the double's
    S-action.  ``frobenius-loop``: the same vector computed by closing a strand
    through ``Δ∘ι`` and ``ε∘μ`` around a dim-weighted loop, which is where ``φ``
    enters.  ``commutes-with-S``: the multiplicity matrix commutes with S.
    """
    d = A.host
    if A.delta is None or A.eps is None:
        A = fr.with_coalgebra(A)
    Dd = d.global_dim
    with timer() as t:
        r_alg, w_alg, r_loop, w_loop = 0.0, None, 0.0, None
        for k, (x,) in enumerate(A.obj):
            v, ob = _diag_vector(A, k)
            if not ob:
                continue
            idx = {b: p for p, b in enumerate(ob)}
            S = md.s_action(d, x)
            r = float(np.max(np.abs(S @ v - v), initial=0.0))
            if r > r_alg:
                r_alg, w_alg = r, A.comp_names()[k]
            L = np.zeros(len(ob), dtype=complex)
            for z in range(d.rank):
                if not d.N[x, z, z]:
                    continue
                h = _frobenius_loop(A, k, z)
                if h is None:
                    continue
                for tt in range(d.N[x, z, z]):
                    L[idx[(z, tt)]] += d.dims[z] / Dd * h.blocks[z][0, tt]
            r = float(np.max(np.abs(L - v), initial=0.0))
            if r > r_loop:
                r_loop, w_loop = r, A.comp_names()[k]
        base = base_of(d)
        M = multiplicity_matrix(A)
        S = md.s_matrix(base)
        r_fam = float(np.max(np.abs(S @ M - M @ S)))
    return composite(f"modular-invariance[{A.name}]", [
        CheckReport("S-invariance", r_alg, tol, w_alg),
        CheckReport("frobenius-loop", r_loop, tol, w_loop),
        CheckReport("commutes-with-S", r_fam, tol, M.astype(int).tolist()),
    ], tol, t[0])


# ----- open sector -----------------------------------------------------------


def parse_brane(cat: Category, spec: str | list | tuple) -> Brane:
    """``"1+tau"``, ``"2*tau"``, ``"tau,tau"`` or a list of labels, as a sorted tuple of indices."""
    if isinstance(spec, (list, tuple)):
        labels = [cat.index(x) for x in spec]
    else:
        labels = []
        for part in re.split(r"[+,]", str(spec)):
            part = part.strip()
            if not part:
                raise InputError(f"empty term in brane {spec!r}")
            m = re.fullmatch(r"(\d+)\s*\*\s*(\S+)", part)
            k, lab = (int(m.group(1)), m.group(2)) if m else (1, part)
            labels.extend([cat.index(lab)] * k)
    if not labels:
        raise InputError("brane must be a nonzero object")
    return tuple(sorted(labels))


def build_open(cat: Category, X: Brane) -> fr.Algebra:
    """``X⊗X'`` on the summands ``(x_p, x_q')`` with ``μ = id⊗e_X⊗id`` and ``Δ = id⊗i'_X⊗id``."""
    m = len(X)
    du = [int(x) for x in cat.dual]
    W = tuple((x, du[y]) for x in X for y in X)
    WW = sums.tensor_obj(W, W)
    mu = SumHom(cat, WW, W)
    de = SumHom(cat, W, WW)
    for p, q, s in itertools.product(range(m), repeat=3):
        xp, xq, xs = X[p], X[q], X[s]
        mu.blocks[(p * m + s, (p * m + q) * m * m + q * m + s)] = hs.embed(hs.ev(cat, xq), (xp,), (du[xs],))
        de.blocks[((p * m + q) * m * m + q * m + s, p * m + s)] = hs.embed(hs.coev_right(cat, xq), (xp,), (du[xs],))
    io = SumHom(cat, sums.UNIT, W, {(p * m + p, 0): hs.coev(cat, X[p]) for p in range(m)})
    ep = SumHom(cat, W, sums.UNIT, {(0, p * m + p): hs.ev_right(cat, X[p]) for p in range(m)})
    A = fr.Algebra(cat, W, mu, io, de, ep, name="open")
    return A.with_(phi=fr.form_from_counit(A))


def decompose(cat: Category, A: fr.Algebra) -> tuple[SumHom, SumHom]:
    """Embedding and projection between simple components and the summands of ``A``."""
    W = A.obj
    comps = []
    for pq, w in enumerate(W):
        for c in hs.charges(cat, w):
            for t in range(len(hs.trees(cat, w, c))):
                comps.append((c, pq, t))
    comps.sort()
    S = tuple((c,) for c, _, _ in comps)
    E = SumHom(cat, S, W, {(pq, k): hs.covertex(cat, *W[pq], c, t) for k, (c, pq, t) in enumerate(comps)})
    P = SumHom(cat, W, S, {(k, pq): hs.vertex(cat, *W[pq], c, t) for k, (c, pq, t) in enumerate(comps)})
    return E, P


def _t_words(A_cl: fr.Algebra) -> sums.Obj:
    return t_sum(A_cl.host, A_cl.id()).src


def clasp_map(cat: Category, A_cl: fr.Algebra, X: Brane) -> SumHom:
    """``ι_cl-op``: the ``a⊗a'`` legs are braided around the ``X`` strand and capped."""
    m = len(X)
    du = [int(x) for x in cat.dual]
    TA = _t_words(A_cl)
    W = tuple((x, du[y]) for x in X for y in X)
    out = SumHom(cat, TA, W)
    for k, (a, ad) in enumerate(TA):
        for p, x in enumerate(X):
            out.blocks[(p * m + p, k)] = eval_diagram(cat, C(
                T(Id(x), CapL(a), Id(du[x])),
                T(Braid(a, x), Braid(du[x], ad)),
                T(Id(a), Cup(x), Id(ad)),
            ))
    return out


def clasp_adjoint_closed_form(cat: Category, TA: sums.Obj, X: Brane) -> SumHom:
    """``(dim a/D)`` times the upside-down clasp with both crossings reversed."""
    m = len(X)
    du = [int(x) for x in cat.dual]
    W = tuple((x, du[y]) for x in X for y in X)
    D = cat.global_dim
    out = SumHom(cat, W, TA)
    for k, (a, ad) in enumerate(TA):
        for p, x in enumerate(X):
            h = eval_diagram(cat, C(
                T(Id(a), CapL(x), Id(ad)),
                T(BraidInv(x, a), BraidInv(ad, du[x])),
                T(Id(x), Cup(a), Id(du[x])),
            ))
            out.blocks[(k, p * m + p)] = h * (cat.dims[a] / D)
    return out


def adjoint(A_cl: fr.Algebra, A_op: fr.Algebra, iota: SumHom) -> SumHom:
    """``ι*``: the adjoint of ``ι`` for the pairings of the two sectors.

    ``(P_op⊗id)∘(id⊗ι⊗id)∘(id⊗Q)`` where ``Q: 1 → T⊗T`` is the copairing of
    the transported closed pairing ``P_cl∘φ₂``.
    """
    d = A_cl.host
    cat = A_op.host
    TA = iota.src
    IT = sums.identity(cat, TA)
    P_T = t_sum(d, fr.pairing(A_cl)) @ phi2_sum(d, A_cl.obj, A_cl.obj)
    TAd = sums.dual_obj(cat, TA)
    bend = sums.tensor(P_T, sums.identity(cat, TAd)) @ sums.tensor(IT, sums.coev(cat, TA))
    Q = sums.tensor(IT, sums.inverse(bend)) @ sums.coev(cat, TA)
    return sums.compose_all(sums.tensor(fr.pairing(A_op), IT), sums.tensor_all(A_op.id(), iota, IT), sums.tensor(A_op.id(), Q))


@dataclass(eq=False)
class CardyTriple:
    """Closed algebra, open algebra on simple components and the map between them.

    ``iota`` goes from ``T(A_cl)`` (summands ``(a, a')``) to ``A_op.obj``.
    """

    cat: Category
    A_cl: fr.Algebra
    A_op: fr.Algebra
    iota: SumHom
    brane: Brane | None = None
    meta: dict = field(default_factory=dict)

    @property
    def iota_star(self) -> SumHom:
        hit = self.meta.get("iota_star")
        if hit is None:
            hit = self.meta["iota_star"] = adjoint(self.A_cl, self.A_op, self.iota)
        return hit

    def brane_name(self) -> str:
        if self.brane is None:
            return "?"
        return "+".join(self.cat.labels[x] for x in self.brane)


def build_cardy_case(cat: Category, X: Brane | str | list, tol: float = 1e-9) -> CardyTriple:
    """The Cardy triple of the brane ``X`` over the diagonal closed algebra."""
    X = parse_brane(cat, X) if not (isinstance(X, tuple) and all(isinstance(x, int) for x in X)) else X
    if not X:
        raise InputError("brane must be a nonzero object")
    A_cl = build_diagonal_closed(cat)
    raw = build_open(cat, X)
    io_raw = clasp_map(cat, A_cl, X)
    ist_raw = adjoint(A_cl, raw, io_raw)
    r_adj = ist_raw.dist(clasp_adjoint_closed_form(cat, io_raw.src, X))
    E, P = decompose(cat, raw)
    A_op = fr.with_coalgebra(fr.transport(raw, E, P, name="open"))
    T3 = CardyTriple(cat, A_cl, A_op, P @ io_raw, X)
    T3.meta.update(raw=raw, emb=E, proj=P, iota_star=ist_raw @ E, iota_star_closed_form=r_adj)
    return T3


def perturb_open_product(T3: CardyTriple, label, factor: float = 1.1) -> CardyTriple:
    """Rescale the open product along the components of ``label`` by a change of basis.

    ``μ ↦ g∘μ∘(g⁻¹⊗g⁻¹)`` with ``g = factor`` on those components: the product
    stays associative and unital-up-to-``g``, but ``ι`` and ``φ`` are kept, so
    the Cardy condition sees the change.  ``Δ`` and ``ε`` are re-derived.
    """
    cat = T3.cat
    lab = cat.index(label)
    A = T3.A_op
    g = SumHom(cat, A.obj, A.obj, {(k, k): hs.identity(cat, w) * (factor if w == (lab,) else 1.0)
                                   for k, w in enumerate(A.obj)})
    gi = SumHom(cat, A.obj, A.obj, {(k, k): hs.identity(cat, w) * (1 / factor if w == (lab,) else 1.0)
                                    for k, w in enumerate(A.obj)})
    mu = g @ A.mu @ sums.tensor(gi, gi)
    B = fr.with_coalgebra(A.with_(mu=mu, iota=g @ A.iota, delta=None, eps=None, name="open-perturbed"))
    return CardyTriple(cat, T3.A_cl, B, T3.iota, T3.brane, {})


# ----- open-closed compatibility ------------------------------------------------------


def _mixed_braid(cat: Category, TA: sums.Obj, V: sums.Obj) -> SumHom:
    """``(a⊗b)⊗w → w⊗(a⊗b)``: ``w`` passes under ``b`` and over ``a``."""
    out = SumHom(cat, sums.tensor_obj(TA, V), sums.tensor_obj(V, TA))
    nv, nt = len(V), len(TA)
    for i, (a, b) in enumerate(TA):
        for j, w in enumerate(V):
            h = hs.embed(hs.braid(cat, (a,), w), (), (b,)) @ hs.embed(hs.braid(cat, w, (b,), inverse=True), (a,), ())
            out.blocks[(j * nt + i, i * nv + j)] = h
    return out


def check_open_closed(T3: CardyTriple, tol: float = 1e-8) -> CheckReport:
    """``ι`` is a unital algebra map from ``T(A_cl)`` and lands in the centre of ``A_op``."""
    cat, d = T3.cat, T3.A_cl.host
    A_cl, A_op, io = T3.A_cl, T3.A_op, T3.iota
    with timer() as t:
        r_unit = (io @ t_sum(d, A_cl.iota)).dist(A_op.iota)
        muT = t_sum(d, A_cl.mu) @ phi2_sum(d, A_cl.obj, A_cl.obj)
        r_mor, w_mor = (io @ muT).worst_block(A_op.mu @ sums.tensor(io, io))
        lhs = A_op.mu @ sums.tensor(io, A_op.id())
        rhs = A_op.mu @ sums.tensor(A_op.id(), io) @ _mixed_braid(cat, io.src, A_op.obj)
        r_cen, w_cen = lhs.worst_block(rhs)
        parts = [
            CheckReport("unit", r_unit, tol),
            CheckReport("algebra-map", r_mor, tol, w_mor),
            CheckReport("centre", r_cen, tol, w_cen),
        ]
        if "iota_star_closed_form" in T3.meta:
            parts.append(CheckReport("adjoint-closed-form", T3.meta["iota_star_closed_form"], min(tol, 1e-9)))
    return composite(f"open-closed[{T3.brane_name()}]", parts, tol, t[0])


# ----- Cardy condition ------------------------------------------------------------------


def _closed_index(T3: CardyTriple) -> dict[int, int]:
    """Base label ``a`` → index of the closed component ``(a, a')``."""
    out = {}
    for i, (x,) in enumerate(T3.A_cl.obj):
        a, _ = split_label(T3.A_cl.host, x)
        out.setdefault(a, i)
    return out


def cardy_normative(T3: CardyTriple, literal: bool = False) -> tuple[float, Any, dict]:
    """Two-point coordinates of both sides for every pair of open components.

    Left: ``θ·σ₁₂₃(ι')∘(φ⊗id)`` composed with ``Ω₀(σ₁₃₂(ι))∘(φ⊗id)`` summed over
    closed components.  Right: S applied to ``μ∘(id⊗μ∘c∘(θ⊗id))``; with
    ``literal=True`` the inverse S-action is used instead, which is the form
    matching the opposite braiding and fails here for non-invertible branes.
    """
    cat = T3.cat
    A = T3.A_op
    if A.phi is None or T3.A_cl.phi is None:
        raise InputError("Cardy check needs φ on both algebras")
    du = [int(x) for x in cat.dual]
    comps = A.comps
    n = len(comps)
    io = T3.iota
    ci = _closed_index(T3)
    phis = A.phi.blocks
    worst, where = 0.0, None
    coords: dict = {}
    for k1, k2 in itertools.product(range(n), repeat=2):
        c1, c2 = comps[k1], comps[k2]
        basis = sl2z.two_point_basis(cat, c1, c2)
        if not basis:
            continue
        idx = {b: p for p, b in enumerate(basis)}
        L = np.zeros((len(basis), 1), dtype=complex)
        R = np.zeros((len(basis), 1), dtype=complex)
        for a in range(cat.rank):
            rL, rR = a, du[a]
            s_dual = closed_phi_scalar(cat, rR)
            Y1 = hs.zero(cat, (c1, du[rL]), (rR,))
            Y2 = hs.zero(cat, (c2, rR), (du[rL],))
            for j in range(n):
                if (j, k1) in phis:
                    ip = io.block(j, ci[rR]) * (1 / s_dual)
                    Y1 = Y1 + sigma123(cat, ip) @ hs.tensor(phis[(j, k1)], hs.identity(cat, (du[rL],)))
                if (j, k2) in phis:
                    Y2 = Y2 + omega0(cat, sigma132(cat, io.block(j, ci[a]))) @ hs.tensor(phis[(j, k2)], hs.identity(cat, (rR,)))
            h = (Y1 * cat.twists[rR]) @ hs.tensor(hs.identity(cat, (c1,)), Y2)
            sl2z._coords(cat, c1, c2, h, idx, L, 0)
        for k in range(n):
            r = comps[k]
            for m in range(n):
                y1, y2 = A.mu.blocks.get((k, k1 * n + m)), A.mu.blocks.get((m, k * n + k2))
                if y1 is None or y2 is None:
                    continue
                Y2 = y2 @ hs.crossing(cat, c2, r) * cat.twists[c2]
                sl2z._coords(cat, c1, c2, y1 @ hs.tensor(hs.identity(cat, (c1,)), Y2), idx, R, 0)
        S = sl2z.s_two_point(cat, c1, c2, inverse=literal)
        diff = L[:, 0] - S @ R[:, 0]
        coords[(k1, k2)] = diff
        r = float(np.max(np.abs(diff)))
        if r > worst:
            worst, where = r, [A.comp_names()[k1], A.comp_names()[k2]]
    return worst, where, coords


def _single(cat: Category, h: hs.Hom) -> SumHom:
    return SumHom(cat, (h.src,), (h.tgt,), {(0, 0): h})


def cardy_graphical(T3: CardyTriple) -> tuple[float, Any, dict]:
    """Both sides as morphisms ``V⊗V⊗a → a`` built from whole diagrams.

    Left: for the closed component with right leg ``a``, ``ι*`` followed by a cap
    and ``ι`` fed by a cup, the two ``a`` strands crossing once and twisted.
    Right: ``(dim a/D)`` times ``μ∘(id⊗μ∘c∘(θ⊗id))`` with its last leg closed
    into a ``V`` loop that links the ``a`` strand.
    """
    cat = T3.cat
    A = T3.A_op
    V = A.obj
    n = A.n
    D = cat.global_dim
    du = [int(x) for x in cat.dual]
    I = A.id()
    Vd = sums.dual_obj(cat, V)
    ci = _closed_index(T3)
    ist = T3.iota_star
    io = T3.iota
    P = fr.pairing(A)
    F = sums.compose_all(A.mu, sums.tensor(I, A.mu), sums.tensor(I, sums.braid(cat, V, V)),
                         sums.tensor_all(I, sums.twist(cat, V), I))
    VV = sums.tensor_obj(V, V)
    worst, where = 0.0, None
    coords: dict = {}
    for a in range(cat.rank):
        b = du[a]
        i = ci[b]
        Aa = ((a,),)
        Ia = sums.identity(cat, Aa)
        th = cat.twists[a]
        ist_i = SumHom(cat, V, ((b, a),), {(0, k): h for (kk, k), h in ist.blocks.items() if kk == i})
        io_i = SumHom(cat, ((b, a),), V, {(l, 0): h for (l, kk), h in io.blocks.items() if kk == i})
        cross = _single(cat, hs.embed(hs.crossing(cat, a, a, inverse=True), (b,), ()))
        Y1 = sums.compose_all(
            sums.tensor(_single(cat, hs.ev_right(cat, b)), Ia),
            cross,
            sums.tensor(ist_i, Ia),
        ) * th
        Y2 = sums.compose_all(
            sums.tensor(P, Ia),
            sums.tensor_all(I, io_i, Ia),
            sums.tensor(I, cross),
            sums.tensor_all(I, _single(cat, hs.coev(cat, b)), Ia),
        ) * th
        lhs = Y1 @ sums.tensor(I, Y2)
        rhs = sums.compose_all(
            sums.tensor(Ia, sums.ev_right(cat, V)),
            sums.tensor(sums.braid(cat, V, Aa), sums.identity(cat, Vd)),
            sums.tensor(I, sums.braid(cat, Aa, Vd, inverse=True)),
            sums.tensor(F, sums.identity(cat, sums.tensor_obj(Vd, Aa))),
            sums.tensor_all(sums.identity(cat, VV), sums.coev(cat, V), Ia),
        ) * (cat.dims[a] / D)
        diff = lhs - rhs
        for (_, src), h in diff.blocks.items():
            r = h.norm()
            coords[(a, src)] = r
            if r > worst:
                k1, k2 = divmod(src, n)
                worst, where = r, [A.comp_names()[k1], A.comp_names()[k2], cat.labels[a]]
    return worst, where, coords


def check_cardy(T3: CardyTriple, tol: float = 1e-8) -> CheckReport:
    """The Cardy condition in two-point coordinates, cross-checked by the diagram form."""
    with timer() as t:
        r_n, w_n, _ = cardy_normative(T3)
        r_g, w_g, _ = cardy_graphical(T3)
    agree = abs(r_n - r_g)
    return composite(f"cardy[{T3.brane_name()}]", [
        CheckReport("cardy-two-point", r_n, tol, w_n),
        CheckReport("cardy-diagram", r_g, tol, w_g),
        CheckReport("formulations-agree", agree, 1e-7, {"two_point": r_n, "diagram": r_g}),
    ], tol, t[0])


# ----- branes ----------------------------------------------------------------------------


def all_branes(cat: Category, max_mult: int) -> list[Brane]:
    out = []
    for m in range(1, max_mult + 1):
        out.extend(itertools.combinations_with_replacement(range(cat.rank), m))
    return [tuple(x) for x in out]


def enumerate_branes(cat: Category, max_mult: int = 2, tol: float = 1e-8) -> list[tuple[Brane, CheckReport]]:
    out = []
    for X in all_branes(cat, max_mult):
        with timer() as t:
            T3 = build_cardy_case(cat, X)
            rep = composite(f"brane[{T3.brane_name()}]", [check_open_closed(T3, tol), check_cardy(T3, tol)], tol)
        rep.ms = t[0]
        out.append((X, rep))
    return out


# ----- JSON ----------------------------------------------------------------------------------


def _cplx(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def to_json(T3: CardyTriple) -> dict:
    """Both algebras in the algebra schema plus the table of ``ι`` coefficients."""
    cat = T3.cat
    du = [int(x) for x in cat.dual]
    cl = fr.to_json(T3.A_cl, double=True)
    op = fr.to_json(T3.A_op)
    names = T3.A_op.comp_names()
    rows = []
    for (j, i), h in sorted(T3.iota.blocks.items()):
        a, _ = split_label(T3.A_cl.host, T3.A_cl.obj[i][0])
        c = T3.A_op.obj[j][0]
        k = int(names[j].rsplit("#", 1)[1])
        for tt, v in enumerate(fr._row(h, c)):
            if v != 0:
                rows.append({"closed": [cat.labels[a], cat.labels[du[a]]], "open": [cat.labels[c], k], "t": tt, "v": _cplx(v)})
    return {
        "kind": "cardy-triple",
        "category": cat.name,
        "brane": None if T3.brane is None else [cat.labels[x] for x in T3.brane],
        "closed": cl,
        "open": op,
        "iota": rows,
    }


def from_json(raw: Mapping | str | Path, cat: Category) -> CardyTriple:
    if isinstance(raw, (str, Path)):
        try:
            raw = json.loads(Path(raw).read_text())
        except json.JSONDecodeError as e:
            raise ParseError(f"{raw}:{e.lineno}:{e.colno}: {e.msg}") from None
        except OSError as e:
            raise InputError(str(e)) from None
    if not isinstance(raw, Mapping) or raw.get("kind") != "cardy-triple":
        raise SchemaError("expected an object with kind 'cardy-triple'")
    for key in ("closed", "open", "iota"):
        if key not in raw:
            raise SchemaError(f"missing {key!r}")
    A_cl = fr.with_coalgebra(fr.from_json(raw["closed"], cat))
    A_op = fr.from_json(raw["open"], cat)
    if A_cl.host is cat or A_op.host is not cat:
        raise SchemaError("closed algebra must live in the double and open algebra in the base")
    if A_op.phi is None or A_cl.phi is None:
        raise SchemaError("both algebras must carry phi")
    A_op = fr.with_coalgebra(A_op.with_(delta=None, eps=None))
    d = A_cl.host
    TA = _t_words(A_cl)
    pos_cl = {}
    for i, (x,) in enumerate(A_cl.obj):
        pos_cl.setdefault(split_label(d, x), i)
    pos_op = {}
    names = A_op.comp_names()
    for j, nm in enumerate(names):
        pos_op[(A_op.obj[j][0], int(nm.rsplit("#", 1)[1]))] = j
    io = SumHom(cat, TA, A_op.obj)
    for e in raw["iota"]:
        if not isinstance(e, Mapping):
            raise SchemaError("iota entries must be objects")
        try:
            a, b = (cat.index(x) for x in e["closed"])
            c, k = cat.index(e["open"][0]), int(e["open"][1])
            tt = int(e.get("t", 0))
            v = complex(e["v"][0], e["v"][1])
        except (KeyError, TypeError, IndexError, ValueError) as err:
            raise SchemaError(f"bad iota entry {e!r}: {err}") from None
        if (a, b) not in pos_cl or (c, k) not in pos_op:
            raise SchemaError(f"iota entry {e!r} refers to an unknown component")
        i, j = pos_cl[(a, b)], pos_op[(c, k)]
        if tt >= cat.N[a, b, c]:
            raise SchemaError(f"iota entry {e!r}: no such channel")
        h = io.blocks.get((j, i)) or hs.zero(cat, TA[i], (c,))
        h.blocks[c][0, tt] += v
        io.blocks[(j, i)] = h
    brane = raw.get("brane")
    X = parse_brane(cat, brane) if brane else None
    return CardyTriple(cat, A_cl, A_op, io, X)
