"""Modular data and the graphical S and T actions on one-point spaces.

For a label ``a`` the total space is ``⊕_{a1} hom(a⊗a1, a1)`` with basis
``(a1, i) ↦ e^{a1}_{a a1; i}``.  ``S(a)`` sends a vertex to a weighted sum
over ``a2`` of diagrams in which the ``a1`` strand is closed into a loop
linked with an ``a2`` strand.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import homspace as hs
from .category import Category
from .diagrams import (
    Braid, BraidInv, C, CapL, Cup, Id, Morph, T, eval_diagram, hat_A0, tilde_A0,
)
from .report import CheckReport, composite, timer


def one_point_basis(cat: Category, a: int) -> list[tuple[int, int]]:
    return [(a1, i) for a1 in range(cat.rank) for i in range(cat.N[a, a1, a1])]


def _s_diagram(cat: Category, f: hs.Hom, a2: int, inverse: bool) -> hs.Hom:
    a, a1 = f.src
    d1 = int(cat.dual[a1])
    if inverse:
        X1, X2 = Braid(d1, a2), BraidInv(a1, a2)
    else:
        X1, X2 = BraidInv(d1, a2), Braid(a1, a2)
    return eval_diagram(cat, C(
        T(Id(a2), CapL(a1)),
        T(X2, Id(d1)),
        T(Id(a1), X1),
        T(Morph(f), Id(d1, a2)),
        T(Id(a), Cup(a1), Id(a2)),
    ))


def _s_matrix(cat: Category, a: int, inverse: bool) -> np.ndarray:
    key = ("S", a, inverse)
    hit = cat._cache.get(key)
    if hit is not None:
        return hit
    basis = one_point_basis(cat, a)
    idx = {b: k for k, b in enumerate(basis)}
    D = cat.global_dim
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for a1, i in basis:
        f = hs.vertex(cat, a, a1, a1, i)
        for a2 in range(cat.rank):
            if not cat.N[a, a2, a2]:
                continue
            g = _s_diagram(cat, f, a2, inverse)
            for j in range(cat.N[a, a2, a2]):
                M[idx[(a2, j)], idx[(a1, i)]] += cat.dims[a2] / D * g.blocks[a2][0, j]
    cat._cache[key] = M
    return M


def s_action(cat: Category, a) -> np.ndarray:
    """Matrix of ``S(a)`` on the basis :func:`one_point_basis` (columns are inputs)."""
    return _s_matrix(cat, cat.index(a), inverse=False)


def s_inverse_action(cat: Category, a) -> np.ndarray:
    """Matrix of ``S⁻¹(a)``: the same diagram with both crossings reversed."""
    return _s_matrix(cat, cat.index(a), inverse=True)


def _s_dual_diagram(cat: Category, f: hs.Hom, a2: int) -> hs.Hom:
    """The S diagram turned upside down, acting on ``f ∈ hom(a1, a⊗a1)``."""
    (a1,) = f.src
    a = f.tgt[0]
    d1 = int(cat.dual[a1])
    return eval_diagram(cat, C(
        T(Id(a), CapL(a1), Id(a2)),
        T(Morph(f), Id(d1, a2)),
        T(Id(a1), Braid(a2, d1)),
        T(BraidInv(a2, a1), Id(d1)),
        T(Id(a2), Cup(a1)),
    ))


def s_dual_actions(cat: Category, a) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of ``S(a)`` on vertices and of its adjoint action on dual vertices."""
    a = cat.index(a)
    basis = one_point_basis(cat, a)
    idx = {b: k for k, b in enumerate(basis)}
    D = cat.global_dim
    Sd = np.zeros((len(basis), len(basis)), dtype=complex)
    for a1, i in basis:
        f = hs.covertex(cat, a, a1, a1, i)
        for a2 in range(cat.rank):
            if not cat.N[a, a2, a2]:
                continue
            g = _s_dual_diagram(cat, f, a2)
            for j in range(cat.N[a, a2, a2]):
                Sd[idx[(a2, j)], idx[(a1, i)]] += cat.dims[a2] / D * g.blocks[a2][j, 0]
    return s_action(cat, a), Sd


def t_action(cat: Category, a, c: float | None = None) -> np.ndarray:
    """Diagonal T on the one-point basis: ``θ_{a1} e^{-2πic/24}`` on the loop label ``a1``.

    The twist enters with the power that makes ``(T⁻¹S)³ = S²`` hold for the
    S-action above; the opposite power fails by an ``a``-dependent phase.
    """
    a = cat.index(a)
    c = cat.cmod8 if c is None else c
    ph = cmath.exp(-2j * math.pi * c / 24)
    return np.diag([ph * cat.twists[a1] for a1, _ in one_point_basis(cat, a)])


def _a_matrix(cat: Category, a: int, op) -> np.ndarray:
    basis = one_point_basis(cat, a)
    idx = {b: k for k, b in enumerate(basis)}
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for a1, i in basis:
        g = op(cat, hs.vertex(cat, a, a1, a1, i))
        b1 = g.tgt[0]
        for j in range(cat.N[a, b1, b1]):
            M[idx[(b1, j)], idx[(a1, i)]] = g.blocks[b1][0, j]
    return M


def a0_matrix(cat: Category, a, hat: bool = True) -> np.ndarray:
    """Matrix of Â₀ (default) or Ã₀ on ``⊕_{a1} hom(a⊗a1, a1)``.

    Both send the loop label to its dual; they differ by the scalar ``θ_a``.
    ``S(a)²`` equals the Â₀ form.
    """
    return _a_matrix(cat, cat.index(a), hat_A0 if hat else tilde_A0)


def charge_conjugation(cat: Category) -> np.ndarray:
    """Permutation matrix ``C_{xy} = δ_{x, y'}`` in label order."""
    C_ = np.zeros((cat.rank, cat.rank))
    C_[np.asarray(cat.dual), np.arange(cat.rank)] = 1.0
    return C_


@dataclass
class ModularData:
    labels: list[str]
    Dsq: float
    p_plus: complex
    p_minus: complex
    D: complex
    See: complex
    S: dict[str, np.ndarray] = field(default_factory=dict)
    T: dict[str, np.ndarray] = field(default_factory=dict)

    def to_dict(self) -> dict:
        def mat(M):
            return [[[float(z.real), float(z.imag)] for z in row] for row in M]

        return {
            "labels": self.labels,
            "D": [self.D.real, self.D.imag],
            "See": [self.See.real, self.See.imag],
            "Dsq": self.Dsq,
            "p_plus": [self.p_plus.real, self.p_plus.imag],
            "p_minus": [self.p_minus.real, self.p_minus.imag],
            "blocks": {a: mat(M) for a, M in self.S.items()},
        }


def modular_data(cat: Category) -> ModularData:
    c = cat.cmod8
    D = cat.p_minus * cmath.exp(-2j * math.pi * c / 8)
    Se = s_action(cat, cat.unit)
    e_pos = one_point_basis(cat, cat.unit).index((cat.unit, 0))
    return ModularData(
        labels=list(cat.labels),
        Dsq=float(np.sum(cat.dims**2)),
        p_plus=cat.p_plus,
        p_minus=cat.p_minus,
        D=complex(D),
        See=complex(Se[e_pos, e_pos]),
        S={cat.labels[a]: s_action(cat, a) for a in range(cat.rank) if one_point_basis(cat, a)},
        T={cat.labels[a]: t_action(cat, a) for a in range(cat.rank) if one_point_basis(cat, a)},
    )


def s_matrix(cat: Category) -> np.ndarray:
    """The ordinary S-matrix, i.e. ``S(e)`` in label order."""
    return s_action(cat, cat.unit)


def monodromy_oracle(cat: Category) -> np.ndarray:
    """``(1/D) Σ_c N_{ab}^c θ_c/(θ_aθ_b) dim c``, an independent formula for ``S(e)``."""
    th, d = cat.twists, cat.dims
    n = cat.rank
    s = np.einsum("abc,c->ab", cat.N, th * d) / np.outer(th, th)
    return s / cat.global_dim if n else s


def c_lifts(cat: Category) -> list[float]:
    if cat.cmod24 is not None:
        return [cat.cmod24]
    return [cat.cmod8, cat.cmod8 + 8.0, cat.cmod8 - 8.0]


def check_modular_relations(cat: Category, tol: float = 1e-9) -> CheckReport:
    """S(e)² = C, S(a)² = Â₀, S S⁻¹ = 1, (S_e^e)² = 1/D², (T⁻¹S)³ = S² = T⁻¹S²T, p₊p₋ = D², S_e^e·p₋ = e^{2πic/8}."""
    parts: list[CheckReport] = []
    with timer() as total:
        r_ss, r_inv, w_ss, w_inv = 0.0, 0.0, None, None
        for a in range(cat.rank):
            if not one_point_basis(cat, a):
                continue
            S = s_action(cat, a)
            r = float(np.max(np.abs(S @ S - a0_matrix(cat, a)), initial=0.0))
            if r > r_ss:
                r_ss, w_ss = r, [cat.labels[a]]
            r = float(np.max(np.abs(S @ s_inverse_action(cat, a) - np.eye(len(S))), initial=0.0))
            if r > r_inv:
                r_inv, w_inv = r, [cat.labels[a]]
        Se = s_matrix(cat)
        parts.append(CheckReport("S-squared-charge-conjugation",
                                 float(np.max(np.abs(Se @ Se - charge_conjugation(cat)))), tol))
        parts.append(CheckReport("S-squared-vs-A0", r_ss, tol, w_ss))
        parts.append(CheckReport("S-inverse", r_inv, tol, w_inv))
        md = modular_data(cat)
        Dsq = md.Dsq
        parts.append(CheckReport("See-squared", abs(md.See**2 - 1.0 / Dsq), min(tol, 1e-12)))
        ph = cmath.exp(2j * math.pi * cat.cmod8 / 8)
        parts.append(CheckReport("See-vs-p-minus", abs(md.See - ph / cat.p_minus), tol))
        parts.append(CheckReport("p-plus-p-minus", abs(cat.p_plus * cat.p_minus - Dsq), min(tol, 1e-10)))
        parts.append(CheckReport("S-vs-monodromy-oracle", float(np.max(np.abs(s_matrix(cat) - monodromy_oracle(cat)))), tol))
        best = None
        for c in c_lifts(cat):
            r_st, w_st = 0.0, None
            for a in range(cat.rank):
                if not one_point_basis(cat, a):
                    continue
                S = s_action(cat, a)
                Ti = np.linalg.inv(t_action(cat, a, c))
                Tm = t_action(cat, a, c)
                S2 = S @ S
                X = Ti @ S
                r = max(
                    float(np.max(np.abs(X @ X @ X - S2))),
                    float(np.max(np.abs(Ti @ S2 @ Tm - S2))),
                )
                if r > r_st:
                    r_st, w_st = r, [cat.labels[a]]
            if best is None or r_st < best[0]:
                best = (r_st, w_st, c)
            if r_st < max(tol, 1e-8):
                best = (r_st, w_st, c)
                break
        parts.append(CheckReport("S-T-relation", best[0], max(tol, 1e-8), {"at": best[1], "c_lift": best[2]}))
    return composite(f"modular[{cat.name}]", parts, tol, total[0])
