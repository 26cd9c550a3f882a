"""Algebra objects given by structure morphisms, and the checks on them.

An :class:`Algebra` lives on a direct sum of words (usually one-letter words,
one per simple component counted with multiplicity) and carries ``μ``, ``ι``
and optionally ``Δ``, ``ε`` and an isomorphism ``φ: A → A'``.  When ``φ`` is
given but ``Δ, ε`` are not, they are generated from the pairing
``P = e_A∘(φ⊗id)``: ``ε = P∘(ι⊗id)`` and ``Δ = (μ⊗id)∘(id⊗Q)`` with ``Q`` the
copairing inverse to ``P``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import homspace as hs
from . import sums
from .category import Category, InputError, SchemaError
from .report import CheckReport, composite, timer
from .sums import SumHom


@dataclass(eq=False)
class Algebra:
    host: Category
    obj: sums.Obj
    mu: SumHom
    iota: SumHom
    delta: SumHom | None = None
    eps: SumHom | None = None
    phi: SumHom | None = None
    name: str = "A"
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.obj)

    @property
    def simple(self) -> bool:
        return all(len(w) == 1 for w in self.obj)

    @property
    def comps(self) -> tuple[int, ...]:
        if not self.simple:
            raise ValueError("algebra is not presented on simple components")
        return tuple(w[0] for w in self.obj)

    def comp_names(self) -> list[str]:
        seen: dict[tuple[int, ...], int] = {}
        out = []
        for w in self.obj:
            k = seen.get(w, 0)
            seen[w] = k + 1
            out.append(f"{'.'.join(self.host.label_names(w)) or '1'}#{k}")
        return out

    def dual(self) -> sums.Obj:
        return sums.dual_obj(self.host, self.obj)

    def id(self) -> SumHom:
        return sums.identity(self.host, self.obj)

    def with_(self, **kw) -> Algebra:
        return replace(self, **kw)


# ----- derived structure ------------------------------------------------------------


def pairing(A: Algebra) -> SumHom:
    """``P = e_A∘(φ⊗id): A⊗A → 1``."""
    if A.phi is None:
        raise InputError(f"{A.name} carries no φ")
    return sums.ev(A.host, A.obj) @ sums.tensor(A.phi, A.id())


def copairing(A: Algebra) -> SumHom:
    """``Q = (id⊗φ⁻¹)∘i_A: 1 → A⊗A``, inverse to :func:`pairing` in the zigzag sense."""
    if A.phi is None:
        raise InputError(f"{A.name} carries no φ")
    return sums.tensor(A.id(), sums.inverse(A.phi)) @ sums.coev(A.host, A.obj)


def derive_coalgebra(A: Algebra) -> tuple[SumHom, SumHom]:
    """``(Δ, ε)`` generated from ``(μ, ι, φ)``."""
    Q = copairing(A)
    delta = sums.tensor(A.mu, A.id()) @ sums.tensor(A.id(), Q)
    eps = pairing(A) @ sums.tensor(A.iota, A.id())
    return delta, eps


def with_coalgebra(A: Algebra) -> Algebra:
    """Fill in ``Δ, ε`` from ``φ`` where missing."""
    if A.delta is not None and A.eps is not None:
        return A
    d, e = derive_coalgebra(A)
    return A.with_(delta=A.delta or d, eps=A.eps or e, meta={**A.meta, "coalgebra": "derived from phi"})


def form_from_counit(A: Algebra, right: bool = False) -> SumHom:
    """``ε∘μ`` bent into a map ``A → A'``, with the right-duality cup (default) or the left one."""
    if A.eps is None:
        raise InputError(f"{A.name} carries no counit")
    cat = A.host
    em = A.eps @ A.mu
    Ad = A.dual()
    if not right:
        return sums.tensor(em, sums.identity(cat, Ad)) @ sums.tensor(A.id(), sums.coev(cat, A.obj))
    return sums.tensor(sums.identity(cat, Ad), em) @ sums.tensor(sums.coev_right(cat, A.obj), A.id())


# ----- checks -------------------------------------------------------------------------


def _rep(A: Algebra, name: str, lhs: SumHom, rhs: SumHom, tol: float, names_src=None) -> CheckReport:
    r, where = lhs.worst_block(rhs)
    w = None
    if where is not None:
        w = {"block": list(where)}
        if names_src is not None:
            w["source"] = names_src(where[1])
    return CheckReport(name, r, tol, w)


def _triple_names(A: Algebra):
    nm = A.comp_names()
    n = A.n

    def f(i: int):
        return [nm[i // (n * n)], nm[(i // n) % n], nm[i % n]]

    return f


def _pair_names(A: Algebra):
    nm = A.comp_names()
    n = A.n
    return lambda i: [nm[i // n], nm[i % n]]


def check_algebra(A: Algebra, tol: float = 1e-9) -> CheckReport:
    """Associativity and both unit laws."""
    I = A.id()
    with timer() as t:
        assoc = _rep(A, "associativity", A.mu @ sums.tensor(A.mu, I), A.mu @ sums.tensor(I, A.mu), tol, _triple_names(A))
        ul = _rep(A, "left-unit", A.mu @ sums.tensor(A.iota, I), I, tol)
        ur = _rep(A, "right-unit", A.mu @ sums.tensor(I, A.iota), I, tol)
    return composite(f"algebra[{A.name}]", [assoc, ul, ur], tol, t[0])


def check_frobenius(A: Algebra, tol: float = 1e-9) -> CheckReport:
    """Coassociativity, counit laws and both Frobenius relations; plus agreement with φ-generated Δ, ε."""
    parts: list[CheckReport] = []
    with timer() as t:
        if (A.delta is None or A.eps is None) and A.phi is None:
            raise InputError(f"{A.name}: need Δ and ε, or φ")
        B = with_coalgebra(A)
        I = B.id()
        d, e, m = B.delta, B.eps, B.mu
        parts.append(_rep(B, "coassociativity", sums.tensor(d, I) @ d, sums.tensor(I, d) @ d, tol))
        parts.append(_rep(B, "left-counit", sums.tensor(e, I) @ d, I, tol))
        parts.append(_rep(B, "right-counit", sums.tensor(I, e) @ d, I, tol))
        dm = d @ m
        parts.append(_rep(B, "frobenius-left", sums.tensor(m, I) @ sums.tensor(I, d), dm, tol, _pair_names(B)))
        parts.append(_rep(B, "frobenius-right", sums.tensor(I, m) @ sums.tensor(d, I), dm, tol, _pair_names(B)))
        if A.delta is not None and A.eps is not None and A.phi is not None:
            d2, e2 = derive_coalgebra(A)
            parts.append(CheckReport("coalgebra-from-phi", max(d2.dist(A.delta), e2.dist(A.eps)), tol))
    rep = composite(f"frobenius[{A.name}]", parts, tol, t[0])
    if B is not A:
        rep.note = "coalgebra derived from phi"
    return rep


def check_symmetric(A: Algebra, tol: float = 1e-9) -> CheckReport:
    """Both bendings of ``ε∘μ`` equal φ, and the pairing is invariant: ``P(μ⊗id) = P(id⊗μ)``."""
    if A.phi is None:
        raise InputError(f"{A.name} carries no φ")
    with timer() as t:
        B = with_coalgebra(A)
        left = form_from_counit(B)
        right = form_from_counit(B, right=True)
        P = pairing(B)
        I = B.id()
        parts = [
            _rep(B, "symmetric-left-bend", left, B.phi, tol),
            _rep(B, "symmetric-right-bend", right, B.phi, tol),
            _rep(B, "invariant-form", P @ sums.tensor(B.mu, I), P @ sums.tensor(I, B.mu), tol),
        ]
        cond = sums.condition_number(B.phi)
    rep = composite(f"symmetric[{A.name}]", parts, tol, t[0])
    rep.witness = {**(rep.witness or {}), "phi_condition_number": cond}
    rep.note = f"phi condition number {cond:.3g}"
    return rep


def check_commutative_trivial_twist(A: Algebra, tol: float = 1e-9) -> CheckReport:
    """``μ∘c_{A,A} = μ`` in the host braiding and ``θ_A = id``."""
    cat = A.host
    with timer() as t:
        comm = _rep(A, "commutativity", A.mu @ sums.braid(cat, A.obj, A.obj), A.mu, tol, _pair_names(A))
        tw = sums.twist(cat, A.obj)
        r, where = tw.worst_block(A.id())
        w = None if where is None else {"component": A.comp_names()[where[0]]}
        twist = CheckReport("trivial-twist", r, tol, w)
    return composite(f"commutative[{A.name}]", [comm, twist], tol, t[0])


def check_all(A: Algebra, tol: float = 1e-9) -> CheckReport:
    parts = [check_algebra(A, tol)]
    if A.phi is not None or (A.delta is not None and A.eps is not None):
        parts.append(check_frobenius(A, tol))
    if A.phi is not None:
        parts.append(check_symmetric(A, tol))
    return composite(f"frobenius-suite[{A.name}]", parts, tol)


# ----- construction helpers ------------------------------------------------------------


def unit_algebra(cat: Category, copies: int = 1) -> Algebra:
    """The unit object (or ``copies`` of it as a matrix algebra is not intended: copies=1)."""
    u = cat.unit
    A = ((u,),)
    mu = SumHom(cat, sums.tensor_obj(A, A), A, {(0, 0): hs.vertex(cat, u, u, u)})
    iota = SumHom(cat, sums.UNIT, A, {(0, 0): _scalar_hom(cat, (), (u,), 1.0)})
    phi = SumHom(cat, A, sums.dual_obj(cat, A), {(0, 0): _scalar_hom(cat, (u,), (u,), 1.0)})
    return Algebra(cat, A, mu, iota, phi=phi, name="unit")


def _scalar_hom(cat: Category, src, tgt, v: complex) -> hs.Hom:
    h = hs.zero(cat, src, tgt)
    for c, b in h.blocks.items():
        if b.size:
            b[0, 0] = v
    return h


def from_tables(cat: Category, comps: list[int], mu: Mapping, iota: Mapping, phi: Mapping | None = None,
                delta: Mapping | None = None, eps: Mapping | None = None, name: str = "A") -> Algebra:
    """Build from coefficient tables on simple components.

    ``mu[(i,j,k)]`` is the vector of coefficients of ``e^{c_k}_{c_i c_j;t}``; ``iota[k]``, ``eps[k]``
    scalars on unit components; ``phi[(j,i)]`` the scalar of ``c_i → (c_j)'``; ``delta[(i,j,k)]``
    the coefficients of ``f^{c_i c_j}_{c_k;t}``.
    """
    A = tuple((int(c),) for c in comps)
    n = len(A)
    AA = sums.tensor_obj(A, A)
    m = SumHom(cat, AA, A)
    for (i, j, k), v in mu.items():
        v = np.atleast_1d(np.asarray(v, dtype=complex))
        a, b, c = comps[i], comps[j], comps[k]
        if len(v) > cat.N[a, b, c]:
            raise SchemaError(f"no channel {cat.label_names((a, b, c))} with index {len(v) - 1}")
        if not np.any(v):
            continue
        h = hs.zero(cat, (a, b), (c,))
        h.blocks[c][0, :len(v)] = v
        m.blocks[(k, i * n + j)] = h
    io = SumHom(cat, sums.UNIT, A)
    for k, v in iota.items():
        if comps[k] != cat.unit:
            raise SchemaError("iota must land on unit components")
        io.blocks[(k, 0)] = _scalar_hom(cat, (), (comps[k],), complex(v))
    ph = None
    if phi is not None:
        Ad = sums.dual_obj(cat, A)
        ph = SumHom(cat, A, Ad)
        for (j, i), v in phi.items():
            if comps[i] != Ad[j][0]:
                raise SchemaError(f"phi maps {cat.labels[comps[i]]} to the dual of {cat.labels[comps[j]]}")
            ph.blocks[(j, i)] = _scalar_hom(cat, (comps[i],), Ad[j], complex(v))
    de = ep = None
    if delta is not None:
        de = SumHom(cat, A, AA)
        for (i, j, k), v in delta.items():
            v = np.atleast_1d(np.asarray(v, dtype=complex))
            h = hs.zero(cat, (comps[k],), (comps[i], comps[j]))
            h.blocks[comps[k]][:len(v), 0] = v
            de.blocks[(i * n + j, k)] = h
    if eps is not None:
        ep = SumHom(cat, A, sums.UNIT)
        for k, v in eps.items():
            ep.blocks[(0, k)] = _scalar_hom(cat, (comps[k],), (), complex(v))
    return Algebra(cat, A, m, io, de, ep, ph, name=name)


def transport(A: Algebra, emb: SumHom, proj: SumHom, name: str | None = None) -> Algebra:
    """Move ``A`` along a decomposition ``proj∘emb = id`` onto the summands of ``emb.src``."""
    B = emb.src
    cat = A.host
    mu = proj @ A.mu @ sums.tensor(emb, emb)
    iota = proj @ A.iota
    delta = None if A.delta is None else sums.tensor(proj, proj) @ A.delta @ emb
    eps = None if A.eps is None else A.eps @ emb
    phi = None
    if A.phi is not None:
        phi = sums.transpose(emb) @ A.phi @ emb
    out = Algebra(cat, B, mu, iota, delta, eps, phi, name=name or A.name, meta=dict(A.meta))
    return out


# ----- JSON ------------------------------------------------------------------------------


def _cplx(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _row(h: hs.Hom, c: int, col: bool = False) -> np.ndarray:
    b = h.blocks.get(c)
    if b is None:
        return np.zeros(0, dtype=complex)
    return b[:, 0] if col else b[0]


def _label_out(A: Algebra, c: int, double: bool):
    if double:
        from .double import split_label, base_of

        a, b = split_label(A.host, c)
        base = base_of(A.host)
        return [base.labels[a], base.labels[b]]
    return A.host.labels[c]


def to_json(A: Algebra, double: bool = False) -> dict:
    comps = A.comps
    cat = A.host
    copy: list[int] = []
    seen: dict[int, int] = {}
    for c in comps:
        copy.append(seen.get(c, 0))
        seen[c] = seen.get(c, 0) + 1
    ref = lambda i: [_label_out(A, comps[i], double), copy[i]]  # noqa: E731
    n = A.n
    order: list[int] = []
    for c in comps:
        if c not in order:
            order.append(c)
    out: dict[str, Any] = {
        "host": "double" if double else "base",
        "category": (cat._cache.get("base").name if double and cat._cache.get("base") else cat.name),
        "name": A.name,
        "components": [[_label_out(A, c, double), seen[c]] for c in order],
        "mu": [],
        "iota": [],
    }
    for (k, ij), h in sorted(A.mu.blocks.items()):
        i, j = divmod(ij, n)
        row = _row(h, comps[k])
        for t, v in enumerate(row):
            if v != 0:
                out["mu"].append({"a": ref(i), "b": ref(j), "c": ref(k), "t": t, "v": _cplx(v)})
    for (k, _), h in sorted(A.iota.blocks.items()):
        v = _row(h, cat.unit)[:1].sum()
        if v != 0:
            out["iota"].append({"c": ref(k), "v": _cplx(v)})
    if A.phi is not None:
        out["phi"] = []
        for (j, i), h in sorted(A.phi.blocks.items()):
            v = _row(h, comps[i])[:1].sum()
            if v != 0:
                out["phi"].append({"a": ref(i), "b": ref(j), "v": _cplx(v)})
    if A.delta is not None:
        out["delta"] = []
        for (ij, k), h in sorted(A.delta.blocks.items()):
            i, j = divmod(ij, n)
            for t, v in enumerate(_row(h, comps[k], col=True)):
                if v != 0:
                    out["delta"].append({"a": ref(i), "b": ref(j), "c": ref(k), "t": t, "v": _cplx(v)})
    if A.eps is not None:
        out["eps"] = []
        for (_, k), h in sorted(A.eps.blocks.items()):
            v = _row(h, cat.unit)[:1].sum()
            if v != 0:
                out["eps"].append({"c": ref(k), "v": _cplx(v)})
    return out


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise SchemaError(msg)


def from_json(raw: Mapping | str | Path, cat: Category) -> Algebra:
    """Parse the algebra schema; ``cat`` is the base category (the double is built when needed)."""
    if isinstance(raw, (str, Path)):
        try:
            raw = json.loads(Path(raw).read_text())
        except json.JSONDecodeError as e:
            from .category import ParseError

            raise ParseError(f"{raw}:{e.lineno}:{e.colno}: {e.msg}") from None
        except OSError as e:
            raise InputError(str(e)) from None
    _expect(isinstance(raw, Mapping), "algebra JSON must be an object")
    host = raw.get("host", "base")
    _expect(host in ("base", "double"), "host must be 'base' or 'double'")
    if host == "double":
        from .double import build_double, pair_label

        dcat = build_double(cat)

        def lab(x) -> int:
            _expect(isinstance(x, list) and len(x) == 2, f"double label must be a pair, got {x!r}")
            return pair_label(dcat, cat.index(x[0]), cat.index(x[1]))
        H = dcat
    else:
        H = cat

        def lab(x) -> int:
            _expect(isinstance(x, (str, int)), f"label must be a string, got {x!r}")
            return cat.index(x)

    comps_raw = raw.get("components")
    _expect(isinstance(comps_raw, list) and comps_raw, "components must be a non-empty list")
    comps: list[int] = []
    pos: dict[tuple[int, int], int] = {}
    for entry in comps_raw:
        _expect(isinstance(entry, list) and len(entry) == 2, f"component entry {entry!r} must be [label, mult]")
        c = lab(entry[0])
        m = entry[1]
        _expect(isinstance(m, int) and m >= 1, f"multiplicity must be a positive integer, got {m!r}")
        for k in range(m):
            _expect((c, k) not in pos, f"component {entry[0]!r} listed twice")
            pos[(c, k)] = len(comps)
            comps.append(c)

    def ref(x, what: str) -> int:
        _expect(isinstance(x, list) and len(x) == 2 and isinstance(x[1], int), f"{what} must be [label, index]")
        key = (lab(x[0]), x[1])
        _expect(key in pos, f"{what} refers to unknown component {x!r}")
        return pos[key]

    def val(e) -> complex:
        v = e.get("v")
        _expect(isinstance(v, list) and len(v) == 2 and all(isinstance(z, (int, float)) for z in v), "v must be [re, im]")
        return complex(v[0], v[1])

    def table3(key: str) -> dict:
        out: dict[tuple[int, int, int], np.ndarray] = {}
        for e in raw.get(key, []) or []:
            _expect(isinstance(e, Mapping), f"{key} entries must be objects")
            i, j, k = ref(e.get("a"), f"{key}.a"), ref(e.get("b"), f"{key}.b"), ref(e.get("c"), f"{key}.c")
            t = e.get("t", 0)
            _expect(isinstance(t, int) and t >= 0, f"{key}.t must be a non-negative integer")
            a, b, c = (comps[i], comps[j], comps[k]) if key == "mu" else (comps[i], comps[j], comps[k])
            _expect(t < H.N[a, b, c], f"{key}: no channel {H.label_names((a, b, c))} with index {t}")
            v = out.setdefault((i, j, k), np.zeros(int(H.N[a, b, c]), dtype=complex))
            v[t] += val(e)
        return out

    mu = table3("mu")
    iota = {}
    for e in raw.get("iota", []) or []:
        k = ref(e.get("c"), "iota.c")
        _expect(comps[k] == H.unit, "iota must land on unit components")
        iota[k] = val(e)
    phi = None
    if raw.get("phi") is not None:
        phi = {}
        for e in raw["phi"]:
            i, j = ref(e.get("a"), "phi.a"), ref(e.get("b"), "phi.b")
            _expect(comps[i] == int(H.dual[comps[j]]), "phi must map a component to the dual of a component")
            phi[(j, i)] = val(e)
    delta = table3("delta") if raw.get("delta") is not None else None
    eps = None
    if raw.get("eps") is not None:
        eps = {}
        for e in raw["eps"]:
            k = ref(e.get("c"), "eps.c")
            _expect(comps[k] == H.unit, "eps is nonzero only on unit components")
            eps[k] = val(e)
    return from_tables(H, comps, mu, iota, phi, delta, eps, name=str(raw.get("name", "A")))
