"""Skeletal ribbon fusion category data: loading, serialisation and axiom checks.

A category is stored in the fusion-morphism convention.  For each admissible
triple there is a basis ``e^c_{ab;i}`` of ``hom(a⊗b, c)``.  The F-symbol is
defined by

    e^d_{ec;j} ∘ (e^e_{ab;i} ⊗ id_c) = Σ_{f,k,l} F[a,b,c,d; e,f; i,j,k,l] · e^d_{af;l} ∘ (id_a ⊗ e^f_{bc;k})

and the R-symbol by ``e^c_{ba;j} ∘ c_{a,b} = Σ_i R[a,b,c; i,j] · e^c_{ab;i}``.
Twists are the eigenvalues of θ on simple objects (θ = e^{-2πi h}).
"""
from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from .report import CheckReport, composite, timer

BUILTINS = ("trivial", "fibonacci", "ising", "z3")
_ALIASES = {"fib": "fibonacci", "triv": "trivial", "Z3": "z3", "zn3": "z3"}


class InputError(ValueError):
    """Raised for any problem with user-supplied data; the CLI maps it to exit code 2."""


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class ValueRangeError(InputError):
    pass


@dataclass(eq=False)
class Category:
    """Skeletal data for a (pre)modular category.

    ``F`` maps ``(a,b,c,d,e,f,i,j,k,l)`` and ``R`` maps ``(a,b,c,i,j)`` to complex
    numbers, all labels being integer indices into ``labels``.  Missing entries
    are zero.
    """

    name: str
    labels: tuple[str, ...]
    unit: int
    dual: np.ndarray
    N: np.ndarray
    F: dict[tuple[int, ...], complex]
    R: dict[tuple[int, ...], complex]
    dims: np.ndarray
    twists: np.ndarray
    fs: np.ndarray
    cmod8: float
    cmod24: float | None = None
    comment: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    # ----- basic accessors -------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: int | str) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= int(label) < self.rank:
                raise InputError(f"label index {label} out of range")
            return int(label)
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise InputError(f"unknown label {label!r} in category {self.name}") from None

    def mult(self, a: int, b: int, c: int) -> int:
        return int(self.N[a, b, c])

    def channels(self, a: int, b: int) -> list[int]:
        return [int(c) for c in np.nonzero(self.N[a, b])[0]]

    @property
    def multiplicity_free(self) -> bool:
        return int(self.N.max(initial=0)) <= 1

    @property
    def global_dim(self) -> float:
        """Positive square root of Σ dim²a."""
        return float(math.sqrt(float(np.sum(self.dims**2))))

    @property
    def p_minus(self) -> complex:
        return complex(np.sum(self.twists * self.dims**2))

    @property
    def p_plus(self) -> complex:
        return complex(np.sum(self.dims**2 / self.twists))

    def F_block(self, a: int, b: int, c: int, d: int):
        """Rows ``(e,i,j)`` (left-associated trees), columns ``(f,k,l)`` (right-associated)."""
        key = ("F", a, b, c, d)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        rows = [
            (e, i, j)
            for e in range(self.rank)
            for i in range(self.N[a, b, e])
            for j in range(self.N[e, c, d])
        ]
        cols = [
            (f, k, l)
            for f in range(self.rank)
            for k in range(self.N[b, c, f])
            for l in range(self.N[a, f, d])
        ]
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        for r, (e, i, j) in enumerate(rows):
            for s, (f, k, l) in enumerate(cols):
                M[r, s] = self.F.get((a, b, c, d, e, f, i, j, k, l), 0.0)
        out = (rows, cols, M)
        self._cache[key] = out
        return out

    def F_inv_block(self, a: int, b: int, c: int, d: int):
        """Inverse of :meth:`F_block`: rows ``(f,k,l)``, columns ``(e,i,j)``."""
        key = ("Finv", a, b, c, d)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        rows, cols, M = self.F_block(a, b, c, d)
        if M.shape[0] != M.shape[1]:
            raise InputError(f"F block ({a},{b},{c},{d}) is not square")
        out = (cols, rows, np.linalg.inv(M) if M.size else M.T.copy())
        self._cache[key] = out
        return out

    def R_block(self, a: int, b: int, c: int) -> np.ndarray:
        """Matrix ``R[i,j]`` with ``i`` a vertex of (a,b→c) and ``j`` of (b,a→c)."""
        key = ("R", a, b, c)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        M = np.zeros((self.N[a, b, c], self.N[b, a, c]), dtype=complex)
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                M[i, j] = self.R.get((a, b, c, i, j), 0.0)
        self._cache[key] = M
        return M

    def Rminus_block(self, a: int, b: int, c: int) -> np.ndarray:
        """R-symbol of the reversed braiding ``c⁻_{a,b} = (c_{b,a})⁻¹``."""
        key = ("Rm", a, b, c)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        M = self.R_block(b, a, c)
        out = np.linalg.inv(M) if M.size else M.T.copy()
        self._cache[key] = out
        return out

    def label_names(self, idx: Iterable[int]) -> list[str]:
        return [self.labels[int(i)] for i in idx]

    # ----- serialisation ---------------------------------------------------

    def to_dict(self) -> dict:
        L = self.labels
        fusion = [
            [L[a], L[b], L[c], int(self.N[a, b, c])]
            for a, b, c in itertools.product(range(self.rank), repeat=3)
            if self.N[a, b, c]
        ]
        F = [
            {
                "a": L[k[0]], "b": L[k[1]], "c": L[k[2]], "d": L[k[3]],
                "e": L[k[4]], "f": L[k[5]],
                "i": k[6], "j": k[7], "k": k[8], "l": k[9],
                "value": _cplx_out(v),
            }
            for k, v in sorted(self.F.items())
        ]
        R = [
            {"a": L[k[0]], "b": L[k[1]], "c": L[k[2]], "i": k[3], "j": k[4], "value": _cplx_out(v)}
            for k, v in sorted(self.R.items())
        ]
        out = {
            "name": self.name,
            "labels": list(L),
            "unit": L[self.unit],
            "dual": {L[a]: L[int(self.dual[a])] for a in range(self.rank)},
            "fusion": fusion,
            "F": F,
            "R": R,
            "dims": {L[a]: float(self.dims[a]) for a in range(self.rank)},
            "twists": {L[a]: _cplx_out(complex(self.twists[a])) for a in range(self.rank)},
            "fs": {L[a]: int(self.fs[a]) for a in range(self.rank)},
            "cmod8": self.cmod8,
        }
        if self.cmod24 is not None:
            out["cmod24"] = self.cmod24
        if self.comment:
            out["comment"] = self.comment
        return out

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))


def _cplx_out(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _cplx_in(v: Any, where: str) -> complex:
    if isinstance(v, bool):
        raise SchemaError(f"{where}: expected a number, got bool")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, Mapping) and set(v) <= {"re", "im"}:
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            pass
    raise SchemaError(f"{where}: cannot read complex value {v!r}")


# ----- loading -------------------------------------------------------------

_REQUIRED = ("labels", "unit", "dual", "fusion", "F", "R", "dims", "twists", "cmod8")


def builtin(name: str) -> Category:
    """Load one of the shipped categories: trivial, fibonacci, ising, z3."""
    key = _ALIASES.get(name, name).lower()
    if key not in BUILTINS:
        raise InputError(f"unknown built-in category {name!r}; choose from {', '.join(BUILTINS)}")
    text = resources.files("mtcalc.data").joinpath(f"{key}.json").read_text()
    return load_category(json.loads(text))


def load_category(source: str | Path | Mapping) -> Category:
    """Parse and validate a category from a path, a JSON string or a mapping.

    Raises :class:`ParseError`, :class:`SchemaError` or :class:`ValueRangeError`.
    """
    if isinstance(source, Mapping):
        raw = source
    else:
        text = None
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith(("{", "["))):
            p = Path(source)
            if not p.exists():
                raise ParseError(f"no such file: {source}")
            text = p.read_text()
        else:
            text = str(source)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, Mapping):
        raise SchemaError("top level must be an object")
    return _from_raw(raw)


def _from_raw(raw: Mapping) -> Category:
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")
    labels = raw["labels"]
    if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
        raise SchemaError("labels must be a non-empty list of strings")
    if len(set(labels)) != len(labels):
        raise SchemaError("labels must be unique")
    n = len(labels)
    pos = {x: i for i, x in enumerate(labels)}

    def lab(x: Any, where: str) -> int:
        if isinstance(x, str) and x in pos:
            return pos[x]
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n:
            return x
        raise SchemaError(f"{where}: dangling label reference {x!r}")

    def per_label(obj: Any, what: str) -> list[Any]:
        if isinstance(obj, Mapping):
            out = []
            for x in labels:
                if x not in obj:
                    raise SchemaError(f"{what}: no entry for label {x!r}")
                out.append(obj[x])
            extra = set(obj) - set(labels)
            if extra:
                raise SchemaError(f"{what}: dangling label reference {sorted(extra)[0]!r}")
            return out
        if isinstance(obj, list) and len(obj) == n:
            return list(obj)
        raise SchemaError(f"{what}: expected one entry per label")

    unit = lab(raw["unit"], "unit")
    dual = np.array([lab(x, "dual") for x in per_label(raw["dual"], "dual")], dtype=int)
    if np.any(dual[dual] != np.arange(n)):
        bad = int(np.nonzero(dual[dual] != np.arange(n))[0][0])
        raise SchemaError(f"dual: involution violated at {labels[bad]!r}")
    if dual[unit] != unit:
        raise SchemaError("dual: the unit must be self-dual")

    N = np.zeros((n, n, n), dtype=int)
    if not isinstance(raw["fusion"], list):
        raise SchemaError("fusion must be a list")
    for ent in raw["fusion"]:
        if isinstance(ent, Mapping):
            ent = [ent.get("a"), ent.get("b"), ent.get("c"), ent.get("N", 1)]
        if not isinstance(ent, (list, tuple)) or len(ent) not in (3, 4):
            raise SchemaError(f"fusion entry {ent!r} must be [a, b, c, N]")
        a, b, c = (lab(x, "fusion") for x in ent[:3])
        m = ent[3] if len(ent) == 4 else 1
        if not isinstance(m, int) or isinstance(m, bool) or m < 0:
            raise ValueRangeError(f"fusion multiplicity {m!r} must be a non-negative integer")
        N[a, b, c] = m

    def mult_index(v: Any, bound: int, where: str) -> int:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < bound:
            raise SchemaError(f"{where}: multiplicity index {v!r} outside range {bound}")
        return v

    F: dict[tuple[int, ...], complex] = {}
    if not isinstance(raw["F"], list):
        raise SchemaError("F must be a list")
    for ent in raw["F"]:
        if not isinstance(ent, Mapping) or "value" not in ent:
            raise SchemaError("each F entry needs a, b, c, d, e, f and value")
        try:
            a, b, c, d, e, f = (lab(ent[k], "F") for k in "abcdef")
        except KeyError as exc:
            raise SchemaError(f"F entry missing field {exc}") from None
        i = mult_index(ent.get("i", 0), max(N[a, b, e], 1), "F")
        j = mult_index(ent.get("j", 0), max(N[e, c, d], 1), "F")
        k = mult_index(ent.get("k", 0), max(N[b, c, f], 1), "F")
        l = mult_index(ent.get("l", 0), max(N[a, f, d], 1), "F")
        if not (N[a, b, e] and N[e, c, d] and N[b, c, f] and N[a, f, d]):
            raise SchemaError(f"F entry {labels[a]},{labels[b]},{labels[c]},{labels[d]};{labels[e]},{labels[f]} is not admissible")
        F[(a, b, c, d, e, f, i, j, k, l)] = _cplx_in(ent["value"], "F value")

    R: dict[tuple[int, ...], complex] = {}
    if not isinstance(raw["R"], list):
        raise SchemaError("R must be a list")
    for ent in raw["R"]:
        if not isinstance(ent, Mapping) or "value" not in ent:
            raise SchemaError("each R entry needs a, b, c and value")
        try:
            a, b, c = (lab(ent[k], "R") for k in "abc")
        except KeyError as exc:
            raise SchemaError(f"R entry missing field {exc}") from None
        if not (N[a, b, c] and N[b, a, c]):
            raise SchemaError(f"R entry {labels[a]},{labels[b]},{labels[c]} is not admissible")
        i = mult_index(ent.get("i", 0), N[a, b, c], "R")
        j = mult_index(ent.get("j", 0), N[b, a, c], "R")
        R[(a, b, c, i, j)] = _cplx_in(ent["value"], "R value")

    dims = np.array([float(_real(x, "dims")) for x in per_label(raw["dims"], "dims")])
    if np.any(dims <= 0):
        raise ValueRangeError("dims must be positive")
    twists = np.array([_cplx_in(x, "twists") for x in per_label(raw["twists"], "twists")])
    if np.any(np.abs(np.abs(twists) - 1.0) > 1e-9):
        bad = int(np.argmax(np.abs(np.abs(twists) - 1.0)))
        raise ValueRangeError(f"twist of {labels[bad]!r} is not of unit modulus")
    if "fs" in raw:
        fs = np.array([int(_real(x, "fs")) for x in per_label(raw["fs"], "fs")], dtype=int)
        if np.any(np.abs(fs) != 1):
            raise ValueRangeError("fs indicators must be ±1")
    else:
        fs = np.ones(n, dtype=int)
    cmod8 = _real(raw["cmod8"], "cmod8")
    cmod24 = raw.get("cmod24")
    if cmod24 is not None:
        cmod24 = _real(cmod24, "cmod24")
    return Category(
        name=str(raw.get("name", "category")),
        labels=tuple(labels),
        unit=unit,
        dual=dual,
        N=N,
        F=F,
        R=R,
        dims=dims,
        twists=twists,
        fs=fs,
        cmod8=float(cmod8),
        cmod24=None if cmod24 is None else float(cmod24),
        comment=str(raw.get("comment", "")),
    )


def _real(x: Any, where: str) -> float:
    if isinstance(x, bool):
        raise SchemaError(f"{where}: expected a number")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x))
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"{where}: expected a number, got {x!r}")


# ----- central charge hint -------------------------------------------------


def reverse_braiding(cat: Category, name: str | None = None) -> Category:
    """The same fusion data with braiding ``c⁻_{a,b} = (c_{b,a})⁻¹`` and twists ``θ⁻¹``.

    Duality data depends only on F, so it is unchanged; c mod 8 changes sign.
    """
    R: dict[tuple[int, ...], complex] = {}
    n = cat.rank
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if not cat.N[a, b, c]:
                    continue
                M = cat.Rminus_block(a, b, c)
                for i in range(M.shape[0]):
                    for j in range(M.shape[1]):
                        if M[i, j] != 0:
                            R[(a, b, c, i, j)] = complex(M[i, j])
    return Category(
        name=name or f"{cat.name}-rev",
        labels=cat.labels,
        unit=cat.unit,
        dual=cat.dual.copy(),
        N=cat.N.copy(),
        F=dict(cat.F),
        R=R,
        dims=cat.dims.copy(),
        twists=1.0 / cat.twists,
        fs=cat.fs.copy(),
        cmod8=-cat.cmod8 if cat.cmod8 != 4.0 else 4.0,
        cmod24=None if cat.cmod24 is None else -cat.cmod24,
        comment="braiding reversed",
    )


def mirror_charge_hint(cat: Category) -> Fraction | None:
    """The c mod 8 (in (-4, 4]) making ``p₋ e^{-2πic/8}`` real positive.

    Returns ``None`` when ``p₋`` vanishes, in which case no hint exists.
    """
    pm = cat.p_minus
    if abs(pm) < 1e-12:
        return None
    c = 8.0 * cmath.phase(pm) / (2 * math.pi)
    c = (c + 4.0) % 8.0 - 4.0
    if c <= -4.0 + 1e-12:
        c += 8.0
    return Fraction(c).limit_denominator(240)


# ----- vectorised axiom checks ---------------------------------------------


class _Table:
    """Sparse lookup of complex values keyed by integer tuples (missing → 0)."""

    def __init__(self, entries: Mapping[tuple[int, ...], complex], radix: Iterable[int]):
        self.radix = np.array(list(radix), dtype=np.int64)
        self.width = len(self.radix)
        if entries:
            keys = np.array(list(entries.keys()), dtype=np.int64).reshape(-1, self.width)
            vals = np.array(list(entries.values()), dtype=complex)
        else:
            keys = np.zeros((0, self.width), dtype=np.int64)
            vals = np.zeros(0, dtype=complex)
        code = self._encode(keys.T)
        order = np.argsort(code)
        self.codes = code[order]
        self.vals = vals[order]

    def _encode(self, cols) -> np.ndarray:
        code = np.zeros(np.shape(cols[0]) if len(cols) else 0, dtype=np.int64)
        for col, r in zip(cols, self.radix):
            code = code * r + np.asarray(col, dtype=np.int64)
        return code

    def __call__(self, *cols) -> np.ndarray:
        cols = np.broadcast_arrays(*[np.asarray(c, dtype=np.int64) for c in cols])
        code = self._encode(cols)
        if self.codes.size == 0:
            return np.zeros(code.shape, dtype=complex)
        pos = np.searchsorted(self.codes, code)
        pos = np.clip(pos, 0, self.codes.size - 1)
        hit = self.codes[pos] == code
        return np.where(hit, self.vals[pos], 0.0)


def _join(k1: np.ndarray, k2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (p, q) with ``k1[p] == k2[q]`` (an equi-join)."""
    if k1.size == 0 or k2.size == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e
    o1 = np.argsort(k1, kind="stable")
    o2 = np.argsort(k2, kind="stable")
    u1, s1, c1 = np.unique(k1[o1], return_index=True, return_counts=True)
    u2, s2, c2 = np.unique(k2[o2], return_index=True, return_counts=True)
    _, i1, i2 = np.intersect1d(u1, u2, assume_unique=True, return_indices=True)
    n1, n2 = c1[i1], c2[i2]
    sizes = n1 * n2
    total = int(sizes.sum())
    grp = np.repeat(np.arange(len(i1)), sizes)
    offs = np.arange(total) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    p = offs // n2[grp]
    q = offs % n2[grp]
    return o1[s1[i1][grp] + p], o2[s2[i2][grp] + q]


class _Vertices:
    """All basis vertices ``(x, y → z; μ)`` as flat arrays."""

    def __init__(self, N: np.ndarray):
        xs, ys, zs, ms = [], [], [], []
        for x, y, z in zip(*np.nonzero(N)):
            for m in range(N[x, y, z]):
                xs.append(x)
                ys.append(y)
                zs.append(z)
                ms.append(m)
        self.x = np.array(xs, dtype=np.int64)
        self.y = np.array(ys, dtype=np.int64)
        self.z = np.array(zs, dtype=np.int64)
        self.m = np.array(ms, dtype=np.int64)


def _chain3(V: _Vertices, n: int, left: bool):
    """Enumerate all three-vertex trees on four leaves.

    ``left``: (((ab)_f c)_g d)_e, returning a,b,c,d,e,f,g,α,β,γ.
    otherwise: (a(b(cd)_l)_k)_e, returning a,b,c,d,e,l,k,δ,ζ,η.
    """
    if left:
        p, q = _join(V.z, V.x)  # (ab→f)(fc→g)
        a, b, f, al = V.x[p], V.y[p], V.z[p], V.m[p]
        c, g, be = V.y[q], V.z[q], V.m[q]
        p2, q2 = _join(g, V.x)
        out = dict(
            a=a[p2], b=b[p2], c=c[p2], f=f[p2], g=g[p2], al=al[p2], be=be[p2],
            d=V.y[q2], e=V.z[q2], ga=V.m[q2],
        )
        return out
    p, q = _join(V.z, V.y)  # (cd→l)(bl→k)
    c, d, l, de = V.x[p], V.y[p], V.z[p], V.m[p]
    b, k, ze = V.x[q], V.z[q], V.m[q]
    p2, q2 = _join(k, V.y)
    return dict(
        c=c[p2], d=d[p2], l=l[p2], de=de[p2], b=b[p2], k=k[p2], ze=ze[p2],
        a=V.x[q2], e=V.z[q2], et=V.m[q2],
    )


def _two_vertex(V: _Vertices, outer_left: bool):
    """Trees ((xy)_z w)_e if ``outer_left`` else (x(yw)_z)_e."""
    if outer_left:
        p, q = _join(V.z, V.x)
        return dict(x=V.x[p], y=V.y[p], z=V.z[p], m1=V.m[p], w=V.y[q], e=V.z[q], m2=V.m[q])
    p, q = _join(V.z, V.y)
    return dict(y=V.x[p], w=V.y[p], z=V.z[p], m1=V.m[p], x=V.x[q], e=V.z[q], m2=V.m[q])


def _key5(n: int, *cols) -> np.ndarray:
    code = np.zeros_like(cols[0])
    for c in cols:
        code = code * n + c
    return code


class _Tables:
    def __init__(self, cat: Category):
        n = cat.rank
        m = max(int(cat.N.max(initial=1)), 1)
        self.n, self.m = n, m
        self.F = _Table(cat.F, [n] * 6 + [m] * 4)
        ginv: dict[tuple[int, ...], complex] = {}
        for a, b, c, d in itertools.product(range(n), repeat=4):
            rows, cols, M = cat.F_block(a, b, c, d)
            if not rows and not cols:
                continue
            if len(rows) != len(cols):
                raise InputError(
                    f"F block {cat.label_names((a, b, c, d))} is {len(rows)}x{len(cols)}, not square"
                )
            r_, c_, Minv = cat.F_inv_block(a, b, c, d)
            for s, (f, k, l) in enumerate(r_):
                for t, (e, i, j) in enumerate(c_):
                    if Minv[s, t] != 0:
                        ginv[(a, b, c, d, f, e, k, l, i, j)] = Minv[s, t]
        self.G = _Table(ginv, [n] * 6 + [m] * 4)
        rp: dict[tuple[int, ...], complex] = {}
        rm: dict[tuple[int, ...], complex] = {}
        for a, b, c in zip(*np.nonzero(cat.N)):
            a, b, c = int(a), int(b), int(c)
            if not cat.N[b, a, c]:
                continue
            P = cat.R_block(a, b, c)
            Q = cat.Rminus_block(a, b, c)
            for i, j in itertools.product(range(P.shape[0]), range(P.shape[1])):
                rp[(a, b, c, i, j)] = P[i, j]
                rm[(a, b, c, i, j)] = Q[i, j]
        self.Rp = _Table(rp, [n] * 3 + [m] * 2)
        self.Rm = _Table(rm, [n] * 3 + [m] * 2)
        self.V = _Vertices(cat.N)


def _worst(res: np.ndarray, cols: list[np.ndarray], cat: Category) -> tuple[float, Any]:
    if res.size == 0:
        return 0.0, None
    if np.any(np.isnan(res)):
        i = int(np.nonzero(np.isnan(res))[0][0])
        return float("nan"), cat.label_names([c[i] for c in cols])
    i = int(np.argmax(res))
    return float(res[i]), cat.label_names([c[i] for c in cols])


def pentagon_residuals(cat: Category, tables: _Tables | None = None):
    """Per-entry pentagon residuals, with the label columns of each entry."""
    T = tables or _Tables(cat)
    n, m = T.n, T.m
    B1 = _chain3(T.V, n, left=True)
    B5 = _chain3(T.V, n, left=False)
    p, q = _join(
        _key5(n, B1["a"], B1["b"], B1["c"], B1["d"], B1["e"]),
        _key5(n, B5["a"], B5["b"], B5["c"], B5["d"], B5["e"]),
    )
    a, b, c, d, e = (B1[k][p] for k in "abcde")
    f, g, al, be, ga = (B1[k][p] for k in ("f", "g", "al", "be", "ga"))
    l, k, de, ze, et = (B5[x][q] for x in ("l", "k", "de", "ze", "et"))
    F = T.F
    lhs = np.zeros(a.shape, dtype=complex)
    for ep in range(m):
        lhs += F(f, c, d, e, g, l, be, ga, de, ep) * F(a, b, l, e, f, k, al, ep, ze, et)
    rhs = np.zeros(a.shape, dtype=complex)
    for h in range(n):
        for mu, nu, rho in itertools.product(range(m), repeat=3):
            rhs += (
                F(a, b, c, g, f, h, al, be, mu, nu)
                * F(a, h, d, e, g, k, nu, ga, rho, et)
                * F(b, c, d, k, h, l, mu, rho, de, ze)
            )
    return np.abs(lhs - rhs), [a, b, c, d, e, f, g, k, l]


def hexagon_residuals(cat: Category, minus: bool = False, tables: _Tables | None = None):
    """Residuals of both hexagon identities for the braiding (or its reverse)."""
    T = tables or _Tables(cat)
    n, m = T.n, T.m
    Rt = T.Rm if minus else T.Rp
    F, G = T.F, T.G
    # first hexagon: Y=((bc)_g a)_e against L=((ab)_f c)_e
    Y = _two_vertex(T.V, outer_left=True)
    p, q = _join(
        _key5(n, Y["w"], Y["x"], Y["y"], Y["e"]),  # keyed as (a,b,c,e)
        _key5(n, Y["x"], Y["y"], Y["w"], Y["e"]),
    )
    b, c, g, ga, a, e, de = (Y[k][p] for k in ("x", "y", "z", "m1", "w", "e", "m2"))
    f, mu_, nu = Y["z"][q], Y["m1"][q], Y["m2"][q]
    lhs = np.zeros(a.shape, dtype=complex)
    for dp in range(m):
        lhs += Rt(a, g, e, dp, de) * G(a, b, c, e, g, f, ga, dp, mu_, nu)
    rhs = np.zeros(a.shape, dtype=complex)
    for h in range(n):
        for ka, la, kp, mu in itertools.product(range(m), repeat=4):
            rhs += (
                F(b, c, a, e, g, h, ga, de, ka, la)
                * Rt(a, c, h, kp, ka)
                * G(b, a, c, e, h, f, kp, la, mu, nu)
                * Rt(a, b, f, mu_, mu)
            )
    r1 = np.abs(lhs - rhs)
    w1 = [a, b, c, e, g, f]
    # second hexagon: Y'=((ca)_h b)_e against L=((ab)_g c)_e
    p, q = _join(
        _key5(n, Y["y"], Y["w"], Y["x"], Y["e"]),  # (c a → h)(h b → e) keyed as (a,b,c,e)
        _key5(n, Y["x"], Y["y"], Y["w"], Y["e"]),
    )
    c, a, h, ka, b, e, la = (Y[k][p] for k in ("x", "y", "z", "m1", "w", "e", "m2"))
    g, mu, nu = Y["z"][q], Y["m1"][q], Y["m2"][q]
    lhs = np.zeros(a.shape, dtype=complex)
    for rho in range(m):
        lhs += F(c, a, b, e, h, g, ka, la, mu, rho) * Rt(g, c, e, nu, rho)
    rhs = np.zeros(a.shape, dtype=complex)
    for f in range(n):
        for kp, si, ta, sp in itertools.product(range(m), repeat=4):
            rhs += (
                Rt(a, c, h, kp, ka)
                * F(a, c, b, e, h, f, kp, la, si, ta)
                * Rt(b, c, f, sp, si)
                * G(a, b, c, e, f, g, sp, ta, mu, nu)
            )
    r2 = np.abs(lhs - rhs)
    return (r1, w1), (r2, [a, b, c, e, h, g])


def validate_category(cat: Category, tol: float = 1e-9) -> CheckReport:
    """Run the full axiom suite and aggregate the per-check reports."""
    parts: list[CheckReport] = []
    with timer() as total:
        parts.append(_check_structure(cat, tol))
        try:
            T = _Tables(cat)
        except (InputError, np.linalg.LinAlgError) as exc:
            parts.append(CheckReport("F-invertible", float("inf"), tol, str(exc)))
            return composite(f"validate[{cat.name}]", parts, tol)
        with timer() as t:
            res, cols = pentagon_residuals(cat, T)
            r, w = _worst(res, cols, cat)
        parts.append(CheckReport("pentagon", r, tol, w, t[0]))
        for minus in (False, True):
            with timer() as t:
                (r1, w1), (r2, w2) = hexagon_residuals(cat, minus, T)
            tag = "R-" if minus else "R+"
            ra, wa = _worst(r1, w1, cat)
            rb, wb = _worst(r2, w2, cat)
            parts.append(CheckReport(f"hexagon-1[{tag}]", ra, tol, wa, t[0] / 2))
            parts.append(CheckReport(f"hexagon-2[{tag}]", rb, tol, wb, t[0] / 2))
        parts.append(_check_dims(cat, tol))
        parts.append(_check_ribbon(cat, tol))
        parts.append(_check_duality_scalars(cat, tol))
        parts.append(_check_D(cat, tol))
    return composite(f"validate[{cat.name}]", parts, tol, total[0])


def _check_structure(cat: Category, tol: float) -> CheckReport:
    with timer() as t:
        n, N, u, dl = cat.rank, cat.N, cat.unit, cat.dual
        bad: list[Any] = []
        ident = np.eye(n, dtype=int)
        if not (np.array_equal(N[u], ident) and np.array_equal(N[:, u], ident)):
            bad.append("unit fusion")
        for a, b, c in itertools.product(range(n), repeat=3):
            if N[a, b, c] != N[dl[b], dl[a], dl[c]] or N[a, b, c] != N[b, dl[c], dl[a]]:
                bad.append(cat.label_names((a, b, c)))
                break
        for a in range(n):
            if N[a, dl[a], u] != 1:
                bad.append(["dual", cat.labels[a]])
        # unit F and R blocks are identities
        worst = 0.0
        for a, b in itertools.product(range(n), repeat=2):
            for c in cat.channels(a, b):
                for blk in (cat.F_block(u, a, b, c), cat.F_block(a, u, b, c), cat.F_block(a, b, u, c)):
                    M = blk[2]
                    if M.shape[0] == M.shape[1]:
                        worst = max(worst, float(np.max(np.abs(M - np.eye(M.shape[0])), initial=0.0)))
                    else:
                        worst = max(worst, math.inf)
            worst = max(worst, float(np.max(np.abs(cat.R_block(u, a, a) - np.eye(1)), initial=0.0)))
            worst = max(worst, float(np.max(np.abs(cat.R_block(a, u, a) - np.eye(1)), initial=0.0)))
    res = math.inf if bad else worst
    return CheckReport("unit-and-fusion", res, tol, bad[0] if bad else None, t[0])


def _check_dims(cat: Category, tol: float) -> CheckReport:
    with timer() as t:
        d = cat.dims
        prod = np.einsum("abc,c->ab", cat.N, d)
        r1 = np.abs(np.outer(d, d) - prod)
        i, j = np.unravel_index(int(np.argmax(r1)), r1.shape)
        res = float(r1[i, j])
        witness: Any = cat.label_names((i, j))
        for a in range(cat.rank):
            ev = np.max(np.abs(np.linalg.eigvals(cat.N[a].astype(float))))
            if abs(ev - d[a]) > res:
                res, witness = float(abs(ev - d[a])), ["perron", cat.labels[a]]
        dd = np.abs(d - d[cat.dual])
        if dd.max() > res:
            res, witness = float(dd.max()), ["dual-dim", cat.labels[int(np.argmax(dd))]]
        if abs(d[cat.unit] - 1.0) > res:
            res, witness = abs(d[cat.unit] - 1.0), ["unit-dim"]
    return CheckReport("dim-equation", res, tol, witness, t[0])


def _check_ribbon(cat: Category, tol: float) -> CheckReport:
    """θ_c/(θ_aθ_b) is the eigenvalue of the monodromy c_{b,a}c_{a,b} in channel c."""
    with timer() as t:
        th = cat.twists
        res, witness = abs(th[cat.unit] - 1.0), ["unit-twist"]
        dt = np.abs(th - th[cat.dual])
        if dt.max() > res:
            res, witness = float(dt.max()), ["dual-twist", cat.labels[int(np.argmax(dt))]]
        for a, b in itertools.product(range(cat.rank), repeat=2):
            for c in cat.channels(a, b):
                mono = cat.R_block(a, b, c) @ cat.R_block(b, a, c)
                r = float(np.max(np.abs(mono - th[c] / (th[a] * th[b]) * np.eye(mono.shape[0]))))
                if r > res:
                    res, witness = r, cat.label_names((a, b, c))
    return CheckReport("ribbon", float(res), tol, witness, t[0])


def _check_duality_scalars(cat: Category, tol: float) -> CheckReport:
    """Sphericality, Frobenius-Schur indicators and the twist on the evaluation map."""
    with timer() as t:
        u = cat.unit
        res, witness = 0.0, None
        for a in range(cat.rank):
            ab = int(cat.dual[a])
            rows, cols, M = cat.F_block(a, ab, a, a)
            r_, c_, Minv = cat.F_inv_block(a, ab, a, a)
            fe = M[rows.index((u, 0, 0)), cols.index((u, 0, 0))]
            ge = Minv[r_.index((u, 0, 0)), c_.index((u, 0, 0))]
            d = cat.dims[a]
            checks = {
                "spherical": abs(d * d * fe * ge - 1.0),
                "dual-twist": abs(cat.twists[a] * cat.R_block(ab, a, u)[0, 0] - d * fe),
            }
            if ab == a:
                checks["frobenius-schur"] = abs(d * ge - cat.fs[a])
            for name, r in checks.items():
                if r > res or math.isnan(r):
                    res, witness = float(r), [name, cat.labels[a]]
    return CheckReport("duality-scalars", res, tol, witness, t[0])


def _check_D(cat: Category, tol: float) -> CheckReport:
    with timer() as t:
        c = cat.cmod8
        ph = cmath.exp(-2j * math.pi * c / 8)
        r1 = abs(cat.p_minus * ph - cat.p_plus / ph)
        D = cat.p_minus * ph
        r2 = abs(D * D - float(np.sum(cat.dims**2)))
        res = max(r1, r2)
        witness = ["p-relation"] if r1 >= r2 else ["D-squared"]
    return CheckReport("D-relation", float(res), tol, witness, t[0])
