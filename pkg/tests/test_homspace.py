from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mtcalc import builtin
from mtcalc import homspace as hs

NAMES = ["fibonacci", "ising", "z3"]
CATS = {n: builtin(n) for n in NAMES}


def fusion_count(cat, word, c) -> int:
    """Number of ways ``word`` fuses to ``c``, by repeated matrix products."""
    if not word:
        return int(c == cat.unit)
    v = np.zeros(cat.rank, dtype=int)
    v[word[0]] = 1
    for w in word[1:]:
        v = v @ cat.N[:, w, :]
    return int(v[c])


def rand_hom(cat, src, tgt, seed):
    rng = np.random.default_rng(seed)
    n = hs.hom_dim(cat, src, tgt)
    return hs.from_vector(cat, src, tgt, rng.normal(size=n) + 1j * rng.normal(size=n))


words = st.lists(st.integers(0, 2), min_size=0, max_size=3)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("length", [0, 1, 2, 3, 4])
def test_tree_counts_match_fusion_products(name, length):
    cat = CATS[name]
    for word in itertools.product(range(cat.rank), repeat=length):
        for c in range(cat.rank):
            assert len(hs.trees(cat, word, c)) == fusion_count(cat, word, c)


@pytest.mark.parametrize("name", NAMES)
def test_hom_dim_matches_oracle(name):
    cat = CATS[name]
    for src in itertools.product(range(cat.rank), repeat=2):
        for tgt in itertools.product(range(cat.rank), repeat=2):
            want = sum(fusion_count(cat, src, c) * fusion_count(cat, tgt, c) for c in range(cat.rank))
            assert hs.hom_dim(cat, src, tgt) == want


def test_basis_spans(fib):
    B = hs.word_hom_basis(fib, (1, 1), (1, 1))
    assert len(B) == hs.hom_dim(fib, (1, 1), (1, 1)) == 2
    M = np.array([b.vector() for b in B])
    assert np.linalg.matrix_rank(M) == 2


@given(st.sampled_from(NAMES), words, words, words, st.integers(0, 10**6))
def test_interchange_law(name, w1, w2, w3, seed):
    cat = CATS[name]
    w1, w2, w3 = (tuple(x % cat.rank for x in w) for w in (w1, w2, w3))
    f, g = rand_hom(cat, w1, w2, seed), rand_hom(cat, w2, w3, seed + 1)
    h, k = rand_hom(cat, w3, w1, seed + 2), rand_hom(cat, w1, w3, seed + 3)
    lhs = hs.tensor(g, k) @ hs.tensor(f, h)
    rhs = hs.tensor(g @ f, k @ h)
    assert lhs.dist(rhs) < 1e-9 * max(1.0, lhs.norm())


@given(st.sampled_from(NAMES), words, words, st.integers(0, 10**6))
def test_braid_naturality(name, X, Y, seed):
    cat = CATS[name]
    X, Y = (tuple(x % cat.rank for x in w) for w in (X, Y))
    f, g = rand_hom(cat, X, X, seed), rand_hom(cat, Y, Y, seed + 1)
    c = hs.braid(cat, X, Y)
    lhs = c @ hs.tensor(f, g)
    rhs = hs.tensor(g, f) @ c
    assert lhs.dist(rhs) < 1e-9 * max(1.0, lhs.norm())


@given(st.sampled_from(NAMES), words, words)
def test_braid_inverse(name, X, Y):
    cat = CATS[name]
    X, Y = (tuple(x % cat.rank for x in w) for w in (X, Y))
    c = hs.braid(cat, X, Y)
    ci = hs.braid(cat, X, Y, inverse=True)
    assert (ci @ c).dist(hs.identity(cat, X + Y)) < 1e-10


@given(st.sampled_from(NAMES), words, st.integers(0, 10**6))
def test_twist_is_natural(name, X, seed):
    cat = CATS[name]
    X = tuple(x % cat.rank for x in X)
    f = rand_hom(cat, X, X, seed)
    th = hs.twist(cat, X)
    assert (th @ f).dist(f @ th) < 1e-9 * max(1.0, f.norm())


@pytest.mark.parametrize("name", NAMES)
def test_balancing(name):
    cat = CATS[name]
    for a, b in itertools.product(range(cat.rank), repeat=2):
        lhs = hs.twist(cat, (a, b))
        rhs = hs.braid(cat, (b,), (a,)) @ hs.braid(cat, (a,), (b,)) @ hs.tensor(hs.twist(cat, (a,)), hs.twist(cat, (b,)))
        assert lhs.dist(rhs) < 1e-10


@pytest.mark.parametrize("name", NAMES)
def test_loops_give_dimensions(name):
    cat = CATS[name]
    for a in range(cat.rank):
        ad = int(cat.dual[a])
        assert abs((hs.ev(cat, a) @ hs.coev_right(cat, a)).scalar() - cat.dims[a]) < 1e-12 or \
            abs((hs.ev_right(cat, a) @ hs.coev(cat, a)).scalar() - cat.dims[a]) < 1e-12
        assert abs((hs.ev_right(cat, a) @ hs.coev(cat, a)).scalar() - cat.dims[ad]) < 1e-12


def test_vertex_covertex_orthogonal(ising):
    s = ising.index("sigma")
    for c, c2 in itertools.product(ising.channels(s, s), repeat=2):
        v = hs.vertex(ising, s, s, c) @ hs.covertex(ising, s, s, c2)
        if c == c2:
            assert v.dist(hs.identity(ising, (c,))) < 1e-12
        else:
            assert v.norm() < 1e-12


def test_type_mismatch_raises(fib):
    f = hs.identity(fib, (1,))
    g = hs.identity(fib, (1, 1))
    with pytest.raises(ValueError):
        f @ g
    with pytest.raises(ValueError):
        f + g
