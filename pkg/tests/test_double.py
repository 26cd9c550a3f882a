from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mtcalc import builtin, validate_category
from mtcalc import double as db
from mtcalc import homspace as hs

NAMES = ["trivial", "fibonacci", "ising", "z3"]
CATS = {n: builtin(n) for n in NAMES}
DOUBLES = {n: db.build_double(c) for n, c in CATS.items()}


@pytest.mark.parametrize("name", NAMES)
def test_double_shape(name):
    cat, d = CATS[name], DOUBLES[name]
    assert d.rank == cat.rank ** 2
    assert d.global_dim == pytest.approx(cat.global_dim ** 2)
    assert d.cmod8 == 0.0
    for a, b in itertools.product(range(cat.rank), repeat=2):
        x = db.pair_label(d, a, b)
        assert db.split_label(d, x) == (a, b)
        assert d.labels[x] == f"{cat.labels[a]}|{cat.labels[b]}"


@pytest.mark.parametrize("name", NAMES)
def test_double_fusion_is_product(name):
    cat, d = CATS[name], DOUBLES[name]
    n = cat.rank
    want = np.einsum("abc,xyz->axbycz", cat.N, cat.N).reshape(n * n, n * n, n * n)
    np.testing.assert_array_equal(d.N, want)


@pytest.mark.parametrize("name", NAMES)
def test_diagonal_twists_trivial(name):
    cat, d = CATS[name], DOUBLES[name]
    for a in range(cat.rank):
        assert abs(d.twists[db.pair_label(d, a, int(cat.dual[a]))] - 1) < 1e-12


@pytest.mark.parametrize("name", NAMES)
def test_double_valid(name):
    assert validate_category(DOUBLES[name]).passed


@pytest.mark.parametrize("name", NAMES)
def test_S_factorises(name):
    assert db.check_s_factorization(DOUBLES[name]).passed


@pytest.mark.parametrize("name", ["fibonacci", "ising", "z3"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_t_functor(name, seed):
    rep = db.check_t_functor(DOUBLES[name], seed=seed)
    assert rep.passed, [r.line() for r in rep.flatten()]


def test_phi2_candidates_differ():
    d = DOUBLES["fibonacci"]
    cat = CATS["fibonacci"]
    t, o = db.pair_label(d, 1, 0), db.pair_label(d, 0, 1)
    X, Y = (o,), (t,)
    a = db.phi2_word(d, X, Y)
    b = db.phi2_word(d, X, Y, inverse=True)
    assert a.dist(b) > 1e-3
    assert (a @ hs.inverse(b)).dist(hs.identity(cat, a.tgt)) > 1e-3


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 10**6))
def test_t_preserves_composition(x, y, seed):
    d = DOUBLES["fibonacci"]
    rng = np.random.default_rng(seed)
    w = (x, y)
    n = hs.hom_dim(d, w, w)
    f = hs.from_vector(d, w, w, rng.normal(size=n))
    g = hs.from_vector(d, w, w, rng.normal(size=n))
    lhs = db.t_hom(d, f @ g)
    rhs = db.t_hom(d, f) @ db.t_hom(d, g)
    assert lhs.dist(rhs) < 1e-9 * max(1, lhs.norm())


def test_t_object_decomposition():
    d = DOUBLES["ising"]
    cat = CATS["ising"]
    s = cat.index("sigma")
    assert db.t_object(d, db.pair_label(d, s, s)) == {0: 1, 1: 1}


def test_summary():
    info = db.double_summary(CATS["fibonacci"])
    assert info["rank"] == 4
    assert info["Dsq"] == pytest.approx(CATS["fibonacci"].global_dim ** 4)
    assert set(info["diagonal_twists"]) == {"1|1", "tau|tau"}


def test_not_a_double():
    with pytest.raises(ValueError):
        db.info(CATS["fibonacci"])
