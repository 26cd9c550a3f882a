from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mtcalc import builtin
from mtcalc import diagrams as dg
from mtcalc import homspace as hs

NAMES = ["trivial", "fibonacci", "ising", "z3"]
CATS = {n: builtin(n) for n in NAMES}
PHI = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize("name", NAMES)
def test_graphical_suite(name):
    rep = dg.graphical_suite(CATS[name], 1e-9)
    assert rep.passed, [r.line() for r in rep.flatten() if not r.passed]


@pytest.mark.parametrize("name", NAMES)
def test_operator_suite(name):
    rep = dg.operator_suite(CATS[name], 1e-10)
    assert rep.passed, [r.line() for r in rep.flatten() if not r.passed]


def rand_vertex_hom(cat, a1, a2, a3, seed):
    rng = np.random.default_rng(seed)
    n = hs.hom_dim(cat, (a1, a2), (a3,))
    return hs.from_vector(cat, (a1, a2), (a3,), rng.normal(size=n) + 1j * rng.normal(size=n))


admissible = [(n, a1, a2, a3) for n in ("fibonacci", "ising") for a1 in range(CATS[n].rank)
              for a2 in range(CATS[n].rank) for a3 in range(CATS[n].rank) if CATS[n].N[a1, a2, a3]]


@given(st.sampled_from(admissible), st.integers(0, 10**6))
def test_omega_inverse_on_random_homs(t, seed):
    name, a1, a2, a3 = t
    cat = CATS[name]
    f = rand_vertex_hom(cat, a1, a2, a3, seed)
    assert dg.omega0(cat, dg.omega_minus1(cat, f)).dist(f) < 1e-10 * max(1, f.norm())
    assert dg.tilde_A0(cat, dg.hat_A0(cat, f)).dist(f) < 1e-10 * max(1, f.norm())


@given(st.sampled_from(admissible), st.integers(0, 10**6), st.complex_numbers(max_magnitude=10))
def test_sigma_is_linear_of_order_three(t, seed, z):
    name, a1, a2, a3 = t
    cat = CATS[name]
    f = rand_vertex_hom(cat, a1, a2, a3, seed)
    g = rand_vertex_hom(cat, a1, a2, a3, seed + 1)
    s = lambda h: dg.sigma123(cat, h)
    assert s(f * z + g).dist(s(f) * z + s(g)) < 1e-9 * max(1, abs(z)) * max(1, f.norm(), g.norm())
    assert s(s(s(f))).dist(f) < 1e-10 * max(1, f.norm())


@pytest.mark.parametrize("name", NAMES)
def test_quantum_trace_of_identity(name):
    cat = CATS[name]
    for a in range(cat.rank):
        assert abs(dg.quantum_trace(hs.identity(cat, (a,))).scalar() - cat.dims[a]) < 1e-12


def test_trace_of_twist_fib():
    cat = CATS["fibonacci"]
    z = dg.eval_diagram(cat, dg.Trace(dg.Twist(1))).scalar()
    assert abs(z - cmath.exp(-4j * math.pi / 5) * PHI) < 1e-12


def test_operator_matrix_sigma_has_order_three():
    cat = CATS["fibonacci"]
    M = dg.operator_matrix(cat, dg.sigma123, 1, 1, 1)
    assert M.shape == (1, 1)
    assert abs(M[0, 0] ** 3 - 1) < 1e-12


def test_encircle_is_scalar_on_simple():
    # an a-loop around a simple b acts by S_ab/S_0b up to normalisation
    cat = CATS["ising"]
    s = cat.index("sigma")
    h = dg.encircle(cat, (s,), s)
    assert h.dist(hs.identity(cat, (s,)) * h.blocks[s][0, 0]) < 1e-12
    assert abs(h.blocks[s][0, 0]) < 1e-12


def test_bk_lemma_detects_wrong_label():
    cat = CATS["fibonacci"]
    # with a wrong weight the projector identity breaks
    word = (1, 1)
    lhs = sum((dg.encircle(cat, word, a) * (cat.dims[a] / cat.global_dim ** 2) for a in range(1, 2)),
              hs.zero(cat, word, word))
    rhs = dg.eval_diagram(cat, dg.C(dg.Cup(1), dg.CapL(1)))
    assert lhs.dist(rhs) > 1e-2


def test_composition_type_error():
    cat = CATS["fibonacci"]
    with pytest.raises((dg.DiagramTypeError, ValueError)):
        dg.eval_diagram(cat, dg.C(dg.Id(1), dg.Id(1, 1)))


def test_pivotal_table():
    rows = dg.pivotal_table(CATS["ising"])
    assert [r["label"] for r in rows] == ["1", "eps", "sigma"]
    assert rows[2]["dim"] == pytest.approx(math.sqrt(2))
