from __future__ import annotations

import itertools

import numpy as np
import pytest

from mtcalc import builtin
from mtcalc import sl2z

CATS = {n: builtin(n) for n in ("fibonacci", "ising", "z3")}


def pairs(name):
    cat = CATS[name]
    return [(name, a, b) for a, b in itertools.product(range(cat.rank), repeat=2) if sl2z.two_point_basis(cat, a, b)]


ALL = pairs("fibonacci") + pairs("ising") + pairs("z3")


@pytest.mark.parametrize("name,a2,a3", ALL)
def test_S_alpha_equals_beta_S(name, a2, a3):
    cat = CATS[name]
    A, B = sl2z.alpha_matrix(cat, a2, a3), sl2z.beta_matrix(cat, a2, a3)
    S = sl2z.s_two_point(cat, a2, a3)
    assert np.max(np.abs(S @ A - B @ S)) < 1e-8


@pytest.mark.parametrize("name,a2,a3", ALL)
def test_two_routes_agree(name, a2, a3):
    cat = CATS[name]
    assert np.max(np.abs(sl2z.alpha_matrix(cat, a2, a3) - sl2z.alpha_graphical(cat, a2, a3))) < 1e-9
    assert np.max(np.abs(sl2z.beta_matrix(cat, a2, a3) - sl2z.beta_graphical(cat, a2, a3))) < 1e-9


@pytest.mark.parametrize("name,a2,a3", ALL)
def test_literal_convention_uses_inverse_S(name, a2, a3):
    cat = CATS[name]
    A = sl2z.alpha_matrix(cat, a2, a3, reverse=False)
    B = sl2z.beta_matrix(cat, a2, a3, reverse=False)
    Si = sl2z.s_two_point(cat, a2, a3, inverse=True)
    assert np.max(np.abs(Si @ A - B @ Si)) < 1e-8


@pytest.mark.parametrize("name,a2,a3", ALL)
def test_alpha_beta_unitary_spectrum(name, a2, a3):
    cat = CATS[name]
    for M in (sl2z.alpha_matrix(cat, a2, a3), sl2z.beta_matrix(cat, a2, a3)):
        ev = np.linalg.eigvals(M)
        np.testing.assert_allclose(np.abs(ev), 1.0, atol=1e-9)


def test_fib_tau_tau_shape_and_radius():
    cat = CATS["fibonacci"]
    A, B = sl2z.alpha_matrix(cat, 1, 1), sl2z.beta_matrix(cat, 1, 1)
    assert A.shape == B.shape == (3, 3)
    for M in (A, B):
        assert max(abs(np.linalg.eigvals(M))) == pytest.approx(1.0, abs=1e-9)


def test_basis_dimension_counts_fusion_paths():
    cat = CATS["ising"]
    for a2, a3 in itertools.product(range(cat.rank), repeat=2):
        want = sum(cat.N[a2, a3, a] * cat.N[a, a1, a1] for a in range(cat.rank) for a1 in range(cat.rank))
        assert len(sl2z.two_point_basis(cat, a2, a3)) == want


def test_mismatched_intertwiner_fails():
    # the plain S on literal matrices does not intertwine for Fibonacci
    cat = CATS["fibonacci"]
    A = sl2z.alpha_matrix(cat, 1, 1, reverse=False)
    B = sl2z.beta_matrix(cat, 1, 1, reverse=False)
    S = sl2z.s_two_point(cat, 1, 1)
    assert np.max(np.abs(S @ A - B @ S)) > 1e-3


@pytest.mark.parametrize("name", ["fibonacci", "ising"])
def test_check_sl2z_passes(name):
    assert sl2z.check_sl2z(CATS[name]).passed
