from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from mtcalc import builtin
from mtcalc import modular as md
from mtcalc.double import build_double

NAMES = ["trivial", "fibonacci", "ising", "z3"]
CATS = {n: builtin(n) for n in NAMES}
PHI = (1 + math.sqrt(5)) / 2
R2 = math.sqrt(2)

S_FIB = np.array([[1, PHI], [PHI, -1]]) / math.sqrt(2 + PHI)
S_ISING = 0.5 * np.array([[1, 1, R2], [1, 1, -R2], [R2, -R2, 0]])


def test_fibonacci_S_frozen():
    S = md.s_matrix(CATS["fibonacci"])
    np.testing.assert_allclose(S, S_FIB, atol=1e-12)
    D = CATS["fibonacci"].global_dim
    np.testing.assert_allclose(S[0], [1 / D, PHI / D], atol=1e-12)


def test_ising_S_frozen():
    np.testing.assert_allclose(md.s_matrix(CATS["ising"]), S_ISING, atol=1e-12)


def test_z3_S_frozen():
    w = np.exp(2j * np.pi / 3)
    want = np.array([[1, 1, 1], [1, w, w.conjugate()], [1, w.conjugate(), w]]) / math.sqrt(3)
    np.testing.assert_allclose(md.s_matrix(CATS["z3"]), want, atol=1e-12)


@pytest.mark.parametrize("name", NAMES)
def test_S_matches_monodromy_oracle(name):
    cat = CATS[name]
    assert np.max(np.abs(md.s_matrix(cat) - md.monodromy_oracle(cat))) < 1e-9


@pytest.mark.parametrize("name", NAMES)
def test_verlinde_formula(name):
    # fusion rules recovered from S, an independent consistency check
    cat = CATS[name]
    S = md.s_matrix(cat)
    u = cat.unit
    N = np.einsum("ax,bx,cx,x->abc", S, S, S.conj(), 1 / S[u])
    np.testing.assert_allclose(N, cat.N, atol=1e-9)


@pytest.mark.parametrize("name", NAMES)
def test_S_unitary_and_squares_to_C(name):
    cat = CATS[name]
    S = md.s_matrix(cat)
    np.testing.assert_allclose(S @ S.conj().T, np.eye(cat.rank), atol=1e-12)
    np.testing.assert_allclose(S @ S, md.charge_conjugation(cat), atol=1e-9)


@pytest.mark.parametrize("name", NAMES)
def test_modular_relations_pass(name):
    rep = md.check_modular_relations(CATS[name])
    assert rep.passed, [r.line() for r in rep.flatten() if not r.passed]


@pytest.mark.parametrize("name", NAMES)
def test_modular_relations_on_double(name):
    assert md.check_modular_relations(build_double(CATS[name])).passed


@pytest.mark.parametrize("name", NAMES)
def test_See_and_gauss(name):
    cat = CATS[name]
    d = md.modular_data(cat)
    assert abs(d.See ** 2 - 1 / d.Dsq) < 1e-12
    assert abs(d.p_plus * d.p_minus - d.Dsq) < 1e-10


def test_ising_sigma_one_point_space():
    cat = CATS["ising"]
    s = cat.index("sigma")
    # hom(σ⊗a1, a1) is nonzero only for a1 = σ
    assert md.one_point_basis(cat, s) == []
    e = cat.index("eps")
    basis = md.one_point_basis(cat, e)
    assert [b[0] for b in basis] == [s]
    S = md.s_action(cat, e)
    assert S.shape == (1, 1)
    assert abs(abs(S[0, 0]) - 1) < 1e-12


@pytest.mark.parametrize("name", ["fibonacci", "ising", "z3"])
def test_S_inverse_action(name):
    cat = CATS[name]
    for a in range(cat.rank):
        if md.one_point_basis(cat, a):
            S, Si = md.s_action(cat, a), md.s_inverse_action(cat, a)
            np.testing.assert_allclose(S @ Si, np.eye(len(S)), atol=1e-10)


def test_wrong_central_charge_breaks_ST():
    cat = CATS["fibonacci"]
    bad = dataclasses.replace(cat, cmod8=cat.cmod8 + 1.0, cmod24=None, _cache={})
    rep = md.check_modular_relations(bad)
    assert not rep.passed


def test_wrong_twist_breaks_oracle():
    cat = CATS["fibonacci"]
    tw = cat.twists.copy()
    tw[1] = tw[1] * np.exp(0.3j)
    bad = dataclasses.replace(cat, twists=tw, _cache={})
    assert np.max(np.abs(md.s_matrix(bad) - md.monodromy_oracle(bad))) > 1e-2


def test_modular_data_dict_is_json_ready():
    import json

    d = md.modular_data(CATS["ising"]).to_dict()
    json.dumps(d)
    assert d["Dsq"] == pytest.approx(4.0)
