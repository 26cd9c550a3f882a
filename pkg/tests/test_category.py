from __future__ import annotations

import cmath
import dataclasses
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mtcalc import builtin, load_category, validate_category
from mtcalc.category import (
    InputError, ParseError, SchemaError, ValueRangeError, hexagon_residuals, mirror_charge_hint,
    pentagon_residuals,
    reverse_braiding,
)

PHI = (1 + math.sqrt(5)) / 2
NAMES = ["trivial", "fibonacci", "ising", "z3"]


def perturb_F(cat, scale: float, seed: int):
    rng = np.random.default_rng(seed)
    F = {k: v + rng.uniform(-scale, scale) for k, v in cat.F.items()}
    return dataclasses.replace(cat, F=F, _cache={})


@pytest.mark.parametrize("name", NAMES)
def test_builtins_validate(cats, name):
    rep = validate_category(cats[name])
    assert rep.passed, rep.flatten()
    assert rep.residual < 1e-9


@pytest.mark.parametrize("name", NAMES)
def test_doubles_validate(doubles, name):
    assert validate_category(doubles[name]).residual < 1e-9


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_perturbed_F_breaks_pentagon(fib, seed):
    rep = validate_category(perturb_F(fib, 0.1, seed))
    pent = next(r for r in rep.flatten() if r.check == "pentagon")
    assert pent.residual > 1e-2
    assert not rep.passed


@given(st.integers(0, 2**31 - 1), st.floats(0.02, 0.3))
def test_any_F_perturbation_is_detected(seed, scale):
    cat = perturb_F(builtin("ising"), scale, seed)
    assert not validate_category(cat).passed


def test_flipped_R_breaks_hexagon(fib):
    R = dict(fib.R)
    key = next(k for k in R if k[:3] == (1, 1, 1))
    R[key] = -R[key]
    bad = dataclasses.replace(fib, R=R, _cache={})
    res = hexagon_residuals(bad)[0][0]
    assert np.max(np.abs(res)) > 1e-2


# known data, asserted directly


def test_fibonacci_data(fib):
    assert fib.labels == ("1", "tau")
    np.testing.assert_allclose(fib.dims, [1, PHI], atol=1e-12)
    assert fib.global_dim == pytest.approx(math.sqrt(2 + PHI), abs=1e-12)
    assert fib.twists[1] == pytest.approx(cmath.exp(-4j * math.pi / 5), abs=1e-12)


def test_ising_data(ising):
    np.testing.assert_allclose(ising.dims, [1, 1, math.sqrt(2)], atol=1e-12)
    assert ising.global_dim == pytest.approx(2.0, abs=1e-12)
    assert ising.twists[ising.index("eps")] == pytest.approx(-1, abs=1e-12)
    assert ising.twists[ising.index("sigma")] == pytest.approx(cmath.exp(-2j * math.pi / 16), abs=1e-12)


@pytest.mark.parametrize("name", NAMES)
def test_gauss_sums(cats, name):
    cat = cats[name]
    assert abs(cat.p_plus * cat.p_minus - cat.global_dim ** 2) < 1e-10
    # p₋ = Σ θ_a d_a², computed here from the raw data
    assert abs(cat.p_minus - np.sum(cat.twists * cat.dims ** 2)) < 1e-12 or \
        abs(cat.p_plus - np.sum(cat.twists * cat.dims ** 2)) < 1e-12


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_identical_residuals(cats, name, tmp_path):
    cat = cats[name]
    path = tmp_path / f"{name}.json"
    cat.save(path)
    again = load_category(path)
    a = [(r.check, r.residual) for r in validate_category(cat).flatten()]
    b = [(r.check, r.residual) for r in validate_category(again).flatten()]
    assert a == b
    # and through a JSON string
    assert load_category(json.dumps(cat.to_dict())).labels == cat.labels


def test_reverse_braiding_is_valid_and_conjugates_twists(fib):
    rev = reverse_braiding(fib)
    assert validate_category(rev).passed
    np.testing.assert_allclose(rev.twists, np.conj(fib.twists), atol=1e-12)


def test_pentagon_residuals_shape(fib):
    res, _ = pentagon_residuals(fib)
    assert np.max(np.abs(res)) < 1e-12


# malformed input


def _raw(name="fibonacci"):
    return builtin(name).to_dict()


def test_not_json():
    with pytest.raises(ParseError):
        load_category("{not json")


def test_missing_file():
    with pytest.raises(ParseError):
        load_category("/nonexistent/cat.json")


def test_top_level_not_object():
    with pytest.raises(SchemaError):
        load_category("[1, 2]")


@pytest.mark.parametrize("field", ["labels", "F", "R", "twists"])
def test_missing_field(field):
    raw = _raw()
    raw.pop(field, None)
    with pytest.raises(InputError):
        load_category(raw)


def test_duplicate_labels():
    raw = _raw()
    raw["labels"] = ["1", "1"]
    with pytest.raises(SchemaError):
        load_category(raw)


def test_all_errors_are_input_errors():
    for cls in (ParseError, SchemaError, ValueRangeError):
        assert issubclass(cls, InputError)


def test_unknown_builtin():
    with pytest.raises(InputError):
        builtin("su2_7")


def test_aliases():
    assert builtin("fib").name == builtin("fibonacci").name


def test_single_F_entry_perturbed(fib):
    F = dict(fib.F)
    F[(1, 1, 1, 1, 1, 1, 0, 0, 0, 0)] += 0.1
    rep = validate_category(dataclasses.replace(fib, F=F, _cache={}))
    pent = next(r for r in rep.flatten() if r.check == "pentagon")
    assert pent.residual > 1e-2


def test_trivial_residuals_exactly_zero(cats):
    assert all(r.residual == 0 for r in validate_category(cats["trivial"]).flatten())


def test_non_involutive_dual():
    raw = _raw()
    raw["dual"] = {"1": "1", "tau": "1"}
    with pytest.raises(SchemaError, match="involution"):
        load_category(raw)


def test_twist_off_unit_circle():
    raw = _raw()
    raw["twists"]["tau"] = [2 * x for x in raw["twists"]["tau"]]
    with pytest.raises(ValueRangeError):
        load_category(raw)


@pytest.mark.parametrize("name,want", [
    ("trivial", Fraction(0)), ("fibonacci", Fraction(-14, 5)), ("ising", Fraction(-1, 2)), ("z3", Fraction(-2)),
])
def test_mirror_charge_hint(cats, name, want):
    assert mirror_charge_hint(cats[name]) == want


@pytest.mark.parametrize("name", NAMES)
def test_fusion_symmetries_exact(cats, name):
    cat = cats[name]
    N, du = cat.N, np.asarray(cat.dual)
    assert np.array_equal(N, N.transpose(1, 0, 2))
    assert np.array_equal(N, N[du][:, du][:, :, du].transpose(1, 0, 2))
    assert np.array_equal(du[du], np.arange(cat.rank))


def test_fib_dim_is_perron_root(fib):
    ev = max(abs(np.linalg.eigvals(fib.N[1].astype(float))))
    assert fib.dims[1] == pytest.approx(ev, abs=1e-12)
    assert fib.dims[1] ** 2 == pytest.approx(fib.dims[1] + 1, abs=1e-12)
