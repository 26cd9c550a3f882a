from __future__ import annotations

import cmath
import math

import pytest
from hypothesis import given, strategies as st

from mtcalc import builtin
from mtcalc import diagrams as dg
from mtcalc import dsl
from mtcalc.category import ParseError

FIB = builtin("fibonacci")
ISING = builtin("ising")
PHI = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize("src,want", [
    ("(trace (id tau))", PHI),
    ("(trace (id 1))", 1.0),
    ("(trace (twist tau))", cmath.exp(-4j * math.pi / 5) * PHI),
    ("(trace (twistinv tau))", cmath.exp(4j * math.pi / 5) * PHI),
    ("(compose (capL tau) (cup tau))", PHI),
    ("(trace (compose (twist tau) (twistinv tau)))", PHI),
])
def test_fib_values(src, want):
    assert abs(dsl.evaluate(src, FIB).scalar() - want) < 1e-12


def test_multiline_and_whitespace():
    src = """(trace
        (compose (twist tau)
                 (id tau)))"""
    assert abs(dsl.evaluate(src, FIB).scalar() - cmath.exp(-4j * math.pi / 5) * PHI) < 1e-12


def test_vertex_round_trip_is_identity():
    h = dsl.evaluate("(compose (basis sigma sigma eps) (dualbasis sigma sigma eps))", ISING)
    assert abs(h.blocks[ISING.index("eps")][0, 0] - 1) < 1e-12


def test_describe_morphism():
    d = dsl.describe(dsl.evaluate("(braid tau tau)", FIB))
    assert d["src"] == ["tau", "tau"] and d["tgt"] == ["tau", "tau"]
    assert set(d["blocks"]) == {"1", "tau"}


def test_parse_without_category():
    tree = dsl.parse_diagram("(tensor (id a) (cup b))")
    assert isinstance(tree, dg.Tensor)


@pytest.mark.parametrize("src,line,col,expected", [
    ("(trace (id tau)", 1, 16, [")"]),
    ("", 1, 1, ["("]),
    ("(frob tau)", 1, 2, None),
    ("(id tau))", 1, 9, ["end of input"]),
    ("(trace)", 1, 7, ["("]),
    ("(compose\n  (id tau)\n  (id phi))", 3, 7, ["1", "tau"]),
    ("(braid tau)", 1, 2, None),
    ("(basis tau tau tau x)", 1, 20, None),
    ("(trace (id tau) (id tau))", 1, 2, [")"]),
])
def test_error_positions(src, line, col, expected):
    with pytest.raises(dsl.DiagramSyntaxError) as ei:
        dsl.parse_diagram(src, FIB)
    e = ei.value
    assert (e.line, e.col) == (line, col)
    if expected is not None:
        assert e.expected == sorted(expected)
    assert str(e).startswith(f"{line}:{col}:")
    assert isinstance(e, ParseError)


def test_type_error_is_reported():
    with pytest.raises(dg.DiagramTypeError):
        dsl.evaluate("(compose (id tau) (id 1))", FIB)


labels = st.sampled_from(["1", "tau"])


@st.composite
def endo(draw, depth=2):
    """Random endomorphism expressions of a single strand."""
    a = draw(labels)
    leaves = [f"(id {a})", f"(twist {a})", f"(twistinv {a})"]
    if depth == 0:
        return a, draw(st.sampled_from(leaves))
    kind = draw(st.sampled_from(["leaf", "compose"]))
    if kind == "leaf":
        return a, draw(st.sampled_from(leaves))
    parts = []
    for _ in range(draw(st.integers(1, 3))):
        parts.append(draw(st.sampled_from(leaves)))
    return a, f"(compose {' '.join(parts)})"


@given(endo())
def test_trace_of_twist_words(case):
    a, src = case
    k = src.count("(twist ") - src.count("(twistinv ")
    i = FIB.index(a)
    want = FIB.twists[i] ** k * FIB.dims[i]
    assert abs(dsl.evaluate(f"(trace {src})", FIB).scalar() - want) < 1e-10


@given(st.text(alphabet="() abcdtu1", max_size=30))
def test_garbage_never_crashes(src):
    try:
        dsl.evaluate(src, FIB)
    except (ParseError, dg.DiagramTypeError):
        pass
