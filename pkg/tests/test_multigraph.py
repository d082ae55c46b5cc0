"""Graph construction, validation, text format, parameter defaults."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowmatch import (ColouredMultigraph, InstanceParams, as_fraction, dumps,
                          hypothesis_check, loads, validate)
from conftest import random_instance

PROPERTY_SETTINGS = settings(max_examples=60, deadline=None)


def test_construction_and_indexes():
    g = ColouredMultigraph(4, 3, [(0, 1, 0), (2, 3, 0), (0, 2, 1), (0, 1, 2)])
    assert g.num_vertices == 4
    assert g.num_colours == 3
    assert g.num_edges == 4
    assert g.edges_with_colour(0) == (0, 1)
    assert g.colour_class_size(2) == 1
    assert g.edges_at(0) == (0, 2, 3)
    assert g.edges_at_with_colour(0, 0) == (0,)
    assert g.degree(0) == 3
    assert g.multiplicity(0, 1) == 2
    assert g.multiplicity(1, 0) == 2
    assert g.max_multiplicity() == 2
    e = g.edge(2)
    assert e.other(0) == 2 and e.other(2) == 0
    with pytest.raises(ValueError):
        e.other(3)


def test_construction_rejects_out_of_range():
    with pytest.raises(ValueError):
        ColouredMultigraph(2, 1, [(0, 2, 0)])
    with pytest.raises(ValueError):
        ColouredMultigraph(2, 1, [(0, 1, 1)])
    with pytest.raises(ValueError):
        ColouredMultigraph(-1, 1, [])


def test_validate_reports_loops_and_clashes():
    g = ColouredMultigraph(3, 2, [(0, 0, 0), (0, 1, 1), (0, 2, 1)])
    issues = validate(g)
    kinds = sorted(i.kind for i in issues)
    assert kinds == ["colour_clash", "loop"]
    clash = next(i for i in issues if i.kind == "colour_clash")
    assert clash.vertex == 0
    assert clash.colour == 1
    assert clash.edge_ids == (1, 2)


def test_validate_clean_on_proper_instance():
    g = ColouredMultigraph(4, 2, [(0, 1, 0), (2, 3, 0), (0, 2, 1)])
    assert validate(g) == []


def test_text_round_trip_with_comments_and_parallel_edges():
    text = """# instance
4 2
0 1 0   # first
0 1 0
2 3 1

"""
    g = loads(text)
    assert g.num_vertices == 4
    assert g.num_edges == 3
    assert g.multiplicity(0, 1) == 2
    again = loads(dumps(g))
    assert [(e.u, e.v, e.colour) for e in again.edges] == \
        [(e.u, e.v, e.colour) for e in g.edges]


@pytest.mark.parametrize("bad, fragment", [
    ("", "header"),
    ("3\n", "header"),
    ("2 1\n0 1\n", "u v c"),
    ("2 1\n0 x 0\n", "integers"),
    ("2 1\n0 5 0\n", "out of range"),
])
def test_loads_rejects_malformed(bad, fragment):
    with pytest.raises(ValueError) as err:
        loads(bad)
    assert fragment in str(err.value)


def test_as_fraction_reads_decimals_exactly():
    assert as_fraction("1/3") == Fraction(1, 3)
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction(2) == Fraction(2)
    assert as_fraction(Fraction(3, 7)) == Fraction(3, 7)


def test_params_defaults():
    g = ColouredMultigraph(40, 16, [(0, 1, c) for c in range(16)])
    p = InstanceParams.for_graph(g, epsilon="1/2")
    assert p.alpha == Fraction(1, 24)
    assert p.min_colour_count == 24  # ceil(1.5 * 16)
    assert p.multiplicity_cap == 1   # floor(16 / 16)
    assert not p.alpha_exceeds_recommended
    loose = InstanceParams.for_graph(g, epsilon="1/2", alpha="1/2")
    assert loose.alpha_exceeds_recommended


def test_params_reject_nonpositive():
    g = ColouredMultigraph(2, 1, [(0, 1, 0)])
    with pytest.raises(ValueError):
        InstanceParams.for_graph(g, epsilon=0)
    with pytest.raises(ValueError):
        InstanceParams.for_graph(g, epsilon="1/2", alpha="0")


def test_hypothesis_check_flags_each_shortfall():
    # colour 1 short, pair (0,1) over any cap of 1
    g = ColouredMultigraph(4, 2, [(0, 1, 0), (0, 1, 1), (2, 3, 0)])
    p = InstanceParams(epsilon=Fraction(1, 2), alpha=Fraction(1, 24),
                       min_colour_count=2, multiplicity_cap=1)
    rep = hypothesis_check(g, p)
    assert not rep.ok
    kinds = {i.kind for i in rep.issues}
    assert kinds == {"colour_count", "multiplicity"}


def test_hypothesis_check_passes_on_dense_instance():
    g = random_instance(3)
    p = InstanceParams.for_graph(g, epsilon="1/2")
    assert hypothesis_check(g, p).ok


@given(seed=st.integers(0, 10_000))
@PROPERTY_SETTINGS
def test_text_round_trip_property(seed):
    g = random_instance(seed)
    again = loads(dumps(g))
    assert again.num_vertices == g.num_vertices
    assert again.num_colours == g.num_colours
    assert [(e.u, e.v, e.colour) for e in again.edges] == \
        [(e.u, e.v, e.colour) for e in g.edges]
    assert dumps(again) == dumps(g)
