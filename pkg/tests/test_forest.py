from fractions import Fraction

import pytest

from graftlab.forest import (ASCENDING, DESCENDING, DegenerateConfiguration, Forest, GraftingLengths, HeightedForest,
                             MalformedForest, binary, corolla, cut_at_heights, cut_at_levels, forest_type,
                             henriques_graph, symmetry_dim, vertical)
from graftlab.multiindex import mi


def test_forest_type():
    assert forest_type(binary()) == mi(2)
    assert forest_type(vertical(2)) == mi(1, 1)
    assert forest_type(corolla(3)) == mi(3)


@pytest.mark.parametrize("k, l, c", [((2,), (1,), 1), ((1, 1), (1,), 0), ((2,), (3,), 1)])
def test_symmetry_dim(k, l, c):
    assert symmetry_dim(mi(k), mi(l)) == c


def test_malformed_forests_rejected():
    with pytest.raises(MalformedForest):
        Forest(["a", "b"], ["r"], ["v"], [("a", "v"), ("v", "r")])       # b has no edge
    with pytest.raises(MalformedForest):
        Forest(["a"], ["r"], ["v"], [("a", "v"), ("v", "r")])            # unary vertex
    with pytest.raises(MalformedForest):
        HeightedForest(binary().base, {"v": 0}, "sideways")


def test_heights_must_respect_polarity():
    f = Forest(["a", "b", "c"], ["r"], ["v", "w"], [("a", "v"), ("b", "v"), ("v", "w"), ("c", "w"), ("w", "r")])
    HeightedForest(f, {"v": 1, "w": 0}, ASCENDING)
    with pytest.raises(MalformedForest):
        HeightedForest(f, {"v": 0, "w": 1}, ASCENDING)


def test_json_round_trip():
    f = corolla(3, Fraction(1, 3), DESCENDING)
    assert HeightedForest.from_json(f.to_json()) == f


def test_hopf_pattern():
    g = henriques_graph(binary(0, ASCENDING), binary(1, DESCENDING))
    assert g.strand_counts() == [2, 4, 2]
    assert sorted(n.height for n in g.nodes) == [0, 0, 1, 1]


def test_vertical_lines_give_one_strand():
    g = henriques_graph(vertical(1, ASCENDING), vertical(1, DESCENDING))
    assert g.strand_counts() == [1]
    assert g.nodes == []


def test_vertex_against_a_line():
    g = henriques_graph(binary(0, ASCENDING), vertical(1, DESCENDING))
    assert g.strand_counts() == [1, 2]
    assert len(g.nodes) == 1


def test_cut_hopf_at_half():
    g = henriques_graph(binary(0, ASCENDING), binary(1, DESCENDING))
    c = cut_at_heights(g, [Fraction(1, 2)])
    middle = [s for s in g.strands if s.lo == 0 and s.hi == 1]
    assert len(middle) == 4
    assert len(c.strands) == len(g.strands) + len(middle)
    assert c.levels() == [0, 1]


def test_cut_without_grafting_is_identity():
    g = henriques_graph(binary(0, ASCENDING), vertical(1, DESCENDING))
    c = cut_at_levels(g, GraftingLengths())
    assert c.strands == g.strands


def test_cut_line_twice():
    g = henriques_graph(vertical(1, ASCENDING), vertical(1, DESCENDING))
    c = cut_at_levels(g, GraftingLengths([1]))
    assert len(c.strands) == 3
    assert c.levels() == [0, 1, 2]


def test_cut_through_vertex_is_degenerate():
    g = henriques_graph(binary(0, ASCENDING), binary(1, DESCENDING))
    with pytest.raises(DegenerateConfiguration):
        cut_at_heights(g, [1])
