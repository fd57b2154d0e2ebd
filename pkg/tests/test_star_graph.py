"""Geometry of the star graph: points, distance, direction, measures."""

from fractions import Fraction

import numpy as np
import pytest

from starflow.graph import (DiscreteMeasure, GraphPoint, RayParams, direction,
                            graph_distance, junction, move_along, point)
from starflow.errors import NegativeRadiusError
from starflow.rng import make_rng


def test_distance_same_ray():
    assert graph_distance(point(1, 2, 3), point(1, 5, 3)) == 3


def test_distance_cross_ray():
    assert graph_distance(point(1, 2, 3), point(3, 5, 3)) == 7


def test_distance_identity():
    x = point(2, 4, 3)
    assert graph_distance(x, x) == 0


def test_distance_junction_identification():
    assert graph_distance(GraphPoint(2, 0), GraphPoint(7, 0)) == 0


def test_junction_points_compare_equal():
    assert GraphPoint(2, 0) == GraphPoint(7, 0)
    assert hash(GraphPoint(2, 0)) == hash(GraphPoint(7, 0))
    assert point(1, 0, 5) == junction(5)


def test_junction_canonicalizes_to_ray_n():
    assert point(1, 0, 5).ray == 5


def test_direction():
    assert direction(point(3, 5, 4), 4) == 3
    assert direction(point(1, 0, 4), 4) == 4
    assert direction(GraphPoint(4, 0.25), 4) == 4


def test_move_along():
    assert move_along(point(2, 3, 3), 1, 3) == point(2, 4, 3)
    assert move_along(point(2, 3, 3), -3, 3) == junction(3)
    with pytest.raises(NegativeRadiusError):
        move_along(point(2, 3, 3), -4, 3)


def test_metric_axioms_random_triples():
    rng = make_rng(5, 0)
    for _ in range(10_000):
        pts = [point(int(rng.integers(1, 5)), int(rng.integers(0, 10)), 4)
               for _ in range(3)]
        x, y, z = pts
        assert graph_distance(x, y) == graph_distance(y, x)
        assert graph_distance(x, y) >= 0
        assert (graph_distance(x, y) == 0) == (x == y)
        assert graph_distance(x, z) <= graph_distance(x, y) + graph_distance(y, z)


def test_ray_params_validation():
    RayParams(2, (Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ValueError):
        RayParams(2, (Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        RayParams(2, (Fraction(3, 2), Fraction(-1, 2)))


def test_measure_junction_merging():
    params = RayParams(3, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    m = DiscreteMeasure.ray_spread(params, 0)
    assert len(m.atoms) == 1
    assert m.atoms[junction(3)] == 1


def test_measure_weights_validated():
    with pytest.raises(ValueError):
        DiscreteMeasure([(point(1, 1, 2), Fraction(1, 2))])
    with pytest.raises(ValueError):
        DiscreteMeasure([(point(1, 1, 2), Fraction(3, 2)),
                         (point(2, 1, 2), Fraction(-1, 2))])


def test_measure_atom_merge_on_equal_points():
    m = DiscreteMeasure([(GraphPoint(1, 0), Fraction(1, 2)),
                         (GraphPoint(2, 0), Fraction(1, 2))])
    assert len(m.atoms) == 1
    assert m.total_mass() == 1
