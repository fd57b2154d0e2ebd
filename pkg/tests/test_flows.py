"""Mapping and kernel flows: one-step laws, cocycle, closed forms, conditional law."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from starflow.errors import OutOfWindowError, WindowTooLargeError
from starflow.flows import (FlowRealization, kernel_closed_form, kernel_compose,
                            kernel_is_conditional_law, psi_closed_form,
                            psi_compose, psi_one_step, psi_zero_batch)
from starflow.graph import (DiscreteMeasure, RayParams, junction, point)
from starflow.rng import make_rng
from starflow.walk import WalkWindow, generate_walk

PARAMS = RayParams(3, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))


def _fr(increments, eta):
    return FlowRealization(WalkWindow(0, np.array(increments)),
                           np.array(eta, dtype=np.int64), PARAMS)


def test_one_step_interior():
    fr = _fr([1, -1], [1, 1])
    assert psi_one_step(fr, 0, point(2, 3, 3)) == point(2, 4, 3)
    assert psi_one_step(fr, 1, point(2, 3, 3)) == point(2, 2, 3)


def test_one_step_junction():
    fr = _fr([-1, 1], [3, 3])
    assert psi_one_step(fr, 0, junction(3)) == junction(3)
    assert psi_one_step(fr, 1, junction(3)) == point(3, 1, 3)


def test_compose_identity_and_example():
    # S = (0,1,2,1,0,-1), eta_0 = ray 2
    fr = _fr([1, 1, -1, -1, -1], [2, 1, 1, 1, 1])
    assert psi_compose(fr, 2, 2, point(1, 1, 3)) == point(1, 1, 3)
    radii = [psi_compose(fr, 0, k, junction(3)).radius for k in range(6)]
    assert radii == [0, 1, 2, 1, 0, 0]
    assert psi_compose(fr, 0, 2, junction(3)).ray == 2


def test_closed_form_translation_branch():
    fr = _fr([-1, 1, 1], [1, 1, 1])
    assert psi_closed_form(fr, 0, 1, point(1, 2, 3)) == point(1, 1, 3)


def test_closed_form_matches_compose_exhaustive():
    for bits in itertools.product((1, -1), repeat=8):
        fr = FlowRealization(WalkWindow(0, np.array(bits)),
                             np.tile([2, 1, 3, 1], 2).astype(np.int64), PARAMS)
        for p in range(0, 9):
            for n in range(p, 9):
                for radius in range(0, 4):
                    x = point(1, radius, 3)
                    assert psi_closed_form(fr, p, n, x) == psi_compose(fr, p, n, x)


def test_closed_form_after_hit_equals_zero_start():
    rng = make_rng(51, 0)
    walk = generate_walk(0, 400, 51, 1)
    fr = FlowRealization.generate(walk, PARAMS, 51, 2)
    for _ in range(2_000):
        p = int(rng.integers(0, 400))
        n = int(rng.integers(p, 401))
        radius = int(rng.integers(0, 4))
        x = point(2, radius, 3)
        t_hit = walk.hitting_time(p, radius)
        got = psi_closed_form(fr, p, n, x)
        if n > t_hit:
            assert got == psi_closed_form(fr, p, n, junction(3))
            assert got.radius == walk.s_plus(p, n)


def test_cocycle_random_triples():
    walk = generate_walk(0, 1_000, 52, 0)
    fr = FlowRealization.generate(walk, PARAMS, 52, 1)
    rng = make_rng(52, 2)
    for _ in range(10_000):
        p = int(rng.integers(0, 1_000))
        q = int(rng.integers(p, 1_001))
        r = int(rng.integers(p, q + 1))
        x = point(int(rng.integers(1, 4)), int(rng.integers(0, 4)), 3)
        assert psi_closed_form(fr, r, q, psi_closed_form(fr, p, r, x)) == \
            psi_closed_form(fr, p, q, x)


def test_ray_merge_property():
    walk = generate_walk(0, 500, 53, 0)
    fr = FlowRealization.generate(walk, PARAMS, 53, 1)
    rng = make_rng(53, 2)
    checked = 0
    for _ in range(10_000):
        p = int(rng.integers(0, 498))
        r = int(rng.integers(p + 1, 500))
        q = int(rng.integers(r + 1, 501))
        if walk.window_min(p, q) + walk.value(p) != \
                walk.window_min(r, q) + walk.value(r):
            continue
        if walk.s_plus(p, q) == 0:
            continue
        checked += 1
        assert psi_closed_form(fr, p, q, junction(3)).ray == \
            psi_closed_form(fr, r, q, junction(3)).ray
    assert checked > 100


def test_kernel_examples():
    walk = WalkWindow(0, np.array([1, 1, -1, -1, -1]))
    m = kernel_closed_form(walk, PARAMS, 0, 3, junction(3))
    assert m == DiscreteMeasure([(point(i, 1, 3), a)
                                 for i, a in enumerate(PARAMS.alpha, start=1)])
    assert kernel_closed_form(walk, PARAMS, 0, 4, junction(3)) == \
        DiscreteMeasure.dirac(junction(3))


def test_kernel_compose_equals_closed_form_exhaustive():
    walk = generate_walk(0, 12, 54, 0)
    for p in range(0, 13):
        for n in range(p, 13):
            for radius in range(0, 4):
                x = point(2, radius, 3)
                assert kernel_compose(walk, PARAMS, p, n, x) == \
                    kernel_closed_form(walk, PARAMS, p, n, x)


def test_kernel_cocycle_exact():
    walk = generate_walk(0, 12, 55, 0)
    x = point(1, 1, 3)
    for p in range(0, 13):
        for q in range(p, 13):
            for r in range(p, q + 1):
                left = kernel_compose(walk, PARAMS, p, q, x)
                via = {}
                for y, w in kernel_compose(walk, PARAMS, p, r, x).atoms.items():
                    for z, v in kernel_compose(walk, PARAMS, r, q, y).atoms.items():
                        via[z] = via.get(z, Fraction(0)) + w * v
                assert DiscreteMeasure(via.items()) == left
                assert left.total_mass() == 1


def test_conditional_law_all_short_walks():
    for bits in itertools.product((1, -1), repeat=6):
        walk = WalkWindow(0, np.array(bits))
        assert kernel_is_conditional_law(walk, PARAMS, 0, 6, junction(3))


def test_conditional_law_translation_branch():
    walk = generate_walk(0, 8, 56, 0)
    assert kernel_is_conditional_law(walk, PARAMS, 0, 8, point(1, 9, 3))


def test_conditional_law_window_cap():
    walk = generate_walk(0, 20, 57, 0)
    with pytest.raises(WindowTooLargeError):
        kernel_is_conditional_law(walk, PARAMS, 0, 20, junction(3))


def test_out_of_window_errors():
    fr = _fr([1, -1], [1, 2])
    with pytest.raises(OutOfWindowError):
        psi_compose(fr, 2, 1, junction(3))
    with pytest.raises(OutOfWindowError):
        psi_one_step(fr, 5, junction(3))


def test_psi_zero_batch_matches_scalar():
    n_walks, length = 64, 40
    rng = make_rng(58, 0)
    incs = (rng.integers(0, 2, size=(n_walks, length)) * 2 - 1).astype(np.int64)
    eta = rng.integers(1, 4, size=(n_walks, length)).astype(np.int64)
    values = np.hstack([np.zeros((n_walks, 1), dtype=np.int64),
                        np.cumsum(incs, axis=1)])
    p = 7
    rays, radii = psi_zero_batch(values, eta, p)
    for w in range(0, n_walks, 7):
        fr = FlowRealization(WalkWindow(0, incs[w]), eta[w], PARAMS)
        for n in range(p, length + 1, 3):
            got = psi_closed_form(fr, p, n, junction(3))
            assert radii[w, n] == got.radius
            if got.radius > 0:
                assert rays[w, n] == got.ray
