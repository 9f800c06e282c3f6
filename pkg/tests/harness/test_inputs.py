import math

import numpy as np

from gradual_sensitivity.harness import MPSpec, distance, prepare
from gradual_sensitivity.harness.inputs import (
    allowance,
    draw_distances,
    input_value,
    neighbor_pair,
)
from gradual_sensitivity.harness.runner import draw_seed, run_trials, spawn_generators
from gradual_sensitivity.models.sensitivity import ResourceVar, StaticSensEnv
from gradual_sensitivity.syntax.parser import parse_type

R = ResourceVar("r")


def test_allowance_uses_lower_bounds():
    distances = StaticSensEnv.of({R: 2.0})
    assert allowance(parse_type("Number[3r]"), distances) == 6.0
    assert allowance(parse_type("Number[1..4r]"), distances) == 2.0
    assert allowance(parse_type("Number"), distances) == 0.0


def test_drawn_distances_stay_below_delta():
    rng = np.random.default_rng(0)
    delta = StaticSensEnv.of({R: 2.0})
    for _ in range(100):
        drawn = draw_distances(delta, rng)
        assert 0.0 <= drawn.get(R) <= 2.0


def test_neighbours_respect_their_allowance():
    prepared = prepare(
        MPSpec(
            name="mixed",
            source="if b then x else y",
            env={"x": "Number[2r]", "y": "Number", "b": "Boolean[inf r]"},
        )
    )
    rng = np.random.default_rng(5)
    for _ in range(50):
        pair = neighbor_pair(prepared, rng)
        for name, stype in prepared.inputs:
            gap = distance(stype, pair.first[name], pair.second[name])
            assert gap <= pair.allowances[name] + 1e-9
        assert pair.first["y"].constant == pair.second["y"].constant


def test_booleans_only_flip_under_infinite_allowance():
    prepared = prepare(MPSpec(name="b", source="b", env={"b": "Boolean[r]"}))
    rng = np.random.default_rng(1)
    for _ in range(50):
        pair = neighbor_pair(prepared, rng)
        assert pair.first["b"].constant == pair.second["b"].constant
        assert not math.isinf(pair.allowances["b"])


def test_boolean_distance():
    stype = parse_type("Boolean[r]")
    assert distance(stype, input_value(stype, True), input_value(stype, True)) == 0.0
    assert math.isinf(distance(stype, input_value(stype, True), input_value(stype, False)))


def test_generators_are_independent_of_worker_count():
    def trial(index, rng):
        return index, draw_seed(rng)

    assert run_trials(trial, 16, seed=8) == run_trials(trial, 16, seed=8, workers=4)
    first, second = spawn_generators(8, 2)
    assert first.random() != second.random()
