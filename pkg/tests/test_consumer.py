from collections import deque

import pytest

from recsplit.consumer import ConsumerConfig, run_consumer
from recsplit.scheme import (
    NegativeInputError,
    eval_recursive,
    expected_emissions,
    make_scheme,
    parse_expr,
)


class ScriptedProbe:
    """Queue with the probe get contract; lets the consumer run producer-free."""

    def __init__(self, values):
        self.values = deque(values)
        self.gets = 0

    def get(self):
        self.gets += 1
        return self.values.popleft()


class NullInject:
    def __init__(self):
        self.puts = []

    def put(self, value):
        self.puts.append(value)


def _config(base, step, x0):
    return ConsumerConfig(parse_expr(base, {"x"}), parse_expr(step, {"x", "y"}), x0)


def test_consumer_folds_scripted_values():
    probe = ScriptedProbe([3, 0, 1, 2, 3])
    assert run_consumer(_config("x", "x+y", 3), NullInject(), probe) == 6


def test_consumer_zero_iterations_applies_base_only():
    for a in (-4, 0, 9):
        probe = ScriptedProbe([0, a])
        config = _config("x+1", "x*y+1", 0)
        assert run_consumer(config, NullInject(), probe) == a + 1


def test_consumer_two_wide_case():
    probe = ScriptedProbe([2, -1, 1, 3])
    assert run_consumer(_config("x", "x+y", 3), NullInject(), probe) == 3


def test_consumer_interaction_counts():
    for iterations in (0, 1, 5):
        probe = ScriptedProbe([iterations, 0] + [1] * iterations)
        inject = NullInject()
        run_consumer(_config("x", "x+y", 7), inject, probe)
        assert probe.gets == iterations + 2
        assert inject.puts == [7]


def test_consumer_matches_recursion_on_planned_scripts():
    for base, step in (("x", "x+y"), ("x+1", "x*y+1")):
        for delta in range(-4, 0):
            scheme = make_scheme(delta, base, step)
            for x0 in range(0, 100):
                plan = expected_emissions(scheme, x0)
                probe = ScriptedProbe([plan.iterations, plan.base_arg, *plan.h_args])
                result = run_consumer(
                    ConsumerConfig.from_scheme(scheme, x0), NullInject(), probe
                )
                assert result == eval_recursive(scheme, x0)


def test_config_rejects_negative_input():
    with pytest.raises(NegativeInputError):
        _config("x", "x+y", -1)


def test_config_rejects_stray_variables():
    with pytest.raises(ValueError):
        ConsumerConfig(parse_expr("y", {"y"}), parse_expr("x+y", {"x", "y"}), 0)


def test_from_scheme_copies_expressions():
    scheme = make_scheme(-2, "x+1", "x*y+1")
    config = ConsumerConfig.from_scheme(scheme, 4)
    assert config.base == scheme.base
    assert config.step == scheme.step
    assert config.x0 == 4
