"""The classical consumer: inject the input, then build the result.

The consumer owns base and step. It reads the iteration count, applies base
to the next probed value, and then folds step over one probed value per
iteration. It performs exactly one inject put and iterations + 2 probe gets,
whatever the values are.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scheme import Expression, NegativeInputError, RecursionScheme, eval_expr, variables


@dataclass(frozen=True)
class ConsumerConfig:
    base: Expression
    step: Expression
    x0: int

    def __post_init__(self):
        extra = variables(self.base) - {"x"}
        if extra:
            raise ValueError(f"base may only use x, found {sorted(extra)}")
        extra = variables(self.step) - {"x", "y"}
        if extra:
            raise ValueError(f"step may only use x and y, found {sorted(extra)}")
        if self.x0 < 0:
            raise NegativeInputError(f"input must be non-negative, got {self.x0}")

    @classmethod
    def from_scheme(cls, scheme: RecursionScheme, x0: int) -> "ConsumerConfig":
        return cls(scheme.base, scheme.step, x0)


def run_consumer(config: ConsumerConfig, inject, probe) -> int:
    """Run the consumer against a channel pair and return the result.

    inject needs put(value), probe needs get() -> value; real channels block
    until a producer services them, scripted stand-ins return immediately.
    """
    inject.put(config.x0)
    iterations = probe.get()
    out = eval_expr(config.base, {"x": probe.get()})
    for _ in range(iterations):
        out = eval_expr(config.step, {"x": probe.get(), "y": out})
    return out
