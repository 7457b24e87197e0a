"""Orchestration: split runs on live channels, deadlock watchdog, and the
equivalence / reversibility / protocol check suites.

A split run puts the compiled producer (under the IR interpreter, with its
probe port and inject cell bound to real channels) on one thread and the
classical consumer on another, joins both under a deadline, and assembles a
report. If the deadline fires, the error says which channel operation each
agent was blocked in, which is the one thing worth knowing when a
rendezvous protocol hangs.
"""

from __future__ import annotations

import json
import random
import threading
import time
from dataclasses import dataclass, field

from .chan import EventLog, InjectChannel, ProbeChannel
from .consumer import ConsumerConfig, run_consumer
from .producer import (
    ResidualReport,
    compile_producer,
    expected_residuals,
    residuals_from_store,
    run_sequential,
)
from .revir import (
    PlainCell,
    RecordingSink,
    RevirError,
    RevProgram,
    Store,
    discard,
    invert,
    run,
)
from .scheme import NegativeInputError, RecursionScheme, eval_recursive, expected_emissions, make_scheme

DEFAULT_TIMEOUT = 5.0


class HarnessError(Exception):
    """Base class for orchestration errors."""


class DeadlockTimeout(HarnessError):
    """Neither agent finished before the deadline."""


class ResultMismatch(HarnessError):
    """The consumer's result disagrees with the recursive value."""


@dataclass
class _Agent:
    name: str
    blocked_in: str | None = None
    done: bool = False
    error: BaseException | None = None
    result: object = None

    def describe(self) -> str:
        if self.error is not None:
            return f"failed ({type(self.error).__name__}: {self.error})"
        if self.done:
            return "finished"
        if self.blocked_in:
            return f"blocked in {self.blocked_in}"
        return "running"


class _ChannelCell:
    """Inject binding for the producer: swaps alternate swap_in / swap_out,
    so the program's first swap reads the injected input and its second
    exports the leftover and reopens the channel."""

    def __init__(self, channel: InjectChannel, agent: _Agent):
        self._channel = channel
        self._agent = agent
        self._swaps = 0

    def swap(self, value: int) -> int:
        self._swaps += 1
        if self._swaps % 2 == 1:
            self._agent.blocked_in = "inject.swap_in"
            try:
                return self._channel.swap_in(value)
            finally:
                self._agent.blocked_in = None
        self._agent.blocked_in = "inject.swap_out"
        try:
            return self._channel.swap_out(value)
        finally:
            self._agent.blocked_in = None


class _TrackedProbePut:
    def __init__(self, channel: ProbeChannel, agent: _Agent):
        self._channel = channel
        self._agent = agent

    def __call__(self, value: int):
        self._agent.blocked_in = "probe.put"
        try:
            self._channel.put(value)
        finally:
            self._agent.blocked_in = None


class _TrackedProbeGet:
    def __init__(self, channel: ProbeChannel, agent: _Agent):
        self._channel = channel
        self._agent = agent

    def get(self) -> int:
        self._agent.blocked_in = "probe.get"
        try:
            return self._channel.get()
        finally:
            self._agent.blocked_in = None


class _TrackedInjectPut:
    def __init__(self, channel: InjectChannel, agent: _Agent):
        self._channel = channel
        self._agent = agent

    def put(self, value: int):
        self._agent.blocked_in = "inject.put"
        try:
            self._channel.put(value)
        finally:
            self._agent.blocked_in = None


@dataclass
class RunReport:
    y: int
    oracle_y: int
    emissions: list
    inject_final: int
    residuals: ResidualReport
    channel_log: list
    wall_time: float


def run_split(
    scheme: RecursionScheme,
    x0: int,
    timeout: float = DEFAULT_TIMEOUT,
    program: RevProgram | None = None,
) -> RunReport:
    """Run producer and consumer as two threads over a fresh channel pair.

    Joins both under the deadline, asserts the consumer's result against the
    recursive value, and returns the full report. The optional program
    argument substitutes the producer program (fault-injection hooks for
    tests); by default the scheme is compiled.
    """
    if x0 < 0:
        raise NegativeInputError(f"input must be non-negative, got {x0}")
    if timeout <= 0:
        raise ValueError(f"timeout must be positive, got {timeout}")
    if program is None:
        program = compile_producer(scheme)

    trace = EventLog()
    probe = ProbeChannel(trace)
    inject = InjectChannel(trace)
    producer_agent = _Agent("producer")
    consumer_agent = _Agent("consumer")
    turn_done = threading.Event()

    def producer_main():
        return run(
            program,
            Store(),
            sinks={"probe": _TrackedProbePut(probe, producer_agent)},
            cells={"inject": _ChannelCell(inject, producer_agent)},
        )

    def consumer_main():
        config = ConsumerConfig.from_scheme(scheme, x0)
        return run_consumer(
            config,
            _TrackedInjectPut(inject, consumer_agent),
            _TrackedProbeGet(probe, consumer_agent),
        )

    def worker(agent, main):
        try:
            agent.result = main()
        except BaseException as exc:
            agent.error = exc
        finally:
            agent.done = True
            turn_done.set()

    started = time.perf_counter()
    deadline = started + timeout
    threads = [
        threading.Thread(target=worker, args=(producer_agent, producer_main), daemon=True),
        threading.Thread(target=worker, args=(consumer_agent, consumer_main), daemon=True),
    ]
    for thread in threads:
        thread.start()

    while True:
        if producer_agent.done and consumer_agent.done:
            break
        # a dead agent can never unblock its peer; stop waiting for the deadline
        if producer_agent.error and (consumer_agent.done or consumer_agent.blocked_in):
            break
        if consumer_agent.error and (producer_agent.done or producer_agent.blocked_in):
            break
        remaining = deadline - time.perf_counter()
        if remaining <= 0:
            break
        turn_done.wait(min(remaining, 0.05))
        turn_done.clear()
    wall_time = time.perf_counter() - started

    if producer_agent.error is not None:
        raise producer_agent.error
    if consumer_agent.error is not None:
        raise consumer_agent.error
    if not (producer_agent.done and consumer_agent.done):
        raise DeadlockTimeout(
            f"run exceeded {timeout}s: producer {producer_agent.describe()}; "
            f"consumer {consumer_agent.describe()}"
        )

    y = consumer_agent.result
    final_store = producer_agent.result
    oracle_y = eval_recursive(scheme, x0)
    if y != oracle_y:
        raise ResultMismatch(f"consumer produced {y}, recursion says {oracle_y}")
    events = trace.events()
    emissions = [e.value for e in events if e.channel == "probe" and e.op == "put"]
    inject_final = inject.slot
    residuals = residuals_from_store(
        final_store, x0, scheme.pred.delta, inject_cell=inject_final
    )
    return RunReport(
        y=y,
        oracle_y=oracle_y,
        emissions=emissions,
        inject_final=inject_final,
        residuals=residuals,
        channel_log=events,
        wall_time=wall_time,
    )


# --- reversibility checks --------------------------------------------------------

@dataclass
class ReversibilityCase:
    label: str
    ok: bool
    problem: str | None = None


@dataclass
class ReversibilityReport:
    cases: list

    @property
    def all_ok(self) -> bool:
        return all(case.ok for case in self.cases)

    @property
    def failures(self) -> list:
        return [case for case in self.cases if not case.ok]

    def summary(self) -> str:
        return f"{sum(case.ok for case in self.cases)}/{len(self.cases)} preloads restored"


def check_reversibility(program: RevProgram, preloads) -> ReversibilityReport:
    """Run forward then inverted for each (registers, cells) preload.

    A clean pass restores every register and cell exactly. Interpreter faults
    (discipline violations) are reported per case, never raised. Forward
    emissions are recorded, inverse ones discarded.
    """
    inverse = invert(program)
    cases = []
    for index, (registers, cell_values) in enumerate(preloads):
        label = f"preload[{index}]"
        initial = Store(registers)
        cells = {name: PlainCell(value) for name, value in cell_values.items()}
        try:
            middle = run(
                program,
                initial,
                sinks={port: RecordingSink() for port in program.ports},
                cells=cells,
            )
            final = run(
                inverse,
                middle,
                sinks={port: discard for port in program.ports},
                cells=cells,
            )
        except RevirError as exc:
            cases.append(ReversibilityCase(label, False, f"{type(exc).__name__}: {exc}"))
            continue
        problems = []
        if final != initial:
            problems.append(f"store {final.as_dict()} != {initial.as_dict()}")
        for name, value in cell_values.items():
            if cells[name].value != value:
                problems.append(f"cell {name} {cells[name].value} != {value}")
        if problems:
            cases.append(ReversibilityCase(label, False, "; ".join(problems)))
        else:
            cases.append(ReversibilityCase(label, True))
    return ReversibilityReport(cases)


def random_preloads(program: RevProgram, count: int, seed: int = 0, low: int = -8, high: int = 8):
    """Deterministic random (registers, cells) preloads for a program.

    Values are kept small because register values drive loop counts.
    """
    rng = random.Random(seed)
    registers = sorted(program.registers)
    cells = sorted(program.cells)
    return [
        (
            {reg: rng.randint(low, high) for reg in registers},
            {cell: rng.randint(low, high) for cell in cells},
        )
        for _ in range(count)
    ]


# --- protocol checks ---------------------------------------------------------------

def channel_protocol_problems(events) -> list:
    """Violations of the rendezvous protocol in a completed run's log.

    Probe traffic must strictly alternate put/get starting with a put, with
    every get returning the value of the put just before it; inject traffic
    must be exactly put, swap_in, swap_out.
    """
    problems = []
    probe = [e for e in events if e.channel == "probe"]
    if len(probe) % 2 != 0:
        problems.append(f"probe log has odd length {len(probe)}")
    last_put = None
    for index, event in enumerate(probe):
        expected_op = "put" if index % 2 == 0 else "get"
        if event.op != expected_op:
            problems.append(f"probe event {index} is {event.op}, expected {expected_op}")
            break
        if event.op == "put":
            last_put = event.value
        elif event.value != last_put:
            problems.append(
                f"probe event {index} got {event.value}, last put was {last_put}"
            )
    inject_ops = [e.op for e in events if e.channel == "inject"]
    if inject_ops != ["put", "swap_in", "swap_out"]:
        problems.append(f"inject ops {inject_ops} != ['put', 'swap_in', 'swap_out']")
    return problems


_AGENT_BY_OP = {
    ("probe", "put"): "producer",
    ("probe", "get"): "consumer",
    ("inject", "put"): "consumer",
    ("inject", "swap_in"): "producer",
    ("inject", "swap_out"): "producer",
    ("inject", "get"): "consumer",
}


def write_trace_jsonl(events, path):
    """One JSON object per event: {seq, agent, op, value}."""
    with open(path, "w", encoding="utf-8") as handle:
        for event in events:
            record = {
                "seq": event.seq,
                "agent": _AGENT_BY_OP.get((event.channel, event.op), "unknown"),
                "op": f"{event.channel}.{event.op}",
                "value": event.value,
            }
            handle.write(json.dumps(record) + "\n")


# --- sweeps -------------------------------------------------------------------------

@dataclass
class SweepCase:
    base: str
    step: str
    delta: int
    x0: int
    error: str | None = None
    split_y: int | None = None
    oracle_y: int | None = None
    sequential_y: int | None = None
    emissions_ok: bool = False
    residuals_ok: bool = False
    protocol_ok: bool = False
    handshakes: int = 0
    wall_time: float = 0.0
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None and not self.problems


@dataclass
class SweepReport:
    cases: list

    @property
    def all_ok(self) -> bool:
        return all(case.ok for case in self.cases)

    @property
    def failures(self) -> list:
        return [case for case in self.cases if not case.ok]

    def format_table(self) -> str:
        """Flat text table, one row per case."""
        header = f"{'base':<12} {'step':<12} {'delta':>5} {'x0':>4} {'ok':<4} detail"
        lines = [header, "-" * len(header)]
        for case in self.cases:
            if case.ok:
                detail = f"y = {_clip(str(case.split_y))}"
            elif case.error is not None:
                detail = case.error
            else:
                detail = "; ".join(case.problems)
            lines.append(
                f"{case.base:<12} {case.step:<12} {case.delta:>5} {case.x0:>4} "
                f"{'yes' if case.ok else 'NO':<4} {detail}"
            )
        lines.append(f"{len(self.cases)} cases, {len(self.failures)} failures")
        return "\n".join(lines)


def _clip(text, width=32):
    return text if len(text) <= width else text[: width - 3] + "..."


def sweep(x_values, deltas, pairs, timeout: float = DEFAULT_TIMEOUT) -> SweepReport:
    """Cross product of inputs, displacements, and (base, step) text pairs.

    Each case does a split run, the one-piece classical run, and the direct
    recursive evaluation, then checks emission conformity, residual
    conformity, and the channel protocol. Failures are collected, not
    raised.
    """
    x_values = list(x_values)
    deltas = list(deltas)
    cases = []
    for base_text, step_text in pairs:
        for delta in deltas:
            scheme = make_scheme(delta, base_text, step_text)
            program = compile_producer(scheme)
            for x0 in x_values:
                case = SweepCase(base=base_text, step=step_text, delta=delta, x0=x0)
                cases.append(case)
                try:
                    report = run_split(scheme, x0, timeout=timeout, program=program)
                except (HarnessError, RevirError, NegativeInputError) as exc:
                    case.error = f"{type(exc).__name__}: {exc}"
                    continue
                case.split_y = report.y
                case.oracle_y = report.oracle_y
                case.wall_time = report.wall_time
                case.sequential_y = run_sequential(scheme, x0)[0]
                if case.sequential_y != report.oracle_y:
                    case.problems.append(
                        f"sequential y {case.sequential_y} != recursive {report.oracle_y}"
                    )
                plan = expected_emissions(scheme, x0)
                expected = [plan.iterations, plan.base_arg, *plan.h_args]
                case.emissions_ok = report.emissions == expected
                if not case.emissions_ok:
                    case.problems.append(
                        f"emissions {report.emissions} != {expected}"
                    )
                case.residuals_ok = report.residuals == expected_residuals(x0, delta)
                if not case.residuals_ok:
                    case.problems.append(f"residuals {report.residuals} off profile")
                protocol = channel_protocol_problems(report.channel_log)
                case.protocol_ok = not protocol
                case.problems.extend(protocol)
                case.handshakes = len(report.emissions)
                if case.handshakes != plan.iterations + 2:
                    case.problems.append(
                        f"{case.handshakes} handshakes, expected {plan.iterations + 2}"
                    )
    return SweepReport(cases)
