"""A small reversible intermediate representation.

Programs are finite sequences of instructions, every one of which has a
syntactic inverse, so a whole program is inverted by inverting each
instruction and reversing the order. The interpreter enforces the two
disciplines that make that inversion a semantic inverse:

* a loop body must not write its own count register (the count is read once
  at loop entry; negative counts run the inverted body);
* a sign selection must leave the sign of its discriminator unchanged - the
  value may move while the branch runs, as long as the sign is restored.

Emissions are observations, not state: an emit sends a copy of a register
to a port and inverts to itself, so inverse runs are checked against a
discarding sink. Cell swaps exchange a register with named external state
and are their own inverse.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

RegisterId = str


class RevirError(Exception):
    """Base class for IR-layer errors."""


class LoopCountMutation(RevirError):
    """A loop body writes the loop's own count register."""


class BranchSignViolation(RevirError):
    """A selection branch changed the sign of its discriminator."""


class UndeclaredNameError(RevirError):
    """A program references a register, port, or cell it does not declare."""


# --- instructions -----------------------------------------------------------

@dataclass(frozen=True)
class AddConst:
    """reg := reg + amount."""

    reg: RegisterId
    amount: int


@dataclass(frozen=True)
class AddReg:
    """dest := dest + sign * src; the registers must differ."""

    dest: RegisterId
    src: RegisterId
    sign: int = 1

    def __post_init__(self):
        if self.dest == self.src:
            raise ValueError(f"AddReg needs distinct registers, got {self.dest!r} twice")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class SubFrom:
    """dest := src - dest (self-inverse); the registers must differ."""

    dest: RegisterId
    src: RegisterId

    def __post_init__(self):
        if self.dest == self.src:
            raise ValueError(f"SubFrom needs distinct registers, got {self.dest!r} twice")


@dataclass(frozen=True)
class For:
    """Run body count-register-value times; a negative count runs the
    inverted body that many times. The body must not write the count."""

    count: RegisterId
    body: tuple

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class IfSign:
    """Dispatch on the sign of reg; the chosen branch must preserve it."""

    reg: RegisterId
    pos: tuple = ()
    zero: tuple = ()
    neg: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "zero", tuple(self.zero))
        object.__setattr__(self, "neg", tuple(self.neg))


@dataclass(frozen=True)
class Emit:
    """Send a copy of reg to a port; registers are untouched."""

    port: str
    reg: RegisterId


@dataclass(frozen=True)
class SwapCell:
    """Exchange reg with the named external cell."""

    cell: str
    reg: RegisterId


Instruction = Union[AddConst, AddReg, SubFrom, For, IfSign, Emit, SwapCell]


def _collect_names(block, regs, ports, cells):
    for inst in block:
        if isinstance(inst, AddConst):
            regs.add(inst.reg)
        elif isinstance(inst, (AddReg, SubFrom)):
            regs.add(inst.dest)
            regs.add(inst.src)
        elif isinstance(inst, For):
            regs.add(inst.count)
            _collect_names(inst.body, regs, ports, cells)
        elif isinstance(inst, IfSign):
            regs.add(inst.reg)
            for branch in (inst.pos, inst.zero, inst.neg):
                _collect_names(branch, regs, ports, cells)
        elif isinstance(inst, Emit):
            ports.add(inst.port)
            regs.add(inst.reg)
        elif isinstance(inst, SwapCell):
            cells.add(inst.cell)
            regs.add(inst.reg)
        else:
            raise TypeError(f"not an instruction: {inst!r}")


@dataclass(frozen=True)
class RevProgram:
    """An instruction sequence plus the names it is allowed to touch."""

    body: tuple
    registers: frozenset = frozenset()
    ports: frozenset = frozenset()
    cells: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "registers", frozenset(self.registers))
        object.__setattr__(self, "ports", frozenset(self.ports))
        object.__setattr__(self, "cells", frozenset(self.cells))
        regs, ports, cells = set(), set(), set()
        _collect_names(self.body, regs, ports, cells)
        for kind, used, declared in (
            ("register", regs, self.registers),
            ("port", ports, self.ports),
            ("cell", cells, self.cells),
        ):
            undeclared = used - declared
            if undeclared:
                raise UndeclaredNameError(f"undeclared {kind}(s): {sorted(undeclared)}")

    @classmethod
    def from_body(cls, body) -> "RevProgram":
        """Declare exactly the names the body references."""
        regs, ports, cells = set(), set(), set()
        _collect_names(tuple(body), regs, ports, cells)
        return cls(tuple(body), frozenset(regs), frozenset(ports), frozenset(cells))


# --- inversion ---------------------------------------------------------------

def invert_instruction(inst: Instruction) -> Instruction:
    if isinstance(inst, AddConst):
        return AddConst(inst.reg, -inst.amount)
    if isinstance(inst, AddReg):
        return AddReg(inst.dest, inst.src, -inst.sign)
    if isinstance(inst, For):
        return For(inst.count, invert_block(inst.body))
    if isinstance(inst, IfSign):
        return IfSign(
            inst.reg,
            invert_block(inst.pos),
            invert_block(inst.zero),
            invert_block(inst.neg),
        )
    # SubFrom, Emit, SwapCell are their own inverses
    return inst


@functools.lru_cache(maxsize=None)
def invert_block(block: tuple) -> tuple:
    return tuple(invert_instruction(inst) for inst in reversed(block))


def invert(program: RevProgram) -> RevProgram:
    """Syntactic inverse: same declarations, inverted body."""
    return RevProgram(
        invert_block(program.body), program.registers, program.ports, program.cells
    )


@functools.lru_cache(maxsize=None)
def written_registers(block: tuple) -> frozenset:
    """Registers any instruction in block (at any nesting depth) can write."""
    written = set()
    for inst in block:
        if isinstance(inst, AddConst):
            written.add(inst.reg)
        elif isinstance(inst, (AddReg, SubFrom)):
            written.add(inst.dest)
        elif isinstance(inst, SwapCell):
            written.add(inst.reg)
        elif isinstance(inst, For):
            written |= written_registers(inst.body)
        elif isinstance(inst, IfSign):
            for branch in (inst.pos, inst.zero, inst.neg):
                written |= written_registers(branch)
    return frozenset(written)


# --- state and execution ------------------------------------------------------

class Store:
    """Total register file: any register reads as 0 until written.

    Zero-valued entries are dropped, so a store whose registers were all
    returned to 0 compares equal to a fresh one.
    """

    __slots__ = ("_regs",)

    def __init__(self, values: Mapping[RegisterId, int] | None = None):
        self._regs = {}
        if values:
            for reg, value in values.items():
                self[reg] = value

    def __getitem__(self, reg: RegisterId) -> int:
        return self._regs.get(reg, 0)

    def __setitem__(self, reg: RegisterId, value: int):
        if value == 0:
            self._regs.pop(reg, None)
        else:
            self._regs[reg] = value

    def copy(self) -> "Store":
        fresh = Store()
        fresh._regs = dict(self._regs)
        return fresh

    def as_dict(self) -> dict:
        """Non-zero registers only."""
        return dict(self._regs)

    def __eq__(self, other):
        if not isinstance(other, Store):
            return NotImplemented
        return self._regs == other._regs

    def __repr__(self):
        inside = ", ".join(f"{k}={v}" for k, v in sorted(self._regs.items()))
        return f"Store({inside})"


class PlainCell:
    """In-memory cell: swap trades the held value for the caller's."""

    __slots__ = ("value",)

    def __init__(self, value: int = 0):
        self.value = value

    def swap(self, value: int) -> int:
        out = self.value
        self.value = value
        return out

    def __repr__(self):
        return f"PlainCell({self.value})"


def discard(value: int) -> None:
    """Sink that drops every emission."""


@dataclass
class RecordingSink:
    """Sink that keeps every emitted value in order."""

    values: list = field(default_factory=list)

    def __call__(self, value: int):
        self.values.append(value)


def run(
    program: RevProgram,
    store: Store | None = None,
    sinks: Mapping[str, Callable[[int], None]] | None = None,
    cells=None,
) -> Store:
    """Execute program and return the final store.

    The input store is copied, not modified. Every declared port needs a sink
    callable and every declared cell an object with swap(value) -> value;
    channel-backed sinks and cells may block, which is their caller's
    contract, not the interpreter's.
    """
    work = store.copy() if store is not None else Store()
    sinks = dict(sinks or {})
    cells = dict(cells or {})
    missing = program.ports - sinks.keys()
    if missing:
        raise ValueError(f"no sink bound for port(s): {sorted(missing)}")
    missing = program.cells - cells.keys()
    if missing:
        raise ValueError(f"no binding for cell(s): {sorted(missing)}")
    _run_block(program.body, work, sinks, cells)
    return work


def _run_block(block, store, sinks, cells):
    for inst in block:
        if isinstance(inst, AddConst):
            store[inst.reg] = store[inst.reg] + inst.amount
        elif isinstance(inst, AddReg):
            store[inst.dest] = store[inst.dest] + inst.sign * store[inst.src]
        elif isinstance(inst, SubFrom):
            store[inst.dest] = store[inst.src] - store[inst.dest]
        elif isinstance(inst, For):
            if inst.count in written_registers(inst.body):
                raise LoopCountMutation(
                    f"loop body writes its count register {inst.count!r}"
                )
            count = store[inst.count]
            body = inst.body if count >= 0 else invert_block(inst.body)
            for _ in range(abs(count)):
                _run_block(body, store, sinks, cells)
        elif isinstance(inst, IfSign):
            before = _sign(store[inst.reg])
            if before > 0:
                branch = inst.pos
            elif before == 0:
                branch = inst.zero
            else:
                branch = inst.neg
            _run_block(branch, store, sinks, cells)
            if _sign(store[inst.reg]) != before:
                raise BranchSignViolation(
                    f"branch changed sign of {inst.reg!r} "
                    f"({before} -> {_sign(store[inst.reg])})"
                )
        elif isinstance(inst, Emit):
            sinks[inst.port](store[inst.reg])
        elif isinstance(inst, SwapCell):
            store[inst.reg] = cells[inst.cell].swap(store[inst.reg])
        else:
            raise TypeError(f"not an instruction: {inst!r}")


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


# --- textual dump -------------------------------------------------------------

def dump(program: RevProgram) -> str:
    """One instruction per line, nested blocks indented. Not re-parsed."""
    return "\n".join(_dump_block(program.body, ""))


def _dump_block(block, indent):
    lines = []
    for inst in block:
        if isinstance(inst, AddConst):
            lines.append(f"{indent}add {inst.reg}, {inst.amount}")
        elif isinstance(inst, AddReg):
            sign = "+" if inst.sign > 0 else "-"
            lines.append(f"{indent}addreg {inst.dest}, {inst.src}, {sign}")
        elif isinstance(inst, SubFrom):
            lines.append(f"{indent}subfrom {inst.dest}, {inst.src}")
        elif isinstance(inst, For):
            lines.append(f"{indent}for {inst.count} {{")
            lines.extend(_dump_block(inst.body, indent + "  "))
            lines.append(f"{indent}}}")
        elif isinstance(inst, IfSign):
            lines.append(f"{indent}ifsign {inst.reg} {{")
            for label, branch in (("pos", inst.pos), ("zero", inst.zero), ("neg", inst.neg)):
                lines.append(f"{indent}  {label} {{")
                lines.extend(_dump_block(branch, indent + "    "))
                lines.append(f"{indent}  }}")
            lines.append(f"{indent}}}")
        elif isinstance(inst, Emit):
            lines.append(f"{indent}emit {inst.port}, {inst.reg}")
        elif isinstance(inst, SwapCell):
            lines.append(f"{indent}swapcell {inst.cell}, {inst.reg}")
    return lines
