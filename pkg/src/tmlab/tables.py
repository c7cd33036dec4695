"""Machine file parsing, canonical serialization, bundled machines, and
instruction-census statistics.

File format (UTF-8, line oriented)::

    # comment
    name: courteous-addition
    alphabet: _ * | a X
    blank: _            # optional, defaults to the first letter
    states: 9
    state 1:
      * -> X R 2        # write X, move right, go to state 2
    state 2:
      * -> R 3          # write defaults to the scanned letter
      | -> R            # next state defaults to the current state
    ...
      X -> * !          # explicit halt, writing * first

Omitted fields follow Minsky's conventions: write defaults to the
scanned letter, move to no-move (Z), next state to the current state.
Letters without a line are empty entries; empty entries halt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .machine import Action, EntryClass, MachineTable, Move, classify_entry

BUNDLED_IDS = ("addition", "neary4x6", "pedagogical-utm", "rna-utm")

_MOVES = {"L": Move.LEFT, "R": Move.RIGHT, "Z": Move.STAY}


class TableFormatError(ValueError):
    def __init__(self, message, line_no=None):
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)
        self.line_no = line_no


def parse_table(source: str) -> MachineTable:
    """Parse the machine file format into a fully resolved table."""
    name = None
    glyphs = None
    blank_glyph = None
    state_count = None
    entries = {}  # (state, rank) -> Action
    current_state = None
    seen_states = set()

    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("name:"):
            name = stripped[len("name:"):].strip()
            continue
        if stripped.startswith("alphabet:"):
            glyphs = stripped[len("alphabet:"):].split()
            for g in glyphs:
                if len(g) != 1:
                    raise TableFormatError(f"alphabet glyph {g!r} not a single character", line_no)
            continue
        if stripped.startswith("blank:"):
            blank_glyph = stripped[len("blank:"):].strip()
            continue
        if stripped.startswith("states:"):
            try:
                state_count = int(stripped[len("states:"):].strip())
            except ValueError:
                raise TableFormatError("states: expects an integer", line_no)
            continue
        m = re.fullmatch(r"state\s+(\d+)\s*:", stripped)
        if m:
            current_state = int(m.group(1))
            if current_state in seen_states:
                raise TableFormatError(f"duplicate state block {current_state}", line_no)
            seen_states.add(current_state)
            continue
        if "->" in stripped:
            if glyphs is None:
                raise TableFormatError("entry before alphabet declaration", line_no)
            if current_state is None:
                raise TableFormatError("entry outside a state block", line_no)
            _parse_entry(stripped, glyphs, current_state, entries, line_no)
            continue
        raise TableFormatError(f"unrecognized line {stripped!r}", line_no)

    if glyphs is None:
        raise TableFormatError("missing alphabet declaration")
    if state_count is None:
        raise TableFormatError("missing states declaration")
    if name is None:
        name = "unnamed"
    blank_rank = 1
    if blank_glyph is not None:
        if blank_glyph not in glyphs:
            raise TableFormatError(f"blank glyph {blank_glyph!r} not in alphabet")
        blank_rank = glyphs.index(blank_glyph) + 1
    for s in seen_states:
        if not 1 <= s <= state_count:
            raise TableFormatError(f"state block {s} outside 1..{state_count}")

    grid = []
    for state in range(1, state_count + 1):
        for rank in range(1, len(glyphs) + 1):
            grid.append(entries.get((state, rank)))
    for a in grid:
        if a is not None and not a.explicit_halt and a.next_state > state_count:
            raise TableFormatError(f"next state {a.next_state} out of range")
    return MachineTable(name, glyphs, state_count, grid, blank_rank)


def _parse_entry(line, glyphs, state, entries, line_no):
    lhs, rhs = (part.strip() for part in line.split("->", 1))
    if lhs not in glyphs:
        raise TableFormatError(f"unknown glyph {lhs!r}", line_no)
    rank = glyphs.index(lhs) + 1
    if (state, rank) in entries:
        raise TableFormatError(f"duplicate entry for {lhs!r} in state {state}", line_no)
    tokens = rhs.split()
    if not tokens:
        raise TableFormatError("empty entry body", line_no)

    if tokens[-1] == "!":
        tokens = tokens[:-1]
        write = rank
        if tokens:
            if len(tokens) > 1 or tokens[0] not in glyphs:
                raise TableFormatError(f"bad halt entry {rhs!r}", line_no)
            write = glyphs.index(tokens[0]) + 1
        entries[(state, rank)] = Action(write, Move.STAY, state, explicit_halt=True)
        return

    next_state = state
    if tokens and tokens[-1].isdigit():
        next_state = int(tokens[-1])
        if next_state < 1:
            raise TableFormatError("next state must be >= 1", line_no)
        tokens = tokens[:-1]
    move = Move.STAY
    if tokens and tokens[-1] in _MOVES:
        move = _MOVES[tokens[-1]]
        tokens = tokens[:-1]
    write = rank
    if tokens:
        if len(tokens) > 1:
            raise TableFormatError(f"cannot parse entry {rhs!r}", line_no)
        if tokens[0] not in glyphs:
            raise TableFormatError(f"unknown write glyph {tokens[0]!r}", line_no)
        write = glyphs.index(tokens[0]) + 1
    entries[(state, rank)] = Action(write, move, next_state)


def serialize_table(table: MachineTable) -> str:
    """Canonical text for a table; parse(serialize(t)) == t cell for cell.

    Defaults are re-elided: the write is omitted when it equals the scanned
    letter, the next state when it equals the current state.  The move is
    always written, which keeps single-token entries unambiguous.
    """
    lines = [f"name: {table.name}"]
    lines.append("alphabet: " + " ".join(table.glyphs))
    if table.blank_rank != 1:
        lines.append(f"blank: {table.glyphs[table.blank_rank - 1]}")
    lines.append(f"states: {table.state_count}")
    for state in range(1, table.state_count + 1):
        block = []
        for rank in range(1, table.alphabet_size + 1):
            action = table.entry(state, rank)
            if action is None:
                continue
            glyph = table.glyphs[rank - 1]
            if action.explicit_halt:
                if action.write == rank:
                    rhs = "!"
                else:
                    rhs = f"{table.glyphs[action.write - 1]} !"
            else:
                parts = []
                if action.write != rank:
                    parts.append(table.glyphs[action.write - 1])
                parts.append(action.move.value)
                if action.next_state != state:
                    parts.append(str(action.next_state))
                rhs = " ".join(parts)
            block.append(f"  {glyph} -> {rhs}")
        if block:
            lines.append(f"state {state}:")
            lines.extend(block)
    return "\n".join(lines) + "\n"


def bundled_machine(machine_id: str) -> MachineTable:
    """Load one of the bundled machines by identifier."""
    if machine_id not in BUNDLED_IDS:
        raise ValueError(f"unknown bundled machine {machine_id!r}; expected one of {BUNDLED_IDS}")
    return parse_table(bundled_source(machine_id))


def bundled_source(machine_id: str) -> str:
    fname = machine_id.replace("-", "_") + ".tm"
    return resources.files("tmlab.data").joinpath(fname).read_text(encoding="utf-8")


@dataclass(frozen=True)
class TableStats:
    """Instruction census over a whole grid.

    ``no_overwrite_nonhalt`` are the instructions that leave the scanned
    letter unchanged (glides in the broad sense); ``pure_glides`` also
    keep the state and actually move.
    """

    entries: int
    halting: int
    no_overwrite_nonhalt: int
    overwrite_nonhalt: int
    pure_glides: int
    same_state_nonhalt: int
    same_state_overwrite: int
    empty_entries: int

    def as_record(self) -> str:
        return (
            f"entries={self.entries} halting={self.halting}"
            f" no_overwrite_nonhalt={self.no_overwrite_nonhalt}"
            f" overwrite_nonhalt={self.overwrite_nonhalt}"
            f" pure_glides={self.pure_glides}"
            f" same_state_nonhalt={self.same_state_nonhalt}"
            f" same_state_overwrite={self.same_state_overwrite}"
            f" empty_entries={self.empty_entries}"
        )

    def aligned(self) -> str:
        rows = [
            ("entries", self.entries),
            ("halting", self.halting),
            ("no-overwrite (non-halting)", self.no_overwrite_nonhalt),
            ("overwrite (non-halting)", self.overwrite_nonhalt),
            ("pure glides", self.pure_glides),
            ("same-state (non-halting)", self.same_state_nonhalt),
            ("same-state overwriting", self.same_state_overwrite),
            ("empty entries", self.empty_entries),
        ]
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label:<{width}}  {value:>6}" for label, value in rows)


def table_stats(table: MachineTable) -> TableStats:
    halting = no_over = over = pure = same = same_over = empty = 0
    for state, rank, action in table.cells():
        cls = classify_entry(table, state, rank)
        if action is None:
            empty += 1
        if cls is EntryClass.HALT:
            halting += 1
            continue
        if cls is EntryClass.OVERWRITE_STEP:
            over += 1
        else:
            no_over += 1
            if cls is EntryClass.PURE_GLIDE:
                pure += 1
        if action.next_state == state:
            same += 1
            if action.write != rank:
                same_over += 1
    return TableStats(
        entries=table.state_count * table.alphabet_size,
        halting=halting,
        no_overwrite_nonhalt=no_over,
        overwrite_nonhalt=over,
        pure_glides=pure,
        same_state_nonhalt=same,
        same_state_overwrite=same_over,
        empty_entries=empty,
    )


@dataclass(frozen=True)
class EncodingViolation:
    state: int
    rank: int  # 0 for state-level problems
    problem: str

    def __str__(self):
        if self.rank:
            return f"state {self.state}, letter rank {self.rank}: {self.problem}"
        return f"state {self.state}: {self.problem}"


def validate_for_encoding(table: MachineTable) -> list:
    """Problems that make a table unrepresentable in the simulator encoding:
    non-halting stay instructions, and states with no defined entries."""
    problems = []
    for state in range(1, table.state_count + 1):
        defined = 0
        for rank in range(1, table.alphabet_size + 1):
            action = table.entry(state, rank)
            if action is None:
                continue
            defined += 1
            if (
                not action.explicit_halt
                and action.move is Move.STAY
                and classify_entry(table, state, rank) is not EntryClass.HALT
            ):
                problems.append(EncodingViolation(state, rank, "non-halting stay instruction"))
        if defined == 0:
            problems.append(EncodingViolation(state, 0, "no defined entries"))
    return problems
