"""Deterministic single-tape Turing machine engine.

Tables follow Minsky's conventions: an instruction names the letter to
write, the head move (left, right, or none) and the next state, each
defaulting to "unchanged" when omitted.  Three situations halt a run:
an explicit halt instruction, an empty table entry, and a stationary
identity (write the scanned letter, no move, same state) -- the latter
two are detected at lookup time so they consume no step.

Cell indices are signed; every cell outside the materialized window
reads as the blank (the first letter of the machine's alphabet unless
overridden).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional


class Move(enum.Enum):
    LEFT = "L"
    RIGHT = "R"
    STAY = "Z"

    @property
    def delta(self) -> int:
        return {"L": -1, "R": 1, "Z": 0}[self.value]


class HaltReason(enum.Enum):
    EXPLICIT = "explicit"
    EMPTY_ENTRY = "empty-entry"
    STATIONARY_IDENTITY = "stationary-identity"
    BUDGET_EXCEEDED = "budget-exceeded"
    LEFT_FENCE_VIOLATION = "left-fence-violation"


#: Halt reasons that are properties of the configuration itself; re-running
#: from the final configuration reproduces them with zero steps.
ABSORBING_REASONS = frozenset(
    {HaltReason.EXPLICIT, HaltReason.EMPTY_ENTRY, HaltReason.STATIONARY_IDENTITY}
)


class EntryClass(enum.Enum):
    HALT = "halt"
    PURE_GLIDE = "pure-glide"
    NO_OVERWRITE_STEP = "no-overwrite-step"
    OVERWRITE_STEP = "overwrite-step"


@dataclass(frozen=True)
class Letter:
    """A letter of a machine alphabet: 1-based rank plus display glyph."""

    rank: int
    glyph: str


@dataclass(frozen=True)
class Action:
    """One resolved table entry.

    ``explicit_halt`` marks the '!' instruction; its write (if any) is
    applied to the scanned square when the machine stops.  For ordinary
    instructions ``write``/``move``/``next_state`` are fully resolved,
    never defaults.
    """

    write: int
    move: Move
    next_state: int
    explicit_halt: bool = False


class MachineTable:
    """Ordered alphabet plus a dense (state, letter-rank) action grid."""

    def __init__(self, name, glyphs, state_count, grid, blank_rank=1):
        self.name = name
        self.glyphs = tuple(glyphs)
        self.state_count = state_count
        self.blank_rank = blank_rank
        self._rank = {g: i + 1 for i, g in enumerate(self.glyphs)}
        # dense row-major grid: _grid[(s-1)*A + (r-1)] is Action or None
        self._grid = grid
        self._check()

    def _check(self):
        if len(set(self.glyphs)) != len(self.glyphs):
            raise ValueError(f"{self.name}: duplicate glyphs in alphabet")
        if not 1 <= self.blank_rank <= len(self.glyphs):
            raise ValueError(f"{self.name}: blank rank out of range")
        if len(self._grid) != self.state_count * len(self.glyphs):
            raise ValueError(f"{self.name}: grid size mismatch")
        for i, a in enumerate(self._grid):
            if a is None:
                continue
            if not 1 <= a.write <= len(self.glyphs):
                raise ValueError(f"{self.name}: bad write rank in cell {i}")
            if not 1 <= a.next_state <= self.state_count:
                raise ValueError(f"{self.name}: next state out of range in cell {i}")

    @property
    def alphabet_size(self) -> int:
        return len(self.glyphs)

    @property
    def letters(self):
        return tuple(Letter(i + 1, g) for i, g in enumerate(self.glyphs))

    @property
    def blank(self) -> Letter:
        return Letter(self.blank_rank, self.glyphs[self.blank_rank - 1])

    def rank_of(self, glyph: str) -> int:
        try:
            return self._rank[glyph]
        except KeyError:
            raise ValueError(f"{self.name}: unknown glyph {glyph!r}") from None

    def glyph_of(self, rank: int) -> str:
        return self.glyphs[rank - 1]

    def _resolve_rank(self, letter) -> int:
        if isinstance(letter, Letter):
            return letter.rank
        if isinstance(letter, str):
            return self.rank_of(letter)
        return int(letter)

    def entry(self, state: int, letter) -> Optional[Action]:
        """The grid cell for (state, letter), verbatim; None means empty."""
        rank = self._resolve_rank(letter)
        if not 1 <= state <= self.state_count:
            raise ValueError(f"{self.name}: state {state} out of range")
        if not 1 <= rank <= len(self.glyphs):
            raise ValueError(f"{self.name}: letter rank {rank} out of range")
        return self._grid[(state - 1) * len(self.glyphs) + (rank - 1)]

    def cells(self):
        """Iterate (state, rank, action-or-None) over the whole grid."""
        a = len(self.glyphs)
        for i, act in enumerate(self._grid):
            yield i // a + 1, i % a + 1, act

    def __eq__(self, other):
        return (
            isinstance(other, MachineTable)
            and self.glyphs == other.glyphs
            and self.state_count == other.state_count
            and self.blank_rank == other.blank_rank
            and self._grid == other._grid
        )


def lookup(table: MachineTable, state: int, letter) -> Optional[Action]:
    """Pure grid read; None for an empty entry."""
    return table.entry(state, letter)


def classify_entry(table: MachineTable, state: int, letter) -> EntryClass:
    """Classify a table cell; stationary identities count as halts."""
    rank = table._resolve_rank(letter)
    action = table.entry(state, rank)
    if action is None or action.explicit_halt:
        return EntryClass.HALT
    if action.write == rank and action.move is Move.STAY and action.next_state == state:
        return EntryClass.HALT
    if action.write != rank:
        return EntryClass.OVERWRITE_STEP
    if action.next_state == state and action.move is not Move.STAY:
        return EntryClass.PURE_GLIDE
    return EntryClass.NO_OVERWRITE_STEP


class Tape:
    """Growable window of letter ranks over an implicitly blank tape."""

    __slots__ = ("blank_rank", "window_start", "cells")

    def __init__(self, blank_rank=1, window_start=0, cells=()):
        self.blank_rank = blank_rank
        self.window_start = window_start
        self.cells = bytearray(cells)

    @classmethod
    def from_glyphs(cls, table: MachineTable, glyphs: str, window_start=0) -> "Tape":
        return cls(
            table.blank_rank,
            window_start,
            bytes(table.rank_of(g) for g in glyphs),
        )

    def read(self, cell: int) -> int:
        i = cell - self.window_start
        if 0 <= i < len(self.cells):
            return self.cells[i]
        return self.blank_rank

    def write(self, cell: int, rank: int) -> None:
        i = cell - self.window_start
        if i < 0:
            self.cells[0:0] = bytes([self.blank_rank]) * (-i)
            self.window_start = cell
            i = 0
        elif i >= len(self.cells):
            self.cells.extend(bytes([self.blank_rank]) * (i - len(self.cells) + 1))
        self.cells[i] = rank

    def trimmed(self):
        """(window_start, cells) with blank margins removed; an all-blank
        tape canonicalizes to (0, b"")."""
        lo, hi = 0, len(self.cells)
        b = self.blank_rank
        while lo < hi and self.cells[lo] == b:
            lo += 1
        while hi > lo and self.cells[hi - 1] == b:
            hi -= 1
        if lo == hi:
            return 0, b""
        return self.window_start + lo, bytes(self.cells[lo:hi])

    def copy(self) -> "Tape":
        return Tape(self.blank_rank, self.window_start, bytes(self.cells))

    def __eq__(self, other):
        if not isinstance(other, Tape):
            return NotImplemented
        return self.blank_rank == other.blank_rank and self.trimmed() == other.trimmed()


@dataclass
class Configuration:
    """Tape plus head cell and current state."""

    tape: Tape
    head: int = 0
    state: int = 1

    @classmethod
    def from_glyphs(cls, table, glyphs, head=0, state=1, window_start=0):
        return cls(Tape.from_glyphs(table, glyphs, window_start), head, state)

    def scanned(self) -> int:
        return self.tape.read(self.head)

    def copy(self) -> "Configuration":
        return Configuration(self.tape.copy(), self.head, self.state)

    def same_as(self, other: "Configuration") -> bool:
        return (
            self.head == other.head
            and self.state == other.state
            and self.tape == other.tape
        )


@dataclass(frozen=True)
class StepOutcome:
    applied: bool
    next: Optional[Configuration] = None
    reason: Optional[HaltReason] = None


@dataclass(frozen=True)
class RunResult:
    steps: int
    reason: HaltReason
    final: Configuration


def apply_step(table: MachineTable, config: Configuration) -> StepOutcome:
    """One step, immutably; halting outcomes return the final configuration
    (with an explicit halt's write applied)."""
    rank = config.scanned()
    action = table.entry(config.state, rank)
    if action is None:
        return StepOutcome(False, config.copy(), HaltReason.EMPTY_ENTRY)
    if action.explicit_halt:
        final = config.copy()
        final.tape.write(final.head, action.write)
        return StepOutcome(False, final, HaltReason.EXPLICIT)
    if action.write == rank and action.move is Move.STAY and action.next_state == config.state:
        return StepOutcome(False, config.copy(), HaltReason.STATIONARY_IDENTITY)
    nxt = config.copy()
    nxt.tape.write(nxt.head, action.write)
    nxt.head += action.move.delta
    nxt.state = action.next_state
    return StepOutcome(True, nxt)


Observer = Callable[[int, Configuration], None]


def run(
    table: MachineTable,
    initial: Configuration,
    budget: int,
    fence_left: Optional[int] = None,
    observer: Optional[Observer] = None,
) -> RunResult:
    """Iterate the machine from ``initial`` for at most ``budget`` applied steps.

    Only applied (non-halting) instructions count as steps.  With
    ``fence_left`` set, the run stops before any step that would carry the
    head left of the fence.  The observer is called after every applied
    step with (step index, live configuration); it must not mutate it.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    work = initial.copy()
    tape = work.tape
    cells = tape.cells
    ws = tape.window_start
    blank = tape.blank_rank
    head = work.head
    state = work.state
    alpha = table.alphabet_size
    acts = _flat_actions(table)
    steps = 0
    reason = None
    pad = bytes([blank]) * 32

    while True:
        if steps >= budget:
            reason = HaltReason.BUDGET_EXCEEDED
            break
        i = head - ws
        if i < 0:
            cells[0:0] = pad
            ws -= 32
            i += 32
        elif i >= len(cells):
            cells.extend(pad)
        act = acts[(state - 1) * alpha + (cells[i] - 1)]
        if act is None:
            reason = HaltReason.EMPTY_ENTRY
            break
        write, delta, nxt, halt = act
        if halt is not None:
            if halt is HaltReason.EXPLICIT:
                cells[i] = write
            reason = halt
            break
        if fence_left is not None and head + delta < fence_left:
            reason = HaltReason.LEFT_FENCE_VIOLATION
            break
        cells[i] = write
        head += delta
        state = nxt
        steps += 1
        if observer is not None:
            tape.window_start = ws
            work.head = head
            work.state = state
            observer(steps, work)

    tape.window_start = ws
    work.head = head
    work.state = state
    return RunResult(steps, reason, work)


def _flat_actions(table: MachineTable):
    """Per-table cache of (write, delta, next, halt-reason-or-None) tuples."""
    cached = getattr(table, "_flat_cache", None)
    if cached is not None:
        return cached
    flat = []
    for state, rank, action in table.cells():
        if action is None:
            flat.append(None)
        elif action.explicit_halt:
            flat.append((action.write, 0, state, HaltReason.EXPLICIT))
        elif (
            action.write == rank
            and action.move is Move.STAY
            and action.next_state == state
        ):
            flat.append((action.write, 0, state, HaltReason.STATIONARY_IDENTITY))
        else:
            flat.append((action.write, action.move.delta, action.next_state, None))
    table._flat_cache = flat
    return flat


def format_window(table: MachineTable, config: Configuration) -> str:
    """Glyph string of the minimal window holding all non-blank cells,
    extended to include the head; an all-blank tape gives "".  Head
    position and state are reported separately, never embedded here."""
    start, cells = config.tape.trimmed()
    if not cells:
        return ""
    head = config.head
    if head < start:
        cells = bytes([config.tape.blank_rank]) * (start - head) + cells
    elif head >= start + len(cells):
        cells = cells + bytes([config.tape.blank_rank]) * (head - start - len(cells) + 1)
    return "".join(table.glyphs[r - 1] for r in cells)
