"""Compiling a machine-plus-tape into the simulator's tape language.

A simulated machine M (alphabet size L, N states, working on a half
tape) becomes a text over the simulator's 16 glyphs:

    S <program> S <tape squares> _

The program is, per state, an ``X`` followed by one instruction per
letter in rank order.  An instruction is ``Y`` + letter field + move +
state field.  Letter fields are the binary rank, low bit first, padded
with ``h`` to the constant width bitlen(L)+1 (so at least one ``h``);
state fields are the bare binary of the state, low bit first, ending
in ``1``.  Each tape square is ``U`` + letter field, with ``W`` in
place of the delimiters marking the scanned square and (during runs)
the current state's ``X``.  Halting entries (empty cells, stationary
identities, explicit halts) are encoded with move ``Z`` and the
current state; an explicit halt that writes keeps its written letter
so the simulator performs the final write.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .machine import Action, Configuration, MachineTable, Move, Tape
from .tables import validate_for_encoding

#: Alphabet of the simulator, in rank order (rank 1 is the blank).
SIMULATOR_GLYPHS = "_01LRXYUWShdeFZT"


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class EncodingScheme:
    """Field widths and size parameters for one source machine."""

    letter_field_width: int
    alphabet_size: int
    state_count: int

    @classmethod
    def for_table(cls, table: MachineTable) -> "EncodingScheme":
        return cls(field_width(table.alphabet_size), table.alphabet_size, table.state_count)

    @property
    def unary_bound(self) -> int:
        """P, the largest unary count the simulator's work area must hold."""
        return max(self.alphabet_size, self.state_count)


def field_width(alphabet_size: int) -> int:
    """Constant width of a letter field: bitlen(L) + 1 (>= one pad)."""
    if alphabet_size < 1:
        raise EncodingError("alphabet size must be >= 1")
    return alphabet_size.bit_length() + 1


def encode_letter_field(rank: int, width: int) -> str:
    """Binary of the rank, low bit first, h-padded to exactly ``width``."""
    if rank < 1:
        raise EncodingError("letter rank must be >= 1")
    bits = _lsb_binary(rank)
    if len(bits) >= width:
        raise EncodingError(f"rank {rank} does not fit a width-{width} field")
    return bits + "h" * (width - len(bits))


def encode_state_field(state: int) -> str:
    """Binary of the state, low bit first, no padding (ends in 1)."""
    if state < 1:
        raise EncodingError("state must be >= 1")
    return _lsb_binary(state)


def _lsb_binary(n: int) -> str:
    out = []
    while n:
        out.append("01"[n & 1])
        n >>= 1
    return "".join(out)


def encode_instruction(scheme: EncodingScheme, state: int, read_rank: int,
                       action: Optional[Action]) -> str:
    """One instruction; halting entries encode as write-same / Z / same state
    (an explicit halt keeps its written letter)."""
    if action is None:
        return "Y" + encode_letter_field(read_rank, scheme.letter_field_width) + "Z" + encode_state_field(state)
    if action.explicit_halt:
        return "Y" + encode_letter_field(action.write, scheme.letter_field_width) + "Z" + encode_state_field(state)
    if action.move is Move.STAY:
        if action.write == read_rank and action.next_state == state:
            # stationary identity: a halt in disguise
            return "Y" + encode_letter_field(read_rank, scheme.letter_field_width) + "Z" + encode_state_field(state)
        raise EncodingError(f"non-halting stay instruction (state {state}, rank {read_rank}) is not encodable")
    return (
        "Y"
        + encode_letter_field(action.write, scheme.letter_field_width)
        + action.move.value
        + encode_state_field(action.next_state)
    )


def encode_program(table: MachineTable, scheme: Optional[EncodingScheme] = None) -> str:
    """Concatenation over all states of X plus one instruction per letter."""
    scheme = scheme or EncodingScheme.for_table(table)
    problems = validate_for_encoding(table)
    if problems:
        raise EncodingError("table not encodable: " + "; ".join(str(p) for p in problems))
    parts = []
    for state in range(1, table.state_count + 1):
        parts.append("X")
        for rank in range(1, table.alphabet_size + 1):
            parts.append(encode_instruction(scheme, state, rank, table.entry(state, rank)))
    return "".join(parts)


def encode_tape(table: MachineTable, tape_ranks, scanned: int,
                scheme: Optional[EncodingScheme] = None) -> str:
    """Squares from the half-tape origin through the last interesting cell,
    each U (or W when scanned) plus a letter field."""
    scheme = scheme or EncodingScheme.for_table(table)
    ranks = list(tape_ranks)
    if scanned < 0:
        raise EncodingError("scanned cell must lie on the half tape")
    blank = table.blank_rank
    last = scanned
    for i, r in enumerate(ranks):
        if r != blank:
            last = max(last, i)
    parts = []
    for i in range(last + 1):
        rank = ranks[i] if i < len(ranks) else blank
        parts.append(("W" if i == scanned else "U") + encode_letter_field(rank, scheme.letter_field_width))
    return "".join(parts)


@dataclass(frozen=True)
class EncodedConfiguration:
    """The simulator's initial tape for one (machine, configuration) pair."""

    full: str            # text over the simulator's 16 glyphs
    u_head: int          # starting head cell (the leftmost S)
    u_state: int         # starting state (1)
    m_tape_start: int    # index of the first cell after the rightmost S
    scheme: EncodingScheme

    @property
    def rightmost_s(self) -> int:
        return self.m_tape_start - 1


def encode_initial_configuration(table: MachineTable, m_config: Configuration) -> EncodedConfiguration:
    """Build the full initial tape: S, program, S, tape squares, one blank.

    The source machine must start in state 1 (the simulator's setup marks
    the first state's X) with its head at the half-tape origin, cell 0.
    """
    if m_config.state != 1:
        raise EncodingError("only machines starting in state 1 can be encoded")
    if m_config.head < 0:
        raise EncodingError("head must start on the half tape")
    scheme = EncodingScheme.for_table(table)
    start, cells = m_config.tape.trimmed()
    if start < 0:
        raise EncodingError("tape content extends left of the half-tape origin")
    ranks = [table.blank_rank] * start + list(cells)
    program = encode_program(table, scheme)
    tape = encode_tape(table, ranks, m_config.head, scheme)
    full = "S" + program + "S" + tape + "_"
    return EncodedConfiguration(
        full=full,
        u_head=0,
        u_state=1,
        m_tape_start=len(program) + 2,
        scheme=scheme,
    )


def simulator_configuration(table_u: MachineTable, encoded: EncodedConfiguration) -> Configuration:
    """Engine configuration for the simulator from an encoded tape."""
    return Configuration.from_glyphs(table_u, encoded.full, head=encoded.u_head, state=encoded.u_state)


def encoded_length(table: MachineTable, include_region_delimiters: bool = False) -> int:
    """Length in simulator glyphs of the machine's program code.

    The frozen convention counts every instruction plus the per-state X
    delimiters; ``include_region_delimiters`` adds the single S that
    closes the program region, the variant some size judgments use.
    """
    n = len(encode_program(table))
    return n + 1 if include_region_delimiters else n


_SQUARE = re.compile(r"([UW])([01]*1)(h+)")


@dataclass(frozen=True)
class DecodedConfiguration:
    """A source-machine configuration read back out of simulator tape text."""

    tape_ranks: tuple
    scanned: int
    state: int
    clean: bool
    problem: str = ""

    def configuration(self, table: MachineTable) -> Configuration:
        tape = Tape(table.blank_rank, 0, bytes(self.tape_ranks))
        return Configuration(tape, self.scanned, self.state)


def decode_m_configuration(u_text: str) -> DecodedConfiguration:
    """Parse the simulated machine's tape, head and state out of the
    simulator's tape text (tau extraction).

    The tape region is everything right of the rightmost S; decoding is
    exact only at clean snapshots, where that region holds only
    {U, W, 0, 1, h} with exactly one W and well-formed equal-width
    squares.  The state is read from the program-side W (the marked X);
    before the program W exists the machine is still in state 1.
    """
    s = u_text.rstrip("_")
    if "S" not in s:
        raise ValueError("no S delimiter in tape text")
    right_s = s.rindex("S")
    region = s[right_s + 1:]
    tape_ranks, scanned, clean, problem = _decode_tape_region(region)
    state = _decode_state(s[:right_s])
    return DecodedConfiguration(tuple(tape_ranks), scanned, state, clean, problem)


def _decode_tape_region(region: str):
    if set(region) - set("UW01h"):
        return (), 0, False, "transient marks in tape region"
    if region.count("W") != 1:
        return (), 0, False, f"{region.count('W')} scanned-square marks"
    squares = []
    scanned = -1
    pos = 0
    width = None
    while pos < len(region):
        m = _SQUARE.match(region, pos)
        if m is None or m.start() != pos:
            return (), 0, False, f"malformed square at offset {pos}"
        if m.group(1) == "W":
            scanned = len(squares)
        body = m.group(2) + m.group(3)
        if width is None:
            width = len(body)
        elif len(body) != width:
            return (), 0, False, f"field width mismatch at offset {pos}"
        squares.append(_rank_of_field(m.group(2)))
        pos = m.end()
    if scanned < 0:
        return (), 0, False, "no scanned-square mark"
    return squares, scanned, True, ""


def _rank_of_field(bits: str) -> int:
    rank = 0
    for i, b in enumerate(bits):
        if b == "1":
            rank |= 1 << i
    return rank


def _decode_state(program_text: str) -> int:
    w = program_text.find("W")
    if w < 0:
        return 1
    return program_text.count("X", 0, w) + 1
