"""Bijective two-nucleotides-per-glyph codec between the simulator's
16-letter alphabet and {A, C, G, U}, plus construction of the
4-letter machine's initial configuration."""

from __future__ import annotations

from .encoding import EncodedConfiguration
from .machine import Configuration, MachineTable, Tape

#: Fixed glyph-to-pair map (total and injective in both directions).
RNA_MAP = {
    "S": "UU", "X": "AA", "Y": "CC", "U": "GG",
    "T": "UA", "F": "UC", "W": "UG", "_": "CG",
    "L": "AC", "R": "AG", "0": "CA", "1": "CU",
    "h": "GA", "d": "GC", "e": "GU", "Z": "AU",
}
RNA_INVERSE = {pair: glyph for glyph, pair in RNA_MAP.items()}
assert len(RNA_INVERSE) == 16

_ENCODE_TABLE = str.maketrans(RNA_MAP)


class RnaCodecError(ValueError):
    pass


def rna_encode(text: str) -> str:
    """Each simulator glyph becomes its nucleotide pair; length doubles."""
    try:
        return text.translate(_ENCODE_TABLE)
    except Exception:  # pragma: no cover - translate cannot fail; guard below
        raise RnaCodecError("unencodable text")


def _check_encodable(text: str) -> None:
    bad = set(text) - set(RNA_MAP)
    if bad:
        raise RnaCodecError(f"not simulator glyphs: {sorted(bad)}")


def rna_decode(text: str) -> str:
    """Exact inverse of :func:`rna_encode`; input length must be even."""
    if len(text) % 2:
        raise RnaCodecError("nucleotide text has odd length")
    out = []
    for i in range(0, len(text), 2):
        pair = text[i : i + 2]
        glyph = RNA_INVERSE.get(pair)
        if glyph is None:
            raise RnaCodecError(f"not a nucleotide pair at offset {i}: {pair!r}")
        out.append(glyph)
    return "".join(out)


def rna_encode_strict(text: str) -> str:
    _check_encodable(text)
    return rna_encode(text)


def rna_initial_configuration(
    table_rna: MachineTable,
    encoded: EncodedConfiguration,
    left_blank_squares: int = 256,
    right_blank_squares: int = 256,
) -> Configuration:
    """Initial configuration of the 4-letter machine.

    The tape is the pair encoding of the 16-letter tape, with explicit
    encoded blanks on both sides: the 4-letter machine reads two cells
    per simulated cell, so cells beyond the translated window must still
    read as encoded blanks, not as its own (never legitimately read)
    blank nucleotide.  The pads cover the work area built to the left
    and the squares grown to the right; runs that outgrow them stop on
    an empty entry, which is detectable.  The head starts on the second
    nucleotide of the simulated start cell (pairs are entered from the
    side the head arrives from, and the start pair is approached as if
    from the right).
    """
    padded = "_" * left_blank_squares + encoded.full + "_" * right_blank_squares
    glyph_text = rna_encode(padded)
    tape = Tape(
        table_rna.blank_rank,
        -2 * left_blank_squares,
        bytes(table_rna.rank_of(g) for g in glyph_text),
    )
    head = 2 * encoded.u_head + 1
    return Configuration(tape, head, 1)
