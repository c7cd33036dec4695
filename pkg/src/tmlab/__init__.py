"""Deterministic Turing-machine simulation laboratory.

A small engine for single-tape machines under Minsky's table
conventions, four bundled machines (a courteous unary addition, a tiny
4-letter/6-state universal machine, an 87-state/16-letter simulator
that runs any polite machine from an encoded tape, and its 413-state
RNA-alphabet counterpart), the tape-encoding compiler that feeds the
simulator, the nucleotide-pair codec, and an experiment harness that
verifies the whole stack end to end.
"""

from .machine import (
    Action,
    Configuration,
    EntryClass,
    HaltReason,
    Letter,
    MachineTable,
    Move,
    RunResult,
    Tape,
    apply_step,
    classify_entry,
    format_window,
    lookup,
    run,
)
from .tables import (
    BUNDLED_IDS,
    TableFormatError,
    TableStats,
    bundled_machine,
    parse_table,
    serialize_table,
    table_stats,
    validate_for_encoding,
)
from .encoding import (
    EncodedConfiguration,
    EncodingError,
    EncodingScheme,
    decode_m_configuration,
    encode_initial_configuration,
    encode_instruction,
    encode_letter_field,
    encode_program,
    encode_state_field,
    encode_tape,
    encoded_length,
    field_width,
    simulator_configuration,
)
from .rna import RNA_MAP, RnaCodecError, rna_decode, rna_encode, rna_initial_configuration

__version__ = "1.0.0"
