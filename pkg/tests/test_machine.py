import pytest
from hypothesis import given, settings, strategies as st

from tmlab import (
    Configuration,
    EntryClass,
    HaltReason,
    MachineTable,
    Move,
    Tape,
    apply_step,
    bundled_machine,
    classify_entry,
    format_window,
    lookup,
    run,
)
from tmlab.machine import ABSORBING_REASONS, Action


@pytest.fixture(scope="module")
def addition():
    return bundled_machine("addition")


@pytest.fixture(scope="module")
def neary():
    return bundled_machine("neary4x6")


def test_lookup_examples(addition, neary):
    a = lookup(addition, 1, "*")
    assert (a.write, a.move, a.next_state) == (addition.rank_of("X"), Move.RIGHT, 2)
    assert lookup(addition, 1, "_") is None
    n = lookup(neary, 1, "A")
    assert (n.write, n.move, n.next_state) == (neary.rank_of("U"), Move.LEFT, 1)


def test_lookup_range_errors(addition):
    with pytest.raises(ValueError):
        lookup(addition, 10, "*")
    with pytest.raises(ValueError):
        lookup(addition, 1, "?")


def test_classify_examples(addition, neary):
    assert classify_entry(addition, 5, "*") is EntryClass.PURE_GLIDE
    assert classify_entry(addition, 1, "*") is EntryClass.OVERWRITE_STEP
    assert classify_entry(addition, 9, "X") is EntryClass.HALT  # explicit, writes *
    assert classify_entry(neary, 6, "A") is EntryClass.HALT     # empty entry
    assert classify_entry(neary, 2, "G") is EntryClass.NO_OVERWRITE_STEP  # same write, new state


def test_classify_stationary_identity():
    table = MachineTable("tiny", "_", 1, [Action(1, Move.STAY, 1)])
    assert classify_entry(table, 1, "_") is EntryClass.HALT
    outcome = apply_step(table, Configuration(Tape(1, 0, b"")))
    assert not outcome.applied and outcome.reason is HaltReason.STATIONARY_IDENTITY


def test_classify_partition(addition, neary):
    for table in (addition, neary):
        for state, rank, _ in table.cells():
            cls = classify_entry(table, state, rank)
            assert cls in (EntryClass.HALT, EntryClass.PURE_GLIDE,
                           EntryClass.NO_OVERWRITE_STEP, EntryClass.OVERWRITE_STEP)


def test_apply_step_moves_and_writes(addition):
    config = Configuration.from_glyphs(addition, "*|||*||*", head=0, state=1)
    outcome = apply_step(addition, config)
    assert outcome.applied
    assert outcome.next.head == 1 and outcome.next.state == 2
    assert outcome.next.tape.read(0) == addition.rank_of("X")
    # the input configuration is untouched
    assert config.tape.read(0) == addition.rank_of("*")


def test_apply_step_empty_entry(addition):
    config = Configuration.from_glyphs(addition, "_", head=0, state=1)
    outcome = apply_step(addition, config)
    assert not outcome.applied and outcome.reason is HaltReason.EMPTY_ENTRY
    assert outcome.next.same_as(config)


def test_apply_step_explicit_halt_writes(addition):
    config = Configuration.from_glyphs(addition, "X", head=0, state=9)
    outcome = apply_step(addition, config)
    assert not outcome.applied and outcome.reason is HaltReason.EXPLICIT
    assert outcome.next.tape.read(0) == addition.rank_of("*")


def test_run_addition_known_count(addition):
    initial = Configuration.from_glyphs(addition, "*|||*||*")
    result = run(addition, initial, 10**4)
    assert result.steps == 106
    assert result.reason is HaltReason.EXPLICIT
    assert format_window(addition, result.final) == "*|||*||*|||||*"
    assert result.final.head == 0 and result.final.state == 9


def test_run_budget_zero(addition):
    initial = Configuration.from_glyphs(addition, "*|||*||*")
    result = run(addition, initial, 0)
    assert result.steps == 0
    assert result.reason is HaltReason.BUDGET_EXCEEDED
    assert result.final.same_as(initial)


def test_run_fence(addition):
    # courteous: never moves left of its start cell
    initial = Configuration.from_glyphs(addition, "*|||*||*")
    result = run(addition, initial, 10**4, fence_left=0)
    assert result.reason is HaltReason.EXPLICIT and result.steps == 106
    # a machine that walks left trips the fence without applying the step
    walker = MachineTable("walker", "_x", 1, [Action(1, Move.LEFT, 1), None])
    result = run(walker, Configuration(Tape(1, 0, b"")), 10, fence_left=0)
    assert result.reason is HaltReason.LEFT_FENCE_VIOLATION
    assert result.steps == 0 and result.final.head == 0


def test_observer_sees_every_step(addition):
    seen = []
    initial = Configuration.from_glyphs(addition, "*|||*||*")
    run(addition, initial, 10**4, observer=lambda step, cfg: seen.append(step))
    assert seen == list(range(1, 107))


def test_format_window_cases(addition):
    assert format_window(addition, Configuration(Tape(1, 0, b""))) == ""
    config = Configuration.from_glyphs(addition, "_*|_", head=3)
    assert format_window(addition, config) == "*|_"


# --- randomized invariants -------------------------------------------------


@st.composite
def machines(draw):
    letters = draw(st.integers(1, 4))
    states = draw(st.integers(1, 4))
    grid = []
    for state in range(1, states + 1):
        for _ in range(letters):
            kind = draw(st.integers(0, 6))
            if kind == 0:
                grid.append(None)
            elif kind == 1:
                grid.append(Action(draw(st.integers(1, letters)), Move.STAY,
                                   state, explicit_halt=True))
            else:
                grid.append(Action(
                    draw(st.integers(1, letters)),
                    draw(st.sampled_from((Move.LEFT, Move.RIGHT, Move.STAY))),
                    draw(st.integers(1, states)),
                ))
    table = MachineTable("hyp", "abcd"[:letters], states, grid)
    tape = bytes(draw(st.lists(st.integers(1, letters), max_size=5)))
    return table, Configuration(Tape(1, 0, tape))


@settings(max_examples=120, deadline=None)
@given(machines(), st.integers(0, 80))
def test_determinism_and_additivity(mi, split):
    table, initial = mi
    budget = 80
    full = run(table, initial.copy(), budget)
    again = run(table, initial.copy(), budget)
    assert full.steps == again.steps and full.reason is again.reason
    assert full.final.same_as(again.final)

    head = run(table, initial.copy(), min(split, budget))
    if head.reason is HaltReason.BUDGET_EXCEEDED:
        tail = run(table, head.final.copy(), budget - head.steps)
        assert head.steps + tail.steps == full.steps
        assert tail.final.same_as(full.final)


@settings(max_examples=120, deadline=None)
@given(machines())
def test_absorbing_halts(mi):
    table, initial = mi
    result = run(table, initial.copy(), 80)
    if result.reason in ABSORBING_REASONS:
        entry = table.entry(result.final.state, result.final.scanned())
        if entry is not None and entry.explicit_halt or result.reason is not HaltReason.EXPLICIT:
            rerun = run(table, result.final.copy(), 80)
            assert rerun.steps == 0 and rerun.reason is result.reason


@settings(max_examples=100, deadline=None)
@given(machines(), st.integers(1, 8))
def test_blank_padding_is_neutral(mi, pad):
    table, initial = mi
    padded = Configuration(
        Tape(1, initial.tape.window_start - pad,
             bytes([1]) * pad + bytes(initial.tape.cells) + bytes([1]) * pad),
        initial.head,
        initial.state,
    )
    a = run(table, initial.copy(), 60)
    b = run(table, padded, 60)
    assert a.steps == b.steps and a.reason is b.reason
    assert a.final.same_as(b.final)
