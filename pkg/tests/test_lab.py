import io

import pytest

from tmlab import Configuration, HaltReason, bundled_machine, run
from tmlab import lab
from tmlab.encoding import encode_initial_configuration, simulator_configuration


@pytest.fixture(scope="module")
def addition():
    return bundled_machine("addition")


@pytest.fixture(scope="module")
def utm():
    return bundled_machine("pedagogical-utm")


def test_e1_report(addition):
    report = lab.run_experiment("E1")
    assert report.steps == 106
    assert report.steps_match and report.regions_match
    assert report.reason is HaltReason.EXPLICIT


def test_reference_strings_are_consistent():
    # the pair-encoded regions are exactly the encodings of the plain ones
    from tmlab import rna_encode

    assert lab.E3_REGION_INITIAL == rna_encode(lab.E2_REGION_INITIAL)
    assert lab.E3_REGION_FINAL == rna_encode(lab.E2_REGION_FINAL)
    assert lab.E2_REGION_FINAL.rstrip("_").endswith("U01hh")


def test_refinement_reflexive(addition):
    initial = lab.addition_initial_configuration()
    report = lab.check_refinement(
        addition, initial.copy(), 10**4,
        addition, initial.copy(), 10**4,
        lab.identity_projection,
    )
    assert report.passed and report.matched == report.total_high == 107


def test_refinement_failure_reported(addition, utm):
    # projecting everything to None matches only nothing
    initial = lab.addition_initial_configuration()
    report = lab.check_refinement(
        addition, initial.copy(), 5,
        addition, initial.copy(), 5,
        lambda cfg: None,
    )
    assert not report.passed
    assert report.matched == 0 and report.first_mismatch is not None


def test_simulation_projection_decodes_start(addition, utm):
    enc = encode_initial_configuration(addition, lab.addition_initial_configuration())
    project = lab.make_simulation_projection(addition, utm, enc)
    seen = []

    def observe(step, config):
        m = project(config)
        if m is not None and len(seen) < 3:
            seen.append((m.state, m.head))

    run(utm, simulator_configuration(utm, enc), 20000, observer=observe)
    assert seen and seen[0] == (1, 0)


def test_scan_ordered_semantics(addition):
    initial = lab.addition_initial_configuration()
    scan = lab.scan_for_snapshots(addition, initial.copy(), 10**4,
                                  ["", "X|", "*|||*||*|||||*"])
    assert scan.found_at[0] == 0            # empty pattern at step 0
    assert scan.found_at[1] is not None     # X marker appears early
    assert scan.found_at[2] is not None     # final sum appears later, in order
    assert scan.found_at[1] <= scan.found_at[2]
    # ordered scan: a late pattern first blocks an early one
    scan2 = lab.scan_for_snapshots(addition, initial.copy(), 10**4,
                                   ["*|||*||*|||||*", "X|"])
    assert scan2.found_at[0] is not None
    assert scan2.found_at[1] is None or scan2.found_at[1] >= scan2.found_at[0]


def test_trace_export_counts(addition):
    initial = lab.addition_initial_configuration()
    sink = io.StringIO()
    lines = lab.export_trace(addition, initial.copy(), 10**4, sink, every=1)
    assert lines == 107
    body = sink.getvalue().splitlines()
    assert body[0].startswith("step=0 state=1 head=0 win=0 tape=*|||*||*")
    assert body[-1].startswith("step=106 state=9 head=0")
    # stride larger than the run: endpoints only
    sink = io.StringIO()
    assert lab.export_trace(addition, initial.copy(), 10**4, sink, every=500) == 2
    # deterministic across invocations
    sink2 = io.StringIO()
    lab.export_trace(addition, initial.copy(), 10**4, sink2, every=500)
    assert sink.getvalue() == sink2.getvalue()


def test_trace_stride_arithmetic(addition):
    initial = lab.addition_initial_configuration()
    sink = io.StringIO()
    lines = lab.export_trace(addition, initial.copy(), 10**4, sink, every=10)
    # steps 0,10,...,100 plus the final 106
    assert lines == 12


def test_observer_does_not_change_results(addition):
    initial = lab.addition_initial_configuration()
    quiet = run(addition, initial.copy(), 10**4)
    sink = io.StringIO()
    lab.export_trace(addition, initial.copy(), 10**4, sink, every=7)
    noisy = run(addition, initial.copy(), 10**4)
    assert quiet.steps == noisy.steps and quiet.final.same_as(noisy.final)


def test_trace_e2_stride(utm):
    # the full simulator run sampled every 10,000 steps: the initial record,
    # 114 interior samples, and the final configuration
    enc = encode_initial_configuration(bundled_machine("addition"),
                                       lab.addition_initial_configuration())
    sink = io.StringIO()
    lines = lab.export_trace(utm, simulator_configuration(utm, enc), 10**7,
                             sink, every=10_000)
    assert lines == 116


def test_e1_trace_golden(addition):
    from pathlib import Path

    golden = Path(__file__).parent / "data" / "e1_trace.txt"
    sink = io.StringIO()
    lab.export_trace(addition, lab.addition_initial_configuration(), 10**4, sink)
    assert sink.getvalue() == golden.read_text()


def test_pair_refinement_prefix(utm):
    # the 4-letter twin refines the simulator over the pair encoding:
    # its block-entry snapshots contain the simulator's first 2000
    # configurations in order
    rna = bundled_machine("rna-utm")
    enc = encode_initial_configuration(bundled_machine("addition"),
                                       lab.addition_initial_configuration())
    from tmlab.rna import rna_initial_configuration

    report = lab.check_refinement(
        utm, simulator_configuration(utm, enc), 2000,
        rna, rna_initial_configuration(rna, enc), 10**7,
        lab.make_pair_projection(utm, rna),
    )
    assert report.passed and report.matched == 2001
