"""Acceptance criteria A1-A10, one test per criterion.

Each test prints its criterion's pass/fail block and asserts that every
check in it holds.  Four checks are known not to hold of the bundled
tables: the two reference step counts, the same-state census pair, and
the simulator's self-code length.  Those reference figures cannot be
reproduced from the published tables (see the README's accounting and
the final meta-test, which pins the exact set of failing checks so any
drift is caught).
"""

import pytest

from tmlab.verify import CRITERIA, VerificationSession


@pytest.fixture(scope="module")
def session():
    return VerificationSession()


@pytest.fixture(scope="module")
def results(session):
    out = {}
    for cid in CRITERIA:
        out[cid] = getattr(session, cid.lower())()
    return out


def _assert_criterion(results, cid):
    result = results[cid]
    print(result.report())
    assert result.passed, "\n" + result.report()


def test_a1_addition_run(results):
    _assert_criterion(results, "A1")


def test_a2_simulator_run(results):
    _assert_criterion(results, "A2")


def test_a3_pair_twin_run(results):
    _assert_criterion(results, "A3")


def test_a4_instruction_censuses(results):
    _assert_criterion(results, "A4")


def test_a5_self_encoding_block(results):
    _assert_criterion(results, "A5")


def test_a6_encoded_sizes(results):
    _assert_criterion(results, "A6")


def test_a7_refinement(results):
    _assert_criterion(results, "A7")


def test_a8_randomized_roundtrips(results):
    _assert_criterion(results, "A8")


def test_a9_work_area_snapshots(results):
    _assert_criterion(results, "A9")


def test_a10_engine_invariants(results):
    _assert_criterion(results, "A10")


#: Checks that provably cannot pass against the bundled tables: the
#: published figures belong to a revision of the machines that the
#: published tables do not capture.  Everything not listed here must
#: pass; anything listed here passing (or new failures appearing) is a
#: regression in either direction.
KNOWN_UNREPRODUCIBLE = {
    ("A2", "steps (reference figure)"),
    ("A3", "steps (reference figure)"),
    ("A4", "rna-utm same_state_nonhalt"),
    ("A4", "rna-utm same_state_overwrite"),
    ("A6", "simulator self-code length (reference figure)"),
}


def test_failure_surface_is_exactly_the_documented_one(results):
    failing = {
        (cid, check.label)
        for cid, result in results.items()
        for check in result.checks
        if not check.passed
    }
    assert failing == KNOWN_UNREPRODUCIBLE, (
        "the set of failing acceptance checks changed; "
        f"unexpected: {sorted(failing - KNOWN_UNREPRODUCIBLE)}, "
        f"now passing: {sorted(KNOWN_UNREPRODUCIBLE - failing)}"
    )
