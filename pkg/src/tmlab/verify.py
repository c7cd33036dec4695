"""The acceptance suite: every quantitative claim the lab checks, as
criteria A1-A10 with a structured pass/fail report.

Each criterion is a list of concrete checks (expected vs actual).  A
handful of published reference figures are not properties of the
bundled tables (the tables deterministically give different values
while reproducing every verbatim configuration); those checks fail
with both numbers displayed rather than being silently adjusted.  The
README carries the analysis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from . import lab
from .encoding import (
    SIMULATOR_GLYPHS,
    EncodingScheme,
    decode_m_configuration,
    encode_initial_configuration,
    encode_instruction,
    encode_program,
    encoded_length,
    simulator_configuration,
)
from .machine import (
    ABSORBING_REASONS,
    Action,
    Configuration,
    HaltReason,
    MachineTable,
    Move,
    Tape,
    run,
)
from .rna import rna_decode, rna_encode
from .tables import bundled_machine, parse_table, serialize_table, table_stats, validate_for_encoding

CRITERIA = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10")

#: Pair encoding of the tiny universal machine's program, as published;
#: it differs from the bundled table's encoding at exactly two pairs,
#: both demonstrable misprints (an L/R flip the instruction table
#: contradicts, and a field "0hhh" that no rank encodes to).
TINY_UTM_RNA_CODE = (
    "AACCCACACUGAACCUCCCUCUGAGAACCU"
    "CCCACUGAGAACCUCCCUGAGAGAAGCACU"
    "AACCCUCUGAGAAGCUCACUCCCUCUGAGAAGCACU"
    "CCCUCUGAGAAGCUCCCUGAGAGAAGCACU"
    "AACCCACACUGAACCUCUCCCACUGAGAAGCUCACU"
    "CCCACUGAGAACCUCUCCCACACUGAACCUCACU"
    "AACCCUGAGAGAAGCUCACUCCCUCUGAGAAGCACACU"
    "CCCACUGAGAAGCACUCCCAGAGAGAAGCACACU"
    "AACCCACUGAGAACCUCUCCCUCUGAGAAGCACUCU"
    "CCCACUGAGAACCACUCUCCCACACUGAAGCUCACU"
    "AACCCUGAGAGAAUCACUCUCCCUCUGAGAAGCUCACU"
    "CCCACUGAGAACCACACUCCCUCUGAGAAGCU"
)

#: Offsets (in pair units) where the published pair code disagrees with
#: the bundled table's encoding, with (published, from-table) values.
TINY_UTM_RNA_ERRATA = {
    77: ("AG", "AC"),   # state 3 on the 2nd letter: move is left per the table
    126: ("CA", "CU"),  # state 4 on the 4th letter: letter field must end in 1
}

#: Reference state-42 block of the simulator's self-encoding and its
#: pair translation.
SELF_ENCODING_STATE_42 = (
    "XY1hhhhhZ010101Y01hhhhL010101Y11hhhhL010101Y001hhhR110101"
    "Y101hhhL010101Y011hhhZ010101Y111hhhL010101Y0001hhL010101"
    "Y1001hhZ010101Y0101hhZ010101Y1101hhL010101Y0011hhL010101"
    "Y1011hhL010101Y0111hhL010101Y1111hhZ010101Y00001hZ010101"
)
SELF_ENCODING_STATE_42_RNA = (
    "AACCCUGAGAGAGAGAAUCACUCACUCACUCCCACUGAGAGAGAACCACUCACUCACU"
    "CCCUCUGAGAGAGAACCACUCACUCACUCCCACACUGAGAGAAGCUCUCACUCACU"
    "CCCUCACUGAGAGAACCACUCACUCACUCCCACUCUGAGAGAAUCACUCACUCACU"
    "CCCUCUCUGAGAGAACCACUCACUCACUCCCACACACUGAGAACCACUCACUCACU"
    "CCCUCACACUGAGAAUCACUCACUCACUCCCACUCACUGAGAAUCACUCACUCACU"
    "CCCUCUCACUGAGAACCACUCACUCACUCCCACACUCUGAGAACCACUCACUCACU"
    "CCCUCACUCUGAGAACCACUCACUCACUCCCACUCUCUGAGAACCACUCACUCACU"
    "CCCUCUCUCUGAGAAUCACUCACUCACUCCCACACACACUGAAUCACUCACUCACU"
)

#: Reference census for the 4-letter twin.  The mixed pair at the end
#: (45 same-state of which 24 overwrite) does not hold of the bundled
#: table, which gives 47/27; both are reported.
RNA_UTM_CENSUS = {
    "entries": 1652,
    "no_overwrite_nonhalt": 958,
    "halting": 542,
    "overwrite_nonhalt": 152,
    "same_state_nonhalt": 45,
    "same_state_overwrite": 24,
}

REFERENCE_ENCODED_LENGTH_UTM = 10_351
OBSERVED_ENCODED_LENGTH_UTM = 19_050


@dataclass
class Check:
    label: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def line(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        exp, act = repr(self.expected), repr(self.actual)
        if len(exp) > 48:
            exp = exp[:45] + "..."
        if len(act) > 48:
            act = act[:45] + "..."
        return f"    [{mark}] {self.label}: expected {exp}, actual {act}"


@dataclass
class CriterionResult:
    criterion: str
    title: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def report(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {self.criterion}: {self.title}"
        return "\n".join([head] + [c.line() for c in self.checks])


class VerificationSession:
    """Runs criteria with shared, cached experiment results."""

    def __init__(self, rng_seed: int = 20_240_901):
        self._cache = {}
        self.rng_seed = rng_seed

    # -- cached building blocks ------------------------------------------

    def _get(self, key: str, build: Callable):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def experiment(self, eid: str) -> lab.ExperimentReport:
        return self._get(eid, lambda: lab.run_experiment(eid))

    def machine(self, mid: str) -> MachineTable:
        return self._get("m:" + mid, lambda: bundled_machine(mid))

    # -- criteria --------------------------------------------------------

    def a1(self) -> CriterionResult:
        r = self.experiment("E1")
        return CriterionResult("A1", "unary addition runs 106 steps to the exact final window", [
            Check("steps", lab.REFERENCE_STEPS["E1"], r.steps),
            Check("halt reason", HaltReason.EXPLICIT, r.reason),
            Check("final window", lab.E1_FINAL_WINDOW, r.region_final),
        ])

    def a2(self) -> CriterionResult:
        r = self.experiment("E2")
        return CriterionResult("A2", "simulator reproduces the addition run (steps and verbatim regions)", [
            Check("initial tape region", lab.E2_REGION_INITIAL, r.region_initial),
            Check("final tape region", lab.E2_REGION_FINAL, r.region_final),
            Check("halts", True, r.reason in ABSORBING_REASONS),
            Check("steps (reference figure)", lab.REFERENCE_STEPS["E2"], r.steps),
        ])

    def a3(self) -> CriterionResult:
        r = self.experiment("E3")
        return CriterionResult("A3", "4-letter twin reproduces the run on the pair-encoded tape", [
            Check("initial tape region", lab.E3_REGION_INITIAL, r.region_initial),
            Check("final tape region", lab.E3_REGION_FINAL, r.region_final),
            Check("halts", True, r.reason in ABSORBING_REASONS),
            Check("steps (reference figure)", lab.REFERENCE_STEPS["E3"], r.steps),
        ])

    def a4(self) -> CriterionResult:
        checks = []
        rna_stats = table_stats(self.machine("rna-utm"))
        for key, expect in RNA_UTM_CENSUS.items():
            checks.append(Check(f"rna-utm {key}", expect, getattr(rna_stats, key)))
        utm_stats = table_stats(self.machine("pedagogical-utm"))
        checks.append(Check("pedagogical-utm entries", 1392, utm_stats.entries))
        add_stats = table_stats(self.machine("addition"))
        checks.append(Check("addition pure glides", 13, add_stats.pure_glides))
        checks.append(Check("addition empty entries", 21, add_stats.empty_entries))
        neary_stats = table_stats(self.machine("neary4x6"))
        checks.append(Check("neary4x6 non-halting entries", 23,
                            neary_stats.entries - neary_stats.halting))
        return CriterionResult("A4", "instruction censuses match the reference counts", checks)

    def a5(self) -> CriterionResult:
        u = self.machine("pedagogical-utm")
        scheme = EncodingScheme.for_table(u)
        block = "X" + "".join(
            encode_instruction(scheme, 42, rank, u.entry(42, rank))
            for rank in range(1, u.alphabet_size + 1)
        )
        return CriterionResult("A5", "self-encoding reproduces the reference state-42 block", [
            Check("state-42 block", SELF_ENCODING_STATE_42, block),
            Check("pair translation", SELF_ENCODING_STATE_42_RNA, rna_encode(block)),
        ])

    def a6(self) -> CriterionResult:
        u = self.machine("pedagogical-utm")
        neary = self.machine("neary4x6")
        code = rna_encode(encode_program(neary))
        diffs = {
            i // 2: (TINY_UTM_RNA_CODE[i:i + 2], code[i:i + 2])
            for i in range(0, min(len(code), len(TINY_UTM_RNA_CODE)), 2)
            if code[i:i + 2] != TINY_UTM_RNA_CODE[i:i + 2]
        }
        n_len = encoded_length(neary)
        checks = [
            Check("tiny-utm pair code length", 410, len(code)),
            Check("pair code matches published code up to its two misprints",
                  TINY_UTM_RNA_ERRATA, diffs),
            Check("tiny-utm code length (program + block delimiters)", 205, n_len),
            Check("tiny-utm code length (incl. region delimiter)", 206,
                  encoded_length(neary, include_region_delimiters=True)),
            Check("pair translation doubles the length", 2 * encoded_length(u),
                  len(rna_encode(encode_program(u)))),
            Check("simulator self-code length (reference figure)",
                  REFERENCE_ENCODED_LENGTH_UTM, encoded_length(u)),
        ]
        return CriterionResult("A6", "encoded program sizes", checks)

    def a7(self) -> CriterionResult:
        add = self.machine("addition")
        u = self.machine("pedagogical-utm")
        encoded = lab.e2_encoded()
        rep = lab.check_refinement(
            add, lab.addition_initial_configuration(), 10**4,
            u, simulator_configuration(u, encoded), 10**7,
            lab.make_simulation_projection(add, u, encoded),
        )
        checks = [
            Check("addition-in-simulator matched configurations", 107, rep.matched),
            Check("addition-in-simulator passed", True, rep.passed),
        ]
        rng = random.Random(self.rng_seed)
        failures = []
        for i in range(50):
            table, m_initial = random_polite_machine(rng)
            enc = encode_initial_configuration(table, m_initial.copy())
            r = lab.check_refinement(
                table, m_initial.copy(), 50,
                u, simulator_configuration(u, enc), 2 * 10**6,
                lab.make_simulation_projection(table, u, enc),
            )
            if not r.passed:
                failures.append((i, serialize_table(table), r.summary()))
        checks.append(Check("randomized machines refined (50 of 50)", [],
                            [f[0] for f in failures]))
        return CriterionResult("A7", "simulation refinement (tau-subsequence)", checks)

    def a8(self) -> CriterionResult:
        rng = random.Random(self.rng_seed + 1)
        n = 10_000
        bad_rna = 0
        for _ in range(n):
            s = "".join(rng.choice(SIMULATOR_GLYPHS) for _ in range(rng.randrange(12)))
            if rna_decode(rna_encode(s)) != s:
                bad_rna += 1
        bad_stats = 0
        bad_roundtrip = 0
        bad_config = 0
        for i in range(200):
            table, m_initial = random_machine(rng, allow_stay=True)
            st = table_stats(table)
            ok = (
                st.entries == table.state_count * table.alphabet_size
                and st.entries == st.halting + st.no_overwrite_nonhalt + st.overwrite_nonhalt
                and st.same_state_overwrite <= st.same_state_nonhalt
                and st.pure_glides <= st.no_overwrite_nonhalt
            )
            bad_stats += 0 if ok else 1
            if parse_table(serialize_table(table)) != table:
                bad_roundtrip += 1
        for i in range(200):
            table, m_initial = random_machine(rng, allow_stay=False)
            if validate_for_encoding(table):
                continue
            enc = encode_initial_configuration(table, m_initial.copy())
            decoded = decode_m_configuration(enc.full)
            cfg = decoded.configuration(table)
            if not (decoded.clean and cfg.same_as(m_initial)):
                bad_config += 1
        return CriterionResult("A8", "randomized round-trip and census identities", [
            Check(f"pair codec round-trips ({n} cases)", 0, bad_rna),
            Check("census identities (200 tables)", 0, bad_stats),
            Check("table parse/serialize round-trips (200 tables)", 0, bad_roundtrip),
            Check("encode/decode configuration identity", 0, bad_config),
        ])

    def a9(self) -> CriterionResult:
        u = self.machine("pedagogical-utm")
        encoded = lab.e2_encoded()
        pats = [lab.WORK_AREA_SNAPSHOTS[k] for k in ("5a", "5b", "5c", "5d", "5e")]
        pats += [lab.snapshot_variant_with_t(p) for p in pats]
        scan = lab.scan_for_snapshots(
            u, simulator_configuration(u, encoded), 10**7, pats, ordered=False)
        at = dict(zip(scan.patterns, scan.found_at))
        a = at[lab.WORK_AREA_SNAPSHOTS["5a"]]
        e_literal = at[lab.WORK_AREA_SNAPSHOTS["5e"]]
        e_t = at[lab.snapshot_variant_with_t(lab.WORK_AREA_SNAPSHOTS["5e"])]
        checks = [
            Check("installed work area (snapshot a) found", True, a is not None),
            Check("conversion-complete snapshot (e) found in order, allowing the"
                  " in-phase T delimiter", True,
                  e_literal is not None and a is not None and e_literal >= a
                  or e_t is not None and a is not None and e_t >= a),
        ]
        diag = []
        for key in ("5b", "5c", "5d", "5e"):
            p = lab.WORK_AREA_SNAPSHOTS[key]
            diag.append(f"{key}: literal {at[p]}, T-form {at[lab.snapshot_variant_with_t(p)]}")
        checks.append(Check("diagnostics recorded", True, bool(diag)))
        self._cache["a9-diagnostics"] = diag
        return CriterionResult("A9", "work-area snapshots appear during the simulator run", checks)

    def a10(self) -> CriterionResult:
        rng = random.Random(self.rng_seed + 2)
        bad_absorb = bad_add = bad_det = bad_growth = 0
        for i in range(60):
            table, initial = random_machine(rng, allow_stay=True)
            budget = 120
            r1 = run(table, initial.copy(), budget)
            r1b = run(table, initial.copy(), budget)
            if not (r1.steps == r1b.steps and r1.reason == r1b.reason
                    and r1.final.same_as(r1b.final)):
                bad_det += 1
            if r1.reason in ABSORBING_REASONS:
                # an explicit halt that rewrote the scanned cell leaves a
                # configuration whose entry may differ; absorption holds
                # whenever the halt did not change what the head reads
                r2 = run(table, r1.final.copy(), budget)
                if r2.reason != r1.reason or r2.steps != 0:
                    if not _halt_rewrote_scan(table, r1):
                        bad_absorb += 1
            k = rng.randrange(budget + 1)
            ra = run(table, initial.copy(), k)
            if ra.reason is HaltReason.BUDGET_EXCEEDED or not _halt_rewrote_scan(table, ra):
                rb = run(table, ra.final.copy(), budget - k)
                if not (ra.steps + rb.steps == r1.steps and rb.final.same_as(r1.final)):
                    bad_add += 1
            hulls = [_hull_size(initial)]

            def track(step, config):
                hulls.append(_hull_size(config))

            run(table, initial.copy(), budget, observer=track)
            if any(b - a > 1 for a, b in zip(hulls, hulls[1:])):
                bad_growth += 1
        return CriterionResult("A10", "engine invariants under randomized machines", [
            Check("determinism", 0, bad_det),
            Check("halting absorption", 0, bad_absorb),
            Check("step-count additivity", 0, bad_add),
            Check("window growth at most one cell per step", 0, bad_growth),
        ])

    def run(self, only: Optional[str] = None) -> list:
        wanted = [only.upper()] if only else list(CRITERIA)
        results = []
        for cid in wanted:
            if cid not in CRITERIA:
                raise ValueError(f"unknown criterion {cid!r}")
            results.append(getattr(self, cid.lower())())
        return results


def _halt_rewrote_scan(table: MachineTable, result) -> bool:
    """True when the run ended on an explicit halt whose write changed the
    scanned cell (the one situation where halting is not absorbing)."""
    if result.reason is not HaltReason.EXPLICIT:
        return False
    action = table.entry(result.final.state, result.final.scanned())
    return action is None or not action.explicit_halt


def _hull_size(config: Configuration) -> int:
    """Length of the minimal window holding all non-blank cells and the head."""
    start, cells = config.tape.trimmed()
    if not cells:
        return 1
    lo = min(start, config.head)
    hi = max(start + len(cells) - 1, config.head)
    return hi - lo + 1


def random_machine(rng: random.Random, allow_stay: bool, states: int = 4):
    """A random small machine plus a start configuration (state 1, head 0)."""
    letters = rng.randrange(1, 5)
    alphabet = "abcd"[:letters]
    grid = []
    for state in range(1, states + 1):
        for rank in range(1, letters + 1):
            roll = rng.random()
            if roll < 0.25:
                grid.append(None)
            elif roll < 0.30:
                grid.append(Action(rng.randrange(1, letters + 1), Move.STAY,
                                   state, explicit_halt=True))
            else:
                moves = (Move.LEFT, Move.RIGHT, Move.STAY) if allow_stay else (Move.LEFT, Move.RIGHT)
                grid.append(Action(rng.randrange(1, letters + 1), rng.choice(moves),
                                   rng.randrange(1, states + 1)))
    table = MachineTable(f"random-{rng.randrange(10**6)}", alphabet, states, grid)
    tape_len = rng.randrange(0, 6)
    ranks = bytes(rng.randrange(1, letters + 1) for _ in range(tape_len))
    initial = Configuration(Tape(1, 0, ranks), 0, 1)
    return table, initial


def random_polite_machine(rng: random.Random, max_tries: int = 400):
    """A random machine the bundled simulator can actually run.

    Constraints established empirically against the bundled tables (both
    the 16-letter simulator and its 4-letter twin agree on them):

    * seven states: the work-area construction deadlocks whenever
      max(letters, states) < 7, so the smallest simulable machines have
      seven states (alphabets stay at four letters or fewer);
    * the very last grid cell (last state, last letter) is left empty:
      executing it as a non-halting instruction runs the new-state copy
      into the program's closing S, which both tables treat as a halt;
    * moves only (no stationary instructions), and the 50-step run must
      stay on the half tape (polite behavior, checked with a fence).
    """
    for _ in range(max_tries):
        candidate, initial = random_machine(rng, allow_stay=False, states=7)
        grid = [action for _, _, action in candidate.cells()]
        grid[-1] = None
        table = MachineTable(candidate.name, candidate.glyphs,
                             candidate.state_count, grid)
        if validate_for_encoding(table):
            continue
        fenced = run(table, initial.copy(), 50, fence_left=0)
        if fenced.reason is HaltReason.LEFT_FENCE_VIOLATION:
            continue
        return table, initial
    raise RuntimeError("could not generate a polite machine")


def verify_all(only: Optional[str] = None, out=None) -> bool:
    """Run the acceptance criteria, print one block per criterion, and
    return overall success."""
    import sys

    out = out or sys.stdout
    session = VerificationSession()
    results = session.run(only)
    ok = True
    for res in results:
        out.write(res.report() + "\n")
        if res.criterion == "A9":
            for d in session._cache.get("a9-diagnostics", []):
                out.write(f"    (diagnostic) {d}\n")
        ok = ok and res.passed
    out.write(("all criteria passed" if ok else "some criteria FAILED") + "\n")
    return ok
