import io
from contextlib import redirect_stdout

import pytest

from tmlab.cli import main


def invoke(*argv):
    out = io.StringIO()
    with redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()


def test_run_addition(tmp_path):
    code, out = invoke("run", "addition", "--input", "*|||*||*", "--fence-left")
    assert code == 0
    assert "steps:  106" in out
    assert "window: *|||*||*|||||*" in out


def test_run_with_trace(tmp_path):
    trace = tmp_path / "t.txt"
    code, out = invoke("run", "addition", "--input", "*|||*||*",
                       "--trace", str(trace), "--trace-every", "50")
    assert code == 0
    lines = trace.read_text().splitlines()
    assert len(lines) == 4  # steps 0, 50, 100, 106
    assert lines[0].startswith("step=0 ")
    assert lines[-1].startswith("step=106 ")


def test_run_from_file(tmp_path):
    source = tmp_path / "m.tm"
    source.write_text("name: hop\nalphabet: _ x\nstates: 1\nstate 1:\n  _ -> x R\n  x -> !\n")
    code, out = invoke("run", str(source), "--input", "", "--max-steps", "5")
    assert code == 0
    assert "steps:  5" in out


def test_encode_and_decode_roundtrip(tmp_path):
    code, out = invoke("encode", "addition", "--input", "*|||*||*")
    assert code == 0
    tape = out.strip()
    assert tape.startswith("SX") and tape.endswith("_")
    tape_file = tmp_path / "tape.txt"
    tape_file.write_text(tape)
    code, out = invoke("decode-config", "@" + str(tape_file))
    assert code == 0
    assert "state:      1" in out
    assert "clean:      true" in out


def test_rna_subcommands():
    code, out = invoke("rna", "encode", "SW01hh")
    assert code == 0 and out.strip() == "UUUGCACUGAGA"
    code, out = invoke("rna", "decode", "UUUGCACUGAGA")
    assert code == 0 and out.strip() == "SW01hh"


def test_stats_formats():
    code, aligned = invoke("stats", "neary4x6")
    assert code == 0 and "entries" in aligned
    code, records = invoke("stats", "neary4x6", "--format", "records")
    assert code == 0
    assert "entries=24" in records and "halting=1" in records


def test_experiment_e1():
    code, out = invoke("experiment", "E1")
    assert code == 0
    assert "experiment E1" in out and "106" in out


def test_verify_single_criterion():
    code, out = invoke("verify", "--only", "A1")
    assert code == 0
    assert "PASS A1" in out


def test_unknown_machine():
    with pytest.raises(SystemExit):
        invoke("run", "missing-machine")


def test_cli_error_handling(capsys):
    assert main(["run", "addition", "--input", "zzz"]) == 2
    assert main(["rna", "decode", "UUX"]) == 2
