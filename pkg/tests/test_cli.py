import io
import json
import subprocess
import sys

import pytest

from tapemachine.cli import main
from tapemachine.core import encode_unary, run
from tapemachine.trace import TraceError, TraceRecord, replay

from conftest import FIB_STEPS, MINIMAL_SOURCE

FIB = "machines/fibonacci.tm"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line and not line.startswith("{"))


@pytest.fixture
def tmp_machine(tmp_path):
    def write(text, name="m.tm"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_run_unary_seven():
    code, out, _ = call("run", FIB, "--unary", "7")
    assert code == 0
    f = fields(out)
    assert f["value"] == "13"
    assert f["outcome"] == "halted"
    assert f["state"] == "qf"
    assert f["steps"] == str(FIB_STEPS[7])
    assert f["tape"] == " ".join(["1"] * 13)


def test_run_unary_zero_is_stuck():
    code, out, _ = call("run", FIB, "--unary", "0")
    assert code == 2
    assert fields(out)["outcome"] == "stuck"


def test_run_step_limit():
    code, out, _ = call("run", FIB, "--unary", "7", "--max-steps", "1")
    assert code == 3
    assert fields(out)["state"] == "q101"


def test_run_positional_tokens_and_alias():
    code, out, _ = call("run", "@fibonacci", "1", "1", "1", "--engine", "accel")
    assert code == 0
    assert fields(out)["value"] == "2"


def test_run_unknown_token_reported_before_execution():
    code, out, err = call("run", FIB, "1", "q", "1")
    assert code == 1
    assert out == ""
    assert "'q'" in err and "position 2" in err


def test_run_rejects_unary_with_tokens():
    code, _, err = call("run", FIB, "1", "--unary", "3")
    assert code == 1
    assert "not both" in err


def test_run_interior_blanks_printed(tmp_machine):
    path = tmp_machine("blank b\ninitial q\nfinal h\nrule q 1 q 1 R\nrule q b h b N\n")
    code, out, _ = call("run", path, "b", "1", "b", "1", "b")
    assert code == 0
    assert fields(out)["tape"] == "1 b 1"
    code, out, _ = call("run", path, "1", "b", "1")
    assert code == 0
    assert fields(out)["tape"] == "1 b 1"


def test_engine_flag_transparency():
    for argv in (["run", FIB, "--unary", "6", "--metrics"], ["run", FIB, "--unary", "6", "--max-steps", "99"],
                 ["fib", "9", "--expect"], ["run", FIB, "--unary", "0"]):
        naive = call(*argv, "--engine", "naive")
        accel = call(*argv, "--engine", "accel")
        assert naive == accel


def test_metrics_documents():
    code, out, _ = call("run", FIB, "--unary", "7", "--metrics")
    assert code == 0
    docs = [json.loads(line) for line in out.splitlines() if line.startswith("{")]
    assert [d["report"] for d in docs] == ["run_stats", "coverage"]
    stats, cov = docs
    assert stats["steps"] == FIB_STEPS[7]
    assert sum(stats["rule_firings"].values()) == FIB_STEPS[7]
    assert 0 in cov["fired_rules"] and 98 in cov["fired_rules"]
    assert cov["residue"] == {"x": 0, "*": 0}


def test_metrics_to_file(tmp_path):
    dest = tmp_path / "metrics.jsonl"
    code, out, _ = call("run", FIB, "--unary", "3", "--metrics", str(dest))
    assert code == 0
    assert len(dest.read_text().splitlines()) == 2


def test_trace_to_file_replays(fib, tmp_path):
    dest = tmp_path / "trace.txt"
    code, out, _ = call("run", FIB, "--unary", "5", "--trace", str(dest))
    assert code == 0
    lines = dest.read_text().splitlines()
    assert len(lines) == FIB_STEPS[5]
    records = [TraceRecord.parse(line) for line in lines]
    assert [r.step for r in records] == list(range(len(records)))
    assert lines[0] == "step=0 state=q0 head=0 read=1 rule=0 write=x move=R next=q101"
    final = replay(fib, encode_unary(5, fib), lines)
    assert final == run(fib, encode_unary(5, fib)).final_config


def test_trace_to_stderr():
    code, _, err = call("run", FIB, "--unary", "2", "--trace")
    assert code == 0
    assert len([line for line in err.splitlines() if line.startswith("step=")]) == FIB_STEPS[2]


def test_replay_detects_tampering(fib, tmp_path):
    dest = tmp_path / "trace.txt"
    call("run", FIB, "--unary", "3", "--trace", str(dest))
    lines = dest.read_text().splitlines()
    bad = lines[:]
    bad[4] = bad[4].replace("write=", "write=Z")
    with pytest.raises(TraceError):
        replay(fib, encode_unary(3, fib), bad)
    with pytest.raises(TraceError):
        replay(fib, encode_unary(3, fib), lines[:3] + lines[4:])
    with pytest.raises(TraceError):
        TraceRecord.parse("step=0 state=q0")


@pytest.mark.parametrize("n, value", [(7, 13), (10, 55), (12, 144)])
def test_fib(n, value):
    code, out, _ = call("fib", str(n), "--expect", "--engine", "accel")
    assert code == 0
    f = fields(out)
    assert f["result"] == str(value)
    assert f["n"] == str(n)
    assert f["steps"] == str(FIB_STEPS[n])


def test_fib_mismatch_exit_code():
    code, _, err = call("fib", "7", "--expect", "14")
    assert code == 4
    assert "13" in err and "14" in err


def test_fib_with_wrong_machine_fails_oracle(tmp_machine):
    # F(n) = n for this "machine": copies its input untouched and halts
    path = tmp_machine("blank b\ninitial q\nfinal h\nrule q 1 q 1 R\nrule q b h b N\n")
    assert call("fib", "5", "--machine", path, "--expect")[0] == 0
    assert call("fib", "6", "--machine", path, "--expect")[0] == 4


def test_fib_reports_non_halting():
    code, _, err = call("fib", "7", "--max-steps", "10")
    assert code == 3
    code, _, _ = call("fib", "0")
    assert code == 2


def test_validate_bundled():
    code, out, err = call("validate", FIB)
    assert code == 0
    assert out.splitlines()[0] == "100 rules, 50 states, 4 symbols"
    assert "unreachable_states: " in out
    assert "warning" not in err


def test_validate_json():
    code, out, _ = call("validate", "@fibonacci", "--json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["rules"], doc["states"], doc["symbols"]) == (100, 50, 4)


def test_validate_duplicate_rule(tmp_machine):
    path = tmp_machine("blank b\ninitial q0\nfinal qf\nrule q0 1 qf 1 N\nrule q0 1 q0 1 R\n")
    code, _, err = call("validate", path)
    assert code == 1
    assert f"{path}:5: DuplicateRule" in err


def test_validate_missing_initial(tmp_machine):
    path = tmp_machine("blank b\nfinal qf\n")
    code, _, err = call("validate", path)
    assert code == 1
    assert "MissingDirective" in err


def test_validate_warns_on_unreachable(tmp_machine):
    path = tmp_machine(MINIMAL_SOURCE + "rule qz b qf b N\n")
    code, out, err = call("validate", path)
    assert code == 0
    assert "warning: state qz is unreachable" in err


def test_bench_range(tmp_path):
    dest = tmp_path / "bench.json"
    code, out, _ = call("bench", FIB, "--unary-range", "1..10", "--check-fib", "--json", str(dest))
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 21
    doc = json.loads(dest.read_text())
    assert len(doc["rows"]) == 20
    values = {(r["n"], r["engine"]): r["value"] for r in doc["rows"]}
    oracle = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    for n in range(1, 11):
        assert values[n, "naive"] == values[n, "accel"] == oracle[n - 1]


def test_bench_single_value():
    code, out, _ = call("bench", FIB, "--unary-range", "7..7")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert [r[5] for r in rows] == ["13", "13"]


def test_bench_empty_range():
    assert call("bench", FIB, "--unary-range", "5..4")[0] == 1
    assert call("bench", FIB, "--unary-range", "five")[0] == 1


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["run"], ["run", "nope.tm", "--unary", "1"], ["fib", "x"],
    ["run", FIB, "--max-steps", "0"], ["run", "@nothing"], ["fib", "-1"],
])
def test_usage_errors_exit_1(argv):
    assert call(*argv)[0] == 1


def test_parse_error_exit_1(tmp_machine):
    path = tmp_machine("blank b\ninitial q0\nfinal qf\nrule q0 b qf b Q\n")
    code, _, err = call("run", path)
    assert code == 1
    assert f"{path}:4: UnknownMove" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tapemachine", "fib", "7"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "result: 13" in proc.stdout
