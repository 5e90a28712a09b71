from __future__ import annotations

import json

import pytest

from boundcraft.errors import ParseError, ValidationError
from boundcraft.rollouts import BINARY, CONTINUOUS, enforce_plan, ingest, load_testing_plan, parse_log


class TestCsv:
    def test_binary_inferred(self):
        log = parse_log("policy_id,outcome\na,1\nb,0\na,0\na,1\n", "csv")
        assert log.metric_kind == BINARY
        assert log.policies() == ["a", "b"]
        assert log.counts("a") == (2, 3)

    def test_continuous_inferred(self):
        log = parse_log("policy_id,outcome\na,0.25\na,1\n", "csv")
        assert log.metric_kind == CONTINUOUS
        assert log.outcomes() == [0.25, 1.0]
        with pytest.raises(ValidationError):
            log.counts()

    def test_bad_header(self):
        with pytest.raises(ParseError) as exc:
            parse_log("policy,outcome\na,1\n", "csv")
        assert exc.value.line == 1

    @pytest.mark.parametrize("row,line", [("a,x", 3), ("a,1,2", 3), (",1", 3), ("a,nan", 3)])
    def test_bad_rows_report_line(self, row, line):
        with pytest.raises(ParseError) as exc:
            parse_log(f"policy_id,outcome\na,1\n{row}\n", "csv")
        assert exc.value.line == line
        assert str(exc.value).startswith(f"line {line}:")

    def test_blank_lines_skipped(self):
        assert len(parse_log("policy_id,outcome\n\na,1\n\n", "csv").records) == 1

    def test_empty(self):
        with pytest.raises(ValidationError):
            parse_log("policy_id,outcome\n", "csv")

    def test_forced_binary_rejects_rewards(self):
        with pytest.raises(ValidationError):
            parse_log("policy_id,outcome\na,0.5\n", "csv", BINARY)

    def test_forced_continuous(self):
        assert parse_log("policy_id,outcome\na,1\n", "csv", CONTINUOUS).metric_kind == CONTINUOUS


class TestJsonl:
    def test_parse(self):
        text = '{"policy_id": "a", "outcome": 1}\n\n{"policy_id": "a", "outcome": 0}\n'
        assert parse_log(text, "jsonl").counts() == (1, 2)

    @pytest.mark.parametrize("line", ['{"policy_id": "a"}', '{"policy_id": "a", "outcome": "1"}',
                                      '{"policy_id": "a", "outcome": true}', "not json",
                                      '{"policy_id": 3, "outcome": 1}', "[1, 2]"])
    def test_bad_records(self, line):
        with pytest.raises(ParseError) as exc:
            parse_log('{"policy_id": "a", "outcome": 1}\n' + line + "\n", "jsonl")
        assert exc.value.line == 2


class TestSelection:
    def test_multiple_policies_need_choice(self):
        log = parse_log("policy_id,outcome\na,1\nb,0\n", "csv")
        with pytest.raises(ValidationError):
            log.resolve(None)
        with pytest.raises(ValidationError):
            log.resolve("c")
        assert log.resolve("b") == "b"


class TestFiles:
    def test_extension_picks_format(self, tmp_log):
        path = tmp_log('{"policy_id": "a", "outcome": 1}\n', "log.jsonl")
        assert ingest(path).counts() == (1, 1)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            ingest(tmp_path / "nope.csv")

    def test_unknown_format(self, tmp_log):
        with pytest.raises(ValidationError):
            ingest(tmp_log("x"), fmt="xml")


class TestTestingPlan:
    def test_load_and_enforce(self, tmp_path):
        path = tmp_path / "plan.json"
        path.write_text(json.dumps({"n": 50, "alpha": 0.05}))
        plan = load_testing_plan(path)
        enforce_plan(plan, 50, 0.05)
        with pytest.raises(ValidationError, match="declared 50"):
            enforce_plan(plan, 49, 0.05)
        with pytest.raises(ValidationError):
            enforce_plan(plan, 50, 0.1)

    @pytest.mark.parametrize("text", ["{", '{"n": 5}', "[]"])
    def test_invalid_plan(self, tmp_path, text):
        path = tmp_path / "plan.json"
        path.write_text(text)
        with pytest.raises(ValidationError):
            load_testing_plan(path)
