"""System description parsing, validation and round-trip tests."""

import json
import random

import pytest

from schedregion.model import (
    ParseError,
    Policy,
    SystemSpec,
    ValidationError,
    hyperperiod,
    parse_system,
    serialize_system,
)

MINIMAL = """
{
  "resources": [{"id": "r", "policy": "preemptive"}],
  "tasks": [{"id": "t", "resource": "r", "period": 3, "priority": 1,
             "max_deadline": 3, "C": 1, "D": "free", "J": 0}],
  "pipelines": []
}
"""


def table1_doc():
    with open("tests/fixtures/tc1.json", encoding="utf-8") as fh:
        return fh.read()


class TestParse:
    def test_minimal(self):
        s = parse_system(MINIMAL)
        assert len(s.tasks) == 1
        assert s.tasks[0].wcet == 1
        assert s.tasks[0].deadline is None
        assert s.resources[0].policy is Policy.PREEMPTIVE

    def test_table1(self):
        s = parse_system(table1_doc())
        assert len(s.tasks) == 8
        assert len(s.pipelines) == 1
        assert s.pipelines[0].period == 150
        assert s.pipelines[0].e2e_deadline == 150
        can = [t for t in s.tasks if t.resource == "can2"]
        assert {t.id for t in can} == {"tau21", "tau41"}

    def test_unconstrained_e2e_accepted(self):
        doc = json.loads(table1_doc())
        # end-to-end deadline far above the period is legal
        doc["pipelines"][0]["e2e_deadline"] = 200000
        for t in doc["tasks"]:
            t["max_deadline"] = 200000
        parse_system(json.dumps(doc))

    def test_syntax_error_position(self):
        with pytest.raises(ParseError, match=r"line \d+"):
            parse_system("{\n  \"resources\": [,]\n}")

    def test_defaults(self):
        doc = json.loads(table1_doc())
        for t in doc["tasks"]:
            t.pop("D", None)
            t.pop("J", None)
        s = parse_system(json.dumps(doc))
        # pipeline members default to free jitter, standalone to fixed zero
        assert s.task_by_id("tau11").jitter is None
        assert s.task_by_id("tau1").jitter == 0
        assert all(t.deadline is None for t in s.tasks)

    def test_bad_param_value(self):
        with pytest.raises(ParseError):
            parse_system(MINIMAL.replace('"C": 1', '"C": "huge"'))
        with pytest.raises(ParseError):
            parse_system(MINIMAL.replace('"C": 1', '"C": 1.5'))

    def test_missing_field(self):
        with pytest.raises(ParseError, match="period"):
            parse_system(MINIMAL.replace('"period": 3, ', ""))


class TestValidate:
    def test_priority_collision(self):
        doc = json.loads(table1_doc())
        doc["tasks"][1]["priority"] = 9  # tau11 vs tau1 on cpu1
        with pytest.raises(ValidationError, match="priority collision"):
            parse_system(json.dumps(doc))

    def test_duplicate_task_id(self):
        doc = json.loads(table1_doc())
        doc["tasks"].append(dict(doc["tasks"][0]))
        with pytest.raises(ValidationError, match="duplicate"):
            parse_system(json.dumps(doc))

    def test_dangling_resource(self):
        doc = json.loads(table1_doc())
        doc["tasks"][0]["resource"] = "nowhere"
        with pytest.raises(ValidationError, match="unknown resource"):
            parse_system(json.dumps(doc))

    def test_pipeline_period_mismatch(self):
        doc = json.loads(table1_doc())
        doc["tasks"][1]["period"] = 151
        with pytest.raises(ValidationError, match="period"):
            parse_system(json.dumps(doc))

    def test_pipeline_unknown_task(self):
        doc = json.loads(table1_doc())
        doc["pipelines"][0]["tasks"].append("ghost")
        with pytest.raises(ValidationError, match="unknown task"):
            parse_system(json.dumps(doc))

    def test_deadline_above_bound(self):
        with pytest.raises(ValidationError, match="max_deadline"):
            parse_system(MINIMAL.replace('"D": "free"', '"D": 4'))

    def test_mutation_rejection(self):
        """Randomly corrupt the document; every listed mutation must be rejected."""
        rng = random.Random(42)
        base = json.loads(table1_doc())
        mutations = [
            lambda d: d["tasks"][rng.randrange(len(d["tasks"]))].update(period=0),
            lambda d: d["tasks"][rng.randrange(len(d["tasks"]))].update(max_deadline=0),
            lambda d: d["tasks"][rng.randrange(len(d["tasks"]))].update(C=-1),
            lambda d: d["tasks"][1].update(priority=d["tasks"][5]["priority"]),
            lambda d: d["tasks"][0].update(resource="missing"),
            lambda d: d["pipelines"][0]["tasks"].append(d["pipelines"][0]["tasks"][0]),
            lambda d: d["resources"].append(dict(d["resources"][0])),
            lambda d: d["pipelines"][0].update(period=777),
            lambda d: d["pipelines"][0].update(e2e_deadline=0),
        ]
        for _ in range(100):
            doc = json.loads(json.dumps(base))
            rng.choice(mutations)(doc)
            with pytest.raises((ValidationError, ParseError)):
                parse_system(json.dumps(doc))


class TestRoundTrip:
    def test_exact(self):
        for path in ["tc1", "tc2a", "tc2b"]:
            with open(f"tests/fixtures/{path}.json", encoding="utf-8") as fh:
                s = parse_system(fh.read())
            assert parse_system(serialize_system(s)) == s

    def test_minimal(self):
        s = parse_system(MINIMAL)
        assert parse_system(serialize_system(s)) == s


class TestHyperperiod:
    def test_lcm_examples(self):
        s = parse_system(
            json.dumps(
                {
                    "resources": [{"id": "r", "policy": "preemptive"}],
                    "tasks": [
                        {"id": "a", "resource": "r", "period": 3, "priority": 3, "max_deadline": 3},
                        {"id": "b", "resource": "r", "period": 8, "priority": 2, "max_deadline": 8},
                        {"id": "c", "resource": "r", "period": 20, "priority": 1, "max_deadline": 20},
                    ],
                    "pipelines": [],
                }
            )
        )
        tasks = s.tasks_on("r")
        assert hyperperiod(tasks, 3) == 120
        assert hyperperiod(tasks, 1) == 3

    def test_table3_value(self):
        # periods 20, 30, 200 appear in test case 1; system hyperperiod 600
        s = parse_system(table1_doc())
        tasks = s.tasks_on("cpu3")
        assert [t.period for t in tasks] == [30, 150, 200]
        assert hyperperiod(tasks, 3) == 600

    def test_single(self):
        s = parse_system(MINIMAL.replace('"period": 3', '"period": 7'))
        assert hyperperiod(s.tasks_on("r"), 1) == 7
