import io
import json

import pytest

from tractlab.cli import main
from tractlab.config import config_from_dict, load_config
from tractlab.errors import ValidationError


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


BASIC = {
    "problem": {
        "kind": "coordinates",
        "coordinates": [
            {"kind": "explicit", "values": [1.0, 0.5]},
            {"kind": "explicit", "values": [1.0, 0.5]},
        ],
    },
    "epsilons": [0.6, 0.3],
    "dims": [1, 2],
}

FAMILY = {
    "problem": {
        "kind": "korobov_family",
        "weights": {"kind": "power", "rho": 3.0},
        "smoothness": {"kind": "constant", "r0": 1.0},
    },
    "epsilons": [0.5],
    "dims": [1, 2, 3],
}


class TestConfig:
    def test_unknown_top_level_field_rejected(self, tmp_path):
        bad = dict(BASIC)
        bad["mystery"] = 1
        with pytest.raises(ValidationError):
            load_config(write_config(tmp_path, bad))

    def test_unknown_problem_field_rejected(self):
        bad = json.loads(json.dumps(BASIC))
        bad["problem"]["extra"] = True
        with pytest.raises(ValidationError):
            config_from_dict(bad)

    def test_epsilon_range_enforced(self):
        bad = json.loads(json.dumps(BASIC))
        bad["epsilons"] = [1.5]
        with pytest.raises(ValidationError):
            config_from_dict(bad)

    def test_dims_must_be_positive_integers(self):
        bad = json.loads(json.dumps(BASIC))
        bad["dims"] = [0]
        with pytest.raises(ValidationError):
            config_from_dict(bad)

    def test_invalid_json_reports_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"problem": }')
        with pytest.raises(ValidationError) as exc_info:
            load_config(str(path))
        assert "line" in str(exc_info.value)

    def test_budget_override(self):
        cfg = config_from_dict({**BASIC, "budgets": {"n_max": 1234}})
        assert cfg.budget.n_max == 1234

    def test_coordinates_bound_the_dimension(self):
        cfg = config_from_dict(BASIC)
        with pytest.raises(ValidationError):
            cfg.build_problem(3)


class TestComplexityCommand:
    def test_csv_schema_and_values(self, tmp_path, capsys):
        path = write_config(tmp_path, BASIC)
        code = main(["complexity", "--config", path, "--jobs", "1"])
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "#schema=1"
        assert lines[1].startswith("d,epsilon,n,")
        # d-major, epsilon-minor ordering
        keys = [tuple(line.split(",")[:2]) for line in lines[2:]]
        assert keys == [
            ("1", "0.6"), ("1", "0.3"), ("2", "0.6"), ("2", "0.3"),
        ]
        # the 2-coordinate point at eps=0.6 needs the top two eigenvalues
        row = dict(zip(lines[1].split(","), lines[-2].split(",")))
        assert row["n"] == "2"
        assert row["certified"] == "true"

    def test_json_output(self, tmp_path, capsys):
        path = write_config(tmp_path, BASIC)
        code = main(["complexity", "--config", path, "--jobs", "1",
                     "--format", "json"])
        rows = json.loads(capsys.readouterr().out)
        assert code == 0
        assert len(rows) == 4
        assert all(row["status"] == "ok" for row in rows)

    def test_budget_exit_code(self, tmp_path, capsys, monkeypatch):
        hard = {
            "problem": {
                "kind": "coordinates",
                "coordinates": [{"kind": "korobov", "g": 0.9, "r": 0.65}] * 3,
            },
            "epsilons": [0.1],
            "dims": [3],
        }
        path = write_config(tmp_path, hard)
        monkeypatch.setenv("TRACTLAB_BUDGET_NMAX", "5000")
        code = main(["complexity", "--config", path, "--jobs", "1"])
        out = capsys.readouterr().out
        assert code == 3
        assert ",budget" in out

    def test_deterministic_output(self, tmp_path):
        path = write_config(tmp_path, BASIC)
        outs = []
        for name in ("a.csv", "b.csv"):
            target = tmp_path / name
            assert main(["complexity", "--config", path, "--jobs", "1",
                         "--out", str(target)]) == 0
            outs.append(target.read_bytes())
        assert outs[0] == outs[1]

    def test_parallel_matches_serial(self, tmp_path):
        path = write_config(tmp_path, FAMILY)
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        assert main(["complexity", "--config", path, "--jobs", "1",
                     "--out", str(serial)]) == 0
        assert main(["complexity", "--config", path, "--jobs", "3",
                     "--out", str(parallel)]) == 0
        assert serial.read_bytes() == parallel.read_bytes()


class TestBoundsCommand:
    def test_bounds_rows(self, tmp_path, capsys):
        cfg = {**FAMILY, "bounds": [
            {"name": "chebyshev", "tau": 0.9, "z": 0.9},
            {"name": "curse"},
        ]}
        path = write_config(tmp_path, cfg)
        code = main(["bounds", "--config", path, "--jobs", "1"])
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[1] == "d,epsilon,bound,value,status"
        assert len(lines) == 2 + 3 * 1 * 2  # dims x epsilons x bounds


class TestSweepCommand:
    def test_bound_columns_join_complexity(self, tmp_path, capsys):
        cfg = {**FAMILY, "bounds": [{"name": "curse"}]}
        path = write_config(tmp_path, cfg)
        code = main(["sweep", "--config", path, "--jobs", "1"])
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert code == 0
        header = lines[1].split(",")
        assert header[-1] == "curse"
        for line in lines[2:]:
            row = dict(zip(header, line.split(",")))
            assert float(row["curse"]) <= float(row["n"]) + 1e-9


class TestClassifyCommand:
    def test_json_report(self, tmp_path, capsys):
        path = write_config(tmp_path, FAMILY)
        code = main(["classify", "--config", path])
        out = capsys.readouterr().out
        assert code == 0
        record = json.loads(out[: out.index("\n# ")])
        assert record["spt"] == "yes"
        assert record["exponent"] == 2.0

    def test_requires_family_problem(self, tmp_path, capsys):
        path = write_config(tmp_path, BASIC)
        code = main(["classify", "--config", path])
        assert code == 1
        assert "korobov_family" in capsys.readouterr().err


class TestVerifyCommand:
    def test_seeded_runs_are_byte_identical(self, tmp_path):
        reports = []
        for name in ("r1.txt", "r2.txt"):
            target = tmp_path / name
            code = main(["verify", "--seed", "3", "--instances", "5",
                         "--out", str(target)])
            assert code == 0
            reports.append(target.read_bytes())
        assert reports[0] == reports[1]
        assert b"9/9 checks passed" in reports[0]
