"""Command-line interface: artifacts, exit codes, report aggregation."""

import csv
import json

import pytest

from lotflow import gen_table1
from lotflow.cli import main


def write_instance(tmp_path, inst, name="inst.json"):
    path = tmp_path / name
    path.write_text(inst.to_json(), encoding="utf-8")
    return path


class TestSolve:
    def test_frh_writes_artifacts(self, tmp_path):
        path = write_instance(tmp_path, gen_table1(Bc=200))
        out = tmp_path / "out"
        code = main(["solve", "--engine", "frh", "--in", str(path),
                     "--out", str(out)])
        assert code == 0
        traj_csv = out / "inst_frh_trajectory.csv"
        diag_json = out / "inst_frh_diagnostics.json"
        assert traj_csv.exists() and diag_json.exists()
        diag = json.loads(diag_json.read_text(encoding="utf-8"))
        assert diag["objective"] == pytest.approx(1891.3076923, rel=1e-6)
        lines = traj_csv.read_text(encoding="utf-8").strip().splitlines()
        assert lines[0] == "t,x,y,v,Ed,w,I,B"
        assert lines[-1].startswith("objective,")

    def test_oracle_guard_exit_code(self, tmp_path):
        path = write_instance(tmp_path, gen_table1(Bc=200))
        code = main(["solve", "--engine", "oracle", "--in", str(path),
                     "--out", str(tmp_path / "out")])
        assert code == 3

    def test_malformed_instance_exit_code(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{broken", encoding="utf-8")
        code = main(["solve", "--engine", "frh", "--in", str(path),
                     "--out", str(tmp_path / "out")])
        assert code == 2

    def test_missing_file_exit_code(self, tmp_path):
        code = main(["solve", "--engine", "frh",
                     "--in", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "out")])
        assert code == 2


class TestSweep:
    def test_capital_sweep_layout(self, tmp_path):
        out = tmp_path / "capital.csv"
        assert main(["sweep", "--kind", "capital", "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open(encoding="utf-8")))
        assert [float(r["x"]) for r in rows] == [50, 150, 200, 250, 300, 350, 400]
        objs = [float(r["objective"]) for r in rows]
        assert objs == sorted(objs)  # more capital never hurts
        assert objs[2] == pytest.approx(1891.3076923, rel=1e-6)

    def test_interest_sweep_layout(self, tmp_path):
        out = tmp_path / "interest.csv"
        assert main(["sweep", "--kind", "interest", "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open(encoding="utf-8")))
        assert [float(r["x"]) for r in rows] == [
            0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30]
        objs = [float(r["objective"]) for r in rows]
        assert all(a > b for a, b in zip(objs, objs[1:]))
        ref = {float(r["no_loan_objective"]) for r in rows}
        assert len(ref) == 1
        assert ref.pop() == pytest.approx(1891.3076923, rel=1e-6)


class TestGen:
    def test_table1_roundtrip(self, tmp_path):
        out = tmp_path / "inst"
        assert main(["gen", "--scheme", "table1", "--seed", "1",
                     "--bc", "200", "--out", str(out)]) == 0
        files = list(out.glob("*.json"))
        assert len(files) == 1
        from lotflow import Instance
        inst = Instance.from_json(files[0].read_text(encoding="utf-8"))
        assert inst.to_dict() == gen_table1(Bc=200).to_dict()

    def test_reruns_byte_identical(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main(["gen", "--scheme", "table2", "--seed", "9",
                         "--index", "5", "--out", str(out)]) == 0
        [fa] = sorted(out_a.glob("*.json"))
        [fb] = sorted(out_b.glob("*.json"))
        assert fa.name == fb.name
        assert fa.read_bytes() == fb.read_bytes()

    def test_grid_file_count(self, tmp_path):
        out = tmp_path / "grid"
        assert main(["gen", "--scheme", "table5", "--seed", "3",
                     "--index", "17", "--out", str(out)]) == 0
        files = list(out.glob("table5-0017-*.json"))
        assert len(files) == 1


class TestBench:
    def test_small_benchmark_report(self, tmp_path):
        out = tmp_path / "bench"
        assert main(["bench", "--scheme", "table2", "--seed", "4",
                     "--max-cases", "6", "--out", str(out)]) == 0
        rows = list(csv.DictReader((out / "report.csv").open(encoding="utf-8")))
        assert len(rows) == 6
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["scheme"] == "table2"
        assert summary["cases"] == 6
        assert (out / "summary.csv").exists()

    def test_oracle_skipped_beyond_guard(self, tmp_path):
        # the bundled grids use T >= 12, above the default enumeration cap,
        # so the oracle column stays empty instead of stalling the run
        out = tmp_path / "bench"
        assert main(["bench", "--scheme", "table5", "--seed", "4",
                     "--max-cases", "2", "--oracle", "--out", str(out)]) == 0
        rows = list(csv.DictReader((out / "report.csv").open(encoding="utf-8")))
        assert all(r["oracle_objective"] in ("", None) for r in rows)

    def test_bench_row_includes_oracle_when_small(self):
        from lotflow import gen_random_small
        from lotflow.cli import _bench_one
        inst = gen_random_small(seed=8, T=4, beta=0.5)
        row = _bench_one((0, inst.to_dict(), {}, True, 8))
        assert row["oracle_objective"] is not None
        assert row["deviation"] >= 0.0
        assert row["error"] is None

    def test_aggregates_match_rows(self, tmp_path):
        out = tmp_path / "bench"
        assert main(["bench", "--scheme", "table2", "--seed", "4",
                     "--max-cases", "9", "--out", str(out)]) == 0
        rows = list(csv.DictReader((out / "report.csv").open(encoding="utf-8")))
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        total = sum(cell["cases"] for cell in summary["pivot"])
        assert total == len(rows)
