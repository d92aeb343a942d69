import json

import pytest

from taptrack.cli import main
from taptrack.trajio import load_feature_report, load_trajectory, load_trajectory_file


def run(argv):
    return main(argv)


@pytest.fixture
def ref_file(tmp_path):
    out = tmp_path / "ref.csv"
    code = run(
        [
            "gen-ref",
            "--waypoints",
            "300,300:1200,420:1100,800:420,760",
            "--speed",
            "55",
            "--steps",
            "260",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    return out


class TestGenRef:
    def test_output_passes_loader(self, ref_file):
        traj = load_trajectory(ref_file)
        assert len(traj) == 260
        traj.validate()
        manifest = json.loads((ref_file.parent / "ref.csv.manifest.json").read_text())
        assert manifest["command"] == "gen-ref"
        assert manifest["parameters"]["speed"] == 55.0

    def test_missing_out_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["gen-ref", "--waypoints", "0,0:10,10", "--steps", "5"])
        assert exc.value.code == 2

    def test_out_of_bounds_waypoint_fails_validation(self, tmp_path, capsys):
        code = run(
            [
                "gen-ref",
                "--waypoints",
                "0,0:3000,10",
                "--steps",
                "5",
                "--out",
                str(tmp_path / "x.csv"),
            ]
        )
        assert code == 1
        assert "display" in capsys.readouterr().err

    def test_held_point(self, tmp_path):
        out = tmp_path / "hold.csv"
        assert run(["gen-ref", "--waypoints", "700,400", "--steps", "30", "--out", str(out)]) == 0
        traj = load_trajectory(out)
        assert all(s.state.x == 700 for s in traj.samples)


class TestSimulate:
    def test_baseline_overlaps_from_second_step(self, tmp_path, ref_file):
        out = tmp_path / "base.csv"
        code = run(
            ["simulate", "--mode", "baseline", "--ref", str(ref_file), "--out", str(out),
             "--init", "900,200"]
        )
        assert code == 0
        traj = load_trajectory(out)
        ref = load_trajectory(ref_file)
        for n in range(2, len(traj)):
            dx = traj.samples[n].state.x - ref.samples[n].state.x
            dy = traj.samples[n].state.y - ref.samples[n].state.y
            assert dx * dx + dy * dy <= 1e-18

    def test_humanlike_writes_events_and_manifest(self, tmp_path, ref_file):
        out = tmp_path / "hl.csv"
        code = run(
            ["simulate", "--mode", "humanlike", "--ref", str(ref_file), "--out", str(out),
             "--seed", "3"]
        )
        assert code == 0
        assert load_trajectory(out) is not None
        assert (tmp_path / "hl.csv.events").exists()
        manifest = json.loads((tmp_path / "hl.csv.manifest.json").read_text())
        assert manifest["parameters"]["seed"] == 3
        assert manifest["parameters"]["lambda1"] == 32.0
        assert str(tmp_path / "hl.csv.events") in manifest["outputs"]

    def test_repeat_runs_byte_identical(self, tmp_path, ref_file):
        args = ["simulate", "--mode", "humanlike", "--ref", str(ref_file), "--seed", "7"]
        out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert (tmp_path / "r1.csv.events").read_bytes() == (
            tmp_path / "r2.csv.events"
        ).read_bytes()

    def test_batch_seeds(self, tmp_path, ref_file):
        out = tmp_path / "b_{seed}.csv"
        code = run(
            ["simulate", "--mode", "humanlike", "--ref", str(ref_file),
             "--seeds", "0..4", "--out", str(out)]
        )
        assert code == 0
        for seed in range(5):
            assert (tmp_path / f"b_{seed}.csv").exists()
            mf = json.loads((tmp_path / f"b_{seed}.csv.manifest.json").read_text())
            assert mf["parameters"]["seed"] == seed

    def test_batch_without_placeholder_is_usage_error(self, tmp_path, ref_file, capsys):
        code = run(
            ["simulate", "--mode", "humanlike", "--ref", str(ref_file),
             "--batch", "3", "--out", str(tmp_path / "plain.csv")]
        )
        assert code == 2
        assert "{seed}" in capsys.readouterr().err

    def test_custom_cdf_flag(self, tmp_path, ref_file):
        cdf_path = tmp_path / "cdf.txt"
        cdf_path.write_text("2\n1 0.5\n2 1.0\n")
        out = tmp_path / "c.csv"
        code = run(
            ["simulate", "--mode", "humanlike", "--ref", str(ref_file),
             "--cdf", str(cdf_path), "--out", str(out)]
        )
        assert code == 0
        traj = load_trajectory(out)
        # max interval under this cdf is 2 steps
        events = traj.event_steps()
        assert max(b - a for a, b in zip(events, events[1:])) <= 2

    def test_validation_failure_exit_code(self, tmp_path, ref_file, capsys):
        code = run(
            ["simulate", "--mode", "humanlike", "--ref", str(ref_file),
             "--steps", "5000", "--out", str(tmp_path / "x.csv")]
        )
        assert code == 1


class TestFeatures:
    def test_report_fields(self, tmp_path, ref_file):
        runs = []
        for seed in range(3):
            out = tmp_path / f"t{seed}.csv"
            run(["simulate", "--mode", "humanlike", "--ref", str(ref_file),
                 "--seed", str(seed), "--out", str(out)])
            runs.append(str(out))
        report_path = tmp_path / "report.txt"
        code = run(
            ["features", "--traj", *runs, "--ref", str(ref_file),
             "--out", str(report_path)]
        )
        assert code == 0
        report = load_feature_report(report_path)
        assert report.n_trajectories == 3
        assert report.mean_squared_error is not None
        assert report.histogram is not None

    def test_diagonal_reference_has_unit_diagonal_mass(self, tmp_path):
        ref = tmp_path / "diag.csv"
        run(["gen-ref", "--waypoints", "100,100:900,900", "--speed", "60",
             "--steps", "40", "--out", str(ref)])
        report_path = tmp_path / "r.txt"
        assert run(["features", "--traj", str(ref), "--out", str(report_path)]) == 0
        report = load_feature_report(report_path)
        assert report.diagonal_mass_value == 1.0

    def test_baseline_error_near_zero(self, tmp_path, ref_file):
        out = tmp_path / "b.csv"
        run(["simulate", "--mode", "baseline", "--ref", str(ref_file),
             "--init", "500,500", "--out", str(out)])
        report_path = tmp_path / "r.txt"
        assert run(["features", "--traj", str(out), "--ref", str(ref_file),
                    "--out", str(report_path)]) == 0
        report = load_feature_report(report_path)
        assert report.median_squared_error <= 1e-18


class TestCompare:
    def test_set_vs_itself_zero_distances(self, tmp_path, ref_file):
        out = tmp_path / "t.csv"
        run(["simulate", "--mode", "humanlike", "--ref", str(ref_file),
             "--seed", "0", "--out", str(out)])
        cmp_path = tmp_path / "cmp.txt"
        code = run(["compare", "--a", str(out), "--b", str(out),
                    "--ref", str(ref_file), "--out", str(cmp_path)])
        assert code == 0
        text = cmp_path.read_text()
        assert "speed_ks=0.0" in text
        assert "direction_tv=0.0" in text
        assert "interval_ks=0.0" in text

    def test_baseline_beats_humanlike_mse(self, tmp_path, ref_file):
        base = tmp_path / "base.csv"
        hl = tmp_path / "hl.csv"
        run(["simulate", "--mode", "baseline", "--ref", str(ref_file), "--out", str(base)])
        run(["simulate", "--mode", "humanlike", "--ref", str(ref_file), "--out", str(hl)])
        cmp_path = tmp_path / "cmp.txt"
        assert run(["compare", "--a", str(base), "--b", str(hl),
                    "--ref", str(ref_file), "--out", str(cmp_path)]) == 0
        sections = {}
        current = None
        for line in cmp_path.read_text().splitlines():
            if line.startswith("["):
                current = line.strip("[]")
                sections[current] = {}
            elif "=" in line:
                k, _, v = line.partition("=")
                sections[current][k] = v
        assert float(sections["set_a"]["mean_squared_error"]) < float(
            sections["set_b"]["mean_squared_error"]
        )

    def test_disjoint_directions_tv_one(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        run(["gen-ref", "--waypoints", "100,500:1800,500", "--speed", "60",
             "--steps", "30", "--out", str(a)])
        run(["gen-ref", "--waypoints", "500,100:500,1000", "--speed", "60",
             "--steps", "30", "--out", str(b)])
        cmp_path = tmp_path / "cmp.txt"
        assert run(["compare", "--a", str(a), "--b", str(b), "--out", str(cmp_path)]) == 0
        assert "direction_tv=1.0" in cmp_path.read_text()


class TestMainErrors:
    def test_missing_file_exits_one(self, tmp_path, capsys):
        code = run(["features", "--traj", str(tmp_path / "none.csv"),
                    "--out", str(tmp_path / "r.txt")])
        assert code == 1

    def test_unknown_command_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run(["frobnicate"])
        assert exc.value.code == 2
