import json
import os

from ramseyfact.cli import main


SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "..", "src", "ramseyfact",
                           "report_schema.json")


def validate_report(report):
    """Structural validation against the shipped schema (no extra deps)."""
    with open(SCHEMA_PATH, "r", encoding="utf-8") as fh:
        schema = json.load(fh)
    for key in schema["required"]:
        assert key in report, f"missing {key}"
    assert isinstance(report["command"], str)
    assert isinstance(report["params"], dict)
    assert isinstance(report["outcome"], dict)
    assert isinstance(report["stats"]["seconds"], (int, float))
    if "nodes" in report["stats"]:
        assert isinstance(report["stats"]["nodes"], int)
    if "max_rss_kb" in report["stats"]:
        assert isinstance(report["stats"]["max_rss_kb"], int)
    assert isinstance(report["version"], str)


def run_cli(capsys, *argv):
    """Invoke the CLI; every JSON report must re-parse and fit the schema."""
    code = main(list(argv))
    out = capsys.readouterr().out
    if out.strip().startswith("{"):
        report = json.loads(out)
        validate_report(report)
        return code, report
    return code, out


class TestDecompose:
    def test_example(self, capsys):
        code, report = run_cli(
            capsys, "decompose", "--p", "2", "--matrix", "11,01,10"
        )
        assert code == 0
        validate_report(report)
        assert report["outcome"]["reduced"]["entries"] == [[1, 0], [0, 1], [1, 1]]
        assert report["outcome"]["transform"]["entries"] == [[1, 1], [0, 1]]

    def test_rank_error_is_usage(self, capsys):
        code, report = run_cli(capsys, "decompose", "--p", "2", "--matrix", "11,11")
        assert code == 64
        assert report["outcome"]["error"] == "usage"


class TestVerify:
    def test_fano_no_bad(self, capsys):
        code, report = run_cli(
            capsys, "verify", "glr", "--p", "2", "--k", "1", "--m", "2",
            "--n", "3", "--r", "2",
        )
        assert code == 0
        assert report["outcome"]["status"] == "no-bad-coloring"

    def test_bad_coloring_exit_one(self, capsys):
        code, report = run_cli(
            capsys, "verify", "glr", "--p", "2", "--k", "1", "--m", "2",
            "--n", "2", "--r", "2",
        )
        assert code == 1
        assert report["outcome"]["witness"] == [0, 0, 1]

    def test_budget_exit_two(self, capsys):
        code, report = run_cli(
            capsys, "verify", "gowers", "--k", "1", "--m", "2",
            "--n", "5", "--r", "2", "--max-nodes", "10",
        )
        assert code == 2
        assert report["outcome"]["status"] == "budget-exhausted"

    def test_instance_budget_exit_two(self, capsys):
        code, report = run_cli(
            capsys, "verify", "gowers", "--k", "2", "--m", "2",
            "--n", "9", "--r", "2", "--max-ground", "100",
        )
        assert code == 2
        assert report["outcome"]["error"] == "budget"

    def test_jobs_flag_does_not_change_output(self, capsys):
        reports = []
        for jobs in ("1", "4"):
            code, report = run_cli(
                capsys, "verify", "drt", "--k-small", "2", "--k-large", "3",
                "--n", "4", "--r", "2", "--jobs", jobs,
            )
            assert code == 1
            reports.append(report["outcome"]["witness"])
        assert reports[0] == reports[1]


class TestMinN:
    def test_fano_milestone(self, capsys):
        code, report = run_cli(
            capsys, "min-n", "glr", "--p", "2", "--k", "1", "--m", "2",
            "--r", "2", "--n-max", "4",
        )
        assert code == 0
        assert report["outcome"]["min_n"] == 3


class TestGeoAndBounds:
    def test_norm(self, capsys):
        code, report = run_cli(capsys, "geo", "norm", "--space", "l1:2",
                               "--point", "3,4")
        assert code == 0 and report["outcome"]["norm"] == "7"

    def test_opnorm(self, capsys):
        code, report = run_cli(
            capsys, "geo", "opnorm", "--matrix", "1,1;1,-1",
            "--domain", "l1:2", "--codomain", "linf:2",
        )
        assert code == 0
        assert report["outcome"] == {"op_norm": "1", "inv_norm": "1"}

    def test_bound_example(self, capsys):
        code, report = run_cli(
            capsys, "bound", "n-infty", "--d", "1", "--m", "2", "--r", "2",
            "--eps", "1",
        )
        assert code == 0
        assert report["outcome"]["display"] == "GR(5, 20, 2)"
        assert report["outcome"]["n_pol_bound"] == "GR(5, 20, 2)"

    def test_bound_dim_h(self, capsys):
        code, report = run_cli(
            capsys, "bound", "dim-h", "--dim-f", "1", "--dim-g", "1",
            "--eps", "1", "--n", "5",
        )
        assert code == 0
        assert report["outcome"]["dim_h_bound"] == "5"

    def test_amalgam(self, capsys):
        code, report = run_cli(
            capsys, "geo", "amalgam", "--x", "linf:1", "--y", "linf:2",
            "--matrix", "1;1/2",
        )
        assert code == 0
        assert report["outcome"]["amalgam"]["defect"] == "0"

    def test_net(self, capsys):
        code, report = run_cli(
            capsys, "geo", "net", "--space", "linf:2", "--eps", "1",
            "--mode", "shell",
        )
        assert code == 0
        assert report["outcome"]["net"]["size"] <= 25

    def test_gap(self, capsys):
        code, report = run_cli(
            capsys, "geo", "gap", "--ambient", "linf:2", "--v", "1,0",
            "--w", "0,1",
        )
        assert code == 0
        assert report["outcome"]["gap"] == "1"

    def test_omega_carries_argument(self, capsys):
        code, report = run_cli(
            capsys, "geo", "omega", "--space", "l1:2", "--space2", "linf:2",
        )
        assert code == 0
        assert report["outcome"]["omega"]["argument"] == "2"

    def test_space_json_round_trip(self, capsys):
        code, report = run_cli(capsys, "free", "space", "--metric",
                               '{"n":2,"d":[["0","1"],["1","0"]]}')
        assert code == 0
        payload = json.dumps(report["outcome"]["space"])
        code2, report2 = run_cli(capsys, "geo", "norm", "--space", payload,
                                 "--point", "1")
        assert code2 == 0 and report2["outcome"]["norm"] == "1"


class TestFreeEmb:
    def test_free_norm(self, capsys):
        code, report = run_cli(
            capsys, "free", "norm",
            "--metric", '{"n":3,"d":[["0","1","2"],["1","0","1"],["2","1","0"]]}',
            "--vector", "0,1",
        )
        assert code == 0 and report["outcome"]["free_norm"] == "2"

    def test_emb_list(self, capsys):
        code, report = run_cli(
            capsys, "emb", "list",
            "--inner", '{"n":2,"d":[["0","1"],["1","0"]]}',
            "--outer", '{"n":3,"d":[["0","1","2"],["1","0","1"],["2","1","0"]]}',
        )
        assert code == 0 and report["outcome"]["count"] == 4

    def test_metric_csv_form(self, capsys):
        code, report = run_cli(
            capsys, "free", "norm", "--metric", "0,1,2;1,0,1;2,1,0",
            "--vector", "0,1",
        )
        assert code == 0 and report["outcome"]["free_norm"] == "2"

    def test_emb_probe_reports_grid(self, capsys):
        code, report = run_cli(
            capsys, "emb", "probe",
            "--inner", '{"n":2,"d":[["0","1/2"],["1/2","0"]]}',
            "--radius", "1", "--dim", "1", "--step", "1/2",
        )
        assert code == 0
        assert report["outcome"]["grid_step"] == "1/2"
        assert report["outcome"]["embedding_count"] > 0


class TestReportContract:
    def test_usage_error_code(self, capsys):
        code = main(["nonsense"])
        capsys.readouterr()
        assert code == 64

    def test_malformed_json_diagnostic(self, capsys):
        code, report = run_cli(capsys, "geo", "norm", "--space", "{bad",
                               "--point", "1,2")
        assert code == 64
        assert "error" in report["outcome"]

    def test_determinism_modulo_timing(self, capsys):
        outs = []
        for _ in range(2):
            code, report = run_cli(
                capsys, "verify", "gowers", "--k", "1", "--m", "2",
                "--n", "3", "--r", "2",
            )
            report["stats"] = None  # timing and memory fields excluded
            report["outcome"]["stats"].pop("seconds")
            outs.append(json.dumps(report, sort_keys=True))
        assert outs[0] == outs[1]

    def test_stats_carry_memory_high_water(self, capsys):
        code, report = run_cli(capsys, "geo", "norm", "--space", "l1:2",
                               "--point", "1,1")
        assert code == 0
        assert report["stats"].get("max_rss_kb", 1) > 0

    def test_pretty_format(self, capsys):
        code = main(["--pretty", "geo", "norm", "--space", "l1:2",
                     "--point", "1,1"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("# geo")
