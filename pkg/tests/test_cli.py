"""
Tests for the cftnvm command line
"""

import json

import pytest

from cftnvm import __version__, cli
from cftnvm.cli import EXIT_DISAGREEMENT, EXIT_OK, EXIT_USAGE, create_parser, main
from cftnvm.config import ENV_MAX_ORDER
from cftnvm.nvm import NvmReport
from cftnvm.report import read_json_lines


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Run every command from an empty directory with no settings file"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path))
    return tmp_path


class TestParser:
    """Test argument parsing"""

    def test_subcommands(self):
        """All commands are registered"""
        parser = create_parser()
        for command in ("field", "gauss", "cft", "nvm", "chebotarev", "scan", "witness"):
            args = parser.parse_args([command] + {
                "field": ["--q", "4"], "chebotarev": ["--p", "3"], "scan": ["--q-max", "7"],
            }.get(command, ["--q", "7"]))
            assert args.command == command

    def test_defaults(self):
        """Instance commands default to index 1 and the trivial character"""
        args = create_parser().parse_args(["nvm", "--q", "7"])
        assert args.index == 1
        assert args.chi == 0
        assert args.method == "both"
        assert args.format == "table"

    def test_common_options_after_command(self):
        """--format works after the subcommand"""
        args = create_parser().parse_args(["field", "--q", "4", "--format", "json"])
        assert args.format == "json"

    def test_version(self, capsys):
        """--version prints the version"""
        assert main(["--version"]) == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_no_command(self, capsys):
        """No command prints help and exits 2"""
        assert main([]) == EXIT_USAGE
        assert "Available commands" in capsys.readouterr().out

    def test_unknown_command(self):
        """Unknown commands are usage errors"""
        assert main(["bogus"]) == EXIT_USAGE


class TestFieldCommand:
    """Test the field command"""

    def test_table(self, capsys):
        """GF(4) shows its modulus"""
        assert main(["field", "--q", "4"]) == EXIT_OK
        assert "x^2 + x + 1" in capsys.readouterr().out

    def test_json(self, capsys):
        """GF(7) as JSON"""
        assert main(["field", "--q", "7", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["generator"] == [3]
        assert len(payload["trace"]) == 7

    def test_p_and_m(self, capsys):
        """--p and --m select GF(9)"""
        assert main(["field", "--p", "3", "--m", "2", "--format", "json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["q"] == 9

    @pytest.mark.parametrize("argv", [
        ["field", "--q", "6"],
        ["field"],
        ["field", "--q", "9", "--p", "2"],
        ["field", "--q", "4", "--format", "csv"],
        ["field", "--p", "4"],
    ])
    def test_usage_errors(self, argv):
        """Invalid field requests exit with 2"""
        assert main(argv) == EXIT_USAGE

    def test_out_file(self, isolated_cwd, capsys):
        """--out writes to a file"""
        target = isolated_cwd / "field.json"
        assert main(["field", "--q", "5", "--format", "json", "--out", str(target)]) == EXIT_OK
        assert json.loads(target.read_text())["q"] == 5
        assert capsys.readouterr().out == ""


class TestGaussCommand:
    """Test the gauss command"""

    def test_json(self, capsys):
        """Three Gauss sums, T sums and proof identities at q = 7"""
        assert main(["gauss", "--q", "7", "--index", "3", "--chi", "1", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["sums"]) == 3
        assert len(payload["T"]) == 3
        assert payload["identities"]["determinant_nonzero"] is True

    def test_table(self, capsys):
        """Approximations are labelled"""
        assert main(["gauss", "--q", "7", "--index", "3", "--chi", "1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "approx" in out
        assert "T0 = " in out

    def test_bad_index(self):
        """The index must divide q - 1"""
        assert main(["gauss", "--q", "8", "--index", "3"]) == EXIT_USAGE

    def test_bad_character(self):
        """The character exponent must be below |H|"""
        assert main(["gauss", "--q", "7", "--index", "3", "--chi", "2"]) == EXIT_USAGE

    def test_order_cap_from_environment(self, monkeypatch):
        """CFT_NVM_MAX_ORDER lowers the cyclotomic order cap"""
        monkeypatch.setenv(ENV_MAX_ORDER, "5")
        assert main(["gauss", "--q", "13", "--index", "3", "--chi", "1"]) == EXIT_USAGE


class TestCftCommand:
    """Test the cft command"""

    def test_json(self, capsys):
        """GF(5), full group, trivial character"""
        assert main(["cft", "--q", "5", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["R"] == [[0], [1]]
        assert len(payload["entries"]) == 2

    def test_table(self, capsys):
        """Table output ends with the determinant"""
        assert main(["cft", "--q", "7", "--index", "3", "--chi", "1"]) == EXIT_OK
        assert "det = " in capsys.readouterr().out


class TestNvmCommand:
    """Test the nvm command"""

    def test_agreement(self, capsys):
        """Brute force and criterion agree at q = 7"""
        assert main(["nvm", "--q", "7", "--index", "3", "--chi", "1", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is True
        assert payload["agreement"] is True

    def test_failure(self, capsys):
        """q = 4 trivial character fails"""
        argv = ["nvm", "--q", "4", "--index", "3", "--chi", "0", "--method", "brute", "--format", "json"]
        assert main(argv) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is False
        assert payload["witness"] == {"I": [0, 1], "J": [0, 1]}

    def test_csv(self, capsys):
        """CSV output has a header and one row"""
        argv = ["nvm", "--q", "7", "--index", "3", "--chi", "1", "--format", "csv"]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("q,index,chi_j")
        assert lines[1].startswith("7,3,1,both,true,true,true")

    def test_table(self, capsys):
        """Table output states the decision"""
        assert main(["nvm", "--q", "4", "--index", "3", "--method", "brute"]) == EXIT_OK
        assert "NVM holds: no" in capsys.readouterr().out

    def test_theorem_not_applicable(self):
        """No criterion for index 4"""
        assert main(["nvm", "--q", "13", "--index", "4", "--chi", "1", "--method", "theorem"]) == EXIT_USAGE

    def test_disagreement_exit_code(self, monkeypatch):
        """A disagreement exits with 1"""
        report = NvmReport(holds=True, method="both", q=7, index=3, chi_j=1,
                           theorem_prediction=False, agreement=False)
        monkeypatch.setattr(cli, "nvm_decide", lambda chi, method, strategy: report)
        assert main(["nvm", "--q", "7", "--index", "3", "--chi", "1"]) == EXIT_DISAGREEMENT


class TestChebotarevCommand:
    """Test the chebotarev command"""

    def test_p5(self, capsys):
        """All 252 minors of the 5x5 DFT matrix are nonzero"""
        assert main(["chebotarev", "--p", "5", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is True
        assert payload["minors_checked"] == 252

    def test_cap(self):
        """Primes above the cap are refused"""
        assert main(["chebotarev", "--p", "17"]) == EXIT_USAGE

    def test_config_file_cap(self, isolated_cwd):
        """A settings file in the working directory lowers the cap"""
        (isolated_cwd / "cftnvm.yaml").write_text("chebotarev_cap: 3\n")
        assert main(["chebotarev", "--p", "5"]) == EXIT_USAGE


class TestScanCommand:
    """Test the scan command"""

    def test_json_stdout(self, capsys):
        """JSON lines followed by the summary"""
        argv = ["scan", "--q-max", "13", "--index", "3", "--chars", "trivial", "--format", "json"]
        assert main(argv) == EXIT_OK
        out = capsys.readouterr().out
        assert [r["q"] for r in read_json_lines(out)] == [4, 7, 13]
        assert out.splitlines()[-1] == "summary: instances=3 holds=2 fails=1 disagreements=0"

    def test_out_file(self, isolated_cwd, capsys):
        """With --out the summary also goes to stdout"""
        target = isolated_cwd / "scan.jsonl"
        argv = ["scan", "--q-max", "13", "--index", "3", "--chars", "trivial", "--format", "json",
                "--out", str(target)]
        assert main(argv) == EXIT_OK
        assert "disagreements=0" in capsys.readouterr().out
        lines = target.read_text().splitlines()
        assert len(lines) == 3
        assert [json.loads(line)["q"] for line in lines] == [4, 7, 13]

    def test_out_file_table_has_no_summary(self, isolated_cwd, capsys):
        """Table files leave the summary to stdout"""
        target = isolated_cwd / "scan.txt"
        argv = ["scan", "--q-max", "13", "--index", "3", "--chars", "trivial", "--out", str(target)]
        assert main(argv) == EXIT_OK
        assert "summary:" not in target.read_text()
        assert capsys.readouterr().out.startswith("summary: instances=3")

    def test_workers_identical(self, isolated_cwd):
        """Output files are byte-identical across worker counts"""
        base = ["scan", "--q-max", "19", "--index", "3", "--format", "json"]
        assert main(base + ["--out", str(isolated_cwd / "a.jsonl")]) == EXIT_OK
        assert main(base + ["--out", str(isolated_cwd / "b.jsonl"), "--workers", "2"]) == EXIT_OK
        assert (isolated_cwd / "a.jsonl").read_bytes() == (isolated_cwd / "b.jsonl").read_bytes()

    def test_index2_no_prediction(self, capsys):
        """Index 2 nontrivial characters have no criterion"""
        argv = ["scan", "--q-max", "20", "--index", "2", "--chars", "nontrivial", "--format", "json"]
        assert main(argv) == EXIT_OK
        reports = read_json_lines(capsys.readouterr().out)
        assert reports
        assert all(r["theorem_prediction"] is None for r in reports)

    def test_csv(self, capsys):
        """CSV scan output has no summary row"""
        argv = ["scan", "--q-max", "13", "--index", "3", "--chars", "trivial", "--format", "csv"]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 4
        assert "witness_I" in lines[0]

    def test_scan_cap(self):
        """q_max above the scan cap is refused"""
        assert main(["scan", "--q-max", "1000"]) == EXIT_USAGE

    def test_capped_instances_reported(self, isolated_cwd, capsys):
        """Instances above the minor cap are listed with their error"""
        (isolated_cwd / "cftnvm.yaml").write_text("minor_cap: 3\n")
        argv = ["scan", "--q-max", "13", "--index", "3", "--chars", "trivial", "--format", "json"]
        assert main(argv) == EXIT_OK
        out = capsys.readouterr().out
        assert all(r["error"].startswith("SizeCapError") for r in read_json_lines(out))
        assert out.splitlines()[-1].endswith("errors=3")


class TestWitnessCommand:
    """Test the witness command"""

    def test_violation(self, capsys):
        """q = 4 has a violating element"""
        assert main(["witness", "--q", "4", "--index", "3", "--chi", "0"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "NVM fails" in out
        assert "= 4 < 5" in out

    def test_holds(self, capsys):
        """The full group at q = 5 has none"""
        assert main(["witness", "--q", "5", "--index", "1", "--chi", "0"]) == EXIT_OK
        assert "NVM holds: no violating element exists" in capsys.readouterr().out

    def test_json(self, capsys):
        """JSON witness carries supports and bound"""
        assert main(["witness", "--q", "4", "--index", "3", "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is False
        assert payload["support_sum"] < payload["bound"]


class TestErrorHandling:
    """Test settings errors surfaced by the CLI"""

    def test_bad_config(self, isolated_cwd):
        """Invalid settings files exit with 2"""
        path = isolated_cwd / "bad.yaml"
        path.write_text("max_order: 0\n")
        assert main(["field", "--q", "4", "--config", str(path)]) == EXIT_USAGE

    def test_missing_config(self, isolated_cwd):
        """Missing settings files exit with 2"""
        assert main(["field", "--q", "4", "--config", str(isolated_cwd / "nope.yaml")]) == EXIT_USAGE
