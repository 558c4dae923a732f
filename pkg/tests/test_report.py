"""
Tests for report payloads, scan output and text templates
"""

import io
import json

import pytest

from cftnvm.characters import subgroup_character, subgroup_of_index
from cftnvm.cyclotomic import CycNum, det_exact, root_of_unity
from cftnvm.finite_field import build_field
from cftnvm.nvm import NvmReport, nvm_decide, proof_identities, scan_range, violation_witness
from cftnvm.report import (
    CSV_COLUMNS,
    ReportRenderer,
    approx,
    cft_payload,
    csv_row,
    dumps,
    exact_value,
    field_payload,
    gauss_payload,
    get_renderer,
    read_json_lines,
    reports_table,
    summary_line,
    witness_payload,
    write_reports,
)
from cftnvm.transform import cft_matrix, gauss_set, t_sums


@pytest.fixture
def gf4_report(gf4):
    chi = subgroup_character(subgroup_of_index(gf4, 3), 0)
    return nvm_decide(chi, method="brute")


@pytest.fixture
def trivial_scan():
    return scan_range(13, 3, "trivial")


class TestApproximations:
    """Test labelled approximations"""

    def test_minus_one(self):
        """-1 renders cleanly"""
        assert approx(CycNum.rational(-1)) == "-1.0 + 0.0i"

    def test_imaginary_unit(self):
        """zeta_4 renders as i"""
        assert approx(root_of_unity(4, 1)) == "0.0 + 1.0i"

    def test_exact_value(self):
        """Exact coefficients travel with the approximation"""
        value = exact_value(root_of_unity(3, 1))
        assert value["exact"] == {"order": 3, "coeffs": ["0", "1"]}
        assert value["approx"].startswith("-0.5 + 0.866")


class TestReportEncoding:
    """Test NvmReport serialisation"""

    def test_key_order(self, gf4_report):
        """JSON keys follow the published schema order"""
        assert list(gf4_report.to_dict()) == ["q", "index", "chi_j", "method", "holds",
                                              "theorem_prediction", "agreement", "witness",
                                              "minors_checked", "error"]

    def test_json(self, gf4_report):
        """Witness indices serialise as I and J"""
        data = json.loads(dumps(gf4_report.to_dict(), compact=True))
        assert data["witness"] == {"I": [0, 1], "J": [0, 1]}
        assert data["holds"] is False
        assert data["agreement"] is None

    def test_csv_row(self, gf4_report):
        """CSV cells use true/false and space separated indices"""
        row = csv_row(gf4_report)
        assert list(row) == CSV_COLUMNS
        assert row["holds"] == "false"
        assert row["witness_I"] == "0 1"
        assert row["agreement"] == ""
        assert row["minors_checked"] == "18"


class TestScanOutput:
    """Test scan writers"""

    def test_summary_line(self, trivial_scan):
        """Counts of instances, holds, failures and disagreements"""
        assert summary_line(trivial_scan) == "summary: instances=3 holds=2 fails=1 disagreements=0"

    def test_json_lines(self, trivial_scan):
        """One JSON object per line, then the summary"""
        buffer = io.StringIO()
        write_reports(trivial_scan, "json", buffer)
        lines = buffer.getvalue().splitlines()
        assert len(lines) == 4
        assert lines[-1].startswith("summary:")
        reports = read_json_lines(buffer.getvalue())
        assert [r["q"] for r in reports] == [4, 7, 13]

    def test_json_lines_without_summary(self, trivial_scan):
        """Every line parses as JSON when the summary is turned off"""
        buffer = io.StringIO()
        write_reports(trivial_scan, "json", buffer, summary=False)
        lines = buffer.getvalue().splitlines()
        assert [json.loads(line)["q"] for line in lines] == [4, 7, 13]

    def test_csv(self, trivial_scan):
        """CSV has a header and one row per report"""
        buffer = io.StringIO()
        write_reports(trivial_scan, "csv", buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 4
        assert lines[1].startswith("4,3,0,both,false,false,true,0 1,0 1,")

    def test_table(self, trivial_scan):
        """The table ends with the summary line"""
        buffer = io.StringIO()
        write_reports(trivial_scan, "table", buffer)
        text = buffer.getvalue()
        assert "NVM scan" in text
        assert text.rstrip().endswith("disagreements=0")

    def test_unknown_format(self, trivial_scan):
        """Unknown formats are rejected"""
        with pytest.raises(ValueError):
            write_reports(trivial_scan, "xml", io.StringIO())

    def test_error_reports(self):
        """Error reports are counted apart and keep their message"""
        reports = [NvmReport(holds=True, method="both", q=7, index=3, chi_j=1),
                   NvmReport(holds=None, method="both", q=27, index=13, chi_j=0,
                             error="SizeCapError: too big")]
        assert summary_line(reports) == ("summary: instances=2 holds=1 fails=0 "
                                         "disagreements=0 errors=1")
        row = csv_row(reports[1])
        assert (row["holds"], row["error"]) == ("", "SizeCapError: too big")
        assert "error" in reports_table(reports)

    def test_deterministic(self, trivial_scan):
        """Writing twice gives identical bytes"""
        first, second = io.StringIO(), io.StringIO()
        write_reports(trivial_scan, "json", first)
        write_reports(scan_range(13, 3, "trivial"), "json", second)
        assert first.getvalue() == second.getvalue()


class TestPayloads:
    """Test JSON payload builders"""

    def test_field(self, gf4):
        """Field payload carries modulus, generator and traces"""
        payload = field_payload(gf4)
        assert payload["modulus"] == [1, 1, 1]
        assert payload["generator"] == [0, 1]
        assert payload["q"] == 4
        assert [row["trace"] for row in payload["trace"]] == [0, 0, 1, 1]

    def test_gauss(self, gf7_index3_chi):
        """Gauss payload flags the norm and carries T sums and identities"""
        gauss = gauss_set(gf7_index3_chi)
        payload = gauss_payload(gauss, t_sums(gauss), proof_identities(gauss))
        assert len(payload["sums"]) == 3
        assert all(entry["norm_is_q"] for entry in payload["sums"])
        assert len(payload["T"]) == 3
        assert payload["identities"]["determinant_identity"] is True

    def test_cft(self):
        """CFT payload includes the determinant"""
        chi = subgroup_character(subgroup_of_index(build_field(5), 1), 0)
        cft = cft_matrix(chi)
        payload = cft_payload(cft, det_exact(cft.matrix))
        assert payload["R"] == [[0], [1]]
        assert CycNum.from_dict(payload["determinant"]["exact"]) == -20
        assert payload["determinant"]["approx"] == "-20.0 + 0.0i"

    def test_witness(self, gf4, gf4_report):
        """Witness payload for q = 4"""
        chi = subgroup_character(subgroup_of_index(gf4, 3), 0)
        cft = cft_matrix(chi)
        f = violation_witness(cft, gf4_report.witness, chi)
        payload = witness_payload(gf4_report, f, cft)
        assert payload["holds"] is False
        assert payload["support"] == [[0, 0], [1, 0]]
        assert payload["support_hat"] == [[0, 1], [1, 1]]
        assert (payload["support_sum"], payload["bound"]) == (4, 5)

    def test_witness_holds(self, gf7_index3_chi):
        """No element is reported when NVM holds"""
        report = nvm_decide(gf7_index3_chi, method="brute")
        payload = witness_payload(report, None, cft_matrix(gf7_index3_chi))
        assert payload == {"report": report.to_dict(), "holds": True}


class TestTemplates:
    """Test text rendering"""

    def test_renderer_singleton(self):
        """get_renderer returns one shared instance"""
        assert get_renderer() is get_renderer()

    def test_nvm(self, gf4_report):
        """NVM text names the vanishing minor"""
        text = ReportRenderer().render("nvm", report=gf4_report)
        assert "NVM holds: no" in text
        assert "vanishing minor: I=[0, 1] J=[0, 1]" in text
        assert "minors checked: 18" in text

    def test_field(self, gf9):
        """Field text lists modulus and generator"""
        text = ReportRenderer().render("field", spec=gf9, elements=gf9.elements())
        assert "modulus:   x^2 + 1" in text
        assert "generator: a + 1" in text
        assert text.count("Tr = ") == 9
