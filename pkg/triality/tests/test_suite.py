import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from triality import models
from triality.models.schemas import Manifest, ManifestEntry, Report
from triality.services.corpus_service import write_manifest
from triality.services.suite_service import CHECKS, exit_code, run_check, run_suite, suite_exit_code
from triality.utils.constants import CheckStatus, CorpusFiles, ExitCodes
from triality.utils.errors import UnknownCheckError


def _base(corpus):
    return corpus[0].parent


def test_registry_covers_the_command_surface():
    for name in ("loop.check", "loop.doro", "group.check", "atp.psi", "cayley.build", "malcev.liefy",
                 "hopf.doro-verify", "env.triality-check", "env.mh", "conv.loop", "conv.triality"):
        assert name in CHECKS


def test_passing_report(corpus):
    report = run_check("loop.check", [_base(corpus) / CorpusFiles.CHEIN12])
    assert report.status == CheckStatus.PASS
    assert report.witness is None
    assert report.details["order"] == 12
    assert report.details["associative"] is False
    assert len(report.input_digest) > 0
    assert exit_code([report]) == ExitCodes.SUCCESS


def test_failing_report_carries_a_witness(corpus):
    report = run_check("loop.check", [_base(corpus) / CorpusFiles.NONMOUFANG5])
    assert report.status == CheckStatus.FAIL
    assert report.witness["part"] == "moufang"
    assert report.witness["subpart"] == "left"
    assert exit_code([report]) == ExitCodes.FAILURE


def test_missing_input_is_an_error_report(tmp_path):
    report = run_check("loop.check", [tmp_path / "absent.loop"])
    assert report.status == CheckStatus.ERROR
    assert "error" in report.details
    assert exit_code([report]) == ExitCodes.USAGE_ERROR


def test_unknown_check_is_rejected():
    with pytest.raises(UnknownCheckError):
        run_check("loop.nothing", [])


def test_seed_is_recorded(corpus):
    report = run_check("loop.doro", [_base(corpus) / "c4.loop"], {"seed": 11})
    assert report.status == CheckStatus.PASS
    assert report.seed == 11


def test_empty_manifest(tmp_path):
    path = write_manifest(tmp_path / "manifest.json", Manifest())
    summary, reports = run_suite(path, tmp_path / "reports")
    assert reports == []
    assert summary.passed == summary.failed == summary.errors == 0
    assert suite_exit_code(summary) == ExitCodes.SUCCESS
    assert json.loads((tmp_path / "reports" / "summary.json").read_text())["entries"] == []


def test_expected_failure_counts_as_success(corpus, tmp_path):
    manifest = Manifest(checks=[
        ManifestEntry(check="group.check", inputs=[str(_base(corpus) / CorpusFiles.S3_WREATH)]),
        ManifestEntry(check="group.check", inputs=[str(_base(corpus) / CorpusFiles.C4_INVERSION)], expect="fail"),
    ])
    path = write_manifest(tmp_path / "manifest.json", manifest)
    summary, reports = run_suite(path, tmp_path / "reports")
    assert summary.passed == 1
    assert summary.expected_failures == 1
    assert summary.entries[1].status == CheckStatus.EXPECTED_FAIL
    assert suite_exit_code(summary) == ExitCodes.SUCCESS
    assert (tmp_path / "reports" / "002-group-check.json").exists()


def test_unexpected_pass_is_a_failure(corpus, tmp_path):
    manifest = Manifest(checks=[
        ManifestEntry(check="loop.check", inputs=[str(_base(corpus) / "c4.loop")], expect="fail"),
    ])
    summary, _ = run_suite(write_manifest(tmp_path / "manifest.json", manifest))
    assert summary.failed == 1
    assert suite_exit_code(summary) == ExitCodes.FAILURE


def test_missing_manifest_input_is_an_error(tmp_path):
    manifest = Manifest(checks=[ManifestEntry(check="loop.check", inputs=["missing.loop"])])
    summary, reports = run_suite(write_manifest(tmp_path / "manifest.json", manifest))
    assert summary.errors == 1
    assert reports[0].status == CheckStatus.ERROR
    assert suite_exit_code(summary) == ExitCodes.USAGE_ERROR


def test_manifest_with_unknown_check(tmp_path):
    manifest = Manifest(checks=[ManifestEntry(check="bogus.check")])
    with pytest.raises(UnknownCheckError):
        run_suite(write_manifest(tmp_path / "manifest.json", manifest))


@pytest.mark.slow
def test_bundled_manifest(corpus, tmp_path):
    summary, _ = run_suite(_base(corpus) / CorpusFiles.MANIFEST, tmp_path / "reports")
    assert summary.failed == 0 and summary.errors == 0
    assert summary.expected_failures == 3


def test_shipped_schema_matches_the_report_model():
    shipped = json.loads((Path(models.__file__).parent / "report.schema.json").read_text())
    generated = Report.model_json_schema()
    assert set(shipped["properties"]) == set(generated["properties"])
    assert sorted(shipped["required"]) == sorted(generated["required"])


def test_failing_report_needs_a_witness():
    with pytest.raises(ValidationError):
        Report(check="loop.check", status="fail", tool_version="0", input_digest="x", seed=0)
