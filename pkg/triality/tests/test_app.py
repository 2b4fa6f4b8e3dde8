import json

from triality import __version__
from triality.app import main
from triality.utils.constants import CorpusFiles, ExitCodes


def _base(corpus):
    return corpus[0].parent


def test_version(capsys):
    assert main(["--version"]) == ExitCodes.SUCCESS
    assert __version__ in capsys.readouterr().out


def test_unknown_noun_is_a_usage_error():
    assert main(["frobnicate"]) == ExitCodes.USAGE_ERROR


def test_loop_check_passes(corpus, capsys):
    assert main(["loop", "check", str(_base(corpus) / CorpusFiles.CHEIN12)]) == ExitCodes.SUCCESS
    assert capsys.readouterr().out.startswith("loop.check: pass")


def test_failing_check_exits_one_with_witness(corpus, capsys):
    code = main(["group", "check", str(_base(corpus) / CorpusFiles.C4_INVERSION), "--json"])
    assert code == ExitCodes.FAILURE
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "fail"
    assert report["witness"]["part"] == "triality"


def test_missing_file_is_a_usage_error(tmp_path):
    assert main(["loop", "check", str(tmp_path / "absent.loop")]) == ExitCodes.USAGE_ERROR


def test_report_schema(capsys):
    assert main(["schema"]) == ExitCodes.SUCCESS
    schema = json.loads(capsys.readouterr().out)
    for field in ("check", "status", "witness", "counts", "timing_seconds", "tool_version", "input_digest", "seed"):
        assert field in schema["properties"]


def test_describe_json(corpus, capsys):
    assert main(["describe", str(_base(corpus) / CorpusFiles.S3_WREATH), "--json"]) == ExitCodes.SUCCESS
    info = json.loads(capsys.readouterr().out)
    assert info["type"] == "TrialityGroup"
    assert info["order"] == 216


def test_seed_flag_reaches_the_report(corpus, capsys):
    code = main(["loop", "doro", str(_base(corpus) / "c4.loop"), "--json", "--seed", "5"])
    assert code == ExitCodes.SUCCESS
    assert json.loads(capsys.readouterr().out)["seed"] == 5


def test_loop_gen_writes_a_chein_loop(corpus, tmp_path):
    out = tmp_path / "chein.loop"
    code = main(["loop", "gen", "chein", "--group", str(_base(corpus) / "s3.loop"), "--out", str(out)])
    assert code == ExitCodes.SUCCESS
    assert main(["loop", "check", str(out)]) == ExitCodes.SUCCESS


def test_chein_construction_needs_a_group():
    assert main(["loop", "gen", "chein"]) == ExitCodes.USAGE_ERROR


def test_suite_run_on_small_manifest(corpus, tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"checks": [
        {"check": "loop.check", "inputs": [str(_base(corpus) / CorpusFiles.NONMOUFANG5)], "expect": "fail"},
        {"check": "group.check", "inputs": [str(_base(corpus) / CorpusFiles.S3_WREATH)]},
    ]}))
    code = main(["suite", "run", str(manifest), "--reports", str(tmp_path / "reports")])
    assert code == ExitCodes.SUCCESS
    assert (tmp_path / "reports" / "summary.json").exists()


def test_doro_verify_on_loop_and_group_files(corpus, capsys):
    base = _base(corpus)
    code = main(["hopf", "doro-verify", str(base / "c4.loop"), str(base / CorpusFiles.S3_WREATH), "--json"])
    assert code == ExitCodes.SUCCESS
    report = json.loads(capsys.readouterr().out)
    assert set(report["details"]["files"]) == {"c4.loop", CorpusFiles.S3_WREATH}


def test_corrupted_doro_assignment_names_the_file(corpus, capsys):
    base = _base(corpus)
    code = main(["hopf", "doro-verify", str(base / CorpusFiles.S3_WREATH), str(base / "c4.loop"),
                 "--corrupt", "--json"])
    assert code == ExitCodes.FAILURE
    report = json.loads(capsys.readouterr().out)
    assert report["witness"]["file"] == CorpusFiles.S3_WREATH
