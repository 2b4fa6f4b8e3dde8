import pytest

from triality.models.schemas import ManifestEntry
from triality.services import corpus_service
from triality.services.corpus_service import (
    CAYLEY,
    LIE_TRIALITY,
    LOOP,
    MANIFEST,
    STRUCTURE_CONSTANTS,
    TRIALITY_GROUP,
    describe,
    detect_format,
    parse_params,
)
from triality.services.gtriality_service import check_triality
from triality.services.loop_service import is_moufang
from triality.services.malcev_service import check_lie_triality, check_malcev, nonabelian_2d, sl2, wreath_lie
from triality.services.qcore_service import q
from triality.utils.constants import CorpusFiles
from triality.utils.errors import FormatError


def test_corpus_contains_the_bundled_files(corpus):
    names = {p.name for p in corpus}
    for name in (CorpusFiles.CHEIN12, CorpusFiles.O16, CorpusFiles.S3_WREATH, CorpusFiles.C4_INVERSION,
                 CorpusFiles.CAYLEY, CorpusFiles.ORTHO, CorpusFiles.MANIFEST, "c8.loop", "lie2wr.json"):
        assert name in names


def test_formats_are_detected(corpus):
    base = corpus[0].parent
    assert detect_format(base / CorpusFiles.CHEIN12) == LOOP
    assert detect_format(base / CorpusFiles.S3_WREATH) == TRIALITY_GROUP
    assert detect_format(base / CorpusFiles.CAYLEY) == CAYLEY
    assert detect_format(base / CorpusFiles.ORTHO) == LIE_TRIALITY
    assert detect_format(base / "o0.json") == STRUCTURE_CONSTANTS
    assert detect_format(base / CorpusFiles.MANIFEST) == MANIFEST


def test_describe_loop(corpus):
    info = describe(corpus[0].parent / CorpusFiles.CHEIN12)
    assert info["type"] == "FiniteLoop"
    assert info["order"] == 12
    assert "atp.compute" in info["applicable"]


def test_describe_cayley(corpus):
    info = describe(corpus[0].parent / CorpusFiles.CAYLEY)
    assert info["dim"] == 8
    assert info["params"] == ["-1", "-1", "-1"]


def test_read_back_bundled_structures(corpus):
    base = corpus[0].parent
    chein = corpus_service.read_loop(base / CorpusFiles.CHEIN12)
    assert chein.order == 12 and is_moufang(chein)
    wreath = corpus_service.read_triality_group(base / CorpusFiles.S3_WREATH)
    assert wreath.order == 216
    assert check_triality(wreath)["passed"]
    assert not check_triality(corpus_service.read_triality_group(base / CorpusFiles.C4_INVERSION))["passed"]
    assert check_malcev(corpus_service.read_structure_constants(base / "o0.json"))["passed"]
    assert corpus_service.read_manifest(base / CorpusFiles.MANIFEST).checks


def test_lie_triality_file_round_trip(tmp_path):
    path = corpus_service.write_lie_triality(tmp_path / "sl2wr.json",
                                             wreath_lie(sl2()))
    g = corpus_service.read_lie_triality(path)
    assert g.dim == 9
    assert check_lie_triality(g)["passed"]


def test_structure_constants_keep_rationals(tmp_path):
    path = tmp_path / "half.json"
    path.write_text('{"dim": 2, "bracket": [[1, 2, [[2, "1/2"]]]]}')
    sc = corpus_service.read_structure_constants(path)
    assert sc.mul(sc.basis(0), sc.basis(1)) == (q(0), q(1) / 2)
    assert corpus_service.structure_constants_to_file(sc).bracket == [[1, 2, [[2, "1/2"]]]]


def test_structure_constants_file_from_nonabelian_algebra(tmp_path):
    path = corpus_service.write_structure_constants(tmp_path / "b2.json", nonabelian_2d())
    assert describe(path)["anticommutative"]


def test_malformed_json_reports_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dim": 2,\n  "bracket": [\n')
    with pytest.raises(FormatError) as info:
        detect_format(path)
    assert info.value.line is not None


def test_unknown_json_object_is_rejected(tmp_path):
    path = tmp_path / "mystery.json"
    path.write_text('{"colour": "blue"}')
    with pytest.raises(FormatError, match="unrecognised input format"):
        detect_format(path)


def test_schema_violation_is_a_format_error(tmp_path):
    path = tmp_path / "group.json"
    path.write_text('{"order": 2, "table": "not a table", "rho": [1, 2], "sigma": [1, 2]}')
    with pytest.raises(FormatError):
        corpus_service.read_triality_group(path)


def test_parse_params():
    assert parse_params("-1, 1/2, 3") == (q(-1), q(1) / 2, q(3))
    with pytest.raises(FormatError):
        parse_params("1,2")


def test_relative_inputs_resolve_against_the_manifest(tmp_path):
    entry = ManifestEntry(check="loop.check", inputs=["c4.loop", str(tmp_path / "abs.loop")])
    paths = corpus_service.resolve_inputs(entry, tmp_path / "suite")
    assert paths[0] == tmp_path / "suite" / "c4.loop"
    assert paths[1] == tmp_path / "abs.loop"
