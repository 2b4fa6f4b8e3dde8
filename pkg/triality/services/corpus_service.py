"""
Corpus Service - input files, the bundled corpus and file description

This service handles reading and writing every input format (loop text,
triality-group JSON, structure constants, Lie algebras with triality, Cayley
parameters, manifests), generating the bundled corpus, and describing a file
together with the checks that apply to it.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ValidationError

from triality.models.schemas import (
    CayleyFile,
    LieTrialityFile,
    Manifest,
    ManifestEntry,
    StructureConstantsFile,
    TrialityGroupFile,
)
from triality.services.gtriality_service import (
    TrialityGroup,
    inversion_fixture_c4,
    triality_group_from_table,
    wreath_cube,
)
from triality.services.loop_service import (
    FiniteLoop,
    chein_loop,
    cyclic_group,
    loop_to_text,
    nonmoufang_loop,
    octonion_unit_loop,
    parse_loop_text,
    symmetric_group_s3,
)
from triality.services.malcev_service import (
    CayleyAlgebra,
    LieWithTriality,
    StructureConstants,
    build_cayley,
    malcev_bracket,
    nonabelian_2d,
    ortho_lie,
    sl2,
    triality_autos_o,
    wreath_lie,
)
from triality.services.qcore_service import QMatrix
from triality.utils.constants import CorpusFiles, Messages
from triality.utils.errors import FormatError
from triality.utils.helpers import bytes_digest, format_rational, parse_rational, setup_logger

# Setup logging
logger = setup_logger(__name__)

PathLike = Union[str, Path]

# Kinds recognised by detect_format
LOOP = "loop"
TRIALITY_GROUP = "triality-group"
STRUCTURE_CONSTANTS = "structure-constants"
LIE_TRIALITY = "lie-triality"
CAYLEY = "cayley"
MANIFEST = "manifest"

APPLICABLE_CHECKS = {
    LOOP: ["loop.check", "loop.doro", "atp.compute", "atp.mloop", "atp.psi", "atp.psaut",
           "hopf.multalg", "conv.loop", "conv.triality"],
    TRIALITY_GROUP: ["group.check", "group.mloop", "group.center", "group.embed", "hopf.check", "hopf.mh"],
    STRUCTURE_CONSTANTS: ["malcev.check"],
    LIE_TRIALITY: ["lie.triality-check", "env.triality-check", "env.action-check"],
    CAYLEY: ["cayley.build", "malcev.liefy", "env.mh"],
    MANIFEST: ["suite.run"],
}


def file_digest(*paths: PathLike) -> str:
    data = b"".join(Path(p).read_bytes() for p in paths)
    return bytes_digest(data)


def params_digest(params: Mapping[str, Any]) -> str:
    return bytes_digest(json.dumps(params, sort_keys=True, default=str).encode("utf-8"))


def _load_model(path: PathLike, model: type) -> Any:
    text = Path(path).read_text()
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(p) for p in first.get("loc", ()))
        raise FormatError(f"{Path(path).name}: {location or 'file'}: {first['msg']}") from e


def _dump_model(path: PathLike, model: BaseModel) -> Path:
    path = Path(path)
    path.write_text(model.model_dump_json(indent=2, exclude_none=True) + "\n")
    return path


# Loops

def read_loop(path: PathLike) -> FiniteLoop:
    path = Path(path)
    return parse_loop_text(path.read_text(), path.stem)


def write_loop(path: PathLike, q: FiniteLoop) -> Path:
    path = Path(path)
    path.write_text(loop_to_text(q))
    return path


# Triality groups

def triality_group_to_file(g: TrialityGroup) -> TrialityGroupFile:
    return TrialityGroupFile(
        order=g.group.order,
        table=[[v + 1 for v in row] for row in g.group.rows()],
        rho=[v + 1 for v in g.rho_perm],
        sigma=[v + 1 for v in g.sigma_perm],
        name=g.name,
    )


def read_triality_group(path: PathLike) -> TrialityGroup:
    data = _load_model(path, TrialityGroupFile)
    table = [[v - 1 for v in row] for row in data.table]
    return triality_group_from_table(
        table, [v - 1 for v in data.rho], [v - 1 for v in data.sigma], data.name or Path(path).stem
    )


def write_triality_group(path: PathLike, g: TrialityGroup) -> Path:
    return _dump_model(path, triality_group_to_file(g))


# Structure constants

def _bracket_entries(sc: StructureConstants) -> List[List[Any]]:
    return [
        [i + 1, j + 1, [[k + 1, format_rational(c)] for k, c in sorted(terms.items())]]
        for i, j, terms in sc.entries()
    ]


def _structure_from_file(data: StructureConstantsFile, name: str) -> StructureConstants:
    entries = []
    for i, j, terms in data.bracket:
        entries.append((i - 1, j - 1, {int(k) - 1: parse_rational(c) for k, c in terms}))
    return StructureConstants.from_bracket_entries(data.dim, entries, name=name)


def structure_constants_to_file(sc: StructureConstants) -> StructureConstantsFile:
    return StructureConstantsFile(dim=sc.dim, bracket=_bracket_entries(sc), name=sc.name)


def read_structure_constants(path: PathLike) -> StructureConstants:
    data = _load_model(path, StructureConstantsFile)
    return _structure_from_file(data, data.name or Path(path).stem)


def write_structure_constants(path: PathLike, sc: StructureConstants) -> Path:
    return _dump_model(path, structure_constants_to_file(sc))


def _matrix_text(m: QMatrix) -> List[List[str]]:
    return [[format_rational(a) for a in row] for row in m.entries]


def _matrix_from_text(rows: List[List[str]]) -> QMatrix:
    return QMatrix([[parse_rational(a) for a in row] for row in rows])


def lie_triality_to_file(g: LieWithTriality) -> LieTrialityFile:
    return LieTrialityFile(
        dim=g.dim,
        bracket=_bracket_entries(g.bracket),
        rho=_matrix_text(g.rho),
        sigma=_matrix_text(g.sigma),
        name=g.name,
    )


def read_lie_triality(path: PathLike) -> LieWithTriality:
    data = _load_model(path, LieTrialityFile)
    name = data.name or Path(path).stem
    sc = _structure_from_file(data, name)
    return LieWithTriality(sc, _matrix_from_text(data.rho), _matrix_from_text(data.sigma), name)


def write_lie_triality(path: PathLike, g: LieWithTriality) -> Path:
    return _dump_model(path, lie_triality_to_file(g))


# Cayley algebras

def parse_params(text: str) -> Tuple[Any, Any, Any]:
    """'a,b,c' with rational entries"""
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 3:
        raise FormatError(f"expected three Cayley parameters, got {text!r}")
    return tuple(parse_rational(p) for p in parts)


def cayley_to_file(o: CayleyAlgebra) -> CayleyFile:
    product = [
        [i + 1, j + 1, [[k + 1, format_rational(c)] for k, c in sorted(terms.items())]]
        for i, j, terms in o.structure.entries()
    ]
    return CayleyFile(params=[format_rational(p) for p in o.params], dim=o.dim, product=product, name=o.name)


def read_cayley(path: PathLike) -> CayleyAlgebra:
    """Rebuilds from the parameters; a stored product table must match the rebuilt one"""
    data = _load_model(path, CayleyFile)
    o = build_cayley(*(parse_rational(p) for p in data.params))
    if data.product and cayley_to_file(o).product != data.product:
        raise FormatError(f"{Path(path).name}: product table does not match the parameters")
    return o


def write_cayley(path: PathLike, o: CayleyAlgebra) -> Path:
    return _dump_model(path, cayley_to_file(o))


# Manifests

def read_manifest(path: PathLike) -> Manifest:
    return _load_model(path, Manifest)


def write_manifest(path: PathLike, manifest: Manifest) -> Path:
    return _dump_model(path, manifest)


# Format detection and description

def detect_format(path: PathLike) -> str:
    path = Path(path)
    text = path.read_text()
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        return LOOP
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(raw, dict):
        raise FormatError(Messages.UNKNOWN_FORMAT)
    if "checks" in raw:
        return MANIFEST
    if "table" in raw:
        return TRIALITY_GROUP
    if "params" in raw:
        return CAYLEY
    if "rho" in raw:
        return LIE_TRIALITY
    if "bracket" in raw:
        return STRUCTURE_CONSTANTS
    raise FormatError(Messages.UNKNOWN_FORMAT)


def describe(path: PathLike) -> Dict[str, Any]:
    """Type, size and applicable checks of a corpus file"""
    kind = detect_format(path)
    info: Dict[str, Any] = {"file": str(path), "kind": kind}
    if kind == LOOP:
        q = read_loop(path)
        info.update(type="FiniteLoop", order=q.order)
    elif kind == TRIALITY_GROUP:
        g = read_triality_group(path)
        info.update(type="TrialityGroup", order=g.order)
    elif kind == STRUCTURE_CONSTANTS:
        sc = read_structure_constants(path)
        info.update(type="StructureConstants", dim=sc.dim, anticommutative=sc.is_anticommutative())
    elif kind == LIE_TRIALITY:
        lie = read_lie_triality(path)
        info.update(type="LieWithTriality", dim=lie.dim)
    elif kind == CAYLEY:
        o = read_cayley(path)
        info.update(type="CayleyAlgebra", dim=o.dim, params=[format_rational(p) for p in o.params])
    else:
        manifest = read_manifest(path)
        info.update(type="Manifest", checks=len(manifest.checks))
    info["applicable"] = APPLICABLE_CHECKS[kind]
    return info


# Bundled corpus

def _entry(check: str, inputs: List[str], expect: str = "pass", **options: Any) -> ManifestEntry:
    return ManifestEntry(check=check, inputs=inputs, expect=expect, options=options)


def default_manifest() -> Manifest:
    """Every check of the acceptance suite over the generated files"""
    loops = [f"c{n}.loop" for n in range(2, 9)] + ["s3.loop", CorpusFiles.CHEIN12, CorpusFiles.O16]
    checks = [_entry("loop.check", [name]) for name in loops]
    checks.append(_entry("loop.check", [CorpusFiles.NONMOUFANG5], expect="fail"))
    checks += [_entry("loop.doro", [name]) for name in loops]
    checks += [
        _entry("group.check", [CorpusFiles.S3_WREATH]),
        _entry("group.check", [CorpusFiles.C4_INVERSION], expect="fail"),
        _entry("group.mloop", [CorpusFiles.S3_WREATH]),
        _entry("group.center", [CorpusFiles.S3_WREATH]),
        _entry("group.embed", [CorpusFiles.S3_WREATH]),
        _entry("atp.compute", [CorpusFiles.CHEIN12]),
        _entry("atp.mloop", [CorpusFiles.CHEIN12]),
        _entry("atp.psaut", [CorpusFiles.CHEIN12]),
        _entry("atp.psi", ["c4.loop"]),
        _entry("atp.psi", [CorpusFiles.CHEIN12]),
        _entry("cayley.build", [CorpusFiles.CAYLEY]),
        _entry("lie.triality-check", [CorpusFiles.ORTHO]),
        _entry("lie.triality-check", ["lie2wr.json"]),
        _entry("lie.triality-check", ["sl2wr.json"]),
        _entry("malcev.check", ["o0.json"]),
        _entry("malcev.liefy", [CorpusFiles.CAYLEY]),
        _entry("hopf.check", [CorpusFiles.S3_WREATH]),
        _entry("hopf.mh", [CorpusFiles.S3_WREATH]),
        _entry("hopf.multalg", [CorpusFiles.CHEIN12]),
        _entry("hopf.multalg", [CorpusFiles.O16]),
        _entry("hopf.doro-verify", ["c4.loop"]),
        _entry("hopf.doro-verify", [CorpusFiles.S3_WREATH]),
        _entry("hopf.doro-verify", ["c4.loop"], expect="fail", corrupt=True),
        _entry("env.triality-check", ["lie2wr.json"], degree=3),
        _entry("env.triality-check", [CorpusFiles.ORTHO], degree=2),
        _entry("env.action-check", ["lie2wr.json"], degree=3),
        _entry("env.mh", [CorpusFiles.CAYLEY], degree=3),
        _entry("conv.loop", [CorpusFiles.CHEIN12], points=2),
        _entry("conv.triality", [CorpusFiles.CHEIN12], points=1),
        _entry("conv.triality", ["c4.loop"], points=2),
    ]
    return Manifest(checks=checks)


def gen_corpus(outdir: PathLike) -> List[Path]:
    """Write the bundled structures and the suite manifest; output is deterministic"""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    for n in range(2, 9):
        written.append(write_loop(out / f"c{n}.loop", cyclic_group(n)))
    s3, _ = symmetric_group_s3()
    written.append(write_loop(out / "s3.loop", s3))
    written.append(write_loop(out / CorpusFiles.CHEIN12, chein_loop(s3)))
    written.append(write_loop(out / CorpusFiles.O16, octonion_unit_loop()))
    written.append(write_loop(out / CorpusFiles.NONMOUFANG5, nonmoufang_loop(5)))

    written.append(write_triality_group(out / CorpusFiles.S3_WREATH, wreath_cube(s3)))
    written.append(write_triality_group(out / CorpusFiles.C4_INVERSION, inversion_fixture_c4()))

    o = build_cayley(-1, -1, -1)
    written.append(write_cayley(out / CorpusFiles.CAYLEY, o))
    ortho_triality, _ = triality_autos_o(ortho_lie(o))
    written.append(write_lie_triality(out / CorpusFiles.ORTHO, ortho_triality))
    written.append(write_structure_constants(out / "o0.json", malcev_bracket(o)))
    written.append(write_lie_triality(out / "lie2wr.json", wreath_lie(nonabelian_2d())))
    written.append(write_lie_triality(out / "sl2wr.json", wreath_lie(sl2())))

    written.append(write_manifest(out / CorpusFiles.MANIFEST, default_manifest()))
    logger.info(f"Wrote {len(written)} corpus files to {out}")
    return written


def resolve_inputs(entry: ManifestEntry, base: Optional[Path]) -> List[Path]:
    """Relative paths resolve against the manifest directory"""
    paths = []
    for raw in entry.inputs:
        p = Path(raw)
        paths.append(p if p.is_absolute() or base is None else base / p)
    return paths
