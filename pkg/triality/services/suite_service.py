"""
Suite Service - named checks, reports and manifest runs

This service handles the registry of named checks shared by the command line
and the suite runner, wraps every check into a Report (timing, digest, seed,
error capture), and runs a manifest into per-check report files plus a summary.
"""

import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from triality import __version__
from triality.config import config
from triality.models.schemas import Manifest, Report, SuiteEntry, SuiteSummary
from triality.services import corpus_service
from triality.services.autotopy_service import (
    AutotopyGroup,
    check_atp_triality,
    m_of_atp,
    pseudoautomorphism_group,
    psi_iso,
    w_group,
)
from triality.services.conv_service import (
    GroupLikeCoalgebra,
    atpc_triality_checks,
    check_conv_algebra,
    convolution_loop,
)
from triality.services.envelope_service import (
    check_action_identity,
    check_envelope_relations,
    check_ug_triality,
    mh_envelope,
    p_span_check,
)
from triality.services.gtriality_service import (
    TrialityGroup,
    check_s3_relations,
    check_section_independence,
    check_triality,
    embed_into_autotopy,
    moufang_from_triality,
    s3_center,
)
from triality.services.hopf_service import (
    atp_target_assignment,
    check_generator_independence,
    check_hopf_axioms,
    check_hopf_triality,
    check_mh_matches_mloop,
    check_mult_alg_identities,
    group_algebra,
    loop_algebra,
    mh_subalgebra,
    mloop_target_assignment,
    swap_assignment,
    verify_doro_target,
)
from triality.services.loop_service import (
    associativity_witness,
    check_inverse_property,
    check_moufang,
    verify_doro_relations,
    verify_doro_symmetry,
)
from triality.services.malcev_service import (
    build_cayley,
    check_lie_triality,
    check_malcev,
    eigen_one_criterion,
    lie_of_malcev,
    nalt,
    ortho_lie,
    triality_autos_o,
    validate_lie_triality,
)
from triality.utils.constants import CheckStatus, ExitCodes, Limits, Messages
from triality.utils.errors import TrialityError, UnknownCheckError
from triality.utils.helpers import (
    CheckResult,
    check_failed,
    check_passed,
    jsonable,
    merge_results,
    setup_logger,
)

# Setup logging
logger = setup_logger(__name__)

CheckRunner = Callable[[Sequence[Path], Mapping[str, Any]], CheckResult]

CHECKS: Dict[str, CheckRunner] = {}


def register(name: str) -> Callable[[CheckRunner], CheckRunner]:
    def decorator(fn: CheckRunner) -> CheckRunner:
        CHECKS[name] = fn
        return fn
    return decorator


def _single(inputs: Sequence[Path], what: str) -> Path:
    if len(inputs) != 1:
        raise TrialityError(f"expected one {what} file, got {len(inputs)}")
    return inputs[0]


def _seed(options: Mapping[str, Any]) -> int:
    return int(options.get("seed", config.SEED))


def _expect(ok: bool, witness: Dict[str, Any], **details: Any) -> CheckResult:
    return check_passed(**details) if ok else check_failed(witness, **details)


# loops

@register("loop.check")
def run_loop_check(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    parts = {"moufang": check_moufang(q)}
    if parts["moufang"]["passed"]:
        parts["inverse_property"] = check_inverse_property(q)
    result = merge_results(parts)
    witness = associativity_witness(q)
    result["details"].update(
        order=q.order,
        associative=witness is None,
        associator=None if witness is None else [v + 1 for v in witness],
    )
    return result


@register("loop.doro")
def run_loop_doro(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    result = merge_results({"relations": verify_doro_relations(q), "symmetry": verify_doro_symmetry(q)})
    result["details"].update(order=q.order, families=Limits.DORO_FAMILIES)
    return result


# groups with triality

def _group(inputs: Sequence[Path]) -> TrialityGroup:
    return corpus_service.read_triality_group(_single(inputs, "triality group"))


@register("group.check")
def run_group_check(inputs, options) -> CheckResult:
    g = _group(inputs)
    result = merge_results({"s3_relations": check_s3_relations(g), "triality": check_triality(g)})
    result["details"].update(order=g.order)
    return result


@register("group.mloop")
def run_group_mloop(inputs, options) -> CheckResult:
    g = _group(inputs)
    mres = moufang_from_triality(g)
    result = merge_results({
        "moufang": mres.moufang,
        "doro": verify_doro_relations(mres.loop),
        "section_independence": check_section_independence(g),
    })
    result["details"].update(order=mres.loop.order, carrier=[g.describe(m) for m in mres.carrier],
                             table=[[v + 1 for v in row] for row in mres.loop.rows()])
    return result


@register("group.center")
def run_group_center(inputs, options) -> CheckResult:
    g = _group(inputs)
    center = s3_center(g)
    result = _expect(center.normal, {"reason": "Z_S(G) is not a normal subgroup"},
                     center=[g.describe(z) for z in center.elements])
    result["counts"]["center"] = len(center.elements)
    return result


@register("group.embed")
def run_group_embed(inputs, options) -> CheckResult:
    g = _group(inputs)
    return embed_into_autotopy(g).result


# Atp(Q), PsAut(Q), W(Q)

@register("atp.compute")
def run_atp_compute(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    atp = AutotopyGroup(q)
    result = check_atp_triality(q, atp, seed=_seed(options))
    result["details"].update(loop_order=q.order)
    return result


@register("atp.mloop")
def run_atp_mloop(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    res = m_of_atp(q)
    res.result["details"].update(order=res.mloop.loop.order)
    return res.result


@register("atp.psaut")
def run_atp_psaut(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    atp = AutotopyGroup(q)
    res = pseudoautomorphism_group(q, atp.elements())
    res.result["details"].update(psaut=len(res.elements), atp=atp.order, loop_order=q.order)
    return res.result


@register("atp.psi")
def run_atp_psi(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    seed = _seed(options)
    atp = AutotopyGroup(q)
    w = w_group(q, seed=seed)
    parts = {"w_group": w.result, "psi": psi_iso(q, atp, w.group, seed).result}
    result = merge_results(parts)
    result["details"].update(atp=atp.order, w=w.group.order)
    return result


# Cayley algebras, Lie algebras with triality, Malcev algebras

def _cayley(inputs: Sequence[Path], options: Mapping[str, Any]):
    """From a Cayley file, else from the params option (default -1,-1,-1)"""
    if inputs:
        return corpus_service.read_cayley(_single(inputs, "Cayley"))
    return build_cayley(*corpus_service.parse_params(options.get("params", "-1,-1,-1")))


@register("cayley.build")
def run_cayley_build(inputs, options) -> CheckResult:
    o = _cayley(inputs, options)
    ortho = ortho_lie(o)
    triality, autos = triality_autos_o(ortho)
    parts = {
        "ortho": ortho.result,
        "der_dim": _expect(len(ortho.der) == Limits.DER_DIM, {"der_dim": len(ortho.der)}),
        "ortho_dim": _expect(len(ortho.basis) == Limits.ORTHO_DIM, {"dim": len(ortho.basis)}),
        "triality_autos": autos,
        "lie_triality": check_lie_triality(triality),
        "eigen_one": eigen_one_criterion(triality),
    }
    result = merge_results(parts)
    result["details"].update(algebra=o.name, der_dim=len(ortho.der), dim=len(ortho.basis))
    return result


@register("lie.triality-check")
def run_lie_triality(inputs, options) -> CheckResult:
    g = corpus_service.read_lie_triality(_single(inputs, "Lie algebra"))
    result = merge_results({
        "valid": validate_lie_triality(g),
        "triality": check_lie_triality(g),
        "eigen_one": eigen_one_criterion(g),
    })
    result["details"].update(dim=g.dim, name=g.name)
    return result


@register("malcev.check")
def run_malcev_check(inputs, options) -> CheckResult:
    sc = corpus_service.read_structure_constants(_single(inputs, "structure constants"))
    result = check_malcev(sc)
    result["details"].update(dim=sc.dim, nalt_dim=nalt(sc).dim)
    return result


def _lie_of_malcev(inputs: Sequence[Path], options: Mapping[str, Any]):
    return lie_of_malcev(_cayley(inputs, options))


@register("malcev.liefy")
def run_malcev_liefy(inputs, options) -> CheckResult:
    lom = _lie_of_malcev(inputs, options)
    result = dict(lom.result)
    result["details"] = dict(lom.result["details"], minus_dim=lom.minus.dim, plus_dim=lom.plus.dim)
    return result


# Hopf algebras

@register("hopf.check")
def run_hopf_check(inputs, options) -> CheckResult:
    g = _group(inputs)
    h = group_algebra(g)
    parts = {
        "hopf_axioms": check_hopf_axioms(h, seed=_seed(options)),
        "triality": check_hopf_triality(h),
        "generator_independence": check_generator_independence(h),
    }
    result = merge_results(parts)
    result["details"].update(dim=g.order)
    return result


@register("hopf.mh")
def run_hopf_mh(inputs, options) -> CheckResult:
    g = _group(inputs)
    res = mh_subalgebra(group_algebra(g), seed=_seed(options))
    result = merge_results({"mh": res.result, "matches_mloop": check_mh_matches_mloop(g)})
    result["details"].update(dim=res.p_image.dim)
    return result


@register("hopf.multalg")
def run_hopf_multalg(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    result = check_mult_alg_identities(loop_algebra(q))
    result["details"].update(order=q.order)
    return result


@register("hopf.doro-verify")
def run_hopf_doro_verify(inputs, options) -> CheckResult:
    """Every input in turn; the first failing file supplies the witness"""
    if not inputs:
        raise TrialityError("expected at least one loop or triality group file")
    results = [(path, _doro_verify_one(path, options)) for path in inputs]
    if len(results) == 1:
        return results[0][1]
    failing = next(((p, r) for p, r in results if not r["passed"]), None)
    files = {p.name: r["details"] for p, r in results}
    if failing is not None:
        path, result = failing
        return check_failed({"file": path.name, **result["witness"]}, files=files)
    return check_passed({"files": len(results)}, files=files)


def _doro_verify_one(path: Path, options: Mapping[str, Any]) -> CheckResult:
    """F[Q] into F[Atp(Q)] for a loop file, F[M(G)] into F[G] for a triality-group file"""
    if corpus_service.detect_format(path) == corpus_service.LOOP:
        q = corpus_service.read_loop(path)
        u = loop_algebra(q)
        atp = AutotopyGroup(q)
        target = group_algebra(atp)
        phi = atp_target_assignment(q, atp)
    else:
        g = corpus_service.read_triality_group(path)
        u, phi = mloop_target_assignment(g)
        target = group_algebra(g)
    if options.get("corrupt"):
        phi = swap_assignment(phi, 0, 1)
    result = verify_doro_target(u, target, phi)
    result["details"].update(source=u.name, target=target.name, corrupted=bool(options.get("corrupt")))
    return result


# Enveloping algebras

def _degree(options: Mapping[str, Any]) -> Optional[int]:
    degree = options.get("degree")
    return None if degree is None else int(degree)


@register("env.triality-check")
def run_env_triality(inputs, options) -> CheckResult:
    g = corpus_service.read_lie_triality(_single(inputs, "Lie algebra"))
    degree = _degree(options)
    parts = {
        "ug_triality": check_ug_triality(g, degree),
        "p_span": p_span_check(g, min(degree, 2) if degree is not None else None),
    }
    result = merge_results(parts)
    result["details"].update(dim=g.dim, degree=parts["ug_triality"]["details"].get("degree"))
    return result


@register("env.action-check")
def run_env_action(inputs, options) -> CheckResult:
    g = corpus_service.read_lie_triality(_single(inputs, "Lie algebra"))
    result = check_action_identity(g, _degree(options))
    result["details"].update(dim=g.dim)
    return result


@register("env.mh")
def run_env_mh(inputs, options) -> CheckResult:
    lom = _lie_of_malcev(inputs, options)
    samples = options.get("samples")
    env = mh_envelope(lom, _degree(options), seed=_seed(options), samples=None if samples is None else int(samples))
    parts = {"slice": env.result, "relations": check_envelope_relations(lom)}
    return merge_results(parts)


# Convolution

@register("conv.loop")
def run_conv_loop(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    c = GroupLikeCoalgebra(int(options.get("points", 1)))
    res = convolution_loop(c, q)
    result = merge_results({"loop": res.result,
                            "conv_algebra": check_conv_algebra(c, q.order, seed=_seed(options))})
    result["details"].update(order=res.loop.order, points=c.points)
    return result


@register("conv.triality")
def run_conv_triality(inputs, options) -> CheckResult:
    q = corpus_service.read_loop(_single(inputs, "loop"))
    c = GroupLikeCoalgebra(int(options.get("points", 1)))
    samples = options.get("samples")
    report = atpc_triality_checks(c, q, None if samples is None else int(samples), _seed(options))
    return report.result


# Reports

def _digest(inputs: Sequence[Path], options: Mapping[str, Any]) -> str:
    if inputs:
        return corpus_service.file_digest(*inputs)
    return corpus_service.params_digest(options)


def run_check(name: str, inputs: Sequence[Path], options: Optional[Mapping[str, Any]] = None) -> Report:
    """Run one named check; input and cap errors become error reports"""
    options = dict(options or {})
    seed = _seed(options)
    if name not in CHECKS:
        raise UnknownCheckError(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
    try:
        digest = _digest(inputs, options)
    except OSError:
        digest = corpus_service.params_digest(options)
    start = time.perf_counter()
    try:
        result = CHECKS[name](list(inputs), options)
        status = CheckStatus.PASS if result["passed"] else CheckStatus.FAIL
        witness = jsonable(result["witness"]) if result["witness"] is not None else None
        if status == CheckStatus.FAIL and not witness:
            witness = {"reason": Messages.CHECK_FAILED}
        counts, details = result["counts"], jsonable(result["details"])
    except (TrialityError, OSError) as e:
        logger.error(f"{name} on {[str(p) for p in inputs]}: {e}")
        status, witness, counts = CheckStatus.ERROR, None, {}
        details = {"error": str(e), "type": type(e).__name__}
    except Exception as e:
        logger.error(f"Unexpected error in {name}: {e}")
        status, witness, counts = CheckStatus.ERROR, None, {}
        details = {"error": str(e), "type": type(e).__name__}
    elapsed = time.perf_counter() - start
    logger.info(f"{name}: {status} in {elapsed:.2f}s")
    return Report(
        check=name,
        status=status,
        witness=witness,
        counts={k: int(v) for k, v in counts.items()},
        details=details,
        timing_seconds=round(elapsed, 6),
        tool_version=__version__,
        input_digest=digest,
        seed=seed,
    )


def exit_code(reports: Sequence[Report]) -> int:
    if any(r.status == CheckStatus.ERROR for r in reports):
        return ExitCodes.USAGE_ERROR
    if any(r.status == CheckStatus.FAIL for r in reports):
        return ExitCodes.FAILURE
    return ExitCodes.SUCCESS


def _report_name(index: int, entry_check: str) -> str:
    return f"{index + 1:03d}-{entry_check.replace('.', '-')}.json"


def run_suite(manifest_path: Path, report_dir: Optional[Path] = None,
              overrides: Optional[Mapping[str, Any]] = None) -> Tuple[SuiteSummary, List[Report]]:
    """Run every manifest entry in order; an expected failure counts as success"""
    manifest: Manifest = corpus_service.read_manifest(manifest_path)
    base = Path(manifest_path).parent
    for entry in manifest.checks:
        if entry.check not in CHECKS:
            raise UnknownCheckError(f"unknown check {entry.check!r} in {manifest_path}")
    out = Path(report_dir) if report_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    summary = SuiteSummary(tool_version=__version__)
    reports: List[Report] = []
    for index, entry in enumerate(manifest.checks):
        options = {**entry.options, **(overrides or {})}
        inputs = corpus_service.resolve_inputs(entry, base)
        report = run_check(entry.check, inputs, options)
        reports.append(report)

        if report.status == CheckStatus.ERROR:
            outcome = CheckStatus.ERROR
            summary.errors += 1
        elif report.status == entry.expect == CheckStatus.FAIL:
            outcome = CheckStatus.EXPECTED_FAIL
            summary.expected_failures += 1
        elif report.status == entry.expect:
            outcome = CheckStatus.PASS
            summary.passed += 1
        else:
            outcome = CheckStatus.FAIL
            summary.failed += 1

        name = None
        if out is not None:
            name = _report_name(index, entry.check)
            (out / name).write_text(report.model_dump_json(indent=2) + "\n")
        summary.entries.append(SuiteEntry(check=entry.check, inputs=entry.inputs, expect=entry.expect,
                                          status=outcome, report=name))

    summary.timing_seconds = round(time.perf_counter() - start, 6)
    if out is not None:
        (out / "summary.json").write_text(summary.model_dump_json(indent=2) + "\n")
    logger.info(f"Suite {manifest_path}: {summary.passed} pass, {summary.expected_failures} expected-fail, "
                f"{summary.failed} fail, {summary.errors} error")
    return summary, reports


def suite_exit_code(summary: SuiteSummary) -> int:
    if summary.errors:
        return ExitCodes.USAGE_ERROR
    if summary.failed:
        return ExitCodes.FAILURE
    return ExitCodes.SUCCESS
