"""
Malcev Routes - CLI verbs for Malcev algebras and Lie(m)
"""

import argparse

from triality.routes.router import CommandRouter, arg, emit_json, guarded, run_and_emit
from triality.services.corpus_service import lie_triality_to_file, parse_params
from triality.services.malcev_service import build_cayley, lie_of_malcev
from triality.utils.constants import ExitCodes

router = CommandRouter("malcev", help="Malcev identity, Nalt, and Lie(m) for m = O0")


@router.command("check", help="Malcev identity and the generalized alternative nucleus", args=[arg("scfile")])
def check(args: argparse.Namespace) -> int:
    return run_and_emit("malcev.check", [args.scfile], args)


@router.command("liefy", help="Lie(O0) with triality; --emit writes the Lie-with-triality JSON", args=[
    arg("--params", default="-1,-1,-1", help="Cayley parameters a,b,c"),
    arg("--emit", action="store_true", help="print the Lie algebra with triality instead of a report"),
    arg("--out", help="file for --emit; stdout when omitted"),
])
@guarded
def liefy(args: argparse.Namespace) -> int:
    if not args.emit:
        return run_and_emit("malcev.liefy", [], args)
    lom = lie_of_malcev(build_cayley(*parse_params(args.params)))
    emit_json(lie_triality_to_file(lom.triality).model_dump(exclude_none=True), args.out)
    return ExitCodes.SUCCESS if lom.result["passed"] else ExitCodes.FAILURE
