"""
Cayley Routes - CLI verbs for generalized Cayley algebras
"""

import argparse

from triality.routes.router import CommandRouter, arg, guarded, run_and_emit
from triality.services.corpus_service import parse_params, write_cayley
from triality.services.malcev_service import build_cayley

router = CommandRouter("cayley", help="Cayley algebras O(a,b,c), o(O,n) and its triality")


@router.command("build", help="build O(a,b,c) and check o(O,n) with its triality", args=[
    arg("--params", default="-1,-1,-1", help="three nonzero rationals a,b,c"),
    arg("--out", help="also write the Cayley JSON file"),
])
@guarded
def build(args: argparse.Namespace) -> int:
    if args.out:
        write_cayley(args.out, build_cayley(*parse_params(args.params)))
    return run_and_emit("cayley.build", [], args)
