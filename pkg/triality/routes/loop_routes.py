"""
Loop Routes - CLI verbs for finite loops

This module handles:
- Moufang and inverse-property checks of a loop file
- The Doro relation block on the multiplication operators
- Generating Chein loops and the octonion unit loop
"""

import argparse

from triality.routes.router import CommandRouter, arg, guarded, run_and_emit
from triality.services.corpus_service import read_loop, write_loop
from triality.services.loop_service import chein_loop, loop_to_text, octonion_unit_loop
from triality.utils.constants import ExitCodes
from triality.utils.errors import TrialityError
from triality.utils.helpers import setup_logger

# Setup logging
logger = setup_logger(__name__)

router = CommandRouter("loop", help="finite loops: Moufang identities, Doro relations, generators")


@router.command("check", help="Moufang identities, with witnesses on failure", args=[arg("file")])
def check_loop(args: argparse.Namespace) -> int:
    return run_and_emit("loop.check", [args.file], args)


@router.command("doro", help="all Doro relation families on the multiplication operators", args=[arg("file")])
def doro(args: argparse.Namespace) -> int:
    return run_and_emit("loop.doro", [args.file], args)


@router.command("gen", help="generate a loop table", args=[
    arg("kind", choices=["chein", "o16"]),
    arg("--group", help="group table (loop text format) for the Chein construction"),
    arg("--out", help="output file; stdout when omitted"),
])
@guarded
def gen(args: argparse.Namespace) -> int:
    if args.kind == "chein":
        if not args.group:
            raise TrialityError("loop gen chein needs --group <file>")
        q = chein_loop(read_loop(args.group))
    else:
        q = octonion_unit_loop()
    if args.out:
        write_loop(args.out, q)
        logger.info(f"Wrote {q.name} of order {q.order} to {args.out}")
    else:
        print(loop_to_text(q), end="")
    return ExitCodes.SUCCESS
