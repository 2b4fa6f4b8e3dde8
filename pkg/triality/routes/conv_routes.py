"""
Conv Routes - CLI verbs for convolution loops and Atp_C(U)
"""

import argparse

from triality.routes.router import CommandRouter, arg, run_and_emit

router = CommandRouter("conv", help="group-like coalgebras C: Mor(C, FQ) and Atp_C(FQ)")

CONV_ARGS = [
    arg("--points", type=int, default=1, help="points of the group-like coalgebra"),
    arg("--loop", required=True, help="Moufang loop file"),
]


@router.command("loop", help="the convolution loop Mor(C, FQ)", args=CONV_ARGS)
def loop(args: argparse.Namespace) -> int:
    return run_and_emit("conv.loop", [args.loop], args)


@router.command("triality", help="triality of Atp_C(FQ) on canonical elements and seeded products",
                args=CONV_ARGS)
def triality(args: argparse.Namespace) -> int:
    return run_and_emit("conv.triality", [args.loop], args)
