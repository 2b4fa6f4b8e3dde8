"""
Hopf Routes - CLI verbs for Hopf algebras with triality and Moufang-Hopf algebras
"""

import argparse

from triality.routes.router import CommandRouter, arg, run_and_emit

router = CommandRouter("hopf", help="group and loop algebras: Hopf triality, MH(H), Doro(U) targets")


@router.command("check", help="Hopf axioms and triality of F[G]", args=[arg("groupfile")])
def check(args: argparse.Namespace) -> int:
    return run_and_emit("hopf.check", [args.groupfile], args)


@router.command("mh", help="MH(F[G]) with the * product against F[M(G)]", args=[arg("groupfile")])
def mh(args: argparse.Namespace) -> int:
    return run_and_emit("hopf.mh", [args.groupfile], args)


@router.command("multalg", help="operator identities of the multiplication algebra of F[Q]",
                args=[arg("loopfile")])
def multalg(args: argparse.Namespace) -> int:
    return run_and_emit("hopf.multalg", [args.loopfile], args)


@router.command("doro-verify", help="Doro(U) relations in F[Atp(Q)] (loop files) or F[G] (group files)", args=[
    arg("files", nargs="+"),
    arg("--corrupt", action="store_true", default=None, help="swap two generator images"),
])
def doro_verify(args: argparse.Namespace) -> int:
    return run_and_emit("hopf.doro-verify", args.files, args)
