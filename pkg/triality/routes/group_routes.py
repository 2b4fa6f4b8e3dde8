"""
Group Routes - CLI verbs for groups with triality
"""

import argparse

from triality.routes.router import CommandRouter, arg, run_and_emit

router = CommandRouter("group", help="groups with triality: predicate, M(G), S3-centre, embedding")


@router.command("check", help="S3 relations and the triality predicate", args=[arg("file")])
def check_group(args: argparse.Namespace) -> int:
    return run_and_emit("group.check", [args.file], args)


@router.command("mloop", help="the Moufang loop M(G) and its checks", args=[arg("file")])
def mloop(args: argparse.Namespace) -> int:
    return run_and_emit("group.mloop", [args.file], args)


@router.command("center", help="the S3-centre Z_S(G)", args=[arg("file")])
def center(args: argparse.Namespace) -> int:
    return run_and_emit("group.center", [args.file], args)


@router.command("embed", help="G -> Atp(M(G)) with kernel Z_S(G)", args=[arg("file")])
def embed(args: argparse.Namespace) -> int:
    return run_and_emit("group.embed", [args.file], args)
