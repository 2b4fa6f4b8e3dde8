"""
Describe Routes - file description and the report schema
"""

import argparse

from triality.models.schemas import Report
from triality.routes.router import CommandRouter, arg, emit_json, guarded
from triality.services.corpus_service import describe as describe_file
from triality.utils.constants import ExitCodes

router = CommandRouter("describe", help="type, size and applicable checks of a corpus file")
schema_router = CommandRouter("schema", help="print the JSON schema of verification reports")


@router.command(None, help="describe a corpus file", args=[arg("file")])
@guarded
def describe(args: argparse.Namespace) -> int:
    info = describe_file(args.file)
    if args.json:
        emit_json(info, None)
    else:
        sizes = ", ".join(f"{k} {info[k]}" for k in ("order", "dim", "checks") if k in info)
        print(f"{info['type']}, {sizes}, checks: {', '.join(info['applicable'])}")
    return ExitCodes.SUCCESS


@schema_router.command(None, help="print the report JSON schema")
def schema(args: argparse.Namespace) -> int:
    emit_json(Report.model_json_schema(), None)
    return ExitCodes.SUCCESS
