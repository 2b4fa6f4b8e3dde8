"""
Utility functions for the triality toolkit
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from typing import Any, Dict, Iterator, Mapping, Optional, Tuple, TypedDict

import numpy as np
from sympy import QQ

from triality.config import config
from triality.utils.errors import FormatError


def setup_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """Setup a logger with consistent formatting"""
    logger = logging.getLogger(name)

    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(level if level is not None else config.log_level())

    return logger


class CheckResult(TypedDict):
    passed: bool
    witness: Optional[Dict[str, Any]]
    counts: Dict[str, int]
    details: Dict[str, Any]


def check_passed(counts: Optional[Dict[str, int]] = None, **details: Any) -> CheckResult:
    """Format a consistent passing result"""
    return {"passed": True, "witness": None, "counts": dict(counts or {}), "details": details}


def check_failed(
    witness: Dict[str, Any], counts: Optional[Dict[str, int]] = None, **details: Any
) -> CheckResult:
    """Format a consistent failing result; a failure always carries its witness"""
    return {"passed": False, "witness": witness, "counts": dict(counts or {}), "details": details}


def check_bool(ok: bool, witness: Optional[Dict[str, Any]], **details: Any) -> CheckResult:
    return check_passed(**details) if ok else check_failed(witness or {}, **details)


def merge_results(parts: Mapping[str, CheckResult]) -> CheckResult:
    """Combine named sub-results; the first failing part supplies the witness"""
    counts: Dict[str, int] = {}
    status = {}
    witness = None
    for name, part in parts.items():
        for key, value in part["counts"].items():
            counts[key] = counts.get(key, 0) + value
        status[name] = "pass" if part["passed"] else "fail"
        if not part["passed"] and witness is None:
            inner = dict(part["witness"] or {})
            sub = inner.pop("part", None)
            witness = {"part": name, **inner}
            if sub is not None:
                nested = inner.get("subpart")
                witness["subpart"] = sub if nested is None else f"{sub}.{nested}"
    if witness is None:
        return check_passed(counts, parts=status)
    return check_failed(witness, counts, parts=status)


def is_exhaustive(n: int, arity: int, limit: Optional[int] = None) -> bool:
    limit = config.EXHAUSTIVE_LIMIT if limit is None else limit
    return n ** arity <= limit


def index_tuples(
    n: int,
    arity: int,
    seed: int,
    limit: Optional[int] = None,
    samples: Optional[int] = None,
) -> Iterator[Tuple[int, ...]]:
    """All arity-tuples over range(n) when there are at most `limit` of them, else seeded samples"""
    if is_exhaustive(n, arity, limit):
        yield from itertools.product(range(n), repeat=arity)
        return
    samples = config.SAMPLES if samples is None else samples
    rng = np.random.default_rng(seed)
    for row in rng.integers(0, n, size=(samples, arity)):
        yield tuple(int(v) for v in row)


def format_rational(value: Any) -> str:
    """Text form p/q, with q omitted when 1"""
    value = QQ.convert(value)
    num, den = QQ.numer(value), QQ.denom(value)
    return str(num) if den == 1 else f"{num}/{den}"


def parse_rational(text: Any) -> Any:
    """Parse an int or a 'p/q' string into a QQ element"""
    if isinstance(text, int):
        return QQ(text)
    try:
        raw = str(text).strip()
        if '/' in raw:
            num, den = raw.split('/', 1)
            if int(den) == 0:
                raise FormatError(f"zero denominator in {raw!r}")
            return QQ(int(num), int(den))
        return QQ(int(raw))
    except ValueError as e:
        raise FormatError(f"not a rational number: {text!r}") from e


def one_based(value: Any) -> Any:
    """Shift indices inside a witness payload to the 1-based user convention"""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value + 1
    if isinstance(value, (list, tuple)):
        return [one_based(v) for v in value]
    return value


def bytes_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def text_digest(text: str) -> str:
    return bytes_digest(text.encode("utf-8"))


def jsonable(value: Any) -> Any:
    """Witness and detail payloads as plain JSON values; rationals become 'p/q' strings"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float):
        return value
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    try:
        return format_rational(value)
    except Exception:
        return str(value)
