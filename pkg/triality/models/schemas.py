from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from triality.utils.constants import CheckStatus

Status = Literal["pass", "fail", "error"]


def _check_square(table: List[List[int]], n: int) -> None:
    if len(table) != n:
        raise ValueError(f"table has {len(table)} rows, expected {n}")
    for i, row in enumerate(table):
        if len(row) != n:
            raise ValueError(f"row {i + 1} has {len(row)} entries, expected {n}")
        for v in row:
            if not 1 <= v <= n:
                raise ValueError(f"row {i + 1} has entry {v} outside 1..{n}")


class TrialityGroupFile(BaseModel):
    """Group table with rho, sigma as 1-based permutations"""
    order: int = Field(gt=0)
    table: List[List[int]]
    rho: List[int]
    sigma: List[int]
    name: Optional[str] = None

    @model_validator(mode="after")
    def check_shapes(self):
        _check_square(self.table, self.order)
        for label, perm in (("rho", self.rho), ("sigma", self.sigma)):
            if sorted(perm) != list(range(1, self.order + 1)):
                raise ValueError(f"{label} is not a permutation of 1..{self.order}")
        return self


class BracketEntry(BaseModel):
    """[e_i, e_j] = sum c e_k as [i, j, [[k, "p/q"], ...]]"""
    i: int
    j: int
    terms: List[List[Any]]

    @classmethod
    def from_list(cls, raw: List[Any]) -> "BracketEntry":
        if len(raw) != 3:
            raise ValueError(f"bracket entry {raw!r} must have three items")
        return cls(i=raw[0], j=raw[1], terms=raw[2])


class StructureConstantsFile(BaseModel):
    dim: int = Field(gt=0)
    bracket: List[List[Any]] = []
    name: Optional[str] = None

    @field_validator("bracket")
    @classmethod
    def check_entries(cls, value: List[List[Any]]) -> List[List[Any]]:
        for raw in value:
            entry = BracketEntry.from_list(raw)
            for term in entry.terms:
                if len(term) != 2:
                    raise ValueError(f"term {term!r} must be [k, \"p/q\"]")
        return value

    @model_validator(mode="after")
    def check_indices(self):
        for raw in self.bracket:
            entry = BracketEntry.from_list(raw)
            indices = [entry.i, entry.j] + [int(t[0]) for t in entry.terms]
            for k in indices:
                if not 1 <= k <= self.dim:
                    raise ValueError(f"index {k} outside 1..{self.dim}")
        return self


class LieTrialityFile(StructureConstantsFile):
    """Structure constants plus rho, sigma as matrices of "p/q" strings (columns are images)"""
    rho: List[List[str]]
    sigma: List[List[str]]

    @model_validator(mode="after")
    def check_matrices(self):
        for label, m in (("rho", self.rho), ("sigma", self.sigma)):
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise ValueError(f"{label} must be {self.dim} x {self.dim}")
        return self


class CayleyFile(BaseModel):
    """Cayley-Dickson parameters with the resulting product table"""
    params: List[str] = Field(min_length=3, max_length=3)
    dim: int = 8
    product: List[List[Any]] = []
    name: Optional[str] = None


class ManifestEntry(BaseModel):
    check: str
    inputs: List[str] = []
    expect: Literal["pass", "fail"] = CheckStatus.PASS
    options: Dict[str, Any] = {}


class Manifest(BaseModel):
    checks: List[ManifestEntry] = []


class Report(BaseModel):
    """One verification outcome; failures always carry a witness"""
    check: str
    status: Status
    witness: Optional[Dict[str, Any]] = None
    counts: Dict[str, int] = {}
    details: Dict[str, Any] = {}
    timing_seconds: float = 0.0
    tool_version: str
    input_digest: str
    seed: int

    @model_validator(mode="after")
    def fail_has_witness(self):
        if self.status == CheckStatus.FAIL and not self.witness:
            raise ValueError("a failing report must carry a witness")
        return self


class SuiteEntry(BaseModel):
    check: str
    inputs: List[str]
    expect: str
    status: str
    report: Optional[str] = None


class SuiteSummary(BaseModel):
    passed: int = 0
    failed: int = 0
    expected_failures: int = 0
    errors: int = 0
    entries: List[SuiteEntry] = []
    timing_seconds: float = 0.0
    tool_version: str
