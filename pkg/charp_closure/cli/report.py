import hashlib
from typing import Any

from pydantic import BaseModel, Field

from charp_closure import __version__
from charp_closure.src.verdicts import Status

SCHEMA_VERSION = "charp-report/1"

STANDING_ASSUMPTION = (
    "Local rings are modeled by graded or affine quotients S/J of a polynomial ring over a "
    "field of characteristic p, with m the ideal of the variables. UNKNOWN means undecided "
    "within the explored exponent range, never false."
)


def jsonable(value: Any) -> Any:
    """Strings, numbers, booleans, lists and dicts only; everything else prints as text"""
    if isinstance(value, Status):
        return value.value
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    return str(value)


class ReportEntry(BaseModel):
    index: int
    name: str
    scenario: str | None = None
    inputs: list[str] = Field(default_factory=list)
    status: Status
    expected: Status | None = None
    certificate: dict[str, Any] = Field(default_factory=dict)
    details: dict[str, Any] = Field(default_factory=dict)
    narrative: str = ""
    certificate_verified: bool = True
    elapsed_ms: float = 0.0

    @property
    def matched(self) -> bool:
        return self.expected is None or self.status == self.expected


class Report(BaseModel):
    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__
    config: dict[str, Any] = Field(default_factory=dict)
    assumption: str = STANDING_ASSUMPTION
    entries: list[ReportEntry] = Field(default_factory=list)

    @property
    def mismatches(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.matched or not e.certificate_verified]

    @property
    def exit_code(self) -> int:
        """0 all expected, 1 mismatch or failed replay, 3 resource limit"""
        if self.mismatches:
            return 1
        if any(e.status is Status.RESOURCE_LIMIT for e in self.entries):
            return 3
        return 0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def digest(self) -> str:
        """SHA-256 of the canonical JSON without timing fields"""
        canonical = self.model_dump_json(exclude={"entries": {"__all__": {"elapsed_ms"}}})
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_json())
