from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

HOLDS = "holds"
VIOLATED = "violated"


@dataclass(frozen=True)
class AuditReport:
    """Outcome of probing one property.

    A violated report always carries a witness: a JSON-friendly dict holding
    everything needed to replay the failing probe on its own.
    """

    property: str
    verdict: str
    probes: int
    witness: Optional[dict[str, Any]] = field(default=None)

    def __post_init__(self):
        if self.verdict not in (HOLDS, VIOLATED):
            raise ValueError(f"verdict must be {HOLDS!r} or {VIOLATED!r}")
        if self.verdict == VIOLATED and not self.witness:
            raise ValueError("a violated report needs a witness")

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"property": self.property, "verdict": self.verdict,
                               "probes": self.probes}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def merge_reports(prop: str, reports) -> AuditReport:
    """Fold reports in order; the first violation's witness wins."""
    probes = 0
    witness = None
    for rep in reports:
        probes += rep.probes
        if witness is None and not rep.holds:
            witness = rep.witness
    return AuditReport(prop, VIOLATED if witness else HOLDS, probes, witness)
