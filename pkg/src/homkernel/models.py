from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional


LICHTENBAUM_VIOLATION = "lichtenbaum-violation"
QUASI_VIOLATION = "quasi-violation"
TORRIGID_VIOLATION = "torrigid-violation"
EXHAUSTED = "exhausted"


@dataclass
class Witness:
    kind: str
    subject: str
    module_label: Optional[str] = None
    index: Optional[int] = None
    certificate: Dict[str, Any] = field(default_factory=dict)
    bounds: Dict[str, Any] = field(default_factory=dict)
    subject_module: Any = None
    module: Any = None

    @property
    def is_violation(self) -> bool:
        return self.kind != EXHAUSTED

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind, "subject": self.subject, "bounds": dict(self.bounds)}
        if self.is_violation:
            payload["module"] = self.module_label
            payload["certificate"] = self.certificate
            if self.index is not None:
                payload["index"] = self.index
        else:
            payload["note"] = "no counterexample in family"
        return payload


@dataclass
class BurchReport:
    ideal: str
    is_burch: bool
    m_colon: List[str]
    i_m: List[str]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ArtinReesStep:
    n: int
    passed: bool
    tor1: Dict[str, Any]
    intersection_equal: bool = True


@dataclass
class ArtinReesReport:
    module: str
    sequence: List[str]
    steps: List[ArtinReesStep]

    @property
    def passed(self) -> bool:
        return all(step.passed for step in self.steps)

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["passed"] = self.passed
        return payload


@dataclass
class Cor55Report:
    pd: int
    tor1_socle_nonzero: bool
    n_socle_nonzero: bool
    m_free: bool

    @property
    def right_side(self) -> bool:
        return self.n_socle_nonzero and not self.m_free

    @property
    def holds(self) -> bool:
        return self.tor1_socle_nonzero == self.right_side

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload.update({"right_side": self.right_side, "holds": self.holds})
        return payload


@dataclass
class BurchSharpEntry:
    module: str
    hypothesis_met: bool
    pd: Optional[int] = None
    passed: bool = True
    note: str = ""


@dataclass
class BurchSharpReport:
    ideal: str
    t: int
    bound: int
    entries: List[BurchSharpEntry]

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["passed"] = self.passed
        return payload


@dataclass
class MpowerEntry:
    n: int
    witness: Witness

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "witness": self.witness.to_dict()}


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")
