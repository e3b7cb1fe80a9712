"""Verdicts shared by the monotonicity analyzer and the compatibility checker."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Iterable


class Status(enum.Enum):
    CERTIFIED = "certified"
    VALIDATED = "validated"
    UNKNOWN = "unknown"
    REFUTED = "refuted"

    @property
    def rank(self) -> int:
        return _RANK[self]

    @property
    def ok(self) -> bool:
        return self in (Status.CERTIFIED, Status.VALIDATED)


_RANK = {Status.CERTIFIED: 3, Status.VALIDATED: 2, Status.UNKNOWN: 1, Status.REFUTED: 0}


@dataclass(frozen=True)
class Verdict:
    status: Status
    probes: int = 0
    witness: Any = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status.ok

    def __str__(self) -> str:
        text = self.status.value
        if self.status is Status.VALIDATED:
            text += f" ({self.probes} probes)"
        if self.note:
            text += f": {self.note}"
        return text


def certified(note: str = "") -> Verdict:
    return Verdict(Status.CERTIFIED, note=note)


def validated(probes: int, note: str = "") -> Verdict:
    return Verdict(Status.VALIDATED, probes, note=note)


def refuted(witness: Any, note: str = "") -> Verdict:
    return Verdict(Status.REFUTED, witness=witness, note=note)


def unknown(note: str = "") -> Verdict:
    return Verdict(Status.UNKNOWN, note=note)


def weakest(verdicts: Iterable[Verdict]) -> Status:
    return min((v.status for v in verdicts), key=lambda s: s.rank, default=Status.CERTIFIED)
