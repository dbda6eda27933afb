"""Check results shared by every verification routine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Witness:
    """Where an identity failed: a label, the indices involved and the residual
    (left side minus right side) in canonical rendering."""

    label: str
    indices: tuple = ()
    residual: str = ""

    def as_dict(self) -> dict:
        return {"label": self.label, "indices": list(self.indices), "residual": self.residual}

    def __str__(self):
        idx = ", ".join(map(str, self.indices))
        s = self.label + (f" [{idx}]" if idx else "")
        return s + (f": residual {self.residual}" if self.residual else "")


@dataclass
class Report:
    """Outcome of one check. ``status`` is ``'pass'``, ``'fail'`` or ``'skip'``."""

    check: str
    status: str = "pass"
    witnesses: list[Witness] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    subreports: list["Report"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def __bool__(self):
        return self.ok

    def fail(self, label: str, indices=(), residual="") -> None:
        self.status = "fail"
        self.witnesses.append(Witness(label, tuple(indices), str(residual)))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def absorb(self, sub: "Report") -> "Report":
        """Attach a sub-check; a failing sub-check fails this report."""
        self.subreports.append(sub)
        if sub.failed:
            self.status = "fail"
            self.witnesses.extend(Witness(f"{sub.check}: {w.label}", w.indices, w.residual)
                                  for w in sub.witnesses)
        return sub

    def finish(self) -> "Report":
        self.witnesses.sort(key=lambda w: (w.label, tuple(map(str, w.indices)), w.residual))
        return self

    @classmethod
    def skipped(cls, check: str, reason: str) -> "Report":
        return cls(check, "skip", notes=[reason])

    def witness_labels(self) -> set[str]:
        return {w.label for w in self.witnesses}

    def __str__(self):
        lines = [f"{self.check}: {self.status}"]
        lines += [f"  witness {w}" for w in self.witnesses]
        lines += [f"  note {n}" for n in self.notes]
        return "\n".join(lines)
