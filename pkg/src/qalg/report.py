"""Check results shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
DIVERGED = "diverged"


@dataclass
class CheckItem:
    check: str
    subject: str
    status: str
    residual: str | None = None
    detail: str | None = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_dict(self, timings: bool = True) -> dict:
        d = {"check": self.check, "subject": self.subject, "status": self.status}
        if self.residual is not None:
            d["residual"] = self.residual
        if self.detail is not None:
            d["detail"] = self.detail
        if timings:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass
class Report:
    """An ordered list of check items; passes iff every item passes."""

    title: str
    items: list[CheckItem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def add(self, check, subject, ok, residual=None, detail=None, seconds=0.0) -> CheckItem:
        status = ok if isinstance(ok, str) else (PASS if ok else FAIL)
        item = CheckItem(check, subject, status, residual, detail, seconds)
        self.items.append(item)
        return item

    def extend(self, other: Report) -> None:
        self.items.extend(other.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.ok]

    def item(self, subject: str) -> CheckItem:
        for it in self.items:
            if it.subject == subject:
                return it
        raise KeyError(subject)

    def __str__(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for it in self.items:
            line = f"  [{it.status}] {it.check} {it.subject}"
            if it.detail:
                line += f"  ({it.detail})"
            if it.residual is not None and not it.ok:
                line += f"\n      residual: {it.residual}"
            lines.append(line)
        return "\n".join(lines)
