"""Check records and their human/machine renderings."""

from __future__ import annotations

from dataclasses import dataclass

from .conventions import LEDGER_VERSION, ledger_hash

PASS = "pass"
FAIL = "fail"
INFO = "info"


@dataclass
class CheckRecord:
    check: str
    subject: str
    verdict: str  # PASS | FAIL | INFO
    witness: str = ""

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL


def _clean(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ")


def machine_lines(records: list[CheckRecord]) -> str:
    """One flat key=value record per line, tab separated, stable order."""
    lines = []
    stamp = ledger_hash()
    for rec in records:
        fields = [f"check={_clean(rec.check)}", f"subject={_clean(rec.subject)}",
                  f"verdict={rec.verdict}"]
        if rec.witness:
            fields.append(f"witness={_clean(rec.witness)}")
        fields.append(f"ledger={LEDGER_VERSION}:{stamp}")
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def human_lines(records: list[CheckRecord]) -> str:
    out = [f"convention ledger version {LEDGER_VERSION} ({ledger_hash()})"]
    width = max((len(rec.check) for rec in records), default=0)
    for rec in records:
        mark = {PASS: "ok  ", FAIL: "FAIL", INFO: "    "}[rec.verdict]
        line = f"{mark} {rec.check:<{width}}  {rec.subject}"
        if rec.witness:
            line += f"  [{rec.witness}]"
        out.append(line)
    failures = sum(1 for rec in records if rec.failed)
    checks = sum(1 for rec in records if rec.verdict != INFO)
    out.append(f"{checks - failures}/{checks} checks passed")
    return "\n".join(out) + "\n"


def exit_code(records: list[CheckRecord]) -> int:
    return 1 if any(rec.failed for rec in records) else 0
