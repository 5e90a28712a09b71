"""Rollout-log ingestion (CSV or JSON lines) and testing-plan files."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError

BINARY = "binary"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class RolloutLog:
    records: tuple[tuple[str, float], ...]
    metric_kind: str

    def policies(self) -> list[str]:
        seen = {}
        for pid, _ in self.records:
            seen.setdefault(pid, None)
        return list(seen)

    def outcomes(self, policy_id: str | None = None) -> list[float]:
        policy_id = self.resolve(policy_id)
        return [x for pid, x in self.records if pid == policy_id]

    def resolve(self, policy_id: str | None) -> str:
        pols = self.policies()
        if policy_id is None:
            if len(pols) != 1:
                raise ValidationError(f"log holds {len(pols)} policies {pols}; choose one with --policy")
            return pols[0]
        if policy_id not in pols:
            raise ValidationError(f"policy {policy_id!r} not in log (have {pols})")
        return policy_id

    def counts(self, policy_id: str | None = None) -> tuple[int, int]:
        """``(successes, rollouts)`` for a binary log."""
        if self.metric_kind != BINARY:
            raise ValidationError("success counts need a binary log")
        xs = self.outcomes(policy_id)
        return int(sum(xs)), len(xs)


def _outcome(raw, line: int) -> float:
    if isinstance(raw, bool):
        raise ParseError(f"outcome must be a number, got {raw!r}", line)
    try:
        x = float(raw)
    except (TypeError, ValueError):
        raise ParseError(f"outcome must be a number, got {raw!r}", line) from None
    if not math.isfinite(x):
        raise ParseError(f"outcome must be finite, got {raw!r}", line)
    return x


def _read_csv(text: str) -> list[tuple[str, float]]:
    rows = csv.reader(text.splitlines())
    header = next(rows, None)
    if header is None or [h.strip() for h in header] != ["policy_id", "outcome"]:
        raise ParseError("expected header 'policy_id,outcome'", 1)
    out = []
    for i, row in enumerate(rows, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", i)
        pid = row[0].strip()
        if not pid:
            raise ParseError("empty policy_id", i)
        out.append((pid, _outcome(row[1].strip(), i)))
    return out


def _read_jsonl(text: str) -> list[tuple[str, float]]:
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", i) from None
        if not isinstance(rec, dict) or "policy_id" not in rec or "outcome" not in rec:
            raise ParseError("record needs 'policy_id' and 'outcome'", i)
        if not isinstance(rec["policy_id"], str) or not rec["policy_id"]:
            raise ParseError("policy_id must be a non-empty string", i)
        if isinstance(rec["outcome"], str):
            raise ParseError(f"outcome must be a number, got {rec['outcome']!r}", i)
        out.append((rec["policy_id"], _outcome(rec["outcome"], i)))
    return out


def parse_log(text: str, fmt: str, metric_kind: str | None = None) -> RolloutLog:
    if fmt == "csv":
        records = _read_csv(text)
    elif fmt == "jsonl":
        records = _read_jsonl(text)
    else:
        raise ValidationError(f"unknown log format {fmt!r}; expected csv or jsonl")
    if not records:
        raise ValidationError("rollout log holds no records")
    is_binary = all(x in (0.0, 1.0) for _, x in records)
    if metric_kind is None:
        metric_kind = BINARY if is_binary else CONTINUOUS
    elif metric_kind == BINARY and not is_binary:
        bad = next(x for _, x in records if x not in (0.0, 1.0))
        raise ValidationError(f"binary log must hold only 0/1 outcomes, found {bad}")
    elif metric_kind not in (BINARY, CONTINUOUS):
        raise ValidationError(f"unknown metric kind {metric_kind!r}")
    return RolloutLog(tuple(records), metric_kind)


def ingest(path, fmt: str | None = None, metric_kind: str | None = None) -> RolloutLog:
    """Read a rollout log; format is taken from the extension when not given."""
    path = Path(path)
    if fmt is None:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"
    try:
        text = path.read_text()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None
    return parse_log(text, fmt, metric_kind)


def load_testing_plan(path) -> dict:
    """A pre-declared plan: JSON with at least ``n`` and ``alpha``."""
    path = Path(path)
    try:
        plan = json.loads(path.read_text())
    except OSError as e:
        raise ValidationError(f"cannot read testing plan {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ValidationError(f"testing plan {path} is not valid JSON: {e.msg}") from None
    if not isinstance(plan, dict) or "n" not in plan or "alpha" not in plan:
        raise ValidationError("testing plan needs 'n' and 'alpha'")
    return plan


def enforce_plan(plan: dict, n: int, alpha: float) -> None:
    if int(plan["n"]) != n:
        raise ValidationError(
            f"log has {n} rollouts but the testing plan declared {plan['n']}; "
            "refusing to bound data collected off-plan")
    if float(plan["alpha"]) != alpha:
        raise ValidationError(f"alpha {alpha} differs from the planned {plan['alpha']}")
