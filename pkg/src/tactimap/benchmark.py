"""Answer-quality benchmark: query corpus, labels, heuristics and reports.

A benchmark file is a JSON array of spoken queries with expected answers,
split into landmark, route and survey knowledge. Answers are graded on a
six-step quality ladder from deceptively wrong (sounds right, is wrong,
and the blind user cannot tell) up to fully correct. A small heuristic
pre-labels the obvious cases; everything else is labeled by hand in a
separate JSON file keyed by query id.

Percentages are computed in decimal arithmetic and rounded half-up to
two decimals so report tables are bit-stable across platforms.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping

from .config import EngineConfig
from .conversation import ChatBackend, Conversation
from .model import MapModel, Point

QUERY_KINDS = ("landmark", "route", "survey")


class Label(Enum):
    """Answer quality ladder, worst first."""

    DECEPTIVELY_WRONG = "deceptively_wrong"
    NOT_REPLYING = "not_replying"
    BLATANTLY_WRONG = "blatantly_wrong"
    PARTIAL_INCOMPLETE = "partial_incomplete"
    CORRECT_NOT_OPTIMAL = "correct_not_optimal"
    CORRECT = "correct"

    @property
    def display(self) -> str:
        return _DISPLAY[self]


_DISPLAY = {
    Label.DECEPTIVELY_WRONG: "Deceptively wrong",
    Label.NOT_REPLYING: "Not replying",
    Label.BLATANTLY_WRONG: "Blatantly wrong",
    Label.PARTIAL_INCOMPLETE: "Partial or incomplete",
    Label.CORRECT_NOT_OPTIMAL: "Correct but not optimal",
    Label.CORRECT: "Correct",
}

LABEL_ORDER = tuple(Label)


def parse_label(text: str) -> Label:
    """Parse a label from its enum name, value, or display spelling."""
    folded = re.sub(r"[\s_-]+", "", text).lower()
    for label in Label:
        candidates = {label.name, label.value, label.display}
        if folded in {re.sub(r"[\s_-]+", "", c).lower() for c in candidates}:
            return label
    raise ValueError(f"unknown label {text!r}")


@dataclass(frozen=True)
class Query:
    id: str
    text: str
    kind: str  # landmark | route | survey
    expected: str
    position: Point | None = None
    now: datetime | None = None


def load_benchmark(path: str | Path) -> list[Query]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, list):
        raise ValueError("benchmark file must contain a JSON array")
    queries: list[Query] = []
    seen: set[str] = set()
    for i, raw in enumerate(doc):
        where = f"query[{i}]"
        if not isinstance(raw, dict):
            raise ValueError(f"{where}: expected an object")
        qid = raw.get("id")
        if not isinstance(qid, str) or not qid:
            raise ValueError(f"{where}: missing string id")
        if qid in seen:
            raise ValueError(f"{where}: duplicate id {qid!r}")
        seen.add(qid)
        kind = raw.get("kind")
        if kind not in QUERY_KINDS:
            raise ValueError(f"{where}: kind must be one of {', '.join(QUERY_KINDS)}, got {kind!r}")
        position = None
        if raw.get("position") is not None:
            pos = raw["position"]
            if not (isinstance(pos, list) and len(pos) == 2):
                raise ValueError(f"{where}: position must be [x, y]")
            position = Point(float(pos[0]), float(pos[1]))
        now = None
        if raw.get("now") is not None:
            now = datetime.fromisoformat(raw["now"])
        for key in ("text", "expected"):
            if not isinstance(raw.get(key), str) or not raw[key]:
                raise ValueError(f"{where}: missing string {key}")
        queries.append(
            Query(id=qid, text=raw["text"], kind=kind, expected=raw["expected"], position=position, now=now)
        )
    return queries


def load_labels(path: str | Path) -> dict[str, Label]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ValueError("label file must contain a JSON object of id -> label")
    return {qid: parse_label(raw) for qid, raw in doc.items()}


# ---------------------------------------------------------------------------
# Heuristic pre-labeling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Suggestion:
    label: Label | None
    needs_review: bool
    reason: str


_NUMBER = re.compile(r"-?\d+(?:\.\d+)?")


def _normalize(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip().lower()


def classify_heuristic(query: Query, answer: str) -> Suggestion:
    """Cheap pre-label for the clear-cut cases, review flag for the rest.

    An empty answer is a non-reply; an answer containing the expected
    text verbatim is correct. Numeric disagreement is flagged for review
    rather than auto-labeled, since a wrong number in fluent prose is
    exactly the deceptive case that needs human eyes.
    """
    if not answer.strip():
        return Suggestion(Label.NOT_REPLYING, False, "empty answer")
    if _normalize(query.expected) in _normalize(answer):
        return Suggestion(Label.CORRECT, False, "expected answer appears verbatim")
    expected_numbers = {float(m) for m in _NUMBER.findall(query.expected)}
    answer_numbers = {float(m) for m in _NUMBER.findall(answer)}
    if expected_numbers and answer_numbers and not (expected_numbers & answer_numbers):
        return Suggestion(None, True, "answer numbers disagree with the expected answer")
    return Suggestion(None, True, "no verbatim match")


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    query: Query
    answer: str
    tool_calls: tuple[dict[str, Any], ...]
    latency_s: float
    suggestion: Suggestion

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.query.id,
            "kind": self.query.kind,
            "text": self.query.text,
            "expected": self.query.expected,
            "answer": self.answer,
            "tool_calls": list(self.tool_calls),
            "latency_s": self.latency_s,
            "suggestion": {
                "label": self.suggestion.label.value if self.suggestion.label else None,
                "needs_review": self.suggestion.needs_review,
                "reason": self.suggestion.reason,
            },
        }


def run_benchmark(
    model: MapModel,
    preset: int,
    config: EngineConfig,
    backend: ChatBackend,
    queries: Iterable[Query],
) -> list[RunRecord]:
    """Ask every query in a fresh conversation and pre-label the answers."""
    records: list[RunRecord] = []
    for query in queries:
        conversation = Conversation(model, preset, config, backend)
        result = conversation.ask(query.text, position=query.position, now=query.now)
        records.append(
            RunRecord(
                query=query,
                answer=result.answer,
                tool_calls=result.tool_calls,
                latency_s=result.latency_s,
                suggestion=classify_heuristic(query, result.answer),
            )
        )
    return records


def records_to_json(records: Iterable[RunRecord]) -> list[dict[str, Any]]:
    return [r.to_json() for r in records]


def assign_labels(
    records: Iterable[RunRecord], explicit: Mapping[str, Label] | None = None
) -> dict[str, Label]:
    """Final label per query id: explicit labels override, heuristics fill.

    Raises on queries that neither source covers; a report over partially
    labeled answers would silently skew every percentage.
    """
    explicit = dict(explicit or {})
    labels: dict[str, Label] = {}
    unlabeled: list[str] = []
    for record in records:
        qid = record.query.id
        if qid in explicit:
            labels[qid] = explicit[qid]
        elif record.suggestion.label is not None:
            labels[qid] = record.suggestion.label
        else:
            unlabeled.append(qid)
    if unlabeled:
        raise ValueError(
            "queries need review labels: " + ", ".join(sorted(unlabeled))
        )
    return labels


# ---------------------------------------------------------------------------
# Report arithmetic and rendering
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Report:
    counts: dict[Label, int] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, counts: Mapping[Label, int]) -> "Report":
        full = {label: int(counts.get(label, 0)) for label in LABEL_ORDER}
        if any(v < 0 for v in full.values()):
            raise ValueError("label counts must be non-negative")
        return cls(counts=full)

    @classmethod
    def from_labels(cls, labels: Iterable[Label]) -> "Report":
        counts = {label: 0 for label in LABEL_ORDER}
        for label in labels:
            counts[label] += 1
        return cls.from_counts(counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def percent(self, label: Label) -> Decimal:
        """Share of answers with this label, in percent, half-up 2 decimals."""
        if self.total == 0:
            return Decimal("0.00")
        exact = Decimal(100 * self.counts[label]) / Decimal(self.total)
        return exact.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)

    def rows(self) -> list[tuple[Label, int, Decimal]]:
        return [(label, self.counts[label], self.percent(label)) for label in LABEL_ORDER]


def render_table(report: Report) -> str:
    """Plain text quality table, worst label first."""
    name_width = max(len(label.display) for label in LABEL_ORDER)
    lines = [f"{'Answer quality':<{name_width}}  {'Count':>5}  {'Percent':>7}"]
    for label, count, percent in report.rows():
        lines.append(f"{label.display:<{name_width}}  {count:>5}  {str(percent):>6}%")
    lines.append(f"{'Total':<{name_width}}  {report.total:>5}")
    return "\n".join(lines)


def report_to_csv(report: Report) -> str:
    lines = ["label,count,percent"]
    for label, count, percent in report.rows():
        lines.append(f"{label.value},{count},{percent}")
    return "\n".join(lines) + "\n"


def report_to_json(report: Report) -> dict[str, Any]:
    return {
        "total": report.total,
        "labels": {
            label.value: {"count": count, "percent": str(percent)}
            for label, count, percent in report.rows()
        },
    }


def save_report_figure(report: Report, path: str | Path) -> None:
    """Bar chart of the label distribution rendered to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [label.display for label in LABEL_ORDER]
    counts = [report.counts[label] for label in LABEL_ORDER]
    percents = [float(report.percent(label)) for label in LABEL_ORDER]

    fig, ax = plt.subplots(figsize=(9, 4.5))
    bars = ax.bar(range(len(labels)), counts, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=9)
    ax.set_ylabel("Answers")
    ax.set_title(f"Answer quality over {report.total} queries")
    for bar, pct in zip(bars, percents):
        ax.annotate(
            f"{pct:.2f}%",
            xy=(bar.get_x() + bar.get_width() / 2, bar.get_height()),
            xytext=(0, 3),
            textcoords="offset points",
            ha="center",
            fontsize=8,
        )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
