"""Confusion matrices and the accuracy / precision / recall / F1 reports.

INFORMATIVE is the positive class throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Sequence

from .labels import Label

METRIC_ORDER = ("f1", "accuracy", "recall", "precision")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def transposed(self) -> "ConfusionMatrix":
        """The same counts seen with UNINFORMATIVE as the positive class."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)

    def as_table(self) -> str:
        rows = [
            ("", "pred INFORMATIVE", "pred UNINFORMATIVE"),
            ("gold INFORMATIVE", str(self.tp), str(self.fn)),
            ("gold UNINFORMATIVE", str(self.fp), str(self.tn)),
        ]
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        return "\n".join(
            "  ".join([r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]) for r in rows
        )


def confusion_matrix(gold: Sequence, pred: Sequence) -> ConfusionMatrix:
    if len(gold) != len(pred):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(pred)} predicted")
    if len(gold) == 0:
        raise ValueError("nothing to evaluate")
    tp = fp = fn = tn = 0
    for g, p in zip(gold, pred):
        g_pos = Label(g) is Label.INFORMATIVE
        p_pos = Label(p) is Label.INFORMATIVE
        if g_pos and p_pos:
            tp += 1
        elif p_pos:
            fp += 1
        elif g_pos:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def percent(value: float) -> str:
    """Render a [0, 1] value as a percentage with two decimals, halves rounded away from zero."""
    exact = Decimal(value) * 100  # exact binary value, no second float rounding
    return str(exact.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    undefined: frozenset = field(default_factory=frozenset)

    def percentages(self) -> dict[str, str]:
        return {k: percent(getattr(self, k)) for k in METRIC_ORDER}

    def format(self) -> str:
        pct = self.percentages()
        lines = []
        for k in METRIC_ORDER:
            flag = "  (undefined: 0/0)" if k in self.undefined else ""
            lines.append(f"{k:<10} {pct[k]:>6}{flag}")
        return "\n".join(lines)


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, precision, recall and F1; a 0/0 gives 0 and sets its undefined flag."""
    if cm.total == 0:
        raise ValueError("empty confusion matrix")
    undefined = set()
    precision, bad = _ratio(cm.tp, cm.tp + cm.fp)
    if bad:
        undefined.add("precision")
    recall, bad = _ratio(cm.tp, cm.tp + cm.fn)
    if bad:
        undefined.add("recall")
    if precision + recall == 0:
        f1 = 0.0
        undefined.add("f1")
    else:
        f1 = 2 * precision * recall / (precision + recall)
    accuracy = (cm.tp + cm.tn) / cm.total
    return MetricsReport(accuracy, precision, recall, f1, frozenset(undefined))


@dataclass(frozen=True)
class ClassRow:
    precision: float
    recall: float
    f1: float
    undefined: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class PerClassReport:
    informative: ClassRow
    uninformative: ClassRow

    def macro_f1(self) -> float:
        return (self.informative.f1 + self.uninformative.f1) / 2.0

    def format(self) -> str:
        head = f"{'label':<14} {'precision':>9} {'recall':>7} {'f1':>7}"
        lines = [head]
        for name, row in (("INFORMATIVE", self.informative), ("UNINFORMATIVE", self.uninformative)):
            lines.append(
                f"{name:<14} {percent(row.precision):>9} {percent(row.recall):>7} {percent(row.f1):>7}"
            )
        return "\n".join(lines)


def _row(cm: ConfusionMatrix) -> ClassRow:
    r = compute_metrics(cm)
    return ClassRow(r.precision, r.recall, r.f1, r.undefined - {"accuracy"})


def per_class_metrics(cm: ConfusionMatrix) -> PerClassReport:
    return PerClassReport(_row(cm), _row(cm.transposed()))


def write_report(path: str | Path, report: MetricsReport, cm: ConfusionMatrix | None = None,
                 per_class: PerClassReport | None = None) -> None:
    """Key-value report: ``metric=value`` lines in a fixed order."""
    lines = [f"{k}={v}" for k, v in report.percentages().items()]
    if cm is not None:
        lines += [f"tp={cm.tp}", f"fp={cm.fp}", f"fn={cm.fn}", f"tn={cm.tn}"]
    if per_class is not None:
        for name, row in (("informative", per_class.informative), ("uninformative", per_class.uninformative)):
            lines += [
                f"{name}_precision={percent(row.precision)}",
                f"{name}_recall={percent(row.recall)}",
                f"{name}_f1={percent(row.f1)}",
            ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class PredictionFileError(ValueError):
    """A gold/prediction join failed (missing, duplicate or unknown entries)."""


def score_predictions(gold_rows, pred_rows):
    """Join ``(id, label)`` pairs by id and compute all reports.

    Every gold id must appear exactly once among the predictions.
    """
    preds: dict[str, Label] = {}
    for lineno, (rid, label) in pred_rows:
        if rid in preds:
            raise PredictionFileError(f"line {lineno}: duplicate prediction for id {rid!r}")
        preds[rid] = label
    gold, pred = [], []
    for rid, label in gold_rows:
        if rid not in preds:
            raise PredictionFileError(f"no prediction for id {rid!r}")
        gold.append(label)
        pred.append(preds.pop(rid))
    cm = confusion_matrix(gold, pred)
    return cm, compute_metrics(cm), per_class_metrics(cm)


def score_prediction_file(gold_path: str | Path, pred_path: str | Path):
    """Score a prediction TSV against a labeled gold TSV; returns (matrix, metrics, per-class)."""
    from .data_io import DataFormatError, load_tsv, read_prediction_rows

    gold = load_tsv(gold_path)
    for row in gold.rows:
        if row.label is None:
            raise PredictionFileError(f"gold file has an unlabeled row for id {row.id!r}")
    try:
        pred_rows = read_prediction_rows(pred_path)
    except DataFormatError as exc:
        raise PredictionFileError(str(exc)) from None
    return score_predictions([(r.id, r.label) for r in gold.rows], pred_rows)
