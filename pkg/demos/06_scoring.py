"""Score predictions and recover a confusion matrix from published percentages."""
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from tweetsift.evaluation import ConfusionMatrix, compute_metrics, per_class_metrics

published = {"f1": "89.14", "accuracy": "89.35", "recall": "92.58", "precision": "85.94"}
n_pos, n_neg = 944, 1056


def pct(x):
    return Decimal(x * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


# try every (tp, fp); fn and tn follow from the class totals
found = []
for tp in range(n_pos + 1):
    r = tp / n_pos
    if str(pct(r)) != published["recall"]:
        continue
    for fp in range(n_neg + 1):
        if tp + fp == 0:
            continue
        p = tp / (tp + fp)
        f = 2 * p * r / (p + r) if p + r else 0.0
        a = (tp + n_neg - fp) / (n_pos + n_neg)
        if (str(pct(f)), str(pct(a)), str(pct(p))) == (published["f1"], published["accuracy"], published["precision"]):
            found.append((tp, fp, n_pos - tp, n_neg - fp))
print("matching matrices:", found)

cm = ConfusionMatrix(*found[0])
print(compute_metrics(cm).format())
print(per_class_metrics(cm).format())

# a recall of 92.35 would need tp/944 to round there, and no integer tp does that
print("tp giving 92.35 recall:", [tp for tp in range(n_pos + 1) if str(pct(tp / n_pos)) == "92.35"])
print("nearest recalls:", [str(pct(tp / n_pos)) for tp in (871, 872)])
