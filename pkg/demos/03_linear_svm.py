"""Pegasos SVM on a separable synthetic set, then on the tweet fixture."""
from pathlib import Path

import numpy as np

from tweetsift.classifier import train_model
from tweetsift.data_io import load_tsv
from tweetsift.linear_svm import decision_function, svm_objective, train_svm
from tweetsift.sparse import SparseVector

rng = np.random.default_rng(0)
u = rng.normal(size=20)
u /= np.linalg.norm(u)
pts = rng.uniform(-1, 1, size=(2000, 20))
keep = np.abs(pts @ u) >= 0.5
A, y = pts[keep][:200], np.sign(pts[keep][:200] @ u).astype(int)
X = [SparseVector.from_dense(r) for r in A]

history = []
model = train_svm(X, y, lam=1e-4, epochs=50, seed=42,
                  callback=lambda e, w, b: history.append(svm_objective(w, b, X, y, 1e-4)))
acc = np.mean([np.sign(decision_function(model, x)) == t for x, t in zip(X, y)])
print(f"training accuracy {acc:.3f}")
print("objective, first and last five epochs:", np.round(history[:5], 4), np.round(history[-5:], 4))
print("cosine to the true normal:", float(model.weights @ u / np.linalg.norm(model.weights)))

fixture = load_tsv(Path(__file__).resolve().parents[1] / "data" / "fixture_60.tsv")
tm = train_model("svm", fixture.texts, fixture.labels)
for text in ["Officials confirm 12 new cases and 3 deaths in Madrid", "cannot wait for this lockdown to end lol"]:
    print(tm.predict([text])[0].value, "<-", text)
