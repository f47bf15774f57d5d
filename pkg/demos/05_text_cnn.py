"""Small text CNN: gradient check, then training on a marker task."""
import numpy as np

from tweetsift.labels import Label
from tweetsift.text_cnn import CnnConfig, backward, batch_loss, init_cnn, predict_cnn_many, train_cnn

tiny = CnnConfig(embed_dim=4, filter_widths=(2, 3), filters_per_width=3, max_len=6, seed=1)
model = init_cnn(12, tiny)
rng = np.random.default_rng(0)
X = rng.integers(1, 12, size=(4, 6))
labels = [Label.INFORMATIVE, Label.UNINFORMATIVE] * 2

# compare one analytic gradient entry with a central difference
grads = backward(model, X, labels)
dense = model.dense
h = 1e-5
dense[0, 0] += h
up = batch_loss(model, X, labels)
dense[0, 0] -= 2 * h
down = batch_loss(model, X, labels)
dense[0, 0] += h
print("analytic", grads[-2][0, 0], "numeric", (up - down) / (2 * h))

# token 2 present means INFORMATIVE
n, L = 60, 12
X = rng.integers(3, 30, size=(n, L))
labels = []
for i in range(n):
    if i % 2 == 0:
        X[i, rng.integers(0, L)] = 2
        labels.append(Label.INFORMATIVE)
    else:
        labels.append(Label.UNINFORMATIVE)
cfg = CnnConfig(embed_dim=16, filters_per_width=8, max_len=L, epochs=15, learning_rate=1e-2, seed=0)
trained = train_cnn(X, labels, cfg, vocab_size=30)
print("loss per epoch:", np.round(trained.loss_history, 3))
print("training accuracy:", np.mean([p == t for p, t in zip(predict_cnn_many(trained, X), labels)]))
