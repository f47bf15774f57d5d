"""A forest learns XOR, which no single split can separate."""
import numpy as np

from tweetsift.random_forest import best_split, gini_impurity, predict_forest_many, train_forest

pts = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] * 25)
y = np.array([-1, 1, 1, -1] * 25)

print("gini of a balanced node:", gini_impurity((50, 50)))
# any single threshold leaves both halves balanced, so the gain is zero and no split is returned
print("best root split:", best_split(range(len(y)), pts, y, [0, 1]))

forest = train_forest(pts, y, n_trees=50, seed=42)
pred = np.array([p.sign for p in predict_forest_many(forest, pts)])
print("training accuracy:", np.mean(pred == y))
# a bootstrap sample that happens to stay balanced gives a single-leaf tree
print("tree depths:", sorted({t.depth() for t in forest.trees}))
print("nodes per tree:", sorted({t.n_nodes for t in forest.trees}))
