"""TF-IDF on a three-document corpus, checked by hand."""
import math

import numpy as np

from tweetsift.features import FeatureConfig, extract_ngrams, fit_featurizer, fit_tfidf, transform_tfidf

corpus = [["covid", "case", "confirm"], ["covid", "death"], ["stay", "home", "stay", "safe"]]

print("bigrams of doc 0:", extract_ngrams(corpus[0], 1, 2))

model = fit_tfidf(corpus, 1, 1)
print("vocabulary:", model.vocab.terms)
print("idf:", np.round(model.idf, 4))

v = transform_tfidf(["covid", "covid", "case"], model)
print("weights:", {model.vocab.terms[i]: round(float(x), 6) for i, x in zip(v.indices, v.values)})

# the same numbers from the formula: tf * (ln((1 + N) / (1 + df)) + 1), then L2 normalise
N = len(corpus)
raw = {"covid": 2 * (math.log((1 + N) / (1 + 2)) + 1), "case": 1 * (math.log((1 + N) / (1 + 1)) + 1)}
norm = math.sqrt(sum(x * x for x in raw.values()))
print("by hand:", {k: round(x / norm, 6) for k, x in raw.items()})

# bigrams need to appear in two documents to enter the vocabulary by default
feat = fit_featurizer(corpus + [["covid", "case"]], FeatureConfig(ngram_max=2))
print("featurizer terms:", feat.tfidf.vocab.terms)
