"""Walk one tweet through each preprocessing stage."""
from tweetsift.text_pipeline import (
    PipelineConfig,
    filter_punctuation,
    filter_stopwords,
    filter_urls_mentions,
    run_pipeline,
    stem_tokens,
    to_lowercase,
    tokenize,
)

tweet = "BREAKING: @WHO confirms 1,204 new cases in #Lombardy, patients waited hours https://t.co/x1 HTTPURL"

tokens = tokenize(tweet)
print("tokens     ", tokens)
tokens = to_lowercase(tokens)
print("lowercase  ", tokens)
tokens = filter_punctuation(tokens)
print("no punct   ", tokens)
tokens = filter_stopwords(tokens)
print("no stops   ", tokens)
tokens = stem_tokens(tokens)
print("stemmed    ", tokens)

# the default pipeline is the same chain in one call
assert run_pipeline(tweet) == tokens

# links and mentions are kept unless asked for; the filter runs before punctuation stripping
cfg = PipelineConfig(drop_urls=True, drop_mentions=True)
print("dropped    ", run_pipeline(tweet, cfg))

# every stage can be switched off
raw = PipelineConfig(lowercase=False, strip_punctuation=False, remove_stopwords=False, stem=False)
assert run_pipeline(tweet, raw) == tokenize(tweet)

# filter_urls_mentions is also usable on its own
print("filter only", filter_urls_mentions(tokenize(tweet)))
