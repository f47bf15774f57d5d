"""Command-line front end: ``preprocess``, ``train``, ``predict``, ``evaluate``.

Exit codes: 0 success, 2 input/io error, 3 data/semantic error, 4 model-file error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .classifier import train_model
from .data_io import (
    DataFormatError,
    ModelFormatError,
    class_counts,
    load_model,
    load_tsv,
    merge_splits,
    save_model,
    write_predictions,
)
from .evaluation import PredictionFileError, score_prediction_file, write_report
from .features import FeatureConfig
from .linear_svm import TrainingError
from .text_cnn import CnnConfig
from .text_pipeline import PipelineConfig, default_stopwords, load_stopwords

EXIT_OK, EXIT_IO, EXIT_DATA, EXIT_MODEL = 0, 2, 3, 4

# option -> (type, default); flags default to None so a config file can fill them
DEFAULTS = {
    "seed": (int, 42),
    "threads": (int, 1),
    "no_lowercase": (bool, False),
    "keep_punctuation": (bool, False),
    "keep_stopwords": (bool, False),
    "no_stem": (bool, False),
    "drop_urls": (bool, False),
    "drop_mentions": (bool, False),
    "stopwords": (str, None),
    "ngram_min": (int, 1),
    "ngram_max": (int, 3),
    "min_df": (int, 1),
    "min_df_ngram": (int, 2),
    "char_ngrams": (bool, False),
    "svm_lambda": (float, 1e-4),
    "svm_epochs": (int, 50),
    "n_trees": (int, 500),
    "max_depth": (int, 26),
    "min_leaf": (int, 1),
    "features_per_split": (int, None),
    "embed_dim": (int, 128),
    "filters_per_width": (int, 100),
    "filter_widths": (str, "3,4,5"),
    "max_len": (int, 143),
    "cnn_epochs": (int, 25),
    "batch_size": (int, 32),
    "learning_rate": (float, 1e-3),
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise CliError(f"not a boolean: {text!r}", EXIT_IO)


def read_config_file(path) -> dict:
    """``key=value`` lines; keys are option names with ``-`` or ``_``; ``#`` comments."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}", EXIT_IO) from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value", EXIT_IO)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise CliError(f"{path}:{lineno}: unknown option {key!r}", EXIT_IO)
        typ = DEFAULTS[key][0]
        try:
            out[key] = _parse_bool(value) if typ is bool else typ(value)
        except ValueError:
            raise CliError(f"{path}:{lineno}: bad value for {key}", EXIT_IO) from None
    return out


def resolve(args) -> dict:
    """Merge defaults, config file and explicit flags (flags win)."""
    conf = {k: d for k, (_, d) in DEFAULTS.items()}
    if getattr(args, "config", None):
        conf.update(read_config_file(args.config))
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            conf[k] = v
    return conf


def _pipeline(conf) -> PipelineConfig:
    try:
        stop = load_stopwords(conf["stopwords"]) if conf["stopwords"] else default_stopwords()
    except OSError as exc:
        raise CliError(f"cannot read stop-word file: {exc}", EXIT_IO) from None
    return PipelineConfig(
        lowercase=not conf["no_lowercase"],
        strip_punctuation=not conf["keep_punctuation"],
        remove_stopwords=not conf["keep_stopwords"],
        stem=not conf["no_stem"],
        stopword_list=stop,
        drop_urls=conf["drop_urls"],
        drop_mentions=conf["drop_mentions"],
    )


def _load(path):
    try:
        return load_tsv(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None
    except DataFormatError as exc:
        raise CliError(str(exc), EXIT_IO) from None


def cmd_preprocess(args) -> int:
    conf = resolve(args)
    split = _load(args.input)
    pipeline = _pipeline(conf)
    from .text_pipeline import run_pipeline

    lines = [f"{r.id}\t{' '.join(run_pipeline(r.text, pipeline))}\n" for r in split.rows]
    try:
        Path(args.output).write_text("".join(lines), encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc}", EXIT_IO) from None
    return EXIT_OK


def cmd_train(args) -> int:
    conf = resolve(args)
    data = _load(args.train)
    if args.merge_dev:
        try:
            data = merge_splits(data, _load(args.merge_dev))
        except DataFormatError as exc:
            raise CliError(str(exc), EXIT_DATA) from None
    inf, uninf, unlabeled = class_counts(data)
    if unlabeled:
        raise CliError(f"training data has {unlabeled} unlabeled rows", EXIT_DATA)
    print(f"training rows: {len(data)} (INFORMATIVE {inf}, UNINFORMATIVE {uninf})")
    features = FeatureConfig(
        ngram_min=conf["ngram_min"], ngram_max=conf["ngram_max"], min_df=conf["min_df"],
        min_df_ngram=conf["min_df_ngram"], char_ngrams=conf["char_ngrams"],
    )
    try:
        widths = tuple(int(w) for w in str(conf["filter_widths"]).split(","))
        cnn = CnnConfig(
            embed_dim=conf["embed_dim"], filter_widths=widths,
            filters_per_width=conf["filters_per_width"], max_len=conf["max_len"],
            epochs=conf["cnn_epochs"], batch_size=conf["batch_size"],
            learning_rate=conf["learning_rate"], seed=conf["seed"],
        )
        tm = train_model(
            args.model, data.texts, data.labels, _pipeline(conf), features,
            seed=conf["seed"], svm_lambda=conf["svm_lambda"], svm_epochs=conf["svm_epochs"],
            n_trees=conf["n_trees"], max_depth=conf["max_depth"], min_leaf=conf["min_leaf"],
            features_per_split=conf["features_per_split"], threads=conf["threads"], cnn_config=cnn,
        )
    except TrainingError as exc:
        raise CliError(str(exc), EXIT_DATA) from None
    except ValueError as exc:
        raise CliError(f"invalid training settings: {exc}", EXIT_DATA) from None
    preds = tm.predict(data.texts)
    acc = sum(p == g for p, g in zip(preds, data.labels)) / len(data)
    print(f"training accuracy: {100 * acc:.2f}")
    try:
        save_model(args.out, tm)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from None
    return EXIT_OK


def cmd_predict(args) -> int:
    try:
        tm = load_model(args.model)
    except ModelFormatError as exc:
        raise CliError(str(exc), EXIT_MODEL) from None
    except OSError as exc:
        raise CliError(f"cannot read model {args.model}: {exc.strerror or exc}", EXIT_MODEL) from None
    data = _load(args.input)
    preds = tm.predict(data.texts)
    try:
        write_predictions(args.out, [(r.id, p) for r, p in zip(data.rows, preds)])
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from None
    return EXIT_OK


def cmd_evaluate(args) -> int:
    for p in (args.gold, args.pred):
        if not Path(p).is_file():
            raise CliError(f"cannot read {p}", EXIT_IO)
    try:
        cm, report, per_class = score_prediction_file(args.gold, args.pred)
    except PredictionFileError as exc:
        raise CliError(str(exc), EXIT_DATA) from None
    except DataFormatError as exc:
        raise CliError(str(exc), EXIT_IO) from None
    print(report.format())
    if args.per_class:
        print()
        print(per_class.format())
    if args.confusion:
        print()
        print(cm.as_table())
    if args.out:
        write_report(args.out, report, cm, per_class)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--config", help="key=value option file; flags override it")
    common.add_argument("-v", "--verbose", action="store_true")

    pipe = argparse.ArgumentParser(add_help=False)
    pipe.add_argument("--no-lowercase", action="store_const", const=True)
    pipe.add_argument("--keep-punctuation", action="store_const", const=True)
    pipe.add_argument("--keep-stopwords", action="store_const", const=True)
    pipe.add_argument("--no-stem", action="store_const", const=True)
    pipe.add_argument("--drop-urls", action="store_const", const=True)
    pipe.add_argument("--drop-mentions", action="store_const", const=True)
    pipe.add_argument("--stopwords", help="stop-word file, one word per line")

    parser = argparse.ArgumentParser(prog="tweetsift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", parents=[common, pipe], help="tokenize a TSV file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", parents=[common, pipe], help="train one model")
    p.add_argument("--model", choices=("svm", "rf", "cnn"), required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--merge-dev", help="labeled validation TSV appended to the training rows")
    p.add_argument("--out", required=True)
    p.add_argument("--ngram-min", type=int)
    p.add_argument("--ngram-max", type=int)
    p.add_argument("--min-df", type=int)
    p.add_argument("--min-df-ngram", type=int)
    p.add_argument("--char-ngrams", action="store_const", const=True)
    p.add_argument("--svm-lambda", type=float)
    p.add_argument("--svm-epochs", type=int)
    p.add_argument("--n-trees", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--min-leaf", type=int)
    p.add_argument("--features-per-split", type=int)
    p.add_argument("--embed-dim", type=int)
    p.add_argument("--filters-per-width", type=int)
    p.add_argument("--filter-widths")
    p.add_argument("--max-len", type=int)
    p.add_argument("--cnn-epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", parents=[common], help="label a TSV file with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", parents=[common], help="score predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--per-class", action="store_true")
    p.add_argument("--confusion", action="store_true")
    p.add_argument("--out", help="write metric=value lines here")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except CliError as exc:
        print(f"tweetsift: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
