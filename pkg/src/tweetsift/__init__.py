"""Classical classifiers for informative COVID-19 tweets.

Preprocessing, TF-IDF features, a Pegasos linear SVM, a Gini random forest,
a small numpy text CNN, metric scoring and a binary model format.
"""
from tweetsift.classifier import TrainedModel, train_model
from tweetsift.data_io import DatasetSplit, LabeledTweet, load_model, load_tsv, save_model, write_predictions
from tweetsift.evaluation import ConfusionMatrix, compute_metrics, confusion_matrix, score_prediction_file
from tweetsift.labels import Label
from tweetsift.text_pipeline import PipelineConfig, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "DatasetSplit",
    "Label",
    "LabeledTweet",
    "PipelineConfig",
    "TrainedModel",
    "compute_metrics",
    "confusion_matrix",
    "load_model",
    "load_tsv",
    "run_pipeline",
    "save_model",
    "score_prediction_file",
    "train_model",
    "write_predictions",
]
