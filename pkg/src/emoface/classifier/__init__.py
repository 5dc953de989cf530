"""Recurrent text emotion classifier (LSTM with a vanilla-RNN baseline)."""

from .cells import (
    LstmParams,
    RnnParams,
    init_lstm,
    init_rnn,
    lstm_step,
    rnn_step,
)
from .model import (
    ClassifierModel,
    ClassifyResult,
    classify,
    cross_entropy,
    evaluate,
    forward,
    load_model,
    save_model,
    softmax,
)
from .train import (
    LabeledCorpus,
    TrainConfig,
    load_corpus_csv,
    save_corpus_csv,
    stratified_split,
    train,
)

__all__ = [
    "ClassifierModel",
    "ClassifyResult",
    "LabeledCorpus",
    "LstmParams",
    "RnnParams",
    "TrainConfig",
    "classify",
    "cross_entropy",
    "evaluate",
    "forward",
    "init_lstm",
    "init_rnn",
    "load_corpus_csv",
    "load_model",
    "lstm_step",
    "rnn_step",
    "save_corpus_csv",
    "save_model",
    "softmax",
    "stratified_split",
    "train",
]
