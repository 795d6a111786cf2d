from .layers import AvgPool1D, Conv1D, Dense, Dropout, Flatten, MaxPool1D, ReLU, softmax
from .model import CnnModel, build_reference
from .optim import AdamState, adam_step, learning_rate
from .train import EpochStats, Evaluation, TrainConfig, TrainResult, evaluate, prepare, stratified_split, train

__all__ = [
    "AdamState", "AvgPool1D", "CnnModel", "Conv1D", "Dense", "Dropout", "EpochStats", "Evaluation",
    "Flatten", "MaxPool1D", "ReLU", "TrainConfig", "TrainResult", "adam_step", "build_reference",
    "evaluate", "learning_rate", "prepare", "softmax", "stratified_split", "train",
]
