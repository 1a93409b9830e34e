from .layers import (
    BatchNorm,
    Conv1D,
    Dense,
    Dropout,
    Flatten,
    Layer,
    MaxPool1D,
    ReLU,
    Sigmoid,
    Softmax,
    glorot_uniform,
    he_uniform,
)
from .losses import binary_ce, categorical_ce, sigmoid_bce_grad, softmax_ce_grad

__all__ = [
    "BatchNorm",
    "Conv1D",
    "Dense",
    "Dropout",
    "Flatten",
    "Layer",
    "MaxPool1D",
    "ReLU",
    "Sigmoid",
    "Softmax",
    "glorot_uniform",
    "he_uniform",
    "binary_ce",
    "categorical_ce",
    "sigmoid_bce_grad",
    "softmax_ce_grad",
]
