"""Dense / Conv1D / LSTM network substrate with hand-written gradients."""

from .architectures import DEFAULT_STACKS, cnn_lstm_stack, cnn_stack, lstm_stack, small_stack
from .gradcheck import grad_check
from .layers import LSTM, Activation, Conv1D, Dense, GlobalAvgPool1D, Output, ShapeError, sigmoid
from .model import (
    ModelParams,
    StaleCacheError,
    backward,
    bce_loss,
    forward,
    init_params,
    param_count,
    predict_proba,
    validate_stack,
)
from .serialize import dumps, load, loads, save
from .train import TrainConfig, train

__all__ = [
    "DEFAULT_STACKS",
    "LSTM",
    "Activation",
    "Conv1D",
    "Dense",
    "GlobalAvgPool1D",
    "ModelParams",
    "Output",
    "ShapeError",
    "StaleCacheError",
    "TrainConfig",
    "backward",
    "bce_loss",
    "cnn_lstm_stack",
    "cnn_stack",
    "dumps",
    "forward",
    "grad_check",
    "init_params",
    "load",
    "loads",
    "lstm_stack",
    "param_count",
    "predict_proba",
    "save",
    "sigmoid",
    "small_stack",
    "train",
    "validate_stack",
]
