"""Default CNN, LSTM and CNN-LSTM stacks.

Widths are chosen so the parameter totals sit near 0.6 M, 0.5 M and 1.1 M.
Most of the parameters live in the dense head, where each one costs a
single multiply-add per sample; the convolutional and recurrent parts stay
narrow because their cost scales with sequence length. None of the stacks
depend on the number of input features.
"""

from .layers import LSTM, Activation, Conv1D, Dense, GlobalAvgPool1D, Output


def _head(width_in: int, hidden: tuple[int, ...]):
    layers, prev = [], width_in
    for w in hidden:
        layers += [Dense(prev, w), Activation("relu")]
        prev = w
    return layers + [Dense(prev, 1), Output()]


def _conv_stack():
    return [Conv1D(1, 64, 3), Activation("relu"), Conv1D(64, 128, 3), Activation("relu")]


def cnn_stack():
    return _conv_stack() + [GlobalAvgPool1D()] + _head(128, (768, 640))


def lstm_stack():
    return [LSTM(1, 64, return_sequences=True), LSTM(64, 64)] + _head(64, (768, 512))


def cnn_lstm_stack():
    return _conv_stack() + [LSTM(128, 64)] + _head(64, (1024, 1024))


def small_stack(kind: str):
    """Narrow variants of the defaults, for quick runs and tests."""
    if kind == "cnn":
        return [Conv1D(1, 8, 3), Activation("relu"), Conv1D(8, 16, 3), Activation("relu"), GlobalAvgPool1D()] + _head(16, (32,))
    if kind == "lstm":
        return [LSTM(1, 16, return_sequences=True), LSTM(16, 16)] + _head(16, (32,))
    if kind == "cnn_lstm":
        return [Conv1D(1, 8, 3), Activation("relu"), Conv1D(8, 16, 3), Activation("relu"), LSTM(16, 16)] + _head(16, (32,))
    raise ValueError(f"unknown architecture {kind!r}")


DEFAULT_STACKS = {"cnn": cnn_stack, "lstm": lstm_stack, "cnn_lstm": cnn_lstm_stack}
