"""LSTM / BD-LSTM classifier: parameters, passes, training, model files."""

from sentweet.net.cellkernels import available_backends, backend_name, select_backend
from sentweet.net.network import (
    Prediction,
    backward,
    backward_batch,
    bce_loss,
    forward,
    forward_batch,
    lstm_cell,
    predict,
)
from sentweet.net.params import LayerParams, NetworkParameters, init_network, params_equal
from sentweet.net.serialize import load_model, save_model
from sentweet.net.training import TrainConfig, train

__all__ = [
    "available_backends",
    "backend_name",
    "select_backend",
    "Prediction",
    "backward",
    "backward_batch",
    "bce_loss",
    "forward",
    "forward_batch",
    "lstm_cell",
    "predict",
    "LayerParams",
    "NetworkParameters",
    "init_network",
    "params_equal",
    "load_model",
    "save_model",
    "TrainConfig",
    "train",
]
