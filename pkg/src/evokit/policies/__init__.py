from .convnet import CONVNET_PARAM_COUNT, ConvNetPolicy, conv2d_same, convnet_layout, maxpool2
from .identity import IdentityPolicy
from .layout import ParamLayout
from .lstm import LSTMPolicy, LstmState, lstm_cell, lstm_layout
from .mlp import MLPPolicy, mlp_layout
from .seq2seq import Seq2SeqPolicy, seq2seq_layout

__all__ = [
    "ParamLayout",
    "MLPPolicy",
    "mlp_layout",
    "LSTMPolicy",
    "LstmState",
    "lstm_cell",
    "lstm_layout",
    "ConvNetPolicy",
    "convnet_layout",
    "conv2d_same",
    "maxpool2",
    "CONVNET_PARAM_COUNT",
    "Seq2SeqPolicy",
    "seq2seq_layout",
    "IdentityPolicy",
]
