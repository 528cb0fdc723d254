"""
Minimal dense tensor algebra with hand-chained reverse-mode gradients.

Covers the four learnable layer kinds of the network (1D convolution over
time, max-pool, batch norm, dense) plus softmax cross-entropy.
"""

from .batchnorm import (
    BatchNormCache,
    BatchNormState,
    batchnorm_backward,
    batchnorm_forward,
    batchnorm_forward_cached,
)
from .conv import conv1d_backward, conv1d_forward, conv_output_length, im2col
from .dense import dense_backward, dense_forward
from .losses import softmax, softmax_cross_entropy
from .pooling import maxpool1d, maxpool1d_backward
from .tensor import DTYPE, DenseTensor, as_dense

__all__ = [
    "DTYPE",
    "DenseTensor",
    "as_dense",
    "BatchNormCache",
    "BatchNormState",
    "batchnorm_forward",
    "batchnorm_forward_cached",
    "batchnorm_backward",
    "conv1d_forward",
    "conv1d_backward",
    "conv_output_length",
    "im2col",
    "dense_forward",
    "dense_backward",
    "maxpool1d",
    "maxpool1d_backward",
    "softmax",
    "softmax_cross_entropy",
]
