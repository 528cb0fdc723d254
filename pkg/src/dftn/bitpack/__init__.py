"""
Packed run-time representation: bit-plane ternary tensors, popcount kernels
and threshold-form quantized batch norm.
"""

from .batchnorm import QuantBNThresholds, compute_thresholds, fold_running_stats, quantize_bn_apply
from .kernels import conv1d_packed, dense_packed, dot_packed, signed_count, xnor_dot
from .packing import TernaryTensor, pack_bits, pack_ternary, unpack_bits, unpack_ternary

__all__ = [
    "TernaryTensor",
    "pack_bits",
    "unpack_bits",
    "pack_ternary",
    "unpack_ternary",
    "dot_packed",
    "dense_packed",
    "conv1d_packed",
    "signed_count",
    "xnor_dot",
    "QuantBNThresholds",
    "compute_thresholds",
    "fold_running_stats",
    "quantize_bn_apply",
]
