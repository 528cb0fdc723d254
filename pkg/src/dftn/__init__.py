"""
dftn - ternary (2-bit) quantization-aware training and packed inference
for multi-sensor activity-recognition CNNs.
"""

__version__ = "0.1.0"
