"""Early, late and dynamic fusion of per-branch feature maps."""

from .sampling import (
    FusionWeights,
    apply_fusion,
    identity_fusion,
    keep_probability,
    sample_fusion_weights,
)
from .spec import (
    FUSION_PRESETS,
    BranchSpec,
    FusionMode,
    FusionSpec,
    build_fusion_spec,
    resolve_reduced,
)

__all__ = [
    "BranchSpec",
    "FusionMode",
    "FusionSpec",
    "FUSION_PRESETS",
    "build_fusion_spec",
    "resolve_reduced",
    "FusionWeights",
    "keep_probability",
    "sample_fusion_weights",
    "identity_fusion",
    "apply_fusion",
]
