"""
Fusion topology: which sensor channels form which sub-network and which
sub-networks are stochastically reduced.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Sequence, Tuple

from dftn.constants import DEFAULT_PHI_SEED
from dftn.errors import ConfigurationError


class FusionMode(str, Enum):
    EARLY = "early"
    LATE = "late"
    DYNAMIC = "dynamic"


# Reduced branches of the two activity presets; the hand branch always stays at full weight
FUSION_PRESETS: Dict[str, Tuple[str, ...]] = {
    "periodic": ("back",),
    "sporadic": ("back", "ankle"),
}

EARLY_STACK_NAME = "all"


@dataclass(frozen=True)
class BranchSpec:
    """A named contiguous channel span ``[start, stop)``"""

    name: str
    start: int
    stop: int
    reduced: bool = False

    @property
    def channels(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class FusionSpec:
    mode: FusionMode
    branches: Tuple[BranchSpec, ...]
    phi_seed: int = DEFAULT_PHI_SEED
    feature_dims: Tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", FusionMode(self.mode))
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.branches:
            raise ConfigurationError("at least one branch is required")
        names = [b.name for b in self.branches]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"branch names must be unique, got {names}")
        expected = 0
        for branch in self.branches:
            if branch.start != expected or branch.stop <= branch.start:
                raise ConfigurationError(
                    f"branch '{branch.name}' [{branch.start}, {branch.stop}) breaks the channel "
                    f"partition; ranges must be contiguous, ordered and non-empty"
                )
            expected = branch.stop
        reduced = [b.name for b in self.branches if b.reduced]
        if self.mode != FusionMode.DYNAMIC and reduced:
            raise ConfigurationError(
                f"{self.mode.value} fusion cannot reduce branches, got {reduced}"
            )
        if self.mode == FusionMode.DYNAMIC and len(reduced) == len(self.branches):
            raise ConfigurationError("dynamic fusion needs at least one non-reduced branch")

    @property
    def sensor_channels(self) -> int:
        return self.branches[-1].stop

    def stacks(self) -> List[BranchSpec]:
        """Sub-networks in forward order: one over every channel for early fusion"""
        if self.mode == FusionMode.EARLY:
            return [BranchSpec(EARLY_STACK_NAME, 0, self.sensor_channels)]
        return list(self.branches)

    def reduced_names(self) -> List[str]:
        return [b.name for b in self.branches if b.reduced]

    def with_feature_dims(self, dims: Sequence[int]) -> "FusionSpec":
        return replace(self, feature_dims=tuple(int(d) for d in dims))


def build_fusion_spec(
    mode: str,
    ranges: Sequence[Tuple[str, int, int]],
    reduced: Iterable[str] = (),
    phi_seed: int = DEFAULT_PHI_SEED,
) -> FusionSpec:
    """
    Build a spec from named channel ranges.

    ``reduced`` holds branch names or a preset name (``periodic``/``sporadic``).
    Reduction is only meaningful for dynamic fusion; other modes ignore it.
    """
    names = resolve_reduced(reduced)
    known = {name for name, _, _ in ranges}
    unknown = [name for name in names if name not in known]
    if unknown and FusionMode(mode) == FusionMode.DYNAMIC:
        raise ConfigurationError(f"unknown branches in reduced set: {unknown}")
    dynamic = FusionMode(mode) == FusionMode.DYNAMIC
    branches = tuple(
        BranchSpec(name, start, stop, reduced=dynamic and name in names)
        for name, start, stop in ranges
    )
    return FusionSpec(mode=FusionMode(mode), branches=branches, phi_seed=phi_seed)


def resolve_reduced(reduced: Iterable[str]) -> List[str]:
    """Expand preset names into branch names, keeping order and dropping duplicates"""
    names: List[str] = []
    for item in reduced:
        item = item.strip()
        if not item:
            continue
        for name in FUSION_PRESETS.get(item, (item,)):
            if name not in names:
                names.append(name)
    return names
