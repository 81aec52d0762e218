"""Reference variable pickers for comparisons: a break-only distribution
picker (probSAT style) and a noise/greedy picker (WalkSAT style).

Both operate on the same :class:`~proms.state.SearchState` and plug into
the same solve loop as the make/break distribution picker.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels as _k
from .rng import SplitMix64
from .state import SearchState, kernel_pick


@dataclass
class BaselineParams:
    cb: float = 0.9       # break-value offset of the break-only picker
    k: float = 2.06       # its exponent
    noise: float = 0.567  # noise probability of the WalkSAT-style picker

    def validate(self) -> None:
        if self.k <= 0:
            raise ValueError("k must be positive")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError("noise must be in [0, 1]")
        if self.cb <= 0:
            raise ValueError("cb must be positive")


def probsat_pick(c: int, state: SearchState, params: BaselineParams,
                 rng: SplitMix64) -> int:
    """Pick v in clause c with probability (cb + b(v))^-k, normalized."""
    params.validate()
    return kernel_pick(state, c, rng, _k.PICKER_PROBSAT,
                       cb=params.cb, kexp=params.k)


def walksat_pick(c: int, state: SearchState, params: BaselineParams,
                 rng: SplitMix64) -> int:
    """Classic noise picker: a zero-break variable if any exists (uniform
    among them), else a uniform variable with probability ``noise``,
    else a minimum-break variable (ties uniform)."""
    params.validate()
    return kernel_pick(state, c, rng, _k.PICKER_WALKSAT, noise=params.noise)
