"""Channel specifier strings used by the CLI and suites.

``identity``, ``trace``, ``expectation`` (uniform diagonal average),
``ptrace:<d1>x<d2>:factor=<1|2>`` and ``random:<none|unital|tp>:rank=<r>``.
Random channels are redrawn every trial; the others are fixed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..cpmaps import (
    CPMap,
    expectation_channel,
    identity_channel,
    partial_trace_map,
    random_cp,
    trace_channel,
)
from ..errors import ConfigError

_NORMALIZATIONS = {"none": "none", "unital": "unital", "tp": "trace_preserving",
                   "trace_preserving": "trace_preserving"}


@dataclass(frozen=True)
class ChannelSpec:
    text: str
    kind: str
    normalization: str = "none"
    rank: int = 1
    factors: tuple = ()
    traced: int = 2

    @property
    def unital(self) -> bool:
        return self.kind in ("identity", "expectation") or (
            self.kind == "random" and self.normalization == "unital"
        )

    def sample(self, dim: int, dim_out: int, rng: np.random.Generator) -> CPMap:
        """Draw (or build) the channel; fixed channels ignore the sizes they cannot honor."""
        if self.kind == "identity":
            return identity_channel(dim)
        if self.kind == "trace":
            return trace_channel(dim)
        if self.kind == "expectation":
            return expectation_channel(np.full(dim, 1.0 / dim))
        if self.kind == "ptrace":
            d1, d2 = self.factors
            return partial_trace_map(d1, d2, self.traced)
        return random_cp(dim, dim_out, self.rank, self.normalization, rng)


def parse_channel(text: str) -> ChannelSpec:
    text = text.strip()
    parts = text.split(":")
    head = parts[0]
    if head in ("identity", "trace", "expectation") and len(parts) == 1:
        return ChannelSpec(text, head)
    try:
        if head == "ptrace":
            d1, d2 = (int(x) for x in parts[1].split("x"))
            traced = 2
            for opt in parts[2:]:
                key, _, val = opt.partition("=")
                if key != "factor":
                    raise ConfigError(f"unknown ptrace option {opt!r}")
                traced = int(val)
            if traced not in (1, 2) or d1 < 1 or d2 < 1:
                raise ConfigError(f"bad partial trace specifier {text!r}")
            return ChannelSpec(text, "ptrace", factors=(d1, d2), traced=traced)
        if head == "random":
            norm = _NORMALIZATIONS[parts[1]] if len(parts) > 1 else "none"
            rank = 1
            for opt in parts[2:]:
                key, _, val = opt.partition("=")
                if key != "rank":
                    raise ConfigError(f"unknown random-channel option {opt!r}")
                rank = int(val)
            if rank < 1:
                raise ConfigError("rank must be >= 1")
            return ChannelSpec(text, "random", normalization=norm, rank=rank)
    except (ValueError, KeyError, IndexError) as exc:
        raise ConfigError(f"bad channel specifier {text!r}") from exc
    raise ConfigError(f"unknown channel specifier {text!r}")
