"""Run-time bounds and switches."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Bounds:
    group_order: int = 48
    tensor_terms: int = 10**6
    # re-verify fixed-point conditions on every ghost vector built
    checks: bool = True


BOUNDS = Bounds()
