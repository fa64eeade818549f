"""Oracle caps, overridable from the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_ENUM_CAP = "FVSKERNEL_ENUM_CAP"
ENV_BRUTE_CAP = "FVSKERNEL_BRUTE_CAP"


@dataclass(frozen=True)
class OracleCaps:
    # enumerate_minimum_fvs walks all 2^n subsets; brute_force_fvs stops at the optimum
    enumerate_cap: int = 16
    brute_cap: int = 20

    @classmethod
    def from_env(cls) -> "OracleCaps":
        base = cls()
        return cls(
            enumerate_cap=int(os.environ.get(ENV_ENUM_CAP, base.enumerate_cap)),
            brute_cap=int(os.environ.get(ENV_BRUTE_CAP, base.brute_cap)),
        )


def default_caps() -> OracleCaps:
    return OracleCaps.from_env()
