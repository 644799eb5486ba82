"""Residual reports shared by the verification layers."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ResidualReport:
    """One measured identity residual.

    identity   -- name of the checked relation
    params     -- spectral parameters / sizes the check was run at
    residual   -- Frobenius-norm residual
    subspace   -- description of the subspace the residual was measured on
    tolerance  -- pass threshold, if one applies
    """

    identity: str
    residual: float
    params: dict = field(default_factory=dict)
    subspace: str = "full"
    tolerance: float | None = None

    @property
    def passed(self) -> bool | None:
        if self.tolerance is None:
            return None
        return self.residual < self.tolerance

    def as_record(self) -> dict:
        rec = {
            "name": self.identity,
            "params": {k: repr(v) for k, v in sorted(self.params.items())},
            "residual": self.residual,
            "subspace": self.subspace,
        }
        if self.tolerance is not None:
            rec["tolerance"] = self.tolerance
            rec["pass"] = bool(self.passed)
        return rec
