"""The identity record shared by the searches and the catalog."""
from __future__ import annotations

from dataclasses import dataclass, field

from .cyclotomic import CyclotomicNumber


def source_table(level: int, case: str, k: int, l: int) -> int:
    """4 and 5 hold level one (Case 1, Case 2), 8 the level > 1 products of weights > 2, 6 the rest."""
    if level == 1:
        return 5 if case == "case2" else 4
    return 8 if k > 2 and l > 2 else 6


@dataclass
class IdentityRecord:
    """h = scalar * f * g, with f of weight k and g of weight l."""

    id: str
    level: int
    k: int
    l: int
    psi: str
    phi: str
    f: str
    g: str
    h: str
    scalar: CyclotomicNumber
    case: str  # case1_A, case1_B or case2
    table: int  # 4, 5, 6 or 8
    dimension_forced: bool = True
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "level": self.level,
            "k": self.k,
            "l": self.l,
            "psi": self.psi,
            "phi": self.phi,
            "f": self.f,
            "g": self.g,
            "h": self.h,
            "scalar": self.scalar.to_record(),
            "case": self.case,
            "table": self.table,
            "dimension_forced": self.dimension_forced,
        }

    def text(self) -> str:
        return f"{self.h} = ({self.scalar.pretty()}) * {self.f} * {self.g}"
