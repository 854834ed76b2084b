"""Closed-form qubit counts for the block placement and the planar baseline."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "PlacementParams",
    "ResourceRow",
    "ResourceReport",
    "local_block",
    "global_grid",
    "per_logical",
    "planar_baseline",
    "routing_ok",
    "compare",
    "SCHEMES",
    "ASYMPTOTIC_RATIO",
]


@dataclass(frozen=True)
class PlacementParams:
    d_o: int
    t: int = 2
    n: int = 1

    def __post_init__(self):
        if self.t < 1 or self.n < 1 or self.d_s < 1:
            raise ValueError("d_o, t, n must give d_s = d_o - t + 1 >= 1 with t, n >= 1")

    @property
    def d_s(self) -> int:
        return self.d_o - self.t + 1

    @classmethod
    def from_shortened(cls, d_s: int, t: int = 2, n: int = 1) -> PlacementParams:
        return cls(d_s + t - 1, t, n)


def local_block(p: PlacementParams) -> tuple[int, int, Fraction]:
    """(side, total qubits, qubits per logical) of a four-qubit block."""
    side = 3 * (p.d_o + p.t) - 1
    total = side * side
    return side, total, Fraction(total, 4)


def global_grid(p: PlacementParams) -> int:
    """Total physical qubits of the ``2n x 2n`` logical grid."""
    side = (5 * p.d_o + 3 * p.t - 4) * p.n + 2 * p.d_o - 1
    return side * side


def per_logical(p: PlacementParams) -> Fraction:
    """Large-``n`` limit of ``global_grid / 4n^2``."""
    return Fraction(5 * p.d_o + 3 * p.t - 4, 2) ** 2


def planar_baseline(d: int) -> int:
    if d < 1:
        raise ValueError("distance must be positive")
    return (4 * d - 2) ** 2


def routing_ok(i: int, ii: int, iii: int, d: int) -> bool:
    """Column budget around a moved qubit: each side at least d/2 and all three at least 2d."""
    return 2 * i >= d and 2 * ii >= d and i + ii + iii >= 2 * d


# per-logical formulas by provenance, as functions of the distance
SCHEMES = {
    "abstract": lambda d: Fraction(25, 4) * d * d + 5 * d + 1,
    "t2": lambda d: Fraction(5 * d + 7, 2) ** 2,
    "lengthened": lambda d: Fraction(5 * d + 12, 2) ** 2,
}
SCHEME_NOTES = {
    "abstract": "headline formula 25d^2/4+5d+1",
    "t2": "block placement, t=2, in d_s",
    "lengthened": "block placement, lengthened distance d_e",
    "t3": "t=3 narrows the channels between blocks",
}
ASYMPTOTIC_RATIO = Fraction(25, 64)


@dataclass(frozen=True)
class ResourceRow:
    d: int
    scheme: str
    per_logical: Fraction
    planar: int

    @property
    def reduction(self) -> float:
        return 1 - float(self.per_logical) / self.planar

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "scheme": self.scheme,
            "per_logical": _num(self.per_logical),
            "planar": self.planar,
            "reduction_pct": f"{100 * self.reduction:.2f}",
        }


def _num(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{float(x):.2f}"


@dataclass
class ResourceReport:
    rows: list[ResourceRow] = field(default_factory=list)

    def row(self, d: int, scheme: str) -> ResourceRow:
        for r in self.rows:
            if r.d == d and r.scheme == scheme:
                return r
        raise KeyError((d, scheme))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["d", "scheme", "per_logical", "planar", "reduction_pct"], lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r.as_dict())
        return buf.getvalue()

    def asymptotic(self) -> dict[str, str]:
        return {
            "ratio": f"{ASYMPTOTIC_RATIO.numerator}/{ASYMPTOTIC_RATIO.denominator}",
            "reduction_pct": f"{100 * (1 - float(ASYMPTOTIC_RATIO)):.2f}",
        }


def compare(ds: Iterable[int], schemes: Sequence[str] = ("abstract", "t2", "lengthened", "t3")) -> ResourceReport:
    """Per-logical counts of each scheme against the planar code, per distance.

    ``t3`` evaluates the block-placement limit with thickness 3 at
    ``d_s = d``.
    """
    ds = list(ds)
    if not ds:
        raise ValueError("empty distance range")
    rep = ResourceReport()
    for d in ds:
        for s in schemes:
            if s == "t3":
                val = per_logical(PlacementParams.from_shortened(d, 3))
            elif s in SCHEMES:
                val = Fraction(SCHEMES[s](d))
            else:
                raise ValueError(f"unknown scheme {s!r}")
            rep.rows.append(ResourceRow(d, s, val, planar_baseline(d)))
    return rep
