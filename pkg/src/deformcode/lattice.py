"""Surface-code lattices, superstabilizers and deformation-based qubits.

Grid convention: cell ``(r, c)`` holds a data qubit when ``r + c`` is even and
an ancilla otherwise; X-type ancillas sit on even rows and Z-type ancillas on
odd rows. This gives a planar patch with two boundary types. Closed lattices
(X-type boundary on all four sides) shift the pattern by one column
(``col_offset=1``), so their cell ``(0, 0)`` is an X ancilla.

A deformation-based qubit is described by a set of Z plaquettes and a set of X
plaquettes that are merged into one Z and one X superstabilizer. Data qubits
whose two Z (or two X) plaquettes both belong to the merged set are disabled.
Each merged set is split into two halves by the crossing superstabilizer; the
logical operators are chains connecting the halves.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Literal, Sequence

import networkx as nx

from .pauli import PauliString, gf2_rank

Coord = tuple[int, int]
Kind = Literal["X", "Z"]
Shape = Literal["four_fin", "bar", "skew", "custom"]

BOUNDARY = ("boundary",)

__all__ = [
    "Coord",
    "Stabilizer",
    "DeformationQubit",
    "Layout",
    "LayoutError",
    "build_lattice",
    "make_deformation_qubit",
    "region_qubit",
    "code_distance",
    "chain_distance",
    "superstabilizer_loops",
    "code_state",
    "error_on",
    "min_combined_operator",
    "placement_check",
    "Violation",
    "inject_error",
    "extract_syndrome",
    "gf2_rank",
]


class LayoutError(ValueError):
    """Invalid lattice construction or placement."""


def _other(kind: str) -> str:
    return "Z" if kind == "X" else "X"


def _nbrs(p: Coord) -> list[Coord]:
    r, c = p
    return [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]


@dataclass(frozen=True)
class Stabilizer:
    kind: Kind
    support: frozenset[Coord]
    is_super: bool = False
    ancilla_plan: tuple[Coord, ...] = ()
    owner: int | None = None

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class DeformationQubit:
    """Crossed pair of superstabilizers holding one logical qubit."""

    center: Coord
    shape: str
    z_halves: tuple[frozenset[Coord], frozenset[Coord]]
    x_halves: tuple[frozenset[Coord], frozenset[Coord]]
    thickness: int = 1
    declared_distance: int = 0
    z_logical: frozenset[Coord] = frozenset()
    x_logical: frozenset[Coord] = frozenset()

    @property
    def z_region(self) -> frozenset[Coord]:
        return self.z_halves[0] | self.z_halves[1]

    @property
    def x_region(self) -> frozenset[Coord]:
        return self.x_halves[0] | self.x_halves[1]

    def halves(self, kind: str) -> tuple[frozenset[Coord], frozenset[Coord]]:
        return self.z_halves if kind == "Z" else self.x_halves

    def region(self, kind: str) -> frozenset[Coord]:
        return self.z_region if kind == "Z" else self.x_region


@dataclass(frozen=True)
class Layout:
    width: int
    height: int
    col_offset: int = 0
    qubits: tuple[DeformationQubit, ...] = ()
    extra_disabled: frozenset[Coord] = frozenset()

    # -- roles ----------------------------------------------------------------

    def in_grid(self, p: Coord) -> bool:
        return 0 <= p[0] < self.height and 0 <= p[1] < self.width

    def cell_type(self, p: Coord) -> str:
        r, c = p[0], p[1] + self.col_offset
        if (r + c) % 2 == 0:
            return "data"
        return "ancilla_X" if r % 2 == 0 else "ancilla_Z"

    def role(self, p: Coord) -> str:
        t = self.cell_type(p)
        if t == "data" and p in self.disabled:
            return "disabled"
        return t

    @cached_property
    def all_data(self) -> tuple[Coord, ...]:
        return tuple(
            (r, c) for r in range(self.height) for c in range(self.width) if self.cell_type((r, c)) == "data"
        )

    def plaquettes(self, kind: str) -> list[Coord]:
        want = "ancilla_" + kind
        return [(r, c) for r in range(self.height) for c in range(self.width) if self.cell_type((r, c)) == want]

    def plaquette_data(self, p: Coord) -> list[Coord]:
        return [q for q in _nbrs(p) if self.in_grid(q)]

    def data_plaquettes(self, q: Coord, kind: str) -> list[Coord]:
        want = "ancilla_" + kind
        return [p for p in _nbrs(q) if self.in_grid(p) and self.cell_type(p) == want]

    @cached_property
    def disabled(self) -> frozenset[Coord]:
        out = set(self.extra_disabled)
        for dq in self.qubits:
            out |= _interior_data(self, dq)
        return frozenset(out)

    @cached_property
    def data(self) -> tuple[Coord, ...]:
        """Enabled data qubits in row-major order (tableau index order)."""
        return tuple(q for q in self.all_data if q not in self.disabled)

    @cached_property
    def index(self) -> dict[Coord, int]:
        return {q: i for i, q in enumerate(self.data)}

    @property
    def n_data(self) -> int:
        return len(self.data)

    # -- stabilizers ----------------------------------------------------------

    @cached_property
    def region_owner(self) -> dict[tuple[str, Coord], int]:
        own: dict[tuple[str, Coord], int] = {}
        for i, dq in enumerate(self.qubits):
            for kind in "XZ":
                for p in dq.region(kind):
                    own[(kind, p)] = i
        return own

    @cached_property
    def stabilizers(self) -> tuple[Stabilizer, ...]:
        enabled = set(self.data)
        out: list[Stabilizer] = []
        for kind in "ZX":
            for p in self.plaquettes(kind):
                if (kind, p) in self.region_owner:
                    continue
                supp = frozenset(q for q in self.plaquette_data(p) if q in enabled)
                if supp:
                    out.append(Stabilizer(kind, supp, False, (p,)))
            for i, dq in enumerate(self.qubits):
                supp: set[Coord] = set()
                for p in dq.region(kind):
                    supp ^= set(self.plaquette_data(p))
                out.append(Stabilizer(kind, frozenset(supp & enabled), True, tuple(sorted(dq.region(kind))), i))
        return tuple(out)

    def supers(self, kind: str | None = None) -> list[Stabilizer]:
        return [s for s in self.stabilizers if s.is_super and (kind is None or s.kind == kind)]

    def pauli(self, coords: Iterable[Coord], letter: str, sign: int = 1) -> PauliString:
        idx = self.index
        try:
            return PauliString.from_sparse(self.n_data, {idx[q]: letter for q in coords}, sign)
        except KeyError as exc:
            raise LayoutError(f"coordinate {exc.args[0]} is not an enabled data qubit") from None

    def stabilizer_pauli(self, s: Stabilizer) -> PauliString:
        return self.pauli(s.support, s.kind)

    def half_support(self, dq: DeformationQubit, kind: str, which: int) -> frozenset[Coord]:
        """Support of the product of one half of a superstabilizer."""
        supp: set[Coord] = set()
        for p in dq.halves(kind)[which]:
            supp ^= set(self.plaquette_data(p))
        return frozenset(supp & set(self.data))

    def counts(self) -> dict[str, int]:
        """Data count, stabilizer counts and GF(2) ranks."""
        zs = [self.stabilizer_pauli(s) for s in self.stabilizers if s.kind == "Z"]
        xs = [self.stabilizer_pauli(s) for s in self.stabilizers if s.kind == "X"]
        rz, rx = gf2_rank(zs), gf2_rank(xs)
        return {
            "data": self.n_data,
            "z_stabilizers": len(zs),
            "x_stabilizers": len(xs),
            "z_independent": rz,
            "x_independent": rx,
            "independent": rz + rx,
            "logical": self.n_data - rz - rx,
            "cells": self.width * self.height,
        }

    # -- builders -------------------------------------------------------------

    def with_qubit(self, dq: DeformationQubit) -> Layout:
        for kind in "XZ":
            for p in dq.region(kind):
                if not self.in_grid(p) or self.cell_type(p) != "ancilla_" + kind:
                    raise LayoutError(f"{kind} region cell {p} is not a {kind} plaquette inside the lattice")
                if (kind, p) in self.region_owner:
                    raise LayoutError(f"plaquette {p} already belongs to a superstabilizer")
        return replace(self, qubits=self.qubits + (dq,))

    def replace_qubit(self, i: int, dq: DeformationQubit) -> Layout:
        qs = list(self.qubits)
        qs[i] = dq
        return replace(self, qubits=tuple(qs))

    def without_qubits(self, idx: Iterable[int]) -> Layout:
        drop = set(idx)
        return replace(self, qubits=tuple(q for i, q in enumerate(self.qubits) if i not in drop))

    # -- graphs ---------------------------------------------------------------

    def error_graph(self, kind: str) -> nx.Graph:
        """Graph whose nodes are ``kind`` stabilizers (halves split), edges data qubits.

        A chain of ``other(kind)`` errors is a path; each edge stores the data
        coordinate it stands for.
        """
        return _error_graph(self, kind)

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "col_offset": self.col_offset,
            "roles": [[r, c, self.role((r, c))] for r in range(self.height) for c in range(self.width)],
            "supers": [
                {"kind": s.kind, "owner": s.owner, "plaquettes": [list(p) for p in s.ancilla_plan],
                 "support": sorted(list(q) for q in s.support)}
                for s in self.supers()
            ],
            "qubits": [_qubit_json(dq) for dq in self.qubits],
            "extra_disabled": sorted(list(q) for q in self.extra_disabled),
        }

    @classmethod
    def from_json(cls, obj: dict) -> Layout:
        try:
            lay = cls(int(obj["width"]), int(obj["height"]), int(obj.get("col_offset", 0)),
                      extra_disabled=frozenset(tuple(q) for q in obj.get("extra_disabled", [])))
            for qobj in obj.get("qubits", []):
                lay = lay.with_qubit(_qubit_from_json(qobj))
        except (KeyError, TypeError) as exc:
            raise LayoutError(f"malformed layout JSON: {exc}") from None
        return lay

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> Layout:
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise LayoutError(f"{path}: {exc}") from None
        return cls.from_json(obj)


def _qubit_json(dq: DeformationQubit) -> dict:
    return {
        "center": list(dq.center),
        "shape": dq.shape,
        "thickness": dq.thickness,
        "declared_distance": dq.declared_distance,
        "z_halves": [sorted(list(p) for p in h) for h in dq.z_halves],
        "x_halves": [sorted(list(p) for p in h) for h in dq.x_halves],
        "z_logical": sorted(list(q) for q in dq.z_logical),
        "x_logical": sorted(list(q) for q in dq.x_logical),
    }


def _qubit_from_json(o: dict) -> DeformationQubit:
    def cs(items):
        return frozenset(tuple(p) for p in items)

    return DeformationQubit(
        center=tuple(o["center"]),
        shape=o["shape"],
        z_halves=(cs(o["z_halves"][0]), cs(o["z_halves"][1])),
        x_halves=(cs(o["x_halves"][0]), cs(o["x_halves"][1])),
        thickness=int(o.get("thickness", 1)),
        declared_distance=int(o.get("declared_distance", 0)),
        z_logical=cs(o.get("z_logical", [])),
        x_logical=cs(o.get("x_logical", [])),
    )


def _interior_data(lay: Layout, dq: DeformationQubit) -> set[Coord]:
    out = set()
    for kind in "XZ":
        reg = dq.region(kind)
        for p in reg:
            for q in lay.plaquette_data(p):
                ps = lay.data_plaquettes(q, kind)
                if len(ps) == 2 and all(x in reg for x in ps):
                    out.add(q)
    return out


def _node_for(lay: Layout, kind: str, p: Coord):
    owner = lay.region_owner.get((kind, p))
    if owner is None:
        return p
    dq = lay.qubits[owner]
    return ("half", owner, 0 if p in dq.halves(kind)[0] else 1)


def _error_graph(lay: Layout, kind: str) -> nx.Graph:
    g = nx.Graph()
    g.add_node(BOUNDARY)
    for s in lay.stabilizers:
        if s.kind != kind:
            continue
        if s.is_super:
            g.add_node(("half", s.owner, 0))
            g.add_node(("half", s.owner, 1))
        else:
            g.add_node(s.ancilla_plan[0])
    for q in lay.data:
        ends = [_node_for(lay, kind, p) for p in lay.data_plaquettes(q, kind)]
        if len(ends) == 1:
            ends.append(BOUNDARY)
        if len(ends) != 2 or ends[0] == ends[1]:
            continue
        if not g.has_edge(*ends):
            g.add_edge(*ends, qubit=q)
    return g


def _half_nodes(i: int):
    return ("half", i, 0), ("half", i, 1)


def build_lattice(width: int, height: int, boundary: Literal["closed", "planar"] = "closed") -> Layout:
    """Rectangular lattice of ``height`` rows and ``width`` columns of cells.

    ``closed`` puts X-type boundaries on all four sides (every data qubit is in
    two X stabilizers), so the bare lattice encodes nothing. ``planar`` gives a
    planar-code patch with one logical qubit.
    """
    if width < 3 or height < 3:
        raise LayoutError("lattice needs at least 3x3 cells")
    if width % 2 == 0 or height % 2 == 0:
        raise LayoutError("width and height must be odd")
    if boundary not in ("closed", "planar"):
        raise LayoutError(f"unknown boundary {boundary!r}")
    return Layout(width, height, 1 if boundary == "closed" else 0)


# -- deformation-qubit geometry ------------------------------------------------


def _axes(lay: Layout, center: Coord) -> tuple[Coord, Coord]:
    """Unit steps (z_axis, x_axis) from ``center`` to its Z and X plaquettes."""
    if lay.cell_type(center) != "data":
        raise LayoutError(f"center {center} is not a data qubit")
    r, c = center
    if lay.cell_type((r - 1, c)) == "ancilla_Z":
        return (1, 0), (0, 1)
    return (0, 1), (1, 0)


def _at(center: Coord, axis: Coord, along: int, perp_axis: Coord = (0, 0), perp: int = 0) -> Coord:
    return (center[0] + axis[0] * along + perp_axis[0] * perp, center[1] + axis[1] * along + perp_axis[1] * perp)


def _four_fin_regions(center, za, xa, m, t):
    # arms are t plaquettes wide; the crossing block is spanned by 2(t-1) cells
    # and its plaquettes join the first half of each superstabilizer
    span = 2 * (t - 1)
    widths = range(t)
    z0 = {_at(center, za, -(2 * j - 1), xa, 2 * w) for j in range(1, m + 1) for w in widths}
    z0 |= {_at(center, za, 2 * v - 1, xa, 2 * w) for v in range(1, t) for w in widths}
    z1 = {_at(center, za, span + 2 * j - 1, xa, 2 * w) for j in range(1, m + 1) for w in widths}
    x0 = {_at(center, xa, -(2 * j - 1), za, 2 * w) for j in range(1, m + 1) for w in widths}
    x0 |= {_at(center, xa, 2 * v - 1, za, 2 * w) for v in range(1, t) for w in widths}
    x1 = {_at(center, xa, span + 2 * j - 1, za, 2 * w) for j in range(1, m + 1) for w in widths}
    return (frozenset(z0), frozenset(z1)), (frozenset(x0), frozenset(x1))


def _bar_regions(center, za, xa, a, o):
    z0 = frozenset(_at(center, za, -1, xa, 2 * j) for j in range(-a, a + 1))
    z1 = frozenset(_at(center, za, 1, xa, 2 * j) for j in range(-a, a + 1))
    span = a + o
    x0 = frozenset(_at(center, xa, -(2 * j - 1)) for j in range(1, span + 1))
    x1 = frozenset(_at(center, xa, 2 * j - 1) for j in range(1, span + 1))
    return (z0, z1), (x0, x1)


def _skew_regions(center, za, xa, m):
    # staircase Z arms: alternate steps along the Z axis and the X axis
    def stair(sign):
        cells, along, perp = [], -1 if sign < 0 else 1, 0
        cells.append(_at(center, za, along, xa, perp))
        for step in range(1, 2 * m - 1):
            if step % 2:
                along += 2 * sign
            else:
                perp += 2 * sign
            cells.append(_at(center, za, along, xa, perp))
        return frozenset(cells)

    x0 = frozenset(_at(center, xa, -(2 * j - 1)) for j in range(1, m + 1))
    x1 = frozenset(_at(center, xa, 2 * j - 1) for j in range(1, m + 1))
    return (stair(-1), stair(1)), (x0, x1)


def _regions(lay, center, shape, size, thickness):
    za, xa = _axes(lay, center)
    if shape == "four_fin":
        return _four_fin_regions(center, za, xa, size, thickness)
    if shape == "bar":
        return _bar_regions(center, za, xa, size - 1, size)
    if shape == "skew":
        return _skew_regions(center, za, xa, size)
    raise LayoutError(f"unknown shape {shape!r}")


def region_qubit(
    lay: Layout,
    center: Coord,
    z_halves: tuple[Iterable[Coord], Iterable[Coord]],
    x_halves: tuple[Iterable[Coord], Iterable[Coord]],
    shape: str = "custom",
    thickness: int = 1,
) -> tuple[Layout, DeformationQubit]:
    """Add a qubit with explicitly given plaquette halves; distance is computed."""
    dq = DeformationQubit(
        center=center,
        shape=shape,
        z_halves=(frozenset(z_halves[0]), frozenset(z_halves[1])),
        x_halves=(frozenset(x_halves[0]), frozenset(x_halves[1])),
        thickness=thickness,
    )
    for kind in "XZ":
        h = dq.halves(kind)
        if not h[0] or not h[1] or h[0] & h[1]:
            raise LayoutError(f"{kind} halves must be two disjoint non-empty sets")
    new = lay.with_qubit(dq)
    if lay.disabled & _interior_data(new, dq):
        raise LayoutError("qubit overlaps an existing deformation region")
    i = len(new.qubits) - 1
    dq = _with_logicals(new, i)
    return new.replace_qubit(i, dq), dq


def _with_logicals(lay: Layout, i: int) -> DeformationQubit:
    dq = lay.qubits[i]
    wz, x_chain = _tjoin(lay, "Z", [i])
    wx, z_chain = _tjoin(lay, "X", [i])
    # an X chain joining the Z halves is the logical X, and dually for Z
    return replace(dq, declared_distance=min(wz, wx), x_logical=x_chain, z_logical=z_chain)


def make_deformation_qubit(
    lay: Layout,
    center: Coord,
    distance: int,
    shape: Shape = "four_fin",
    thickness: int = 1,
) -> tuple[Layout, DeformationQubit]:
    """Create a qubit of the requested shape and isolated distance ``distance``.

    The smallest arm size reaching ``distance`` away from any boundary is used.
    Returns the new layout and the qubit; ``declared_distance`` is the distance
    computed in the layout it was placed in.
    """
    if distance < 3:
        raise LayoutError("distance must be at least 3")
    if thickness < 1:
        raise LayoutError("thickness must be positive")
    if shape not in ("four_fin", "bar", "skew"):
        raise LayoutError(f"unknown shape {shape!r}")
    if shape != "four_fin" and thickness != 1:
        raise LayoutError(f"{shape} supports thickness 1 only")
    got = 0
    for size in range(1, distance + 2):
        regions = _regions(lay, center, shape, size, thickness)
        got = _isolated_distance(lay, center, regions, shape, thickness)
        if got >= distance:
            break
    if got != distance:
        raise LayoutError(f"{shape} with thickness {thickness} cannot realize distance {distance} (got {got})")
    (z0, z1), (x0, x1) = regions
    return region_qubit(lay, center, (z0, z1), (x0, x1), shape, thickness)


def _isolated_distance(lay: Layout, center: Coord, regions, shape: str, thickness: int) -> int:
    # place the same regions far from any boundary (even shifts keep parity)
    cells = [p for pair in regions for h in pair for p in h] + [center]
    pad = 2 * (max(lay.width, lay.height) // 2 + 4)
    rmin = min(p[0] for p in cells)
    cmin = min(p[1] for p in cells)
    dr = pad - rmin + (rmin % 2)
    dc = pad - cmin + (cmin % 2)
    size = pad * 2 + max(lay.width, lay.height) + 1
    probe = Layout(size + (size + 1) % 2, size + (size + 1) % 2, lay.col_offset)

    def mv(h):
        return frozenset((r + dr, c + dc) for r, c in h)

    (z0, z1), (x0, x1) = regions
    _, dq = region_qubit(probe, (center[0] + dr, center[1] + dc), (mv(z0), mv(z1)), (mv(x0), mv(x1)), shape, thickness)
    return dq.declared_distance


# -- analyses -----------------------------------------------------------------


def _qubit_index(lay: Layout, q: DeformationQubit | int) -> int:
    if isinstance(q, int):
        if not 0 <= q < len(lay.qubits):
            raise LayoutError(f"no qubit {q}")
        return q
    for i, dq in enumerate(lay.qubits):
        if dq.center == q.center and dq.z_halves == q.z_halves and dq.x_halves == q.x_halves:
            return i
    raise LayoutError("qubit does not belong to this layout")


def _min_pairing(nodes: tuple, dist: dict, to_bnd: dict, memo: dict) -> tuple[float, tuple]:
    """Cheapest way to pair up ``nodes``; any node may instead end on the boundary."""
    if not nodes:
        return 0, ()
    if nodes in memo:
        return memo[nodes]
    first, rest = nodes[0], nodes[1:]
    sub, pairs = _min_pairing(rest, dist, to_bnd, memo)
    best = (to_bnd[first] + sub, ((first, BOUNDARY),) + pairs)
    for j, other in enumerate(rest):
        d = dist[first].get(other, float("inf"))
        if d >= best[0]:
            continue
        sub, pairs = _min_pairing(rest[:j] + rest[j + 1:], dist, to_bnd, memo)
        if d + sub < best[0]:
            best = (d + sub, ((first, other),) + pairs)
    memo[nodes] = best
    return best


def _tjoin(lay: Layout, kind: str, idx: Sequence[int]) -> tuple[int, frozenset[Coord]]:
    """Minimum chain whose endpoints are exactly the halves of the chosen supers.

    The lattice boundary absorbs any number of endpoints. Returns the weight
    and the data qubits of one minimum chain.
    """
    g = lay.error_graph(kind)
    terms = tuple(n for i in idx for n in _half_nodes(i))
    dist = {t: nx.single_source_shortest_path_length(g, t) for t in terms}
    to_bnd = {t: dist[t].get(BOUNDARY, float("inf")) for t in terms}
    w, pairs = _min_pairing(terms, dist, to_bnd, {})
    if w == float("inf"):
        raise LayoutError("superstabilizer halves are not connected; qubit is malformed")
    support: set[Coord] = set()
    for a, b in pairs:
        path = nx.shortest_path(g, a, b)
        support ^= {g.edges[u, v]["qubit"] for u, v in zip(path, path[1:])}
    return int(w), frozenset(support)


def chain_distance(lay: Layout, q: DeformationQubit | int, kind: str) -> int:
    """Weight of the lightest chain separating the two halves of the ``kind`` super.

    For ``kind="Z"`` this is the lightest logical X, for ``"X"`` the lightest
    logical Z.
    """
    return _tjoin(lay, kind, [_qubit_index(lay, q)])[0]


def code_distance(lay: Layout, q: DeformationQubit | int) -> int:
    return min(chain_distance(lay, q, "Z"), chain_distance(lay, q, "X"))


def min_combined_operator(
    lay: Layout, qs: Iterable[DeformationQubit | int], kind: str = "Z", with_witness: bool = False
):
    """Minimum weight of an operator acting as the product of the chosen logicals.

    ``kind="Z"`` looks for X chains ending on the halves of Z superstabilizers
    (the product of logical X operators); ``kind="X"`` is the dual. With
    ``kind=None`` the smaller of the two is returned.
    """
    idx = sorted({_qubit_index(lay, q) for q in qs})
    if not idx:
        raise LayoutError("empty qubit set")
    if kind is None:
        res = min((_tjoin(lay, k, idx) for k in "ZX"), key=lambda r: r[0])
    else:
        res = _tjoin(lay, kind, idx)
    return res if with_witness else res[0]


@dataclass(frozen=True)
class Violation:
    rule: str
    qubits: tuple[int, ...]
    kind: str
    weight: int
    detail: str = ""


def _links(lay: Layout, kind: str) -> dict[tuple, int]:
    """Shortest chains between halves of different supers that touch no other super."""
    g = lay.error_graph(kind)
    halves = [h for i in range(len(lay.qubits)) for h in _half_nodes(i)]
    out: dict[tuple, int] = {}
    for h in halves:
        seen = {h: 0}
        frontier = [h]
        while frontier:
            nxt = []
            for u in frontier:
                if u != h and (u == BOUNDARY or u[0] == "half"):
                    continue
                for v in g[u]:
                    if v not in seen:
                        seen[v] = seen[u] + 1
                        nxt.append(v)
            frontier = nxt
        for v, dist in seen.items():
            if v != h and v != BOUNDARY and v[0] == "half" and v[1] != h[1]:
                out[(h, v)] = dist
    return out


def superstabilizer_loops(lay: Layout, kind: str, reach: int | None = None) -> list[tuple[int, ...]]:
    """Sets of qubits whose ``kind`` superstabilizers close into a loop.

    Supers are linked when a chain touching no other super joins halves of two
    of them with weight below ``reach`` (default: the smaller declared distance
    of the pair). A loop enters every qubit on one half and leaves it on the
    other, so the links alone make up a combined logical operator.
    """
    d = nx.DiGraph()
    for (h, g), w in _links(lay, kind).items():
        lim = reach if reach is not None else min(lay.qubits[h[1]].declared_distance,
                                                   lay.qubits[g[1]].declared_distance)
        if w < lim:
            # cross qubit h[1] from its other half, then hop onto half g
            d.add_edge(("half", h[1], 1 - h[2]), g)
    found = set()
    for cyc in nx.simple_cycles(d):
        qs = [h[1] for h in cyc]
        if len(set(qs)) == len(qs) and len(qs) >= 2:
            found.add(tuple(sorted(qs)))
    return sorted(found)


def placement_check(lay: Layout, min_distance: int | None = None, max_cluster: int = 4) -> list[Violation]:
    """Report placement problems.

    * ``loop``: superstabilizers linked into a cycle by short chains whose
      combined logical operator is lighter than the required distance.
    * ``combined``: a cluster of qubits whose combined logical operator is
      lighter than the required distance.
    * ``boundary``: a qubit whose own distance in context (two boundaries of
      the same type brought close by neighbours) drops below the requirement.

    ``min_distance`` defaults to each qubit's declared distance.
    """
    out: list[Violation] = []
    n = len(lay.qubits)
    if n == 0:
        return out

    def need(ids):
        if min_distance is not None:
            return min_distance
        return min(lay.qubits[i].declared_distance for i in ids)

    for i in range(n):
        for kind in "ZX":
            w = chain_distance(lay, i, kind)
            if w < need((i,)):
                out.append(Violation("boundary", (i,), kind, w, f"{kind} boundaries too close"))
    for kind in "ZX":
        flagged: list[set[int]] = [set(v.qubits) for v in out if v.kind == kind]
        for ids in superstabilizer_loops(lay, kind, reach=min_distance):
            w = min_combined_operator(lay, ids, kind)
            if w < need(ids):
                out.append(Violation("loop", ids, kind, w, f"{kind} superstabilizers form a loop"))
                flagged.append(set(ids))
        for size in range(2, min(max_cluster, n) + 1):
            for ids in itertools.combinations(range(n), size):
                if any(f <= set(ids) for f in flagged):
                    continue
                w = min_combined_operator(lay, ids, kind)
                if w < need(ids):
                    out.append(Violation("combined", ids, kind, w, "combined logical operator below distance"))
                    flagged.append(set(ids))
    return out


# -- errors and syndromes ------------------------------------------------------


def inject_error(lay: Layout, t, chain: PauliString):
    """Apply a Pauli error chain to a tableau holding the layout's state."""
    if chain.n_qubits != lay.n_data:
        raise LayoutError("chain does not match the layout's enabled data qubits")
    t.apply_pauli(chain)
    return t


def error_on(lay: Layout, coords: Iterable[Coord], letter: str) -> PauliString:
    """Pauli chain on data coordinates; disabled qubits are rejected."""
    coords = list(coords)
    bad = [q for q in coords if q in lay.disabled or lay.cell_type(q) != "data"]
    if bad:
        raise LayoutError(f"error chain touches disabled or non-data cells {bad}")
    return lay.pauli(coords, letter)


def extract_syndrome(lay: Layout, t) -> set[Stabilizer]:
    """Stabilizers with eigenvalue -1 in tableau ``t``."""
    return {s for s in lay.stabilizers if t.expectation(lay.stabilizer_pauli(s)) == -1}


def code_state(lay: Layout, seed: int | None = None, logical: dict[int, str] | None = None):
    """Tableau for the +1 eigenstate of every layout stabilizer.

    ``logical`` maps qubit index to ``"Z"`` or ``"X"`` (fixing that logical to
    +1); unlisted deformation qubits are fixed in logical ``|0>``. The
    logical of a planar patch is left as the stabilizer projection chose it.
    """
    from .tableau import StabilizerTableau

    t = StabilizerTableau(lay.n_data, seed)
    for s in lay.stabilizers:
        if s.kind == "X":
            t.measure_pauli(lay.stabilizer_pauli(s), forced=1)
    for s in lay.stabilizers:
        if s.kind == "Z":
            t.measure_pauli(lay.stabilizer_pauli(s), forced=1)
    logical = logical or {}
    for i, dq in enumerate(lay.qubits):
        which = logical.get(i, "Z")
        op = lay.pauli(dq.z_logical, "Z") if which == "Z" else lay.pauli(dq.x_logical, "X")
        t.measure_pauli(op, forced=1)
    return t
