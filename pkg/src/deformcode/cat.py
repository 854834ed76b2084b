"""Constant-depth cat states and the superstabilizer measurement schedule.

A cat of ``n`` qubits sits on alternating positions of a chain: cat qubits at
even positions, helper ancillas at odd positions measuring the ZZ of their two
neighbours. A loop adds one helper between the last and the first cat qubit.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import Literal

from .lattice import Layout, Stabilizer
from .pauli import PauliString
from .protocols import ProtocolTrace
from .tableau import MeasurementRecord, StabilizerTableau

__all__ = [
    "CatCircuit",
    "StepCount",
    "Layer",
    "build_cat",
    "run_cat",
    "verify_cat",
    "verification_rounds",
    "cat_parity",
    "schedule",
    "step_count",
    "crossing_owner",
    "superstabilizer_measure",
]

Topology = Literal["linear", "loop"]
Variant = Literal["corner_shared", "inner_augmented"]

@dataclass(frozen=True)
class CatCircuit:
    n: int
    topology: str
    layers: tuple[tuple[tuple[str, tuple[int, ...]], ...], ...]
    cat: tuple[int, ...]
    helpers: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.cat) + len(self.helpers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def pairs(self) -> list[tuple[int, int, int]]:
        """(left cat, right cat, helper) for every ZZ check."""
        out = []
        for j, h in enumerate(self.helpers):
            out.append((self.cat[j], self.cat[(j + 1) % self.n], h))
        return out


def build_cat(n: int, topology: Topology = "linear") -> CatCircuit:
    if n < 2:
        raise ValueError("a cat state needs at least 2 qubits")
    if topology not in ("linear", "loop"):
        raise ValueError(f"unknown topology {topology!r}")
    cat = tuple(2 * j for j in range(n))
    n_help = n if topology == "loop" else n - 1
    helpers = tuple(2 * j + 1 for j in range(n_help))
    circ = CatCircuit(n, topology, (), cat, helpers)
    pairs = circ.pairs()
    layers = (
        tuple(("H", (c,)) for c in cat),
        tuple(("CNOT", (a, h)) for a, _, h in pairs),
        tuple(("CNOT", (b, h)) for _, b, h in pairs),
        tuple(("MZ", (h,)) for h in helpers),
        # X applied only where the helper outcomes call for it
        tuple(("XFIX", (q,)) for q in cat[1:] + helpers),
    )
    circ = CatCircuit(n, topology, layers, cat, helpers)
    _check_layers(circ)
    return circ


def _check_layers(circ: CatCircuit) -> None:
    for layer in circ.layers:
        used = [q for _, qs in layer for q in qs]
        if len(used) != len(set(used)):
            raise ValueError("qubit used twice in one layer")


def _reset_helper(t: StabilizerTableau, q: int, outcome: int) -> None:
    if outcome == -1:
        t.apply("X", q)


def run_cat(
    t: StabilizerTableau,
    circ: CatCircuit,
    offset: int = 0,
    trace: ProtocolTrace | None = None,
    forced: dict[str, int] | None = None,
) -> ProtocolTrace:
    """Execute the preparation layers on qubits ``offset + i`` of ``t``.

    Helper outcomes (labels ``cat.m<j>``) fix which cat qubits need an X so
    that every neighbouring ZZ ends at +1; helpers are reset to ``|0>``.
    """
    trace = trace if trace is not None else ProtocolTrace()
    forced = forced or {}
    outcomes: dict[int, int] = {}
    for layer in circ.layers:
        for gate, qs in layer:
            qq = [q + offset for q in qs]
            if gate == "MZ":
                j = circ.helpers.index(qs[0])
                rec = t.measure(qq[0], "Z", forced=forced.get(f"cat.m{j}"))
                outcomes[j] = rec.outcome
                trace.add(f"cat.m{j}", outcome=rec.outcome, deterministic=rec.deterministic, forced=rec.forced)
            elif gate == "XFIX":
                q = qs[0]
                if q in circ.helpers:
                    _reset_helper(t, qq[0], outcomes[circ.helpers.index(q)])
                else:
                    k = circ.cat.index(q)
                    # flip if the product of checks to the left is -1
                    if math.prod(outcomes[j] for j in range(k)) == -1:
                        t.apply("X", qq[0])
            else:
                t.apply(gate, *qq)
    trace.final_state = t
    return trace


def verification_rounds(d: int, topology: Topology) -> int:
    """ZZ rounds needed to rule out a split cat at distance ``d``."""
    return d - 1 if topology == "linear" else math.ceil(d / 2)


def verify_cat(
    t: StabilizerTableau,
    circ: CatCircuit,
    rounds: int,
    offset: int = 0,
    trace: ProtocolTrace | None = None,
) -> ProtocolTrace:
    """Repeat the neighbouring ZZ checks; label ``verify.r<k>.p<j>``.

    Each round is four layers: two CNOT layers onto the helpers, a Z
    measurement of the helpers and their reset.
    """
    trace = trace if trace is not None else ProtocolTrace()
    for r in range(1, rounds + 1):
        for j, (a, b, h) in enumerate(circ.pairs()):
            t.apply("CNOT", a + offset, h + offset)
            t.apply("CNOT", b + offset, h + offset)
            rec = t.measure(h + offset, "Z")
            trace.add(f"verify.r{r}.p{j}", outcome=rec.outcome, deterministic=rec.deterministic)
            _reset_helper(t, h + offset, rec.outcome)
    trace.final_state = t
    return trace


def cat_parity(t: StabilizerTableau, circ: CatCircuit, offset: int = 0) -> int:
    """Product of X-basis outcomes of every cat qubit (consumes the cat)."""
    return math.prod(t.measure(c + offset, "X").outcome for c in circ.cat)


# -- superstabilizer schedule --------------------------------------------------


@dataclass(frozen=True)
class StepCount:
    prep: int
    verify: int
    propagate: int
    basis_change: int
    measure: int

    @property
    def total(self) -> int:
        return sum(astuple(self))

    def row(self) -> dict[str, int]:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["total"] = self.total
        return out


@dataclass(frozen=True)
class Layer:
    category: str  # prep | verify | propagate | basis_change | measure
    what: str
    overlapped: bool = False


def schedule(d: int, variant: Variant = "corner_shared") -> list[Layer]:
    """Layer list for one superstabilizer measurement at distance ``d``.

    Overlapped layers share a time step with the layer before them and are
    not counted.
    """
    if d < 3:
        raise ValueError("distance must be at least 3")
    if variant not in ("corner_shared", "inner_augmented"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "inner_augmented" and d < 8:
        raise ValueError("inner_augmented needs distance 8 or more")
    out = [Layer("prep", w) for w in ("H cat", "CNOT left", "CNOT right", "MZ helpers", "X fix")]
    for r in range(d - 1):
        out += [Layer("verify", f"round {r + 1} {w}") for w in ("CNOT left", "CNOT right", "MZ helpers", "reset")]
    if variant == "corner_shared":
        out.append(Layer("basis_change", "H data (Z super)", overlapped=True))
        out.append(Layer("propagate", "CNOT cat -> first data"))
        out.append(Layer("propagate", "CNOT corner cat -> second data"))
        out.append(Layer("basis_change", "H data and H cat"))
        out.append(Layer("measure", "MZ cat"))
    else:
        out.append(Layer("propagate", "first SWAP of ranged cat qubits", overlapped=True))
        out.append(Layer("basis_change", "H data (Z super)"))
        out.append(Layer("propagate", "CNOT side cat -> data"))
        out.append(Layer("propagate", "second SWAP of ranged cat qubits"))
        out.append(Layer("propagate", "CNOT ranged cat -> data"))
        out.append(Layer("basis_change", "H data and H side cat"))
        out.append(Layer("measure", "MZ side cat"))
        out.append(Layer("basis_change", "H ranged cat"))
        out.append(Layer("measure", "MZ ranged cat"))
    return out


def step_count(d: int, variant: Variant = "corner_shared") -> StepCount:
    counts = {f.name: 0 for f in fields(StepCount)}
    for layer in schedule(d, variant):
        if not layer.overlapped:
            counts[layer.category] += 1
    return StepCount(**counts)


def crossing_owner(d: int) -> list[str]:
    """Which cat (Z or X) holds the shared crossing ancillas in each of ``d`` cycles."""
    return ["Z" if c % 2 == 0 else "X" for c in range(d)]


def superstabilizer_measure(
    t: StabilizerTableau,
    layout: Layout,
    sup: Stabilizer,
    d: int,
    variant: Variant = "corner_shared",
) -> tuple[MeasurementRecord, StepCount]:
    """Measure ``sup`` through a loop cat state following :func:`schedule`.

    ``t`` holds the layout's data qubits and is updated to the post-measurement
    state. corner_shared uses ``w - 4`` cat qubits for a weight-``w`` support,
    the four corner ones each touching two data qubits; inner_augmented gives
    every data qubit its own cat qubit, four of which reach their data through
    two relay SWAPs.
    """
    steps = step_count(d, variant)
    n = layout.n_data
    if t.n_qubits != n:
        raise ValueError("tableau does not match the layout")
    support = sorted(layout.index[q] for q in sup.support)
    w = len(support)
    m = w - 4 if variant == "corner_shared" else w
    if m < 4:
        raise ValueError(f"weight-{w} support leaves an insufficient ancilla ring")
    circ = build_cat(m, "loop")
    relays = 8 if variant == "inner_augmented" else 0
    ext = t.extended(circ.size + relays)
    off = n
    cats = [c + off for c in circ.cat]
    run_cat(ext, circ, off)
    verify_cat(ext, circ, d - 1, off)
    is_z = sup.kind == "Z"
    if is_z:
        for q in support:
            ext.apply("H", q)
    if variant == "corner_shared":
        for j, c in enumerate(cats):
            ext.apply("CNOT", c, support[j])
        for j in range(4):
            ext.apply("CNOT", cats[j], support[m + j])
        if is_z:
            for q in support:
                ext.apply("H", q)
        bits = [ext.measure(c, "X").outcome for c in cats]
    else:
        rel = list(range(n + circ.size, n + circ.size + relays))
        ranged = cats[:4]
        for j in range(4):
            ext.apply("SWAP", ranged[j], rel[j])
        for j in range(4, m):
            ext.apply("CNOT", cats[j], support[j])
        for j in range(4):
            ext.apply("SWAP", rel[j], rel[4 + j])
        for j in range(4):
            ext.apply("CNOT", rel[4 + j], support[j])
        if is_z:
            for q in support:
                ext.apply("H", q)
        bits = [ext.measure(c, "X").outcome for c in cats[4:]]
        bits += [ext.measure(rel[4 + j], "X").outcome for j in range(4)]
    outcome = math.prod(bits)
    op = PauliString.from_sparse(n, {q: sup.kind for q in support})
    rec = t.measure_pauli(op, forced=outcome)
    return rec, steps
