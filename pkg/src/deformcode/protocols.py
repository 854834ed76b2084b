"""State injection by defect conversion, and the lattice-surgery CNOT.

Both protocols run on a full :class:`~deformcode.tableau.StabilizerTableau`
over the enabled data qubits of a :class:`~deformcode.lattice.Layout`.
Random outcomes can be pinned through ``forced``, a mapping from measurement
label to +1/-1; labels are listed in each protocol's docstring.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Literal, Mapping

import networkx as nx

from .lattice import (
    Coord,
    Layout,
    LayoutError,
    _axes,
    _half_nodes,
    _min_pairing,
    build_lattice,
    code_state,
    region_qubit,
)
from .pauli import PauliString
from .tableau import MeasurementRecord, StabilizerTableau

__all__ = [
    "CLIFFORD_STATES",
    "TraceStep",
    "ProtocolTrace",
    "LogicalFrame",
    "InjectionSite",
    "injection_site",
    "inject_defect_qubit",
    "convert_to_deformation",
    "injection_target",
    "SurgerySite",
    "surgery_site",
    "prepare_surgery",
    "surgery_zz",
    "surgery_merge",
    "cnot",
    "cnot_target",
    "logical_cnot",
]

# single-qubit preparations from |+>
CLIFFORD_STATES: dict[str, tuple[str, ...]] = {
    "0": ("H",),
    "1": ("H", "X"),
    "+": (),
    "-": ("Z",),
    "+i": ("S",),
    "-i": ("SDG",),
}

# which logical operator stabilizes each state, and its sign
_STATE_STAB = {"0": ("Z", 1), "1": ("Z", -1), "+": ("X", 1), "-": ("X", -1), "+i": ("Y", 1), "-i": ("Y", -1)}


def _check_state(s: str) -> str:
    s = s.strip().strip("|>").replace("⟩", "")
    if s not in CLIFFORD_STATES:
        raise ValueError(f"unknown state {s!r}; expected one of {sorted(CLIFFORD_STATES)}")
    return s


# -- traces and frames ---------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    step: int
    op: str
    operator: PauliString | None = None
    outcome: int | None = None
    deterministic: bool | None = None
    correction: PauliString | None = None
    forced: bool = False

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "op": self.op,
            "operator": None if self.operator is None else str(self.operator),
            "outcome": self.outcome,
            "deterministic": self.deterministic,
            "correction": None if self.correction is None else str(self.correction),
        }


@dataclass
class ProtocolTrace:
    steps: list[TraceStep] = field(default_factory=list)
    final_state: StabilizerTableau | None = None

    def add(self, op: str, **kw) -> TraceStep:
        s = TraceStep(len(self.steps), op, **kw)
        self.steps.append(s)
        return s

    def outcomes(self) -> dict[str, int]:
        return {s.op: s.outcome for s in self.steps if s.outcome is not None}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(s.to_json()) + "\n" for s in self.steps)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())

    def check_corrections(self, conditioned: Iterable[str]) -> bool:
        """Every -1 outcome of a conditioned measurement is followed by a correction entry."""
        cond = set(conditioned)
        for i, s in enumerate(self.steps):
            if s.op in cond and s.outcome == -1:
                nxt = self.steps[i + 1] if i + 1 < len(self.steps) else None
                if nxt is None or not nxt.op.startswith("fix:"):
                    return False
        return True


@dataclass
class LogicalFrame:
    """Representative logical operators per logical qubit name."""

    z: dict[str, PauliString] = field(default_factory=dict)
    x: dict[str, PauliString] = field(default_factory=dict)

    def set(self, name: str, z: PauliString, x: PauliString) -> None:
        self.z[name] = z
        self.x[name] = x

    def y(self, name: str) -> PauliString:
        # Y = i X Z
        p = self.x[name] * self.z[name]
        return PauliString(p.n_qubits, p.x_mask, p.z_mask, p.k + 1)

    def op(self, name: str, basis: str) -> PauliString:
        return {"Z": self.z, "X": self.x}[basis][name] if basis in "ZX" else self.y(name)

    def read(self, t: StabilizerTableau, name: str) -> dict[str, int]:
        return {b: t.expectation(self.op(name, b)) for b in "ZXY"}

    def commutes_with(self, stabilizers: Iterable[PauliString]) -> bool:
        """True if every frame operator commutes with every given stabilizer."""
        gens = list(stabilizers)
        return all(p.commutes(g) for d in (self.z, self.x) for p in d.values() for g in gens)


class _Runner:
    def __init__(self, t: StabilizerTableau, trace: ProtocolTrace, forced: Mapping[str, int] | None):
        self.t = t
        self.trace = trace
        self.forced = dict(forced or {})
        for k, v in self.forced.items():
            if v not in (1, -1):
                raise ValueError(f"forced outcome for {k} must be +1 or -1")

    def measure(self, label: str, op: PauliString) -> int:
        f = self.forced.get(label)
        rec: MeasurementRecord = self.t.measure_pauli(op, forced=f)
        self.trace.add(label, operator=op, outcome=rec.outcome, deterministic=rec.deterministic, forced=rec.forced)
        return rec.outcome

    def fix(self, label: str, op: PauliString) -> None:
        self.t.apply_pauli(op)
        self.trace.add("fix:" + label, correction=op)

    def gate(self, label: str, gate: str, *qubits: int) -> None:
        self.t.apply(gate, *qubits)
        self.trace.add(label)


# -- injection -----------------------------------------------------------------


@dataclass(frozen=True)
class InjectionSite:
    """Nine labelled data qubits around ``center`` on a lattice without qubits.

    Labels follow the usual numbering: 5 is the center, 2/4/7 and 3/6/8 the
    two Z plaquettes beside it, 1/2/3/5 and 5/7/8/9 the two X plaquettes.
    """

    layout: Layout
    center: Coord
    coords: dict[str, Coord]

    def q(self, label: str) -> int:
        return self.layout.index[self.coords[label]]

    def op(self, labels: str | Iterable[str], letter: str, sign: int = 1) -> PauliString:
        labs = labels.split() if isinstance(labels, str) else list(labels)
        return self.layout.pauli([self.coords[x] for x in labs], letter, sign)

    @property
    def za(self) -> Coord:
        return _axes(self.layout, self.center)[0]

    @property
    def xa(self) -> Coord:
        return _axes(self.layout, self.center)[1]


def injection_site(layout: Layout | None = None, center: Coord | None = None) -> InjectionSite:
    """Default: the smallest closed lattice holding the nine-qubit fragment."""
    if layout is None:
        layout = build_lattice(7, 5)
        center = (2, 3) if center is None else center
    if center is None:
        raise LayoutError("center required with an explicit layout")
    if layout.qubits:
        raise LayoutError("injection needs a layout in normal operation (no deformation qubits)")
    za, xa = _axes(layout, center)

    def at(a, b):
        return (center[0] + a * za[0] + b * xa[0], center[1] + a * za[1] + b * xa[1])

    coords = {
        "1": at(0, -2), "2": at(-1, -1), "3": at(1, -1), "4": at(-2, 0), "5": at(0, 0),
        "6": at(2, 0), "7": at(-1, 1), "8": at(1, 1), "9": at(0, 2),
    }
    for lab, p in coords.items():
        if p not in layout.index:
            raise LayoutError(f"fragment qubit {lab} at {p} is outside the lattice")
    return InjectionSite(layout, center, coords)


Prep = Callable[[StabilizerTableau, int], None]


def _clifford_prep(state: str) -> Prep:
    gates = CLIFFORD_STATES[_check_state(state)]

    def prep(t: StabilizerTableau, q: int) -> None:
        for g in gates:
            t.apply(g, q)

    return prep


def inject_defect_qubit(
    site: InjectionSite | None = None,
    state: str = "0",
    forced: Mapping[str, int] | None = None,
    seed: int | None = None,
    alt: bool = False,
    prepare: Prep | None = None,
) -> tuple[StabilizerTableau, LogicalFrame, ProtocolTrace]:
    """Inject a raw single-qubit state as a distance-1 two-defect qubit.

    Measurement labels: ``mx5`` (X on the center), ``mz2457`` and ``mz3568``.
    ``alt`` selects the second of the two equivalent corrections. ``prepare``
    replaces the Clifford rotation of qubit 5 (which starts in ``|+>``).
    """
    site = site or injection_site()
    prep = prepare or _clifford_prep(state)
    t = code_state(site.layout, seed)
    trace = ProtocolTrace()
    run = _Runner(t, trace, forced)
    q5 = site.q("5")
    if run.measure("mx5", site.op("5", "X")) == -1:
        run.fix("mx5", site.op("3 5 6 8" if alt else "2 4 5 7", "Z"))
    prep(t, q5)
    trace.add("prep5")
    m1 = run.measure("mz2457", site.op("2 4 5 7", "Z"))
    if m1 == -1:
        run.fix("mz2457", site.op("7 8 9" if alt else "1 2 3", "X"))
    run.measure("mz3568", site.op("3 5 6 8", "Z"))
    frame = LogicalFrame()
    frame.set("L", site.op("5", "Z"), site.op("1 2 3 5", "X"))
    trace.final_state = t
    return t, frame, trace


def convert_to_deformation(
    site: InjectionSite,
    t: StabilizerTableau,
    trace: ProtocolTrace | None = None,
    forced: Mapping[str, int] | None = None,
    alt: bool = False,
) -> tuple[StabilizerTableau, LogicalFrame, ProtocolTrace]:
    """Merge the two defects into a superstabilizer; label ``mx5_conv``."""
    trace = trace if trace is not None else ProtocolTrace()
    run = _Runner(t, trace, forced)
    if run.measure("mx5_conv", site.op("5", "X")) == -1:
        run.fix("mx5_conv", site.op("3 5 6 8" if alt else "2 4 5 7", "Z"))
    frame = LogicalFrame()
    frame.set("L", site.op("2 4 7", "Z"), site.op("1 2 3", "X"))
    trace.final_state = t
    return t, frame, trace


def deformed_layout(site: InjectionSite) -> Layout:
    """Layout of the distance-3 qubit created at the site's center."""
    c, za, xa = site.center, site.za, site.xa
    z0, z1 = (c[0] - za[0], c[1] - za[1]), (c[0] + za[0], c[1] + za[1])
    x0, x1 = (c[0] - xa[0], c[1] - xa[1]), (c[0] + xa[0], c[1] + xa[1])
    lay, _ = region_qubit(site.layout, c, ({z0}, {z1}), ({x0}, {x1}), "four_fin")
    return lay


def _logical_stab(frame: LogicalFrame, name: str, state: str) -> PauliString:
    basis, sign = _STATE_STAB[_check_state(state)]
    p = frame.op(name, basis)
    return p if sign == 1 else -p


def injection_target(site: InjectionSite, state: str) -> StabilizerTableau:
    """Independently built state the conversion should end in.

    Generators: every stabilizer of the deformed layout, X on the disabled
    center, and the logical operator fixing ``state``.
    """
    lay = deformed_layout(site)
    src = site.layout
    gens = [src.pauli(s.support, s.kind) for s in lay.stabilizers]
    gens.append(site.op("5", "X"))
    frame = LogicalFrame()
    frame.set("L", site.op("2 4 7", "Z"), site.op("1 2 3", "X"))
    gens.append(_logical_stab(frame, "L", state))
    return StabilizerTableau.from_generators(gens)


# -- lattice-surgery CNOT ------------------------------------------------------

_SURGERY_LABELS = {
    # intermediate qubit I centred at (4,5), target T at (4,9), control C at (8,5)
    "1": (2, 5), "2": (3, 4), "3": (3, 6), "4": (4, 3), "5": (5, 4), "6": (5, 6), "7": (6, 5),
    "S": (4, 7), "8": (2, 7), "9": (6, 7), "a": (2, 9), "b": (3, 8), "c": (3, 10), "d": (4, 11),
    "e": (5, 8), "f": (5, 10), "g": (6, 9), "i": (7, 4), "ii": (7, 6), "10": (7, 8),
}


@dataclass(frozen=True)
class SurgerySite:
    """Control, intermediate and target qubits of distance 3 plus one spare ancilla.

    Tableau qubits ``0 .. n_data-1`` are the layout's data qubits and the last
    one is the spare that qubit 7 is swapped into during the ZZ rounds.
    """

    layout: Layout
    merged: Layout
    coords: dict[str, Coord]
    names: tuple[str, ...] = ("C", "I", "T")

    @property
    def n(self) -> int:
        return self.layout.n_data + 1

    @property
    def spare(self) -> int:
        return self.layout.n_data

    def q(self, label: str) -> int:
        return self.layout.index[self.coords[label]]

    def embed(self, p: PauliString) -> PauliString:
        return PauliString(self.n, p.x_mask, p.z_mask, p.k)

    def op(self, labels: str | Iterable[str], letter: str, sign: int = 1) -> PauliString:
        labs = labels.split() if isinstance(labels, str) else list(labels)
        return self.embed(self.layout.pauli([self.coords[x] for x in labs], letter, sign))

    def coords_op(self, coords: Iterable[Coord], letter: str, sign: int = 1) -> PauliString:
        return self.embed(self.layout.pauli(coords, letter, sign))

    def frame(self) -> LogicalFrame:
        f = LogicalFrame()
        for name, dq in zip(self.names, self.layout.qubits):
            f.set(name, self.coords_op(dq.z_logical, "Z"), self.coords_op(dq.x_logical, "X"))
        # short hand-picked representatives, equal to the computed ones up to stabilizers
        f.set("C", self.op("i 7 ii", "Z"), f.x["C"])
        f.set("I", self.op("5 6 7", "Z"), self.op("2 4 5", "X"))
        f.set("T", self.op("e f g", "Z"), self.op("c d f", "X"))
        return f

    def merged_frame(self) -> LogicalFrame:
        f = self.frame()
        out = LogicalFrame()
        out.set("C", f.z["C"], f.x["C"])
        out.set("m", self.op("5 7 9 f g", "Z"), self.op("2 4 5", "X"))
        return out


def surgery_site() -> SurgerySite:
    lay = build_lattice(13, 11)
    for center in ((8, 5), (4, 5), (4, 9)):
        c = center
        lay, _ = region_qubit(lay, c, ({(c[0] - 1, c[1])}, {(c[0] + 1, c[1])}),
                              ({(c[0], c[1] - 1)}, {(c[0], c[1] + 1)}), "four_fin")
    base = lay.without_qubits([1, 2])
    merged, _ = region_qubit(
        base,
        (4, 7),
        ({(3, 5), (3, 7), (3, 9)}, {(5, 5), (5, 7), (5, 9)}),
        ({(4, 4), (4, 6)}, {(4, 8), (4, 10)}),
        "bar",
    )
    return SurgerySite(lay, merged, dict(_SURGERY_LABELS))


def prepare_surgery(
    site: SurgerySite,
    control: str,
    target: str,
    seed: int | None = None,
) -> tuple[StabilizerTableau, LogicalFrame]:
    """Code state with C and T in the given Clifford states and I in ``|+>``."""
    frame = site.frame()
    return _group_state(site, frame, {"C": control, "I": "+", "T": target}, seed), frame


def _group_state(site: SurgerySite, frame: LogicalFrame, states: Mapping[str, str], seed) -> StabilizerTableau:
    gens = [site.coords_op(s.support, s.kind) for s in site.layout.stabilizers]
    gens.append(PauliString.single(site.n, site.spare, "Z"))
    for name, s in states.items():
        gens.append(_logical_stab(frame, name, s))
    return StabilizerTableau.from_generators(gens, seed)


def surgery_zz(
    site: SurgerySite,
    t: StabilizerTableau,
    rounds: int = 3,
    trace: ProtocolTrace | None = None,
    forced: Mapping[str, int] | None = None,
    errors: Mapping[int, PauliString] | None = None,
) -> ProtocolTrace:
    """Measure Z_C Z_I as Z5 Z6 Zi Zii over ``rounds`` rounds and majority-vote.

    Qubit 7 is swapped into the spare ancilla for the rounds. Normal Z
    stabilizers are measured every round; the Z superstabilizers of C and I
    are not. ``errors`` maps a round index to a Pauli applied before that
    round. Labels: ``zz.r<k>`` for the check in round ``k`` (1-based).
    """
    if rounds < 1 or rounds % 2 == 0:
        raise ValueError("majority voting needs an odd number of rounds")
    trace = trace if trace is not None else ProtocolTrace()
    run = _Runner(t, trace, forced)
    q7 = site.q("7")
    run.gate("swap7", "SWAP", q7, site.spare)
    check = site.op("5 6 i ii", "Z")
    # qubit 7 now lives in the spare slot
    remap = _swap_map(site, q7)
    normal_z = [remap(site.coords_op(s.support, "Z")) for s in site.layout.stabilizers if s.kind == "Z" and not s.is_super]
    votes = []
    for r in range(1, rounds + 1):
        if errors and r in errors:
            t.apply_pauli(remap(errors[r]))
            trace.add(f"error.r{r}", correction=errors[r])
        for z in normal_z:
            t.measure_pauli(z)
        votes.append(run.measure(f"zz.r{r}", check))
    run.gate("swap7_back", "SWAP", q7, site.spare)
    outcome = 1 if votes.count(1) > votes.count(-1) else -1
    trace.add("zz.vote", outcome=outcome)
    if outcome == -1:
        run.fix("zz.vote", site.frame().x["I"])
    trace.final_state = t
    return trace


def _swap_map(site: SurgerySite, q: int) -> Callable[[PauliString], PauliString]:
    s = site.spare

    def f(p: PauliString) -> PauliString:
        x, z = p.x_mask, p.z_mask
        bx, bz = (x >> q) & 1, (z >> q) & 1
        sx, sz = (x >> s) & 1, (z >> s) & 1
        x = (x & ~((1 << q) | (1 << s))) | (bx << s) | (sx << q)
        z = (z & ~((1 << q) | (1 << s))) | (bz << s) | (sz << q)
        return PauliString(p.n_qubits, x, z, p.k)

    return f


def surgery_merge(
    site: SurgerySite,
    t: StabilizerTableau,
    mode: Literal["sequential", "parallel"] = "sequential",
    trace: ProtocolTrace | None = None,
    forced: Mapping[str, int] | None = None,
    alt: bool = False,
    odd_fix: Literal["zc_zi", "zi_zt"] = "zc_zi",
) -> tuple[ProtocolTrace, LogicalFrame]:
    """Merge I and T, completing the X_I X_T measurement.

    Labels: ``ms`` (Z on S), then ``mx3``, ``mxb``, ``mx6``, ``mxe``. In
    sequential mode each -1 gets its local correction; in parallel mode the
    four X outcomes are collected first and the flipped X stabilizers are
    paired by Z chains. ``odd_fix`` picks the correction applied when the
    parity of the X outcomes is odd; only ``"zc_zi"`` restores the even
    branch. The disentangled qubits are reset to ``|+>`` at the
    end so that both modes leave identical states.
    """
    if mode not in ("sequential", "parallel"):
        raise ValueError(f"unknown merge mode {mode!r}")
    trace = trace if trace is not None else ProtocolTrace()
    run = _Runner(t, trace, forced)
    f = site.frame()
    z_c = f.z["C"]
    z_i = site.op("5 7 9", "Z")
    if odd_fix == "zc_zi":
        odd = z_c * z_i
    elif odd_fix == "zi_zt":
        # kept for comparison; commutes with X_I X_T so it cannot undo the flip
        odd = z_i * f.z["T"]
    else:
        raise ValueError(f"unknown odd_fix {odd_fix!r}")
    if run.measure("ms", site.op("S", "Z")) == -1:
        run.fix("ms", site.op("b c d e f S" if alt else "2 3 4 5 6 S", "X"))
    singles = ["3", "b", "6", "e"]
    if mode == "sequential":
        fixes = {
            "3": "1 2 3 5 6 7" if alt else "3 8 b",
            "b": "a b c e f g" if alt else "1 2 5 6 7 8 b",
            "6": "1 2 5 6 7 8 a c e f g",
        }
        for lab in singles:
            m = run.measure("mx" + lab, site.op(lab, "X"))
            if m == -1:
                if lab == "e":
                    run.fix("mxe", odd)
                else:
                    run.fix("mx" + lab, site.op(fixes[lab], "Z"))
    else:
        outs = {lab: run.measure("mx" + lab, site.op(lab, "X")) for lab in singles}
        n_odd = sum(1 for v in outs.values() if v == -1)
        chain = _pair_flipped(site, t)
        if not chain.is_identity():
            run.fix("parallel.chain", chain)
        if n_odd % 2:
            run.fix("parallel.zc", z_c)
    for lab in singles:
        # return disentangled qubits to |+>
        if t.expectation(site.op(lab, "X")) == -1:
            t.apply_pauli(site.op(lab, "Z"))
            trace.add("reset" + lab, correction=site.op(lab, "Z"))
    trace.final_state = t
    return trace, site.merged_frame()


def _pair_flipped(site: SurgerySite, t: StabilizerTableau) -> PauliString:
    """Z chain returning every merged-layout X stabilizer to +1.

    A flipped merged X superstabilizer is represented by its intermediate
    half, so a leftover flip is joined to that side (a logical Z on I).
    """
    m = site.merged
    g = m.error_graph("X")
    # the merged qubit is the last one; its first X half is the intermediate side
    i_side = _half_nodes(len(m.qubits) - 1)[0]
    nodes = []
    for s in m.stabilizers:
        if s.kind == "X" and t.expectation(site.coords_op(s.support, "X")) == -1:
            if s.is_super and s.owner != len(m.qubits) - 1:
                raise RuntimeError("control superstabilizer flipped during merge")
            nodes.append(i_side if s.is_super else s.ancilla_plan[0])
    if len(nodes) % 2:
        raise RuntimeError("unpaired X syndrome")
    dist = {u: nx.single_source_shortest_path_length(g, u) for u in nodes}
    no_boundary = {u: float("inf") for u in nodes}
    _, pairs = _min_pairing(tuple(nodes), dist, no_boundary, {})
    support: set[Coord] = set()
    for a, b in pairs:
        path = nx.shortest_path(g, a, b)
        support ^= {g.edges[u, v]["qubit"] for u, v in zip(path, path[1:])}
    return site.coords_op(support, "Z") if support else PauliString(site.n)


def logical_cnot(control: str, target: str) -> StabilizerTableau:
    """Two logical qubits (control 0, target 1) after an ideal CNOT."""
    t = StabilizerTableau(2)
    for q, s in ((0, control), (1, target)):
        t.apply("H", q)
        for g in CLIFFORD_STATES[_check_state(s)]:
            t.apply(g, q)
    t.apply("CNOT", 0, 1)
    return t


def _lift(p: PauliString, frame: LogicalFrame, names: tuple[str, str], n: int) -> PauliString:
    out = PauliString(n)
    for q, name in enumerate(names):
        letter = p.letter(q)
        if letter == "X":
            out = out * frame.x[name]
        elif letter == "Z":
            out = out * frame.z[name]
        elif letter == "Y":
            out = out * frame.y(name)
    return out if p.sign == 1 else -out


def cnot_target(site: SurgerySite, control: str, target: str) -> StabilizerTableau:
    """Independently built final state of the CNOT protocol."""
    m = site.merged
    gens = [site.coords_op(s.support, s.kind) for s in m.stabilizers]
    gens += [site.op(lab, "X") for lab in ("3", "b", "6", "e")]
    gens.append(site.op("S", "Z"))
    gens.append(PauliString.single(site.n, site.spare, "Z"))
    frame = site.merged_frame()
    for g in logical_cnot(control, target).generators():
        gens.append(_lift(g, frame, ("C", "m"), site.n))
    return StabilizerTableau.from_generators(gens)


def cnot(
    control: str,
    target: str,
    rounds: int = 3,
    mode: Literal["sequential", "parallel"] = "sequential",
    seed: int | None = None,
    forced: Mapping[str, int] | None = None,
    site: SurgerySite | None = None,
) -> tuple[StabilizerTableau, LogicalFrame, ProtocolTrace]:
    """Full lattice-surgery CNOT between two Clifford states."""
    site = site or surgery_site()
    t, _ = prepare_surgery(site, control, target, seed)
    trace = ProtocolTrace()
    surgery_zz(site, t, rounds, trace, forced)
    trace, frame = surgery_merge(site, t, mode, trace, forced)
    return t, frame, trace
