"""Command-line front end: ``deformcode <subcommand> ...``.

Exit status is 0 on success (including a placement report that lists
violations) and 2 for malformed input or an impossible forced branch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import layouts
from .cat import step_count
from .lattice import (
    Layout,
    LayoutError,
    code_distance,
    code_state,
    error_on,
    extract_syndrome,
    min_combined_operator,
    placement_check,
)
from .protocols import (
    CLIFFORD_STATES,
    cnot,
    cnot_target,
    convert_to_deformation,
    inject_defect_qubit,
    injection_site,
    surgery_site,
)
from .resources import compare
from .tableau import ContradictionError, canonicalize, states_equal

STATE_NAMES = {"zero": "0", "one": "1", "plus": "+", "minus": "-", "plusi": "+i", "minusi": "-i"}


class UsageError(Exception):
    pass


def _state(s: str) -> str:
    s = STATE_NAMES.get(s, s)
    if s not in CLIFFORD_STATES:
        raise UsageError(f"unknown state {s!r}")
    return s


def _forced(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items or []:
        label, _, val = item.partition("=")
        if val not in ("+1", "1", "-1"):
            raise UsageError(f"bad --force {item!r}; use label=+1 or label=-1")
        out[label] = -1 if val == "-1" else 1
    return out


def _layout(ref: str) -> Layout:
    path = Path(ref)
    try:
        if path.exists():
            return Layout.load(path)
        if ref in layouts.LAYOUTS:
            return layouts.load(ref)
    except (KeyError, ValueError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read layout {ref!r}: {e}") from e
    raise UsageError(f"no layout file or built-in layout named {ref!r}")


def _coord(text: str) -> tuple[int, int]:
    try:
        r, c = text.split(",")
        return int(r), int(c)
    except ValueError as e:
        raise UsageError(f"bad coordinate {text!r}; expected r,c") from e


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    lines = ["  ".join(c.rjust(widths[c]) for c in cols)]
    lines += ["  ".join(str(r[c]).rjust(widths[c]) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_inject(args) -> str:
    state = _state(args.state)
    site = injection_site()
    forced = _forced(args.force)
    t, _, trace = inject_defect_qubit(site, state, forced=forced, seed=args.seed)
    t, frame, trace = convert_to_deformation(site, t, trace, forced=forced)
    gens = [str(g) for g in canonicalize(t)]
    logical = frame.read(t, "L")
    if args.format == "json":
        return json.dumps({"trace": [s.to_json() for s in trace.steps], "generators": gens, "logical": logical}, indent=2) + "\n"
    out = trace.to_jsonl()
    out += "logical " + " ".join(f"{b}={v:+d}" for b, v in logical.items()) + "\n"
    out += "generators\n" + "".join(g + "\n" for g in gens)
    return out


def _bits(frame, t, name):
    z = t.expectation(frame.z[name])
    return {1: "0", -1: "1"}.get(z, "?")


def cmd_cnot(args) -> str:
    site = surgery_site()
    forced = _forced(args.force)
    if args.all:
        pairs = [(c, g) for c in CLIFFORD_STATES for g in CLIFFORD_STATES]
    else:
        if args.control is None or args.target is None:
            raise UsageError("give CONTROL and TARGET, or --all")
        pairs = [(_state(args.control), _state(args.target))]
    rows = []
    for c, g in pairs:
        t, frame, _ = cnot(c, g, args.rounds, args.mode, args.seed, forced, site)
        other = "parallel" if args.mode == "sequential" else "sequential"
        u, _, _ = cnot(c, g, args.rounds, other, args.seed, forced, site)
        rows.append({
            "control": c,
            "target": g,
            "out_control": _bits(frame, t, "C"),
            "out_target": _bits(frame, t, "m"),
            "zz": t.expectation(frame.z["C"] * frame.z["m"]),
            "matches_ideal": states_equal(t, cnot_target(site, c, g)),
            "modes_equal": states_equal(t, u),
        })
    return _table(rows, args.format)


def cmd_distance(args) -> str:
    lay = _layout(args.fixture)
    rows = [{"qubit": i, "center": f"{q.center[0]},{q.center[1]}", "shape": q.shape, "distance": code_distance(lay, i)}
            for i, q in enumerate(lay.qubits)]
    if args.format == "json":
        extra = {}
        if len(lay.qubits) > 1:
            extra = {k: min_combined_operator(lay, range(len(lay.qubits)), k) for k in "ZX"}
        return json.dumps({"qubits": rows, "combined": extra, "counts": lay.counts()}, indent=2) + "\n"
    out = _table(rows, args.format)
    if len(lay.qubits) > 1 and args.format == "pretty":
        for k in "ZX":
            out += f"combined {k}: {min_combined_operator(lay, range(len(lay.qubits)), k)}\n"
    return out


def cmd_check(args) -> str:
    lay = _layout(args.fixture)
    vs = placement_check(lay, args.min_distance)
    rows = [{"rule": v.rule, "qubits": " ".join(map(str, v.qubits)), "kind": v.kind, "weight": v.weight} for v in vs]
    if args.format == "pretty" and not rows:
        return "clean\n"
    if args.format == "json":
        return json.dumps(rows, indent=2) + "\n"
    return _table(rows, args.format)


def cmd_syndrome(args) -> str:
    lay = _layout(args.fixture)
    t = code_state(lay, seed=args.seed)
    for item in args.error or []:
        letter, _, where = item.partition("@")
        if letter not in ("X", "Y", "Z"):
            raise UsageError(f"bad --error {item!r}; use X@r,c")
        try:
            t.apply_pauli(error_on(lay, [_coord(where)], letter))
        except LayoutError as e:
            raise UsageError(str(e)) from e
    flipped = sorted(extract_syndrome(lay, t), key=lambda s: (s.kind, sorted(s.support)))
    rows = [{"kind": s.kind, "super": s.is_super, "owner": "" if s.owner is None else s.owner,
             "ancilla": " ".join(f"{r},{c}" for r, c in s.ancilla_plan), "weight": len(s)} for s in flipped]
    if args.format == "pretty" and not rows:
        return "no flipped stabilizers\n"
    return _table(rows, args.format)


def cmd_schedule(args) -> str:
    lo = args.d if args.d is not None else args.dmin
    hi = args.d if args.d is not None else args.dmax
    rows = []
    for d in range(lo, hi + 1):
        try:
            s = step_count(d, args.variant)
        except ValueError as e:
            raise UsageError(str(e)) from e
        rows.append({"d": d, "variant": args.variant, "prep": s.prep, "verify": s.verify, "propagate": s.propagate,
                     "basis": s.basis_change, "measure": s.measure, "total": s.total})
    return _table(rows, args.format)


def cmd_resources(args) -> str:
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    try:
        rep = compare(range(args.dmin, args.dmax + 1), schemes)
    except ValueError as e:
        raise UsageError(str(e)) from e
    rows = [r.as_dict() for r in rep.rows]
    out = _table(rows, args.format)
    if args.format == "pretty":
        a = rep.asymptotic()
        out += f"asymptotic ratio {a['ratio']} (reduction {a['reduction_pct']}%)\n"
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["pretty", "csv", "json"], default="pretty")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")

    ap = argparse.ArgumentParser(prog="deformcode", description="Deformation-based surface code tools.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("inject", parents=[common], help="inject a Clifford state and convert it")
    p.add_argument("--state", required=True)
    p.add_argument("--force", action="append", metavar="LABEL=+-1")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("cnot", parents=[common], help="run the lattice-surgery CNOT")
    p.add_argument("control", nargs="?")
    p.add_argument("target", nargs="?")
    p.add_argument("--all", action="store_true", help="sweep all 36 input pairs")
    p.add_argument("--mode", choices=["sequential", "parallel"], default="sequential")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--force", action="append", metavar="LABEL=+-1")
    p.set_defaults(func=cmd_cnot)

    for name, func, helptext in (("distance", cmd_distance, "code distances of a layout"),
                                 ("check", cmd_check, "placement violations of a layout")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("fixture", help="layout JSON path or built-in name")
        if name == "check":
            p.add_argument("--min-distance", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("syndrome", parents=[common], help="syndrome of errors on a layout's code state")
    p.add_argument("fixture")
    p.add_argument("--error", action="append", metavar="P@r,c")
    p.set_defaults(func=cmd_syndrome)

    p = sub.add_parser("schedule", parents=[common], help="superstabilizer step counts")
    p.add_argument("--d", type=int)
    p.add_argument("--dmin", type=int, default=3)
    p.add_argument("--dmax", type=int, default=25)
    p.add_argument("--variant", choices=["corner_shared", "inner_augmented"], default="corner_shared")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("resources", parents=[common], help="qubit counts against the planar code")
    p.add_argument("--dmin", type=int, default=3)
    p.add_argument("--dmax", type=int, default=25)
    p.add_argument("--schemes", default="abstract,t2,lengthened,t3")
    p.set_defaults(func=cmd_resources)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        text = args.func(args)
    except (UsageError, ContradictionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
