"""Regenerate the layout fixtures and the golden all-+1 protocol traces."""
import argparse
from pathlib import Path

from deformcode import layouts
from deformcode.protocols import cnot, convert_to_deformation, inject_defect_qubit, injection_site

INJECT_LABELS = ("mx5", "mz2457", "mz3568", "mx5_conv")
CNOT_LABELS = ("zz.r1", "zz.r2", "zz.r3", "ms", "mx3", "mxb", "mx6", "mxe")


def golden_traces(out: Path) -> None:
    site = injection_site()
    forced = {k: 1 for k in INJECT_LABELS}
    t, _, trace = inject_defect_qubit(site, "+", forced=forced, seed=0)
    convert_to_deformation(site, t, trace, forced=forced)
    trace.save(out / "trace_inject_plus.jsonl")
    _, _, trace = cnot("+", "0", seed=0, forced={k: 1 for k in CNOT_LABELS})
    trace.save(out / "trace_cnot_plus_zero.jsonl")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=layouts.FIXTURE_DIR)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in layouts.LAYOUTS.items():
        build().save(args.out / f"{name}.json")
        print("wrote", name)
    golden_traces(args.out)
    print("wrote traces")


if __name__ == "__main__":
    main()
