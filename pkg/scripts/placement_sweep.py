"""Distance of two d=5 qubits stacked in one column as their separation shrinks.

Prints each qubit's in-context distance, the combined operator weights and
whatever placement_check reports.
"""
import argparse

from deformcode.lattice import (
    LayoutError,
    build_lattice,
    code_distance,
    make_deformation_qubit,
    min_combined_operator,
    placement_check,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--distance", type=int, default=5)
    ap.add_argument("--gaps", type=int, nargs="+", default=[14, 12, 10, 8, 6, 4])
    args = ap.parse_args()

    d = args.distance
    print("gap  d0  d1  comb_Z  comb_X  violations")
    for gap in args.gaps:
        # same margins as the shared-tip pair layout, which has gap 8
        top = (8, 7)
        base = build_lattice(15, top[0] + gap + 9)
        try:
            lay, _ = make_deformation_qubit(base, top, d)
            lay, _ = make_deformation_qubit(lay, (top[0] + gap, top[1]), d)
        except LayoutError as e:
            print(f"{gap:>3}  does not fit: {e}")
            continue
        ds = [code_distance(lay, i) for i in range(2)]
        cz, cx = (min_combined_operator(lay, [0, 1], k) for k in "ZX")
        vs = placement_check(lay, d)
        rules = ",".join(sorted({v.rule for v in vs})) or "none"
        print(f"{gap:>3}  {ds[0]:>2}  {ds[1]:>2}  {cz:>6}  {cx:>6}  {rules}")


if __name__ == "__main__":
    main()
