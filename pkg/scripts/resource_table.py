"""Per-logical qubit counts of each placement scheme against the planar code.

Writes a CSV and, with --plot, a PNG of the reduction against distance.
"""
import argparse
from pathlib import Path

from deformcode.resources import SCHEME_NOTES, compare


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmin", type=int, default=3)
    ap.add_argument("--dmax", type=int, default=41)
    ap.add_argument("--out", type=Path, default=Path("results/resources.csv"))
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()

    rep = compare(range(args.dmin, args.dmax + 1))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(rep.to_csv())
    print("wrote", args.out)
    for s, note in SCHEME_NOTES.items():
        print(f"  {s:<11} {note}")
    a = rep.asymptotic()
    print(f"asymptotic per-logical ratio {a['ratio']}, reduction {a['reduction_pct']}%")

    if args.plot:
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        for s in SCHEME_NOTES:
            rows = [r for r in rep.rows if r.scheme == s]
            ax.plot([r.d for r in rows], [100 * r.reduction for r in rows], label=s)
        ax.axhline(100 * (1 - 25 / 64), ls=":", c="k", lw=1)
        ax.set_xlabel("distance d")
        ax.set_ylabel("reduction vs planar (%)")
        ax.legend()
        fig.tight_layout()
        png = args.out.with_suffix(".png")
        fig.savefig(png, dpi=120)
        print("wrote", png)


if __name__ == "__main__":
    main()
