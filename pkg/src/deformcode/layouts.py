"""Builders for the reference layouts shipped as JSON fixtures."""
from __future__ import annotations

from pathlib import Path

from .lattice import Coord, Layout, _regions, build_lattice, make_deformation_qubit, region_qubit

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# first pinwheel qubit of the local block, relative to the 35x35 window
LOCAL_BLOCK_OFFSET = (7, 8)
LOCAL_BLOCK_PAD = 10


def _rotate(p: Coord, origin: Coord, k: int) -> Coord:
    r, c = p[0] - origin[0], p[1] - origin[1]
    for _ in range(k % 4):
        r, c = c, -r
    return (r + origin[0], c + origin[1])


def pinwheel(base: Layout, origin: Coord, first: Coord, size: int, thickness: int) -> Layout:
    """Four four-fin qubits related by quarter turns about ``origin``."""
    (z0, z1), (x0, x1) = _regions(base, first, "four_fin", size, thickness)
    lay = base
    for k in range(4):

        def rot(h, k=k):
            return frozenset(_rotate(p, origin, k) for p in h)

        lay, _ = region_qubit(
            lay, _rotate(first, origin, k), (rot(z0), rot(z1)), (rot(x0), rot(x1)), "four_fin", thickness
        )
    return lay


def single_d3() -> Layout:
    """Single distance-3 four-fin qubit: 48 data qubits, one logical."""
    lay, _ = make_deformation_qubit(build_lattice(11, 9), (4, 5), 3)
    return lay


def pair_d5() -> Layout:
    """Two distance-5 four-fin qubits whose Z fins meet at one data qubit."""
    lay = build_lattice(15, 25)
    lay, _ = make_deformation_qubit(lay, (8, 7), 5)
    lay, _ = make_deformation_qubit(lay, (16, 7), 5)
    return lay


PAIR_SHARED = (12, 7)


def bar_d5() -> Layout:
    lay, _ = make_deformation_qubit(build_lattice(21, 13), (6, 11), 5, shape="bar")
    return lay


def skew_d5() -> Layout:
    lay, _ = make_deformation_qubit(build_lattice(17, 17), (8, 9), 5, shape="skew")
    return lay


def close_pair_d5() -> Layout:
    """Two distance-5 qubits with neighbouring Z halves one cell apart."""
    lay = build_lattice(15, 27)
    lay, _ = make_deformation_qubit(lay, (8, 7), 5)
    lay, _ = make_deformation_qubit(lay, (18, 7), 5)
    return lay


def pinwheel_d10() -> Layout:
    """Four thick distance-10 qubits whose Z supers close into a loop."""
    base = build_lattice(61, 61)
    origin = (30, 30)
    return pinwheel(base, origin, (origin[0], origin[1] - 11), 4, 2)


def local_block() -> Layout:
    """Local block of four thickness-2 qubits, reduced distance 9.

    The 35x35 block sits inside a margin of plain lattice so that its outer
    edge is not a physical boundary.
    """
    p = LOCAL_BLOCK_PAD
    base = build_lattice(35 + 2 * p, 35 + 2 * p)
    origin = (p + 17, p + 17)
    first = (p + LOCAL_BLOCK_OFFSET[0], p + LOCAL_BLOCK_OFFSET[1])
    return pinwheel(base, origin, first, 4, 2)


LAYOUTS = {"single_d3": single_d3, "pair_d5": pair_d5, "bar_d5": bar_d5, "skew_d5": skew_d5, "close_pair_d5": close_pair_d5, "pinwheel_d10": pinwheel_d10, "local_block": local_block}


def load(name: str) -> Layout:
    path = FIXTURE_DIR / f"{name}.json"
    if path.exists():
        return Layout.load(path)
    return LAYOUTS[name]()
