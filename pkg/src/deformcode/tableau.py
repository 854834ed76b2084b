"""Stabilizer tableau simulator with destabilizers.

Rows ``0..n-1`` are destabilizers and rows ``n..2n-1`` stabilizers. Each row
holds boolean X and Z bit-vectors plus a phase exponent ``k`` (mod 4) in the
same ``i**k X^x Z^z`` convention as :class:`deformcode.pauli.PauliString`.
All gate updates are column operations on the bit matrices, so a gate costs
O(n) numpy work and a measurement O(n^2).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pauli import DimensionError, PauliString, gf2_rank

__all__ = [
    "ContradictionError",
    "MeasurementRecord",
    "StabilizerTableau",
    "new_state",
    "canonicalize",
    "states_equal",
]


class ContradictionError(RuntimeError):
    """A forced outcome disagrees with a deterministic measurement."""


@dataclass(frozen=True)
class MeasurementRecord:
    operator: PauliString
    outcome: int
    deterministic: bool
    forced: bool = False


def _to_bits(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def _to_int(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _popcount_rows(a: np.ndarray) -> np.ndarray:
    return a.sum(axis=-1, dtype=np.int64)


_ONE_QUBIT = {"H", "S", "SDG", "X", "Y", "Z", "I"}
_TWO_QUBIT = {"CNOT", "CX", "CZ", "SWAP"}


class StabilizerTableau:
    """Full stabilizer/destabilizer tableau of an ``n``-qubit pure state."""

    def __init__(self, n_qubits: int, seed: int | None = None):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        n = n_qubits
        self.n_qubits = n
        self.x = np.zeros((2 * n, n), dtype=bool)
        self.z = np.zeros((2 * n, n), dtype=bool)
        self.k = np.zeros(2 * n, dtype=np.int64)
        idx = np.arange(n)
        self.x[idx, idx] = True  # destabilizers X_i
        self.z[n + idx, idx] = True  # stabilizers Z_i
        self.rng_seed = seed
        self.rng = random.Random(seed)

    # -- construction ---------------------------------------------------------

    def copy(self) -> StabilizerTableau:
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n_qubits = self.n_qubits
        t.x, t.z, t.k = self.x.copy(), self.z.copy(), self.k.copy()
        t.rng_seed = self.rng_seed
        t.rng = random.Random()
        t.rng.setstate(self.rng.getstate())
        return t

    def extended(self, k: int) -> StabilizerTableau:
        """Copy with ``k`` extra qubits in ``|0>`` appended after the existing ones."""
        if k < 0:
            raise ValueError("k must be non-negative")
        n, m = self.n_qubits, self.n_qubits + k
        t = StabilizerTableau(m)
        for dst, src in ((0, 0), (m, n)):
            t.x[dst : dst + n, :n] = self.x[src : src + n]
            t.z[dst : dst + n, :n] = self.z[src : src + n]
            t.k[dst : dst + n] = self.k[src : src + n]
        t.rng_seed = self.rng_seed
        t.rng.setstate(self.rng.getstate())
        return t

    @classmethod
    def from_generators(cls, gens: Sequence[PauliString], seed: int | None = None) -> StabilizerTableau:
        """State stabilized by ``gens``.

        Redundant generators are allowed as long as they span a full-rank
        group with consistent signs.
        """
        if not gens:
            raise ValueError("no generators")
        n = gens[0].n_qubits
        for g in gens:
            _require_stabilizer_like(g, n)
        basis: list[PauliString] = []
        for g in gens:
            if gf2_rank(basis + [g]) > len(basis):
                basis.append(g)
        if len(basis) != n:
            raise ValueError(f"generators have rank {len(basis)}, need {n}")
        t = cls(n, seed)
        for g in basis:
            t.measure_pauli(g.unsigned())
        # fix signs: flip a subset of rows via destabilizers
        a = np.zeros((n, n), dtype=np.uint8)
        want = np.zeros(n, dtype=np.uint8)
        for j, g in enumerate(basis):
            a[j] = t._anti(g)[:n]
            want[j] = t.expectation(g.unsigned()) != g.sign
        y = _gf2_solve(a, want)
        for i in np.flatnonzero(y):
            t.apply_pauli(t._row(int(i)))
        for g in gens:
            if t.expectation(g) != 1:
                raise ValueError(f"generator {g} contradicts the others")
        return t

    # -- row helpers ----------------------------------------------------------

    def _row(self, i: int) -> PauliString:
        return PauliString(self.n_qubits, _to_int(self.x[i]), _to_int(self.z[i]), int(self.k[i]))

    def _anti(self, p: PauliString) -> np.ndarray:
        px, pz = _to_bits(p.x_mask, self.n_qubits), _to_bits(p.z_mask, self.n_qubits)
        return ((_popcount_rows(self.x & pz) + _popcount_rows(self.z & px)) & 1).astype(bool)

    def _rowmul(self, targets: np.ndarray, src: int) -> None:
        """rows[targets] <- rows[targets] * rows[src]."""
        if not targets.size:
            return
        xs, zs = self.x[src], self.z[src]
        self.k[targets] += self.k[src] + 2 * _popcount_rows(self.z[targets] & xs)
        self.k[targets] %= 4
        self.x[targets] ^= xs
        self.z[targets] ^= zs

    def _product_phase(self, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
        """Ordered product of the given rows: (x, z, k)."""
        xr, zr = self.x[rows], self.z[rows]
        zpref = np.bitwise_xor.accumulate(zr, axis=0)
        zbefore = np.zeros_like(zr)
        zbefore[1:] = zpref[:-1]
        k = int(self.k[rows].sum() + 2 * _popcount_rows(zbefore & xr).sum()) % 4
        return np.bitwise_xor.reduce(xr, axis=0), zpref[-1], k

    def _check(self, p: PauliString) -> None:
        if p.n_qubits != self.n_qubits:
            raise DimensionError(f"operator on {p.n_qubits} qubits, state has {self.n_qubits}")

    def _qubit(self, q: int) -> int:
        if not 0 <= q < self.n_qubits:
            raise IndexError(f"qubit {q} out of range")
        return q

    # -- gates ----------------------------------------------------------------

    def apply(self, gate: str, *qubits: int) -> StabilizerTableau:
        """Conjugate every row by a Clifford gate; returns ``self``."""
        g = gate.upper()
        if g in _ONE_QUBIT:
            if len(qubits) != 1:
                raise ValueError(f"{gate} takes one qubit")
            q = self._qubit(qubits[0])
            x, z = self.x[:, q], self.z[:, q]
            if g == "H":
                self.k += 2 * (x & z)
                self.x[:, q], self.z[:, q] = z.copy(), x.copy()
            elif g == "S":
                self.k += x
                self.z[:, q] = z ^ x
            elif g == "SDG":
                self.k += 3 * x
                self.z[:, q] = z ^ x
            elif g == "X":
                self.k += 2 * z
            elif g == "Z":
                self.k += 2 * x
            elif g == "Y":
                self.k += 2 * (x ^ z)
        elif g in _TWO_QUBIT:
            if len(qubits) != 2:
                raise ValueError(f"{gate} takes two qubits")
            a, b = self._qubit(qubits[0]), self._qubit(qubits[1])
            if a == b:
                raise ValueError("two-qubit gate on duplicate qubits")
            if g in ("CNOT", "CX"):
                self.x[:, b] ^= self.x[:, a]
                self.z[:, a] ^= self.z[:, b]
            elif g == "CZ":
                self.apply("H", b).apply("CNOT", a, b).apply("H", b)
            else:
                self.x[:, [a, b]] = self.x[:, [b, a]]
                self.z[:, [a, b]] = self.z[:, [b, a]]
        else:
            raise ValueError(f"unknown gate {gate!r}")
        self.k %= 4
        return self

    def h(self, q: int) -> StabilizerTableau:
        return self.apply("H", q)

    def s(self, q: int) -> StabilizerTableau:
        return self.apply("S", q)

    def cnot(self, c: int, t: int) -> StabilizerTableau:
        return self.apply("CNOT", c, t)

    def swap(self, a: int, b: int) -> StabilizerTableau:
        return self.apply("SWAP", a, b)

    def apply_pauli(self, p: PauliString) -> StabilizerTableau:
        """Apply Pauli ``p`` to the state (flips the sign of anticommuting rows)."""
        self._check(p)
        self.k[self._anti(p)] += 2
        self.k %= 4
        return self

    # -- measurement ----------------------------------------------------------

    def measure_pauli(self, p: PauliString, forced: int | None = None) -> MeasurementRecord:
        """Projectively measure the Hermitian Pauli ``p``.

        ``forced`` selects the outcome when it is random; forcing a
        deterministic outcome to the wrong value raises
        :class:`ContradictionError`.
        """
        self._check(p)
        if p.is_identity():
            raise ValueError("cannot measure the identity")
        if not p.is_hermitian:
            raise ValueError("measured operator must be Hermitian")
        if forced not in (None, 1, -1):
            raise ValueError("forced outcome must be +1 or -1")
        n = self.n_qubits
        anti = self._anti(p)
        hits = np.flatnonzero(anti[n:])
        if hits.size == 0:
            out = self._deterministic_value(p, anti)
            if forced is not None and forced != out:
                raise ContradictionError(f"measurement of {p} is deterministically {out:+d}, forced {forced:+d}")
            return MeasurementRecord(p, out, True, False)
        piv = n + int(hits[0])
        others = np.flatnonzero(anti)
        others = others[others != piv]
        self._rowmul(others, piv)
        # old stabilizer becomes the destabilizer partner of the new one
        d = piv - n
        self.x[d], self.z[d], self.k[d] = self.x[piv], self.z[piv], self.k[piv]
        out = forced if forced is not None else (1 if self.rng.getrandbits(1) == 0 else -1)
        signed = p.with_sign(p.sign * out)
        self.x[piv] = _to_bits(signed.x_mask, n)
        self.z[piv] = _to_bits(signed.z_mask, n)
        self.k[piv] = signed.k
        return MeasurementRecord(p, out, False, forced is not None)

    def _deterministic_value(self, p: PauliString, anti: np.ndarray) -> int:
        n = self.n_qubits
        rows = n + np.flatnonzero(anti[:n])
        if rows.size == 0:
            raise AssertionError("non-identity Pauli commuting with everything")
        _, _, k = self._product_phase(rows)
        diff = (k - p.k) % 4
        if diff % 2:
            raise AssertionError("phase mismatch: operator is not Hermitian")
        return 1 if diff == 0 else -1

    def expectation(self, p: PauliString) -> int:
        """+1/-1 if ``±p`` is in the stabilizer group, else 0. Never mutates."""
        self._check(p)
        if p.is_identity():
            return 1 if p.sign == 1 else -1
        anti = self._anti(p)
        if anti[self.n_qubits:].any():
            return 0
        return self._deterministic_value(p.with_sign(1), anti) * (1 if p.sign == 1 else -1)

    def measure(self, q: int, basis: str = "Z", forced: int | None = None) -> MeasurementRecord:
        return self.measure_pauli(PauliString.single(self.n_qubits, self._qubit(q), basis), forced)

    # -- inspection -----------------------------------------------------------

    def generators(self) -> list[PauliString]:
        n = self.n_qubits
        return [self._row(i) for i in range(n, 2 * n)]

    def destabilizers(self) -> list[PauliString]:
        return [self._row(i) for i in range(self.n_qubits)]

    def canonical(self) -> list[PauliString]:
        return canonicalize(self)

    def snapshot(self) -> str:
        """Canonical generators, one per line, in text form."""
        return "\n".join(str(g) for g in canonicalize(self)) + "\n"

    def is_valid(self) -> bool:
        """Check commutation structure of the full tableau."""
        n = self.n_qubits
        xi, zi = self.x.astype(np.int64), self.z.astype(np.int64)
        form = (xi @ zi.T + zi @ xi.T) % 2
        want = np.zeros((2 * n, 2 * n), dtype=np.int64)
        idx = np.arange(n)
        want[idx, n + idx] = 1
        want[n + idx, idx] = 1
        herm = all(self._row(i).is_hermitian for i in range(2 * n))
        return bool(np.array_equal(form, want)) and herm


def new_state(n: int, basis: str = "zeros", seed: int | None = None) -> StabilizerTableau:
    """All-|0> (``"zeros"``) or all-|+> (``"plus"``) product state."""
    t = StabilizerTableau(n, seed)
    if basis in ("plus", "+"):
        for q in range(n):
            t.h(q)
    elif basis not in ("zeros", "0"):
        raise ValueError(f"unknown basis {basis!r}")
    return t


def _require_stabilizer_like(g: PauliString, n: int) -> None:
    if g.n_qubits != n:
        raise DimensionError("generator size mismatch")
    if not g.is_hermitian:
        raise ValueError(f"generator {g} carries an imaginary phase")
    if g.is_identity():
        raise ValueError("identity generator")


def _gf2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ y = b`` over GF(2) for square invertible ``a``."""
    n = a.shape[0]
    m = np.concatenate([a.astype(np.uint8) & 1, (b.astype(np.uint8) & 1)[:, None]], axis=1)
    row = 0
    for col in range(n):
        piv = np.flatnonzero(m[row:, col])
        if not piv.size:
            raise ValueError("singular system")
        p = row + int(piv[0])
        m[[row, p]] = m[[p, row]]
        mask = m[:, col].astype(bool)
        mask[row] = False
        m[mask] ^= m[row]
        row += 1
    return m[:, n]


def _reduce(gens: Iterable[PauliString], n: int) -> list[PauliString]:
    rows = [g for g in gens]
    out: list[PauliString] = []
    # column order: x_0..x_{n-1}, z_0..z_{n-1}
    for col in range(2 * n):
        bit = 1 << (col % n)
        if col < n:
            pick = lambda r: r.x_mask & bit  # noqa: E731
        else:
            pick = lambda r: r.z_mask & bit  # noqa: E731
        piv = next((i for i, r in enumerate(rows) if pick(r)), None)
        if piv is None:
            continue
        pr = rows.pop(piv)
        rows = [r * pr if pick(r) else r for r in rows]
        out = [r * pr if pick(r) else r for r in out]
        out.append(pr)
    if any(not r.is_identity() for r in rows):
        raise AssertionError("reduction left residual rows")
    return out


def canonicalize(t: StabilizerTableau | Sequence[PauliString]) -> list[PauliString]:
    """Reduced row-echelon generator set; identical for identical signed groups."""
    gens = t.generators() if isinstance(t, StabilizerTableau) else list(t)
    if not gens:
        return []
    n = gens[0].n_qubits
    red = _reduce(gens, n)
    return sorted(red, key=_sort_key)


def _sort_key(p: PauliString) -> tuple[int, int, int]:
    # lowest set column in x-then-z order
    n = p.n_qubits
    v = p.x_mask | (p.z_mask << n)
    low = (v & -v).bit_length()
    return (low, v, p.k)


def states_equal(a: StabilizerTableau, b: StabilizerTableau) -> bool:
    if a.n_qubits != b.n_qubits:
        raise DimensionError("size mismatch")
    return canonicalize(a) == canonicalize(b)
