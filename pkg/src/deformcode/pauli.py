"""Signed Pauli strings over ``n`` qubits.

Operators are stored as two integer bitmasks plus a phase exponent. Internally
the operator is ``i**k * X^x Z^z`` (per-qubit X factor to the left of the Z
factor), which makes products a single popcount:

    X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^(x1^x2) Z^(z1^z2)

The text form uses the usual ``I/X/Y/Z`` letters with ``Y = i X Z`` and an
optional leading sign, e.g. ``"-ZIIZZ"`` or ``"+iXY"``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "DimensionError",
    "PauliString",
    "pauli_mul",
    "commutes",
    "symplectic",
    "gf2_rank",
]


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


_SIGN_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_SIGN_PARSE = {"": 0, "+": 0, "-": 2, "i": 1, "+i": 1, "-i": 3}


@dataclass(frozen=True)
class PauliString:
    """Immutable signed Pauli operator.

    ``k`` is the exponent of ``i`` in the X-before-Z ordering described in the
    module docstring; use :attr:`sign` for the conventional (Y-letter) phase.
    """

    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        limit = 1 << self.n_qubits
        if self.x_mask >= limit or self.z_mask >= limit or self.x_mask < 0 or self.z_mask < 0:
            raise ValueError("mask has bits outside the qubit range")
        object.__setattr__(self, "k", self.k % 4)

    # -- construction ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def from_sparse(cls, n: int, ops: Mapping[int, str] | Iterable[tuple[int, str]], sign: int = 1) -> PauliString:
        """Build from ``{qubit: 'X'|'Y'|'Z'}``; ``sign`` is +1 or -1."""
        items = ops.items() if isinstance(ops, Mapping) else ops
        x = z = 0
        ys = 0
        for q, letter in items:
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for n={n}")
            letter = letter.upper()
            bit = 1 << q
            if (x | z) & bit:
                raise ValueError(f"qubit {q} given twice")
            if letter == "X":
                x |= bit
            elif letter == "Z":
                z |= bit
            elif letter == "Y":
                x |= bit
                z |= bit
                ys += 1
            elif letter != "I":
                raise ValueError(f"bad Pauli letter {letter!r}")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return cls(n, x, z, ys + (0 if sign == 1 else 2))

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> PauliString:
        return cls.from_sparse(n, {q: letter})

    @classmethod
    def xs(cls, n: int, qubits: Iterable[int], sign: int = 1) -> PauliString:
        return cls.from_sparse(n, {q: "X" for q in qubits}, sign)

    @classmethod
    def zs(cls, n: int, qubits: Iterable[int], sign: int = 1) -> PauliString:
        return cls.from_sparse(n, {q: "Z" for q in qubits}, sign)

    @classmethod
    def parse(cls, text: str) -> PauliString:
        """Parse ``"-ZIIZZ"``-style text; qubit 0 is the leftmost letter."""
        text = text.strip()
        i = 0
        while i < len(text) and text[i] in "+-i":
            i += 1
        prefix, body = text[:i], text[i:]
        if prefix not in _SIGN_PARSE:
            raise ValueError(f"bad sign prefix {prefix!r}")
        if not body:
            raise ValueError("empty Pauli string")
        n = len(body)
        x = z = 0
        ys = 0
        for q, ch in enumerate(body):
            bit = 1 << q
            if ch == "X":
                x |= bit
            elif ch == "Z":
                z |= bit
            elif ch == "Y":
                x |= bit
                z |= bit
                ys += 1
            elif ch not in "I_":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return cls(n, x, z, _SIGN_PARSE[prefix] + ys)

    @classmethod
    def random(cls, n: int, rng: random.Random, hermitian: bool = True) -> PauliString:
        x = rng.getrandbits(n) if n else 0
        z = rng.getrandbits(n) if n else 0
        k = _popcount(x & z) + 2 * rng.getrandbits(1)
        if not hermitian:
            k += rng.getrandbits(1)
        return cls(n, x, z, k)

    # -- properties -----------------------------------------------------------

    @property
    def sign_exponent(self) -> int:
        """Exponent ``s`` with operator = ``i**s`` times the Y-letter string."""
        return (self.k - _popcount(self.x_mask & self.z_mask)) % 4

    @property
    def sign(self) -> complex | int:
        s = self.sign_exponent
        return (1, 1j, -1, -1j)[s] if s % 2 else (1, -1)[s // 2]

    @property
    def is_hermitian(self) -> bool:
        return self.sign_exponent % 2 == 0

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    @property
    def support(self) -> list[int]:
        m = self.x_mask | self.z_mask
        return [q for q in range(self.n_qubits) if m >> q & 1]

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def letter(self, q: int) -> str:
        return "IXZY"[(self.x_mask >> q & 1) | (self.z_mask >> q & 1) << 1]

    # -- algebra --------------------------------------------------------------

    def __mul__(self, other: PauliString) -> PauliString:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, self.k + 2)

    def with_sign(self, sign: int) -> PauliString:
        """Same letters with overall sign ``sign`` (+1/-1) in Y-letter convention."""
        base = _popcount(self.x_mask & self.z_mask)
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, base + (0 if sign == 1 else 2))

    def unsigned(self) -> PauliString:
        return self.with_sign(1)

    def commutes(self, other: PauliString) -> bool:
        return commutes(self, other)

    def restricted(self, qubits: Iterable[int]) -> PauliString:
        """Drop all factors outside ``qubits`` (sign in Y-letter convention kept)."""
        keep = 0
        for q in qubits:
            keep |= 1 << q
        x, z = self.x_mask & keep, self.z_mask & keep
        k = self.sign_exponent + _popcount(x & z)
        return PauliString(self.n_qubits, x, z, k)

    def __str__(self) -> str:
        body = "".join(self.letter(q) for q in range(self.n_qubits))
        prefix = _SIGN_TEXT[self.sign_exponent]
        return ("-" + body) if prefix == "-" else body if prefix == "+" else prefix + body

    def to_text(self, explicit_plus: bool = False) -> str:
        s = str(self)
        return "+" + s if explicit_plus and s[0] not in "+-i" else s


def _check(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"size mismatch: {a.n_qubits} vs {b.n_qubits}")


def symplectic(a: PauliString, b: PauliString) -> int:
    """Symplectic inner product of ``a`` and ``b`` (0 or 1)."""
    _check(a, b)
    return (_popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)) & 1


def commutes(a: PauliString, b: PauliString) -> bool:
    return symplectic(a, b) == 0


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Group product ``a * b`` with exact phase."""
    _check(a, b)
    k = a.k + b.k + 2 * _popcount(a.z_mask & b.x_mask)
    return PauliString(a.n_qubits, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, k)


def gf2_rank(ops: Iterable[PauliString]) -> int:
    """Rank of the operators in the binary symplectic representation."""
    rows: list[int] = []
    for p in ops:
        v = p.x_mask | (p.z_mask << p.n_qubits)
        for r in rows:
            v = min(v, v ^ r)
        if v:
            rows.append(v)
            rows.sort(reverse=True)
    return len(rows)
