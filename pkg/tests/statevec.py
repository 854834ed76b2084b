"""Dense state-vector reference simulator used as an independent oracle.

Everything here is built from explicit 2x2 and 4x4 matrices, contracted onto
the state tensor, so that it shares no bit-twiddling with the tableau code. Qubit 0 is the leftmost
tensor factor / leftmost letter of the Pauli text form.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])
SDG = np.diag([1, -1j])
LETTERS = {"I": I2, "X": PX, "Y": PY, "Z": PZ}
ONE_QUBIT = {"H": H, "S": S, "SDG": SDG, "X": PX, "Y": PY, "Z": PZ}


def pauli_matrix(text: str) -> np.ndarray:
    """Matrix of a Pauli given as text such as ``"-XIZ"`` or ``"+iYY"``."""
    sign, text = _split(text)
    return sign * reduce(np.kron, [LETTERS[c] for c in text])


def _split(text: str) -> tuple[complex, str]:
    sign = 1
    while text and text[0] in "+-i":
        sign *= {"+": 1, "-": -1, "i": 1j}[text[0]]
        text = text[1:]
    return sign, text


def contract(psi: np.ndarray, u: np.ndarray, qubits: list[int], n: int) -> np.ndarray:
    """Apply the 2^k x 2^k matrix ``u`` to ``qubits`` of the flat state ``psi``."""
    k = len(qubits)
    t = psi.reshape([2] * n)
    t = np.tensordot(u.reshape([2] * (2 * k)), t, axes=(list(range(k, 2 * k)), qubits))
    # tensordot puts the gate's output axes first; move them back into place
    t = np.moveaxis(t, list(range(k)), qubits)
    return t.reshape(-1)


def embed(u: np.ndarray, qubits: list[int], n: int) -> np.ndarray:
    """Lift a 2^k x 2^k gate on ``qubits`` to the full n-qubit space."""
    k = len(qubits)
    full = np.zeros((2**n, 2**n), dtype=complex)
    for col in range(2**n):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub = 0
        for q in qubits:
            sub = sub << 1 | bits[q]
        for out_sub in range(2**k):
            amp = u[out_sub, sub]
            if amp == 0:
                continue
            nb = list(bits)
            for j, q in enumerate(qubits):
                nb[q] = (out_sub >> (k - 1 - j)) & 1
            row = 0
            for b in nb:
                row = row << 1 | b
            full[row, col] += amp
    return full


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


class StateVector:
    def __init__(self, n: int, basis: str = "zeros"):
        self.n = n
        self.psi = np.zeros(2**n, dtype=complex)
        self.psi[0] = 1
        if basis == "plus":
            for q in range(n):
                self.apply("H", q)

    @classmethod
    def from_generators(cls, gens: list[str], seed: int = 0) -> StateVector:
        """Project a generic vector onto the +1 eigenspace of every generator."""
        n = len(gens[0].lstrip("+-i"))
        sv = cls(n)
        rng = np.random.default_rng(seed)
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        for g in gens:
            psi = 0.5 * (psi + pauli_matrix(g) @ psi)
        norm = np.linalg.norm(psi)
        if norm < 1e-9:
            raise ValueError("generators have no common +1 eigenvector")
        sv.psi = psi / norm
        return sv

    def apply(self, gate: str, *qubits: int) -> StateVector:
        g = gate.upper()
        if g in ONE_QUBIT:
            u = ONE_QUBIT[g]
        elif g in ("CNOT", "CX"):
            u = CNOT
        elif g == "CZ":
            u = CZ
        elif g == "SWAP":
            u = SWAP
        else:
            raise ValueError(gate)
        self.psi = contract(self.psi, u, list(qubits), self.n)
        return self

    def _pauli(self, text: str) -> np.ndarray:
        sign, letters = _split(text)
        psi = self.psi
        for q, c in enumerate(letters):
            if c != "I":
                psi = contract(psi, LETTERS[c], [q], self.n)
        return sign * psi

    def apply_pauli(self, text: str) -> StateVector:
        self.psi = self._pauli(text)
        return self

    def expectation(self, text: str) -> float:
        return float(np.real(np.vdot(self.psi, self._pauli(text))))

    def prob_plus(self, text: str) -> float:
        return (1 + self.expectation(text)) / 2

    def measure(self, text: str, outcome: int) -> float:
        """Project onto eigenvalue ``outcome``; returns the outcome probability."""
        new = 0.5 * (self.psi + outcome * self._pauli(text))
        p = float(np.real(np.vdot(new, new)))
        if p < 1e-12:
            raise ValueError(f"outcome {outcome} of {text} has zero probability")
        self.psi = new / np.sqrt(p)
        return p
