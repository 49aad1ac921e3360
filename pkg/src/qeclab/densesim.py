"""Dense state-vector simulator for small registers.

Kets are big-endian: qubit 0 is the leftmost character of a basis label, so
``amps[0b100]`` on three qubits is the amplitude of ``|100>`` with qubit 0
set.  The simulator is the exact reference used to check the tableau
backend, the code catalog and the decoders.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliError, PauliTerm

MAX_QUBITS = 14
ATOL = 1e-10

_SQ = 1 / np.sqrt(2)
GATES_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "P": np.array([[1, 0], [0, 1j]], dtype=complex),
    "PDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
}
_ALIASES = {"S": "P", "SDG": "PDG", "P†": "PDG", "PDAG": "PDG", "CX": "CNOT"}


class SimulatorError(ValueError):
    """Invalid register size, targets, or operator."""


def rotation(axis: str, eps: float) -> np.ndarray:
    """exp(i*eps*sigma_axis) = cos(eps) I + i sin(eps) sigma_axis."""
    return np.cos(eps) * GATES_1Q["I"] + 1j * np.sin(eps) * GATES_1Q[axis.upper()]


class StateVector:
    """2^n complex amplitudes, normalized."""

    def __init__(self, amps, max_qubits: int = MAX_QUBITS):
        amps = np.asarray(amps, dtype=complex).ravel()
        n = int(round(np.log2(len(amps)))) if len(amps) else 0
        if n < 1 or 1 << n != len(amps):
            raise SimulatorError("amplitude count must be a power of two >= 2")
        if n > max_qubits:
            raise SimulatorError(f"{n} qubits exceeds the dense cap of {max_qubits}")
        norm = np.linalg.norm(amps)
        if norm < ATOL:
            raise SimulatorError("zero vector is not a state")
        self.n = n
        self.amps = amps / norm
        self.max_qubits = max_qubits

    @classmethod
    def zeros(cls, n: int, max_qubits: int = MAX_QUBITS) -> "StateVector":
        if n > max_qubits:
            raise SimulatorError(f"{n} qubits exceeds the dense cap of {max_qubits}")
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1
        return cls(amps, max_qubits)

    @classmethod
    def from_label(cls, label: str) -> "StateVector":
        """Computational basis state, e.g. ``"0110"``."""
        amps = np.zeros(1 << len(label), dtype=complex)
        amps[int(label, 2)] = 1
        return cls(amps)

    @classmethod
    def from_terms(cls, terms: dict[str, complex]) -> "StateVector":
        """Superposition from ``{bitstring: amplitude}``; normalized."""
        n = len(next(iter(terms)))
        amps = np.zeros(1 << n, dtype=complex)
        for label, a in terms.items():
            amps[int(label, 2)] += a
        return cls(amps)

    def copy(self) -> "StateVector":
        out = object.__new__(StateVector)
        out.n, out.amps, out.max_qubits = self.n, self.amps.copy(), self.max_qubits
        return out

    # -- inspection -------------------------------------------------------
    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def dump(self, atol: float = ATOL) -> list[tuple[str, complex]]:
        """Nonzero amplitudes as (ket label, amplitude), sorted by label."""
        idx = np.flatnonzero(np.abs(self.amps) > atol)
        return [(format(i, f"0{self.n}b"), complex(self.amps[i])) for i in idx]

    def canonical_phase(self) -> "StateVector":
        """Copy whose first nonzero amplitude is real and positive."""
        out = self.copy()
        nz = np.flatnonzero(np.abs(out.amps) > ATOL)
        a = out.amps[nz[0]]
        out.amps *= abs(a) / a
        return out

    def expectation(self, p: PauliTerm) -> complex:
        return complex(np.vdot(self.amps, apply_pauli(self, p).amps))

    def __repr__(self) -> str:
        body = " + ".join(f"({a.real:.4g}{a.imag:+.4g}j)|{k}>" for k, a in self.dump()[:8])
        return f"StateVector(n={self.n}: {body}{' ...' if len(self.dump()) > 8 else ''})"


# -- gates ------------------------------------------------------------------
def _check_targets(state: StateVector, targets: Sequence[int]) -> None:
    if len(set(targets)) != len(targets):
        raise SimulatorError(f"duplicate targets {list(targets)}")
    for t in targets:
        if not 0 <= t < state.n:
            raise SimulatorError(f"target {t} out of range for {state.n} qubits")


def apply_matrix(state: StateVector, matrix: np.ndarray, targets: Sequence[int]) -> StateVector:
    """Apply a 2^k x 2^k matrix on ``targets`` (first target = most significant)."""
    _check_targets(state, targets)
    k = len(targets)
    psi = state.amps.reshape((2,) * state.n)
    m = np.asarray(matrix, dtype=complex).reshape((2,) * (2 * k))
    psi = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), list(targets)))
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    out = state.copy()
    out.amps = psi.reshape(-1)
    return out


def apply_gate(state: StateVector, gate: str, targets: Sequence[int] | int, eps: float | None = None) -> StateVector:
    """Named gate: X Y Z H P PDG T CNOT CZ SWAP, or ``RX/RY/RZ`` with ``eps``.

    ``RX`` with angle ``eps`` is exp(i eps X), the coherent over-rotation model.
    """
    if isinstance(targets, int):
        targets = [targets]
    name = _ALIASES.get(gate.upper(), gate.upper())
    if name in GATES_1Q:
        if len(targets) != 1:
            raise SimulatorError(f"{name} takes one target")
        return apply_matrix(state, GATES_1Q[name], targets)
    if name in ("RX", "RY", "RZ"):
        if eps is None or len(targets) != 1:
            raise SimulatorError(f"{name} takes one target and an angle")
        return apply_matrix(state, rotation(name[1], eps), targets)
    if name == "CNOT":
        if len(targets) != 2:
            raise SimulatorError("CNOT takes (control, target)")
        m = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
        return apply_matrix(state, m, targets)
    if name == "CZ":
        return apply_matrix(state, np.diag([1, 1, 1, -1]).astype(complex), targets)
    if name == "SWAP":
        return apply_matrix(state, np.eye(4, dtype=complex)[[0, 2, 1, 3]], targets)
    raise SimulatorError(f"unknown gate {gate!r}")


def _index_mask(n: int, qubit_mask: int) -> int:
    """Convert a qubit-indexed bitmask to a big-endian amplitude-index mask."""
    out = 0
    for q in range(n):
        if qubit_mask >> q & 1:
            out |= 1 << (n - 1 - q)
    return out


def _pauli_action(n: int, p: PauliTerm):
    """Return (flip_mask, per-index sign array incl. phase) so P|b> = c_b |b ^ flip>."""
    xm, zm = _index_mask(n, p.x), _index_mask(n, p.z)
    idx = np.arange(1 << n)
    # i^phase * prod_q sigma_q with Y = i X Z, acting X^x Z^z on |b>: Z first.
    zpar = (np.bitwise_count(idx & zm) & 1).astype(np.int64)
    coef = (1j ** ((p.phase + (p.x & p.z).bit_count()) % 4)) * (1 - 2 * zpar)
    return xm, coef


def apply_pauli(state: StateVector, p: PauliTerm) -> StateVector:
    if p.n != state.n:
        raise PauliError(f"size mismatch: {p.n} vs {state.n}")
    xm, coef = _pauli_action(state.n, p)
    out = state.copy()
    new = np.empty_like(state.amps)
    idx = np.arange(1 << state.n)
    new[idx ^ xm] = coef * state.amps
    out.amps = new
    return out


def apply_pauli_sum(state: StateVector, terms: Iterable[tuple[complex, PauliTerm]]) -> StateVector:
    """Apply sum_k c_k P_k (renormalized); used for Kraus-style error operators."""
    acc = np.zeros_like(state.amps)
    for c, p in terms:
        acc += c * apply_pauli(state, p).amps
    out = state.copy()
    norm = np.linalg.norm(acc)
    if norm < ATOL:
        raise SimulatorError("operator annihilates the state")
    out.amps = acc / norm
    return out


def _project(state: StateVector, p: PauliTerm, outcome: int) -> tuple[np.ndarray, float]:
    """Unnormalized (I + outcome*P)/2 |psi> and its squared norm."""
    v = 0.5 * (state.amps + outcome * apply_pauli(state, p).amps)
    return v, float(np.vdot(v, v).real)


def measure_pauli(state: StateVector, p: PauliTerm, rng: np.random.Generator | None = None,
                  forced: int | None = None) -> tuple[int, StateVector, float]:
    """Projective measurement of a Hermitian Pauli.

    Returns (outcome in {+1,-1}, collapsed state, probability of that outcome).
    ``forced`` selects a branch instead of sampling (error if it has zero weight).
    """
    if p.n != state.n:
        raise PauliError(f"size mismatch: {p.n} vs {state.n}")
    if not p.is_hermitian:
        raise SimulatorError("cannot measure a non-Hermitian (imaginary-phase) Pauli")
    v_plus, prob_plus = _project(state, p, +1)
    prob_plus = min(max(prob_plus, 0.0), 1.0)
    if forced is not None:
        outcome = forced
    elif prob_plus > 1 - ATOL:
        outcome = 1
    elif prob_plus < ATOL:
        outcome = -1
    else:
        if rng is None:
            raise SimulatorError("random outcome needs an rng")
        outcome = 1 if rng.random() < prob_plus else -1
    if outcome == 1:
        v, prob = v_plus, prob_plus
    else:
        v, prob = _project(state, p, -1)
        prob = 1 - prob_plus
    if prob < ATOL:
        raise SimulatorError(f"outcome {outcome:+d} has zero probability")
    if prob > 1 - ATOL:
        prob = 1.0
    out = state.copy()
    out.amps = v / np.linalg.norm(v)
    return outcome, out, prob


def measure_qubit(state: StateVector, q: int, rng=None, forced: int | None = None) -> tuple[int, StateVector, float]:
    """Z-basis measurement of one qubit; returns bit 0/1 instead of +1/-1."""
    outcome, st, prob = measure_pauli(
        state, PauliTerm.single(state.n, q, "Z"), rng, None if forced is None else 1 - 2 * forced
    )
    return (0 if outcome == 1 else 1), st, prob


def project_onto_stabilizers(state: StateVector, gens: Sequence[PauliTerm]) -> StateVector:
    """Normalized prod_i (I + K_i)/2 |psi>."""
    amps = state.amps.copy()
    for g in gens:
        if g.n != state.n:
            raise PauliError(f"size mismatch: {g.n} vs {state.n}")
        tmp = state.copy()
        tmp.amps = amps
        amps = 0.5 * (amps + apply_pauli(tmp, g).amps)
    norm = np.linalg.norm(amps)
    if norm < ATOL:
        raise SimulatorError("projection is zero: state has no overlap with the stabilized space")
    out = state.copy()
    out.amps = amps / norm
    return out


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.n != b.n:
        raise SimulatorError(f"size mismatch: {a.n} vs {b.n}")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(np.kron(a.amps, b.amps), max(a.max_qubits, b.max_qubits))


def remove_qubit(state: StateVector, q: int, bit: int) -> StateVector:
    """Drop qubit ``q`` assuming it is in |bit> (unentangled); error otherwise."""
    psi = np.moveaxis(state.amps.reshape((2,) * state.n), q, 0)
    if np.linalg.norm(psi[1 - bit]) > 1e-9:
        raise SimulatorError(f"qubit {q} is not in |{bit}>")
    return StateVector(psi[bit].reshape(-1), state.max_qubits)
