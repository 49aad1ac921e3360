"""Stabilizer-state simulation in the Heisenberg picture.

A state is tracked as a list of signed, commuting, independent Pauli
generators.  Pure states (``n`` generators) also carry a paired list of
destabilizers so that random measurement outcomes update in O(n^2).
Partially constrained tableaus (fewer generators) are allowed while a
code is being encoded; they use a slower generic update.
"""
from __future__ import annotations

from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .pauli import PauliError, PauliTerm, commutes, format_pauli, parse


class TableauError(ValueError):
    """Invalid generator set, gate or size."""


class Membership(str, Enum):
    IN_GROUP_PLUS = "in_group(+)"
    IN_GROUP_MINUS = "in_group(-)"
    ANTICOMMUTES = "anticommutes"
    COMMUTES_OUTSIDE = "commutes_outside"


CLIFFORD_GATES = ("I", "X", "Y", "Z", "H", "P", "PDG", "CNOT", "CZ", "SWAP")
_ALIASES = {"S": "P", "SDG": "PDG", "P†": "PDG", "PDAG": "PDG", "CX": "CNOT"}
_ARITY = {g: 1 for g in CLIFFORD_GATES} | {"CNOT": 2, "CZ": 2, "SWAP": 2}


def _to_bits(p: PauliTerm) -> tuple[np.ndarray, np.ndarray]:
    q = np.arange(p.n)
    return (p.x >> q & 1).astype(bool), (p.z >> q & 1).astype(bool)


def _to_term(x: np.ndarray, z: np.ndarray, neg: bool) -> PauliTerm:
    w = 1 << np.arange(len(x), dtype=object)
    return PauliTerm(len(x), int(np.dot(x.astype(object), w)), int(np.dot(z.astype(object), w)), 2 if neg else 0)


def _rowmul(x1, z1, r1, x2, z2, r2):
    """Row-wise product (row1 * row2) with sign; x1.. may be 2-D stacks."""
    x3, z3 = x1 ^ x2, z1 ^ z2
    e = (2 * r1.astype(int) + 2 * int(r2)
         + np.count_nonzero(x1 & z1, axis=-1) + int(np.count_nonzero(x2 & z2))
         + 2 * np.count_nonzero(z1 & x2, axis=-1)
         - np.count_nonzero(x3 & z3, axis=-1))
    return x3, z3, (e % 4) >= 2


def _conjugate(x, z, r, gate: str, t: Sequence[int]) -> None:
    """In-place conjugation of a stack of rows (generators or destabilizers)."""
    a = t[0]
    if gate == "I":
        return
    if gate == "X":
        r ^= z[:, a]
    elif gate == "Z":
        r ^= x[:, a]
    elif gate == "Y":
        r ^= x[:, a] ^ z[:, a]
    elif gate == "H":
        r ^= x[:, a] & z[:, a]
        x[:, a], z[:, a] = z[:, a].copy(), x[:, a].copy()
    elif gate == "P":
        r ^= x[:, a] & z[:, a]
        z[:, a] ^= x[:, a]
    elif gate == "PDG":
        r ^= x[:, a] & ~z[:, a]
        z[:, a] ^= x[:, a]
    elif gate == "CNOT":
        b = t[1]
        r ^= x[:, a] & z[:, b] & ~(x[:, b] ^ z[:, a])
        x[:, b] ^= x[:, a]
        z[:, a] ^= z[:, b]
    elif gate == "CZ":
        b = t[1]
        r ^= x[:, a] & x[:, b] & (z[:, a] ^ z[:, b])
        z[:, a] ^= x[:, b]
        z[:, b] ^= x[:, a]
    elif gate == "SWAP":
        b = t[1]
        x[:, [a, b]] = x[:, [b, a]]
        z[:, [a, b]] = z[:, [b, a]]


def canonical_gate(name: str) -> str:
    g = name.upper()
    g = _ALIASES.get(g, _ALIASES.get(name, g))
    if g not in _ARITY:
        raise TableauError(f"{name!r} is not a supported Clifford gate")
    return g


class StabilizerTableau:
    """Signed generator list, with destabilizers when the state is pure."""

    def __init__(self, n: int, x, z, r, dx=None, dz=None, dr=None, validate: bool = True):
        if n < 1:
            raise TableauError("need at least one qubit")
        self.n = n
        self.x = np.asarray(x, dtype=bool).reshape(-1, n).copy()
        self.z = np.asarray(z, dtype=bool).reshape(-1, n).copy()
        self.r = np.asarray(r, dtype=bool).reshape(-1).copy()
        if dx is not None:
            self.dx = np.asarray(dx, dtype=bool).reshape(-1, n).copy()
            self.dz = np.asarray(dz, dtype=bool).reshape(-1, n).copy()
            self.dr = np.asarray(dr, dtype=bool).reshape(-1).copy()
        else:
            self.dx = self.dz = self.dr = None
        if validate:
            self.check()
            if self.dx is None and self.num_generators == n:
                self._build_destabilizers()

    # -- constructors -------------------------------------------------------
    @classmethod
    def computational_state(cls, n: int) -> "StabilizerTableau":
        """|0...0>: generators Z_q, destabilizers X_q."""
        if n < 1:
            raise TableauError("need at least one qubit")
        eye = np.eye(n, dtype=bool)
        zero = np.zeros((n, n), dtype=bool)
        nil = np.zeros(n, dtype=bool)
        return cls(n, zero, eye, nil, eye, zero, nil, validate=False)

    @classmethod
    def from_generators(cls, gens: Iterable[PauliTerm | str]) -> "StabilizerTableau":
        terms = [parse(g) if isinstance(g, str) else g for g in gens]
        if not terms:
            raise TableauError("empty generator list needs an explicit n; use empty(n)")
        n = terms[0].n
        for g in terms:
            if g.n != n:
                raise TableauError("generators have different sizes")
            if not g.is_hermitian:
                raise TableauError(f"generator {g} has an imaginary phase")
        x, z = zip(*(_to_bits(g) for g in terms))
        r = [g.phase == 2 for g in terms]
        return cls(n, np.array(x), np.array(z), np.array(r))

    @classmethod
    def empty(cls, n: int) -> "StabilizerTableau":
        """No constraints at all (maximally mixed placeholder)."""
        return cls(n, np.zeros((0, n)), np.zeros((0, n)), np.zeros(0))

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.n, self.x, self.z, self.r, self.dx, self.dz, self.dr, validate=False)

    # -- inspection ---------------------------------------------------------
    @property
    def num_generators(self) -> int:
        return self.x.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.num_generators == self.n

    def generator(self, i: int) -> PauliTerm:
        return _to_term(self.x[i], self.z[i], bool(self.r[i]))

    def generators(self) -> list[PauliTerm]:
        return [self.generator(i) for i in range(self.num_generators)]

    def _symplectic(self) -> np.ndarray:
        return np.hstack([self.x, self.z]).astype(np.uint8)

    def check(self) -> None:
        """Raise unless generators pairwise commute and are independent."""
        m = self.num_generators
        if m > self.n:
            raise TableauError(f"{m} generators on {self.n} qubits")
        if m == 0:
            return
        xi, zi = self.x.astype(np.uint8), self.z.astype(np.uint8)
        sym = (xi @ zi.T + zi @ xi.T) % 2
        if sym.any():
            i, j = np.argwhere(sym)[0]
            raise TableauError(f"generators {i} and {j} anticommute")
        if gf2.rank(self._symplectic()) != m:
            raise TableauError("generators are not independent")

    def dump(self) -> str:
        """One signed Pauli string per generator line."""
        return "\n".join(format_pauli(g, plus=True) for g in self.generators())

    def __repr__(self) -> str:
        return f"StabilizerTableau(n={self.n}, gens=[{', '.join(str(g) for g in self.generators())}])"

    def _build_destabilizers(self) -> None:
        # Find D with symp(D_i, S_j) = delta_ij by solving [S_z | S_x] D^T = I.
        a = np.hstack([self.z, self.x]).astype(np.uint8)
        d = []
        for i in range(self.n):
            e = np.zeros(self.n, dtype=np.uint8)
            e[i] = 1
            sol = gf2.solve_right(a, e)
            if sol is None:
                raise TableauError("could not complete destabilizers")
            d.append(sol)
        d = np.array(d, dtype=bool)
        self.dx, self.dz = d[:, : self.n].copy(), d[:, self.n:].copy()
        self.dr = np.zeros(self.n, dtype=bool)

    # -- evolution ----------------------------------------------------------
    def apply_clifford(self, gate: str, targets: Sequence[int] | int) -> "StabilizerTableau":
        """Conjugate every generator by the gate, in place; returns self."""
        g = canonical_gate(gate)
        t = [targets] if isinstance(targets, (int, np.integer)) else list(targets)
        if len(t) != _ARITY[g]:
            raise TableauError(f"{g} takes {_ARITY[g]} target(s), got {len(t)}")
        if len(set(t)) != len(t) or any(not 0 <= q < self.n for q in t):
            raise TableauError(f"bad targets {t} for n={self.n}")
        _conjugate(self.x, self.z, self.r, g, t)
        if self.dx is not None:
            _conjugate(self.dx, self.dz, self.dr, g, t)
        return self

    def apply_pauli(self, e: PauliTerm) -> "StabilizerTableau":
        """Flip the sign of every generator that anticommutes with ``e``."""
        if e.n != self.n:
            raise PauliError(f"size mismatch: {e.n} vs {self.n}")
        ex, ez = _to_bits(e)
        self.r ^= self._anti(ex, ez, self.x, self.z)
        return self

    @staticmethod
    def _anti(px, pz, x, z) -> np.ndarray:
        return (np.count_nonzero(x & pz, axis=1) + np.count_nonzero(z & px, axis=1)) % 2 == 1

    def syndrome(self, ops: Sequence[PauliTerm]) -> list[int]:
        """Deterministic +1/-1 eigenvalue bits (0/1) of operators in the group."""
        out = []
        for p in ops:
            m = self.contains(p)
            if m == Membership.IN_GROUP_PLUS:
                out.append(0)
            elif m == Membership.IN_GROUP_MINUS:
                out.append(1)
            else:
                raise TableauError(f"{p} is not in the stabilizer group ({m.value})")
        return out

    def _signed_product(self, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
        x = np.zeros(self.n, dtype=bool)
        z = np.zeros(self.n, dtype=bool)
        r = False
        for i in np.flatnonzero(coeffs):
            x, z, r = _rowmul(x, z, np.bool_(r), self.x[i], self.z[i], self.r[i])
            r = bool(r)
        return x, z, r

    def contains(self, p: PauliTerm) -> Membership:
        """Decide whether +p or -p lies in the generated group."""
        if p.n != self.n:
            raise PauliError(f"size mismatch: {p.n} vs {self.n}")
        px, pz = _to_bits(p)
        if self.num_generators and self._anti(px, pz, self.x, self.z).any():
            return Membership.ANTICOMMUTES
        v = np.concatenate([px, pz]).astype(np.uint8)
        c = gf2.solve_left(self._symplectic(), v) if self.num_generators else (None if v.any() else np.zeros(0))
        if c is None:
            return Membership.COMMUTES_OUTSIDE
        if not p.is_hermitian:
            raise TableauError(f"{p} has an imaginary phase")
        _, _, neg = self._signed_product(c)
        return Membership.IN_GROUP_PLUS if neg == (p.phase == 2) else Membership.IN_GROUP_MINUS

    def expectation(self, p: PauliTerm) -> int:
        """<p> on the (possibly partial) stabilizer state: +1, -1 or 0."""
        m = self.contains(p)
        return {Membership.IN_GROUP_PLUS: 1, Membership.IN_GROUP_MINUS: -1}.get(m, 0)

    def measure_pauli(self, p: PauliTerm, rng: np.random.Generator | None = None,
                      forced: int | None = None) -> tuple[int, bool]:
        """Projectively measure a Hermitian Pauli, updating in place.

        Returns (outcome +1/-1, deterministic).  ``forced`` picks the outcome of
        a random measurement (it is ignored for deterministic ones).
        """
        if p.n != self.n:
            raise PauliError(f"size mismatch: {p.n} vs {self.n}")
        if not p.is_hermitian:
            raise TableauError("cannot measure a non-Hermitian Pauli")
        px, pz = _to_bits(p)
        anti = self._anti(px, pz, self.x, self.z) if self.num_generators else np.zeros(0, bool)
        if not anti.any():
            if self.dx is not None:
                # p = +-prod of generators paired with anticommuting destabilizers
                sel = self._anti(px, pz, self.dx, self.dz)
                _, _, neg = self._signed_product(sel)
                return (-1 if neg != (p.phase == 2) else 1), True
            m = self.contains(p)
            if m == Membership.IN_GROUP_PLUS:
                return 1, True
            if m == Membership.IN_GROUP_MINUS:
                return -1, True
            outcome = self._draw(rng, forced)
            self._append(px, pz, (outcome == -1) != (p.phase == 2))
            return outcome, False

        outcome = self._draw(rng, forced)
        k = int(np.flatnonzero(anti)[0])
        others = np.flatnonzero(anti)
        others = others[others != k]
        if len(others):
            self.x[others], self.z[others], self.r[others] = _rowmul(
                self.x[others], self.z[others], self.r[others], self.x[k], self.z[k], self.r[k])
        if self.dx is not None:
            danti = self._anti(px, pz, self.dx, self.dz)
            danti[k] = False
            rows = np.flatnonzero(danti)
            if len(rows):
                self.dx[rows], self.dz[rows], self.dr[rows] = _rowmul(
                    self.dx[rows], self.dz[rows], self.dr[rows], self.x[k], self.z[k], self.r[k])
            self.dx[k], self.dz[k], self.dr[k] = self.x[k], self.z[k], self.r[k]
        self.x[k], self.z[k] = px, pz
        self.r[k] = (outcome == -1) != (p.phase == 2)
        return outcome, False

    @staticmethod
    def _draw(rng, forced) -> int:
        if forced is not None:
            if forced not in (1, -1):
                raise TableauError("forced outcome must be +1 or -1")
            return forced
        if rng is None:
            raise TableauError("random outcome needs an rng")
        return 1 if rng.random() < 0.5 else -1

    def _append(self, px, pz, neg: bool) -> None:
        self.x = np.vstack([self.x, px])
        self.z = np.vstack([self.z, pz])
        self.r = np.append(self.r, neg)
        if self.is_pure:
            self._build_destabilizers()

    def measure_qubit(self, q: int, rng=None, forced: int | None = None) -> int:
        """Z measurement of one qubit; returns the bit 0/1."""
        f = None if forced is None else 1 - 2 * forced
        out, _ = self.measure_pauli(PauliTerm.single(self.n, q, "Z"), rng, f)
        return 0 if out == 1 else 1

    def reset_qubit(self, q: int, rng=None) -> "StabilizerTableau":
        """Measure Z_q and flip to |0>."""
        if self.measure_qubit(q, rng) == 1:
            self.apply_clifford("X", q)
        return self

    # -- oracle bridge --------------------------------------------------------
    def to_statevector(self, max_qubits: int | None = None):
        """The unique +1 joint eigenstate, first nonzero amplitude real positive."""
        from . import densesim

        cap = densesim.MAX_QUBITS if max_qubits is None else max_qubits
        if not self.is_pure:
            raise TableauError("to_statevector needs n generators")
        if self.n > cap:
            raise densesim.SimulatorError(f"{self.n} qubits exceeds the dense cap of {cap}")
        # pure-Z combinations fix a computational basis state in the support
        rref, piv, t = gf2.row_reduce(self._symplectic())
        zrows = [i for i, c in enumerate(piv) if c >= self.n]
        b = np.zeros(self.n, dtype=np.uint8)
        if zrows:
            zm = rref[zrows][:, self.n:]
            s = np.array([int(self._signed_product(t[i])[2]) for i in zrows], dtype=np.uint8)
            b = gf2.solve_right(zm, s)
        label = "".join(str(int(v)) for v in b)
        start = densesim.StateVector.from_label(label)
        start.max_qubits = cap
        return densesim.project_onto_stabilizers(start, self.generators()).canonical_phase()


def conjugate_pauli(p: PauliTerm, gate: str, targets: Sequence[int] | int) -> PauliTerm:
    """Return U p U^dagger for a Clifford gate U on ``targets``; the i-power is kept."""
    g = canonical_gate(gate)
    t = [targets] if isinstance(targets, (int, np.integer)) else list(targets)
    if len(t) != _ARITY[g] or any(not 0 <= q < p.n for q in t):
        raise TableauError(f"bad targets {t} for {g} on n={p.n}")
    x, z = _to_bits(p)
    x, z, r = x[None, :].copy(), z[None, :].copy(), np.zeros(1, dtype=bool)
    _conjugate(x, z, r, g, t)
    out = _to_term(x[0], z[0], bool(r[0]))
    return out.with_phase((out.phase + p.phase) % 4)


def computational_state(n: int) -> StabilizerTableau:
    return StabilizerTableau.computational_state(n)


def from_generators(gens: Iterable[PauliTerm | str]) -> StabilizerTableau:
    return StabilizerTableau.from_generators(gens)


def apply_clifford(t: StabilizerTableau, gate: str, targets) -> StabilizerTableau:
    return t.apply_clifford(gate, targets)


def apply_pauli(t: StabilizerTableau, e: PauliTerm) -> StabilizerTableau:
    return t.apply_pauli(e)


def measure_pauli(t: StabilizerTableau, p: PauliTerm, rng=None, forced=None) -> tuple[int, bool, StabilizerTableau]:
    out, det = t.measure_pauli(p, rng, forced)
    return out, det, t


def contains(t: StabilizerTableau, p: PauliTerm) -> Membership:
    return t.contains(p)


def group_contains(gens: Sequence[PauliTerm], p: PauliTerm) -> Membership:
    """Membership test against an arbitrary commuting generator list (signs ignored
    when the list may be dependent)."""
    if not gens:
        return Membership.IN_GROUP_PLUS if p.x == 0 and p.z == 0 and p.phase == 0 else (
            Membership.COMMUTES_OUTSIDE if p.x or p.z else Membership.IN_GROUP_MINUS)
    if any(not commutes(g, p) for g in gens):
        return Membership.ANTICOMMUTES
    t = StabilizerTableau(gens[0].n, *_stack(gens), validate=False)
    return t.contains(p)


def _stack(gens: Sequence[PauliTerm]):
    x, z = zip(*(_to_bits(g) for g in gens))
    return np.array(x), np.array(z), np.array([g.phase == 2 for g in gens])


__all__ = [
    "CLIFFORD_GATES", "Membership", "StabilizerTableau", "TableauError",
    "apply_clifford", "apply_pauli", "canonical_gate", "computational_state", "conjugate_pauli", "contains",
    "from_generators", "group_contains", "measure_pauli",
]
