"""n-qubit Pauli operators in symplectic (x, z) bitmask form.

Qubit ``q`` is bit ``q`` of the masks and the ``q``-th character of the
text form, so ``"XZI"`` has X on qubit 0.  A term is stored as its
displayed coefficient ``1j**phase`` times a tensor product of I/X/Y/Z
letters, with ``Y = iXZ``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

_LETTERS = "IXZY"  # index = x + 2*z
_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}


class PauliError(ValueError):
    """Malformed Pauli text or mismatched operand sizes."""


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True)
class PauliTerm:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0  # exponent of i, 0..3

    def __post_init__(self):
        if self.n < 1:
            raise PauliError("a Pauli term needs at least one qubit")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise PauliError("mask has bits beyond n")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliTerm":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliTerm":
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} out of range for n={n}")
        idx = _LETTERS.index(letter)
        bit = 1 << qubit
        return cls(n, bit if idx & 1 else 0, bit if idx & 2 else 0)

    @classmethod
    def from_support(cls, n: int, qubits: Iterable[int], letter: str) -> "PauliTerm":
        idx = _LETTERS.index(letter)
        mask = 0
        for q in qubits:
            if not 0 <= q < n:
                raise PauliError(f"qubit {q} out of range for n={n}")
            mask |= 1 << q
        return cls(n, mask if idx & 1 else 0, mask if idx & 2 else 0)

    # -- properties -------------------------------------------------------
    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> list[int]:
        m = self.x | self.z
        return [q for q in range(self.n) if m >> q & 1]

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian terms."""
        if not self.is_hermitian:
            raise PauliError("imaginary-phase term has no real sign")
        return 1 if self.phase == 0 else -1

    def letter(self, q: int) -> str:
        return _LETTERS[(self.x >> q & 1) + 2 * (self.z >> q & 1)]

    def unsigned(self) -> "PauliTerm":
        return PauliTerm(self.n, self.x, self.z, 0)

    def with_phase(self, phase: int) -> "PauliTerm":
        return PauliTerm(self.n, self.x, self.z, phase)

    def __neg__(self) -> "PauliTerm":
        return PauliTerm(self.n, self.x, self.z, self.phase + 2)

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliTerm({format_pauli(self)!r})"

    def tensor(self, other: "PauliTerm") -> "PauliTerm":
        """Place ``other`` on qubits after this term's qubits."""
        return PauliTerm(
            self.n + other.n,
            self.x | other.x << self.n,
            self.z | other.z << self.n,
            self.phase + other.phase,
        )

    def restrict(self, qubits: Sequence[int]) -> "PauliTerm":
        """Sub-term on the listed qubits (phase dropped)."""
        x = z = 0
        for i, q in enumerate(qubits):
            x |= (self.x >> q & 1) << i
            z |= (self.z >> q & 1) << i
        return PauliTerm(len(qubits), x, z)


def _check(a: PauliTerm, b: PauliTerm) -> None:
    if a.n != b.n:
        raise PauliError(f"size mismatch: {a.n} vs {b.n}")


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Exact group product ``a * b``."""
    _check(a, b)
    # Move to i^e X^x Z^z form, where Y contributes one factor of i.
    e = a.phase + _popcount(a.x & a.z) + b.phase + _popcount(b.x & b.z)
    e += 2 * _popcount(a.z & b.x)  # Z X = -X Z
    x, z = a.x ^ b.x, a.z ^ b.z
    return PauliTerm(a.n, x, z, e - _popcount(x & z))


def product(terms: Iterable[PauliTerm], n: int | None = None) -> PauliTerm:
    out = None
    for t in terms:
        out = t if out is None else multiply(out, t)
    if out is None:
        if n is None:
            raise PauliError("empty product needs n")
        return PauliTerm(n)
    return out


def commutes(a: PauliTerm, b: PauliTerm) -> bool:
    _check(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def weight(a: PauliTerm) -> int:
    return a.weight


def parse(text: str, sign: int | complex | None = None) -> PauliTerm:
    """Parse ``[+|-|i|-i|+i]`` followed by letters from IXYZ.

    An explicit ``sign`` (one of 1, -1, 1j, -1j) multiplies any prefix.
    """
    s = text.strip()
    phase = 0
    for pre, ph in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
        if s.startswith(pre) and len(s) > len(pre):
            phase = ph
            s = s[len(pre):]
            break
    if not s:
        raise PauliError(f"empty Pauli string: {text!r}")
    x = z = 0
    for q, ch in enumerate(s):
        if ch not in "IXYZ":
            raise PauliError(f"illegal character {ch!r} in {text!r}")
        idx = _LETTERS.index(ch)
        x |= (idx & 1) << q
        z |= (idx >> 1) << q
    if sign is not None:
        phase += {1: 0, 1j: 1, -1: 2, -1j: 3}[sign]
    return PauliTerm(len(s), x, z, phase)


def format_pauli(term: PauliTerm, plus: bool = False) -> str:
    body = "".join(term.letter(q) for q in range(term.n))
    pre = _PREFIX[term.phase]
    if plus and term.phase == 0:
        pre = "+"
    return pre + body


def symplectic_vector(term: PauliTerm) -> list[int]:
    """[x_0..x_{n-1}, z_0..z_{n-1}] as 0/1 ints."""
    return [term.x >> q & 1 for q in range(term.n)] + [term.z >> q & 1 for q in range(term.n)]


def from_symplectic(bits: Sequence[int], phase: int = 0) -> PauliTerm:
    n = len(bits) // 2
    x = sum(int(b) << q for q, b in enumerate(bits[:n]))
    z = sum(int(b) << q for q, b in enumerate(bits[n:]))
    return PauliTerm(n, x, z, phase)


def to_matrix(term: PauliTerm):
    """Dense 2^n x 2^n matrix (qubit 0 is the most significant tensor factor)."""
    import numpy as np

    mats = {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    out = np.array([[1.0 + 0j]])
    for q in range(term.n):
        out = np.kron(out, mats[term.letter(q)])
    return (1j ** term.phase) * out
