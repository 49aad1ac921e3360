"""Catalog of stabilizer and subsystem codes plus the planar surface lattice.

Generator strings for the fixed codes are stored exactly as printed (qubit 0
is the leftmost letter).  ``builtin(name, ...)`` is the entry point.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import densesim, gf2
from .pauli import PauliTerm, commutes, format_pauli, parse, product
from .tableau import Membership, StabilizerTableau, group_contains


class CodeError(ValueError):
    """Unknown code name, bad parameters, or a broken invariant."""


def _terms(strings: Sequence[str]) -> tuple[PauliTerm, ...]:
    return tuple(parse(s) for s in strings)


@dataclass(frozen=True)
class CodeSpec:
    """An [[n, k, d]] stabilizer code.

    ``error_types`` lists the Pauli letters the code is meant to handle; the
    repetition code is a bit-flip code, so it only lists ``"X"``.
    """

    name: str
    n: int
    k: int
    d: int
    stabilizers: tuple[PauliTerm, ...]
    logical_x: tuple[PauliTerm, ...]
    logical_z: tuple[PauliTerm, ...]
    css: bool = False
    degenerate: bool = False
    error_types: str = "XYZ"
    detection_only: bool = False
    gauge: tuple[PauliTerm, ...] = ()

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @property
    def is_subsystem(self) -> bool:
        return bool(self.gauge)

    def equivalence_generators(self) -> tuple[PauliTerm, ...]:
        """Operators that act trivially on the logical information."""
        return self.stabilizers + self.gauge

    def validate(self) -> None:
        """Raise CodeError if a structural invariant fails."""
        _validate_common(self)
        if not self.is_subsystem and len(self.stabilizers) != self.n - self.k:
            raise CodeError(f"{self.name}: {len(self.stabilizers)} generators for n-k={self.n - self.k}")
        if gf2.rank(_symp_matrix(self.stabilizers)) != len(self.stabilizers):
            raise CodeError(f"{self.name}: generators are dependent")

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "stabilizers": [format_pauli(s, plus=True) for s in self.stabilizers],
            "logical_x": [format_pauli(s, plus=True) for s in self.logical_x],
            "logical_z": [format_pauli(s, plus=True) for s in self.logical_z],
            "flags": {
                "css": self.css,
                "degenerate": self.degenerate,
                "detection_only": self.detection_only,
                "error_types": self.error_types,
            },
        }
        if self.gauge:
            out["gauge"] = [format_pauli(s, plus=True) for s in self.gauge]
        return out


@dataclass(frozen=True)
class SubsystemCodeSpec(CodeSpec):
    """Bacon-Shor style code on an n1 x n2 grid (qubit (i, j) -> i*n2 + j)."""

    n1: int = 0
    n2: int = 0
    witnesses: tuple[tuple[int, ...], ...] = ()

    def qubit(self, i: int, j: int) -> int:
        return i * self.n2 + j

    def validate(self) -> None:
        super().validate()
        for s, w in zip(self.stabilizers, self.witnesses):
            prod = product([self.gauge[g] for g in w], self.n)
            if prod != s:
                raise CodeError(f"{self.name}: witness product {prod} != {s}")
        if all(commutes(a, b) for a, b in itertools.combinations(self.gauge, 2)):
            raise CodeError(f"{self.name}: gauge group is Abelian")


def _symp_matrix(terms: Sequence[PauliTerm]) -> np.ndarray:
    n = terms[0].n
    q = np.arange(n)
    return np.array([np.concatenate([(t.x >> q) & 1, (t.z >> q) & 1]) for t in terms], dtype=np.uint8)


def _validate_common(code: CodeSpec) -> None:
    for a, b in itertools.combinations(code.stabilizers, 2):
        if not commutes(a, b):
            raise CodeError(f"{code.name}: {a} and {b} anticommute")
    equiv = code.equivalence_generators()
    for g in code.gauge:
        for s in code.stabilizers:
            if not commutes(g, s):
                raise CodeError(f"{code.name}: gauge {g} anticommutes with {s}")
    for i, (lx, lz) in enumerate(zip(code.logical_x, code.logical_z)):
        for op in (lx, lz):
            for g in equiv:
                if not commutes(op, g):
                    raise CodeError(f"{code.name}: logical {op} anticommutes with {g}")
            if group_contains(list(equiv), op) in (Membership.IN_GROUP_PLUS, Membership.IN_GROUP_MINUS):
                raise CodeError(f"{code.name}: logical {op} lies in the group")
        for j, lz2 in enumerate(code.logical_z):
            if commutes(lx, lz2) != (i != j):
                raise CodeError(f"{code.name}: logical pair ({i},{j}) has wrong commutation")


# -- fixed codes --------------------------------------------------------------

REP3_STABILIZERS = ("ZZI", "ZIZ")
SHOR9_STABILIZERS = (
    "ZZIIIIIII", "ZIZIIIIII", "IIIZZIIII", "IIIZIZIII",
    "IIIIIIZZI", "IIIIIIZIZ", "XXXXXXIII", "XXXIIIXXX",
)
STEANE7_STABILIZERS = ("IIIXXXX", "XIXIXIX", "IXXIIXX", "IIIZZZZ", "ZIZIZIZ", "IZZIIZZ")
FIVE_QUBIT_STABILIZERS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
DETECT4_STABILIZERS = ("ZZZZ", "XXXX")


def rep3() -> CodeSpec:
    return CodeSpec("rep3", 3, 1, 3, _terms(REP3_STABILIZERS), _terms(["XXX"]), _terms(["ZZZ"]),
                    css=True, error_types="X")


def shor9() -> CodeSpec:
    # |0>_L = (|000>+|111>)^3 is the +1 eigenstate of X^9, so Z_L = X^9.
    return CodeSpec("shor9", 9, 1, 3, _terms(SHOR9_STABILIZERS), _terms(["Z" * 9]), _terms(["X" * 9]),
                    css=True, degenerate=True)


def steane7() -> CodeSpec:
    return CodeSpec("steane7", 7, 1, 3, _terms(STEANE7_STABILIZERS), _terms(["X" * 7]), _terms(["Z" * 7]),
                    css=True)


def five_qubit() -> CodeSpec:
    return CodeSpec("five_qubit", 5, 1, 3, _terms(FIVE_QUBIT_STABILIZERS), _terms(["XXXXX"]), _terms(["ZZZZZ"]))


def detect4() -> CodeSpec:
    # logical basis |ab>: X_a = XIXI, X_b = XXII; Z_a = ZZII, Z_b = ZIZI
    return CodeSpec("detect4", 4, 2, 2, _terms(DETECT4_STABILIZERS), _terms(["XIXI", "XXII"]),
                    _terms(["ZZII", "ZIZI"]), css=True, detection_only=True)


def steane_fix_qubit(m1: int, m2: int, m3: int) -> int:
    """1-based qubit whose Z flips exactly the K1..K3 outcomes (m = 1 means -1)."""
    return 4 * m1 + m2 + 2 * m3


# -- Bacon-Shor -----------------------------------------------------------------

def bacon_shor(n1: int, n2: int) -> SubsystemCodeSpec:
    if n1 < 2 or n2 < 2:
        raise CodeError("bacon_shor needs n1, n2 >= 2")
    n = n1 * n2

    def q(i, j):
        return i * n2 + j

    gauge: list[PauliTerm] = []
    xpair = {}
    for i in range(n1 - 1):
        for j in range(n2):
            xpair[i, j] = len(gauge)
            gauge.append(PauliTerm.from_support(n, [q(i, j), q(i + 1, j)], "X"))
    zpair = {}
    for i in range(n1):
        for j in range(n2 - 1):
            zpair[i, j] = len(gauge)
            gauge.append(PauliTerm.from_support(n, [q(i, j), q(i, j + 1)], "Z"))
    stabs, wit = [], []
    for i in range(n1 - 1):
        stabs.append(PauliTerm.from_support(n, [q(r, j) for r in (i, i + 1) for j in range(n2)], "X"))
        wit.append(tuple(xpair[i, j] for j in range(n2)))
    for j in range(n2 - 1):
        stabs.append(PauliTerm.from_support(n, [q(i, c) for c in (j, j + 1) for i in range(n1)], "Z"))
        wit.append(tuple(zpair[i, j] for i in range(n1)))
    lz = PauliTerm.from_support(n, [q(i, 0) for i in range(n1)], "Z")
    lx = PauliTerm.from_support(n, [q(0, j) for j in range(n2)], "X")
    return SubsystemCodeSpec(
        f"bacon_shor({n1},{n2})", n, 1, min(n1, n2), tuple(stabs), (lx,), (lz,),
        css=True, degenerate=True, gauge=tuple(gauge), n1=n1, n2=n2, witnesses=tuple(wit),
    )


def stabilizer_gauge_decomposition(sub: SubsystemCodeSpec, s: int) -> list[PauliTerm]:
    """Gauge operators whose product is stabilizer ``s`` (phase +1)."""
    if not 0 <= s < len(sub.stabilizers):
        raise CodeError(f"stabilizer index {s} out of range")
    return [sub.gauge[g] for g in sub.witnesses[s]]


# -- parity (loss) encoding ----------------------------------------------------------

def parity_loss(N: int, q: int = 1) -> CodeSpec:
    """q blocks of the N-qubit parity code, joined by a repetition code.

    |0>_L^N is the even-weight superposition (|+>^N + |->^N)/sqrt2.
    """
    if N < 1 or q < 1:
        raise CodeError("parity_loss needs N >= 1 and q >= 1")
    return parity_loss_blocks([N] * q, name=f"parity_loss({N},{q})")


def parity_loss_blocks(sizes: Sequence[int], name: str | None = None) -> CodeSpec:
    sizes = list(sizes)
    if not sizes or min(sizes) < 1:
        raise CodeError("every block needs at least one qubit")
    n = sum(sizes)
    starts = np.cumsum([0] + sizes[:-1]).tolist()
    stabs: list[PauliTerm] = []
    for s, size in zip(starts, sizes):
        for i in range(size - 1):
            stabs.append(PauliTerm.from_support(n, [s + i, s + i + 1], "X"))
    block_z = [PauliTerm.from_support(n, range(s, s + size), "Z") for s, size in zip(starts, sizes)]
    for b in range(len(sizes) - 1):
        stabs.append(block_z[b] * block_z[b + 1])
    lx = PauliTerm.from_support(n, starts, "X")
    d = min(min(sizes), len(sizes))
    return CodeSpec(name or f"parity_loss_blocks({sizes})", n, 1, d, tuple(stabs), (lx,), (block_z[0],),
                    css=True, degenerate=d < min(sizes))


def parity_block_states(N: int) -> tuple[densesim.StateVector, densesim.StateVector]:
    """(|0>_L^N, |1>_L^N) built directly from |+>^N +- |->^N."""
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    p = m = np.array([1.0])
    for _ in range(N):
        p, m = np.kron(p, plus), np.kron(m, minus)
    return densesim.StateVector(p + m), densesim.StateVector(p - m)


class LossReduction(NamedTuple):
    state: densesim.StateVector
    flipped: bool
    code: CodeSpec


def parity_loss_reduce(state: densesim.StateVector, code_or_sizes, lost_qubit: int, measured_bit: int) -> LossReduction:
    """Remove a qubit whose Z-basis value is known.

    Outcome 0 just shrinks the block; outcome 1 also flips that block's
    logical value, which the returned flag records.
    """
    sizes = _block_sizes(code_or_sizes)
    n = sum(sizes)
    if state.n != n or not 0 <= lost_qubit < n:
        raise CodeError("state / qubit do not match the code")
    block = int(np.searchsorted(np.cumsum(sizes), lost_qubit, side="right"))
    if sizes[block] < 2:
        raise CodeError("block has a single qubit left and cannot be reduced")
    _, projected, _ = densesim.measure_qubit(state, lost_qubit, forced=measured_bit)
    reduced = densesim.remove_qubit(projected, lost_qubit, measured_bit)
    new_sizes = list(sizes)
    new_sizes[block] -= 1
    return LossReduction(reduced, bool(measured_bit), parity_loss_blocks(new_sizes))


def _block_sizes(code_or_sizes) -> list[int]:
    if isinstance(code_or_sizes, CodeSpec):
        # infer blocks from the intra-block XX stabilizers
        sizes, cur = [], 1
        pairs = {tuple(s.support) for s in code_or_sizes.stabilizers if s.x and not s.z and s.weight == 2}
        for qb in range(code_or_sizes.n - 1):
            if (qb, qb + 1) in pairs:
                cur += 1
            else:
                sizes.append(cur)
                cur = 1
        sizes.append(cur)
        return sizes
    if isinstance(code_or_sizes, int):
        return [code_or_sizes]
    return list(code_or_sizes)


# -- surface lattice --------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceLattice:
    """Planar N x N surface with one qubit per edge.

    Horizontal edges h(r, c) for r = 0..N, c = 0..N-1 and interior vertical
    edges v(r, c) for r = 0..N-1, c = 1..N-1 give 2N^2 qubits.  Plaquette
    checks A_p (Z) sit on the N^2 cells; vertex checks B_v (X) sit on the
    N^2-1 vertices with c = 1..N-1.  X chains end on the top and bottom
    edges, Z chains on the left and right.  Adding the row string Z_L as a
    generator fixes the unique clean-surface state.
    """

    N: int
    h_index: dict = field(repr=False, compare=False, default_factory=dict)
    v_index: dict = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        N = self.N
        if N < 2:
            raise CodeError("surface needs N >= 2")
        k = 0
        for r in range(N + 1):
            for c in range(N):
                self.h_index[r, c] = k
                k += 1
        for r in range(N):
            for c in range(1, N):
                self.v_index[r, c] = k
                k += 1

    @property
    def n(self) -> int:
        return 2 * self.N * self.N

    @property
    def name(self) -> str:
        return f"surface({self.N})"

    def h(self, r: int, c: int) -> int:
        return self.h_index[r, c]

    def v(self, r: int, c: int) -> int:
        return self.v_index[r, c]

    # -- geometry
    def cells(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.N) for c in range(self.N)]

    def vertices(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.N + 1) for c in range(1, self.N)]

    def cell_edges(self, r: int, c: int) -> list[int]:
        e = [self.h(r, c), self.h(r + 1, c)]
        if c >= 1:
            e.append(self.v(r, c))
        if c + 1 <= self.N - 1:
            e.append(self.v(r, c + 1))
        return sorted(e)

    def vertex_edges(self, r: int, c: int) -> list[int]:
        e = [self.h(r, c - 1), self.h(r, c)]
        if r >= 1:
            e.append(self.v(r - 1, c))
        if r <= self.N - 1:
            e.append(self.v(r, c))
        return sorted(e)

    @property
    def plaquettes(self) -> tuple[PauliTerm, ...]:
        return tuple(PauliTerm.from_support(self.n, self.cell_edges(*p), "Z") for p in self.cells())

    @property
    def vertex_checks(self) -> tuple[PauliTerm, ...]:
        return tuple(PauliTerm.from_support(self.n, self.vertex_edges(*v), "X") for v in self.vertices())

    @property
    def stabilizers(self) -> tuple[PauliTerm, ...]:
        return self.plaquettes + self.vertex_checks

    @property
    def logical_x(self) -> tuple[PauliTerm, ...]:
        return (PauliTerm.from_support(self.n, [self.h(r, 0) for r in range(self.N + 1)], "X"),)

    @property
    def logical_z(self) -> tuple[PauliTerm, ...]:
        return (PauliTerm.from_support(self.n, [self.h(0, c) for c in range(self.N)], "Z"),)

    @property
    def gauge(self) -> tuple:
        return ()

    k = 1
    css = True
    degenerate = True
    error_types = "XYZ"
    detection_only = False
    is_subsystem = False

    @property
    def d(self) -> int:
        return self.N

    @property
    def t(self) -> int:
        return (self.N - 1) // 2

    def equivalence_generators(self) -> tuple[PauliTerm, ...]:
        return self.stabilizers

    def clean_surface_generators(self) -> tuple[PauliTerm, ...]:
        """2N^2 independent generators with a unique joint +1 eigenstate."""
        return self.stabilizers + self.logical_z

    def validate(self) -> None:
        for a in self.plaquettes:
            for b in self.vertex_checks:
                if len(set(a.support) & set(b.support)) not in (0, 2):
                    raise CodeError("plaquette and vertex share an odd number of qubits")
        gens = self.clean_surface_generators()
        if len(gens) != self.n or gf2.rank(_symp_matrix(gens)) != self.n:
            raise CodeError("clean surface generators are not a full independent set")
        _validate_common(self)

    def to_json(self) -> dict:
        return CodeSpec.to_json(self)  # type: ignore[arg-type]

    # -- decoding graph: sector "X" = X errors seen by plaquettes, "Z" = dual
    def sector_checks(self, sector: str) -> list[tuple[int, int]]:
        return self.cells() if sector == "X" else self.vertices()

    def defects(self, error: PauliTerm, sector: str = "X") -> list[tuple[int, int]]:
        """Check coordinates whose eigenvalue ``error`` flips."""
        mask = error.x if sector == "X" else error.z
        edges = self.cell_edges if sector == "X" else self.vertex_edges
        return [p for p in self.sector_checks(sector)
                if sum(mask >> e & 1 for e in edges(*p)) % 2]

    def distance(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        return abs(a[0] - b[0]) + abs(a[1] - b[1])

    def boundary_distance(self, a: tuple[int, int], sector: str = "X") -> int:
        r, c = a
        return min(r + 1, self.N - r) if sector == "X" else min(c, self.N - c)

    def path(self, a: tuple[int, int], b: tuple[int, int], sector: str = "X") -> list[int]:
        """Edges on a shortest path between two checks (rows first, then columns)."""
        (r1, c1), (r2, c2) = a, b
        out = []
        step = 1 if r2 > r1 else -1
        for r in range(r1, r2, step):
            out.append(self.h(max(r, r + step), c1) if sector == "X" else self.v(min(r, r + step), c1))
        step = 1 if c2 > c1 else -1
        for c in range(c1, c2, step):
            out.append(self.v(r2, max(c, c + step)) if sector == "X" else self.h(r2, min(c, c + step)))
        return out

    def boundary_path(self, a: tuple[int, int], sector: str = "X") -> list[int]:
        """Edges from a check to its nearest matchable boundary."""
        r, c = a
        if sector == "X":
            if r + 1 <= self.N - r:
                return [self.h(i, c) for i in range(r, -1, -1)]
            return [self.h(i, c) for i in range(r + 1, self.N + 1)]
        if c <= self.N - c:
            return [self.h(r, i) for i in range(c - 1, -1, -1)]
        return [self.h(r, i) for i in range(c, self.N)]

    def boundary_chain(self, index: int, sector: str = "X") -> PauliTerm:
        """A boundary-to-boundary chain: X down column ``index`` or Z along row ``index``."""
        if sector == "X":
            return PauliTerm.from_support(self.n, [self.h(r, index) for r in range(self.N + 1)], "X")
        return PauliTerm.from_support(self.n, [self.h(index, c) for c in range(self.N)], "Z")


def surface(N: int) -> SurfaceLattice:
    return SurfaceLattice(N)


# -- catalog -----------------------------------------------------------------------

FAMILIES = ("rep3", "shor9", "steane7", "five_qubit", "detect4", "bacon_shor", "surface", "parity_loss")
_FIXED = {"rep3": rep3, "shor9": shor9, "steane7": steane7, "five_qubit": five_qubit, "detect4": detect4}


def builtin(name: str, *params: int):
    """Look up a code by family name; parameterized families take ints.

    ``builtin("bacon_shor(3,3)")`` and ``builtin("bacon_shor", 3, 3)`` are equivalent.
    """
    name = name.strip()
    if "(" in name:
        if params:
            raise CodeError("give parameters either inline or as arguments")
        base, _, rest = name.partition("(")
        try:
            params = tuple(int(p) for p in rest.rstrip(")").split(",") if p.strip())
        except ValueError as exc:
            raise CodeError(f"bad parameters in {name!r}") from exc
        name = base.strip()
    if name in _FIXED:
        if params:
            raise CodeError(f"{name} takes no parameters")
        return _FIXED[name]()
    if name == "bacon_shor":
        if len(params) != 2:
            raise CodeError("bacon_shor needs (n1, n2)")
        return bacon_shor(*params)
    if name == "surface":
        if len(params) != 1:
            raise CodeError("surface needs (N)")
        return surface(*params)
    if name == "parity_loss":
        if len(params) not in (1, 2):
            raise CodeError("parity_loss needs (N[, q])")
        N, q = params[0], params[1] if len(params) > 1 else 1
        if N < 2:
            raise CodeError("parity_loss needs N >= 2")
        return parity_loss(N, q)
    raise CodeError(f"unknown code {name!r}; known families: {', '.join(FAMILIES)}")


def catalog_json(code) -> str:
    return json.dumps(code.to_json(), indent=2)


# -- encoding ---------------------------------------------------------------------

def frame_correction(gens: Sequence[PauliTerm], bits: Sequence[int]) -> PauliTerm:
    """A Pauli anticommuting with exactly the generators whose bit is 1.

    Single-qubit candidates are tried first (this reproduces the one-qubit Z
    fix used for Steane preparation); otherwise a GF(2) solve is used.
    """
    n = gens[0].n
    want = [int(b) & 1 for b in bits]
    if not any(want):
        return PauliTerm(n)
    for qb in range(n):
        for letter in "ZXY":
            e = PauliTerm.single(n, qb, letter)
            if all((not commutes(e, g)) == bool(w) for g, w in zip(gens, want)):
                return e
    m = _symp_matrix(gens)
    a = np.hstack([m[:, n:], m[:, :n]])  # symp(e, g) = e_x.g_z + e_z.g_x
    sol = gf2.solve_right(a, np.array(want, dtype=np.uint8))
    if sol is None:
        raise CodeError("no Pauli frame correction exists (dependent generators)")
    from .pauli import from_symplectic

    return from_symplectic(sol.tolist())


def encoding_generators(code) -> tuple[PauliTerm, ...]:
    """Operators whose +1 eigenstate is the encoded |0...0>."""
    return tuple(code.stabilizers) + tuple(code.logical_z)


def encode_zero(code, backend: str = "tableau", rng: np.random.Generator | None = None):
    """Prepare logical |0> by measuring every generator on |0...0> and fixing signs.

    Outcomes of -1 are repaired with a Pauli-frame correction.  Returns a
    StabilizerTableau or a StateVector depending on ``backend``.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    gens = encoding_generators(code)
    bits = []
    if backend == "tableau":
        state = StabilizerTableau.computational_state(code.n)
        for g in gens:
            out, _ = state.measure_pauli(g, rng)
            bits.append(0 if out == 1 else 1)
        state.apply_pauli(frame_correction(gens, bits))
        return state
    if backend == "densesim":
        st = densesim.StateVector.zeros(code.n)
        for g in gens:
            out, st, _ = densesim.measure_pauli(st, g, rng)
            bits.append(0 if out == 1 else 1)
        return densesim.apply_pauli(st, frame_correction(gens, bits)).canonical_phase()
    raise CodeError(f"unknown backend {backend!r}")


def steane_prepare_zero(rng: np.random.Generator | None = None, forced: Sequence[int] | None = None):
    """Dense Steane |0>_L by projecting with K1..K3 and one classically chosen Z."""
    rng = rng if rng is not None else np.random.default_rng(0)
    code = steane7()
    st = densesim.StateVector.zeros(7)
    ms = []
    for i in range(3):
        f = None if forced is None else 1 - 2 * forced[i]
        out, st, _ = densesim.measure_pauli(st, code.stabilizers[i], rng, f)
        ms.append(0 if out == 1 else 1)
    qb = steane_fix_qubit(*ms)
    if qb:
        st = densesim.apply_gate(st, "Z", qb - 1)
    return st.canonical_phase(), tuple(ms)


# -- distance check -----------------------------------------------------------------

def low_weight_logicals(code, max_weight: int, letters: str | None = None) -> list[PauliTerm]:
    """Paulis of weight <= max_weight that commute with every stabilizer yet act
    on the logical information (so are undetectable logical errors)."""
    letters = letters or code.error_types
    logicals = tuple(code.logical_x) + tuple(code.logical_z)
    found = []
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(code.n), w):
            for ls in itertools.product(letters, repeat=w):
                e = product([PauliTerm.single(code.n, q, l) for q, l in zip(support, ls)])
                if all(commutes(e, s) for s in code.stabilizers) and any(not commutes(e, l) for l in logicals):
                    found.append(e)
    return found
