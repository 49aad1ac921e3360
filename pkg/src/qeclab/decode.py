"""Syndrome extraction and decoding.

Small codes use minimum-weight lookup tables, the four-qubit code is
detection-only, Bacon-Shor syndromes are assembled from two-qubit gauge
measurements, and the surface code uses minimum-weight perfect matching.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Sequence

import networkx as nx
import numpy as np

from . import densesim, gf2
from .codes import CodeSpec, SubsystemCodeSpec, SurfaceLattice
from .pauli import PauliTerm, commutes, format_pauli, product
from .tableau import StabilizerTableau


class DecodeError(ValueError):
    """Contract violation: bad syndrome, unsupported code or backend."""


class ResidualClass(str, Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"


class Detection(str, Enum):
    CLEAN = "clean"
    DETECTED = "detected"


@dataclass(frozen=True)
class SyndromeRecord:
    bits: tuple[int, ...]
    rounds: int | None = None

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    @property
    def index(self) -> int:
        return syndrome_index(self.bits)

    @property
    def trivial(self) -> bool:
        return not any(self.bits)


def syndrome_index(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def syndrome_of(code, error: PauliTerm) -> SyndromeRecord:
    """Ideal syndrome: bit i is 1 iff ``error`` anticommutes with generator i."""
    return SyndromeRecord(tuple(0 if commutes(error, s) else 1 for s in code.stabilizers))


def measure_syndrome(state, code, rng: np.random.Generator | None = None):
    """Measure every stabilizer in printed order; returns (record, post-state).

    Tableau states are updated in place; dense states are returned collapsed.
    """
    if state.n != code.n:
        raise DecodeError(f"state has {state.n} qubits, code {code.name} has {code.n}")
    bits = []
    if isinstance(state, StabilizerTableau):
        for s in code.stabilizers:
            out, _ = state.measure_pauli(s, rng)
            bits.append(0 if out == 1 else 1)
        return SyndromeRecord(tuple(bits)), state
    if isinstance(state, densesim.StateVector):
        for s in code.stabilizers:
            out, state, _ = densesim.measure_pauli(state, s, rng)
            bits.append(0 if out == 1 else 1)
        return SyndromeRecord(tuple(bits)), state
    raise DecodeError(f"unsupported state type {type(state).__name__}")


def extract_syndrome(state, code, rng: np.random.Generator | None = None) -> SyndromeRecord:
    return measure_syndrome(state, code, rng)[0]


# -- lookup tables ------------------------------------------------------------------

@dataclass
class SyndromeTable:
    code_name: str
    t: int
    entries: dict = field(default_factory=dict)  # bits tuple -> PauliTerm
    saturated: bool = False
    complete: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def correction(self, bits: Sequence[int]) -> PauliTerm:
        key = tuple(int(b) for b in bits)
        if key not in self.entries:
            raise DecodeError(f"syndrome {''.join(map(str, key))} is not in the {self.code_name} table")
        return self.entries[key]

    def rows(self) -> list[tuple[str, str]]:
        return [("".join(map(str, k)), format_pauli(v)) for k, v in sorted(self.entries.items())]


def _errors_of_weight(n: int, w: int, letters: str):
    """Weight-w Paulis ordered by support then letters (X < Y < Z)."""
    letters = "".join(sorted(letters))
    for support in itertools.combinations(range(n), w):
        for ls in itertools.product(letters, repeat=w):
            yield product([PauliTerm.single(n, q, l) for q, l in zip(support, ls)], n)


def _equivalent(code, a: PauliTerm, b: PauliTerm) -> bool:
    """Same syndrome assumed: equivalent iff a*b acts trivially on the logicals."""
    r = a * b
    return all(commutes(r, l) for l in tuple(code.logical_x) + tuple(code.logical_z))


def build_lookup(code, max_weight: int | None = None, complete: bool = False) -> SyndromeTable:
    """Minimum-weight syndrome table over the code's error letters.

    All errors up to weight t are enumerated.  Equal-weight degenerate
    collisions keep the first representative; inequivalent collisions mark
    the table saturated.  ``complete=True`` keeps enumerating heavier errors
    until every reachable syndrome has an entry.
    """
    if code.detection_only or code.d < 3:
        raise DecodeError(f"{code.name} has distance {code.d}; it can detect but not correct")
    if code.n > 12:
        raise DecodeError("lookup tables are limited to n <= 12")
    t = code.t
    limit = t if max_weight is None else max_weight
    table = SyndromeTable(code.name, t)
    singles = [[0 if commutes(PauliTerm.single(code.n, q, l), s) else 1 for s in code.stabilizers]
               for q in range(code.n) for l in code.error_types]
    reachable = 1 << gf2.rank(np.array(singles, dtype=np.uint8))
    w = 0
    while True:
        for e in _errors_of_weight(code.n, w, code.error_types) if w else [PauliTerm(code.n)]:
            key = syndrome_of(code, e).bits
            old = table.entries.get(key)
            if old is None:
                table.entries[key] = e
            elif w <= t and not _equivalent(code, old, e):
                table.saturated = True
        w += 1
        if w > code.n:
            break
        if w > limit and (not complete or len(table.entries) >= reachable):
            break
    table.complete = len(table.entries) >= reachable
    return table


def decode_lookup(table: SyndromeTable, syndrome: SyndromeRecord | Sequence[int]) -> PauliTerm:
    bits = syndrome.bits if isinstance(syndrome, SyndromeRecord) else syndrome
    return table.correction(bits)


def detect_only(code, syndrome: SyndromeRecord | Sequence[int]) -> Detection:
    """Post-selection rule: any nonzero bit means the block must be rerun."""
    bits = syndrome.bits if isinstance(syndrome, SyndromeRecord) else syndrome
    if len(bits) != len(code.stabilizers):
        raise DecodeError("syndrome length does not match the code")
    return Detection.DETECTED if any(bits) else Detection.CLEAN


# -- residual classification --------------------------------------------------------

def classify_residual(code, residual: PauliTerm) -> ResidualClass:
    """Success iff error*correction acts trivially on the encoded information.

    The residual must commute with every stabilizer; otherwise the syndrome was
    not cleared and a DecodeError is raised.  For subsystem codes anything in
    the group generated by stabilizers and gauge operators counts as success.
    """
    if residual.n != code.n:
        raise DecodeError("residual size does not match the code")
    for s in code.stabilizers:
        if not commutes(residual, s):
            raise DecodeError(f"residual {residual} has a nonzero syndrome (anticommutes with {s})")
    for l in tuple(code.logical_x) + tuple(code.logical_z):
        if not commutes(residual, l):
            return ResidualClass.LOGICAL_FAILURE
    return ResidualClass.SUCCESS


def correct_error(code, table: SyndromeTable, error: PauliTerm):
    """Ideal extract -> lookup -> correct pipeline; returns (syndrome, correction, class)."""
    syn = syndrome_of(code, error)
    corr = table.correction(syn.bits)
    return syn, corr, classify_residual(code, error * corr)


# -- Bacon-Shor gauge syndromes ----------------------------------------------------------

def baconshor_syndrome(state, sub: SubsystemCodeSpec, rng: np.random.Generator | None = None,
                       gauge_order: Sequence[int] | None = None) -> SyndromeRecord:
    """Stabilizer parities assembled from two-qubit gauge measurements.

    X-type gauge operators are measured as one round and Z-type as a second
    round; ``gauge_order`` permutes the measurement order inside each round.
    Each stabilizer bit is the XOR of its witness gauge outcomes.
    """
    if state.n != sub.n:
        raise DecodeError("state does not match the subsystem code")
    needed = sorted({g for w in sub.witnesses for g in w})
    order = list(gauge_order) if gauge_order is not None else needed
    if sorted(set(order) & set(needed)) != needed:
        raise DecodeError("gauge_order must include every witness gauge operator")
    x_round = [g for g in order if g in needed and sub.gauge[g].x]
    z_round = [g for g in order if g in needed and not sub.gauge[g].x]
    results: dict[int, int] = {}
    for g in x_round + z_round:
        op = sub.gauge[g]
        if isinstance(state, StabilizerTableau):
            out, _ = state.measure_pauli(op, rng)
        elif isinstance(state, densesim.StateVector):
            out, state, _ = densesim.measure_pauli(state, op, rng)
        else:
            raise DecodeError(f"unsupported state type {type(state).__name__}")
        results[g] = 0 if out == 1 else 1
    bits = tuple(int(sum(results[g] for g in w) % 2) for w in sub.witnesses)
    return SyndromeRecord(bits)


# -- minimum-weight perfect matching ---------------------------------------------------

BOUNDARY = "boundary"


@dataclass(frozen=True)
class MatchResult:
    defects: tuple[tuple[int, int], ...]
    pairs: tuple[tuple, ...]  # (a, b) or (a, BOUNDARY)
    weight: int
    correction: PauliTerm


def mwpm_decode(lattice: SurfaceLattice, defects: Sequence[tuple[int, int]], sector: str = "X") -> MatchResult:
    """Exact minimum-weight matching of defects, each allowed to pair with a boundary.

    Every defect gets a private boundary node; boundary nodes are joined to
    each other at zero cost so any subset of defects may go to the boundary.
    Defects are sorted first, which makes ties resolve deterministically.
    """
    if sector not in ("X", "Z"):
        raise DecodeError("sector must be 'X' (plaquette defects) or 'Z' (vertex defects)")
    ds = tuple(sorted(tuple(d) for d in defects))
    pairs, weight = _match(lattice.N, sector, ds)
    edges: set[int] = set()
    for a, b in pairs:
        path = lattice.boundary_path(a, sector) if b == BOUNDARY else lattice.path(a, b, sector)
        edges ^= set(path)
    letter = "X" if sector == "X" else "Z"
    corr = PauliTerm.from_support(lattice.n, sorted(edges), letter)
    return MatchResult(ds, pairs, weight, corr)


@lru_cache(maxsize=65536)
def _match(N: int, sector: str, ds: tuple) -> tuple[tuple, int]:
    if not ds:
        return (), 0
    lat = _lattice(N)
    g = nx.Graph()
    k = len(ds)
    for i in range(k):
        g.add_node(("d", i))
    for i in range(k):
        g.add_node(("b", i))
    for i in range(k):
        for j in range(i + 1, k):
            g.add_edge(("d", i), ("d", j), weight=lat.distance(ds[i], ds[j]))
        g.add_edge(("d", i), ("b", i), weight=lat.boundary_distance(ds[i], sector))
        for j in range(i + 1, k):
            g.add_edge(("b", i), ("b", j), weight=0)
    matching = nx.min_weight_matching(g)
    pairs, weight = [], 0
    for u, v in matching:
        if u[0] == "b" and v[0] == "b":
            continue
        if u[0] == "b":
            u, v = v, u
        if v[0] == "b":
            pairs.append((ds[u[1]], BOUNDARY))
            weight += lat.boundary_distance(ds[u[1]], sector)
        else:
            a, b = sorted((ds[u[1]], ds[v[1]]))
            pairs.append((a, b))
            weight += lat.distance(a, b)
    pairs.sort(key=lambda p: (p[0], (1,) if p[1] == BOUNDARY else (0,) + tuple(p[1])))
    return tuple(pairs), weight


@lru_cache(maxsize=32)
def _lattice(N: int) -> SurfaceLattice:
    return SurfaceLattice(N)


def surface_correct(lattice: SurfaceLattice, error: PauliTerm, sector: str = "X"):
    """Defects -> matching -> correction -> residual class for one sector."""
    defects = lattice.defects(error, sector)
    match = mwpm_decode(lattice, defects, sector)
    residual = error * match.correction
    keep = residual.x if sector == "X" else residual.z
    part = PauliTerm(lattice.n, keep, 0) if sector == "X" else PauliTerm(lattice.n, 0, keep)
    return match, classify_residual(lattice, part)


# -- traces -----------------------------------------------------------------------------

def trace_line(trial: int, syndrome: SyndromeRecord | Sequence[int], correction: PauliTerm, outcome) -> str:
    bits = syndrome.bits if isinstance(syndrome, SyndromeRecord) else tuple(syndrome)
    return json.dumps({
        "trial": trial,
        "syndrome_bits": "".join(str(int(b)) for b in bits),
        "correction": format_pauli(correction),
        "outcome": outcome.value if isinstance(outcome, Enum) else str(outcome),
    })
