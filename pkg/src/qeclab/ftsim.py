"""Fault-tolerance analysis.

Single Pauli faults are pushed through Clifford circuits, the per-block
output weight is checked against the distance-3 criterion, transversal gates
are certified against a code's stabilizer group, and a Shor-style cat-state
preparation of the Steane |0>_L is simulated on a 12-qubit tableau.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import codes as _codes
from .noise import PauliChannel
from .pauli import PauliError, PauliTerm, commutes, format_pauli, parse, product
from .tableau import (CLIFFORD_GATES, Membership, StabilizerTableau, TableauError, canonical_gate,
                      conjugate_pauli, group_contains)


class FTError(ValueError):
    """Bad circuit text, bad fault location or an unsupported gate."""


class ProtocolAborted(RuntimeError):
    """Raised when cat-state verification keeps failing."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


# -- circuits -------------------------------------------------------------------

@dataclass(frozen=True)
class Location:
    kind: str                      # "prep" | "gate" | "measure" | "ctrl"
    targets: tuple[int, ...]
    name: str = ""                 # gate name for gate/ctrl
    basis: str = "Z"               # measurement basis
    control: int | None = None     # measurement index for ctrl

    def __str__(self) -> str:
        qs = " ".join(map(str, self.targets))
        if self.kind == "prep":
            return f"PREP {qs}"
        if self.kind == "measure":
            return f"MEASURE {qs} {self.basis}"
        if self.kind == "ctrl":
            return f"CTRL {self.control}->GATE {self.name} {qs}"
        return f"GATE {self.name} {qs}"


@dataclass(frozen=True)
class Circuit:
    """Ordered locations on ``n`` qubits plus a qubit -> block label map."""

    n: int
    locations: tuple[Location, ...] = ()
    blocks: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        n_meas = 0
        for loc in self.locations:
            if any(not 0 <= q < self.n for q in loc.targets):
                raise FTError(f"target out of range in '{loc}'")
            if loc.kind == "ctrl" and not 0 <= (loc.control or 0) < n_meas:
                raise FTError(f"'{loc}' references a measurement that has not happened yet")
            if loc.kind == "measure":
                n_meas += 1
        seen: set[int] = set()
        for label, qs in self.blocks:
            if seen & set(qs):
                raise FTError(f"qubit assigned to two blocks ({label})")
            seen |= set(qs)

    @property
    def measurement_count(self) -> int:
        return sum(loc.kind == "measure" for loc in self.locations)

    def block_of(self) -> dict[int, str]:
        return {q: label for label, qs in self.blocks for q in qs}

    def to_text(self) -> str:
        lines = [f"QUBITS {self.n}"]
        lines += [f"BLOCK {label} " + " ".join(map(str, qs)) for label, qs in self.blocks]
        lines += [str(loc) for loc in self.locations]
        return "\n".join(lines) + "\n"


_CTRL = re.compile(r"^CTRL\s+(\d+)\s*(?:->|→)\s*GATE\s+(\S+)\s+(.+)$", re.IGNORECASE)


def parse_circuit(text: str) -> Circuit:
    """Parse the line-based circuit format.

    Lines: ``QUBITS n``, ``BLOCK label q...``, ``PREP q``, ``GATE name q...``,
    ``MEASURE q [X|Z]`` and ``CTRL m->GATE name q...`` where ``m`` counts
    measurements from 0.  ``#`` starts a comment.
    """
    locs: list[Location] = []
    blocks: list[tuple[str, tuple[int, ...]]] = []
    n_decl = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            m = _CTRL.match(line)
            if m:
                locs.append(Location("ctrl", _ints(m.group(3).split()), m.group(2).upper(), control=int(m.group(1))))
                continue
            word, *rest = line.split()
            word = word.upper()
            if word == "QUBITS":
                n_decl = int(rest[0])
            elif word == "BLOCK":
                blocks.append((rest[0], _ints(rest[1:])))
            elif word == "PREP":
                locs.extend(Location("prep", (q,)) for q in _ints(rest))
            elif word == "GATE":
                locs.append(Location("gate", _ints(rest[1:]), rest[0].upper()))
            elif word == "MEASURE":
                basis = "Z"
                if rest and rest[-1].upper() in ("X", "Y", "Z"):
                    basis = rest.pop().upper()
                locs.extend(Location("measure", (q,), basis=basis) for q in _ints(rest))
            else:
                raise FTError(f"unknown keyword {word}")
        except (IndexError, ValueError) as exc:
            raise FTError(f"line {lineno}: cannot parse '{raw.strip()}' ({exc})") from None
    used = [q for loc in locs for q in loc.targets] + [q for _, qs in blocks for q in qs]
    n = n_decl if n_decl is not None else (max(used) + 1 if used else 0)
    return Circuit(n, tuple(locs), tuple(blocks))


def _ints(tokens: Sequence[str]) -> tuple[int, ...]:
    if not tokens:
        raise ValueError("missing qubit index")
    return tuple(int(t) for t in tokens)


def cnot_circuit(pairs: Iterable[tuple[int, int]], blocks: dict[str, Sequence[int]], n: int | None = None) -> Circuit:
    """Circuit made only of CNOT(control, target) gates."""
    locs = tuple(Location("gate", (a, b), "CNOT") for a, b in pairs)
    nn = n if n is not None else 1 + max([q for l in locs for q in l.targets] + [q for qs in blocks.values() for q in qs])
    return Circuit(nn, locs, tuple((k, tuple(v)) for k, v in blocks.items()))


def fanout_copy_circuit() -> Circuit:
    """|abc>|000> -> |abc>|aaa> style copy where qubit 0 drives all three targets."""
    return cnot_circuit([(0, 3), (0, 4), (0, 5)], {"A": (0, 1, 2), "B": (3, 4, 5)})


def pairwise_copy_circuit() -> Circuit:
    """Same transformation on |111>|000> using one CNOT per qubit pair."""
    return cnot_circuit([(0, 3), (1, 4), (2, 5)], {"A": (0, 1, 2), "B": (3, 4, 5)})


# -- propagation ------------------------------------------------------------------

@dataclass(frozen=True)
class FaultEvent:
    """One Pauli fault applied right after ``location`` (-1 means at the input)."""

    location: int
    pauli: PauliTerm

    def __post_init__(self):
        if self.pauli.weight != 1:
            raise FTError(f"faults are single-qubit, got weight {self.pauli.weight}")

    @classmethod
    def single(cls, n: int, location: int, qubit: int, letter: str) -> "FaultEvent":
        return cls(location, PauliTerm.single(n, qubit, letter))

    def __str__(self) -> str:
        q = self.pauli.support[0]
        return f"{self.pauli.letter(q)}{q}@{self.location}"


@dataclass(frozen=True)
class Propagation:
    residual: PauliTerm
    flipped: tuple[int, ...]  # indices of measurements whose outcome flips


def propagate_detailed(circuit: Circuit, fault: FaultEvent | PauliTerm, start: int = -1) -> Propagation:
    """Push a Pauli through every location after ``start``.

    Measurements report whether the error flips their outcome and then drop
    the error component on the measured qubit; classically controlled Pauli
    gates toggle with their flipped measurement (Pauli-frame bookkeeping).
    """
    if isinstance(fault, FaultEvent):
        start, err = fault.location, fault.pauli
    else:
        err = fault
    if err.n != circuit.n:
        raise FTError(f"fault on {err.n} qubits, circuit has {circuit.n}")
    if not -1 <= start < len(circuit.locations):
        raise FTError(f"fault location {start} outside [-1, {len(circuit.locations) - 1}]")
    err = err.with_phase(0)
    flipped: list[int] = []
    meas_index = [i for i, loc in enumerate(circuit.locations) if loc.kind == "measure"]
    meas_of = {loc_i: k for k, loc_i in enumerate(meas_index)}
    flipped_set: set[int] = set()
    for i in range(start + 1, len(circuit.locations)):
        loc = circuit.locations[i]
        if loc.kind == "prep":
            err = _drop(err, loc.targets[0])
        elif loc.kind == "gate":
            err = _conjugate(err, loc.name, loc.targets)
        elif loc.kind == "measure":
            q = loc.targets[0]
            if not commutes(err, PauliTerm.single(err.n, q, loc.basis)):
                flipped.append(meas_of[i])
                flipped_set.add(meas_of[i])
            err = _drop(err, q)
        elif loc.kind == "ctrl":
            if loc.name not in ("I", "X", "Y", "Z"):
                raise FTError(f"classically controlled {loc.name} is not a Pauli; unsupported")
            if loc.control in flipped_set and loc.name != "I":
                err = (err * PauliTerm.from_support(err.n, loc.targets, loc.name)).with_phase(0)
    return Propagation(err, tuple(flipped))


def propagate(circuit: Circuit, fault: FaultEvent) -> PauliTerm:
    """Residual Pauli on the outputs caused by one fault (signs dropped)."""
    return propagate_detailed(circuit, fault).residual


def _drop(p: PauliTerm, q: int) -> PauliTerm:
    mask = ~(1 << q)
    return PauliTerm(p.n, p.x & mask, p.z & mask, 0)


def _conjugate(p: PauliTerm, name: str, targets: Sequence[int]) -> PauliTerm:
    try:
        g = canonical_gate(name)
    except TableauError:
        raise FTError(f"gate {name} is not Clifford; unsupported") from None
    return conjugate_pauli(p, g, targets).with_phase(0)


# -- fault-tolerance checker -----------------------------------------------------------

@dataclass(frozen=True)
class FaultOutcome:
    fault: FaultEvent
    residual: PauliTerm
    block_weights: dict
    flipped: tuple[int, ...] = ()

    @property
    def max_block_weight(self) -> int:
        return max(self.block_weights.values(), default=0)

    def to_json(self) -> dict:
        return {"fault": str(self.fault), "residual": format_pauli(self.residual),
                "residual_weight": self.residual.weight, "block_weights": dict(self.block_weights),
                "flipped_measurements": list(self.flipped)}


@dataclass(frozen=True)
class FTReport:
    passed: bool
    faults_checked: int
    failures: int
    worst: FaultOutcome | None

    def to_json(self) -> dict:
        return {"pass": self.passed, "faults_checked": self.faults_checked, "failures": self.failures,
                "worst": self.worst.to_json() if self.worst else None}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def fault_locations(circuit: Circuit) -> list[FaultEvent]:
    """Every single fault: X/Y/Z on each qubit at the input and after each location on its targets."""
    out = [FaultEvent.single(circuit.n, -1, q, a) for q in range(circuit.n) for a in "XYZ"]
    for i, loc in enumerate(circuit.locations):
        out += [FaultEvent.single(circuit.n, i, q, a) for q in loc.targets for a in "XYZ"]
    return out


def block_weights(circuit: Circuit, residual: PauliTerm) -> dict[str, int]:
    """Residual weight inside each block; qubits outside every block are not counted."""
    return {label: residual.restrict(qs).weight for label, qs in circuit.blocks}


def check_fault_tolerance(circuit: Circuit) -> FTReport:
    """Pass iff no single fault leaves more than one error in any block."""
    worst = None
    failures = 0
    faults = fault_locations(circuit)
    for f in faults:
        prop = propagate_detailed(circuit, f)
        res = FaultOutcome(f, prop.residual, block_weights(circuit, prop.residual), prop.flipped)
        if res.max_block_weight > 1:
            failures += 1
        if worst is None or (res.max_block_weight, res.residual.weight) > (worst.max_block_weight, worst.residual.weight):
            worst = res
    return FTReport(failures == 0, len(faults), failures, worst)


# -- transversal gates -------------------------------------------------------------------

@dataclass(frozen=True)
class TransversalResult:
    code: str
    gate: str
    valid: bool
    images: tuple[tuple[PauliTerm, PauliTerm], ...]      # (generator, image)
    witness: tuple[int, PauliTerm, Membership] | None     # first escaping generator
    logical_action: dict | None                           # logical Pauli -> image, as k-qubit strings
    logical_gate: str | None

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            i, img, mem = self.witness
            w = {"generator": format_pauli(self.images[i][0]), "image": format_pauli(img, plus=True),
                 "membership": mem.value}
        return {"code": self.code, "gate": self.gate, "valid": self.valid, "witness": w,
                "logical_action": self.logical_action, "logical_gate": self.logical_gate}


TRANSVERSAL_GATES = ("X", "Y", "Z", "H", "P", "PDG", "CNOT")


def _bitwise(p: PauliTerm, gate: str, n_block: int) -> PauliTerm:
    """Apply ``gate`` on every qubit (CNOT: qubit j of block 0 controls qubit j of block 1)."""
    out = p
    if gate == "CNOT":
        for j in range(n_block):
            out = conjugate_pauli(out, "CNOT", [j, n_block + j])
    else:
        for j in range(p.n):
            out = conjugate_pauli(out, gate, j)
    return out


def _two_block(code) -> tuple[list[PauliTerm], list[PauliTerm], list[PauliTerm]]:
    n = code.n
    eye = PauliTerm.identity(n)
    stabs = [s.tensor(eye) for s in code.stabilizers] + [eye.tensor(s) for s in code.stabilizers]
    lx = [l.tensor(eye) for l in code.logical_x] + [eye.tensor(l) for l in code.logical_x]
    lz = [l.tensor(eye) for l in code.logical_z] + [eye.tensor(l) for l in code.logical_z]
    return stabs, lx, lz


def transversal_validity(code, gate: str) -> TransversalResult:
    """Certify a bitwise gate on ``code``.

    Every generator image is tested for membership (with sign) in the
    stabilizer group; for CNOT the two-block group is used.  When valid, the
    images of the logical Paulis are written in the logical basis and matched
    to a named Clifford when possible.
    """
    try:
        g = canonical_gate(gate)
    except TableauError:
        g = gate
    if g not in TRANSVERSAL_GATES:
        raise FTError(f"transversal gate must be one of {TRANSVERSAL_GATES}, got {gate}")
    if g == "CNOT":
        stabs, lx, lz = _two_block(code)
    else:
        stabs, lx, lz = list(code.stabilizers), list(code.logical_x), list(code.logical_z)
    images = tuple((s, _bitwise(s, g, code.n)) for s in stabs)
    witness = None
    for i, (_, img) in enumerate(images):
        mem = group_contains(stabs, img)
        if mem is not Membership.IN_GROUP_PLUS:
            witness = (i, img, mem)
            break
    action = name = None
    if witness is None:
        k = len(lx)
        action = {}
        for label, ops in (("X", lx), ("Z", lz)):
            for j, op in enumerate(ops):
                key = format_pauli(PauliTerm.single(k, j, label))
                action[key] = format_pauli(_logical_coordinates(_bitwise(op, g, code.n), stabs, lx, lz))
        name = _name_logical_gate(action, k)
    return TransversalResult(code.name, g, witness is None, images, witness, action, name)


def _logical_coordinates(op: PauliTerm, stabs, lx, lz) -> PauliTerm:
    """Write a logical operator as a signed k-qubit Pauli modulo the stabilizer group."""
    k = len(lx)
    a = [int(not commutes(op, z)) for z in lz]   # X-bar exponents
    b = [int(not commutes(op, x)) for x in lx]   # Z-bar exponents
    factors = [lx[j] for j in range(k) if a[j]] + [lz[j] for j in range(k) if b[j]]
    cand = product(factors, op.n) if factors else PauliTerm.identity(op.n)
    # Hermitian representative: X-bar Z-bar -> i X-bar Z-bar, matching Y = iXZ
    ys = sum(a[j] & b[j] for j in range(k))
    cand = cand.with_phase((cand.phase + ys) % 4)
    mem = group_contains(stabs, op * cand)
    if mem is Membership.IN_GROUP_PLUS:
        sign = 0
    elif mem is Membership.IN_GROUP_MINUS:
        sign = 2
    else:
        raise FTError("image is not a logical operator")
    x = sum(a[j] << j for j in range(k))
    z = sum(b[j] << j for j in range(k))
    return PauliTerm(k, x, z, sign)


def _name_logical_gate(action: dict, k: int) -> str | None:
    arity = {1: [g for g in CLIFFORD_GATES if g not in ("CNOT", "CZ", "SWAP")], 2: ["CNOT", "CZ", "SWAP"]}[k]
    for g in arity:
        for targets in itertools.permutations(range(k), k if g in ("CNOT", "CZ", "SWAP") else 1):
            if k == 2 and g not in ("CNOT", "CZ", "SWAP"):
                continue
            if all(format_pauli(conjugate_pauli(parse(src), g, list(targets))) == dst for src, dst in action.items()):
                return g if k == 1 else f"{g}({','.join(map(str, targets))})"
    return None


def cnot_stabilizer_table(code=None) -> list[dict]:
    """Images of every K^i (x) K^j under bitwise CNOT, checked against the closed-form table.

    For X-type K^i the control block copies onto the target; for Z-type K^j
    the target copies back onto the control.  Each entry stores the image,
    the expected operator products and whether they agree exactly.
    """
    code = code or _codes.steane7()
    ks = list(code.stabilizers)
    n = code.n
    eye = PauliTerm.identity(n)
    x_type = [k.z == 0 for k in ks]
    rows = []
    for i, ki in enumerate(ks):
        for j, kj in enumerate(ks):
            image = _bitwise(ki.tensor(kj), "CNOT", n)
            left = ki
            right = kj
            if x_type[i]:
                right = ki * kj if i != j else eye
                if not x_type[j]:
                    left = ki * kj
            elif not x_type[j]:
                left = ki * kj if i != j else eye
            expected = left.tensor(right)
            rows.append({"i": i + 1, "j": j + 1, "image": image, "expected": expected,
                         "label": _table_label(i, j, x_type),
                         "exact": image == expected,
                         "in_group": group_contains(_two_block(code)[0], image) is Membership.IN_GROUP_PLUS})
    return rows


def _table_label(i: int, j: int, x_type) -> str:
    a, b = f"K{i + 1}", f"K{j + 1}"
    if x_type[i] and x_type[j]:
        return f"{a} (x) I" if i == j else f"{a} (x) {a}{b}"
    if x_type[i]:
        return f"{a}{b} (x) {a}{b}"
    if x_type[j]:
        return f"{a} (x) {b}"
    return f"I (x) {b}" if i == j else f"{a}{b} (x) {b}"


# -- fault-tolerant Steane |0>_L preparation ----------------------------------------------------

DATA = tuple(range(7))
CAT = (7, 8, 9, 10)
VERIFIER = 11
PREP_QUBITS = 12


@dataclass
class PrepResult:
    tableau: StabilizerTableau
    attempts: list[int]                 # cat preparations per stabilizer measurement
    rejections: int
    history: list[dict]                 # per stabilizer: raw rounds and majority
    majority: tuple[int, ...]           # majority outcomes for K1..K3 (1 means -1)
    fix_qubit: int                      # 1-based data qubit given a Z, 0 for none
    locations: int                      # executed locations
    schedule: tuple[Location, ...] = field(default=(), repr=False)

    def data_signature(self) -> tuple[int, ...]:
        """Eigenvalues (+1/-1, 0 if random) of K1..K6 and Z-bar on the data block."""
        code = _codes.steane7()
        ops = list(code.stabilizers) + list(code.logical_z)
        pad = PauliTerm.identity(PREP_QUBITS - 7)
        return tuple(self.tableau.expectation(op.tensor(pad)) for op in ops)

    def data_error_weight(self) -> int | None:
        """Weight of the smallest Pauli that explains the data signature; None if entangled."""
        sig = self.data_signature()
        if 0 in sig:
            return None
        return _residual_weights()[tuple(int(s == -1) for s in sig)]

    def data_sector_weights(self) -> tuple[int, int] | None:
        """(X-part, Z-part) minimum weights; the Steane code corrects one of each."""
        sig = self.data_signature()
        if 0 in sig:
            return None
        bits = tuple(int(s == -1) for s in sig)
        table = _residual_weights()
        # X errors are seen by K4..K6 and Z-bar, Z errors by K1..K3
        return table[(0, 0, 0) + bits[3:]], table[bits[:3] + (0, 0, 0, 0)]

    def to_json(self) -> dict:
        return {"attempts": self.attempts, "rejections": self.rejections, "history": self.history,
                "majority": list(self.majority), "fix_qubit": self.fix_qubit, "locations": self.locations,
                "data_signature": list(self.data_signature()), "data_error_weight": self.data_error_weight(),
                "data_sector_weights": self.data_sector_weights()}


_RESIDUAL_WEIGHTS: dict | None = None


def _residual_weights() -> dict[tuple[int, ...], int]:
    """Minimum-weight Pauli for every K1..K6, Z-bar anticommutation pattern."""
    global _RESIDUAL_WEIGHTS
    if _RESIDUAL_WEIGHTS is None:
        code = _codes.steane7()
        ops = list(code.stabilizers) + list(code.logical_z)
        table: dict[tuple[int, ...], int] = {}
        for w in range(8):
            for qs in itertools.combinations(range(7), w):
                for letters in itertools.product("XYZ", repeat=w):
                    e = product([PauliTerm.single(7, q, a) for q, a in zip(qs, letters)], 7) if w else PauliTerm.identity(7)
                    key = tuple(int(not commutes(e, o)) for o in ops)
                    table.setdefault(key, w)
            if len(table) == 2 ** len(ops):
                break
        _RESIDUAL_WEIGHTS = table
    return _RESIDUAL_WEIGHTS


class _Runner:
    """Executes protocol locations, adding noise and at most one injected fault."""

    def __init__(self, rng, noise: PauliChannel | None, inject: FaultEvent | None):
        self.t = StabilizerTableau.computational_state(PREP_QUBITS)
        self.rng = rng
        self.noise = None if noise is None or noise.is_zero else noise
        self.inject = inject
        self.count = 0
        self.log: list[Location] = []

    def _after(self, qubits: Sequence[int]) -> None:
        if self.noise is not None:
            probs = [1 - self.noise.p, self.noise.px, self.noise.py, self.noise.pz]
            for q in qubits:
                a = self.rng.choice(4, p=probs)
                if a:
                    self.t.apply_pauli(PauliTerm.single(PREP_QUBITS, q, "XYZ"[a - 1]))
        if self.inject is not None and self.inject.location == self.count:
            self.t.apply_pauli(self.inject.pauli)
        self.count += 1

    def prep(self, q: int) -> None:
        self.t.reset_qubit(q, self.rng)
        self.log.append(Location("prep", (q,)))
        self._after([q])

    def gate(self, name: str, *qs: int) -> None:
        self.t.apply_clifford(name, list(qs))
        self.log.append(Location("gate", tuple(qs), name))
        self._after(qs)

    def measure(self, q: int) -> int:
        bit = self.t.measure_qubit(q, self.rng)
        self.log.append(Location("measure", (q,)))
        self._after([q])
        return bit


def _cat_attempt(run: _Runner) -> int:
    """Prepare the 4-qubit cat state and check qubits 1 and 4 for equal parity."""
    for q in CAT + (VERIFIER,):
        run.prep(q)
    run.gate("H", CAT[0])
    for a, b in zip(CAT, CAT[1:]):
        run.gate("CNOT", a, b)
    run.gate("CNOT", CAT[0], VERIFIER)
    run.gate("CNOT", CAT[3], VERIFIER)
    return run.measure(VERIFIER)


def _measure_x_stabilizer(run: _Runner, support: Sequence[int], max_rounds: int, stats: dict) -> int:
    tries = 0
    while True:
        tries += 1
        if _cat_attempt(run) == 0:
            break
        stats["rejections"] += 1
        if tries >= max_rounds:
            raise ProtocolAborted(f"cat state rejected {tries} times", dict(stats, location=run.count))
    stats["attempts"].append(tries)
    for a, q in zip(CAT, support):
        run.gate("CNOT", a, q)
    for a, b in reversed(list(zip(CAT, CAT[1:]))):
        run.gate("CNOT", a, b)
    run.gate("H", CAT[0])
    return run.measure(CAT[0])


def ft_steane_prep(rng: np.random.Generator | None = None, noise: PauliChannel | None = None,
                   max_rounds: int = 20, inject: FaultEvent | None = None) -> PrepResult:
    """Shor-style preparation of the Steane |0>_L on 7 data + 4 cat + 1 verifier qubits.

    Z-type generators and Z-bar already hold on |0000000>.  Each X-type
    generator is measured with a verified cat state, twice, with a third
    round only when the first two disagree; the majority outcomes choose the
    single-qubit Z that fixes the signs.  Gate noise acts after every location
    on its targets; ``inject`` adds one extra Pauli after a chosen location.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if inject is not None and inject.pauli.n != PREP_QUBITS:
        raise FTError(f"injected fault must act on {PREP_QUBITS} qubits")
    run = _Runner(rng, noise, inject)
    code = _codes.steane7()
    stats: dict = {"attempts": [], "rejections": 0}
    history, majority = [], []
    for idx, k in enumerate(code.stabilizers[:3]):
        support = k.support
        rounds = [_measure_x_stabilizer(run, support, max_rounds, stats) for _ in range(2)]
        if rounds[0] != rounds[1]:
            rounds.append(_measure_x_stabilizer(run, support, max_rounds, stats))
        vote = int(sum(rounds) * 2 > len(rounds))
        history.append({"stabilizer": f"K{idx + 1}", "rounds": rounds, "majority": vote})
        majority.append(vote)
    fix = _codes.steane_fix_qubit(*majority)
    if fix:
        run.gate("Z", fix - 1)
    for q in CAT + (VERIFIER,):
        run.prep(q)
    return PrepResult(run.t, stats["attempts"], stats["rejections"], history, tuple(majority), fix, run.count,
                      tuple(run.log))


@dataclass(frozen=True)
class PrepScanReport:
    """Outcome of injecting every single fault into the noiseless protocol.

    ``strict_pass`` covers every fault, ``lenient_pass`` skips faults on the
    verifier qubit.  Both grade by sector: at most one X-type and one Z-type
    error left on the data.  ``total_weight_pass`` is the stricter reading
    where the combined residual must have weight <= 1.
    """

    faults_checked: int
    strict_pass: bool
    lenient_pass: bool
    total_weight_pass: bool
    worst_weight: int | None
    worst_fault: str | None
    rejected: int            # faults that triggered a cat re-preparation
    rows: tuple[dict, ...] = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {"faults_checked": self.faults_checked, "strict_pass": self.strict_pass,
                "lenient_pass": self.lenient_pass, "total_weight_pass": self.total_weight_pass,
                "worst_weight": self.worst_weight, "worst_fault": self.worst_fault, "rejected": self.rejected}


def prep_fault_scan(seed: int = 0, max_rounds: int = 20) -> PrepScanReport:
    """Inject every single fault into the noiseless protocol and grade the data block.

    Locations come from the fault-free schedule; a fault that causes a
    re-preparation lengthens the run but happens only once.  Measurement
    randomness is fixed by ``seed`` for every run.
    """
    nominal = ft_steane_prep(np.random.default_rng(seed), max_rounds=max_rounds)
    rows = []
    for i, loc in enumerate(nominal.schedule):
        for q in loc.targets:
            for a in "XYZ":
                f = FaultEvent.single(PREP_QUBITS, i, q, a)
                res = ft_steane_prep(np.random.default_rng(seed), max_rounds=max_rounds, inject=f)
                sectors = res.data_sector_weights()
                rows.append({"fault": str(f), "location": str(loc), "verifier": q == VERIFIER,
                             "weight": res.data_error_weight(), "sectors": sectors,
                             "rejected": res.rejections > nominal.rejections})
    ok = [r["sectors"] is not None and max(r["sectors"]) <= 1 for r in rows]
    worst = max(rows, key=lambda r: (r["weight"] is None, r["weight"] or 0))
    return PrepScanReport(
        len(rows), all(ok), all(good for r, good in zip(rows, ok) if not r["verifier"]),
        all(r["weight"] is not None and r["weight"] <= 1 for r in rows),
        worst["weight"], worst["fault"], sum(r["rejected"] for r in rows), tuple(rows))


__all__ = [
    "Circuit", "FTError", "FTReport", "FaultEvent", "FaultOutcome", "Location", "PrepResult",
    "PrepScanReport", "Propagation", "ProtocolAborted", "TransversalResult", "check_fault_tolerance",
    "cnot_circuit", "cnot_stabilizer_table", "fanout_copy_circuit", "fault_locations", "ft_steane_prep",
    "pairwise_copy_circuit", "parse_circuit", "prep_fault_scan", "propagate", "propagate_detailed",
    "transversal_validity",
]
