"""Error models: Pauli channels, coherent over-rotation, Lindblad memory
errors, loss and measurement/initialization flips.

Mixed processes are always simulated as pure-state trajectories.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import densesim
from .pauli import PauliTerm
from .tableau import StabilizerTableau


class NoiseError(ValueError):
    """Invalid channel parameters."""


@dataclass(frozen=True)
class PauliChannel:
    """Independent single-qubit Pauli channel."""

    px: float = 0.0
    py: float = 0.0
    pz: float = 0.0

    def __post_init__(self):
        probs = (self.px, self.py, self.pz)
        if any(p < 0 or p > 1 for p in probs) or sum(probs) > 1 + 1e-12:
            raise NoiseError(f"invalid Pauli probabilities {probs}")

    @property
    def p(self) -> float:
        return self.px + self.py + self.pz

    @classmethod
    def depolarizing(cls, p: float) -> "PauliChannel":
        return cls(p / 3, p / 3, p / 3)

    @classmethod
    def bit_flip(cls, p: float) -> "PauliChannel":
        return cls(px=p)

    @classmethod
    def phase_flip(cls, p: float) -> "PauliChannel":
        return cls(pz=p)

    @property
    def is_zero(self) -> bool:
        return self.p == 0


@dataclass(frozen=True)
class CoherentError:
    """Systematic rotation exp(i*eps*sigma_axis)."""

    axis: str
    eps: float

    def __post_init__(self):
        if self.axis not in ("X", "Y", "Z"):
            raise NoiseError(f"axis must be X, Y or Z, not {self.axis!r}")

    @property
    def perturbative(self) -> bool:
        return abs(self.eps) < np.pi / 2

    def matrix(self) -> np.ndarray:
        return densesim.rotation(self.axis, self.eps)


@dataclass(frozen=True)
class MeasurementModel:
    """Classical flip probabilities for readout and initialization, plus loss."""

    p_meas: float = 0.0
    p_init: float = 0.0
    p_loss: float = 0.0

    def __post_init__(self):
        for v in (self.p_meas, self.p_init, self.p_loss):
            if not 0 <= v <= 1:
                raise NoiseError(f"probability {v} outside [0, 1]")

    def readout(self, bit: int, rng: np.random.Generator) -> int:
        return bit ^ int(rng.random() < self.p_meas)

    def initial_bit(self, rng: np.random.Generator) -> int:
        return int(rng.random() < self.p_init)


# -- sampling ---------------------------------------------------------------------

def sample_pauli_arrays(channel: PauliChannel, shots: int, n: int, rng: np.random.Generator):
    """Vectorized i.i.d. draws: boolean (shots, n) arrays of X and Z components."""
    u = rng.random((shots, n))
    is_x = u < channel.px
    is_y = (u >= channel.px) & (u < channel.px + channel.py)
    is_z = (u >= channel.px + channel.py) & (u < channel.p)
    return is_x | is_y, is_z | is_y


def sample_pauli_error(channel: PauliChannel, n: int, rng: np.random.Generator) -> PauliTerm:
    """One n-qubit error drawn independently per qubit."""
    x, z = sample_pauli_arrays(channel, 1, n, rng)
    w = 1 << np.arange(n, dtype=object)
    return PauliTerm(n, int(np.dot(x[0].astype(object), w)), int(np.dot(z[0].astype(object), w)))


# -- Lindblad memory errors ------------------------------------------------------------

class LindbladProbs(NamedTuple):
    px: float
    py: float
    pz: float
    p: float


def lindblad_pauli_probs(gamma: float, gamma_z: float, t: float) -> LindbladProbs:
    """Pauli-channel weights after time t of dephasing (rate gamma_z) plus
    equal-rate emission/absorption (rate gamma)."""
    if gamma < 0 or gamma_z < 0 or t < 0:
        raise NoiseError("rates and time must be nonnegative")
    e_long = np.exp(-2 * gamma * t)
    e_trans = np.exp(-(gamma + 2 * gamma_z) * t)
    px = py = 0.25 * (1 - e_long)
    pz = 0.25 * (1 + e_long - 2 * e_trans)
    return LindbladProbs(float(px), float(py), float(pz), float(px + py + pz))


def lindblad_channel(gamma: float, gamma_z: float, t: float) -> PauliChannel:
    p = lindblad_pauli_probs(gamma, gamma_z, t)
    return PauliChannel(p.px, p.py, p.pz)


# -- coherent over-rotation on the repetition code -----------------------------------------

REP3_SYNDROME_FIX = {"00": None, "11": 0, "10": 1, "01": 2}


@dataclass
class DigitizationReport:
    eps: float
    c: tuple[complex, complex, complex, complex]
    p_no_detection: float
    p_detected: float
    f_no_detection: float
    f_error_detected: float
    f_unencoded: float
    # measured on the 5-qubit dense circuit, keyed by ancilla pattern
    branch_probability: dict
    branch_fidelity: dict

    @property
    def f_encoded_average(self) -> float:
        return self.p_no_detection * self.f_no_detection + self.p_detected * self.f_error_detected

    @property
    def advantage(self) -> float:
        """Average encoded fidelity minus unencoded fidelity (exact trig)."""
        return self.f_encoded_average - self.f_unencoded

    def max_deviation(self) -> float:
        """Largest gap between circuit-measured and closed-form quantities."""
        gaps = [abs(self.branch_probability["00"] - self.p_no_detection)]
        gaps.append(abs(sum(self.branch_probability[k] for k in ("01", "10", "11")) - self.p_detected))
        gaps.append(abs(self.branch_fidelity["00"] - self.f_no_detection))
        gaps += [abs(self.branch_fidelity[k] - self.f_error_detected) for k in ("01", "10", "11")]
        return max(gaps)


def rep3_coefficients(eps: float) -> tuple[complex, complex, complex, complex]:
    """Expansion of exp(i eps X)^3 by the number of X factors."""
    c, s = np.cos(eps), np.sin(eps)
    return (c**3 + 0j, 1j * c**2 * s, -c * s**2 + 0j, -1j * s**3)


def leading_order_advantage(eps: float) -> float:
    """Small-eps estimate of encoded minus unencoded fidelity.

    Uses F_nd ~ 1-eps^6 with probability 1-3eps^2 and F_d ~ 1-eps^2 with
    probability 3eps^2 against F_unenc ~ 1-eps^2; it factors as
    (1 - 3 eps^2) eps^2 (1 - eps^4) and so changes sign at eps^2 = 1/3.
    """
    e2 = eps * eps
    return (1 - 3 * e2) * (e2 - e2**3)


def digitize_coherent_rep3(eps: float, run_circuit: bool = True) -> DigitizationReport:
    """Closed-form digitization of exp(i eps X) on every repetition-code qubit,
    checked against a dense 3-data + 2-ancilla syndrome circuit."""
    if abs(eps) >= np.pi / 2:
        raise NoiseError("eps must satisfy |eps| < pi/2")
    c = rep3_coefficients(eps)
    a0, a1, a2, a3 = (abs(v) ** 2 for v in c)
    p_nd = a0 + a3
    p_d = 3 * (a1 + a2)
    f_nd = a0 / p_nd
    f_d = a1 / (a1 + a2) if a1 + a2 > 0 else 1.0
    probs, fids = {}, {}
    if run_circuit:
        probs, fids = _rep3_circuit(eps)
    return DigitizationReport(eps, c, p_nd, p_d, f_nd, f_d, float(np.cos(eps) ** 2), probs, fids)


def _rep3_circuit(eps: float):
    zero_l = densesim.StateVector.from_label("000")
    st = densesim.StateVector.zeros(5)
    for q in range(3):
        st = densesim.apply_gate(st, "RX", q, eps=eps)
    for ctrl, anc in ((0, 3), (1, 3), (0, 4), (2, 4)):
        st = densesim.apply_gate(st, "CNOT", [ctrl, anc])
    probs, fids = {}, {}
    for pattern, fix in REP3_SYNDROME_FIX.items():
        b3, b4 = int(pattern[0]), int(pattern[1])
        try:
            _, s1, p1 = densesim.measure_qubit(st, 3, forced=b3)
            _, s2, p2 = densesim.measure_qubit(s1, 4, forced=b4)
        except densesim.SimulatorError:
            probs[pattern], fids[pattern] = 0.0, 1.0
            continue
        data = densesim.remove_qubit(densesim.remove_qubit(s2, 4, b4), 3, b3)
        if fix is not None:
            data = densesim.apply_gate(data, "X", fix)
        probs[pattern] = p1 * p2
        fids[pattern] = densesim.fidelity(zero_l, data)
    return probs, fids


def breakeven_scan(eps_values: Sequence[float]) -> list[tuple[float, float, float]]:
    """(eps, exact advantage, leading-order advantage) rows."""
    return [(float(e), float(digitize_coherent_rep3(e, run_circuit=False).advantage), leading_order_advantage(e))
            for e in eps_values]


# -- loss ------------------------------------------------------------------------------

class LossOutcome(NamedTuple):
    state: object
    qubit: int
    hidden_bit: int


def apply_loss(state, q: int, rng: np.random.Generator) -> LossOutcome:
    """Lose qubit ``q`` and replace it with a fresh |0>.

    Equivalent to an unread Z measurement followed by reset, so relative to
    the pre-loss state the qubit carries Z with probability 1/2 (plus an X
    when the hidden outcome was 1).  The location is known to the decoder.
    Works on both StateVector and StabilizerTableau states.
    """
    if isinstance(state, StabilizerTableau):
        st = state.copy()
        bit = st.measure_qubit(q, rng)
        if bit:
            st.apply_clifford("X", q)
        return LossOutcome(st, q, bit)
    bit, st, _ = densesim.measure_qubit(state, q, rng)
    if bit:
        st = densesim.apply_gate(st, "X", q)
    return LossOutcome(st, q, bit)


def maybe_lose(state, model: MeasurementModel, rng: np.random.Generator) -> tuple[object, list[int]]:
    """Independently lose each qubit with probability ``model.p_loss``."""
    lost = [q for q in range(state.n) if rng.random() < model.p_loss]
    for q in lost:
        state = apply_loss(state, q, rng).state
    return state, lost


# -- general Kraus maps seen through a syndrome measurement ---------------------------

class Branch(NamedTuple):
    syndrome: tuple[int, ...]
    probability: float
    state: densesim.StateVector


def syndrome_branches(state: densesim.StateVector, stabilizers: Sequence[PauliTerm]) -> list[Branch]:
    """Every nonzero-probability syndrome outcome with its post-measurement state."""
    out = [((), 1.0, state)]
    for g in stabilizers:
        nxt = []
        for bits, prob, st in out:
            for outcome in (1, -1):
                try:
                    _, s2, p = densesim.measure_pauli(st, g, forced=outcome)
                except densesim.SimulatorError:
                    continue
                nxt.append((bits + (0 if outcome == 1 else 1,), prob * p, s2))
        out = nxt
    return [Branch(b, p, s) for b, p, s in out if p > densesim.ATOL]


def apply_kraus_operator(state: densesim.StateVector, terms: Sequence[tuple[complex, PauliTerm]]) -> densesim.StateVector:
    """Apply a single Kraus operator written as a Pauli sum (renormalized)."""
    return densesim.apply_pauli_sum(state, terms)


# -- configuration ------------------------------------------------------------------------

def channel_from_config(cfg: dict) -> PauliChannel:
    """Build a Pauli channel from {type: pauli|depolarizing|bitflip|phaseflip|lindblad, ...}."""
    kind = str(cfg.get("type", "pauli")).lower()
    try:
        if kind == "pauli":
            return PauliChannel(float(cfg.get("px", 0)), float(cfg.get("py", 0)), float(cfg.get("pz", 0)))
        if kind == "depolarizing":
            return PauliChannel.depolarizing(float(cfg["p"]))
        if kind in ("bitflip", "x"):
            return PauliChannel.bit_flip(float(cfg["p"]))
        if kind in ("phaseflip", "z"):
            return PauliChannel.phase_flip(float(cfg["p"]))
        if kind == "lindblad":
            return lindblad_channel(float(cfg["gamma"]), float(cfg["gamma_z"]), float(cfg["t"]))
    except KeyError as exc:
        raise NoiseError(f"channel {kind!r} is missing parameter {exc}") from exc
    raise NoiseError(f"unknown channel type {kind!r}")
