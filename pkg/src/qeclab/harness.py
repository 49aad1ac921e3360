"""Monte-Carlo and analytic experiments.

Trials are split into fixed-size blocks; block ``b`` draws from
``default_rng([seed, b])`` so results do not depend on how blocks are spread
over worker processes.  Syndromes, corrections and residuals are computed on
boolean symplectic arrays, one row per trial.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy.stats import norm

from . import codes as _codes
from .codes import SurfaceLattice
from .decode import (DecodeError, ResidualClass, SyndromeRecord, SyndromeTable, build_lookup, classify_residual,
                     mwpm_decode, syndrome_of)
from .noise import PauliChannel, sample_pauli_arrays
from .pauli import PauliTerm

BLOCK_SIZE = 4096
CSV_COLUMNS = ("code", "N", "p", "trials", "failures", "rate", "ci_lo", "ci_hi", "seed")


# -- results ----------------------------------------------------------------------

@dataclass(frozen=True)
class RateEstimate:
    trials: int
    failures: int
    confidence: float = 0.95

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials, self.confidence)

    @property
    def sigma(self) -> float:
        """Binomial standard error of the point estimate."""
        p = self.rate
        return math.sqrt(p * (1 - p) / self.trials)

    def to_json(self) -> dict:
        lo, hi = self.interval
        return {"trials": self.trials, "failures": self.failures, "rate": self.rate, "ci_lo": lo, "ci_hi": hi}


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval; well behaved at zero or all failures."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = norm.ppf(0.5 + confidence / 2)
    p = failures / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return float(lo), float(hi)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    error: PauliTerm
    syndrome: SyndromeRecord
    correction: PauliTerm
    outcome: ResidualClass


# -- vectorized decoding pipelines -------------------------------------------------------

def _bits(terms: Sequence[PauliTerm], n: int) -> tuple[np.ndarray, np.ndarray]:
    q = range(n)
    x = np.array([[(t.x >> i) & 1 for i in q] for t in terms], dtype=np.uint8).reshape(len(terms), n)
    z = np.array([[(t.z >> i) & 1 for i in q] for t in terms], dtype=np.uint8).reshape(len(terms), n)
    return x, z


def _anticommute(ex, ez, ox, oz) -> np.ndarray:
    """(shots, m) parity of each error row against each operator row."""
    return ((ex.astype(np.uint8) @ oz.T + ez.astype(np.uint8) @ ox.T) & 1).astype(bool)


class _LookupPipeline:
    def __init__(self, code, table: SyndromeTable | None = None):
        if isinstance(code, SurfaceLattice):
            raise DecodeError("use the mwpm decoder for surface codes")
        self.code = code
        self.table = table if table is not None else build_lookup(code, complete=True)
        n, m = code.n, len(code.stabilizers)
        self.n = n
        self.sx, self.sz = _bits(code.stabilizers, n)
        logicals = tuple(code.logical_x) + tuple(code.logical_z)
        self.lx, self.lz = _bits(logicals, n)
        self.weights = 1 << np.arange(m, dtype=np.int64)
        size = 1 << m
        self.known = np.zeros(size, dtype=bool)
        self.cx = np.zeros((size, n), dtype=bool)
        self.cz = np.zeros((size, n), dtype=bool)
        for key, corr in self.table.entries.items():
            i = int(np.dot(key, self.weights))
            self.known[i] = True
            bx, bz = _bits([corr], n)
            self.cx[i], self.cz[i] = bx[0].astype(bool), bz[0].astype(bool)

    def failures(self, ex, ez) -> np.ndarray:
        syn = _anticommute(ex, ez, self.sx, self.sz)
        idx = syn.astype(np.int64) @ self.weights
        if not self.known[idx].all():
            raise DecodeError(f"syndrome outside the {self.code.name} table")
        rx, rz = ex ^ self.cx[idx], ez ^ self.cz[idx]
        return _anticommute(rx, rz, self.lx, self.lz).any(axis=1)

    def record(self, trial: int, seed: int, e: PauliTerm) -> TrialRecord:
        syn = syndrome_of(self.code, e)
        corr = self.table.correction(syn.bits)
        return TrialRecord(trial, seed, e, syn, corr, classify_residual(self.code, e * corr))


class _MatchingPipeline:
    """Both sectors of the planar surface code, decoded independently."""

    def __init__(self, lattice: SurfaceLattice):
        self.lat = lattice
        self.n = lattice.n
        self.checks = {}
        for sector, ops in (("X", lattice.plaquettes), ("Z", lattice.vertex_checks)):
            ox, oz = _bits(ops, self.n)
            self.checks[sector] = (oz if sector == "X" else ox).astype(np.uint8)
        self.zbar = _bits(lattice.logical_z, self.n)[1][0].astype(bool)
        self.xbar = _bits(lattice.logical_x, self.n)[0][0].astype(bool)

    @lru_cache(maxsize=1 << 16)
    def _correction(self, sector: str, key: bytes) -> np.ndarray:
        flags = np.frombuffer(key, dtype=bool)
        coords = self.lat.sector_checks(sector)
        defects = [c for c, f in zip(coords, flags) if f]
        corr = mwpm_decode(self.lat, defects, sector).correction
        mask = corr.x if sector == "X" else corr.z
        return np.array([(mask >> i) & 1 for i in range(self.n)], dtype=bool)

    def _sector(self, e: np.ndarray, sector: str) -> np.ndarray:
        flags = ((e.astype(np.uint8) @ self.checks[sector].T) & 1).astype(bool)
        res = e.copy()
        for i, row in enumerate(flags):
            if row.any():
                res[i] ^= self._correction(sector, row.tobytes())
        # X residual fails if it crosses Z-bar, Z residual if it crosses X-bar
        other = self.zbar if sector == "X" else self.xbar
        return (res.astype(np.uint8) @ other.astype(np.uint8) & 1).astype(bool)

    def failures(self, ex, ez) -> np.ndarray:
        return self._sector(ex, "X") | self._sector(ez, "Z")

    def record(self, trial: int, seed: int, e: PauliTerm) -> TrialRecord:
        lat = self.lat
        cx = mwpm_decode(lat, lat.defects(e, "X"), "X").correction
        cz = mwpm_decode(lat, lat.defects(e, "Z"), "Z").correction
        corr = cx * cz
        syn = syndrome_of(lat, e)
        return TrialRecord(trial, seed, e, syn, corr, classify_residual(lat, (e * corr).with_phase(0)))


def _pipeline(code, decoder):
    if isinstance(decoder, SyndromeTable):
        return _LookupPipeline(code, decoder)
    if decoder == "mwpm":
        if not isinstance(code, SurfaceLattice):
            raise DecodeError(f"mwpm decoding needs a surface code, got {code.name}")
        return _MatchingPipeline(code)
    if decoder == "lookup":
        return _LookupPipeline(code)
    raise DecodeError(f"unknown decoder {decoder!r}")


def default_decoder(code) -> str:
    return "mwpm" if isinstance(code, SurfaceLattice) else "lookup"


# -- Monte-Carlo driver ----------------------------------------------------------------------

def _block_rng(seed: int, block: int, *tag: int) -> np.random.Generator:
    return np.random.default_rng([seed, *tag, block])


def _block_sizes(trials: int, block_size: int) -> list[int]:
    full, rest = divmod(trials, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _run_block(args) -> int:
    code, channel, decoder, seed, block, size, tag = args
    pipe = _pipeline(code, decoder)
    ex, ez = sample_pauli_arrays(channel, size, code.n, _block_rng(seed, block, *tag))
    return int(pipe.failures(ex, ez).sum())


def _run_blocks(code, channel, decoder, trials, seed, workers, block_size, tag=()) -> int:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if channel.is_zero:
        return 0
    jobs = [(code, channel, decoder, seed, b, s, tuple(tag)) for b, s in enumerate(_block_sizes(trials, block_size))]
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(jobs) == 1:
        return sum(map(_run_block, jobs))
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return sum(pool.map(_run_block, jobs))


def default_workers() -> int:
    env = os.environ.get("QECLAB_WORKERS")
    if env:
        return max(1, int(env))
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def logical_error_rate(code, channel: PauliChannel, decoder="lookup", trials: int = 10_000, seed: int = 0,
                       workers: int | None = 1, block_size: int = BLOCK_SIZE) -> RateEstimate:
    """Sample errors, extract perfect syndromes, decode and count logical failures."""
    _pipeline(code, decoder)  # surface mismatches before spawning workers
    return RateEstimate(trials, _run_blocks(code, channel, decoder, trials, seed, workers, block_size))


def iter_trials(code, channel: PauliChannel, decoder="lookup", trials: int = 10, seed: int = 0,
                block_size: int = BLOCK_SIZE) -> Iterator[TrialRecord]:
    """Per-trial records from the same random stream that logical_error_rate uses."""
    pipe = _pipeline(code, decoder)
    t = 0
    for b, size in enumerate(_block_sizes(trials, block_size)):
        ex, ez = sample_pauli_arrays(channel, size, code.n, _block_rng(seed, b))
        w = 1 << np.arange(code.n, dtype=object)
        for rx, rz in zip(ex, ez):
            e = PauliTerm(code.n, int(np.dot(rx.astype(object), w)), int(np.dot(rz.astype(object), w)))
            yield pipe.record(t, seed, e)
            t += 1


# -- oracles -----------------------------------------------------------------------------------------

def rep3_failure_probability(p: float) -> float:
    """Two or three flips out of three."""
    return 3 * p * p * (1 - p) + p ** 3


def enumerated_failure_probability(code, channel: PauliChannel, max_weight: int = 2, decoder="lookup") -> float:
    """Sum of P(E) over every failing error E of weight <= max_weight."""
    pipe = _pipeline(code, decoder)
    n = code.n
    probs = {"X": channel.px, "Y": channel.py, "Z": channel.pz}
    idle = 1 - channel.p
    total = 0.0
    for w in range(1, max_weight + 1):
        for qs in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                pr = idle ** (n - w) * math.prod(probs[a] for a in letters)
                if pr == 0:
                    continue
                ex = np.zeros((1, n), dtype=bool)
                ez = np.zeros((1, n), dtype=bool)
                for q, a in zip(qs, letters):
                    ex[0, q] = a in "XY"
                    ez[0, q] = a in "YZ"
                if pipe.failures(ex, ez)[0]:
                    total += pr
    return total


# -- concatenation -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class ConcatenationCurve:
    c: float
    p: float
    rates: tuple[float, ...]  # index k = concatenation level

    @property
    def threshold(self) -> float:
        return 1.0 / self.c

    @property
    def below_threshold(self) -> bool:
        return self.c * self.p < 1


def concatenation_curve(c: float, p: float, k_max: int) -> ConcatenationCurve:
    """Level-k failure rates (c p)^(2^k) / c for k = 0..k_max."""
    if c <= 0:
        raise ValueError("c must be positive")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    return ConcatenationCurve(c, p, tuple((c * p) ** (2 ** k) / c for k in range(k_max + 1)))


def qubit_resource_count(family: str, *params) -> dict:
    """Physical qubits for a code family; ``concatenated`` takes (code name, level)."""
    if family == "surface":
        (N,) = params
        if N < 2:
            raise ValueError("surface needs N >= 2")
        return {"family": family, "params": [N], "physical_qubits": 2 * N * N}
    if family == "bacon_shor":
        n1, n2 = params
        if n1 < 2 or n2 < 2:
            raise ValueError("bacon_shor needs n1, n2 >= 2")
        return {"family": family, "params": [n1, n2], "physical_qubits": n1 * n2}
    if family == "concatenated":
        name, level = params
        if level < 0:
            raise ValueError("level must be >= 0")
        n = _codes.builtin(name).n
        return {"family": family, "params": [name, level], "physical_qubits": n ** level}
    code = _codes.builtin(family, *params)
    return {"family": family, "params": list(params), "physical_qubits": code.n}


# -- surface scans --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    code: str
    N: int
    p: float
    estimate: RateEstimate
    seed: int

    def as_csv(self) -> list[str]:
        lo, hi = self.estimate.interval
        return [self.code, str(self.N), repr(self.p), str(self.estimate.trials), str(self.estimate.failures),
                f"{self.estimate.rate:.10g}", f"{lo:.10g}", f"{hi:.10g}", str(self.seed)]


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[ScanRow, ...]
    diagnostics: tuple[str, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.as_csv())
        return buf.getvalue()


def surface_scaling_scan(N_list: Sequence[int], p_list: Sequence[float], trials: int, seed: int = 0,
                         workers: int | None = 1, block_size: int = BLOCK_SIZE) -> ScanResult:
    """Bit-flip noise on planar surfaces of several sizes, decoded by matching.

    Only X errors are drawn, so only the plaquette sector is exercised; the
    vertex sector behaves identically on the dual lattice.
    """
    rows = []
    for N in N_list:
        lat = _codes.SurfaceLattice(N)
        for i, p in enumerate(p_list):
            ch = PauliChannel.bit_flip(p)
            fails = _run_blocks(lat, ch, "mwpm", trials, seed, workers, block_size, tag=(N, i))
            rows.append(ScanRow(lat.name, N, float(p), RateEstimate(trials, fails), seed))
    return ScanResult(tuple(rows), tuple(monotonicity_diagnostics(rows)))


def monotonicity_diagnostics(rows: Sequence[ScanRow]) -> list[str]:
    """Flag p values where a larger lattice is worse beyond overlapping 95% intervals."""
    out = []
    for p in sorted({r.p for r in rows}):
        cells = sorted((r for r in rows if r.p == p), key=lambda r: r.N)
        for a, b in zip(cells, cells[1:]):
            if b.estimate.interval[0] > a.estimate.interval[1]:
                out.append(f"p={p}: N={b.N} rate {b.estimate.rate:.4g} exceeds N={a.N} rate {a.estimate.rate:.4g}")
    return out


__all__ = [
    "BLOCK_SIZE", "CSV_COLUMNS", "ConcatenationCurve", "RateEstimate", "ScanResult", "ScanRow", "TrialRecord",
    "concatenation_curve", "default_decoder", "default_workers", "enumerated_failure_probability", "iter_trials",
    "logical_error_rate", "monotonicity_diagnostics", "qubit_resource_count", "rep3_failure_probability",
    "surface_scaling_scan", "wilson_interval",
]
