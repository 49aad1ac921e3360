"""End-to-end acceptance checks, one test per criterion.

Each test prints a ``PASS/FAIL criterion N`` line; the lines are also
collected into a summary section at the end of the pytest run.
"""
import csv
import io
import math
import time

import numpy as np
import pytest

from qeclab import cli, codes, decode, densesim, ftsim, harness, noise
from qeclab.decode import ResidualClass
from qeclab.noise import PauliChannel
from qeclab.pauli import PauliTerm, commutes

from oracles import brute_force_matching, lindblad_pauli_weights, lookup_failure_probability

STEANE_ZERO = ["0000000", "1010101", "0110011", "1100110", "0001111", "1011010", "0111100", "1101001"]
STEANE_ONE = ["1111111", "0101010", "1001100", "0011001", "1110000", "0100101", "1000011", "0010110"]
FIVE_PLUS = ["00000", "01010", "10100", "01001", "10010", "00101"]
FIVE_MINUS = ["11110", "00011", "11101", "10111", "11000", "00110", "01100", "11011", "10001", "01111"]


def expansion_error(state, expected):
    """Largest amplitude mismatch against a {bitstring: amplitude} table."""
    amps = {label: amp for label, amp in state.dump(atol=0)}
    labels = set(amps) | set(expected)
    return max(abs(amps.get(k, 0) - expected.get(k, 0)) for k in labels)


def codeword(code, logical_one=False):
    gens = list(code.stabilizers) + list(code.logical_z)
    st = densesim.project_onto_stabilizers(densesim.StateVector.zeros(code.n), gens)
    if logical_one:
        st = densesim.apply_pauli(st, code.logical_x[0])
    return st.canonical_phase()


def test_codeword_exactness(verdict):
    t0 = time.perf_counter()
    a = 1 / math.sqrt(8)
    errs = [
        expansion_error(codeword(codes.steane7()), {k: a for k in STEANE_ZERO}),
        expansion_error(codeword(codes.steane7(), True), {k: a for k in STEANE_ONE}),
        expansion_error(codeword(codes.five_qubit()),
                        {**{k: 0.25 for k in FIVE_PLUS}, **{k: -0.25 for k in FIVE_MINUS}}),
    ]
    elapsed = time.perf_counter() - t0
    ok = max(errs) < 1e-10 and elapsed < 1
    verdict(1, ok, f"max amplitude error {max(errs):.2e}, {elapsed:.2f}s")


def test_syndrome_tables(verdict):
    t0 = time.perf_counter()
    rep3 = codes.rep3()
    table1 = {"III": "00", "XII": "11", "IXI": "10", "IIX": "01"}
    rep_ok = all(str(decode.syndrome_of(rep3, PauliTerm.from_support(3, [i for i, c in enumerate(e) if c == "X"], "X")))
                 == bits for e, bits in table1.items())
    rep_ok &= decode.build_lookup(rep3).rows() == [("00", "III"), ("01", "IIX"), ("10", "IXI"), ("11", "XII")]
    d4 = codes.detect4()
    d4_ok = all(str(decode.syndrome_of(d4, PauliTerm.single(4, q, l))) == bits
                for q in range(4) for l, bits in (("X", "10"), ("Z", "01")))
    d4_ok &= str(decode.syndrome_of(d4, PauliTerm.identity(4))) == "00"
    steane = codes.steane7()
    errs = [PauliTerm.identity(7)] + [PauliTerm.single(7, q, l) for q in range(7) for l in "XYZ"]
    distinct = len({decode.syndrome_of(steane, e).bits for e in errs})
    elapsed = time.perf_counter() - t0
    ok = rep_ok and d4_ok and distinct == 22 and elapsed < 1
    verdict(2, ok, f"rep3 {rep_ok}, detect4 {d4_ok}, steane distinct syndromes {distinct}, {elapsed:.2f}s")


def test_digitization(verdict):
    devs = []
    for eps in (0.01, 0.05, 0.1):
        rep = noise.digitize_coherent_rep3(eps)
        c, s = math.cos(eps), math.sin(eps)
        devs += [rep.max_deviation(), abs(rep.f_no_detection - c**6 / (c**6 + s**6)),
                 abs(rep.p_no_detection - (c**6 + s**6)),
                 abs(rep.branch_probability["00"] - (c**6 + s**6))]
    grid = np.linspace(0.3, 0.9, 601)
    adv = np.array([noise.leading_order_advantage(e) for e in grid])
    flips = np.nonzero(np.diff(np.sign(adv)))[0]
    crossing = float(grid[flips[0]] ** 2) if len(flips) else float("nan")
    ok = max(devs) < 1e-9 and len(flips) == 1 and abs(crossing - 1 / 3) < 2e-3
    verdict(3, ok, f"max deviation {max(devs):.2e}, advantage sign change at eps^2={crossing:.4f}")


def test_lindblad(verdict):
    rng = np.random.default_rng(20)
    worst = 0.0
    for _ in range(20):
        gamma, gamma_z, t = rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 5)
        got = noise.lindblad_pauli_probs(gamma, gamma_z, t)
        ref = lindblad_pauli_weights(gamma, gamma_z, t)
        worst = max(worst, abs(got.px - ref["X"]), abs(got.py - ref["Y"]), abs(got.pz - ref["Z"]))
    # p_x and the total error are monotone in t; p_z is monotone only when 2*gamma_z <= gamma
    ts = np.linspace(0, 10, 400)
    monotone = True
    for gamma, gamma_z in ((0.7, 0.2), (1.0, 0.5), (0.3, 0.0), (0.7, 0.4)):
        series = [noise.lindblad_pauli_probs(gamma, gamma_z, t) for t in ts]
        px = np.array([p.px for p in series])
        total = np.array([p.p for p in series])
        pz = np.array([p.pz for p in series])
        monotone &= bool(np.all(np.diff(px) >= 0) and np.all(np.diff(total) >= 0))
        if 2 * gamma_z <= gamma:
            monotone &= bool(np.all(np.diff(pz) >= -1e-15))
        else:
            monotone &= bool(pz.max() > 0.25 and np.all(pz <= pz.max()))
    limits = series[0].p == 0 and abs(noise.lindblad_pauli_probs(0.7, 0.4, 1e3).p - 0.75) < 1e-12
    ok = worst < 1e-12 and monotone and limits
    verdict(4, ok, f"max gap to master equation {worst:.2e}, monotone {monotone}, limits {limits}")


def test_monte_carlo_vs_oracle(verdict):
    t0 = time.perf_counter()
    parts, ok = [], True
    for p in (0.05, 0.1):
        est = harness.logical_error_rate(codes.rep3(), PauliChannel.bit_flip(p), trials=100_000, seed=1)
        ref = 3 * p * p * (1 - p) + p**3
        sigma = math.sqrt(ref * (1 - ref) / est.trials)
        ok &= abs(est.rate - ref) <= 3 * sigma
        parts.append(f"rep3 p={p}: {est.rate:.5f} vs {ref:.5f}")
    ch = PauliChannel.depolarizing(0.01)
    ref = lookup_failure_probability(codes.steane7(), ch, max_weight=2)
    est = harness.logical_error_rate(codes.steane7(), ch, trials=100_000, seed=1)
    ok &= abs(est.rate - ref) <= 3 * math.sqrt(ref * (1 - ref) / est.trials)
    parts.append(f"steane7: {est.rate:.5f} vs {ref:.5f}")
    elapsed = time.perf_counter() - t0
    verdict(5, ok and elapsed < 30, "; ".join(parts) + f", {elapsed:.1f}s")


def test_threshold_formula(verdict):
    ok = True
    for c, p, k in ((1e3, 1e-4, 4), (50, 0.01, 3), (10, 0.3, 3)):
        rates = harness.concatenation_curve(c, p, k).rates
        ok &= all(r == pytest.approx((c * p) ** (2**j) / c, rel=1e-12) for j, r in enumerate(rates))
        ok &= rates[0] == pytest.approx(p)
    fixed = harness.concatenation_curve(200, 1 / 200, 5).rates
    ok &= all(r == pytest.approx(1 / 200) for r in fixed)
    curve = harness.concatenation_curve(1e3, 1e-4, 2)
    ok &= curve.rates[1] == pytest.approx(1e-5) and curve.rates[2] == pytest.approx(1e-7)
    ok &= curve.threshold == pytest.approx(1e-3)
    verdict(6, ok, "level rates match (cp)^(2^k)/c, cp=1 is a fixed point")


def test_transversal_certification(verdict):
    t0 = time.perf_counter()
    steane = codes.steane7()
    expected = {"X": "X", "Z": "Z", "H": "H", "P": "PDG", "CNOT": "CNOT(0,1)"}
    got = {g: ftsim.transversal_validity(steane, g) for g in expected}
    steane_ok = all(r.valid and r.logical_gate == expected[g] for g, r in got.items())
    steane_ok &= got["H"].logical_action == {"X": "Z", "Z": "X"}
    steane_ok &= got["X"].logical_action == {"X": "X", "Z": "-Z"}
    five = ftsim.transversal_validity(codes.five_qubit(), "H").to_json()
    five_ok = not five["valid"] and five["witness"]["generator"] == "XZZXI"
    rows = ftsim.cnot_stabilizer_table()
    table_ok = len(rows) == 36 and all(r["exact"] and r["in_group"] for r in rows)
    elapsed = time.perf_counter() - t0
    ok = steane_ok and five_ok and table_ok and elapsed < 1
    verdict(7, ok, f"steane {steane_ok}, five_qubit H rejected {five_ok} (witness image "
                   f"{five['witness']['image']}), table {table_ok}, {elapsed:.2f}s")


def test_fault_tolerance_checker(verdict):
    fan = ftsim.check_fault_tolerance(ftsim.fanout_copy_circuit())
    pair = ftsim.check_fault_tolerance(ftsim.pairwise_copy_circuit())
    checker_ok = (not fan.passed and fan.worst.residual.weight == 4
                  and pair.passed and pair.worst.max_block_weight <= 1)
    res = ftsim.ft_steane_prep(np.random.default_rng(0))
    ref = densesim.tensor(codes.encode_zero(codes.steane7(), backend="densesim"), densesim.StateVector.zeros(5))
    fid = densesim.fidelity(res.tableau.to_statevector(), ref)
    scan = ftsim.prep_fault_scan(seed=0)
    bad = [r for r in scan.rows if not (r["rejected"] or (r["weight"] is not None and r["weight"] <= 1))]
    ok = checker_ok and abs(fid - 1) < 1e-10 and not bad
    detail = (f"fanout worst weight {fan.worst.residual.weight}, pairwise pass {pair.passed}, "
              f"noiseless prep fidelity {fid:.6f}, {len(bad)}/{scan.faults_checked} single faults leave "
              f"two data errors without rejection")
    if bad:
        detail += f" (e.g. {bad[0]['fault']}: X and Z parts on different qubits, one per sector)"
    verdict(8, ok, detail)


def test_surface_code_properties(verdict):
    t0 = time.perf_counter()
    single_ok = True
    for N in (2, 3, 4):
        lat = codes.SurfaceLattice(N)
        for q in range(lat.n):
            err = PauliTerm.single(lat.n, q, "X")
            match = decode.mwpm_decode(lat, lat.defects(err, "X"), "X")
            residual = err * match.correction
            single_ok &= not lat.defects(residual, "X")
            single_ok &= decode.classify_residual(lat, residual) is ResidualClass.SUCCESS
    rng = np.random.default_rng(9)
    brute_ok = True
    for _ in range(200):
        N = int(rng.integers(2, 6))
        lat = codes.SurfaceLattice(N)
        sector = "XZ"[rng.integers(2)]
        checks = lat.sector_checks(sector)
        k = int(rng.integers(0, min(10, len(checks)) + 1))
        picks = [checks[i] for i in rng.choice(len(checks), k, replace=False)]
        brute_ok &= decode.mwpm_decode(lat, picks, sector).weight == brute_force_matching(lat, tuple(sorted(picks)), sector)
    scan = harness.surface_scaling_scan([3, 4, 5], [0.05], trials=10_000, seed=0)
    rates = [r.estimate.rate for r in scan.rows]
    cis = [r.estimate.interval for r in scan.rows]
    mono = all(cis[i + 1][0] <= cis[i][1] for i in range(len(cis) - 1))
    chain_ok = True
    for N in (2, 3, 4, 5):
        lat = codes.SurfaceLattice(N)
        chains = [PauliTerm.from_support(lat.n, [lat.h(r, c) for r in range(N + 1)], "X") for c in range(N)]
        chains += [PauliTerm.from_support(lat.n, [lat.h(r, c) for c in range(N)], "Z") for r in range(N + 1)]
        for a in lat.cells():
            for b in lat.cells():
                edges = set(lat.boundary_path(a, "X")) ^ set(lat.path(a, b, "X")) ^ set(lat.boundary_path(b, "X"))
                chains.append(PauliTerm.from_support(lat.n, sorted(edges), "X"))
        chain_ok &= all(commutes(ch, s) for ch in chains for s in lat.stabilizers)
    elapsed = time.perf_counter() - t0
    ok = single_ok and brute_ok and mono and chain_ok and elapsed < 120
    verdict(9, ok, f"single errors {single_ok}, brute force {brute_ok}, rates N=3,4,5 "
                   f"{', '.join(f'{r:.4f}' for r in rates)}, chains commute {chain_ok}, {elapsed:.1f}s")


def test_subsystem_codes(verdict):
    sub = codes.bacon_shor(3, 3)
    rng = np.random.default_rng(10)
    needed = sorted({g for w in sub.witnesses for g in w})
    base = codes.encode_zero(sub, rng=rng)
    agree = 0
    for _ in range(1000):
        err = PauliTerm.single(sub.n, int(rng.integers(sub.n)), "XYZ"[rng.integers(3)])
        st = base.copy().apply_pauli(err)
        order = [int(g) for g in rng.permutation(needed)]
        agree += decode.baconshor_syndrome(st, sub, rng, order) == decode.syndrome_of(sub, err)
    witness_ok = True
    for i, s in enumerate(sub.stabilizers):
        prod = PauliTerm.identity(sub.n)
        for g in codes.stabilizer_gauge_decomposition(sub, i):
            prod = prod * g
        witness_ok &= prod == s
    verdict(10, agree == 1000 and witness_ok, f"{agree}/1000 gauge syndromes agree, witness products exact {witness_ok}")


def test_loss_identities(verdict):
    worst = 0.0
    for N in (2, 3, 4):
        zero, one = codes.parity_block_states(N)
        zero_s, one_s = codes.parity_block_states(N - 1)
        for start, (after0, after1) in ((zero, (zero_s, one_s)), (one, (one_s, zero_s))):
            for bit, target in ((0, after0), (1, after1)):
                red = codes.parity_loss_reduce(start, [N], N - 1, bit)
                worst = max(worst, float(np.max(np.abs(red.state.amps - target.amps))))
    verdict(11, worst < 1e-10, f"max amplitude error {worst:.2e} for N=2,3,4")


def test_reproducibility(verdict):
    def run(*argv):
        out = io.StringIO()
        assert cli.main(list(argv), out=out) == 0
        return out.getvalue()

    rate = ["rate", "--code", "steane7", "--channel", "depolarizing", "--p", "0.05", "--trials", "20000",
            "--seed", "42", "--format", "csv"]
    scan = ["scan", "--N", "3", "4", "--p", "0.03", "0.08", "--trials", "6000", "--seed", "42", "--format", "csv"]
    same = True
    for argv in (rate, scan):
        outs = {run(*argv, "--workers", str(w)) for w in (1, 2, 4)}
        same &= len(outs) == 1
    rows = list(csv.DictReader(io.StringIO(run(*scan, "--workers", "1"))))
    verdict(12, same and len(rows) == 4, f"CSV byte-identical across 1, 2 and 4 workers: {same}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
