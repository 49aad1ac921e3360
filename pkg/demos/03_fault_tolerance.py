"""
Fault propagation and fault-tolerant preparation
================================================

Compare a fan-out copy circuit with the pairwise version, certify transversal
gates on the Steane code and push single faults through the cat-state
preparation of |0>_L.
"""
from collections import Counter
from pathlib import Path

import numpy as np

from qeclab import codes, ftsim

here = Path(__file__).parent

# %% One control driving three targets spreads a single X over four qubits
for name in ("fanout_copy.txt", "pairwise_copy.txt"):
    circuit = ftsim.parse_circuit((here / "circuits" / name).read_text())
    report = ftsim.check_fault_tolerance(circuit)
    w = report.worst
    print(f"{name:<18} pass={report.passed} worst={w.fault} residual={w.residual} blocks={w.block_weights}")

# %% Bitwise gates on the Steane code and the logical operation they perform
for gate in ftsim.TRANSVERSAL_GATES:
    res = ftsim.transversal_validity(codes.steane7(), gate)
    print(f"{gate:<4} valid={res.valid} logical={res.logical_gate} action={res.logical_action}")
print(ftsim.transversal_validity(codes.five_qubit(), "H").to_json()["witness"])

# %% Noiseless preparation followed by every single injected fault
res = ftsim.ft_steane_prep(np.random.default_rng(0))
print("locations:", res.locations, "signature:", res.data_signature())
scan = ftsim.prep_fault_scan(seed=0)
print(scan.to_json())
print("residual weights:", Counter(r["weight"] for r in scan.rows))
print("two-error cases:", [r["fault"] for r in scan.rows if r["weight"] == 2])
