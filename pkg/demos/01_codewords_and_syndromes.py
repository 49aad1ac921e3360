"""
Codewords and syndromes
=======================

Build logical states by projecting onto the stabilizer group, then watch
single-qubit errors light up distinct syndrome patterns.
"""
import numpy as np

from qeclab import codes, decode, densesim
from qeclab.pauli import PauliTerm

# %% Steane |0>_L is an equal superposition of the 8 even-weight Hamming codewords
steane = codes.steane7()
zero = densesim.project_onto_stabilizers(densesim.StateVector.zeros(7),
                                         list(steane.stabilizers) + list(steane.logical_z))
for label, amp in zero.dump():
    print(label, f"{amp.real:+.4f}")

# %% The five-qubit code needs signs as well as magnitudes
five = codes.five_qubit()
zero5 = densesim.project_onto_stabilizers(densesim.StateVector.zeros(5),
                                          list(five.stabilizers) + list(five.logical_z)).canonical_phase()
print(len(zero5.dump()), "terms; signs:", "".join("+" if a.real > 0 else "-" for _, a in zero5.dump()))

# %% Every single X, Y or Z on the Steane block gives its own syndrome
table = decode.build_lookup(steane)
for q in range(7):
    row = [str(decode.syndrome_of(steane, PauliTerm.single(7, q, a))) for a in "XYZ"]
    print(f"qubit {q + 1}: X {row[0]}  Y {row[1]}  Z {row[2]}")

# %% Measuring the syndrome on a noisy state recovers the same bits
rng = np.random.default_rng(7)
state = codes.encode_zero(steane, rng=rng)
error = PauliTerm.single(7, 4, "Y")
state.apply_pauli(error)
record, _ = decode.measure_syndrome(state, steane, rng)
correction = table.correction(record.bits)
print("measured", record, "-> correction", correction,
      "->", decode.classify_residual(steane, error * correction).value)
