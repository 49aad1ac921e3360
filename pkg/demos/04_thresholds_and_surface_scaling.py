"""
Logical error rates, concatenation and surface scaling
======================================================

Sampled logical error rates agree with exact counting; concatenation and the
planar surface code both suppress errors once the physical rate is small.
"""
from qeclab import codes, harness
from qeclab.noise import PauliChannel

# %% Repetition code against the closed form
for p in (0.01, 0.05, 0.1):
    est = harness.logical_error_rate(codes.rep3(), PauliChannel.bit_flip(p), trials=50_000, seed=1)
    print(f"p={p:<5} sampled={est.rate:.5f} exact={harness.rep3_failure_probability(p):.5f}")

# %% Steane code under depolarizing noise
ch = PauliChannel.depolarizing(0.01)
est = harness.logical_error_rate(codes.steane7(), ch, trials=50_000, seed=1)
print("steane7:", est.to_json(), "enumerated:", harness.enumerated_failure_probability(codes.steane7(), ch))

# %% Concatenation below and above 1/c
for p in (5e-4, 1e-3, 2e-3):
    print(p, harness.concatenation_curve(1e3, p, 3).rates)

# %% Larger surfaces help once p is well below the crossing
scan = harness.surface_scaling_scan([3, 5, 7], [0.02, 0.05, 0.12], trials=5000, seed=0)
print(scan.to_csv())
for line in scan.diagnostics:
    print("note:", line)
