"""
Coherent rotations and decoherence
==================================

A small over-rotation on every qubit of the repetition code is digitized by
the syndrome measurement.  The Lindblad model gives the Pauli weights used in
the Monte-Carlo runs.
"""
import numpy as np

from qeclab import noise

# %% Branch probabilities from the dense syndrome circuit against the trig forms
for eps in (0.01, 0.05, 0.1, 0.3):
    rep = noise.digitize_coherent_rep3(eps)
    print(f"eps={eps:<5} P(no detection)={rep.p_no_detection:.6f} "
          f"F={rep.f_no_detection:.8f} circuit gap={rep.max_deviation():.1e} advantage={rep.advantage:+.2e}")

# %% The leading-order advantage changes sign near eps^2 = 1/3
grid = np.linspace(0.4, 0.8, 9)
for eps in grid:
    print(f"eps^2={eps ** 2:.3f}  leading-order advantage={noise.leading_order_advantage(eps):+.4f}")

# %% Pauli weights after free evolution
for t in (0.1, 1.0, 5.0):
    p = noise.lindblad_pauli_probs(gamma=0.5, gamma_z=0.1, t=t)
    print(f"t={t:<4} px=py={p.px:.4f} pz={p.pz:.4f} total={p.p:.4f}")
