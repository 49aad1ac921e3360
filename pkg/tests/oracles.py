"""Independent reference computations shared by several test modules."""
import itertools
import math
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from qeclab import decode
from qeclab.decode import ResidualClass
from qeclab.pauli import PauliTerm, parse, to_matrix

SIGMA = {a: to_matrix(parse(a)) for a in "IXYZ"}


def lindblad_pauli_weights(gamma, gamma_z, t):
    """Pauli weights from the matrix exponential of the single-qubit Lindblad superoperator.

    Jump operators: sqrt(gamma) sigma-, sqrt(gamma) sigma+, sqrt(gamma_z) Z.
    """
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    jumps = [np.sqrt(gamma) * lower, np.sqrt(gamma) * lower.T, np.sqrt(gamma_z) * SIGMA["Z"]]
    eye = np.eye(2)
    sup = np.zeros((4, 4), dtype=complex)
    for L in jumps:
        LdL = L.conj().T @ L
        sup += np.kron(L.conj(), L) - 0.5 * np.kron(eye, LdL) - 0.5 * np.kron(LdL.T, eye)
    prop = expm(sup * t)

    def evolve(rho):
        return (prop @ rho.reshape(-1, order="F")).reshape(2, 2, order="F")

    lam = {q: np.trace(SIGMA[q] @ evolve(SIGMA[q])).real / 2 for q in "IXYZ"}
    sign = {(k, q): 1 if k in ("I", q) or q == "I" else -1 for k in "IXYZ" for q in "IXYZ"}
    return {k: sum(sign[k, q] * lam[q] for q in "IXYZ") / 4 for k in "XYZ"}


def brute_force_matching(lattice, defects, sector):
    """Exhaustive minimum over pairings where any defect may go to the boundary."""

    @lru_cache(maxsize=None)
    def best(rest):
        if not rest:
            return 0
        a, others = rest[0], rest[1:]
        cost = lattice.boundary_distance(a, sector) + best(others)
        for i, b in enumerate(others):
            cost = min(cost, lattice.distance(a, b) + best(others[:i] + others[i + 1:]))
        return cost

    return best(tuple(defects))


def lookup_failure_probability(code, channel, max_weight=None):
    """Sum of P(E) over failing Paulis up to max_weight, via the object-level decode path."""
    table = decode.build_lookup(code, complete=True)
    probs = {"X": channel.px, "Y": channel.py, "Z": channel.pz}
    idle = 1 - channel.p
    limit = code.n if max_weight is None else max_weight
    total = 0.0
    for w in range(1, limit + 1):
        for qs in itertools.combinations(range(code.n), w):
            for letters in itertools.product("XYZ", repeat=w):
                pr = idle ** (code.n - w) * math.prod(probs[a] for a in letters)
                if pr == 0:
                    continue
                err = PauliTerm.identity(code.n)
                for q, a in zip(qs, letters):
                    err = err * PauliTerm.single(code.n, q, a)
                if decode.correct_error(code, table, err)[2] is ResidualClass.LOGICAL_FAILURE:
                    total += pr
    return total
