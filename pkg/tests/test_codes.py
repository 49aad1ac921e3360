import json

import numpy as np
import pytest

from qeclab import codes, densesim
from qeclab.codes import CodeError
from qeclab.pauli import PauliTerm, commutes, parse
from qeclab.tableau import Membership, group_contains

FIXED = ["rep3", "shor9", "steane7", "five_qubit", "detect4"]


class TestCatalog:
    @pytest.mark.parametrize("name,nkd", [("rep3", (3, 1, 3)), ("shor9", (9, 1, 3)), ("steane7", (7, 1, 3)),
                                          ("five_qubit", (5, 1, 3)), ("detect4", (4, 2, 2)),
                                          ("bacon_shor(3,3)", (9, 1, 3)), ("surface(3)", (18, 1, 3))])
    def test_parameters(self, name, nkd):
        code = codes.builtin(name)
        assert (code.n, code.k, code.d) == nkd
        code.validate()

    def test_eight_families(self):
        assert len(codes.FAMILIES) == 8

    def test_unknown(self):
        with pytest.raises(CodeError):
            codes.builtin("nosuch")
        with pytest.raises(CodeError):
            codes.builtin("steane7", 3)
        with pytest.raises(CodeError):
            codes.builtin("bacon_shor", 3)

    def test_steane_generators_verbatim(self):
        got = [str(s) for s in codes.steane7().stabilizers]
        assert got == ["IIIXXXX", "XIXIXIX", "IXXIIXX", "IIIZZZZ", "ZIZIZIZ", "IZZIIZZ"]

    def test_catalog_json(self):
        data = json.loads(codes.catalog_json(codes.five_qubit()))
        assert data["stabilizers"][0] == "+XZZXI"
        assert data["flags"]["css"] is False

    def test_flags(self):
        assert codes.shor9().degenerate
        assert codes.detect4().detection_only
        assert codes.rep3().error_types == "X"


class TestDistance:
    @pytest.mark.parametrize("name", ["shor9", "steane7", "five_qubit"])
    def test_no_logical_below_distance(self, name):
        code = codes.builtin(name)
        assert codes.low_weight_logicals(code, code.d - 1) == []
        assert codes.low_weight_logicals(code, code.d)

    def test_rep3_bit_flip_distance(self):
        code = codes.rep3()
        assert codes.low_weight_logicals(code, 2) == []
        assert codes.low_weight_logicals(code, 3, "X") == [parse("XXX")]


class TestSteaneFix:
    @pytest.mark.parametrize("q", range(7))
    def test_fix_qubit_inverts_single_z(self, q):
        k = codes.steane7().stabilizers[:3]
        z = PauliTerm.single(7, q, "Z")
        bits = [int(not commutes(z, s)) for s in k]
        assert codes.steane_fix_qubit(*bits) == q + 1

    def test_no_fix_when_clean(self):
        assert codes.steane_fix_qubit(0, 0, 0) == 0


class TestEncoding:
    def test_tableau_and_dense_agree(self, rng):
        for name in ["steane7", "five_qubit", "shor9"]:
            code = codes.builtin(name)
            t = codes.encode_zero(code, rng=rng)
            sv = codes.encode_zero(code, backend="densesim", rng=rng)
            assert densesim.fidelity(t.to_statevector(), sv) == pytest.approx(1)

    def test_encoded_state_is_stabilized(self, rng):
        code = codes.steane7()
        t = codes.encode_zero(code, rng=rng)
        for s in code.stabilizers + code.logical_z:
            assert t.contains(s) is Membership.IN_GROUP_PLUS

    def test_frame_correction(self):
        gens = codes.steane7().stabilizers
        e = codes.frame_correction(gens, [1, 0, 0, 0, 0, 0])
        assert [int(not commutes(e, g)) for g in gens] == [1, 0, 0, 0, 0, 0]
        assert e.weight == 1


class TestBaconShor:
    def test_layout(self):
        bs = codes.bacon_shor(3, 3)
        assert bs.qubit(1, 2) == 5
        assert len(bs.gauge) == 12
        assert len(bs.stabilizers) == 4

    def test_witness_products(self):
        bs = codes.bacon_shor(3, 4)
        for i, s in enumerate(bs.stabilizers):
            prod = codes.stabilizer_gauge_decomposition(bs, i)
            from qeclab.pauli import product
            assert product(prod, bs.n) == s

    def test_gauge_group_non_abelian(self):
        bs = codes.bacon_shor(3, 3)
        assert any(not commutes(a, b) for a in bs.gauge for b in bs.gauge)

    def test_gauge_commutes_with_stabilizers(self):
        bs = codes.bacon_shor(3, 3)
        assert all(commutes(g, s) for g in bs.gauge for s in bs.stabilizers)


class TestSurface:
    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_counts(self, N):
        lat = codes.surface(N)
        assert lat.n == 2 * N * N
        assert len(lat.plaquettes) == N * N
        assert len(lat.vertex_checks) == N * N - 1
        lat.validate()

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_boundary_chains_commute(self, N):
        lat = codes.surface(N)
        for sector in "XZ":
            for i in range(N):
                chain = lat.boundary_chain(i, sector)
                assert all(commutes(chain, s) for s in lat.stabilizers)

    def test_single_error_defects(self):
        lat = codes.surface(3)
        assert lat.defects(PauliTerm.single(lat.n, lat.h(0, 1), "X")) == [(0, 1)]
        assert len(lat.defects(PauliTerm.single(lat.n, lat.v(1, 1), "X"))) == 2


class TestParityLoss:
    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_block_states_are_codewords(self, N):
        code = codes.parity_loss(N)
        zero, one = codes.parity_block_states(N)
        for s in code.stabilizers:
            assert zero.expectation(s).real == pytest.approx(1)
        assert zero.expectation(code.logical_z[0]).real == pytest.approx(1)
        assert one.expectation(code.logical_z[0]).real == pytest.approx(-1)

    def test_single_qubit_block_cannot_shrink(self):
        zero, _ = codes.parity_block_states(2)
        reduced = codes.parity_loss_reduce(zero, 2, 1, 0)
        with pytest.raises(CodeError):
            codes.parity_loss_reduce(reduced.state, reduced.code, 0, 0)

    def test_two_block_distance(self):
        code = codes.parity_loss(3, 2)
        assert code.n == 6 and code.d == 2
        code.validate()
