import json

import numpy as np
import pytest

from qeclab import codes, decode, densesim
from qeclab.decode import DecodeError, Detection, ResidualClass
from qeclab.pauli import PauliTerm, parse
from qeclab.tableau import StabilizerTableau

from oracles import brute_force_matching


class TestRep3Table:
    def test_rows(self):
        table = decode.build_lookup(codes.rep3())
        assert table.rows() == [("00", "III"), ("01", "IIX"), ("10", "IXI"), ("11", "XII")]

    @pytest.mark.parametrize("err,bits", [("III", "00"), ("XII", "11"), ("IXI", "10"), ("IIX", "01")])
    def test_syndromes(self, err, bits):
        assert str(decode.syndrome_of(codes.rep3(), parse(err))) == bits

    def test_double_flip_is_logical_failure(self):
        code = codes.rep3()
        table = decode.build_lookup(code)
        syn, corr, cls = decode.correct_error(code, table, parse("XXI"))
        assert str(syn) == "01" and str(corr) == "IIX"
        assert cls is ResidualClass.LOGICAL_FAILURE

    def test_unknown_syndrome(self):
        table = decode.build_lookup(codes.rep3())
        with pytest.raises(DecodeError):
            table.correction((1, 1, 1))


class TestDetection:
    @pytest.mark.parametrize("err,bits", [("XIII", "10"), ("ZIII", "01"), ("YIII", "11"), ("IIII", "00")])
    def test_detect4_patterns(self, err, bits):
        code = codes.detect4()
        syn = decode.syndrome_of(code, parse(err))
        assert str(syn) == bits
        expected = Detection.CLEAN if bits == "00" else Detection.DETECTED
        assert decode.detect_only(code, syn) is expected

    def test_lookup_refused(self):
        with pytest.raises(DecodeError):
            decode.build_lookup(codes.detect4())

    def test_length_mismatch(self):
        with pytest.raises(DecodeError):
            decode.detect_only(codes.detect4(), (0,))


class TestLookupTables:
    def test_steane_single_errors_distinct(self):
        code = codes.steane7()
        errs = [PauliTerm(7)] + [PauliTerm.single(7, q, l) for q in range(7) for l in "XYZ"]
        assert len({decode.syndrome_of(code, e).bits for e in errs}) == 22

    @pytest.mark.parametrize("name", ["steane7", "five_qubit", "shor9"])
    def test_corrects_every_single_error(self, name):
        code = codes.builtin(name)
        table = decode.build_lookup(code)
        assert not table.saturated
        for q in range(code.n):
            for l in "XYZ":
                _, _, cls = decode.correct_error(code, table, PauliTerm.single(code.n, q, l))
                assert cls is ResidualClass.SUCCESS

    def test_shor_degenerate_phase_flips(self):
        code = codes.shor9()
        a, b = PauliTerm.single(9, 0, "Z"), PauliTerm.single(9, 1, "Z")
        assert decode.syndrome_of(code, a) == decode.syndrome_of(code, b)
        assert decode.classify_residual(code, a * b) is ResidualClass.SUCCESS

    def test_complete_table(self):
        table = decode.build_lookup(codes.steane7(), complete=True)
        assert table.complete and len(table) == 64

    def test_classify_rejects_nonzero_syndrome(self):
        with pytest.raises(DecodeError):
            decode.classify_residual(codes.steane7(), parse("XIIIIII"))


class TestMeasuredSyndrome:
    @pytest.mark.parametrize("backend", ["tableau", "densesim"])
    def test_matches_ideal(self, backend, rng):
        code = codes.steane7()
        for _ in range(5):
            q, l = int(rng.integers(7)), "XYZ"[rng.integers(3)]
            err = PauliTerm.single(7, q, l)
            st = codes.encode_zero(code, backend=backend, rng=rng)
            if backend == "tableau":
                st.apply_pauli(err)
            else:
                st = densesim.apply_pauli(st, err)
            rec, _ = decode.measure_syndrome(st, code, rng)
            assert rec == decode.syndrome_of(code, err)

    def test_size_mismatch(self):
        with pytest.raises(DecodeError):
            decode.measure_syndrome(StabilizerTableau.computational_state(3), codes.steane7())


class TestBaconShor:
    def test_gauge_syndrome_matches_direct(self, rng):
        sub = codes.bacon_shor(3, 3)
        needed = sorted({g for w in sub.witnesses for g in w})
        for q in range(sub.n):
            for l in "XZ":
                err = PauliTerm.single(sub.n, q, l)
                direct = decode.syndrome_of(sub, err)
                for _ in range(2):
                    st = codes.encode_zero(sub, rng=rng)
                    st.apply_pauli(err)
                    order = list(rng.permutation(needed))
                    assert decode.baconshor_syndrome(st, sub, rng, order) == direct

    def test_incomplete_order(self, rng):
        sub = codes.bacon_shor(3, 3)
        with pytest.raises(DecodeError):
            decode.baconshor_syndrome(codes.encode_zero(sub), sub, rng, [0])


class TestMatching:
    @pytest.mark.parametrize("N", [2, 3, 4])
    @pytest.mark.parametrize("sector", ["X", "Z"])
    def test_single_errors_cleared(self, N, sector):
        lat = codes.SurfaceLattice(N)
        for q in range(lat.n):
            err = PauliTerm.single(lat.n, q, sector)
            match, cls = decode.surface_correct(lat, err, sector)
            assert not lat.defects(err * match.correction, sector)
            if N >= 3:
                assert cls is ResidualClass.SUCCESS

    @pytest.mark.parametrize("sector", ["X", "Z"])
    def test_weight_matches_brute_force(self, sector, rng):
        for _ in range(100):
            N = int(rng.integers(2, 6))
            lat = codes.SurfaceLattice(N)
            checks = lat.sector_checks(sector)
            k = int(rng.integers(0, min(8, len(checks)) + 1))
            picks = [checks[i] for i in rng.choice(len(checks), k, replace=False)]
            res = decode.mwpm_decode(lat, picks, sector)
            assert res.weight == brute_force_matching(lat, tuple(sorted(picks)), sector)
            assert res.correction.weight <= res.weight
            assert sorted(lat.defects(res.correction, sector)) == sorted(picks)

    def test_bad_sector(self):
        with pytest.raises(DecodeError):
            decode.mwpm_decode(codes.SurfaceLattice(3), [], "Y")


def test_trace_line():
    line = decode.trace_line(4, (1, 0), parse("IXI"), ResidualClass.SUCCESS)
    assert json.loads(line) == {"trial": 4, "syndrome_bits": "10", "correction": "IXI", "outcome": "success"}
