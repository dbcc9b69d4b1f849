import cmath

import pytest

from oracles import brute_trace_F, brute_trace_H
from hypexp.cyclo import RouCounts, complex_embed, to_exact_integer
from hypexp.field import build_field
from hypexp.sheaf import (SheafParams, ZeroPoint, build_a0_table, build_b0_table,
                          build_convolution_table, build_f_table, build_h_table,
                          convolution_trace, frobenius_trace_sequence,
                          kloosterman_A0_trace, kloosterman_B0_trace,
                          normalized_trace, table_from_csv, table_to_csv,
                          trace_F, trace_H)

P234 = SheafParams(3, 23, 4)
P52 = SheafParams(3, 5, 2)


def test_sheaf_params_validation():
    with pytest.raises(ValueError):
        SheafParams(3, 4, 23)          # N > D violated
    with pytest.raises(ValueError):
        SheafParams(3, 22, 4)          # gcd(N, D) != 1
    with pytest.raises(ValueError):
        SheafParams(3, 24, 5)          # p | N
    with pytest.raises(ValueError):
        SheafParams(2, 23, 4)          # p | D


def test_trace_H_paper_values():
    K3 = build_field(3, 1)
    v = trace_H(K3, P234, K3.from_int(-1))
    assert v.counts == (2, 2, 2)
    assert to_exact_integer(v) == 0
    K9 = build_field(3, 2)
    assert to_exact_integer(trace_H(K9, P234, K9.from_int(-1))) == -18


def test_trace_H_against_brute_force():
    for r in (1, 2):
        K = build_field(3, r)
        for P in (P234, P52):
            for t in K.units():
                assert trace_H(K, P, t) == brute_trace_H(K, P, t)
    K27 = build_field(3, 3)
    for t in (1, 2, 5, 13):
        assert trace_H(K27, P234, t) == brute_trace_H(K27, P234, t)


def test_trace_H_psi_rescaling_against_brute_force():
    K9 = build_field(3, 2)
    for t in (1, 2, 7):
        assert trace_H(K9, P52, t, psi_mult=2) == brute_trace_H(K9, P52, t, psi_mult=2)


def test_trace_H_rejects_zero():
    K = build_field(3, 2)
    with pytest.raises(ZeroPoint):
        trace_H(K, P234, 0)


def test_trace_F_against_brute_force():
    for r in (1, 2):
        K = build_field(3, r)
        for u in K.elements():
            assert trace_F(K, P234, u) == brute_trace_F(K, P234, u)


def test_pullback_identity():
    K27 = build_field(3, 3)
    for u in K27.units():
        assert trace_F(K27, P234, u) == trace_H(K27, P234, K27.pow_el(u, P234.N))


def test_rationality_gf27():
    K27 = build_field(3, 3)
    for t in K27.units():
        to_exact_integer(trace_H(K27, P234, t))   # must not raise


def test_weight_bound():
    K9 = build_field(3, 2)
    for t in K9.units():
        z, _ = complex_embed(trace_H(K9, P234, t))
        assert abs(z) <= P234.N * K9.q + 1e-9


def test_normalized_trace():
    assert normalized_trace(RouCounts(3, (-18, 0, 0)), 9, 1) == -2
    assert normalized_trace(RouCounts(3, (0, 0, 0)), 9, 1) == 0
    v = RouCounts(3, (7 * 3 ** 7, 0, 0))
    assert normalized_trace(v, 3 ** 7, 1) == 7


def test_frobenius_sequence_paper():
    seq = frobenius_trace_sequence(P234, -1, 7)
    assert [int(x) for x in seq] == [0, -2, 0, 2, 0, -2, 7]
    assert all(x.denominator == 1 for x in seq)


def test_frobenius_sequence_t1_integrality():
    seq = frobenius_trace_sequence(P234, 1, 3)
    assert all(x.denominator == 1 for x in seq)
    # frozen regression values, first computed by this engine and
    # cross-checked against the brute-force oracle at k = 1, 2
    K3, K9 = build_field(3, 1), build_field(3, 2)
    assert to_exact_integer(brute_trace_H(K3, P234, 1)) == int(seq[0]) * 3
    assert to_exact_integer(brute_trace_H(K9, P234, 1)) == int(seq[1]) * 9


def test_frobenius_sequence_edges():
    assert frobenius_trace_sequence(P234, -1, 0) == []
    with pytest.raises(ZeroPoint):
        frobenius_trace_sequence(P234, 3, 5)


def test_kloosterman_a0():
    K9 = build_field(3, 2)
    # N = 1: one-term fiber
    for t in K9.units():
        v = kloosterman_A0_trace(K9, 1, t)
        assert sum(v.counts) == 1
        assert v.counts[K9.trace(t)] == 1
    # N = 23 over GF(3): y^23 = y cycles, fiber of 1 is {1}, value psi(2)
    K3 = build_field(3, 1)
    assert kloosterman_A0_trace(K3, 23, 1) == RouCounts.single(3, 2)
    # reindexing identity: sum over t of A0(t) = -1
    for N in (2, 5, 23):
        acc = RouCounts.zero(3)
        for t in K9.units():
            acc = acc + kloosterman_A0_trace(K9, N, t)
        assert to_exact_integer(acc) == -1
    with pytest.raises(ZeroPoint):
        kloosterman_A0_trace(K9, 5, 0)


def test_kloosterman_b0():
    K9 = build_field(3, 2)
    # D = 1: orthogonality collapses the sum
    assert to_exact_integer(kloosterman_B0_trace(K9, 1, 1)) == -9
    for t in (2, 3, 7):
        assert kloosterman_B0_trace(K9, 1, t).is_zero()
    # GF(3), D=2, t=1: -(psi(0) + psi(-1) + psi(0))
    K3 = build_field(3, 1)
    assert kloosterman_B0_trace(K3, 2, 1) == RouCounts(3, (-2, 0, -1))
    # Weil bound for the one-variable sum
    for t in K9.units():
        z, _ = complex_embed(kloosterman_B0_trace(K9, 2, t))
        assert abs(z) <= (2 - 1) * K9.q ** 0.5 + 1e-9


def test_convolution_identity_gf81():
    K81 = build_field(3, 4)
    for u in K81.units():
        assert convolution_trace(K81, P52, u) == trace_H(K81, P52, u)


def test_convolution_identity_gf27():
    K27 = build_field(3, 3)
    for u in K27.units():
        assert convolution_trace(K27, P234, u) == trace_H(K27, P234, u)


def test_convolution_empty_fiber_points():
    # points whose N-th root fiber is empty still satisfy the identity
    K9 = build_field(3, 2)
    P = SheafParams(3, 8, 5)     # gcd(8, q-1) = 8, so most fibers are empty
    empty = [t for t in K9.units() if not [y for y in K9.units()
                                           if K9.pow_el(y, P.N) == t]]
    assert len(empty) == 7
    for u in empty:
        assert convolution_trace(K9, P, u) == trace_H(K9, P, u)


def test_tables_and_csv_roundtrip():
    K9 = build_field(3, 2)
    for build, kind in ((build_h_table, "H"), (build_f_table, "F"),
                        (lambda K, P: build_a0_table(K, P.N), "A0"),
                        (lambda K, P: build_b0_table(K, P.D), "B0"),
                        (build_convolution_table, "convolution")):
        table = build(K9, P52)
        assert table.kind == kind
        assert table.is_complete()
        assert (0 in table.values) == (kind == "F")
        text = table_to_csv(table)
        back = table_from_csv(text)
        assert back.kind == table.kind
        assert back.values == table.values
        assert back.field == K9
