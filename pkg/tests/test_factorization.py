import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lambertfact import qseries as qs
from lambertfact.arith import as_table, divisors, partition_p, resolve_function
from lambertfact.errors import DomainError, NonInvertibleError, SingularMatrixError
from lambertfact.factorization import (
    FactorMatrix,
    c_matrix,
    conv_forward,
    conv_forward_oracle,
    conv_inverse,
    deriv_inverse_t1,
    deriv_matrix,
    factored_series,
    hadamard_forward,
    hadamard_forward_oracle,
    hadamard_inverse,
    invert_lower_triangular,
    mixed_deriv_forward,
    mixed_deriv_inverse,
    mobius_matrix,
    partition_matrix,
    reconstruct_b,
    related_fact_matrix,
    s_base,
    s_base_combinatorial,
    s_value,
    stilde,
    tdiv_matrix,
)

phi = resolve_function("phi")
mu = resolve_function("mu")
delta1 = resolve_function("delta1")


def rows(M):
    return [list(M.row(n)) for n in range(M.start, M.stop)]


def assert_identity(M):
    assert M == FactorMatrix.identity(M.dim, M.start)


def test_first_derivative_table_forward(published):
    assert [list(r) for r in deriv_matrix(1, 12).dense()] == published["s_1"]


def test_first_derivative_table_inverse(published):
    assert [list(r) for r in deriv_inverse_t1(12).dense()] == published["s_1_inverse"]


def test_first_derivative_table_spot_values():
    M = deriv_matrix(1, 12)
    assert list(M.row(4)) == [-1, 2, -3, 4] + [0] * 8
    assert M[5, 2] == -4
    inv = deriv_inverse_t1(12)
    assert (inv[2, 1], inv[5, 2], inv[12, 12]) == (Fraction(-1, 2), Fraction(3, 5), Fraction(1, 12))


def test_tdiv_display():
    assert rows(tdiv_matrix(6)) == [
        [1, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [1, 1, 0, 1, 0, 0],
        [1, 0, 0, 0, 1, 0],
        [1, 1, 1, 0, 0, 1],
    ]
    assert rows(mobius_matrix(6))[5] == [1, -1, -1, 0, 0, 1]


def test_s_base_counts_distinct_partitions():
    S = s_base(22)
    for n in range(1, 23):
        for k in range(1, n + 1):
            assert S[n, k] == s_base_combinatorial(n, k) == s_value(n, k)
            assert S[n, k].denominator == 1
            assert abs(S[n, k]) <= partition_p(n)


def test_s_base_frozen_rows():
    # 6 = 5+1 = 4+2 = 3+2+1 in distinct parts, with one odd-length partition
    assert list(s_base(6).row(6)) == [0, 0, 1, -1, -1, 1]


def test_deriv_matrix_diagonals():
    assert deriv_matrix(1, 20).diagonal() == list(range(1, 21))
    M2 = deriv_matrix(2, 15)
    assert M2.start == 2
    assert M2.diagonal() == [n * (n - 1) for n in range(2, 16)]


def test_hadamard_with_unit_divisor_sum_is_s_base():
    assert hadamard_forward(delta1, 20) == s_base(20)


@pytest.mark.parametrize("f", ["id", "phi", "npow:2", "sigma1", "one"])
def test_hadamard_forward_matches_oracle(f):
    fn = resolve_function(f)
    assert hadamard_forward(fn, 16) == hadamard_forward_oracle(fn, 16)


def test_hadamard_inverse_values():
    inv = hadamard_inverse(lambda n: n, 10)
    assert inv[1, 1] == 1
    assert inv[2, 1] == Fraction(-2, 3)
    inv_phi = hadamard_inverse(phi, 5)
    assert inv_phi[3, 3] == Fraction(1, 3)


def test_hadamard_inverse_names_vanishing_divisor_sum():
    with pytest.raises(NonInvertibleError, match=r"f~\(2\)=0"):
        hadamard_inverse(mu, 8)


@pytest.mark.parametrize(
    "build, forward",
    [
        (lambda N: hadamard_inverse(lambda n: n, N), lambda N: hadamard_forward(lambda n: n, N)),
        (lambda N: conv_inverse(phi, N), lambda N: conv_forward(phi, N)),
        (lambda N: deriv_inverse_t1(N), lambda N: deriv_matrix(1, N)),
        (lambda N: mixed_deriv_inverse(2, N), lambda N: mixed_deriv_forward(2, N)),
        (lambda N: mobius_matrix(N), lambda N: tdiv_matrix(N)),
    ],
)
def test_closed_form_inverses_equal_substitution(build, forward):
    assert build(20) == invert_lower_triangular(forward(20))


def test_conv_forward_boundary_convention():
    assert conv_forward(phi, 20) == conv_forward_oracle(phi, 20)
    assert conv_forward(phi, 6)[1, 1] == phi(1)
    # g~(0) = 1 adds s_{n+1,k} to every entry and breaks the factorization
    literal = conv_forward(phi, 6, empty_divisor_sum=1, verify=False)
    assert literal[1, 1] == phi(1)
    assert literal[2, 1] == conv_forward_oracle(phi, 6)[2, 1] + s_value(3, 1)
    assert literal != conv_forward_oracle(phi, 6)


def test_conv_forward_falls_back_to_oracle(caplog):
    with caplog.at_level(logging.WARNING, logger="lambertfact"):
        M = conv_forward(phi, 8, empty_divisor_sum=1)
    assert M == conv_forward_oracle(phi, 8)
    assert "disagrees" in caplog.text


def test_conv_inverse_values_and_errors():
    assert conv_inverse(delta1, 6)[1, 1] == 1
    with pytest.raises(NonInvertibleError):
        conv_inverse(lambda n: 0 if n == 1 else 1, 6)


@pytest.mark.parametrize("f, g", [("delta1", "delta1"), ("mu", "phi"), ("id", "sigma1")])
def test_convolution_factorization(f, g):
    N = 20
    F = qs.lambert_gf(resolve_function(f), N + 1)
    G = qs.lambert_gf(resolve_function(g), N + 1)
    lhs = (F * G).shift(-1)
    rhs = factored_series(conv_forward(resolve_function(g), N), resolve_function(f))
    assert lhs == rhs


def test_stilde():
    assert stilde(delta1, 12) == s_base(12)
    assert stilde(mu, 4)[1, 1] == 1
    sig = as_table(resolve_function("sigma1"), 30)
    conv = [sum(sig[d] * mu(n // d) for d in divisors(n)) for n in range(1, 31)]
    assert qs.lambert_gf(conv, 30) == factored_series(stilde(mu, 30), sig)


def test_mixed_inverse_values():
    inv = mixed_deriv_inverse(2, 6)
    assert inv[1, 1] == 1
    assert inv[2, 1] == Fraction(-1, 2)
    assert_identity(mixed_deriv_forward(3, 10) @ mixed_deriv_inverse(3, 10, verify=False))


def test_c_matrix_values_and_derivation():
    C = c_matrix(12)
    assert C[1, 1] == 1
    assert C[2, 1] == 1
    assert C == mobius_matrix(12) @ partition_matrix(12) @ tdiv_matrix(12)


@pytest.mark.parametrize(
    "name, expected",
    [("delta1", lambda n: 1), ("phi", lambda n: n), ("mu", lambda n: int(n == 1))],
)
def test_reconstruct_b(name, expected):
    b = reconstruct_b(resolve_function(name), 30)
    assert b.values() == [expected(n) for n in range(1, 31)]


def test_related_factorization_identity_block():
    assert related_fact_matrix(FactorMatrix.identity(10), 10) == s_base(10)
    assert related_fact_matrix(tdiv_matrix(20), 20) == stilde(lambda n: 1, 20)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_related_factorization_random(data):
    N = 15
    ints = st.integers(-5, 5)
    b = [[data.draw(ints) for _ in range(n)] for n in range(1, N + 1)]
    a = [data.draw(ints) for _ in range(N)]
    B = FactorMatrix(b)
    lhs = qs.lambert_gf(B.apply(a), N)
    assert lhs == factored_series(related_fact_matrix(B, N), a)


def test_singular_matrix_reports_row():
    M = FactorMatrix([[1], [2, 0], [1, 1, 1]])
    with pytest.raises(SingularMatrixError) as err:
        invert_lower_triangular(M)
    assert err.value.row == 2


def test_matmul_requires_matching_shape():
    with pytest.raises(DomainError):
        deriv_matrix(2, 6) @ s_base(5)


def test_serialization_round_trip():
    M = deriv_inverse_t1(8)
    assert FactorMatrix.from_json(M.to_json()) == M
    data = M.to_dict(kind="deriv-inv")
    assert data["kind"] == "deriv-inv" and data["start"] == 1 and data["dim"] == 8
    assert data["entries"][1][:2] == ["-1/2", "1/2"]
    csv_text = deriv_matrix(2, 4).to_csv()
    assert csv_text.splitlines()[0] == "n,2,3,4"


def test_max_bits_tracks_entry_size():
    assert FactorMatrix([[1], [Fraction(1, 1024), 3]]).max_bits() >= 10
