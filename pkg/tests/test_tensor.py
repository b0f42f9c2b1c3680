"""Order-3 tensors, the matrix multiplication tensor, restriction, slices."""

from fractions import Fraction

import numpy as np
import pytest

from trc.errors import DimensionMismatch, InvalidArguments
from trc.field import DEFAULT_PRIME, RATIONAL, Rng, gfp
from trc.rank_engine import SparseMatrix, rank_mod_q
from trc.tensor import (
    Decomposition,
    MatMulDescriptor,
    RankOneTerm,
    Subspace,
    Tensor3,
    contract,
    matmul_tensor,
    random_rank_r,
    restrict_a,
    slices_a,
    tensor_from_decomposition,
    tensor_from_slices,
    unfold_a,
    verify_decomposition,
)


def frac_matrix(rng, rows, cols, spread=9):
    return np.array(
        [[Fraction(rng.below(2 * spread + 1) - spread) for _ in range(cols)] for _ in range(rows)]
    )


def test_matmul_tensor_222():
    t = matmul_tensor(MatMulDescriptor(2, 2, 2))
    assert t.dims == (4, 4, 4)
    assert len(t.entries) == 8
    assert all(v == 1 for v in t.entries.values())


def test_matmul_tensor_111():
    t = matmul_tensor(MatMulDescriptor(1, 1, 1))
    assert t.dims == (1, 1, 1)
    assert t.entry(0, 0, 0) == 1


def test_matmul_tensor_221():
    t = matmul_tensor(MatMulDescriptor(2, 2, 1))
    assert t.dims == (4, 2, 2)
    assert len(t.entries) == 4
    # slices over the first factor are the 2x2 matrix units, one per (i,j)
    xs = slices_a(t)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=object)
            unit[:] = Fraction(0)
            unit[j, i] = Fraction(1)
            assert np.array_equal(xs[i * 2 + j], unit)


def test_matmul_entry_rule():
    m, n, l = 2, 3, 2
    t = matmul_tensor(MatMulDescriptor(m, n, l))
    assert len(t.entries) == m * n * l
    for (a, b, c), v in t.entries.items():
        i, j = divmod(a, n)
        j2, k = divmod(b, l)
        k2, i2 = divmod(c, m)
        assert v == 1
        assert (i, j, k) == (i2, j2, k2)


def test_slices_reconstruction():
    rng = Rng(3)
    t, _ = random_rank_r((4, 3, 2), 3, RATIONAL, rng)
    assert tensor_from_slices(slices_a(t), RATIONAL) == t


def test_zero_tensor_slices():
    z = Tensor3((3, 2, 2), RATIONAL, {})
    assert all(np.all(x == 0) for x in slices_a(z))


def test_restrict_to_standard_basis():
    rng = Rng(5)
    t, _ = random_rank_r((5, 3, 3), 4, RATIONAL, rng)
    rows = [[Fraction(int(i == j)) for j in range(5)] for i in range(3)]
    r = restrict_a(t, Subspace(rows, RATIONAL))
    xs, ys = slices_a(t), slices_a(r)
    for i in range(3):
        assert np.array_equal(xs[i], ys[i])


def test_restrict_is_linear_in_rows():
    rng = Rng(6)
    t, _ = random_rank_r((4, 2, 2), 3, RATIONAL, rng)
    rows = [[Fraction(rng.below(7) - 3) for _ in range(4)] for _ in range(3)]
    try:
        w = Subspace(rows, RATIONAL)
    except InvalidArguments:
        pytest.skip("degenerate draw")
    scaled = Subspace([[2 * v for v in rows[0]]] + rows[1:], RATIONAL)
    a = slices_a(restrict_a(t, w))
    b = slices_a(restrict_a(t, scaled))
    assert np.array_equal(b[0], 2 * a[0])
    assert np.array_equal(b[1], a[1])


def test_restrict_dimension_mismatch():
    t = matmul_tensor(MatMulDescriptor(2, 2, 2))
    w = Subspace([[Fraction(int(i == j)) for j in range(3)] for i in range(2)], RATIONAL)
    with pytest.raises(DimensionMismatch):
        restrict_a(t, w)


def test_unfolding_has_rank_mn():
    # injectivity of T as a map out of the first factor's dual
    for m in range(1, 5):
        for n in range(1, 5):
            for l in range(1, 5):
                t = matmul_tensor(MatMulDescriptor(m, n, l))
                assert rank_mod_q(unfold_a(t), DEFAULT_PRIME) == m * n


def test_contract_second_factor_rank():
    # pairing the middle factor with a matrix of rank r leaves a map of
    # rank r*m out of the first factor
    rng = Rng(11)
    for m in range(1, 4):
        for n in range(1, 4):
            l = n
            for r in range(1, n + 1):
                alpha = np.zeros((n, l), dtype=object)
                alpha[:] = Fraction(0)
                for _ in range(r):
                    alpha += np.outer(
                        frac_matrix(rng, n, 1)[:, 0], frac_matrix(rng, l, 1)[:, 0]
                    )
                if np.linalg.matrix_rank(alpha.astype(float)) != r:
                    continue
                t = matmul_tensor(MatMulDescriptor(m, n, l))
                vec = [alpha[j, k] for j in range(n) for k in range(l)]
                got = rank_mod_q(contract(t, 1, vec), DEFAULT_PRIME)
                assert got == r * m


def test_random_rank_r_zero():
    t, d = random_rank_r((3, 2, 2), 0, RATIONAL, Rng(1))
    assert t.entries == {}
    assert d.terms == []
    assert verify_decomposition(t, d)


def test_random_rank_r_witness():
    for seed in range(5):
        t, d = random_rank_r((3, 2, 2), 1, RATIONAL, Rng(seed))
        assert verify_decomposition(t, d)
    t, d = random_rank_r((5, 4, 4), 5, gfp(101), Rng(8))
    assert verify_decomposition(t, d)


def test_verify_rejects_wrong_tensor():
    t, d = random_rank_r((3, 2, 2), 2, RATIONAL, Rng(2))
    other = t.add(tensor_from_decomposition(
        (3, 2, 2), Decomposition([RankOneTerm((1, 0, 0), (1, 0), (1, 0))], RATIONAL),
        RATIONAL))
    assert not verify_decomposition(other, d)


def test_verify_dimension_mismatch():
    t = Tensor3((3, 2, 2), RATIONAL, {})
    d = Decomposition([RankOneTerm((1, 1), (1, 0), (1, 0))], RATIONAL)
    with pytest.raises(DimensionMismatch):
        verify_decomposition(t, d)


def test_tensor_json_round_trip():
    rng = Rng(4)
    t, _ = random_rank_r((3, 2, 4), 2, RATIONAL, rng)
    t2 = Tensor3.from_json(t.to_json())
    assert t2 == t
    tg, _ = random_rank_r((3, 2, 2), 2, gfp(13), rng)
    assert Tensor3.from_json(tg.to_json()) == tg
    blob = t.to_json()
    assert blob["format"] == "tensor3-v1"
    assert blob["dims"] == [3, 2, 4]
    assert all(isinstance(e[3], str) for e in blob["entries"])


def test_decomposition_json_round_trip():
    _, d = random_rank_r((3, 2, 2), 3, RATIONAL, Rng(9))
    d2 = Decomposition.from_json(d.to_json())
    assert len(d2.terms) == 3
    assert all(
        (a.u, a.v, a.w) == (b.u, b.v, b.w) for a, b in zip(d.terms, d2.terms)
    )


def test_canonical_hash_ignores_insertion_order():
    e1 = {(0, 0, 0): 1, (1, 1, 1): 2}
    e2 = {(1, 1, 1): 2, (0, 0, 0): 1}
    a = Tensor3((2, 2, 2), RATIONAL, e1)
    b = Tensor3((2, 2, 2), RATIONAL, e2)
    assert a.canonical_hash() == b.canonical_hash()
    c = a.scale(2)
    assert c.canonical_hash() != a.canonical_hash()


def test_subspace_rejects_dependent_rows():
    with pytest.raises(InvalidArguments):
        Subspace([[1, 2, 3, 4], [2, 4, 6, 8]], RATIONAL)
    w = Subspace([[1, 0, 0, 0], [0, 1, 0, 0]], RATIONAL)
    assert w.k == 2 and w.ambient == 4


def test_tensor_rejects_bad_entries():
    with pytest.raises(DimensionMismatch):
        Tensor3((2, 2, 2), RATIONAL, {(2, 0, 0): 1})
    with pytest.raises(InvalidArguments):
        Tensor3((0, 2, 2), RATIONAL, {})
    # explicit zeros are dropped, not stored
    t = Tensor3((2, 2, 2), RATIONAL, {(0, 0, 0): 0, (1, 0, 1): 3})
    assert (0, 0, 0) not in t.entries
    assert t.entry(1, 0, 1) == 3
