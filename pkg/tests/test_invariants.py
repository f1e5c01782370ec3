import pytest

from zinbiel.algebra import StructureAlgebra, basis, left_operator
from zinbiel.catalog import build, build_null_filiform
from zinbiel.errors import NotNilpotent
from zinbiel.invariants import (
    CharSequence,
    annihilators,
    blocks_from_rank_profile,
    characteristic_sequence,
    characteristic_witness,
    charseq_compare,
    fingerprint,
    graded_table,
    jordan_blocks_nilpotent,
    natural_gradation,
    nilindex,
    power_series,
    rank_profile,
)
from zinbiel.linalg import Matrix, subspace_from_spanning
from zinbiel.sampling import random_invertible_matrix, rng_for
from zinbiel.transform import transport


def abelian(n):
    return StructureAlgebra(n, {})


def dims(A):
    return [s.dim for s in power_series(A)]


def test_power_series_examples(z1_8):
    assert dims(z1_8) == [8, 5, 3, 2, 1, 0]
    assert dims(abelian(4)) == [4, 0]
    assert dims(build_null_filiform(5)) == [5, 4, 3, 2, 1, 0]


def test_nilindex_examples(z1_8):
    assert nilindex(z1_8) == 5
    assert nilindex(build_null_filiform(5)) == 5
    assert nilindex(abelian(4)) == 1


def test_not_nilpotent():
    A = StructureAlgebra.from_entries(1, [(1, 1, 1, 1)])
    with pytest.raises(NotNilpotent):
        power_series(A)


def test_annihilators_nf3():
    ann = annihilators(build_null_filiform(3))
    e3 = subspace_from_spanning(3, [(0, 0, 1)])
    assert ann.right == ann.left == ann.center == e3


def test_annihilators_abelian():
    ann = annihilators(abelian(2))
    assert ann.right.dim == ann.left.dim == ann.center.dim == 2


def test_z21_en_central(z21_8):
    ann = annihilators(z21_8)
    assert basis(z21_8, 8) in ann.center


def test_blocks_from_rank_profile():
    assert blocks_from_rank_profile([6, 3, 1, 0]) == CharSequence((3, 2, 1))


def test_zero_matrix_blocks():
    assert jordan_blocks_nilpotent(Matrix.zeros(4, 4)) == CharSequence((1, 1, 1, 1))


def test_jordan_blocks_e1_z1(z1_8):
    assert jordan_blocks_nilpotent(left_operator(z1_8, basis(z1_8, 1))) == CharSequence((5, 2, 1))


def test_jordan_not_nilpotent():
    with pytest.raises(NotNilpotent):
        jordan_blocks_nilpotent(Matrix.identity(2))


@pytest.mark.parametrize("seed", [0, 1, 7, 123])
def test_char_seq_z1(z1_8, seed):
    assert characteristic_sequence(z1_8, seed=seed) == CharSequence((5, 2, 1))


def test_char_seq_abelian_and_nf():
    assert characteristic_sequence(abelian(3)) == CharSequence((1, 1, 1))
    assert characteristic_sequence(build_null_filiform(6)) == CharSequence((6,))


def test_z21_has_block_sequence_5_3(z21_8):
    # x = e_1 + e_6: e_1 -> e_2 - e_7, e_2 -> e_3 -> e_4 -> e_5 -> 0 and
    # e_6 -> e_7 -> e_8 -> 0, so the ranks of the powers are 8, 6, 4, 2, 1, 0
    x = tuple(1 if i in (0, 5) else 0 for i in range(8))
    L = left_operator(z21_8, x)
    assert rank_profile(L) == [8, 6, 4, 2, 1, 0]
    assert jordan_blocks_nilpotent(L) == CharSequence((5, 3))
    assert charseq_compare((5, 3), (5, 2, 1)) == 1
    best, witness = characteristic_witness(z21_8)
    assert best == CharSequence((5, 3))


def test_compare():
    assert charseq_compare((5, 2, 1), (5, 1, 1, 1)) == 1
    assert charseq_compare((3, 3), (3, 3)) == 0
    assert charseq_compare((2, 2), (3,)) == -1


def test_char_sequence_rejects_increasing():
    with pytest.raises(ValueError):
        CharSequence((1, 2))


def test_gradation_examples(z1_8, z21_8):
    assert natural_gradation(z1_8).layer_dims == (3, 2, 1, 1, 1)
    assert natural_gradation(z21_8).layer_dims == (2, 2, 2, 1, 1)
    assert natural_gradation(abelian(2)).layer_dims == (2,)


@pytest.mark.parametrize("name", ["Z1", "Z9", "Z17", "Z21", "NF"])
def test_graded_table_respects_layers(name):
    A = build(name, 8)
    g = graded_table(A)
    for i, j, k, _ in g.algebra.entries():
        assert g.layer_of[k - 1] == g.layer_of[i - 1] + g.layer_of[j - 1]
    assert g.naturally_graded


def test_graded_table_flags_non_graded():
    # e_1 o e_1 = e_2 + e_3, e_1 o e_2 = e_3: layer 2 picks up an e_3 term
    A = StructureAlgebra.from_entries(3, [(1, 1, 2, 1), (1, 1, 3, 1), (1, 2, 3, 1)])
    g = graded_table(A)
    assert g.transported == transport(A, g.basis)
    for i, j, k, _ in g.algebra.entries():
        assert g.layer_of[k - 1] == g.layer_of[i - 1] + g.layer_of[j - 1]


def test_fingerprint_separates_nf(z1_8):
    f1, f2 = fingerprint(z1_8), fingerprint(build_null_filiform(8))
    assert f1 != f2
    assert f1.first_difference(f2) == "nilindex"
    assert (f1.nilindex, f2.nilindex) == (5, 8)


def test_fingerprint_consistency(z1_8):
    fp = fingerprint(z1_8)
    assert fp.nilindex == len([d for d in fp.power_dims if d])
    assert fp.layer_dims == tuple(a - b for a, b in zip(fp.power_dims, fp.power_dims[1:]))
    assert list(fp.to_dict()) == list(fp.FIELDS)


@pytest.mark.parametrize("name", ["Z1", "Z5", "Z21"])
def test_fingerprint_invariant_under_transport(name):
    A = build(name, 8)
    base = fingerprint(A)
    rng = rng_for(5)
    for _ in range(20):
        B = transport(A, random_invertible_matrix(rng, 8, 3))
        assert fingerprint(B) == base
