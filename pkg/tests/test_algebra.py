import json

import pytest

from zinbiel.algebra import (
    StructureAlgebra,
    basis,
    dumps,
    is_zinbiel,
    left_operator,
    loads,
    multiply,
    zinbiel_defect,
)
from zinbiel.catalog import build, build_null_filiform
from zinbiel.errors import DimensionMismatch, FormatError
from zinbiel.invariants import rank_profile
from zinbiel.linalg import Matrix, zero_vector


def e(A, i):
    return basis(A, i)


def test_nf5_e2_e2():
    A = build_null_filiform(5)
    assert multiply(A, e(A, 2), e(A, 2)) == (0, 0, 0, 3, 0)


def test_multiply_by_zero(z1_8):
    assert multiply(z1_8, zero_vector(8), e(z1_8, 3)) == zero_vector(8)


def test_z1_e8_e6(z1_8):
    assert multiply(z1_8, e(z1_8, 8), e(z1_8, 6)) == e(z1_8, 7)


def test_defect_nf8_e1():
    A = build_null_filiform(8)
    assert not any(zinbiel_defect(A, e(A, 1), e(A, 1), e(A, 1)))


def test_defect_idempotent_line():
    A = StructureAlgebra.from_entries(1, [(1, 1, 1, 1)])
    assert zinbiel_defect(A, (1,), (1,), (1,)) == (-1,)
    chk = is_zinbiel(A)
    assert not chk and chk.triple == (1, 1, 1)


def test_defect_z21(z21_8):
    assert not any(zinbiel_defect(z21_8, e(z21_8, 1), e(z21_8, 6), e(z21_8, 1)))


@pytest.mark.parametrize("n", range(3, 13))
def test_null_filiform_is_zinbiel(n):
    assert is_zinbiel(build_null_filiform(n))


def test_left_operator_e1_z1(z1_8):
    assert rank_profile(left_operator(z1_8, e(z1_8, 1))) == [8, 5, 3, 2, 1, 0]


def test_left_operator_zero(z1_8):
    assert left_operator(z1_8, zero_vector(8)).is_zero()


def test_left_operator_nf4():
    A = build_null_filiform(4)
    assert rank_profile(left_operator(A, e(A, 1))) == [4, 3, 2, 1, 0]


def test_left_operator_columns(z1_8):
    L = left_operator(z1_8, e(z1_8, 1))
    assert L.column(5) == e(z1_8, 7)  # e_1 o e_6 = e_7


def test_dimension_mismatch(z1_8):
    with pytest.raises(DimensionMismatch):
        multiply(z1_8, (1, 0), e(z1_8, 1))


def test_table_invariants():
    with pytest.raises(ValueError):
        StructureAlgebra.from_entries(2, [(1, 1, 2, 1), (1, 1, 2, 3)])
    with pytest.raises(ValueError):
        StructureAlgebra.from_entries(2, [(1, 3, 2, 1)])
    A = StructureAlgebra.from_entries(2, [(1, 1, 2, 0)])
    assert A.table == {}


def test_file_round_trip(z1_8):
    assert loads(dumps(z1_8)) == z1_8
    assert loads(dumps(z1_8)).label == z1_8.label


def test_file_format_shape(z1_8):
    data = json.loads(dumps(z1_8))
    assert set(data) == {"dim", "label", "table"}
    assert [1, 1, 2, "1"] in data["table"]


@pytest.mark.parametrize(
    "text, needle",
    [
        ('{"dim": 2, "table": [], "extra": 1}', "unknown key"),
        ('{"table": []}', "missing key: dim"),
        ('{"dim": 2, "table": [[1, 1, 2, 1]]}', "table[0]"),
        ('{"dim": 2, "table": [[1, 1, 5, "1"]]}', "table[0]"),
        ('{"dim": 2,\n "table": [', "line 2"),
        ('{"dim": 2, "table": [[1, 1, 2, "x"]]}', "table[0]"),
    ],
)
def test_malformed_files(text, needle):
    with pytest.raises(FormatError) as err:
        loads(text)
    assert needle in str(err.value)


def test_structural_equality_ignores_label(z1_8):
    assert z1_8 == z1_8.relabel("other")
    assert hash(z1_8) == hash(z1_8.relabel("other"))
    assert z1_8 != build("Z2", 8)
