import numpy as np
import pytest
import scipy.sparse
from hypothesis import given
from hypothesis import strategies as st

from sketchls import (
    DenseMatrix,
    ShapeError,
    SparseMatrix,
    Vector,
    read_matrix,
    read_vector,
    write_matrix,
    write_vector,
)
from sketchls.rng import stream


def test_dense_round_trip_bitwise(tmp_path):
    rng = stream(0)
    a = rng.standard_normal((7, 3))
    a[0, 0] = 0.1
    a[1, 0] = -0.0
    a[2, 0] = 1e-300
    path = str(tmp_path / "a.mtx")
    write_matrix(path, DenseMatrix(a))
    back = read_matrix(path)
    assert isinstance(back, DenseMatrix)
    assert np.array_equal(back.data, a)
    # -0.0 must survive with its sign bit
    assert np.signbit(back.data[1, 0])


def test_vector_round_trip_bitwise(tmp_path):
    v = stream(1).standard_normal(9)
    path = str(tmp_path / "v.mtx")
    write_vector(path, Vector(v))
    assert np.array_equal(read_vector(path).data, v)


def test_sparse_round_trip(tmp_path):
    rng = stream(2)
    a = np.where(rng.random((6, 5)) < 0.4, rng.standard_normal((6, 5)), 0.0)
    sp = SparseMatrix.from_scipy(scipy.sparse.csr_matrix(a))
    path = str(tmp_path / "s.mtx")
    write_matrix(path, sp)
    back = read_matrix(path)
    assert isinstance(back, SparseMatrix)
    assert np.array_equal(back.indptr, sp.indptr)
    assert np.array_equal(back.indices, sp.indices)
    assert np.array_equal(back.values, sp.values)


@given(st.integers(0, 2**32 - 1))
def test_round_trip_random(tmp_path_factory, seed):
    rng = stream(seed)
    a = rng.standard_normal((4, 4))
    path = str(tmp_path_factory.mktemp("mm") / "m.mtx")
    write_matrix(path, DenseMatrix(a))
    assert np.array_equal(read_matrix(path).data, a)


def test_array_entries_are_column_major(tmp_path):
    path = tmp_path / "cm.mtx"
    path.write_text(
        "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n4.0\n"
    )
    got = read_matrix(str(path))
    assert np.array_equal(got.data, [[1.0, 3.0], [2.0, 4.0]])


def test_coordinate_is_one_based_and_sums_duplicates(tmp_path):
    path = tmp_path / "c.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "% a comment line\n"
        "2 3 3\n"
        "1 1 5.0\n"
        "2 3 -1.5\n"
        "1 1 2.0\n"
    )
    got = read_matrix(str(path))
    assert isinstance(got, SparseMatrix)
    dense = got.densify().data
    assert np.array_equal(dense, [[7.0, 0.0, 0.0], [0.0, 0.0, -1.5]])


def test_integer_field_accepted(tmp_path):
    path = tmp_path / "i.mtx"
    path.write_text("%%MatrixMarket matrix array integer general\n2 1\n1\n-3\n")
    assert np.array_equal(read_vector(str(path)).data, [1.0, -3.0])


def test_missing_header_rejected(tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("2 2\n1\n2\n3\n4\n")
    with pytest.raises(ValueError, match="header"):
        read_matrix(str(path))


def test_unsupported_symmetry_rejected(tmp_path):
    path = tmp_path / "sym.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1.0\n")
    with pytest.raises(ValueError, match="symmetry"):
        read_matrix(str(path))


def test_entry_count_mismatch_rejected(tmp_path):
    path = tmp_path / "short.mtx"
    path.write_text("%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n")
    with pytest.raises(ValueError, match="entries"):
        read_matrix(str(path))


def test_vector_requires_single_column(tmp_path):
    path = str(tmp_path / "wide.mtx")
    write_matrix(path, DenseMatrix(np.eye(2)))
    with pytest.raises(ShapeError):
        read_vector(path)


def test_out_of_range_coordinate_rejected(tmp_path):
    path = tmp_path / "oob.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n")
    with pytest.raises(ValueError, match="range"):
        read_matrix(str(path))
