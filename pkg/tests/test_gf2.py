"""GF(2)/GF(3) linear algebra tests against a schoolbook eliminator."""

from itertools import combinations

import numpy as np
import pytest

from geomforge.gf2 import (
    MatrixGFp,
    ShapeError,
    dump_matrix,
    image_kernel,
    parse_matrix,
    rank_nullspace,
    solve,
)
from oracles import naive_rank


def petersen_incidence_rows():
    vertices = [tuple(sorted(c)) for c in combinations(range(5), 2)]
    edges = [
        (a, b)
        for a, b in combinations(vertices, 2)
        if not set(a) & set(b)
    ]
    return [[1 if v in e else 0 for e in edges] for v in vertices]


class TestRankNullspace:
    def test_identity(self):
        rank, basis = rank_nullspace(MatrixGFp.identity(2, 3))
        assert rank == 3 and basis.rows == 0

    def test_petersen_incidence(self):
        m = MatrixGFp.from_rows(2, petersen_incidence_rows())
        rank, basis = rank_nullspace(m)
        assert (rank, basis.rows) == (9, 6)
        for i in range(basis.rows):
            assert all(v == 0 for v in m.apply(basis.row(i)))

    def test_zero_matrix(self):
        rank, basis = rank_nullspace(MatrixGFp.zeros(2, 4, 7))
        assert rank == 0 and basis.rows == 7

    def test_rank_plus_nullity(self):
        rng = np.random.default_rng(101)
        for _ in range(20):
            p = int(rng.choice([2, 3]))
            rows, cols = (int(x) for x in rng.integers(1, 40, size=2))
            m = MatrixGFp.from_rows(p, rng.integers(0, p, size=(rows, cols)).tolist())
            rank, basis = rank_nullspace(m)
            assert rank + basis.rows == cols

    def test_nullspace_basis_is_canonical_echelon(self):
        m = MatrixGFp.from_rows(2, [[1, 1, 0, 1], [0, 1, 1, 0]])
        basis = m.nullspace()
        rows = basis.to_rows()
        # leading columns strictly increase and pivots are cleared above
        leads = [row.index(1) for row in rows]
        assert leads == sorted(leads) and len(set(leads)) == len(leads)
        for i, lead in enumerate(leads):
            for j in range(basis.rows):
                if j != i:
                    assert rows[j][lead] == 0


class TestOracleComparison:
    def test_200_random_matrices_both_primes(self):
        rng = np.random.default_rng(20240809)
        for trial in range(200):
            p = 2 if trial % 2 == 0 else 3
            rows, cols = (int(x) for x in rng.integers(1, 101, size=2))
            dense = rng.integers(0, p, size=(rows, cols)).tolist()
            assert MatrixGFp.from_rows(p, dense).rank() == naive_rank(dense, p)

    def test_rank_of_transpose(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            p = int(rng.choice([2, 3]))
            dense = rng.integers(0, p, size=(13, 29)).tolist()
            m = MatrixGFp.from_rows(p, dense)
            assert m.rank() == m.transpose().rank()

    def test_rank_invariant_under_permutation(self):
        rng = np.random.default_rng(6)
        dense = rng.integers(0, 2, size=(15, 20))
        m = MatrixGFp.from_rows(2, dense.tolist())
        shuffled = dense[rng.permutation(15)][:, rng.permutation(20)]
        assert m.rank() == MatrixGFp.from_rows(2, shuffled.tolist()).rank()

    def test_product_rank_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(15):
            a = MatrixGFp.from_rows(2, rng.integers(0, 2, size=(12, 9)).tolist())
            b = MatrixGFp.from_rows(2, rng.integers(0, 2, size=(9, 14)).tolist())
            assert a.mul(b).rank() <= min(a.rank(), b.rank())


class TestSolve:
    def test_identity(self):
        m = MatrixGFp.identity(2, 4)
        assert solve(m, [1, 0, 1, 1]) == [1, 0, 1, 1]

    def test_free_variables_zeroed(self):
        m = MatrixGFp.from_rows(2, [[1, 1]])
        assert solve(m, [1]) == [1, 0]

    def test_inconsistent(self):
        m = MatrixGFp.from_rows(2, [[1], [1]])
        assert solve(m, [1, 0]) is None

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            solve(MatrixGFp.identity(2, 3), [1, 0])

    def test_solution_verifies(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            p = int(rng.choice([2, 3]))
            m = MatrixGFp.from_rows(p, rng.integers(0, p, size=(8, 11)).tolist())
            x0 = rng.integers(0, p, size=11).tolist()
            b = m.apply(x0)
            x = solve(m, b)
            assert x is not None and m.apply(x) == b


class TestImageKernel:
    def test_zero_map(self):
        z = MatrixGFp.zeros(2, 3, 3)
        kernel, image = image_kernel(z)
        assert kernel.rows == 3 and image.rows == 0

    def test_identity_map(self):
        kernel, image = image_kernel(MatrixGFp.identity(2, 4))
        assert kernel.rows == 0 and image.rows == 4

    def test_companion_plus_identity(self):
        # g the companion matrix of x^2 + x + 1 (order 3 on GF(2)^2): g + I
        a = MatrixGFp.from_rows(2, [[1, 1], [1, 0]])
        kernel, image = image_kernel(a)
        assert kernel.rows == 0 and image.rows == 2

    def test_non_square_rejected(self):
        with pytest.raises(ShapeError):
            image_kernel(MatrixGFp.zeros(2, 2, 3))

    def test_order3_coprime_split(self):
        # kernel(g+I) and image(g+I) meet trivially for order-3 permutation g
        from geomforge.perm import Permutation

        g = Permutation.from_cycles(9, [(0, 1, 2), (3, 4, 5)])
        assert g.order() == 3
        n = 9
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] ^= 1
            rows[i][g.images[i]] ^= 1
        a = MatrixGFp.from_rows(2, rows)
        kernel, image = image_kernel(a)
        assert kernel.rows + image.rows == n
        stacked = kernel.stack(image)
        assert stacked.rank() == kernel.rows + image.rows


class TestExchangeFormat:
    def test_roundtrip(self):
        m = MatrixGFp.from_rows(3, [[1, 2, 0], [0, 0, 1]])
        assert parse_matrix(dump_matrix(m)) == m

    def test_header_validation(self):
        with pytest.raises(ShapeError):
            parse_matrix("3 4\n")

    def test_entry_bounds(self):
        with pytest.raises(ShapeError):
            parse_matrix("2 2 2\n5 0 1\n")


class TestPerformance:
    def test_rank_2000_under_one_second(self):
        import time

        rng = np.random.default_rng(99)
        dense = rng.integers(0, 2, size=(2000, 2000), dtype=np.uint8)
        m = MatrixGFp.from_rows(2, dense.tolist())
        start = time.monotonic()
        rank = m.rank()
        elapsed = time.monotonic() - start
        assert rank >= 1990
        assert elapsed < 1.0, f"rank took {elapsed:.2f}s"
