"""Dense linear algebra over GF(2) and GF(3).

GF(2) matrices are bit-packed into 64-bit words and eliminated word-parallel
with column pivoting in natural order, so the echelon form is deterministic.
GF(3) support is byte-packed and unoptimized; it only has to carry homology
ranks at desk scale.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "MatrixGFp",
    "ShapeError",
    "rank_nullspace",
    "solve",
    "image_kernel",
    "load_matrix",
    "parse_matrix",
    "dump_matrix",
]


class ShapeError(ValueError):
    """Matrix dimensions do not match the requested operation."""


_ONE = np.uint64(1)


class MatrixGFp:
    """Immutable dense matrix over GF(2) or GF(3).

    GF(2) payload: ndarray of uint64, shape (rows, ceil(cols/64)), bit j of
    word w holding column 64*w + j.  GF(3) payload: ndarray of uint8 with one
    byte per entry.
    """

    def __init__(self, prime: int, rows: int, cols: int, payload: np.ndarray):
        if prime not in (2, 3):
            raise ValueError("prime must be 2 or 3")
        self.prime = prime
        self.rows = rows
        self.cols = cols
        self._payload = payload
        self._payload.flags.writeable = False

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, prime: int, rows: int, cols: int) -> "MatrixGFp":
        if prime == 2:
            words = (cols + 63) // 64
            return cls(2, rows, cols, np.zeros((rows, words), dtype=np.uint64))
        return cls(3, rows, cols, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, prime: int, n: int) -> "MatrixGFp":
        return cls.from_rows(prime, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_rows(cls, prime: int, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "MatrixGFp":
        nrows = len(rows)
        if cols is None:
            cols = len(rows[0]) if nrows else 0
        if prime == 2:
            words = (cols + 63) // 64
            payload = np.zeros((nrows, words), dtype=np.uint64)
            for i, row in enumerate(rows):
                if len(row) != cols:
                    raise ShapeError("ragged row lengths")
                for j, v in enumerate(row):
                    if v & 1:
                        payload[i, j >> 6] |= _ONE << np.uint64(j & 63)
            return cls(2, nrows, cols, payload)
        payload = np.zeros((nrows, cols), dtype=np.uint8)
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ShapeError("ragged row lengths")
            payload[i] = np.asarray(row, dtype=np.int64) % 3
        return cls(3, nrows, cols, payload)

    @classmethod
    def from_entries(cls, prime: int, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]) -> "MatrixGFp":
        """Build from (row, col, value) coordinate triples."""
        if prime == 2:
            words = (cols + 63) // 64
            payload = np.zeros((rows, words), dtype=np.uint64)
            for r, c, v in entries:
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ShapeError(f"entry ({r},{c}) outside {rows}x{cols}")
                if v % 2:
                    payload[r, c >> 6] ^= _ONE << np.uint64(c & 63)
            return cls(2, rows, cols, payload)
        payload = np.zeros((rows, cols), dtype=np.uint8)
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"entry ({r},{c}) outside {rows}x{cols}")
            payload[r, c] = (payload[r, c] + v) % 3
        return cls(3, rows, cols, payload)

    # -- element access -------------------------------------------------------

    def get(self, r: int, c: int) -> int:
        if self.prime == 2:
            return int((self._payload[r, c >> 6] >> np.uint64(c & 63)) & _ONE)
        return int(self._payload[r, c])

    def row(self, r: int) -> list[int]:
        return [self.get(r, c) for c in range(self.cols)]

    def to_rows(self) -> list[list[int]]:
        return [self.row(r) for r in range(self.rows)]

    def transpose(self) -> "MatrixGFp":
        return MatrixGFp.from_rows(
            self.prime,
            [[self.get(r, c) for r in range(self.rows)] for c in range(self.cols)],
            cols=self.rows,
        )

    def stack(self, other: "MatrixGFp") -> "MatrixGFp":
        if other.cols != self.cols or other.prime != self.prime:
            raise ShapeError("stack requires equal widths and primes")
        payload = np.vstack([self._payload, other._payload])
        return MatrixGFp(self.prime, self.rows + other.rows, self.cols, payload)

    def mul(self, other: "MatrixGFp") -> "MatrixGFp":
        if self.cols != other.rows or self.prime != other.prime:
            raise ShapeError("incompatible shapes for multiplication")
        if self.prime == 2:
            out = np.zeros((self.rows, other._payload.shape[1]), dtype=np.uint64)
            for i in range(self.rows):
                acc = np.zeros(other._payload.shape[1], dtype=np.uint64)
                w = self._payload[i]
                for k in range(self.cols):
                    if (w[k >> 6] >> np.uint64(k & 63)) & _ONE:
                        acc ^= other._payload[k]
                out[i] = acc
            return MatrixGFp(2, self.rows, other.cols, out)
        prod = (self._payload.astype(np.int64) @ other._payload.astype(np.int64)) % 3
        return MatrixGFp(3, self.rows, other.cols, prod.astype(np.uint8))

    def apply(self, vector: Sequence[int]) -> list[int]:
        """Matrix-vector product M @ v."""
        if len(vector) != self.cols:
            raise ShapeError("vector length does not match column count")
        col = MatrixGFp.from_rows(self.prime, [[v] for v in vector], cols=1)
        return [self.mul(col).get(r, 0) for r in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixGFp)
            and self.prime == other.prime
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self._payload, other._payload))
        )

    def __repr__(self) -> str:
        return f"MatrixGFp(p={self.prime}, {self.rows}x{self.cols})"

    # -- elimination ----------------------------------------------------------

    def rref(self) -> tuple["MatrixGFp", list[int]]:
        """Reduced row echelon form and its pivot columns (deterministic)."""
        if self.prime == 2:
            work = self._payload.copy()
            pivots = _rref2_inplace(work, self.rows, self.cols)
            return MatrixGFp(2, self.rows, self.cols, work), pivots
        work = self._payload.copy()
        pivots = _rref3_inplace(work, self.rows, self.cols)
        return MatrixGFp(3, self.rows, self.cols, work), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "MatrixGFp":
        """Canonical basis of the right nullspace, one vector per row, in
        reduced echelon form."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis_rows = []
        for f in free:
            vec = [0] * self.cols
            vec[f] = 1
            for r, p in enumerate(pivots):
                coef = red.get(r, f)
                if coef:
                    # p-coordinate solves row: x_p = -coef * x_f
                    vec[p] = (-coef) % self.prime
            basis_rows.append(vec)
        if not basis_rows:
            return MatrixGFp.zeros(self.prime, 0, self.cols)
        basis = MatrixGFp.from_rows(self.prime, basis_rows, cols=self.cols)
        red_basis, piv = basis.rref()
        keep = MatrixGFp.from_rows(
            self.prime, [red_basis.row(i) for i in range(len(piv))], cols=self.cols
        )
        return keep

    def row_space(self) -> "MatrixGFp":
        """Canonical echelon basis of the row space."""
        red, pivots = self.rref()
        return MatrixGFp.from_rows(
            self.prime, [red.row(i) for i in range(len(pivots))], cols=self.cols
        )


def _rref2_inplace(work: np.ndarray, rows: int, cols: int) -> list[int]:
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        w, b = c >> 6, np.uint64(c & 63)
        mask = _ONE << b
        col = work[r:, w] & mask
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        hits = np.nonzero(work[:, w] & mask)[0]
        hits = hits[hits != r]
        if hits.size:
            work[hits] ^= work[r]
        pivots.append(c)
        r += 1
    return pivots


def _rref3_inplace(work: np.ndarray, rows: int, cols: int) -> list[int]:
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = work[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        if work[r, c] == 2:  # inverse of 2 mod 3 is 2
            work[r] = (work[r] * 2) % 3
        hits = np.nonzero(work[:, c])[0]
        hits = hits[hits != r]
        if hits.size:
            factors = work[hits, c].astype(np.int16)
            work[hits] = (work[hits].astype(np.int16) - factors[:, None] * work[r].astype(np.int16)) % 3
        pivots.append(c)
        r += 1
    return pivots


# ---------------------------------------------------------------------------
# spec-level operations


def rank_nullspace(matrix: MatrixGFp) -> tuple[int, MatrixGFp]:
    """Rank plus canonical nullspace basis; rank + basis rows = cols."""
    basis = matrix.nullspace()
    return matrix.cols - basis.rows, basis


def solve(matrix: MatrixGFp, b: Sequence[int]) -> Optional[list[int]]:
    """Solve M x = b; canonical solution has all free variables zero.
    Returns None when b is outside the column space."""
    if len(b) != matrix.rows:
        raise ShapeError("right-hand side length does not match row count")
    rows = matrix.to_rows()
    augmented = MatrixGFp.from_rows(
        matrix.prime, [row + [bv % matrix.prime] for row, bv in zip(rows, b)],
        cols=matrix.cols + 1,
    )
    red, pivots = augmented.rref()
    if matrix.cols in pivots:
        return None
    x = [0] * matrix.cols
    for r, p in enumerate(pivots):
        x[p] = red.get(r, matrix.cols)
    return x


def image_kernel(matrix: MatrixGFp) -> tuple[MatrixGFp, MatrixGFp]:
    """Kernel and image (column space) bases of a square matrix, both in
    canonical echelon form; dimensions add up to the column count."""
    if matrix.rows != matrix.cols:
        raise ShapeError("image_kernel requires a square matrix")
    kernel = matrix.nullspace()
    image = matrix.transpose().row_space()
    return kernel, image


# ---------------------------------------------------------------------------
# coordinate text exchange format: "rows cols prime" then "r c v" per entry


def load_matrix(path) -> MatrixGFp:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def parse_matrix(text: str) -> MatrixGFp:
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ShapeError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise ShapeError("header must be 'rows cols prime'")
    rows, cols, prime = (int(x) for x in head)
    entries = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ShapeError(f"bad coordinate line: {ln!r}")
        entries.append((int(parts[0]), int(parts[1]), int(parts[2])))
    return MatrixGFp.from_entries(prime, rows, cols, entries)


def dump_matrix(matrix: MatrixGFp) -> str:
    out = [f"{matrix.rows} {matrix.cols} {matrix.prime}"]
    for r in range(matrix.rows):
        for c in range(matrix.cols):
            v = matrix.get(r, c)
            if v:
                out.append(f"{r} {c} {v}")
    return "\n".join(out) + "\n"
