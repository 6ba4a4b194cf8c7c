"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Matrices are small immutable dense
objects; the heavy lifting (null spaces, spans) is done on sparse integer rows
with fraction-free elimination, and only the final reduced form is converted
back to fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

Vector = tuple  # tuple[Fraction, ...]


def Q(x) -> Fraction:
    """Coerce ints, strings ("p/q") and fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    return str(Q(x))


def vec(values: Iterable) -> Vector:
    return tuple(Q(v) for v in values)


def unit_vector(dim: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(dim))


def zero_vector(dim: int) -> Vector:
    return (Fraction(0),) * dim


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValidationError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValidationError("ragged rows")
        return cls(len(rows), ncols, tuple(Q(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def from_flat(cls, n: int, values: Sequence) -> "RationalMatrix":
        return cls(n, n, tuple(Q(v) for v in values))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        return cls.from_rows(list(zip(*columns))) if columns else cls.zeros(0, 0)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def flat(self) -> Vector:
        return self.entries

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _check_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise ValidationError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "RationalMatrix":
        c = Q(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __rmul__(self, c) -> "RationalMatrix":
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValidationError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
            return RationalMatrix(self.rows, other.cols, tuple(out))
        v = tuple(other)
        if len(v) != self.cols:
            raise ValidationError(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0))
                     for i in range(self.rows))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def commutator(self, other: "RationalMatrix") -> "RationalMatrix":
        return self @ other - other @ self

    def rank(self) -> int:
        return len(_rref_int_rows(_int_rows(self.to_rows()), self.cols))

    def inverse(self) -> "RationalMatrix":
        if self.rows != self.cols:
            raise ValidationError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self.row(i)) + list(unit_vector(n, i)) for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            aug[c], aug[piv] = aug[piv], aug[c]
            p = aug[c][c]
            aug[c] = [x / p for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return RationalMatrix.from_rows([row[n:] for row in aug])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix([{body}])"


def block_diag(*blocks: RationalMatrix) -> RationalMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return RationalMatrix.from_rows(out) if n else RationalMatrix.zeros(0, 0)


# --- fraction-free sparse elimination -------------------------------------

def _primitive(row: dict) -> dict:
    """Divide an integer row by the gcd of its entries; first nonzero made positive."""
    if not row:
        return row
    g = reduce(gcd, row.values())
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _int_row(values: Mapping[int, Fraction] | Sequence) -> dict:
    if isinstance(values, Mapping):
        items = [(k, Q(v)) for k, v in values.items() if v]
    else:
        items = [(k, Q(v)) for k, v in enumerate(values) if v]
    if not items:
        return {}
    den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for _, v in items), 1)
    return _primitive({k: int(v * den) for k, v in items})


def _int_rows(rows) -> list[dict]:
    return [r for r in (_int_row(x) for x in rows) if r]


def _rref_int_rows(rows: list[dict], ncols: int) -> list[tuple[int, dict]]:
    """Gauss-Jordan on integer rows, column by column, without fractions.

    Returns (pivot column, primitive integer row) pairs sorted by pivot.  Pivot
    rows vanish in every other pivot column, so dividing each by its pivot entry
    yields the reduced row echelon form.
    """
    remaining = [dict(r) for r in rows if r]
    pivots: list[tuple[int, dict]] = []
    cols = sorted({c for r in remaining for c in r})
    for c in cols:
        cand = [i for i, r in enumerate(remaining) if c in r]
        if not cand:
            continue
        best = min(cand, key=lambda i: (len(remaining[i]), abs(remaining[i][c])))
        prow = remaining.pop(best)
        pc = prow[c]

        def eliminate(r: dict) -> dict:
            rc = r[c]
            out = {k: pc * v for k, v in r.items()}
            for k, v in prow.items():
                nv = out.get(k, 0) - rc * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
            return _primitive(out)

        remaining = [eliminate(r) if c in r else r for r in remaining]
        remaining = [r for r in remaining if r]
        pivots = [(pcol, eliminate(r) if c in r else r) for pcol, r in pivots]
        pivots.append((c, prow))
        if not remaining:
            break
    pivots.sort(key=lambda t: t[0])
    return pivots


def _rref(rows, ncols: int) -> list[tuple[int, dict]]:
    """Reduced row echelon form as (pivot, {col: Fraction}) with pivot entry 1."""
    out = []
    for pc, r in _rref_int_rows(_int_rows(rows), ncols):
        p = r[pc]
        out.append((pc, {k: Fraction(v, p) for k, v in r.items()}))
    return out


# --- subspaces --------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held in reduced row echelon form.

    Each basis vector has a leading 1 in its pivot column and zeros in all other
    pivot columns, so equal subspaces have identical ``basis`` tuples.
    """

    ambient_dim: int
    basis: tuple  # tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(b) if x) for b in self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def coordinates(self, v) -> tuple[Fraction, ...]:
        """Coefficients of v in the reduced basis (v must lie in the subspace)."""
        v = vec(v)
        coeffs = tuple(v[p] for p in self.pivots)
        rebuilt = [Fraction(0)] * self.ambient_dim
        for c, b in zip(coeffs, self.basis):
            if c:
                for k, x in enumerate(b):
                    if x:
                        rebuilt[k] += c * x
        if tuple(rebuilt) != v:
            raise ValidationError("vector is not in the subspace")
        return coeffs


def _from_rref(pivots: list[tuple[int, dict]], dim: int) -> Subspace:
    basis = []
    for _, r in pivots:
        v = [Fraction(0)] * dim
        for k, x in r.items():
            v[k] = x
        basis.append(tuple(v))
    return Subspace(dim, tuple(basis))


def zero_subspace(dim: int) -> Subspace:
    return Subspace(dim, ())


def full_space(dim: int) -> Subspace:
    return Subspace(dim, tuple(unit_vector(dim, i) for i in range(dim)))


def span_basis(vectors: Iterable, ambient_dim: int | None = None) -> Subspace:
    vectors = [vec(v) for v in vectors]
    if ambient_dim is None:
        if not vectors:
            raise ValidationError("ambient_dim required for an empty list")
        ambient_dim = len(vectors[0])
    for v in vectors:
        if len(v) != ambient_dim:
            raise ValidationError(f"dimension mismatch: {len(v)} != {ambient_dim}")
    return _from_rref(_rref(vectors, ambient_dim), ambient_dim)


def span_sparse(rows: Iterable[Mapping[int, Fraction]], ambient_dim: int) -> Subspace:
    return _from_rref(_rref(list(rows), ambient_dim), ambient_dim)


def nullspace_sparse(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> Subspace:
    """Kernel of the linear system whose equations are given as sparse rows."""
    piv = _rref(list(rows), ncols)
    pivot_cols = {pc for pc, _ in piv}
    free = [c for c in range(ncols) if c not in pivot_cols]
    vectors = []
    for f in free:
        v = {f: Fraction(1)}
        for pc, r in piv:
            x = r.get(f)
            if x:
                v[pc] = -x
        vectors.append(v)
    return span_sparse(vectors, ncols)


def nullspace(M: RationalMatrix) -> Subspace:
    return nullspace_sparse(M.to_rows(), M.cols)


def rank(M: RationalMatrix) -> int:
    return M.rank()


def _check_ambient(a: Subspace, dim: int) -> None:
    if a.ambient_dim != dim:
        raise ValidationError(f"ambient mismatch: {a.ambient_dim} != {dim}")


def contains(A: Subspace, v) -> bool:
    v = vec(v)
    _check_ambient(A, len(v))
    residual = list(v)
    for p, b in zip(A.pivots, A.basis):
        c = residual[p]
        if c:
            for k, x in enumerate(b):
                if x:
                    residual[k] -= c * x
    return not any(residual)


def is_subspace(A: Subspace, B: Subspace) -> bool:
    _check_ambient(B, A.ambient_dim)
    return all(contains(B, v) for v in A.basis)


def subspace_equal(A: Subspace, B: Subspace) -> bool:
    _check_ambient(B, A.ambient_dim)
    return A.basis == B.basis


def subspace_sum(*spaces: Subspace) -> Subspace:
    dim = spaces[0].ambient_dim
    for s in spaces:
        _check_ambient(s, dim)
    return span_basis([v for s in spaces for v in s.basis], dim)


def intersection(A: Subspace, B: Subspace) -> Subspace:
    _check_ambient(B, A.ambient_dim)
    # x = sum a_i A_i = sum b_j B_j  <=>  [A^T | -B^T] (a, b) = 0
    n, da = A.ambient_dim, A.dim
    rows = []
    for k in range(n):
        r = {i: A.basis[i][k] for i in range(da) if A.basis[i][k]}
        r.update({da + j: -B.basis[j][k] for j in range(B.dim) if B.basis[j][k]})
        rows.append(r)
    ker = nullspace_sparse(rows, da + B.dim)
    out = []
    for sol in ker.basis:
        x = [Fraction(0)] * n
        for i in range(da):
            if sol[i]:
                for k, y in enumerate(A.basis[i]):
                    x[k] += sol[i] * y
        out.append(x)
    return span_basis(out, n)


def combination(coeffs: Sequence, vectors: Sequence[Vector]) -> Vector:
    dim = len(vectors[0])
    out = [Fraction(0)] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


def solve_coordinates(vectors: Sequence[Vector], v) -> tuple[Fraction, ...] | None:
    """Some c with sum c_i vectors[i] = v (free variables set to 0), or None."""
    v = vec(v)
    m = len(vectors)
    rows = []
    for k in range(len(v)):
        r = {i: vectors[i][k] for i in range(m) if vectors[i][k]}
        if v[k]:
            r[m] = v[k]
        rows.append(r)
    sol = [Fraction(0)] * m
    for pc, r in _rref(rows, m + 1):
        if pc == m:
            return None
        sol[pc] = r.get(m, Fraction(0))
    return tuple(sol)


class IncrementalSpan:
    """Echelon basis that grows one vector at a time; used by closure loops."""

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._rows: list[tuple[int, dict]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, v) -> dict:
        r = {k: Q(x) for k, x in enumerate(v) if x} if not isinstance(v, dict) else dict(v)
        for p, row in self._rows:
            c = r.get(p)
            if c:
                for k, x in row.items():
                    nv = r.get(k, 0) - c * x
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        return r

    def contains(self, v) -> bool:
        return not self._reduce(v)

    def add(self, v) -> bool:
        r = self._reduce(v)
        if not r:
            return False
        p = min(r)
        c = r[p]
        self._rows.append((p, {k: x / c for k, x in r.items()}))
        return True

    def to_subspace(self) -> Subspace:
        return span_sparse([row for _, row in self._rows], self.ambient_dim)
