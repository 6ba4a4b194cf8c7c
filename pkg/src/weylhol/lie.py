"""Minkowski space in a Witt basis and matrix Lie algebras inside co(1, n+1).

Vectors of R^{1,n+1} are coordinate tuples with respect to the ordered basis
``(p, e_1, ..., e_n, q)``.  Matrices act on column vectors.  A subalgebra is
stored as a :class:`~weylhol.linalg.Subspace` of the flattened N x N matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import StructureError, ValidationError
from .linalg import (
    IncrementalSpan,
    Q,
    RationalMatrix,
    Subspace,
    contains,
    is_subspace,
    span_basis,
    subspace_equal,
    unit_vector,
    vec,
    zero_vector,
)


# --- the Minkowski model -----------------------------------------------------

@dataclass(frozen=True)
class WittFrame:
    n: int

    @property
    def dim(self) -> int:
        return self.n + 2

    def gram(self) -> RationalMatrix:
        N = self.dim
        rows = [[0] * N for _ in range(N)]
        rows[0][N - 1] = rows[N - 1][0] = 1
        for i in range(1, N - 1):
            rows[i][i] = 1
        return RationalMatrix.from_rows(rows)

    def p(self):
        return unit_vector(self.dim, 0)

    def q(self):
        return unit_vector(self.dim, self.dim - 1)

    def e(self, i: int):
        """The i-th spacelike basis vector, 1 <= i <= n."""
        if not 1 <= i <= self.n:
            raise IndexError(f"e_{i} out of range for n={self.n}")
        return unit_vector(self.dim, i)

    def basis(self) -> list:
        return [unit_vector(self.dim, i) for i in range(self.dim)]


def euclidean_gram(n: int) -> RationalMatrix:
    return RationalMatrix.identity(n)


def pseudo_euclidean_gram(r: int, s: int) -> RationalMatrix:
    """diag(-1 (r times), +1 (s times))."""
    n = r + s
    return RationalMatrix.from_rows([[(-1 if i < r else 1) if i == j else 0 for j in range(n)]
                                     for i in range(n)])


def minkowski_product(x, y, gram: RationalMatrix | WittFrame) -> Fraction:
    G = gram.gram() if isinstance(gram, WittFrame) else gram
    x, y = vec(x), vec(y)
    if len(x) != G.rows or len(y) != G.rows:
        raise ValueError(f"vectors must have length {G.rows}")
    return sum((a * b for a, b in zip(x, G @ y)), Fraction(0))


def wedge(x, y, gram: RationalMatrix | WittFrame) -> RationalMatrix:
    """Matrix of Z -> (x, Z) y - (y, Z) x."""
    G = gram.gram() if isinstance(gram, WittFrame) else gram
    x, y = vec(x), vec(y)
    if len(x) != G.rows or len(y) != G.rows:
        raise ValueError(f"vectors must have length {G.rows}")
    gx, gy = G @ x, G @ y
    N = G.rows
    return RationalMatrix.from_rows([[y[i] * gx[j] - x[i] * gy[j] for j in range(N)]
                                     for i in range(N)])


def so_basis(n: int, gram: RationalMatrix | None = None) -> list[RationalMatrix]:
    """e_i ^ e_j for i < j; with the Euclidean form e_1 ^ e_2 = [[0, -1], [1, 0]]."""
    G = euclidean_gram(n) if gram is None else gram
    return [wedge(unit_vector(n, i), unit_vector(n, j), G)
            for i, j in combinations(range(n), 2)]


def is_skew(A: RationalMatrix, gram: RationalMatrix | None = None) -> bool:
    if gram is None:
        return (A + A.T).is_zero()
    return (A.T @ gram + gram @ A).is_zero()


def embed_block(A: RationalMatrix, size: int, offset: int) -> RationalMatrix:
    rows = [[0] * size for _ in range(size)]
    for i in range(A.rows):
        for j in range(A.cols):
            rows[offset + i][offset + j] = A[i, j]
    return RationalMatrix.from_rows(rows)


# --- elements of co(1, n+1)_{Rp} ----------------------------------------------

@dataclass(frozen=True)
class CoElement:
    """b id + (a, A, X) in co(1, n+1)_{Rp}."""

    b: Fraction
    a: Fraction
    A: RationalMatrix
    X: tuple

    @property
    def n(self) -> int:
        return len(self.X)

    def matrix(self) -> RationalMatrix:
        n = self.n
        N = n + 2
        rows = [[Fraction(0)] * N for _ in range(N)]
        rows[0][0] = self.b + self.a
        rows[N - 1][N - 1] = self.b - self.a
        for i in range(n):
            rows[0][1 + i] = self.X[i]
            rows[1 + i][N - 1] = -self.X[i]
            for j in range(n):
                rows[1 + i][1 + j] = self.A[i, j] + (self.b if i == j else 0)
        return RationalMatrix.from_rows(rows)

    def coordinates(self) -> tuple:
        return (self.b, self.a, self.A, self.X)

    def so_part(self) -> "CoElement":
        return CoElement(Fraction(0), self.a, self.A, self.X)

    def __add__(self, other: "CoElement") -> "CoElement":
        return CoElement(self.b + other.b, self.a + other.a, self.A + other.A,
                         tuple(x + y for x, y in zip(self.X, other.X)))

    def scale(self, c) -> "CoElement":
        c = Q(c)
        return CoElement(c * self.b, c * self.a, self.A.scale(c), tuple(c * x for x in self.X))


def co_element(b, a, A, X) -> CoElement:
    X = vec(X)
    n = len(X)
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.zeros(n) if (isinstance(A, int) and A == 0) else RationalMatrix.from_rows(A)
    if A.shape != (n, n):
        raise ValidationError(f"A must be {n}x{n}, got {A.shape}")
    if not is_skew(A):
        raise ValidationError("A must be skew-symmetric")
    return CoElement(Q(b), Q(a), A, X)


def decode(M: RationalMatrix) -> CoElement:
    """Inverse of :meth:`CoElement.matrix`; raises StructureError naming the bad block."""
    N = M.rows
    if M.cols != N or N < 2:
        raise StructureError("matrix must be square of size >= 2")
    n = N - 2
    for j in range(N - 1):
        for i in range(j + 1, N):
            if i > j and not (1 <= i <= n and 1 <= j <= n) and M[i, j]:
                raise StructureError(f"lower block entry ({i},{j}) must vanish")
    if M[0, N - 1]:
        raise StructureError("corner (p-row, q-column) must vanish")
    b = (M[0, 0] + M[N - 1, N - 1]) / 2
    a = (M[0, 0] - M[N - 1, N - 1]) / 2
    A = RationalMatrix.from_rows([[M[1 + i, 1 + j] - (b if i == j else 0) for j in range(n)]
                                  for i in range(n)])
    if not is_skew(A):
        raise StructureError("so(n) block minus b*E_n is not skew")
    X = tuple(M[0, 1 + j] for j in range(n))
    if any(M[1 + i, N - 1] != -X[i] for i in range(n)):
        raise StructureError("last column must equal -X")
    return CoElement(b, a, A, X)


def is_co_element(M: RationalMatrix) -> bool:
    try:
        decode(M)
    except StructureError:
        return False
    return True


def bracket(u, v):
    """Commutator of two CoElements (or of two matrices)."""
    if isinstance(u, CoElement):
        return decode(u.matrix().commutator(v.matrix()))
    return u.commutator(v)


# --- subalgebras -------------------------------------------------------------

@dataclass(frozen=True)
class LieSubalgebra:
    """A bracket-closed span of N x N matrices.

    ``frame`` is set when the matrices are written in a Witt basis of
    R^{1,n+1}; ``gram`` records the invariant form of the ambient model.
    """

    size: int
    carrier: Subspace
    tag: str = "custom"
    frame: WittFrame | None = None
    gram: RationalMatrix | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def basis(self) -> list[RationalMatrix]:
        return [RationalMatrix.from_flat(self.size, b) for b in self.carrier.basis]

    def contains(self, M: RationalMatrix) -> bool:
        return contains(self.carrier, M.flat())

    def __contains__(self, M) -> bool:
        return self.contains(M.matrix() if isinstance(M, CoElement) else M)

    def co_basis(self) -> list[CoElement]:
        return [decode(M) for M in self.basis()]

    def same_as(self, other: "LieSubalgebra") -> bool:
        return self.size == other.size and subspace_equal(self.carrier, other.carrier)

    def is_subalgebra_of(self, other: "LieSubalgebra") -> bool:
        return is_subspace(self.carrier, other.carrier)

    def with_tag(self, tag: str) -> "LieSubalgebra":
        return LieSubalgebra(self.size, self.carrier, tag, self.frame, self.gram)


def _as_matrix(x) -> RationalMatrix:
    return x.matrix() if isinstance(x, CoElement) else x


def matrix_span(mats: Iterable, size: int, tag: str = "custom",
                frame: WittFrame | None = None, gram=None) -> LieSubalgebra:
    mats = [_as_matrix(m) for m in mats]
    return LieSubalgebra(size, span_basis([m.flat() for m in mats], size * size), tag, frame, gram)


def is_bracket_closed(g: LieSubalgebra) -> bool:
    B = g.basis()
    return all(g.contains(x.commutator(y)) for x, y in combinations(B, 2))


def lie_closure(generators: Sequence, size: int | None = None, tag: str = "closure",
                frame: WittFrame | None = None, gram=None) -> LieSubalgebra:
    """Smallest bracket-closed subspace containing the generators.

    Iterates S_{k+1} = span(S_k + [S_k, S_k]); each round only brackets the
    elements added in the previous round against the whole current basis.
    """
    mats = [_as_matrix(g) for g in generators]
    if size is None:
        if not mats:
            raise ValueError("size required for an empty generator list")
        size = mats[0].rows
    span = IncrementalSpan(size * size)
    basis: list[RationalMatrix] = []
    for m in mats:
        if span.add(m.flat()):
            basis.append(m)
    fresh = list(basis)
    rounds = 0
    while fresh:
        rounds += 1
        if rounds > size * size:
            raise RuntimeError("lie_closure failed to stabilise within the ambient dimension")
        new: list[RationalMatrix] = []
        for x in fresh:
            for y in basis + new:
                z = x.commutator(y)
                if not z.is_zero() and span.add(z.flat()):
                    new.append(z)
        basis.extend(new)
        fresh = new
    return LieSubalgebra(size, span.to_subspace(), tag, frame, gram)


def commutant(g: LieSubalgebra) -> Subspace:
    B = g.basis()
    return span_basis([x.commutator(y).flat() for x, y in combinations(B, 2)], g.size ** 2)


def center_dim(mats: Sequence[RationalMatrix]) -> int:
    """Dimension of the centre of span(mats) (assumed bracket closed)."""
    from .linalg import nullspace_sparse

    if not mats:
        return 0
    size = mats[0].rows
    basis = span_basis([m.flat() for m in mats], size * size).basis
    B = [RationalMatrix.from_flat(size, b) for b in basis]
    rows = []
    for y in B:
        comms = [x.commutator(y).flat() for x in B]
        for k in range(size * size):
            r = {i: c[k] for i, c in enumerate(comms) if c[k]}
            if r:
                rows.append(r)
    return nullspace_sparse(rows, len(B)).dim


# --- projections -------------------------------------------------------------

def _trace(M: RationalMatrix) -> Fraction:
    return sum((M[i, i] for i in range(M.rows)), Fraction(0))


def project(g: LieSubalgebra, target: str) -> LieSubalgebra:
    """Coordinate projections of a subalgebra of co(r, s).

    ``so-part`` drops the multiple of the identity (trace part), ``id-part``
    keeps only it, ``so(n)-part`` reads off the A block in the Witt frame.
    """
    N = g.size
    I = RationalMatrix.identity(N)
    if target == "so-part":
        imgs = [M - I.scale(_trace(M) / N) for M in g.basis()]
        return lie_closure(imgs, N, f"pr_so({g.tag})", g.frame, g.gram)
    if target == "id-part":
        imgs = [I.scale(_trace(M) / N) for M in g.basis()]
        return matrix_span(imgs, N, f"pr_id({g.tag})", g.frame, g.gram)
    if target == "so(n)-part":
        n = N - 2
        imgs = [decode(M).A for M in g.basis()]
        return lie_closure(imgs, n, f"pr_so(n)({g.tag})") if imgs else zero_algebra(n)
    raise ValueError(f"unknown projection target {target!r}")


def zero_algebra(size: int, frame: WittFrame | None = None) -> LieSubalgebra:
    return LieSubalgebra(size, Subspace(size * size, ()), "zero", frame)


def preserves_line(g: LieSubalgebra, v) -> bool:
    v = vec(v)
    line = span_basis([v])
    return all(contains(line, M @ v) for M in g.basis())


def preserves_subspace(g: LieSubalgebra, W: Subspace) -> bool:
    return all(contains(W, M @ w) for M in g.basis() for w in W.basis)


def weak_irreducibility_certificate(g: LieSubalgebra, gram: RationalMatrix | None = None,
                                    candidates: Sequence | None = None) -> dict:
    """Check a finite list of candidate subspaces for invariant non-degenerate ones.

    The default candidates are spans of subsets of {p, q, e_i, p+q, p-q}.  This
    does not decide weak irreducibility in general; it only certifies that none
    of the listed subspaces is a proper non-degenerate invariant subspace.
    """
    N = g.size
    G = gram if gram is not None else (g.frame.gram() if g.frame else g.gram)
    if G is None:
        raise ValidationError("an invariant form is required")
    if candidates is None:
        fr = WittFrame(N - 2)
        test = [fr.p(), fr.q()] + [fr.e(i) for i in range(1, N - 1)]
        test += [tuple(a + b for a, b in zip(fr.p(), fr.q())),
                 tuple(a - b for a, b in zip(fr.p(), fr.q()))]
        seen, candidates = set(), []
        for mask in product((0, 1), repeat=len(test)):
            W = span_basis([t for t, m in zip(test, mask) if m], N)
            if 0 < W.dim < N and W.basis not in seen:
                seen.add(W.basis)
                candidates.append(W)
    checked, invariant = 0, []
    for W in candidates:
        gram_W = RationalMatrix.from_rows([[minkowski_product(x, y, G) for y in W.basis]
                                           for x in W.basis])
        if gram_W.rank() < W.dim:
            continue
        checked += 1
        if preserves_subspace(g, W):
            invariant.append(W)
    return {"checked": checked, "invariant": invariant, "passed": not invariant}
