"""Spaces of algebraic curvature tensors, weak curvature tensors and prolongations.

A curvature tensor of type g is an antisymmetric bilinear map R on R^N with
values in g satisfying the first Bianchi identity.  All spaces here are
computed as kernels of one sparse linear system over the coefficients of the
unknown map in a basis of g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .errors import StructureError, ValidationError
from .families import co_rp
from .lie import (
    CoElement,
    LieSubalgebra,
    WittFrame,
    decode,
    euclidean_gram,
    is_bracket_closed,
    is_co_element,
    matrix_span,
    wedge,
)
from .linalg import (
    RationalMatrix,
    Subspace,
    nullspace_sparse,
    solve_coordinates,
    span_basis,
    subspace_equal,
    unit_vector,
    vec,
    zero_subspace,
)


def _pairs(N: int) -> list[tuple[int, int]]:
    return list(combinations(range(N), 2))


@dataclass(frozen=True)
class CurvatureTensorMap:
    """R(e_i, e_j) for i < j, stored in combinations order."""

    N: int
    values: tuple
    target: LieSubalgebra | None = None

    def pair(self, i: int, j: int) -> RationalMatrix:
        if i == j:
            return RationalMatrix.zeros(self.N)
        if i > j:
            return -self.pair(j, i)
        return self.values[_pair_index(self.N, i, j)]

    def evaluate(self, x, y) -> RationalMatrix:
        x, y = vec(x), vec(y)
        out = RationalMatrix.zeros(self.N)
        for (i, j), R in zip(_pairs(self.N), self.values):
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                out = out + R.scale(c)
        return out

    def __call__(self, x, y) -> RationalMatrix:
        return self.evaluate(x, y)

    def __add__(self, other: "CurvatureTensorMap") -> "CurvatureTensorMap":
        return CurvatureTensorMap(self.N, tuple(a + b for a, b in zip(self.values, other.values)),
                                  self.target)

    def scale(self, c) -> "CurvatureTensorMap":
        return CurvatureTensorMap(self.N, tuple(R.scale(c) for R in self.values), self.target)

    def is_zero(self) -> bool:
        return all(R.is_zero() for R in self.values)

    def bianchi_violations(self) -> list[tuple[int, int, int]]:
        bad = []
        for i, j, l in combinations(range(self.N), 3):
            s = (self.pair(i, j).column(l), self.pair(j, l).column(i), self.pair(l, i).column(j))
            if any(a + b + c for a, b, c in zip(*s)):
                bad.append((i, j, l))
        return bad

    def values_in(self, g: LieSubalgebra) -> bool:
        return all(g.contains(R) for R in self.values)


def _pair_index(N: int, i: int, j: int) -> int:
    # position of (i, j), i < j, in combinations(range(N), 2)
    return i * N - i * (i + 1) // 2 + (j - i - 1)


def tensor_from_function(N: int, fn, target: LieSubalgebra | None = None) -> CurvatureTensorMap:
    return CurvatureTensorMap(N, tuple(fn(i, j) for i, j in _pairs(N)), target)


def curvature_space(g: LieSubalgebra) -> list[CurvatureTensorMap]:
    """Basis of R(g): unknowns c[(i<j), k] with R(e_i, e_j) = sum_k c B_k."""
    if not is_bracket_closed(g):
        raise ValidationError("g is not closed under the bracket")
    N = g.size
    B = g.basis()
    d = len(B)
    if d == 0:
        return []
    pairs = _pairs(N)

    def u(i, j, k):
        return _pair_index(N, i, j) * d + k

    # column c of each basis matrix, sparse
    cols = [[{r: Bk[r, c] for r in range(N) if Bk[r, c]} for c in range(N)] for Bk in B]
    rows = []
    for i, j, l in combinations(range(N), 3):
        eq: dict[int, dict[int, Fraction]] = {}
        for (a, b, c, sign) in ((i, j, l, 1), (j, l, i, 1), (i, l, j, -1)):
            for k in range(d):
                for r, x in cols[k][c].items():
                    row = eq.setdefault(r, {})
                    idx = u(a, b, k)
                    v = row.get(idx, 0) + sign * x
                    if v:
                        row[idx] = v
                    else:
                        row.pop(idx, None)
        rows.extend(r for r in eq.values() if r)
    ker = nullspace_sparse(rows, len(pairs) * d)
    out = []
    for vecc in ker.basis:
        vals = []
        for p in range(len(pairs)):
            M = RationalMatrix.zeros(N)
            for k in range(d):
                c = vecc[p * d + k]
                if c:
                    M = M + B[k].scale(c)
            vals.append(M)
        out.append(CurvatureTensorMap(N, tuple(vals), g))
    return out


def generated_algebra(basis: Sequence[CurvatureTensorMap], size: int | None = None) -> Subspace:
    """L(R): span of all values R(e_i, e_j)."""
    if not basis:
        if size is None:
            raise ValueError("size required for an empty basis")
        return zero_subspace(size * size)
    N = basis[0].N
    return span_basis([R.flat() for T in basis for R in T.values], N * N)


@dataclass(frozen=True)
class BergerVerdict:
    is_berger: bool
    witness: Subspace
    curvature_dim: int

    def report(self, g: LieSubalgebra) -> dict:
        violations = [] if self.is_berger else [
            f"L(R(g)) has dimension {self.witness.dim}, g has dimension {g.dim}"]
        return {"op": "berger", "dim": self.curvature_dim, "is_berger": self.is_berger,
                "witness_dim": self.witness.dim, "violations": violations}


def berger_check(g: LieSubalgebra) -> BergerVerdict:
    basis = curvature_space(g)
    L = generated_algebra(basis, g.size)
    return BergerVerdict(subspace_equal(L, g.carrier), L, len(basis))


# --- weak curvature tensors ---------------------------------------------------

@dataclass(frozen=True)
class WeakCurvature:
    """P(e_i) for i = 1..n as n x n matrices; P(e_i) e_j = sum_k P^k_{ji} e_k."""

    values: tuple

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, x) -> RationalMatrix:
        x = vec(x)
        out = RationalMatrix.zeros(self.n)
        for c, P in zip(x, self.values):
            if c:
                out = out + P.scale(c)
        return out

    def cyclic_violations(self, gram: RationalMatrix | None = None) -> list[tuple[int, int, int]]:
        return _cyclic_violations(list(self.values), gram)


def _cyclic_violations(P: list[RationalMatrix], gram=None) -> list:
    n = len(P)
    G = euclidean_gram(n) if gram is None else gram
    GP = [G @ M for M in P]
    return [(a, b, c) for a, b, c in permutations(range(n), 3)
            if GP[a][c, b] + GP[b][a, c] + GP[c][b, a]]


def weak_curvature_space(h: LieSubalgebra, gram: RationalMatrix | None = None) -> list[WeakCurvature]:
    """Basis of P(h) = {P in Hom(R^n, h) : g(P(X)Y, Z) + cyclic = 0}."""
    n = h.size
    G = euclidean_gram(n) if gram is None else gram
    B = h.basis()
    d = len(B)
    if d == 0:
        return []
    GB = [G @ M for M in B]
    rows = []
    for a, b, c in permutations(range(n), 3):
        row: dict[int, Fraction] = {}
        for (i, r, s) in ((a, c, b), (b, a, c), (c, b, a)):
            for k in range(d):
                x = GB[k][r, s]
                if x:
                    v = row.get(i * d + k, 0) + x
                    if v:
                        row[i * d + k] = v
                    else:
                        row.pop(i * d + k)
        if row:
            rows.append(row)
    ker = nullspace_sparse(rows, n * d)
    return [WeakCurvature(tuple(_combine(B, v[i * d:(i + 1) * d], n) for i in range(n)))
            for v in ker.basis]


def _combine(B: Sequence[RationalMatrix], coeffs, size: int) -> RationalMatrix:
    M = RationalMatrix.zeros(size)
    for c, Bk in zip(coeffs, B):
        if c:
            M = M + Bk.scale(c)
    return M


@dataclass(frozen=True)
class WeakBergerVerdict:
    holds: bool
    witness: Subspace
    space_dim: int


def weak_berger_check(h: LieSubalgebra, gram: RationalMatrix | None = None) -> WeakBergerVerdict:
    basis = weak_curvature_space(h, gram)
    n = h.size
    W = span_basis([P.flat() for T in basis for P in T.values], n * n)
    return WeakBergerVerdict(subspace_equal(W, h.carrier), W, len(basis))


# --- prolongations ------------------------------------------------------------

@dataclass(frozen=True)
class Prolongation:
    """Basis of g^(1); each element is the tuple (phi(e_1), ..., phi(e_N))."""

    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def first_prolongation(g: LieSubalgebra) -> Prolongation:
    N = g.size
    B = g.basis()
    d = len(B)
    if d == 0:
        return Prolongation(())
    rows = []
    for i, j in combinations(range(N), 2):
        for r in range(N):
            row = {}
            for k in range(d):
                x, y = B[k][r, j], B[k][r, i]
                if x:
                    row[i * d + k] = x
                if y:
                    row[j * d + k] = -y
            if row:
                rows.append(row)
    ker = nullspace_sparse(rows, N * d)
    return Prolongation(tuple(tuple(_combine(B, v[i * d:(i + 1) * d], N) for i in range(N))
                              for v in ker.basis))


def prolongation_is_symmetric(phi: Sequence[RationalMatrix]) -> bool:
    N = len(phi)
    return all(phi[i].column(j) == phi[j].column(i) for i, j in combinations(range(N), 2))


@dataclass(frozen=True)
class ProlongationCriterion:
    prolongation_nonzero: bool
    contains_generators: bool

    @property
    def agree(self) -> bool:
        return self.prolongation_nonzero == self.contains_generators


def prolongation_nonzero_criterion(f: LieSubalgebra) -> ProlongationCriterion:
    """Compare f^(1) != 0 with R(p ^ q + id) + R^n inside f."""
    n = f.size - 2
    if not all(is_co_element(M) for M in f.basis()):
        raise ValidationError("f must lie in co(1, n+1)_{Rp}")
    Z = RationalMatrix.zeros(n)
    gens = [CoElement(Fraction(1), Fraction(-1), Z, (Fraction(0),) * n)]
    gens += [CoElement(Fraction(0), Fraction(0), Z, unit_vector(n, i)) for i in range(n)]
    inside = all(g in f for g in gens)
    return ProlongationCriterion(first_prolongation(f).dim > 0, inside)


# --- structure of R(co(1, n+1)_{Rp}) --------------------------------------------

@dataclass(frozen=True)
class CurvatureComponents:
    mu: Fraction
    lam: Fraction
    A0: RationalMatrix
    X0: tuple
    Z0: tuple
    gamma: tuple
    P: tuple          # P(e_i), i = 1..n
    K: RationalMatrix  # column i is K(e_i)
    S: dict           # (i, j) -> S(e_i, e_j), i < j, 0-based
    tau: dict         # (i, j) -> tau(e_i, e_j)

    @property
    def n(self) -> int:
        return len(self.X0)

    def L(self, U, V) -> tuple:
        U, V = vec(U), vec(V)
        PU = _combine(self.P, U, self.n)
        PV = _combine(self.P, V, self.n)
        gU = sum((g * x for g, x in zip(self.gamma, U)), Fraction(0))
        gV = sum((g * x for g, x in zip(self.gamma, V)), Fraction(0))
        a, b = PV @ U, PU @ V
        return tuple(a[k] + gV * U[k] - b[k] - gU * V[k] for k in range(self.n))

    def is_zero(self) -> bool:
        return (not self.mu and not self.lam and self.A0.is_zero() and not any(self.X0)
                and not any(self.Z0) and not any(self.gamma)
                and all(P.is_zero() for P in self.P) and self.K.is_zero()
                and all(M.is_zero() for M in self.S.values()) and not any(self.tau.values()))


def _check_co_tensor(R: CurvatureTensorMap) -> None:
    for M in R.values:
        try:
            decode(M)
        except StructureError as exc:
            raise ValidationError(f"R does not take values in co(1, n+1)_Rp: {exc}") from exc
    if R.bianchi_violations():
        raise ValidationError("R violates the Bianchi identity")


def decompose_curvature(R: CurvatureTensorMap) -> CurvatureComponents:
    """Read the components of R by evaluating on (p,q), (p,e_i), (e_i,e_j), (e_i,q)."""
    _check_co_tensor(R)
    N = R.N
    n = N - 2
    p, q = 0, N - 1
    e = lambda i: 1 + i  # noqa: E731
    pq = decode(R.pair(p, q))
    Z0 = tuple(decode(R.pair(p, e(i))).b for i in range(n))
    tau, S = {}, {}
    for i, j in combinations(range(n), 2):
        c = decode(R.pair(e(i), e(j)))
        tau[(i, j)] = c.b
        S[(i, j)] = c.A
    # tau(U, V) = (A0 U, V) gives (A0)_{ji} = tau(e_i, e_j)
    A0 = RationalMatrix.from_rows([[_tau(tau, j, i) for j in range(n)] for i in range(n)])
    Uq = [decode(R.pair(e(i), q)) for i in range(n)]
    gamma = tuple(c.b for c in Uq)
    P = tuple(c.A for c in Uq)
    K = RationalMatrix.from_columns([c.X for c in Uq]) if n else RationalMatrix.zeros(0)
    return CurvatureComponents(pq.b, pq.a, A0, pq.X, Z0, gamma, P, K, S, tau)


def _tau(tau: dict, i: int, j: int) -> Fraction:
    if i == j:
        return Fraction(0)
    return tau[(i, j)] if i < j else -tau[(j, i)]


def reconstruct(c: CurvatureComponents) -> CurvatureTensorMap:
    """Assemble R from its components by the structure formulas."""
    n = c.n
    N = n + 2
    E = euclidean_gram(n)
    zero = (Fraction(0),) * n

    def val(x: int, y: int) -> RationalMatrix:
        if x == 0 and y == N - 1:
            return CoElement(c.mu, c.lam, c.A0, c.X0).matrix()
        if x == 0:
            V = unit_vector(n, y - 1)
            zv = c.Z0[y - 1]
            AV = (c.A0 + E.scale(c.mu)) @ V
            return CoElement(zv, zv, wedge(c.Z0, V, E), tuple(-t for t in AV)).matrix()
        if y == N - 1:
            i = x - 1
            U = unit_vector(n, i)
            g = c.gamma[i]
            return CoElement(g, c.X0[i] - g, c.P[i], c.K.column(i)).matrix()
        i, j = x - 1, y - 1
        U, V = unit_vector(n, i), unit_vector(n, j)
        t = (c.A0 @ U)[j]
        return CoElement(t, t, c.S[(i, j)], c.L(U, V)).matrix()

    return tensor_from_function(N, val, co_rp(n))


@dataclass(frozen=True)
class ComponentInvariants:
    tau_matches_A0: bool
    K_symmetric: bool
    P_cyclic: bool
    S_tau_curvature: bool


def component_invariants(c: CurvatureComponents) -> ComponentInvariants:
    n = c.n
    A0 = c.A0
    tau_ok = all(c.tau[(i, j)] == (A0 @ unit_vector(n, i))[j] for i, j in combinations(range(n), 2))
    K_ok = (c.K - c.K.T).is_zero()
    P_ok = not _cyclic_violations(list(c.P))
    I = RationalMatrix.identity(n)
    T = tensor_from_function(n, lambda i, j: c.S[(i, j)] + I.scale(c.tau[(i, j)]))
    return ComponentInvariants(tau_ok, K_ok, P_ok, not T.bianchi_violations() if n else True)


@dataclass(frozen=True)
class ConstraintReport:
    Z0_zero: bool
    tau_zero: bool
    A0_zero: bool
    S_in_R_h: bool
    P_in_P_h: bool

    @property
    def all_pass(self) -> bool:
        return all((self.Z0_zero, self.tau_zero, self.A0_zero, self.S_in_R_h, self.P_in_P_h))

    def failures(self) -> list[str]:
        return [k for k, v in self.__dict__.items() if not v]


def check_structure_constraints(h: LieSubalgebra, R: CurvatureTensorMap) -> ConstraintReport:
    """Constraints on R in R(g) when the so(n)-projection h of g is proper."""
    c = decompose_curvature(R)
    n = c.n
    if h.size != n:
        raise ValidationError("h must be a subalgebra of so(n)")
    S = tensor_from_function(n, lambda i, j: c.S[(i, j)])
    S_ok = (n < 2) or (S.values_in(h) and not S.bianchi_violations())
    P_ok = all(h.contains(P) for P in c.P) and not _cyclic_violations(list(c.P))
    return ConstraintReport(not any(c.Z0), not any(c.tau.values()), c.A0.is_zero(), S_ok, P_ok)


# --- conformal products: the mixed part ---------------------------------------

def mixed_part_map(R: CurvatureTensorMap, n1: int) -> RationalMatrix | None:
    """Recover Z : V2 -> V1 from the mixed part of R on V1 + V2 (Euclidean).

    Returns the matrix of Z when R(X1, X2) = Z(X2) ^ X1 + Z*(X1) ^ X2 + (Z(X2), X1) id
    for all basis vectors, and None otherwise.
    """
    N = R.N
    n2 = N - n1
    G = euclidean_gram(N)
    I = RationalMatrix.identity(N)
    # the id component of R(e_a, f_b) is (Z(f_b), e_a) = Z_{ab}
    Zm = RationalMatrix.from_rows([[_id_part(R.pair(a, n1 + b)) for b in range(n2)]
                                   for a in range(n1)])
    for a in range(n1):
        for b in range(n2):
            X1, X2 = unit_vector(N, a), unit_vector(N, n1 + b)
            ZX2 = tuple(Zm[r, b] for r in range(n1)) + (Fraction(0),) * n2
            ZsX1 = (Fraction(0),) * n1 + tuple(Zm[a, s] for s in range(n2))
            expect = wedge(ZX2, X1, G) + wedge(ZsX1, X2, G) + I.scale(ZX2[a])
            if expect != R.pair(a, n1 + b):
                return None
    return Zm


def _id_part(M: RationalMatrix) -> Fraction:
    # the skew part has zero diagonal, so the id coefficient is the mean diagonal entry
    N = M.rows
    return sum((M[i, i] for i in range(N)), Fraction(0)) / N


def curvature_report(g: LieSubalgebra) -> dict:
    return berger_check(g).report(g)
