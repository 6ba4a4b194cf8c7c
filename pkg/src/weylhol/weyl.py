"""Weyl connections of Walker metrics, computed on jets at the origin.

Coordinates are ordered (v, x1, ..., xn, u).  For a metric g and a 1-form
omega the connection is the Levi-Civita connection of g plus the tensor

    K^c_{ba} = omega_a delta^c_b + omega_b delta^c_a - g_{ab} omega^c.

``Gamma[a]`` is the matrix whose entry (c, b) is Gamma^c_{ba}, i.e. column b
holds the components of nabla_{d_a} d_b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .errors import DomainError, StructureError, TruncationError, ValidationError
from .jets import JetScalar, walker_variables
from .lie import CoElement, LieSubalgebra, WittFrame, decode, lie_closure
from .linalg import IncrementalSpan, RationalMatrix, span_basis, unit_vector

JetMatrix = list  # list of rows of JetScalar


# --- matrices of jets ---------------------------------------------------------

def jmat_zero(names, order: int, N: int) -> JetMatrix:
    z = JetScalar.zero(names, order)
    return [[z] * N for _ in range(N)]


def jmat_const(names, order: int, M: RationalMatrix) -> JetMatrix:
    return [[JetScalar.constant(names, order, M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def jmat_add(A: JetMatrix, B: JetMatrix) -> JetMatrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def jmat_sub(A: JetMatrix, B: JetMatrix) -> JetMatrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def jmat_scale(A: JetMatrix, c) -> JetMatrix:
    return [[a.scale(c) if not isinstance(c, JetScalar) else a * c for a in r] for r in A]


def jmat_mul(A: JetMatrix, B: JetMatrix) -> JetMatrix:
    N, M, P = len(A), len(B), len(B[0])
    z = A[0][0] if N else None
    zero = JetScalar.zero(z.names, z.order) if z is not None else None
    cols = [[B[k][j] for k in range(M)] for j in range(P)]
    out = []
    for i in range(N):
        row = []
        nz = [(k, a) for k, a in enumerate(A[i]) if a.terms]
        for j in range(P):
            s = zero
            for k, a in nz:
                b = cols[j][k]
                if b.terms:
                    s = s + a * b
            row.append(s)
        out.append(row)
    return out


def jmat_commutator(A: JetMatrix, B: JetMatrix) -> JetMatrix:
    return jmat_sub(jmat_mul(A, B), jmat_mul(B, A))


def jmat_partial(A: JetMatrix, var: int | str) -> JetMatrix:
    return [[a.partial(var) for a in r] for r in A]


def jmat_truncate(A: JetMatrix, order: int) -> JetMatrix:
    return [[a.truncate(order) for a in r] for r in A]


def jmat_value(A: JetMatrix) -> RationalMatrix:
    return RationalMatrix.from_rows([[a.value() for a in r] for r in A])


def jmat_equal(A: JetMatrix, B: JetMatrix, order: int | None = None) -> bool:
    if order is not None:
        A, B = jmat_truncate(A, order), jmat_truncate(B, order)
    return all(a.terms == b.terms for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def jmat_is_zero(A: JetMatrix) -> bool:
    return all(not a.terms for r in A for a in r)


# --- Walker structures --------------------------------------------------------

@dataclass(frozen=True)
class WeylStructure:
    """g = 2 dv du + h_ij dx^i dx^j + 2 A_i dx^i du + H du^2 with omega = f du."""

    n: int
    order: int
    h: tuple
    A: tuple
    H: JetScalar
    f: JetScalar
    label: str = ""

    @property
    def names(self) -> tuple[str, ...]:
        return walker_variables(self.n)

    @property
    def dim(self) -> int:
        return self.n + 2

    def metric(self) -> JetMatrix:
        n, N = self.n, self.n + 2
        names, K = self.names, self.order
        g = jmat_zero(names, K, N)
        one = JetScalar.constant(names, K, 1)
        g[0][N - 1] = g[N - 1][0] = one
        for i in range(n):
            for j in range(n):
                g[1 + i][1 + j] = self.h[i][j]
            g[1 + i][N - 1] = g[N - 1][1 + i] = self.A[i]
        g[N - 1][N - 1] = self.H
        return g

    def omega(self) -> list[JetScalar]:
        z = JetScalar.zero(self.names, self.order)
        return [z] * (self.n + 1) + [self.f]

    def s(self, i: int) -> Fraction:
        """(d_i f)(0) for 1 <= i <= n."""
        return self.f.partial(f"x{i}").value()

    def with_order(self, order: int) -> "WeylStructure":
        t = lambda j: j.truncate(order)  # noqa: E731
        return WeylStructure(self.n, order, tuple(tuple(t(x) for x in r) for r in self.h),
                             tuple(t(a) for a in self.A), t(self.H), t(self.f), self.label)

    def with_gauge(self, f: JetScalar) -> "WeylStructure":
        return WeylStructure(self.n, self.order, self.h, self.A, self.H, f, self.label)


def build_walker(n: int, order: int, H: JetScalar | None = None, f: JetScalar | None = None,
                 A: Sequence[JetScalar] | None = None, h: Sequence[Sequence[JetScalar]] | None = None,
                 label: str = "") -> WeylStructure:
    names = walker_variables(n)
    zero = JetScalar.zero(names, order)

    def own(j: JetScalar | None, what: str) -> JetScalar:
        if j is None:
            return zero
        if j.names != names:
            raise ValidationError(f"{what} uses variables {j.names}, expected {names}")
        return j.truncate(order) if j.order != order else j

    H = own(H, "H")
    f = own(f, "f")
    A = tuple(own(a, f"A_{i + 1}") for i, a in enumerate(A)) if A is not None else (zero,) * n
    if len(A) != n:
        raise ValidationError(f"A needs {n} components")
    if h is None:
        one = JetScalar.constant(names, order, 1)
        h = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
    else:
        h = tuple(tuple(own(x, f"h_{i + 1}{j + 1}") for j, x in enumerate(r)) for i, r in enumerate(h))
    if len(h) != n or any(len(r) != n for r in h):
        raise ValidationError(f"h must be {n}x{n}")
    for i in range(n):
        for j in range(n):
            if h[i][j] != h[j][i]:
                raise ValidationError("h must be symmetric")
            if h[i][j].value() != (1 if i == j else 0):
                raise ValidationError("h must equal the identity at the origin")
            if h[i][j].depends_on("v"):
                raise ValidationError("h must not depend on v")
        if A[i].depends_on("v"):
            raise ValidationError("A must not depend on v")
    return WeylStructure(n, order, h, A, H, f, label)


# --- inverse, connection, curvature ---------------------------------------------

def metric_inverse(g: JetMatrix) -> JetMatrix:
    """Series inverse g^{-1} = sum_k (-g0^{-1} N)^k g0^{-1} with g = g0 + N."""
    N = len(g)
    names, order = g[0][0].names, g[0][0].order
    g0 = jmat_value(g)
    try:
        g0i = g0.inverse()
    except ZeroDivisionError:
        raise DomainError("metric is singular at the origin") from None
    G0i = jmat_const(names, order, g0i)
    Nn = jmat_sub(g, jmat_const(names, order, g0))
    T = jmat_scale(jmat_mul(G0i, Nn), -1)
    out = G0i
    term = G0i
    for _ in range(order):
        term = jmat_mul(T, term)
        if jmat_is_zero(term):
            break
        out = jmat_add(out, term)
    return out


@dataclass
class ConnectionCoefficients:
    gamma: list        # gamma[a][c][b] = Gamma^c_{ba}
    metric: JetMatrix
    inverse: JetMatrix
    omega: list
    levi_civita: list
    K: list

    @property
    def dim(self) -> int:
        return len(self.gamma)

    @property
    def order(self) -> int:
        return self.metric[0][0].order

    def truncated(self, order: int) -> list:
        return [jmat_truncate(G, order) for G in self.gamma]


def levi_civita_coefficients(g: JetMatrix, ginv: JetMatrix) -> list:
    N = len(g)
    dg = [[[g[a][b].partial(d) for b in range(N)] for a in range(N)] for d in range(N)]
    out = []
    for a in range(N):
        # first kind: T[d][b] = (1/2)(d_b g_{da} + d_a g_{db} - d_d g_{ab})
        T = [[(dg[b][d][a] + dg[a][d][b] - dg[d][a][b]).scale(Fraction(1, 2)) for b in range(N)]
             for d in range(N)]
        out.append(jmat_mul(ginv, T))
    return out


def k_tensor(g: JetMatrix, ginv: JetMatrix, omega: Sequence[JetScalar]) -> list:
    N = len(g)
    up = [sum((ginv[c][d] * omega[d] for d in range(N) if omega[d].terms), g[0][0].scale(0))
          for c in range(N)]
    out = []
    for a in range(N):
        M = []
        for c in range(N):
            row = []
            for b in range(N):
                x = -(g[a][b] * up[c])
                if b == c:
                    x = x + omega[a]
                if a == c:
                    x = x + omega[b]
                row.append(x)
            M.append(row)
        out.append(M)
    return out


def connection_from(g: JetMatrix, omega: Sequence[JetScalar]) -> ConnectionCoefficients:
    ginv = metric_inverse(g)
    lc = levi_civita_coefficients(g, ginv)
    K = k_tensor(g, ginv, omega)
    gamma = [jmat_add(a, b) for a, b in zip(lc, K)]
    return ConnectionCoefficients(gamma, g, ginv, list(omega), lc, K)


def weyl_connection(W: WeylStructure, levi_civita: bool = False) -> ConnectionCoefficients:
    omega = W.omega()
    if levi_civita:
        omega = [o.scale(0) for o in omega]
    return connection_from(W.metric(), omega)


def torsion_free(conn: ConnectionCoefficients) -> bool:
    G, N = conn.gamma, conn.dim
    return all(G[a][c][b] == G[b][c][a] for a in range(N) for b in range(N) for c in range(N))


def compatibility_residual(conn: ConnectionCoefficients, factor=2) -> JetMatrix:
    """d_a g_bc - Gamma^d_{ba} g_dc - Gamma^d_{ca} g_bd - factor * omega_a g_bc.

    Returned as a list over a of matrices (b, c), truncated at order K-1 (the
    derivative of an order-K jet is only known to order K-1).
    """
    g, G, w = conn.metric, conn.gamma, conn.omega
    N = len(g)
    k = conn.order - 1
    out = []
    for a in range(N):
        Gg = jmat_mul([list(r) for r in zip(*G[a])], g)  # (Gamma_a^T g)[b][c] = Gamma^d_{ba} g_dc
        M = []
        for b in range(N):
            row = []
            for c in range(N):
                x = g[b][c].partial(a) - Gg[b][c] - Gg[c][b] - (w[a] * g[b][c]).scale(factor)
                row.append(x.truncate(k))
            M.append(row)
        out.append(M)
    return out


def is_compatible(conn: ConnectionCoefficients, factor=2) -> bool:
    return all(jmat_is_zero(M) for M in compatibility_residual(conn, factor))


def conformal_change(g: JetMatrix, omega: Sequence[JetScalar], phi: JetScalar):
    """(e^{2 phi} g, omega - d phi)."""
    if phi.value():
        raise ValidationError("phi must vanish at the origin")
    e = phi.scale(2).exp()
    N = len(g)
    return ([[e * g[i][j] for j in range(N)] for i in range(N)],
            [omega[a] - phi.partial(a) for a in range(N)])


@dataclass
class CurvatureJet:
    R: dict  # (a, b), a < b -> JetMatrix
    dim: int

    def __call__(self, a: int, b: int) -> JetMatrix:
        if a == b:
            z = next(iter(self.R.values()))[0][0].scale(0)
            return [[z] * self.dim for _ in range(self.dim)]
        if a < b:
            return self.R[(a, b)]
        return jmat_scale(self.R[(b, a)], -1)

    def at_origin(self, a: int, b: int) -> RationalMatrix:
        return jmat_value(self(a, b))


def curvature(conn: ConnectionCoefficients, gamma: list | None = None) -> CurvatureJet:
    """R(d_a, d_b) = d_a Gamma_b - d_b Gamma_a + [Gamma_a, Gamma_b]."""
    G = conn.gamma if gamma is None else gamma
    N = len(G)
    R = {}
    for a, b in combinations(range(N), 2):
        R[(a, b)] = jmat_add(jmat_sub(jmat_partial(G[b], a), jmat_partial(G[a], b)),
                             jmat_commutator(G[a], G[b]))
    return CurvatureJet(R, N)


def covariant_derivative(E: JetMatrix, gamma_c: JetMatrix, c: int) -> JetMatrix:
    """nabla_c E = d_c E + [Gamma_c, E] for an endomorphism field E."""
    return jmat_add(jmat_partial(E, c), jmat_commutator(gamma_c, E))


def covariant_derivative_chain(Rj: CurvatureJet, conn: ConnectionCoefficients, pair: tuple[int, int],
                               chain: Sequence[int]) -> JetMatrix:
    """nabla_{a_k} ... nabla_{a_1} (R(d_a, d_b)), chain = (a_1, ..., a_k)."""
    E = Rj(*pair)
    for c in chain:
        E = covariant_derivative(E, conn.gamma[c], c)
    return E


# --- holonomy -------------------------------------------------------------------

def frame_at_origin(W: WeylStructure) -> RationalMatrix:
    """Columns: p = d_v, e_i = d_i - A_i d_v, q = d_u - H/2 d_v at 0."""
    N = W.dim
    cols = [unit_vector(N, 0)]
    for i in range(W.n):
        c = list(unit_vector(N, 1 + i))
        c[0] = -W.A[i].value()
        cols.append(tuple(c))
    c = list(unit_vector(N, N - 1))
    c[0] = -W.H.value() / 2
    cols.append(tuple(c))
    return RationalMatrix.from_columns(cols)


@dataclass
class HolonomyResult:
    algebra: LieSubalgebra
    generators: list          # (pair, chain, CoElement) in the Witt frame
    max_order: int
    order: int
    span_dims: list = field(default_factory=list)  # span dimension after each chain length

    @property
    def dim(self) -> int:
        return self.algebra.dim


def required_order(max_order: int) -> int:
    return max_order + 3


def _sorted_chains(N: int, length: int, start: int = 0) -> Iterator[tuple]:
    if length == 0:
        yield ()
        return
    for c in range(start, N):
        for rest in _sorted_chains(N, length - 1, c):
            yield (c,) + rest


def holonomy_generate(W: WeylStructure, max_order: int = 4, levi_civita: bool = False,
                      prune: bool = False) -> HolonomyResult:
    """Lie closure of the values at 0 of nabla_{a_k}...nabla_{a_1} R(d_a, d_b), k <= max_order.

    Chains are taken with non-decreasing index sequences.  Two orderings of the
    same chain differ, by the Ricci identity for endomorphism fields, by
    brackets of shorter chains, so the Lie closure is unchanged.
    """
    if max_order < 0:
        raise ValidationError("max_order must be non-negative")
    need = required_order(max_order)
    if W.order < need:
        raise TruncationError(need, W.order)
    F = frame_at_origin(W)
    if F != RationalMatrix.identity(W.dim):
        raise ValidationError("the frame (p, e_i, q) must agree with (d_v, d_i, d_u) at the origin; "
                              "A_i(0) and H(0) must vanish")
    Finv = F.inverse()
    m = max_order
    # R to order m is all that chains of length <= m can see at 0
    Wm = W.with_order(m + 2)
    conn = weyl_connection(Wm, levi_civita)
    N = W.dim
    gam = {k: conn.truncated(k) for k in range(0, m + 2)}
    Rj = curvature(conn, gam[m + 1])
    gens: list = []
    acc = IncrementalSpan(N * N)
    dims = []

    def record(pair, chain, E):
        M = Finv @ jmat_value(E) @ F
        try:
            c = decode(M)
        except StructureError as exc:
            raise StructureError(f"holonomy generator {pair}{chain} does not preserve Rp: {exc}") from exc
        if acc.add(M.flat()):
            gens.append((pair, tuple(chain), c))

    level = {}
    for a, b in combinations(range(N), 2):
        E = jmat_truncate(Rj(a, b), m)
        level[((a, b), ())] = E
        record((a, b), (), E)
    dims.append(len(acc))
    for depth in range(1, m + 1):
        before = len(acc)
        nxt = {}
        o = m - depth
        for (pair, chain), E in level.items():
            start = chain[-1] if chain else 0
            for c in range(start, N):
                # differentiate before truncating: E is exact to order o + 1
                E2 = jmat_add(jmat_truncate(jmat_partial(E, c), o),
                              jmat_commutator(gam[o][c], jmat_truncate(E, o)))
                nxt[(pair, chain + (c,))] = E2
                record(pair, chain + (c,), E2)
        level = nxt
        dims.append(len(acc))
        if prune and len(acc) == before:
            break
    mats = [c.matrix() for _, _, c in gens]
    fr = WittFrame(W.n)
    alg = lie_closure(mats, N, "hol", fr, fr.gram()) if mats else LieSubalgebra(
        N, span_basis([], N * N), "hol", fr, fr.gram())
    return HolonomyResult(alg, gens, m, W.order, dims)


@dataclass(frozen=True)
class HolonomyComparison:
    contained: bool   # generated inside target
    contains: bool    # target inside generated
    generated_dim: int
    target_dim: int

    @property
    def equal(self) -> bool:
        return self.contained and self.contains


def compare_holonomy(generated: LieSubalgebra, target: LieSubalgebra) -> HolonomyComparison:
    return HolonomyComparison(generated.is_subalgebra_of(target), target.is_subalgebra_of(generated),
                              generated.dim, target.dim)


def translations_contained(alg: LieSubalgebra) -> bool:
    """(0, 0, 0, e_i) lies in the algebra for every i."""
    n = alg.size - 2
    Z = RationalMatrix.zeros(n)
    return all(CoElement(Fraction(0), Fraction(0), Z, unit_vector(n, i)) in alg for i in range(n))


def is_stable(build: Callable[[int], WeylStructure], max_order: int, levi_civita: bool = False) -> tuple[bool, HolonomyResult, HolonomyResult]:
    """Compare the generated algebras at max_order and max_order + 1 on one structure."""
    W = build(required_order(max_order + 1))
    a = holonomy_generate(W, max_order, levi_civita)
    b = holonomy_generate(W, max_order + 1, levi_civita)
    return a.algebra.same_as(b.algebra), a, b
