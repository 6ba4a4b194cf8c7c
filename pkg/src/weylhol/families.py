"""Constructors for the classified subalgebras of co(1, n+1).

Every constructor returns a :class:`LieSubalgebra` written in the Witt basis
(p, e_1, ..., e_n, q), except ``so-sum`` which lives on Euclidean R^N.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import ValidationError
from .lie import (
    CoElement,
    LieSubalgebra,
    WittFrame,
    center_dim,
    embed_block,
    euclidean_gram,
    is_bracket_closed,
    is_skew,
    lie_closure,
    matrix_span,
    so_basis,
    wedge,
)
from .linalg import Q, RationalMatrix, solve_coordinates, span_basis, unit_vector, vec

FAMILIES = (
    "g1h", "g2h", "g3h-phi", "g4h-m-psi",
    "g-alpha-theta-1", "g-theta-2", "g-theta-3-phi",
    "conformal-product-1", "conformal-product-2", "conformal-product-3",
    "b2-twist", "g4-twist", "so-twist", "so-sum", "custom",
)

_RID = re.compile(r"^Rid-plus\((?P<inner>[\w-]+)\)$")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int
    h_basis: tuple = ()
    theta: tuple = ()
    phi: tuple = ()
    alpha: Fraction = Fraction(0)
    psi: tuple = ()
    k: int = 0
    m: int | None = None
    n0: int = 0
    a: Fraction = Fraction(0)
    theta2: tuple = ()
    blocks: tuple = ()
    block_bases: tuple | None = None
    with_id: bool = True
    basis: tuple = ()
    extra: dict = field(default_factory=dict, compare=False)


# --- small helpers ----------------------------------------------------------

def J() -> RationalMatrix:
    return RationalMatrix.from_rows([[0, -1], [1, 0]])


def subalgebra_menu(name: str, n: int, offset: int = 0) -> list[RationalMatrix]:
    """Named subalgebras of so(n) placed on the coordinates offset, offset+1, ...

    ``0``, ``so2``, ``so3``, ``so2+so2``, ``so(k)`` for an integer k, and
    ``u1`` (span of J + J inside so(4)).
    """
    def put(A: RationalMatrix, off: int) -> RationalMatrix:
        if off + A.rows > n:
            raise ValidationError(f"{name} does not fit into so({n}) at offset {offset}")
        return embed_block(A, n, off)

    if name in ("0", "zero"):
        return []
    if name == "so2":
        return [put(J(), offset)]
    if name == "so3":
        return [put(A, offset) for A in so_basis(3)]
    if name == "so2+so2":
        return [put(J(), offset), put(J(), offset + 2)]
    if name == "u1":
        return [put(J(), offset) + put(J(), offset + 2)]
    m = re.fullmatch(r"so\((\d+)\)", name)
    if m:
        return [put(A, offset) for A in so_basis(int(m.group(1)))]
    raise ValidationError(f"unknown subalgebra {name!r}")


def functional_value(basis: Sequence[RationalMatrix], coeffs: Sequence, M: RationalMatrix) -> Fraction:
    """Evaluate the functional with the given values on ``basis`` at M in its span."""
    if not coeffs or not any(coeffs):
        return Fraction(0)
    c = solve_coordinates([b.flat() for b in basis], M.flat())
    if c is None:
        raise ValidationError("element is not in the span of the basis")
    return sum((Q(x) * y for x, y in zip(coeffs, c)), Fraction(0))


def vanishes_on_commutant(basis: Sequence[RationalMatrix], coeffs: Sequence) -> bool:
    return all(functional_value(basis, coeffs, x.commutator(y)) == 0
               for x, y in combinations(basis, 2))


def validate_h(h_basis: Sequence[RationalMatrix], n: int, what: str = "h") -> None:
    for A in h_basis:
        if A.shape != (n, n):
            raise ValidationError(f"{what} basis matrices must be {n}x{n}")
        if not is_skew(A):
            raise ValidationError(f"{what} basis matrices must be skew-symmetric")
    if h_basis:
        if span_basis([A.flat() for A in h_basis]).dim != len(h_basis):
            raise ValidationError(f"{what} basis is linearly dependent")
        if not is_bracket_closed(matrix_span(h_basis, n)):
            raise ValidationError(f"{what} is not closed under the bracket")


def _coeffs(values: Sequence, length: int, name: str) -> tuple:
    values = vec(values)
    if not values:
        return (Fraction(0),) * length
    if len(values) != length:
        raise ValidationError(f"{name} needs {length} coefficients, got {len(values)}")
    return values


def _check_functional(h: Sequence[RationalMatrix], coeffs: tuple, name: str) -> None:
    if not vanishes_on_commutant(h, coeffs):
        raise ValidationError(f"{name} must vanish on [h, h]")


def _X(n: int, i: int) -> tuple:
    return unit_vector(n, i)


def _co(b, a, A: RationalMatrix, X) -> RationalMatrix:
    return CoElement(Q(b), Q(a), A, vec(X)).matrix()


# --- the families -------------------------------------------------------------

def _translations(n: int, idx) -> list[RationalMatrix]:
    Z = RationalMatrix.zeros(n)
    return [_co(0, 0, Z, _X(n, i)) for i in idx]


def _witt(n: int, mats, tag: str) -> LieSubalgebra:
    fr = WittFrame(n)
    g = matrix_span(mats, n + 2, tag, fr, fr.gram())
    return g


def _type_base(spec: FamilySpec, fam: str) -> list[RationalMatrix]:
    n, h = spec.n, list(spec.h_basis)
    Z = RationalMatrix.zeros(n)
    zero = (0,) * n
    if fam == "g1h":
        validate_h(h, n)
        return [_co(0, 1, Z, zero)] + [_co(0, 0, A, zero) for A in h] + _translations(n, range(n))
    if fam == "g2h":
        validate_h(h, n)
        return [_co(0, 0, A, zero) for A in h] + _translations(n, range(n))
    if fam == "g3h-phi":
        validate_h(h, n)
        phi = _coeffs(spec.phi, len(h), "phi")
        if not any(phi):
            raise ValidationError("type 3 requires a non-zero phi")
        if center_dim(h) == 0:
            raise ValidationError("type 3 requires h with non-trivial centre")
        _check_functional(h, phi, "phi")
        return [_co(0, p, A, zero) for p, A in zip(phi, h)] + _translations(n, range(n))
    if fam == "g4h-m-psi":
        m, h, psi = _type4_data(spec)
        return ([_co(0, 0, A, tuple(psi_i)) for A, psi_i in zip(h, psi)]
                + _translations(n, range(m)))
    raise ValidationError(f"unknown base family {fam!r}")


def _type4_data(spec: FamilySpec):
    n = spec.n
    m = spec.m
    if m is None or not 0 <= m <= n:
        raise ValidationError("type 4 requires 0 <= m <= n")
    h = []
    for A in spec.h_basis:
        if A.shape == (m, m):
            A = embed_block(A, n, 0)
        if A.shape != (n, n):
            raise ValidationError("type 4 h basis must be m x m or n x n")
        if any(A[i, j] for i in range(n) for j in range(n) if i >= m or j >= m):
            raise ValidationError("type 4 requires h inside so(m)")
        h.append(A)
    validate_h(h, n)
    psi = [vec(p) for p in spec.psi]
    if len(psi) != len(h) or any(len(p) != n - m for p in psi):
        raise ValidationError("psi must give one vector of R^{n-m} per h basis element")
    if n - m > 0 and span_basis(psi, n - m).dim != n - m:
        raise ValidationError("psi must be surjective onto R^{n-m}")
    if center_dim(h) < n - m:
        raise ValidationError("type 4 requires dim z(h) >= n - m")
    for r in range(n - m):
        _check_functional(h, [p[r] for p in psi], "psi")
    full = [(0,) * m + tuple(p) for p in psi]
    return m, h, full


def _cp_blocks(spec: FamilySpec) -> tuple[list[RationalMatrix], list[RationalMatrix]]:
    """(kappa basis, so(n-k) basis) as n x n matrices."""
    n, k = spec.n, spec.k
    kappa = []
    for A in spec.h_basis:
        if A.shape == (k, k):
            A = embed_block(A, n, 0)
        if A.shape != (n, n) or any(A[i, j] for i in range(n) for j in range(n) if i >= k or j >= k):
            raise ValidationError("kappa must be a subalgebra of so(k) on e_1..e_k")
        kappa.append(A)
    validate_h(kappa, n, "kappa")
    rest = [embed_block(A, n, k) for A in so_basis(n - k)]
    return kappa, rest


def make_family(spec: FamilySpec) -> LieSubalgebra:
    fam, n = spec.family, spec.n
    if n < 0:
        raise ValidationError("n must be non-negative")
    I = RationalMatrix.identity(n + 2)
    Z = RationalMatrix.zeros(n)
    zero = (0,) * n
    h = list(spec.h_basis)

    m = _RID.match(fam)
    if m:
        inner = m.group("inner")
        return _witt(n, [I] + _type_base(spec, inner), fam)
    if fam in ("g1h", "g2h", "g3h-phi", "g4h-m-psi"):
        return _witt(n, _type_base(spec, fam), fam)

    if fam == "g-alpha-theta-1":
        validate_h(h, n)
        theta = _coeffs(spec.theta, len(h), "theta")
        _check_functional(h, theta, "theta")
        if spec.alpha == 0 and not any(theta):
            raise ValidationError("g-alpha-theta-1 requires alpha^2 + theta^2 != 0")
        mats = ([_co(spec.alpha, 1, Z, zero)]
                + [_co(t, 0, A, zero) for t, A in zip(theta, h)]
                + _translations(n, range(n)))
        return _witt(n, mats, fam)

    if fam == "g-theta-2":
        validate_h(h, n)
        theta = _coeffs(spec.theta, len(h), "theta")
        if not any(theta):
            raise ValidationError("g-theta-2 requires a non-zero theta")
        _check_functional(h, theta, "theta")
        mats = [_co(t, 0, A, zero) for t, A in zip(theta, h)] + _translations(n, range(n))
        return _witt(n, mats, fam)

    if fam == "g-theta-3-phi":
        validate_h(h, n)
        theta = _coeffs(spec.theta, len(h), "theta")
        phi = _coeffs(spec.phi, len(h), "phi")
        if not any(theta) or not any(phi):
            raise ValidationError("g-theta-3-phi requires non-zero theta and phi")
        _check_functional(h, theta, "theta")
        _check_functional(h, phi, "phi")
        mats = ([_co(t, p, A, zero) for t, p, A in zip(theta, phi, h)]
                + _translations(n, range(n)))
        return _witt(n, mats, fam)

    if fam == "b2-twist":
        # {(theta1(A), 0, A, 0)} + {(theta2(X), 0, 0, X) : X in R^{n0}}, semidirect (R^{n0})^perp
        validate_h(h, n)
        n0 = spec.n0
        if not 0 <= n0 <= n:
            raise ValidationError("b2-twist requires 0 <= n0 <= n")
        for A in h:
            if any(A[i, j] for i in range(n) for j in range(n0)):
                raise ValidationError("h must act trivially on R^{n0}")
        theta = _coeffs(spec.theta, len(h), "theta")
        theta2 = _coeffs(spec.theta2, n0, "theta2")
        _check_functional(h, theta, "theta")
        mats = ([_co(t, 0, A, zero) for t, A in zip(theta, h)]
                + [_co(t, 0, Z, _X(n, i)) for i, t in enumerate(theta2)]
                + _translations(n, range(n0, n)))
        return _witt(n, mats, fam)

    if fam == "g4-twist":
        mm, h4, psi = _type4_data(spec)
        theta = _coeffs(spec.theta, len(h4), "theta")
        _check_functional(h4, theta, "theta")
        mats = ([_co(t, 0, A, p) for t, A, p in zip(theta, h4, psi)]
                + _translations(n, range(mm)))
        return _witt(n, mats, fam)

    fr = WittFrame(n)
    G = fr.gram()
    if fam == "conformal-product-1":
        k = spec.k
        if not -1 <= k <= n - 1:
            raise ValidationError("conformal-product-1 requires -1 <= k <= n-1")
        if k == -1:
            p, q = fr.p(), fr.q()
            V1 = [tuple(x - y for x, y in zip(p, q))]
            V2 = [tuple(x + y for x, y in zip(p, q))] + [fr.e(i) for i in range(1, n + 1)]
        else:
            V1 = [fr.p()] + [fr.e(i) for i in range(1, k + 1)] + [fr.q()]
            V2 = [fr.e(i) for i in range(k + 1, n + 1)]
        mats = [I] + [wedge(x, y, G) for V in (V1, V2) for x, y in combinations(V, 2)]
        return _witt(n, mats, fam)

    if fam in ("conformal-product-2", "conformal-product-3"):
        k = spec.k
        lo = 0 if fam == "conformal-product-2" else 1
        if not lo <= k <= n - 1:
            raise ValidationError(f"{fam} requires {lo} <= k <= n-1")
        kappa, rest = _cp_blocks(spec)
        compact = kappa + rest
        transl = _translations(n, range(k))
        if fam == "conformal-product-2":
            theta = _coeffs(spec.theta, len(compact), "theta")
            _check_functional(compact, theta, "theta")
            mats = ([_co(1, -1, Z, zero)]
                    + [_co(t, 0, B, zero) for t, B in zip(theta, compact)] + transl)
        else:
            mats = [I, _co(0, -1, Z, zero)] + [_co(0, 0, B, zero) for B in compact] + transl
        return _witt(n, mats, fam)

    if fam == "so-twist":
        # so(1, k+1) + R(e_{n-1} ^ e_n + a id) with k = n - 2
        if n < 2:
            raise ValidationError("so-twist requires n >= 2")
        if spec.a == 0:
            raise ValidationError("so-twist requires a != 0")
        V1 = [fr.p()] + [fr.e(i) for i in range(1, n - 1)] + [fr.q()]
        mats = [wedge(x, y, G) for x, y in combinations(V1, 2)]
        mats.append(wedge(fr.e(n - 1), fr.e(n), G) + I.scale(spec.a))
        return _witt(n, mats, fam)

    if fam == "so-sum":
        sizes = list(spec.blocks)
        N = sum(sizes)
        mats, off = [], 0
        for b, size in enumerate(sizes):
            block = (spec.block_bases[b] if spec.block_bases is not None
                     else so_basis(size))
            validate_h(list(block), size, f"block {b}")
            mats += [embed_block(A, N, off) for A in block]
            off += size
        if spec.with_id:
            mats.append(RationalMatrix.identity(N))
        return matrix_span(mats, N, fam, None, euclidean_gram(N))

    if fam == "custom":
        mats = list(spec.basis)
        if not mats:
            raise ValidationError("custom family needs a non-empty basis")
        size = mats[0].rows
        g = matrix_span(mats, size, fam, WittFrame(size - 2) if size == n + 2 else None,
                        WittFrame(size - 2).gram() if size == n + 2 else None)
        if not is_bracket_closed(g):
            raise ValidationError("custom basis is not closed under the bracket")
        return g

    raise ValidationError(f"unknown family {fam!r}")


def expected_dim(spec: FamilySpec) -> int | None:
    """Dimension predicted by the defining parametrisation (None when not closed-form)."""
    n, dh = spec.n, len(spec.h_basis)
    fam = spec.family
    m = _RID.match(fam)
    if m:
        inner = FamilySpec(**{**spec.__dict__, "family": m.group("inner")})
        d = expected_dim(inner)
        return None if d is None else d + 1
    table = {
        "g1h": 1 + dh + n,
        "g2h": dh + n,
        "g3h-phi": dh + n,
        "g-alpha-theta-1": 1 + dh + n,
        "g-theta-2": dh + n,
        "g-theta-3-phi": dh + n,
    }
    if fam in table:
        return table[fam]
    if fam == "g4h-m-psi" or fam == "g4-twist":
        return dh + (spec.m or 0)
    if fam == "b2-twist":
        return dh + n
    if fam == "conformal-product-1":
        k = spec.k
        d1 = k + 2
        d2 = n - k
        return 1 + d1 * (d1 - 1) // 2 + d2 * (d2 - 1) // 2
    if fam == "conformal-product-2":
        r = spec.n - spec.k
        return 1 + dh + spec.k + r * (r - 1) // 2
    if fam == "conformal-product-3":
        r = spec.n - spec.k
        return 2 + dh + spec.k + r * (r - 1) // 2
    if fam == "so-twist":
        return (n * (n - 1)) // 2 + 1
    return None


# --- JSON -------------------------------------------------------------------

def _matrix(rows) -> RationalMatrix:
    return RationalMatrix.from_rows([[Q(x) for x in r] for r in rows])


def spec_from_json(doc: dict) -> FamilySpec:
    """Parse the FamilySpec JSON schema.

    ``h_basis`` may also be a menu name such as "so2" (placed at offset
    ``h_offset``, default 0).
    """
    if "family" not in doc or "n" not in doc:
        raise ValidationError("FamilySpec needs 'family' and 'n'")
    n = int(doc["n"])
    hb = doc.get("h_basis", [])
    if isinstance(hb, str):
        size = int(doc.get("h_size", n))
        h_basis = tuple(subalgebra_menu(hb, size, int(doc.get("h_offset", 0))))
    else:
        h_basis = tuple(_matrix(A) for A in hb)
    block_bases = None
    if "block_bases" in doc:
        block_bases = tuple(tuple(_matrix(A) for A in blk) for blk in doc["block_bases"])
    try:
        return FamilySpec(
            family=str(doc["family"]),
            n=n,
            h_basis=h_basis,
            theta=vec(doc.get("theta", [])),
            phi=vec(doc.get("phi", [])),
            alpha=Q(doc.get("alpha", 0)),
            psi=tuple(vec(p) for p in doc.get("psi", [])),
            k=int(doc.get("k", 0)),
            m=None if doc.get("m") is None else int(doc["m"]),
            n0=int(doc.get("n0", 0)),
            a=Q(doc.get("a", 0)),
            theta2=vec(doc.get("theta2", [])),
            blocks=tuple(int(b) for b in doc.get("blocks", [])),
            block_bases=block_bases,
            with_id=bool(doc.get("with_id", True)),
            basis=tuple(_matrix(A) for A in doc.get("basis", [])),
        )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed FamilySpec: {exc}") from exc


def family(name: str, n: int, h: str | Sequence[RationalMatrix] = "0", **kw) -> LieSubalgebra:
    """Shorthand: ``family("g-theta-2", 2, "so2", theta=[1])``."""
    h_basis = tuple(subalgebra_menu(h, n, kw.pop("h_offset", 0)) if isinstance(h, str) else h)
    for key in ("theta", "phi", "theta2"):
        if key in kw:
            kw[key] = vec(kw[key])
    if "alpha" in kw:
        kw["alpha"] = Q(kw["alpha"])
    if "a" in kw:
        kw["a"] = Q(kw["a"])
    if "psi" in kw:
        kw["psi"] = tuple(vec(p) for p in kw["psi"])
    return make_family(FamilySpec(family=name, n=n, h_basis=h_basis, **kw))


# --- the ambient algebras -----------------------------------------------------

def co_rp(n: int) -> LieSubalgebra:
    """co(1, n+1)_{Rp}: the stabiliser of the line Rp, dimension 2 + n(n-1)/2 + n."""
    Z = RationalMatrix.zeros(n)
    zero = (0,) * n
    mats = [_co(1, 0, Z, zero), _co(0, 1, Z, zero)]
    mats += [_co(0, 0, A, zero) for A in so_basis(n)]
    mats += _translations(n, range(n))
    return _witt(n, mats, "co(1,n+1)_Rp")


def orthogonal_algebra(gram: RationalMatrix, tag: str = "so") -> LieSubalgebra:
    """so(G) = {A : A^T G + G A = 0}, spanned by the wedges of basis vectors."""
    N = gram.rows
    basis = [unit_vector(N, i) for i in range(N)]
    mats = [wedge(x, y, gram) for x, y in combinations(basis, 2)]
    return matrix_span(mats, N, tag, None, gram)


def conformal_algebra(gram: RationalMatrix, tag: str = "co") -> LieSubalgebra:
    so = orthogonal_algebra(gram)
    return matrix_span(so.basis() + [RationalMatrix.identity(gram.rows)], gram.rows, tag, None, gram)
