"""Truncated multivariate Taylor polynomials with rational coefficients.

A jet of order K in the variables (v, x1, ..., xn, u) keeps every monomial of
total degree <= K.  Products, inverses and exponentials are truncated at K.
Derivatives keep the order K; their degree-K part is simply absent.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ValidationError
from .linalg import Q


def walker_variables(n: int) -> tuple[str, ...]:
    return ("v",) + tuple(f"x{i}" for i in range(1, n + 1)) + ("u",)


class JetScalar:
    __slots__ = ("names", "order", "terms")

    def __init__(self, names: Sequence[str], order: int, terms: Mapping[tuple, Fraction] | None = None):
        if order < 0:
            raise ValidationError("jet order must be non-negative")
        self.names = tuple(names)
        self.order = order
        t = {}
        if terms:
            nv = len(self.names)
            for e, c in terms.items():
                if len(e) != nv:
                    raise ValidationError(f"exponent {e} does not match {nv} variables")
                if sum(e) <= order:
                    c = Q(c)
                    if c:
                        t[tuple(e)] = c
        self.terms = t

    # constructors
    @classmethod
    def _raw(cls, names, order, terms) -> "JetScalar":
        j = object.__new__(cls)
        j.names, j.order, j.terms = names, order, terms
        return j

    @classmethod
    def constant(cls, names: Sequence[str], order: int, c) -> "JetScalar":
        c = Q(c)
        return cls._raw(tuple(names), order, {(0,) * len(names): c} if c else {})

    @classmethod
    def zero(cls, names: Sequence[str], order: int) -> "JetScalar":
        return cls._raw(tuple(names), order, {})

    @classmethod
    def variable(cls, names: Sequence[str], order: int, name: str | int) -> "JetScalar":
        names = tuple(names)
        k = _index(names, name)
        e = [0] * len(names)
        e[k] = 1
        return cls._raw(names, order, {tuple(e): Fraction(1)} if order >= 1 else {})

    @classmethod
    def monomial(cls, names: Sequence[str], order: int, exponents: Mapping[str, int] | Sequence[int],
                 c=1) -> "JetScalar":
        names = tuple(names)
        if isinstance(exponents, Mapping):
            e = [0] * len(names)
            for k, p in exponents.items():
                e[_index(names, k)] = p
        else:
            e = list(exponents)
        return cls(names, order, {tuple(e): c})

    # helpers
    def _check(self, other: "JetScalar") -> None:
        if self.names != other.names:
            raise ValidationError(f"variable mismatch: {self.names} vs {other.names}")
        if self.order != other.order:
            raise ValidationError(f"order mismatch: {self.order} vs {other.order}")

    def _coerce(self, other) -> "JetScalar":
        if isinstance(other, JetScalar):
            self._check(other)
            return other
        return JetScalar.constant(self.names, self.order, other)

    def is_zero(self) -> bool:
        return not self.terms

    def value(self) -> Fraction:
        """Value at the origin."""
        return self.terms.get((0,) * len(self.names), Fraction(0))

    def coefficient(self, exponents: Sequence[int] | Mapping[str, int]) -> Fraction:
        if isinstance(exponents, Mapping):
            e = [0] * len(self.names)
            for k, p in exponents.items():
                e[_index(self.names, k)] = p
            exponents = e
        return self.terms.get(tuple(exponents), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def truncate(self, order: int) -> "JetScalar":
        if order >= self.order:
            return JetScalar._raw(self.names, order, dict(self.terms)) if order > self.order else self
        return JetScalar._raw(self.names, order, {e: c for e, c in self.terms.items() if sum(e) <= order})

    def depends_on(self, name: str | int) -> bool:
        k = _index(self.names, name)
        return any(e[k] for e in self.terms)

    # arithmetic
    def __add__(self, other) -> "JetScalar":
        other = self._coerce(other)
        if not other.terms:
            return self
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return JetScalar._raw(self.names, self.order, t)

    __radd__ = __add__

    def __neg__(self) -> "JetScalar":
        return JetScalar._raw(self.names, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "JetScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "JetScalar":
        return self._coerce(other) - self

    def scale(self, c) -> "JetScalar":
        c = Q(c)
        if not c:
            return JetScalar.zero(self.names, self.order)
        return JetScalar._raw(self.names, self.order, {e: c * x for e, x in self.terms.items()})

    def __mul__(self, other) -> "JetScalar":
        if not isinstance(other, JetScalar):
            return self.scale(other)
        self._check(other)
        return JetScalar._raw(self.names, self.order, _mul_terms(self.terms, other.terms, self.order))

    def __rmul__(self, other) -> "JetScalar":
        return self.scale(other)

    def __pow__(self, k: int) -> "JetScalar":
        if k < 0:
            return self.invert() ** (-k)
        out = JetScalar.constant(self.names, self.order, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, JetScalar):
            return self.names == other.names and self.order == other.order and self.terms == other.terms
        try:
            return self == JetScalar.constant(self.names, self.order, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.names, self.order, frozenset(self.terms.items())))

    def partial(self, name: str | int) -> "JetScalar":
        k = _index(self.names, name)
        t = {}
        for e, c in self.terms.items():
            p = e[k]
            if p:
                f = list(e)
                f[k] = p - 1
                t[tuple(f)] = c * p
        return JetScalar._raw(self.names, self.order, t)

    def invert(self) -> "JetScalar":
        a0 = self.value()
        if not a0:
            raise DomainError("cannot invert a jet vanishing at the origin")
        # 1/a = (1/a0) sum_k (-(a - a0)/a0)^k
        one = JetScalar.constant(self.names, self.order, 1)
        r = (self - a0).scale(-1 / a0)
        out, term = one, one
        for _ in range(self.order):
            term = term * r
            if term.is_zero():
                break
            out = out + term
        return out.scale(1 / a0)

    def exp(self) -> "JetScalar":
        if self.value():
            raise DomainError("exp is only defined here for jets vanishing at the origin")
        one = JetScalar.constant(self.names, self.order, 1)
        out, term = one, one
        for k in range(1, self.order + 1):
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            out = out + term
        return out

    def __repr__(self) -> str:
        return f"JetScalar({self.format()}, K={self.order})"

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(n if p == 1 else f"{n}^{p}" for n, p in zip(self.names, e) if p)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}" if c.denominator == 1 or c < 0 else f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _index(names: tuple, name: str | int) -> int:
    if isinstance(name, int):
        if not 0 <= name < len(names):
            raise ValidationError(f"variable index {name} out of range")
        return name
    try:
        return names.index(name)
    except ValueError:
        raise ValidationError(f"unknown variable {name!r}; expected one of {names}") from None


def _mul_terms(a: dict, b: dict, order: int) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    bl = sorted(((sum(e), e, c) for e, c in b.items()), key=lambda t: t[0])
    out: dict = {}
    for ea, ca in a.items():
        room = order - sum(ea)
        if room < 0:
            continue
        for db, eb, cb in bl:
            if db > room:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def jet_multiply(a: JetScalar, b: JetScalar) -> JetScalar:
    return a * b


def jet_invert(a: JetScalar) -> JetScalar:
    return a.invert()


def jet_exp(a: JetScalar) -> JetScalar:
    return a.exp()


def jet_partial(a: JetScalar, var: str | int) -> JetScalar:
    return a.partial(var)


def polynomial(names: Sequence[str], order: int, terms: Iterable[tuple[Mapping[str, int], object]]) -> JetScalar:
    """Build sum c * prod x^p from ({name: power}, c) pairs."""
    out = JetScalar.zero(names, order)
    for exps, c in terms:
        out = out + JetScalar.monomial(names, order, exps, c)
    return out


def taylor_coefficient_factor(exponents: Sequence[int]) -> int:
    """prod p_i!, relating Taylor coefficients and partial derivatives at 0."""
    out = 1
    for p in exponents:
        out *= factorial(p)
    return out
