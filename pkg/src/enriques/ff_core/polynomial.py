"""Sparse multivariate polynomials over an arbitrary coefficient ring."""

from __future__ import annotations

import json
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from .fields import FiniteField
from .rings import ZZ, RingError, is_unit, ring_of

VARS6 = ("x1", "x2", "x3", "y1", "y2", "y3")

Exponent = tuple[int, ...]


def grlex_key(exp: Exponent) -> tuple:
    """Sort key for graded-lex order (ascending)."""
    return (sum(exp), exp)


def monomials(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of the given total degree, graded-lex descending."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grlex_key, reverse=True)
    return out


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponents to nonzero
    coefficients of ``ring``."""

    __slots__ = ("ring", "variables", "terms")

    def __init__(self, ring, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.ring = ring
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has wrong length for {n} variables")
            c = ring.coerce(c)
            if c:
                clean[exp] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ring, variables=VARS6) -> "Polynomial":
        return cls(ring, variables)

    @classmethod
    def constant(cls, ring, c, variables=VARS6) -> "Polynomial":
        return cls(ring, variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, ring, i: int, variables=VARS6) -> "Polynomial":
        e = [0] * len(variables)
        e[i] = 1
        return cls(ring, variables, {tuple(e): ring.one})

    @classmethod
    def gens(cls, ring, variables=VARS6) -> list["Polynomial"]:
        return [cls.var(ring, i, variables) for i in range(len(variables))]

    # -- queries --------------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, self.variables, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coefficient(self, exp: Exponent):
        return self.terms.get(tuple(exp), self.ring.zero)

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        return self.sorted_terms()[0] if self.terms else None

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
        if self.variables != other.variables:
            raise RingError("variable mismatch")

    def _lift(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        try:
            return Polynomial.constant(self.ring, self.ring.coerce(other), self.variables)
        except (RingError, ValueError):
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t[e] + c if e in t else c
        return Polynomial(self.ring, self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = self.ring.coerce(other)
            except (RingError, ValueError):
                return NotImplemented
            return Polynomial(self.ring, self.variables, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                t[e] = t[e] + v if e in t else v
        return Polynomial(self.ring, self.variables, t)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        result = Polynomial.constant(self.ring, self.ring.one, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._lift(other) if not isinstance(other, Polynomial) else other
        if o is None:
            return NotImplemented
        return self.ring == o.ring and self.variables == o.variables and self.terms == o.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # -- transformations ------------------------------------------------------
    def change_ring(self, ring, fn=None) -> "Polynomial":
        """Map every coefficient through ``fn`` (default: ``ring.coerce``)."""
        fn = fn or ring.coerce
        return Polynomial(ring, self.variables, {e: fn(c) for e, c in self.terms.items()})

    def derivative(self, i: int) -> "Polynomial":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Polynomial(self.ring, self.variables, t)

    def substitute_linear(self, matrix: Sequence[Sequence[object]]) -> "Polynomial":
        """Replace variable j by ``sum_i matrix[j][i] * x_i``.

        The result lives over the ring of the matrix entries, which must
        accept the coefficients of ``self`` (e.g. a point ring over the
        same base).
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError(f"substitution matrix must be {n}x{n}")
        mring = _common_ring(matrix, self.ring)
        if not is_unit(determinant(matrix, mring)):
            raise ValueError("substitution matrix is not invertible")
        images = []
        for j in range(n):
            t = {}
            for i in range(n):
                c = mring.coerce(matrix[j][i])
                if c:
                    e = [0] * n
                    e[i] = 1
                    t[tuple(e)] = c
            images.append(Polynomial(mring, self.variables, t))
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(j: int, k: int) -> Polynomial:
            if (j, k) not in powers:
                powers[(j, k)] = images[j] ** k
            return powers[(j, k)]

        result = Polynomial(mring, self.variables)
        for e, c in self.terms.items():
            term = Polynomial.constant(mring, mring.coerce(c), self.variables)
            for j, k in enumerate(e):
                if k:
                    term = term * power(j, k)
            result = result + term
        return result

    def evaluate(self, point: Sequence[object]):
        """Exact value at ``point`` (Horner in the last variable)."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        if not self.terms:
            return self.ring.zero
        # group terms by the leading variables, Horner in the last one
        groups: dict[Exponent, dict[int, object]] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[:-1], {})[e[-1]] = c
        last = point[-1]
        total = None
        for head, row in groups.items():
            acc = None
            for k in range(max(row), -1, -1):
                c = row.get(k)
                acc = (acc * last if acc is not None else None)
                if c is not None:
                    acc = c if acc is None else acc + c
            prefix = None
            for x, k in zip(point, head):
                if k:
                    prefix = x**k if prefix is None else prefix * x**k
            value = acc if prefix is None else acc * prefix
            total = value if total is None else total + value
        return total if total is not None else self.ring.zero

    # -- display / serialisation ------------------------------------------------
    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if " " in cs else cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "vars": list(self.variables),
            "terms": [{"exp": list(e), "coeff": str(c)} for e, c in self.sorted_terms()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict, ring) -> "Polynomial":
        parse = _parser(ring)
        return cls(ring, data["vars"], {tuple(t["exp"]): parse(t["coeff"]) for t in data["terms"]})


def _parser(ring):
    if isinstance(ring, FiniteField):
        return lambda s: ring.element(int(s))
    if hasattr(ring, "parse"):
        return ring.parse
    raise RingError(f"no string parser for {ring!r}")


def _common_ring(matrix, default=ZZ):
    for row in matrix:
        for x in row:
            if not isinstance(x, int):
                return ring_of(x)
    return default


def determinant(matrix: Sequence[Sequence[object]], ring=None):
    """Division-free determinant by Laplace expansion, skipping zeros."""
    ring = ring or _common_ring(matrix)
    m = [[ring.coerce(x) for x in row] for row in matrix]

    def det(rows: tuple[int, ...], cols: tuple[int, ...]):
        if not rows:
            return ring.one
        r = rows[0]
        total = ring.zero
        for idx, c in enumerate(cols):
            v = m[r][c]
            if not v:
                continue
            minor = det(rows[1:], cols[:idx] + cols[idx + 1 :])
            if not minor:
                continue
            term = v * minor
            total = total + term if idx % 2 == 0 else total - term
        return total

    n = len(m)
    return det(tuple(range(n)), tuple(range(n)))
