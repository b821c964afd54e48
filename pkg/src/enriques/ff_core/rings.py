"""Coefficient rings besides finite fields.

* :data:`ZZ`: the integers, with plain ``int`` elements.
* :data:`ZAB`: the universal base ``Z[a, b]/(ab - 2)``.  Every monomial
  ``a^i b^j`` reduces to ``2^min(i,j)`` times a pure power, so elements are
  finite Z-combinations of ``1, a, a^2, ..., b, b^2, ...``.
* :class:`PointRing`: ``S = R[s]/(s^2 - a s)`` over a base ring R, the
  coordinate ring of the length-2 group scheme G_{a,b}.
"""

from __future__ import annotations

import re
from typing import Mapping

from .fields import FieldElement, FiniteField


class RingError(ValueError):
    pass


class IntegerRing:
    characteristic = 0
    zero = 0
    one = 1

    def coerce(self, x) -> int:
        if isinstance(x, int):
            return x
        raise RingError(f"cannot coerce {x!r} into ZZ")

    def parse(self, text: str) -> int:
        return int(text)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self) -> int:
        return hash("ZZ")

    def __repr__(self) -> str:
        return "ZZ"


ZZ = IntegerRing()


# -- Z[a,b]/(ab-2) ------------------------------------------------------------
#
# key n > 0 stands for a^n, n < 0 for b^(-n), 0 for the constant 1.

def _mono_mul(m: int, n: int) -> tuple[int, int]:
    """Product of two basis monomials as (scalar, key)."""
    if (m >= 0) == (n >= 0) or m == 0 or n == 0:
        return 1, m + n
    i, j = (m, -n) if m > 0 else (n, -m)
    c = min(i, j)
    return 2**c, i - j


class SymbolicElement:
    """Element of Z[a,b]/(ab-2) in reduced normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def from_monomial(cls, i: int = 0, j: int = 0, coeff: int = 1) -> "SymbolicElement":
        """coeff * a^i * b^j, reduced."""
        c1, key1 = _mono_mul(i, -j)
        return cls({key1: coeff * c1})

    def _coerce(self, other):
        if isinstance(other, SymbolicElement):
            return other
        if isinstance(other, int):
            return SymbolicElement({0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0) + v
        return SymbolicElement(t)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t: dict[int, int] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                c, k = _mono_mul(k1, k2)
                t[k] = t.get(k, 0) + c * v1 * v2
        return SymbolicElement(t)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = SymbolicElement({0: 1})
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_unit(self) -> bool:
        # Z[a,b]/(ab-2) embeds in Z[a, 1/a]; the only common units are +-1
        return self.terms in ({0: 1}, {0: -1})

    def substitute(self, a, b):
        """Image under a ring map sending a, b to the given values (ab must be 2)."""
        total = 0
        for k, v in self.terms.items():
            if k > 0:
                total = total + v * a**k
            elif k < 0:
                total = total + v * b ** (-k)
            else:
                total = total + v
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: (k == 0, -abs(k), k < 0)):
            v = self.terms[k]
            name = "" if k == 0 else ("a" if k > 0 else "b") + (f"^{abs(k)}" if abs(k) > 1 else "")
            if not name:
                mono = str(abs(v))
            elif abs(v) == 1:
                mono = name
            else:
                mono = f"{abs(v)}*{name}"
            parts.append(("-" if v < 0 else "+", mono))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out

    __repr__ = __str__


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*((?:[ab](?:\^\d+)?\s*\*?\s*)*)")


def symbolic_reduce(e) -> SymbolicElement:
    """Normal form of an element of Z[a,b]/(ab-2).

    Accepts either a :class:`SymbolicElement` or an unreduced mapping
    ``{(i, j): coeff}`` standing for ``sum coeff * a^i * b^j``.
    """
    if isinstance(e, SymbolicElement):
        e = {((k if k > 0 else 0), (-k if k < 0 else 0)): v for k, v in e.terms.items()}
    total = SymbolicElement()
    for (i, j), v in e.items():
        total = total + SymbolicElement.from_monomial(i, j, v)
    return total


class SymbolicRing:
    characteristic = 0

    @property
    def zero(self) -> SymbolicElement:
        return SymbolicElement()

    @property
    def one(self) -> SymbolicElement:
        return SymbolicElement({0: 1})

    @property
    def a(self) -> SymbolicElement:
        return SymbolicElement({1: 1})

    @property
    def b(self) -> SymbolicElement:
        return SymbolicElement({-1: 1})

    def coerce(self, x) -> SymbolicElement:
        if isinstance(x, SymbolicElement):
            return x
        if isinstance(x, int):
            return SymbolicElement({0: x})
        raise RingError(f"cannot coerce {x!r} into Z[a,b]/(ab-2)")

    def parse(self, text: str) -> SymbolicElement:
        """Parse sums like ``"2*a^2 - b + 3"``; mixed monomials are reduced."""
        text = text.replace(" ", "")
        if not text:
            raise RingError("empty expression")
        total = SymbolicElement()
        pos = 0
        while pos < len(text):
            m = _TERM.match(text, pos)
            if not m or m.end() == pos:
                raise RingError(f"cannot parse {text!r}")
            sign, digits, mono = m.groups()
            if not digits and not mono:
                raise RingError(f"cannot parse {text!r}")
            coeff = int(digits) if digits else 1
            i = j = 0
            for var, ex in re.findall(r"([ab])(?:\^(\d+))?", mono):
                if var == "a":
                    i += int(ex or 1)
                else:
                    j += int(ex or 1)
            term = SymbolicElement.from_monomial(i, j, coeff)
            total = total - term if sign == "-" else total + term
            pos = m.end()
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolicRing)

    def __hash__(self) -> int:
        return hash("ZAB")

    def __repr__(self) -> str:
        return "Z[a,b]/(ab-2)"


ZAB = SymbolicRing()


# -- S = R[s]/(s^2 - a s) -------------------------------------------------------

def ring_of(x):
    if isinstance(x, FieldElement):
        return x.field
    if isinstance(x, SymbolicElement):
        return ZAB
    if isinstance(x, PointElement):
        return x.ring
    if isinstance(x, int):
        return ZZ
    raise RingError(f"unknown ring element {x!r}")


def is_unit(x) -> bool:
    if isinstance(x, int):
        return x in (1, -1)
    return x.is_unit()


class PointRing:
    """R[s]/(s^2 - a s); elements are c0 + c1 s."""

    def __init__(self, base, a):
        self.base = base
        self.a = base.coerce(a)

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def zero(self) -> "PointElement":
        return PointElement(self, self.base.zero, self.base.zero)

    @property
    def one(self) -> "PointElement":
        return PointElement(self, self.base.one, self.base.zero)

    @property
    def s(self) -> "PointElement":
        return PointElement(self, self.base.zero, self.base.one)

    def __call__(self, c0, c1=0) -> "PointElement":
        return PointElement(self, self.base.coerce(c0), self.base.coerce(c1))

    def coerce(self, x) -> "PointElement":
        if isinstance(x, PointElement) and x.ring == self:
            return x
        if isinstance(x, PointElement) and x.ring != self.base:
            raise RingError("point element from a different ring")
        return PointElement(self, self.base.coerce(x), self.base.zero)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointRing) and self.base == other.base and self.a == other.a

    def __hash__(self) -> int:
        return hash((self.base, self.a))

    def __repr__(self) -> str:
        return f"{self.base!r}[s]/(s^2 - ({self.a})*s)"


class PointElement:
    __slots__ = ("ring", "c0", "c1")

    def __init__(self, ring: PointRing, c0, c1):
        self.ring = ring
        self.c0 = c0
        self.c1 = c1

    def _coerce(self, other):
        if isinstance(other, PointElement) and other.ring == self.ring:
            return other
        if isinstance(other, PointElement) and other.ring != self.ring.base:
            raise RingError("cannot mix elements of different point rings")
        try:
            return PointElement(self.ring, self.ring.base.coerce(other), self.ring.base.zero)
        except (RingError, ValueError):
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PointElement(self.ring, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self):
        return PointElement(self.ring, -self.c0, -self.c1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PointElement(self.ring, self.c0 - o.c0, self.c1 - o.c1)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a = self.ring.a
        c0 = self.c0 * o.c0
        c1 = self.c0 * o.c1 + self.c1 * o.c0 + a * self.c1 * o.c1
        return PointElement(self.ring, c0, c1)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def at_zero(self):
        """Image under s -> 0."""
        return self.c0

    def at_a(self):
        """Image under s -> a."""
        return self.c0 + self.ring.a * self.c1

    def is_unit(self) -> bool:
        # S -> R x R, s -> (0, a) is injective when a is a non-zero-divisor;
        # for a = 0 the ring is R[s]/(s^2) and units are those with c0 a unit.
        a = self.ring.a
        if not a:
            return is_unit(self.c0)
        if isinstance(a, FieldElement):
            return bool(self.at_zero()) and bool(self.at_a())
        return is_unit(self.at_zero()) and is_unit(self.at_a())

    def __bool__(self) -> bool:
        return bool(self.c0) or bool(self.c1)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c0 == o.c0 and self.c1 == o.c1

    def __hash__(self) -> int:
        return hash((self.c0, self.c1))

    def __repr__(self) -> str:
        return f"({self.c0}) + ({self.c1})*s"


def is_field(ring) -> bool:
    return isinstance(ring, FiniteField)
