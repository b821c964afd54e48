"""Prime and extension fields F_{p^k} with elements encoded as integers.

An element of F_{p^k} = F_p[t]/(m(t)) is stored as the integer
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` where ``c_0 + c_1 t + ...`` is its
reduced representative.  The prime subfield therefore occupies the codes
``0..p-1`` and the generator ``t`` has code ``p`` (when ``k > 1``).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

MAX_DEGREE = 12
MAX_ORDER = 2**32


class FieldError(ValueError):
    """Raised for invalid field parameters or cross-field arithmetic."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- dense polynomials over F_p, little-endian coefficient lists ------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    r = [x % p for x in num]
    _trim(r)
    dl = len(den) - 1
    inv_lead = pow(den[-1], p - 2, p)
    while len(r) - 1 >= dl and r:
        shift = len(r) - 1 - dl
        f = (r[-1] * inv_lead) % p
        for i, d in enumerate(den):
            r[shift + i] = (r[shift + i] - f * d) % p
        _trim(r)
    return r


def _monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    """Monic polynomials of the given degree, ordered by the integer code
    of their lower coefficients (c_0 least significant)."""
    for low in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(low % p)
            low //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    n = len(poly) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, n // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _polymod(poly, cand, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


class FiniteField:
    """The field F_{p^k} with a fixed irreducible modulus.

    Construct through :func:`make_field` so that the modulus is the
    deterministic one (smallest monic irreducible by coefficient code).
    """

    __slots__ = ("p", "k", "q", "modulus", "_tables", "_gen", "__weakref__")

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if not 1 <= k <= MAX_DEGREE:
            raise FieldError(f"extension degree {k} outside 1..{MAX_DEGREE}")
        if p**k > MAX_ORDER:
            raise FieldError(f"field of order {p}^{k} exceeds 2^32")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._tables = None
        self._gen = None

    # -- identity -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return self.p

    def descriptor(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    # -- code <-> coefficient vectors ----------------------------------------
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, coeffs: Sequence[int]) -> int:
        a = 0
        for c in reversed(list(coeffs)[: self.k]):
            a = a * self.p + (c % self.p)
        return a

    # -- scalar arithmetic on codes (modulus based) -------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if self.p == 2:
            return self._mul_gf2(a, b)
        da, db = self.digits(a), self.digits(b)
        prod_ = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod_[i + j] += x * y
        return self.from_digits(_polymod(prod_, self.modulus, self.p) + [0] * self.k)

    def _mul_gf2(self, a: int, b: int) -> int:
        # carry-less product, then reduce by the modulus bit pattern
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        mod = self.from_digits(self.modulus[: self.k]) | (1 << self.k)
        for bit in range(r.bit_length() - 1, self.k - 1, -1):
            if r >> bit & 1:
                r ^= mod << (bit - self.k)
        return r

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int, times: int = 1) -> int:
        """a -> a^(p^times)."""
        return self.pow(a, self.p ** (times % self.k) if self.k > 1 else 1)

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- elements -----------------------------------------------------------
    def __call__(self, value: int | "FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        return FieldElement(self, self.from_int(value))

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self!r}")
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldError("element belongs to a different field")
            return x
        if isinstance(x, int):
            return FieldElement(self, self.from_int(x))
        raise FieldError(f"cannot coerce {x!r} into {self!r}")

    def elements(self) -> Iterator["FieldElement"]:
        for c in range(self.q):
            yield FieldElement(self, c)

    def generator(self) -> int:
        """Smallest code generating the multiplicative group."""
        if self._gen is None:
            n = self.q - 1
            primes = [f for f in range(2, n + 1) if n % f == 0 and is_prime(f)]
            for g in range(1, self.q):
                if all(self.pow(g, n // f) != 1 for f in primes):
                    self._gen = g
                    break
        return self._gen

    def tables(self):
        """Vectorised arithmetic tables (cached)."""
        if self._tables is None:
            from .tables import FieldTables

            self._tables = FieldTables(self)
        return self._tables

    # -- subfields ------------------------------------------------------------
    def embedding_into(self, big: "FiniteField") -> list[int]:
        """Codes of the images of every element of ``self`` in ``big``.

        The generator t is sent to the smallest root of the modulus in
        ``big``, which fixes a deterministic embedding.
        """
        return list(_embedding(self, big))


@lru_cache(maxsize=None)
def _embedding(small: FiniteField, big: FiniteField) -> tuple[int, ...]:
    if small.p != big.p or big.k % small.k:
        raise FieldError(f"{small!r} does not embed into {big!r}")
    if small.k == 1:
        return tuple(range(small.p))
    root = None
    for c in range(big.q):
        acc = 0
        for coef in reversed(small.modulus):
            acc = big.add(big.mul(acc, c), coef)
        if acc == 0:
            root = c
            break
    powers = [1]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], root))
    images = []
    for code in range(small.q):
        acc = 0
        for d, pw in zip(small.digits(code), powers):
            if d:
                acc = big.add(acc, big.mul(d, pw))
        images.append(acc)
    return tuple(images)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FiniteField:
    """F_{p^k} with the smallest monic irreducible modulus of degree k."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not 1 <= k <= MAX_DEGREE:
        raise FieldError(f"extension degree {k} outside 1..{MAX_DEGREE}")
    if p**k > MAX_ORDER:
        raise FieldError(f"field of order {p}^{k} exceeds 2^32")
    return FiniteField(p, k, smallest_irreducible(p, k))


def field_from_descriptor(d: dict) -> FiniteField:
    std = make_field(int(d["p"]), int(d["k"]))
    if not d.get("modulus") or tuple(d["modulus"]) == tuple(std.modulus):
        return std
    f = FiniteField(int(d["p"]), int(d["k"]), d.get("modulus") or smallest_irreducible(int(d["p"]), int(d["k"])))
    if not is_irreducible(f.modulus, f.p):
        raise FieldError("descriptor modulus is reducible")
    return f


class FieldElement:
    """An immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("cannot mix elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(b)))

    def frobenius(self, times: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.value, times))

    def is_unit(self) -> bool:
        return self.value != 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field!r}({self.value})"

    def __str__(self) -> str:
        return str(self.value)


