"""
Exact base rings.

``TruncWittRing(p, s)`` models W_s(F_{p^2}) as (Z/p^s)[x]/(x^2 - c), the
unramified quadratic extension of Z/p^s.  ``QuadExtField(p)`` is the s = 1
case, i.e. F_{p^2}.  ``SquareZeroRing`` adjoins named parameters t_1..t_N with
t_a * t_b = 0, which is what a first infinitesimal neighbourhood looks like.

All elements are immutable and hashable.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


def is_odd_prime(p) -> bool:
    if not isinstance(p, int) or isinstance(p, bool) or p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p) -> int:
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return p


@lru_cache(maxsize=None)
def default_nonresidue(p: int) -> int:
    """Smallest c >= 2 with x^2 - c irreducible mod p."""
    check_prime(p)
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return c
    raise AssertionError("unreachable for odd p")


def sqrt_mod_prime_power(a: int, p: int, s: int) -> int:
    """A square root of a modulo p^s (p odd, a a nonzero square mod p)."""
    roots = [r for r in range(1, p) if (r * r - a) % p == 0]
    if not roots:
        raise ValueError(f"{a} is not a nonzero square mod {p}")
    r, mod = roots[0], p
    for _ in range(1, s):
        mod *= p
        # Hensel: r <- r - (r^2 - a)/(2r)
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r


class TruncWittRing:
    """W_s(F_{p^2}) as a degree-2 unramified extension of Z/p^s."""

    def __init__(self, p: int, s: int = 1):
        check_prime(p)
        if not isinstance(s, int) or s < 1:
            raise ValueError(f"length s must be >= 1, got {s!r}")
        self.p = p
        self.s = s
        self.q = p**s
        self.c = default_nonresidue(p)

    def __repr__(self):
        return f"TruncWittRing(p={self.p}, s={self.s})"

    def __eq__(self, other):
        return isinstance(other, TruncWittRing) and (self.p, self.s) == (other.p, other.s)

    def __hash__(self):
        return hash(("W", self.p, self.s))

    @property
    def modulus(self) -> tuple[int, int, int]:
        """Coefficients (1, 0, -c) of the defining polynomial x^2 - c."""
        return (1, 0, -self.c)

    def __call__(self, a=0, b=0) -> "QuadElement":
        if isinstance(a, QuadElement):
            if a.ring != self:
                raise ValueError(f"{a!r} does not belong to {self!r}")
            return a
        return QuadElement(self, a, b)

    @property
    def zero(self) -> "QuadElement":
        return QuadElement(self, 0, 0)

    @property
    def one(self) -> "QuadElement":
        return QuadElement(self, 1, 0)

    @property
    def gen(self) -> "QuadElement":
        return QuadElement(self, 0, 1)

    def order(self) -> int:
        return self.q**2

    def elements(self) -> Iterator["QuadElement"]:
        for a in range(self.q):
            for b in range(self.q):
                yield QuadElement(self, a, b)

    def random_element(self, rng: random.Random | None = None) -> "QuadElement":
        rng = rng or random
        return QuadElement(self, rng.randrange(self.q), rng.randrange(self.q))

    def residue_field(self) -> "QuadExtField":
        return QuadExtField(self.p)

    def sqrt_neg(self, d: int) -> "QuadElement":
        """A square root of -d.  Requires -d to be a non-square mod p."""
        if pow(-d % self.p, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"-{d} is a square mod {self.p}; its root is not of the form t*x")
        # -d = c * t^2 with t in Z/p^s
        t2 = (-d) * pow(self.c, -1, self.q) % self.q
        t = sqrt_mod_prime_power(t2, self.p, self.s)
        return QuadElement(self, 0, t)


class QuadExtField(TruncWittRing):
    """The field F_{p^2} = F_p[x]/(x^2 - c)."""

    def __init__(self, p: int):
        super().__init__(p, 1)

    def __repr__(self):
        return f"QuadExtField(p={self.p})"

    def nonzero_elements(self) -> Iterator["QuadElement"]:
        for e in self.elements():
            if e:
                yield e


class QuadElement:
    """a + b*x in TruncWittRing; x^2 = c."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: TruncWittRing, a: int = 0, b: int = 0):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "a", int(a) % ring.q)
        object.__setattr__(self, "b", int(b) % ring.q)

    def __setattr__(self, name, value):
        raise AttributeError("ring elements are immutable")

    def __repr__(self):
        return f"{self.ring!r}({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        bx = "x" if self.b == 1 else f"{self.b}x"
        return bx if self.a == 0 else f"{self.a}+{bx}"

    def _coerce(self, other) -> "QuadElement | None":
        if isinstance(other, QuadElement):
            if other.ring != self.ring:
                raise ValueError(f"mixing {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return QuadElement(self.ring, other, 0)
        return None

    def __eq__(self, other):
        if isinstance(other, SqZeroElement):
            return other == self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.ring, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.ring, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.ring, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = self.ring.c
        return QuadElement(
            self.ring, self.a * o.a + c * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ring.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def norm(self) -> int:
        """a^2 - c b^2 mod p^s (the norm down to Z/p^s)."""
        return (self.a * self.a - self.ring.c * self.b * self.b) % self.ring.q

    def is_unit(self) -> bool:
        return self.norm() % self.ring.p != 0

    def inverse(self) -> "QuadElement":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit in {self.ring!r}")
        ninv = pow(self.norm(), -1, self.ring.q)
        return QuadElement(self.ring, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def frobenius(self) -> "QuadElement":
        # the canonical lift of x -> x^p is the conjugation x -> -x
        return QuadElement(self.ring, self.a, -self.b)

    def conjugate(self) -> "QuadElement":
        return self.frobenius()

    def residue(self) -> "QuadElement":
        if self.ring.s == 1:
            return self
        return QuadElement(self.ring.residue_field(), self.a, self.b)

    def in_prime_field(self) -> bool:
        return self.b == 0

    def constant(self) -> "QuadElement":
        return self


def frobenius(x):
    """x -> x^p (canonical lift on W_s; kills the square-zero ideal)."""
    return x.frobenius()


class SquareZeroRing:
    """k + m with m = span of the named parameters and m^2 = 0."""

    def __init__(self, base: TruncWittRing, params: Sequence[str]):
        params = tuple(params)
        if base.s != 1:
            # x -> x^p only kills m when p = 0 in the base
            raise ValueError("square-zero extensions are built over the residue field (s = 1)")
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        self.base = base
        self.params = params
        self.index = {t: i for i, t in enumerate(params)}
        self.p = base.p

    def __repr__(self):
        return f"SquareZeroRing({self.base!r}, {list(self.params)})"

    def __eq__(self, other):
        return (
            isinstance(other, SquareZeroRing)
            and self.base == other.base
            and self.params == other.params
        )

    def __hash__(self):
        return hash((self.base, self.params))

    def __call__(self, const=0, lin: dict | None = None) -> "SqZeroElement":
        if isinstance(const, SqZeroElement):
            if const.ring != self:
                raise ValueError("element from another square-zero ring")
            return const
        coeffs = [self.base.zero] * len(self.params)
        for name, v in (lin or {}).items():
            coeffs[self.index[name]] = self.base(v)
        return SqZeroElement(self, self.base(const), tuple(coeffs))

    def t(self, name: str) -> "SqZeroElement":
        """The parameter called ``name``."""
        return self(0, {name: 1})

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def random_element(self, rng: random.Random | None = None) -> "SqZeroElement":
        rng = rng or random
        return SqZeroElement(
            self,
            self.base.random_element(rng),
            tuple(self.base.random_element(rng) for _ in self.params),
        )


class SqZeroElement:
    __slots__ = ("ring", "const", "lin")

    def __init__(self, ring: SquareZeroRing, const: QuadElement, lin: tuple):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "lin", lin)

    def __setattr__(self, name, value):
        raise AttributeError("ring elements are immutable")

    def __repr__(self):
        return f"SqZeroElement({self})"

    def __str__(self):
        parts = [] if not self.const else [str(self.const)]
        for name, c in zip(self.ring.params, self.lin):
            if not c:
                continue
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"({c}){name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def _coerce(self, other) -> "SqZeroElement | None":
        if isinstance(other, SqZeroElement):
            if other.ring != self.ring:
                raise ValueError("mixing square-zero rings")
            return other
        if isinstance(other, QuadElement) or (
            isinstance(other, int) and not isinstance(other, bool)
        ):
            base = self.ring.base
            return SqZeroElement(self.ring, base(other), (base.zero,) * len(self.lin))
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.const == o.const and self.lin == o.lin

    def __hash__(self):
        if not any(self.lin):
            return hash(self.const)
        return hash((self.const, self.lin))

    def __bool__(self):
        return bool(self.const) or any(self.lin)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SqZeroElement(
            self.ring, self.const + o.const, tuple(x + y for x, y in zip(self.lin, o.lin))
        )

    __radd__ = __add__

    def __neg__(self):
        return SqZeroElement(self.ring, -self.const, tuple(-x for x in self.lin))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c0, d0 = self.const, o.const
        return SqZeroElement(
            self.ring, c0 * d0, tuple(c0 * y + d0 * x for x, y in zip(self.lin, o.lin))
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.ring.one
        # (c + l)^e = c^e + e c^(e-1) l
        ce1 = self.const ** (e - 1)
        return SqZeroElement(
            self.ring, ce1 * self.const, tuple(ce1 * e * x for x in self.lin)
        )

    def is_unit(self) -> bool:
        return self.const.is_unit()

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        ci = self.const.inverse()
        ci2 = ci * ci
        return SqZeroElement(self.ring, ci, tuple(-ci2 * x for x in self.lin))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def frobenius(self):
        # (c + l)^p = c^p since p >= 2 and m^2 = 0
        base = self.ring.base
        return SqZeroElement(self.ring, self.const.frobenius(), (base.zero,) * len(self.lin))

    def residue(self):
        return self.const.residue()

    def constant(self):
        return self.const

    def coefficient(self, name: str):
        return self.lin[self.ring.index[name]]

    def linear_part(self) -> dict:
        return {t: c for t, c in zip(self.ring.params, self.lin) if c}


class OneForm:
    """A formal 1-form sum_a c_a dt_a with coefficients in the base field."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SquareZeroRing, coeffs: Iterable):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(ring.base(c) for c in coeffs))
        if len(self.coeffs) != len(ring.params):
            raise ValueError("wrong number of coefficients for this ring")

    def __setattr__(self, name, value):
        raise AttributeError("one-forms are immutable")

    @classmethod
    def basis(cls, ring: SquareZeroRing, name: str) -> "OneForm":
        """dt for the parameter t called ``name``."""
        c = [0] * len(ring.params)
        c[ring.index[name]] = 1
        return cls(ring, c)

    def __getitem__(self, name: str):
        return self.coeffs[self.ring.index[name]]

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return OneForm(self.ring, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return OneForm(self.ring, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return OneForm(self.ring, [x * scalar for x in self.coeffs])

    __rmul__ = __mul__

    def __str__(self):
        terms = []
        for name, c in zip(self.ring.params, self.coeffs):
            if not c:
                continue
            terms.append(f"d{name}" if c == 1 else f"({c})d{name}")
        return " + ".join(terms) if terms else "0"

    __repr__ = __str__


def d(r) -> OneForm:
    """The canonical derivation r -> (r - r(x)) mod m^2, as a 1-form."""
    if not isinstance(r, SqZeroElement):
        raise TypeError(f"d is defined on square-zero ring elements, got {type(r).__name__}")
    return OneForm(r.ring, r.lin)
