"""Exact Laurent polynomials over Z and Z[1/2], and dyadic rationals.

``LaurentPoly`` stores a sparse map ``degree -> coefficient``.  Coefficients
are Python ints for the ring Z[t, t^-1] and may be dyadic
:class:`DyadicRational` values for Z[1/2][t, t^-1].  All arithmetic is
exact; nothing here ever touches floats.

Two Laurent polynomials are *associate* when they differ by a unit
``+-t^k``.  ``canonical()`` picks the representative with lowest degree 0
and positive trailing coefficient, so associates compare equal after
canonicalisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

__all__ = [
    "DyadicRational",
    "LaurentPoly",
    "poly_gcd",
    "ZERO",
    "ONE",
    "T",
]


@dataclass(frozen=True)
class DyadicRational:
    """A rational of the form num / 2**exp with num odd or zero.

    >>> DyadicRational(6, 2)          # 6/4 normalises to 3/2
    DyadicRational(num=3, exp=1)
    """

    num: int
    exp: int = 0

    def __post_init__(self):
        num, exp = self.num, self.exp
        if num == 0:
            exp = 0
        else:
            while num % 2 == 0:
                num //= 2
                exp -= 1
            if exp < 0:
                num <<= -exp
                exp = 0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @staticmethod
    def from_int(n: int) -> "DyadicRational":
        return DyadicRational(n, 0)

    def __add__(self, other):
        other = _as_dyadic(other)
        e = max(self.exp, other.exp)
        return DyadicRational(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self.num, self.exp)

    def __sub__(self, other):
        return self + (-_as_dyadic(other))

    def __rsub__(self, other):
        return _as_dyadic(other) + (-self)

    def __mul__(self, other):
        other = _as_dyadic(other)
        return DyadicRational(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def times_power_of_two(self, k: int) -> "DyadicRational":
        """Multiply by 2**k (k may be negative)."""
        return DyadicRational(self.num, self.exp - k)

    def is_integer(self) -> bool:
        return self.exp == 0

    def __bool__(self):
        return self.num != 0

    def as_pair(self):
        return (self.num, self.exp)

    def __repr__(self):
        return f"DyadicRational(num={self.num}, exp={self.exp})"

    def __str__(self):
        return str(self.num) if self.exp == 0 else f"{self.num}/2^{self.exp}"


def _as_dyadic(x):
    if isinstance(x, DyadicRational):
        return x
    if isinstance(x, int):
        return DyadicRational(x, 0)
    raise TypeError(f"cannot coerce {x!r} to a dyadic rational")


def _czero(c) -> bool:
    return not c


class LaurentPoly:
    """Sparse Laurent polynomial; immutable by convention."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {d: c for d, c in (coeffs or {}).items() if not _czero(c)}

    @staticmethod
    def constant(c) -> "LaurentPoly":
        return LaurentPoly({0: c})

    @staticmethod
    def monomial(c, d: int) -> "LaurentPoly":
        return LaurentPoly({d: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def min_degree(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def max_degree(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def degree_span(self) -> int:
        return self.max_degree() - self.min_degree() if self.coeffs else 0

    def __add__(self, other):
        d = dict(self.coeffs)
        for k, c in other.coeffs.items():
            d[k] = d.get(k, 0) + c
        return LaurentPoly(d)

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({k: c * other for k, c in self.coeffs.items()})
        d: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                d[k] = d.get(k, 0) + c1 * c2
        return LaurentPoly(d)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t**k."""
        return LaurentPoly({d + k: c for d, c in self.coeffs.items()})

    def mirror(self) -> "LaurentPoly":
        """Substitute t -> t^-1."""
        return LaurentPoly({-d: c for d, c in self.coeffs.items()})

    def evaluate_int(self, x: int):
        """Evaluate at an integer with no negative degrees present."""
        if any(d < 0 for d in self.coeffs):
            raise ValueError("negative degrees: use evaluate_dyadic")
        return sum(c * x ** d for d, c in self.coeffs.items())

    def evaluate_dyadic(self, k: int) -> DyadicRational:
        """Evaluate exactly at t = 2**k (k = +-1 are the cases that matter)."""
        total = DyadicRational(0)
        for d, c in self.coeffs.items():
            total = total + _as_dyadic(c).times_power_of_two(k * d)
        return total

    def evaluate_mod(self, x: int, m: int) -> int:
        """Evaluate at ``x`` modulo ``m``; negative degrees use x^-1 mod m."""
        inv = pow(x, -1, m) if any(d < 0 for d in self.coeffs) else None
        total = 0
        for d, c in self.coeffs.items():
            b = pow(x, d, m) if d >= 0 else pow(inv, -d, m)
            total = (total + c * b) % m
        return total

    def content(self) -> int:
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, abs(int(c)))
        return g

    def canonical(self) -> "LaurentPoly":
        """Associate-class representative: min degree 0, trailing coeff > 0."""
        if not self.coeffs:
            return LaurentPoly()
        lo = self.min_degree()
        sign = 1 if self.coeffs[lo] > 0 else -1
        return LaurentPoly({d - lo: sign * c for d, c in self.coeffs.items()})

    def is_associate(self, other: "LaurentPoly") -> bool:
        return self.canonical() == other.canonical()

    def is_unit(self) -> bool:
        """Units of the integral Laurent ring: plus or minus a power of t."""
        if len(self.coeffs) != 1:
            return False
        return abs(next(iter(self.coeffs.values()))) == 1

    def is_symmetric(self) -> bool:
        """True when p(t) and p(1/t) are associates (Alexander symmetry)."""
        return self.is_associate(self.mirror())

    def dyadic_coeffs(self) -> "LaurentPoly":
        return LaurentPoly({d: _as_dyadic(c) for d, c in self.coeffs.items()})

    def exact_divide(self, divisor: "LaurentPoly"):
        """Quotient self/divisor when it exists in the Laurent ring, else None.

        Works up the coefficient list from the lowest degree; each step
        must divide exactly over the integers, which pins the quotient
        down uniquely when it exists.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        lo_s, lo_d = self.min_degree(), divisor.min_degree()
        ds = [self.coeffs.get(lo_s + i, 0) for i in range(self.degree_span() + 1)]
        dd = [divisor.coeffs.get(lo_d + i, 0) for i in range(divisor.degree_span() + 1)]
        if len(ds) < len(dd):
            return None
        qlen = len(ds) - len(dd) + 1
        q = [0] * qlen
        rem = list(ds)
        for i in range(qlen):
            c = rem[i]
            if c % dd[0]:
                return None
            q[i] = c // dd[0]
            for k, dc in enumerate(dd):
                rem[i + k] -= q[i] * dc
        if any(rem):
            return None
        return LaurentPoly({lo_s - lo_d + i: c for i, c in enumerate(q)})

    def divides(self, other: "LaurentPoly") -> bool:
        return other.exact_divide(self) is not None

    def __repr__(self):
        return f"LaurentPoly({dict(sorted(self.coeffs.items()))!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d]
            if d == 0:
                parts.append(f"{c}")
            elif d == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{d}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
T = LaurentPoly.monomial(1, 1)


def _as_dense(p: LaurentPoly):
    """Integer coefficient list of the shifted ordinary polynomial."""
    if p.is_zero():
        return [], 0
    lo = p.min_degree()
    hi = p.max_degree()
    return [int(p.coeffs.get(d, 0)) for d in range(lo, hi + 1)], lo

def _primitive(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return c
    g = 0
    for x in c:
        g = gcd(g, abs(x))
    c = [x // g for x in c]
    if c[-1] < 0:
        c = [-x for x in c]
    return c


def _pseudo_rem(f: list, g: list) -> list:
    """Pseudo-remainder of dense integer polys (lists, lowest degree first)."""
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and f:
        df = len(f) - 1
        lf = f[-1]
        f = [x * lg for x in f]
        shift = df - dg
        for i, gi in enumerate(g):
            f[i + shift] -= lf * gi
        while f and f[-1] == 0:
            f.pop()
    return f


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Gcd in Z[t,t^-1], returned in canonical associate form.

    Uses the primitive polynomial remainder sequence over Z[t]; the content
    is carried separately so the answer is an honest gcd, not just of the
    primitive parts.
    """
    if a.is_zero():
        return b.canonical()
    if b.is_zero():
        return a.canonical()
    ca, cb = a.content(), b.content()
    f, _ = _as_dense(a)
    g, _ = _as_dense(b)
    f, g = _primitive(f), _primitive(g)
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _pseudo_rem(f, g)
        f, g = g, _primitive(r)
    prim = LaurentPoly({i: c for i, c in enumerate(f)})
    return (prim * gcd(ca, cb)).canonical()
