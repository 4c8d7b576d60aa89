"""The solvable Baumslag-Solitar group <a, c | a c a^-1 = c^2> and friends.

Elements are normal forms (k, q) in Z x Z[1/2] with multiplication
(k1, q1)(k2, q2) = (k1 + k2, q1 + 2^k1 q2): the semidirect product where
the Z factor acts on dyadic rationals by multiplication by two.  The
letter a is (1, 0), the letter c is (0, 1).

Finite quotients replace Z by Z/n and Z[1/2] by Z/m for odd m with
2^n = 1 mod m, which makes the action well defined.  These quotients
drive homology cross-checks and the validation of transported
certificates at finite level.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import IncompatibleParameters, NotSurjective, RelatorViolation
from .laurent import DyadicRational
from .words import Word

__all__ = [
    "BS12",
    "BS12_A",
    "BS12_C",
    "Bs12Group",
    "FiniteMetabelian",
    "evaluate_word",
    "check_relators",
    "bs12_surjective",
    "ring_mul",
    "ring_apply",
]


@dataclass(frozen=True)
class BS12:
    k: int
    q: DyadicRational

    def __mul__(self, other: "BS12") -> "BS12":
        return BS12(self.k + other.k, self.q + other.q.times_power_of_two(self.k))

    def inverse(self) -> "BS12":
        return BS12(-self.k, (-self.q).times_power_of_two(-self.k))

    def __pow__(self, e: int) -> "BS12":
        base = self if e >= 0 else self.inverse()
        out = BS12(0, DyadicRational(0))
        for _ in range(abs(e)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return self.k == 0 and not self.q

    def __repr__(self):
        return f"BS12(k={self.k}, q={self.q})"


BS12_A = BS12(1, DyadicRational(0))
BS12_C = BS12(0, DyadicRational(1))


class Bs12Group:
    """Target-group operations bundle for generic word evaluation."""

    @staticmethod
    def identity():
        return BS12(0, DyadicRational(0))

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def inv(x):
        return x.inverse()


class FiniteMetabelian:
    """Z/n semidirect Z/m with the 2-action; needs 2^n = 1 mod m, m odd.

    Elements are plain tuples (k, q) with 0 <= k < n, 0 <= q < m.
    """

    def __init__(self, n: int, m: int):
        if n < 1 or m < 1:
            raise IncompatibleParameters("quotient parameters must be positive")
        if m % 2 == 0:
            raise IncompatibleParameters("the dyadic part collapses unless m is odd")
        if pow(2, n, m) != 1 % m:
            raise IncompatibleParameters(
                f"2^{n} is not 1 mod {m}; the action does not descend"
            )
        self.n = n
        self.m = m

    def identity(self):
        return (0, 0)

    def mul(self, x, y):
        return ((x[0] + y[0]) % self.n, (x[1] + pow(2, x[0], self.m) * y[1]) % self.m)

    def inv(self, x):
        s = pow(2, -x[0] % self.n, self.m)
        return (-x[0] % self.n, -s * x[1] % self.m)

    def order(self) -> int:
        return self.n * self.m

    def elements(self):
        return [(k, q) for k in range(self.n) for q in range(self.m)]

    def element_index(self):
        return {e: i for i, e in enumerate(self.elements())}

    def from_bs12(self, g: BS12):
        inv2 = pow(2, -1, self.m) if self.m > 1 else 0
        q = g.q.num * pow(inv2, g.q.exp, self.m) % self.m
        return (g.k % self.n, q)

    def from_dyadic(self, d: DyadicRational) -> int:
        if self.m == 1:
            return 0
        inv2 = pow(2, -1, self.m)
        return d.num * pow(inv2, d.exp, self.m) % self.m

    def __repr__(self):
        return f"FiniteMetabelian(n={self.n}, m={self.m})"


def evaluate_word(word: Word, images, target):
    out = target.identity()
    for g, e in word.letters:
        x = images[g] if e == 1 else target.inv(images[g])
        out = target.mul(out, x)
    return out


def check_relators(pres, images, target, strict=True) -> bool:
    """Do the generator images satisfy every relator?"""
    for r in pres.relators:
        v = evaluate_word(r, images, target)
        if v != target.identity():
            if strict:
                raise RelatorViolation(f"relator {r!r} maps to {v!r}")
            return False
    return True


def _odd_part(v: int) -> int:
    v = abs(v)
    while v and v % 2 == 0:
        v //= 2
    return v


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _unit_section(images) -> BS12:
    """Some product of the images whose a-exponent is exactly one."""
    cur = BS12(0, DyadicRational(0))
    for g in images:
        if g.k == 0:
            continue
        if cur.k == 0:
            cur = g
            continue
        d, x, y = _xgcd(cur.k, g.k)
        cur = (cur ** x) * (g ** y)
    if cur.k == -1:
        cur = cur.inverse()
    if cur.k != 1:
        raise NotSurjective("a-exponents of the images do not generate Z")
    return cur


def bs12_surjective(images, strict=False) -> bool:
    """Surjectivity onto BS(1,2).

    The image hits all of Z exactly when the a-exponents have gcd one.
    Fix a product h of images with a-exponent one and translation tau;
    a Schreier transversal by powers of h shows the kernel's translation
    part is the Z[1/2]-span of q_i + tau*(1 - 2^k_i) over the images
    (k_i, q_i).  That span is all of Z[1/2] exactly when the odd parts
    of those numbers have gcd one.
    """
    kg = 0
    for g in images:
        kg = gcd(kg, g.k)
    if kg != 1:
        if strict:
            raise NotSurjective(f"a-exponent gcd is {kg}, not 1")
        return False
    tau = _unit_section(images).q
    qg = 0
    for g in images:
        delta = g.q + tau - tau.times_power_of_two(g.k)
        qg = gcd(qg, _odd_part(delta.num))
    if qg != 1:
        if strict:
            raise NotSurjective(f"translation odd-part gcd is {qg}, not 1")
        return False
    return True


def ring_mul(x: dict, y: dict, target) -> dict:
    """Product in the integral group ring of ``target``."""
    out: dict = {}
    for g, cg in x.items():
        for h, ch in y.items():
            k = target.mul(g, h)
            v = out.get(k, 0) + cg * ch
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def ring_apply(x: dict, fn) -> dict:
    """Push a group-ring element through a group map."""
    out: dict = {}
    for g, c in x.items():
        k = fn(g)
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out
