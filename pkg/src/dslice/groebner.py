"""Exact submodule arithmetic over the integral Laurent ring.

Membership questions about submodules of Lambda^k, where Lambda is the
ring of integer Laurent polynomials in t, are translated into polynomial
questions: introduce a second variable u standing for the inverse of t
and add the relations (t*u - 1)e_j.  The kernel of Z[t,u]^k -> Lambda^k
is generated by exactly those vectors, so membership upstairs and
downstairs agree.  Over the coefficient ring Z we compute strong
Groebner bases in the sense of Kandri-Rody/Kapur: besides S-polynomials
the basis absorbs gcd combinations of leading coefficients, after which
ordinary reduction decides membership (normal form zero if and only if
the vector lies in the submodule).

Each basis element optionally carries its expression in terms of the
input generators, so reductions to zero yield explicit coefficient
witnesses.  Callers re-verify witnesses by multiplication; nothing
downstream trusts the bookkeeping blindly.

Monomials are (i, j) exponent pairs for t^i u^j; module terms add a
position.  The order is graded (total degree, then t-degree), with ties
broken towards the lower position.
"""

from __future__ import annotations

from math import gcd

from .errors import BudgetExceeded
from .laurent import LaurentPoly

__all__ = [
    "vector_to_tu",
    "scalar_from_tu",
    "GroebnerBasis",
    "module_contains",
    "reduce_vector",
]


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


def _balanced_div(a, b):
    """q with |a - q*b| <= |b|/2, ties resolved so iteration terminates."""
    ab = abs(b)
    q, r = divmod(a, ab)
    if 2 * r > ab:
        q += 1
    return -q if b < 0 else q


def vector_to_tu(vec, width=None):
    """Laurent vector -> {(i, j, pos): int} with u = t^-1."""
    out = {}
    for pos, p in enumerate(vec):
        for d, c in p.coeffs.items():
            key = (d, 0, pos) if d >= 0 else (0, -d, pos)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def scalar_from_tu(mono_dict) -> LaurentPoly:
    coeffs = {}
    for (i, j), c in mono_dict.items():
        d = i - j
        coeffs[d] = coeffs.get(d, 0) + c
    return LaurentPoly(coeffs)


def _mono_key(m):
    i, j, pos = m
    return (i + j, i, -pos)


def _mono_divides(m1, m2):
    return m1[2] == m2[2] and m1[0] <= m2[0] and m1[1] <= m2[1]


def _mono_mul(m, i, j):
    return (m[0] + i, m[1] + j, m[2])


def _lead(elem):
    return max(elem, key=_mono_key)


def _scale_shift(elem, c, i, j):
    """c * t^i * u^j * elem."""
    return {_mono_mul(m, i, j): c * v for m, v in elem.items()}


def _add(e1, e2):
    out = dict(e1)
    for m, v in e2.items():
        w = out.get(m, 0) + v
        if w:
            out[m] = w
        else:
            out.pop(m, None)
    return out


def _coords_add(c1, c2):
    out = {g: dict(d) for g, d in c1.items()}
    for g, d in c2.items():
        cur = out.setdefault(g, {})
        for m, v in d.items():
            w = cur.get(m, 0) + v
            if w:
                cur[m] = w
            else:
                cur.pop(m, None)
        if not cur:
            out.pop(g, None)
    return out


def _coords_scale(coords, c, i, j):
    return {
        g: {(m[0] + i, m[1] + j): c * v for m, v in d.items()}
        for g, d in coords.items()
    }


class GroebnerBasis:
    """Strong Groebner basis of a submodule of Lambda^width.

    ``generators``: list of Laurent vectors.  When ``track`` is set the
    basis remembers how each element is built from the generators and
    :meth:`reduce` reports coefficients for successful memberships.
    """

    def __init__(self, generators, width, track=False, budget=200000):
        self.width = width
        self.track = track
        self.budget = budget
        self._work = 0
        self.basis = []  # list of (elem, coords or None)
        gens = []
        for idx, vec in enumerate(generators):
            if len(vec) != width:
                raise ValueError("generator width mismatch")
            elem = vector_to_tu(vec)
            if elem:
                coords = {idx: {(0, 0): 1}} if track else None
                gens.append((elem, coords))
        for pos in range(width):
            rel = {(1, 1, pos): 1, (0, 0, pos): -1}
            gens.append((rel, {} if track else None))
        self._complete(gens)

    def _tick(self, n=1):
        self._work += n
        if self._work > self.budget:
            raise BudgetExceeded("groebner computation exceeded its budget")

    def _reduce_full(self, elem, coords):
        """Normal form; returns (reduced elem, coords)."""
        result = {}
        work = dict(elem)
        while work:
            self._tick()
            m = _lead(work)
            c = work[m]
            # prefer a reducer whose leading coefficient divides exactly;
            # in a strong basis every member's lead admits one, so exact
            # steps alone decide membership and partial steps only help
            exact = None
            partial = None
            for belem, bcoords in self.basis:
                bm = _lead(belem)
                if not _mono_divides(bm, m):
                    continue
                lc = belem[bm]
                if c % lc == 0:
                    exact = (belem, bcoords, bm, c // lc)
                    break
                q = _balanced_div(c, lc)
                if q and (partial is None or abs(lc) < abs(partial[0][_lead(partial[0])])):
                    partial = (belem, bcoords, bm, q)
            hit = exact or partial
            if hit is None:
                result[m] = c
                del work[m]
                continue
            belem, bcoords, bm, q = hit
            i, j = m[0] - bm[0], m[1] - bm[1]
            work = _add(work, _scale_shift(belem, -q, i, j))
            if coords is not None and bcoords is not None:
                coords = _coords_add(coords, _coords_scale(bcoords, -q, i, j))
        return result, coords

    def _complete(self, gens):
        basis = self.basis
        pairs = []
        for elem, coords in gens:
            red, rc = self._reduce_full(elem, coords)
            if red:
                for k in range(len(basis)):
                    pairs.append((k, len(basis)))
                basis.append((red, rc))
        while pairs:
            self._tick()
            k1, k2 = pairs.pop()
            e1, c1 = basis[k1]
            e2, c2 = basis[k2]
            m1, m2 = _lead(e1), _lead(e2)
            if m1[2] != m2[2]:
                continue
            lcm = (max(m1[0], m2[0]), max(m1[1], m2[1]), m1[2])
            a1, a2 = e1[m1], e2[m2]
            new_items = []
            # S-combination: cancel leading terms
            g = gcd(a1, a2)
            s1 = a2 // g
            s2 = a1 // g
            s_elem = _add(
                _scale_shift(e1, s1, lcm[0] - m1[0], lcm[1] - m1[1]),
                _scale_shift(e2, -s2, lcm[0] - m2[0], lcm[1] - m2[1]),
            )
            s_coords = None
            if self.track:
                s_coords = _coords_add(
                    _coords_scale(c1 or {}, s1, lcm[0] - m1[0], lcm[1] - m1[1]),
                    _coords_scale(c2 or {}, -s2, lcm[0] - m2[0], lcm[1] - m2[1]),
                )
            new_items.append((s_elem, s_coords))
            # G-combination: realise gcd of leading coefficients
            if a1 % a2 and a2 % a1:
                g, x1, x2 = _xgcd(a1, a2)
                g_elem = _add(
                    _scale_shift(e1, x1, lcm[0] - m1[0], lcm[1] - m1[1]),
                    _scale_shift(e2, x2, lcm[0] - m2[0], lcm[1] - m2[1]),
                )
                g_coords = None
                if self.track:
                    g_coords = _coords_add(
                        _coords_scale(c1 or {}, x1, lcm[0] - m1[0], lcm[1] - m1[1]),
                        _coords_scale(c2 or {}, x2, lcm[0] - m2[0], lcm[1] - m2[1]),
                    )
                new_items.append((g_elem, g_coords))
            for elem, coords in new_items:
                red, rc = self._reduce_full(elem, coords)
                if red:
                    for k in range(len(basis)):
                        pairs.append((k, len(basis)))
                    basis.append((red, rc))

    def reduce(self, vec):
        """Normal form of a Laurent vector modulo the submodule.

        Returns ``(normal_form_elem, coords)``; membership holds exactly
        when the normal form is empty.  ``coords`` (tracking only) maps
        generator index -> Laurent coefficient such that
        ``vec = sum coeff_g * generator_g`` modulo nothing at all when
        the normal form vanished.
        """
        elem = vector_to_tu(vec)
        coords = {} if self.track else None
        red, rc = self._reduce_full(elem, coords)
        if rc is None:
            return red, None
        lifted = {
            g: scalar_from_tu(d) * -1 for g, d in rc.items()
        }
        return red, lifted

    def contains(self, vec) -> bool:
        red, _ = self.reduce(vec)
        return not red


def module_contains(rows, width, vec, budget=200000) -> bool:
    return GroebnerBasis(rows, width, budget=budget).contains(vec)


def reduce_vector(rows, width, vec, budget=200000):
    gb = GroebnerBasis(rows, width, track=True, budget=budget)
    return gb.reduce(vec)
