"""Jacobians twisted by finite metabelian quotients, and their cross-checks.

The Fox Jacobian of a presentation can be pushed through any
homomorphism to a finite group and then expanded, via the left regular
representation, into a plain integer matrix.  Its cokernel is the first
homology of the associated cover relative to the fibre over the base
point, so

    invariants(twisted cokernel)
        = invariants(cover H1) + a free summand of rank |fibre| - 1

This identity is used as a two-independent-paths consistency oracle:
the left side never looks at covering spaces, the right side
(Reidemeister-Schreier) never looks at Fox calculus.

Also here: the companion-collapse homomorphism that forgets the
companions of an infection (sending each companion group to the cyclic
group on the infection curve's longitude), plus the transport records
that let a certificate for a pattern be carried to its satellites.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bs12 import Bs12Group, evaluate_word
from .diagrams import SurgeryPresentation, infect, wirtinger, zero_surgery
from .errors import TargetMismatch
from .groups import (
    MetabelianHom,
    finite_cover_homology,
    metabelian_quotient_homs,
    push_fox,
    second_derived_certificate,
)
from .laurent import ONE, LaurentPoly
from .modules import alexander_polynomial, fox_jacobian, infinite_cyclic_weights
from .snf import abelian_invariants
from .words import Word, fox_derivative

__all__ = [
    "twisted_rows",
    "twisted_invariants",
    "crowell_check",
    "summand_specialization_check",
    "companion_collapse",
    "collapse_is_free_or_relator",
    "validate_collapse_at",
    "TransportRecord",
    "transport_record",
]


def twisted_rows(pres, images, target):
    """Fox Jacobian with entries in the integral group ring of ``target``."""
    rows = []
    for r in pres.relators:
        rows.append(
            tuple(
                push_fox(fox_derivative(r, i), images, target)
                for i in range(pres.num_generators)
            )
        )
    return rows


def _regular_blocks(rows, target, ncols):
    """Integer relation rows spanning the left-translates of each row.

    A group-ring row r generates the left submodule spanned by u*r over
    all u in the group; the integer row for (r, u) has, at column
    (j, u*k), the coefficient of k in entry j.
    """
    order = target.order()
    idx = target.element_index()
    elements = target.elements()
    out = []
    for row in rows:
        blocks = [dict() for _ in range(order)]
        for j, entry in enumerate(row):
            for k, c in entry.items():
                for ui, u in enumerate(elements):
                    col = j * order + idx[target.mul(u, k)]
                    blocks[ui][col] = blocks[ui].get(col, 0) + c
        out.extend(blocks)
    return out, ncols * order


def twisted_invariants(pres, images, target):
    """Abelian invariants of the twisted Jacobian's integer cokernel."""
    rows = twisted_rows(pres, images, target)
    int_rows, ncols = _regular_blocks(rows, target, pres.num_generators)
    return abelian_invariants(int_rows, ncols)


def _image_order(images, target) -> int:
    seen = {target.identity()}
    frontier = [target.identity()]
    gens = list(images) + [target.inv(g) for g in images]
    while frontier:
        h = frontier.pop()
        for g in gens:
            x = target.mul(h, g)
            if x not in seen:
                seen.add(x)
                frontier.append(x)
    return len(seen)


def crowell_check(pres, images, target) -> bool:
    """Do the Fox-calculus and covering-space paths agree?

    When the images generate a subgroup of index d, the twisted module
    is d copies of the one over the image, and the cover splits into d
    homeomorphic pieces; the comparison accounts for both.
    """
    free, torsion = finite_cover_homology(pres, images, target)
    s = _image_order(images, target)
    d = target.order() // s
    expected = (d * (free + s - 1), sorted(torsion * d))
    got_free, got_tors = twisted_invariants(pres, images, target)
    return (got_free, sorted(got_tors)) == expected


def summand_specialization_check(pres, meridian, hom: MetabelianHom) -> bool:
    """Collapsing translations must recover the untwisted Jacobian.

    Composing a summand homomorphism with (k, q) -> t^k is the
    abelianisation, up to the recorded meridian exponent; the pushed
    Jacobian therefore has to match the plain one entry by entry, with
    t inverted when the meridian maps to a^-1.
    """
    weights = infinite_cyclic_weights(pres, meridian)
    plain = fox_jacobian(pres, weights)
    for ri, r in enumerate(pres.relators):
        for i in range(pres.num_generators):
            pushed = push_fox(fox_derivative(r, i), hom.images, Bs12Group)
            coeffs: dict[int, int] = {}
            for g, c in pushed.items():
                coeffs[g.k] = coeffs.get(g.k, 0) + c
            collapsed = LaurentPoly(coeffs)
            expected = plain[ri][i]
            if hom.merid_exponent == -1:
                expected = expected.mirror()
            if collapsed != expected:
                return False
    return True


# ------------------------------------------------------------ transport


def companion_collapse(diagram, pattern, companions, curves=None):
    """Forget the companions of an infection.

    Returns ``(infected, plain, images)`` where ``infected`` presents
    the infected zero-surgery, ``plain`` the pattern's own zero-surgery,
    and ``images`` the collapse homomorphism: base arcs map to the arc
    of the plain diagram they lie on, arcs of infection curves die, and
    every companion generator maps to the image of the curve's
    longitude.
    """
    inf = infect(diagram, pattern, companions, curves=curves)
    plain = zero_surgery(diagram, pattern, curves=curves)
    rep_edge: dict[int, int] = {}
    for e, g in inf.orig_edge_gen.items():
        if g not in rep_edge or e < rep_edge[g]:
            rep_edge[g] = e
    images = []
    for g in range(inf.base_gen_count):
        e = rep_edge[g]
        if diagram.edge_component[e] == pattern:
            images.append(Word.gen(plain.orig_edge_gen[e]))
        else:
            images.append(Word.identity())
    base_map = dict(enumerate(images))
    for site in inf.sites:
        lam_image = site.longitude_word.substitute(base_map)
        images.extend([lam_image] * site.gen_count)
    return inf, plain, tuple(images)


def collapse_is_free_or_relator(inf, plain, images) -> bool:
    """Presentation-level proof that the collapse is a homomorphism.

    Every relator of the infected presentation must map to a word that
    is freely trivial or literally one of the plain presentation's
    relators; nothing about the plain group is assumed.
    """
    allowed = set(r.letters for r in plain.group.relators)
    base_map = dict(enumerate(images))
    for r in inf.group.relators:
        w = r.substitute(base_map)
        if w and w.letters not in allowed:
            return False
    if images[inf.meridian] != Word.gen(plain.meridian):
        return False
    return True


def validate_collapse_at(inf, plain, images, n, m):
    """Pull every metabelian quotient of the plain group back along the
    collapse and check all infected relators die.  Returns the number of
    quotient maps exercised."""
    target, homs = metabelian_quotient_homs(plain.group, plain.meridian, n, m)
    for hom in homs:
        composite = tuple(evaluate_word(w, hom, target) for w in images)
        for r in inf.group.relators:
            if evaluate_word(r, composite, target) != target.identity():
                raise TargetMismatch(
                    f"collapse fails a relator in the ({n},{m}) quotient"
                )
    return len(homs)


@dataclass(frozen=True)
class TransportRecord:
    """Why a certificate for the pattern survives an infection.

    ``winding`` is the linking number of the infection curve with the
    pattern.  Transport is ``valid`` when the curve has winding zero and
    either dies in the pattern's second metabelian quotient (then any
    companion works) or the companion has trivial Alexander polynomial.
    """

    curve: str
    winding: int
    second_derived: bool
    companion_alexander_trivial: bool | None
    quotient_checks: tuple = ()

    @property
    def valid(self) -> bool:
        return self.winding == 0 and (
            self.second_derived or bool(self.companion_alexander_trivial)
        )

    def as_dict(self) -> dict:
        return {
            "curve": self.curve,
            "winding": self.winding,
            "second_derived": self.second_derived,
            "companion_alexander_trivial": self.companion_alexander_trivial,
            "valid": self.valid,
        }


def transport_record(
    plain: SurgeryPresentation,
    curve: str,
    companion=None,
    budget=300000,
) -> TransportRecord:
    """Assess whether infection along ``curve`` preserves certificates."""
    winding = plain.curve_linking[curve]
    sd = False
    if winding == 0:
        sd = second_derived_certificate(
            plain.group, plain.meridian, plain.curve_words[curve], budget=budget
        )
    triv = None
    if companion is not None:
        lg = wirtinger(companion)
        triv = alexander_polynomial(lg.group, lg.meridians[0]) == ONE
    return TransportRecord(
        curve=curve,
        winding=winding,
        second_derived=sd,
        companion_alexander_trivial=triv,
    )
