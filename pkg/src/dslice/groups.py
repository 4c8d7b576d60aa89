"""Group-level machinery on top of presentations.

Four independent services live here:

* Tietze simplification with tracked generator images, so data attached
  to the original generators (probe words, distinguished meridians) can
  be rewritten into the smaller presentation.
* Construction of the two metabelian quotient maps onto BS(1,2) from a
  certified module splitting, one per summand, with exact dyadic
  translation parts extracted from tracked Groebner coordinates.
* Enumeration of homomorphisms onto the finite metabelian groups
  Z/n x| Z/m, done by linear algebra mod m on the Fox Jacobian
  evaluated at t = 2.
* Reidemeister-Schreier rewriting for the homology of finite covers,
  and a membership certificate for the second derived subgroup.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

from .bs12 import (
    BS12,
    Bs12Group,
    FiniteMetabelian,
    bs12_surjective,
    check_relators,
    evaluate_word,
)
from .errors import BudgetExceeded, HypothesisNotMet, TargetMismatch
from .groebner import GroebnerBasis, module_contains
from .laurent import ONE, ZERO
from .modules import (
    _eval_fox,
    _word_weight,
    alexander_module,
    fox_jacobian,
    infinite_cyclic_weights,
)
from .snf import abelian_invariants, nullspace_mod
from .words import FoxPolynomial, GroupPresentation, Word, fox_derivative

__all__ = [
    "simplify_presentation",
    "MetabelianHom",
    "summand_homs",
    "metabelian_quotient_homs",
    "finite_cover_homology",
    "second_derived_certificate",
    "push_fox",
]


def _cyclic_reduce(w: Word) -> Word:
    ls = w.letters
    while len(ls) >= 2 and ls[0][0] == ls[-1][0] and ls[0][1] == -ls[-1][1]:
        ls = ls[1:-1]
    return Word(ls)


def _occurrences(w: Word, g: int) -> int:
    return sum(1 for gg, _ in w.letters if gg == g)


def simplify_presentation(pres: GroupPresentation, keep=(), letter_budget=None):
    """Eliminate generators that some relator pins down uniquely.

    Whenever a relator contains a generator exactly once, that relator
    solves for the generator and both can be removed.  Returns
    ``(smaller_presentation, images)`` where ``images[i]`` expresses the
    i-th original generator as a word in the surviving ones.  Indices in
    ``keep`` are never eliminated.  Best effort: stops quietly when the
    rewritten relators would outgrow the letter budget.
    """
    keep = set(keep)
    n = pres.num_generators
    relators = [_cyclic_reduce(r) for r in pres.relators if r]
    subst = {i: Word.gen(i) for i in range(n)}
    alive = set(range(n))
    if letter_budget is None:
        letter_budget = 50 * (sum(len(r) for r in relators) + n + 20)

    while True:
        best = None
        for ri, r in enumerate(relators):
            counts: dict[int, int] = {}
            for g, _ in r.letters:
                counts[g] = counts.get(g, 0) + 1
            for g, c in counts.items():
                if c != 1 or g in keep:
                    continue
                elsewhere = sum(
                    _occurrences(s, g) for si, s in enumerate(relators) if si != ri
                )
                cost = (len(r) - 1, elsewhere, g, ri)
                if best is None or cost < best:
                    best = cost
        if best is None:
            break
        _, _, g, ri = best
        r = relators[ri]
        pos = next(k for k, (gg, _) in enumerate(r.letters) if gg == g)
        e = r.letters[pos][1]
        prefix = Word(r.letters[:pos])
        suffix = Word(r.letters[pos + 1:])
        if e == 1:
            wg = prefix.inverse() * suffix.inverse()
        else:
            wg = suffix * prefix
        replaced = [
            _cyclic_reduce(s.substitute({g: wg}))
            for si, s in enumerate(relators)
            if si != ri
        ]
        replaced = [s for s in replaced if s]
        if sum(len(s) for s in replaced) > letter_budget:
            break
        relators = []
        seen = set()
        for s in replaced:
            if s.letters in seen or s.inverse().letters in seen:
                continue
            seen.add(s.letters)
            relators.append(s)
        subst = {i: w.substitute({g: wg}) for i, w in subst.items()}
        alive.discard(g)

    order = sorted(alive)
    remap = {old: new for new, old in enumerate(order)}
    to_new = {old: Word.gen(remap[old]) for old in order}
    new_pres = GroupPresentation(
        tuple(pres.names[i] for i in order),
        tuple(r.substitute(to_new) for r in relators),
    )
    images = tuple(subst[i].substitute(to_new) for i in range(n))
    return new_pres, images


@dataclass(frozen=True)
class MetabelianHom:
    """A homomorphism to BS(1,2), one generator image per source generator.

    ``factor`` names the Laurent polynomial annihilating the translation
    part ("t-2" or "2t-1"); ``merid_exponent`` records whether the
    distinguished meridian maps to a or to a^-1.
    """

    images: tuple
    merid_exponent: int
    factor: str
    surjective: bool

    def __call__(self, word: Word) -> BS12:
        return evaluate_word(word, self.images, Bs12Group)


def summand_homs(pres: GroupPresentation, meridian: int, report, budget=400000):
    """The two quotient maps induced by a certified splitting.

    Each splitting summand is a copy of Z[1/2] on which the meridian
    acts by 2 or by 1/2, so collapsing the other summand yields a map
    onto (a subgroup of) BS(1,2).  Translation parts come from the
    witness coordinates of each generator column, reduced by a tracked
    Groebner basis; they are well defined exactly modulo the summand's
    annihilator, which evaluation at t = 2 (resp. t = 1/2) kills.
    """
    if not report.certified:
        raise HypothesisNotMet("no certified splitting to project from")
    weights = infinite_cyclic_weights(pres, meridian)
    module = alexander_module(pres, meridian)
    gens = [report.v1, report.v2] + list(module.rows)
    gb = GroebnerBasis(gens, module.ncols, track=True, budget=budget)
    plus = []
    minus = []
    for i in range(pres.num_generators):
        if i == meridian:
            p = q = ZERO
        else:
            col = i if i < meridian else i - 1
            vec = tuple(ONE if j == col else ZERO for j in range(module.ncols))
            nf, coords = gb.reduce(vec)
            if nf:
                raise TargetMismatch(
                    "splitting witnesses fail to generate; report is inconsistent"
                )
            p = coords.get(0, ZERO)
            q = coords.get(1, ZERO)
        plus.append(BS12(weights[i], p.evaluate_dyadic(1)))
        minus.append(BS12(-weights[i], q.evaluate_dyadic(-1)))
    h_plus = MetabelianHom(tuple(plus), 1, "t-2", bs12_surjective(plus))
    h_minus = MetabelianHom(tuple(minus), -1, "2t-1", bs12_surjective(minus))
    check_relators(pres, h_plus.images, Bs12Group)
    check_relators(pres, h_minus.images, Bs12Group)
    return h_plus, h_minus


def metabelian_quotient_homs(
    pres: GroupPresentation,
    meridian: int,
    n: int,
    m: int,
    surjective_only=False,
    cap=250000,
):
    """All homomorphisms to Z/n x| Z/m lifting the mod-n abelianisation.

    A candidate is determined by its vector of translation parts, and
    the relator conditions are exactly the kernel of the Fox Jacobian
    evaluated at t = 2 over Z/m.  Returns ``(target, image_tuples)``
    with a deterministic ordering.
    """
    target = FiniteMetabelian(n, m)
    weights = infinite_cyclic_weights(pres, meridian)
    ng = pres.num_generators
    rows = fox_jacobian(pres, weights)
    rows_mod = [[p.evaluate_mod(2, m) for p in row] for row in rows]
    basis = nullspace_mod(rows_mod, m, ncols=ng)
    if m ** len(basis) > cap:
        raise BudgetExceeded(
            f"translation kernel too large to enumerate ({m}^{len(basis)})"
        )
    span = {(0,) * ng}
    for b in basis:
        span = {
            tuple((x[i] + k * b[i]) % m for i in range(ng))
            for x in span
            for k in range(m)
        }
    homs = []
    for chi in sorted(span):
        if surjective_only and not _finite_surjective(chi, weights, meridian, n, m):
            continue
        images = tuple((weights[i] % n, chi[i]) for i in range(ng))
        check_relators(pres, images, target)
        homs.append(images)
    return target, homs


def _finite_surjective(chi, weights, meridian, n, m) -> bool:
    """Does the hom with translation vector chi hit all of Z/n x| Z/m?

    The meridian maps to (1, tau), a section of the Z/n part, so a
    Schreier transversal by its powers identifies the image's
    translation part with the ideal generated by
    chi_i + tau*(1 - 2^k_i) mod m.
    """
    tau = chi[meridian]
    g = 0
    for i, x in enumerate(chi):
        k = weights[i] % n
        g = gcd(g, (x + tau * (1 - pow(2, k, m))) % m)
    return gcd(g, m) == 1


def finite_cover_homology(pres: GroupPresentation, images, target, cap=20000):
    """Integral homology of the cover attached to ker(pi -> target).

    Builds a Schreier transversal by breadth-first search over the image
    subgroup, rewrites every relator at every coset into Schreier
    generators, and reads off abelian invariants.  Returns
    ``(free_rank, torsion_divisors)``.
    """
    ident = target.identity()
    index = {ident: 0}
    elements = [ident]
    tree: dict[tuple[int, int], bool] = {}
    queue = deque([0])
    ng = pres.num_generators
    while queue:
        p = queue.popleft()
        h = elements[p]
        for i in range(ng):
            nxt = target.mul(h, images[i])
            if nxt not in index:
                if len(elements) >= cap:
                    raise BudgetExceeded("image subgroup larger than the cap")
                index[nxt] = len(elements)
                elements.append(nxt)
                tree[(p, i)] = True
                queue.append(index[nxt])
    ncosets = len(elements)

    schreier: dict[tuple[int, int], int] = {}
    for p in range(ncosets):
        for i in range(ng):
            if (p, i) not in tree:
                schreier[(p, i)] = len(schreier)
    nschreier = len(schreier)
    assert nschreier == ncosets * ng - (ncosets - 1)

    inv_images = [target.inv(g) for g in images]
    rows = []
    for p0 in range(ncosets):
        for r in pres.relators:
            row: dict[int, int] = {}
            h = elements[p0]
            for g, e in r.letters:
                if e == 1:
                    p = index[h]
                    s = schreier.get((p, g))
                    if s is not None:
                        row[s] = row.get(s, 0) + 1
                    h = target.mul(h, images[g])
                else:
                    h = target.mul(h, inv_images[g])
                    p = index[h]
                    s = schreier.get((p, g))
                    if s is not None:
                        row[s] = row.get(s, 0) - 1
            rows.append({k: v for k, v in row.items() if v})
    return abelian_invariants(rows, nschreier)


def second_derived_certificate(
    pres: GroupPresentation, meridian: int, word: Word, budget=300000
) -> bool:
    """Exact membership test for the second derived subgroup.

    A loop lies in the second derived subgroup iff it dies in the
    maximal metabelian quotient: its total winding must vanish and its
    Fox vector must lie in the row span of the full Jacobian over the
    Laurent ring.  Both checks are exact, so the answer is a theorem in
    either direction.
    """
    weights = infinite_cyclic_weights(pres, meridian)
    if _word_weight(word, weights) != 0:
        return False
    n = pres.num_generators
    rows = [tuple(r) for r in fox_jacobian(pres, weights)]
    vec = tuple(
        _eval_fox(fox_derivative(word, i), weights) for i in range(n)
    )
    return module_contains(rows, n, vec, budget=budget)


def push_fox(poly: FoxPolynomial, images, target) -> dict:
    """Image of a Fox polynomial in the integral group ring of ``target``."""
    out: dict = {}
    for w, c in poly.terms:
        g = evaluate_word(w, images, target)
        v = out.get(g, 0) + c
        if v:
            out[g] = v
        else:
            out.pop(g, None)
    return out
