from math import gcd

import pytest

from dslice.bs12 import BS12, Bs12Group, FiniteMetabelian, evaluate_word
from dslice.diagrams import Diagram, wirtinger
from dslice.errors import HypothesisNotMet
from dslice.groups import (
    MetabelianHom,
    finite_cover_homology,
    metabelian_quotient_homs,
    push_fox,
    second_derived_certificate,
    simplify_presentation,
    summand_homs,
)
from dslice.laurent import DyadicRational, LaurentPoly
from dslice.modules import (
    alexander_module,
    alexander_polynomial,
    detect_splitting,
    infinite_cyclic_weights,
)
from dslice.words import GroupPresentation, Word, fox_derivative

from synthpres import brute_metabelian_homs, brute_subgroup, presentation_from_rows

TREFOIL = [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]
FIG8 = [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)]

# Seifert-form presentation matrix of the pretzel knot with two rows of
# three positive half-twists and one of three negative ones
ROWS_946 = [
    [{1: 3, 0: -3}, {1: 2, 0: -1}],
    [{1: 1, 0: -2}, {}],
]


def commutator(u, v):
    return u * v * u.inverse() * v.inverse()


def trefoil_group():
    lg = wirtinger(Diagram(TREFOIL))
    return lg.group, lg.meridians[0]


# ---------------------------------------------------------------- Tietze


def test_simplify_trefoil_presentation():
    pres, meridian = trefoil_group()
    small, images = simplify_presentation(pres, keep={meridian})
    assert small.num_generators < pres.num_generators
    # the kept meridian is still a plain generator
    (pair,) = images[meridian].letters
    new_meridian = pair[0]
    assert pair[1] == 1
    assert (alexander_polynomial(small, new_meridian)
            == alexander_polynomial(pres, meridian))


def test_simplify_images_transport_homs():
    pres, meridian = trefoil_group()
    small, images = simplify_presentation(pres, keep={meridian})
    new_meridian = images[meridian].letters[0][0]
    target, homs = metabelian_quotient_homs(
        small, new_meridian, 2, 3, surjective_only=True
    )
    assert homs
    for hom in homs:
        composite = tuple(
            evaluate_word(images[i], hom, target)
            for i in range(pres.num_generators)
        )
        for r in pres.relators:
            assert evaluate_word(r, composite, target) == target.identity()
        assert composite[meridian][0] == 1


def test_simplify_preserves_cover_homology():
    pres, meridian = trefoil_group()
    small, images = simplify_presentation(pres, keep={meridian})
    new_meridian = images[meridian].letters[0][0]
    q = FiniteMetabelian(2, 1)
    big_images = tuple(
        (w % 2, 0) for w in infinite_cyclic_weights(pres, meridian)
    )
    small_images = tuple(
        (w % 2, 0) for w in infinite_cyclic_weights(small, new_meridian)
    )
    assert (finite_cover_homology(pres, big_images, q)
            == finite_cover_homology(small, small_images, q))


def test_simplify_kills_pinned_generator():
    # y is forced equal to a word in x, so only x survives
    pres = GroupPresentation(
        ("x", "y"),
        (Word.gen(1) * Word.gen(0, -2),),
    )
    small, images = simplify_presentation(pres)
    assert small.num_generators == 1
    assert small.relators == ()
    assert images[1] == Word.gen(0) * Word.gen(0)


# ------------------------------------------------------- summand homs


def test_summand_homs_on_split_module():
    pres = presentation_from_rows(ROWS_946)
    assert infinite_cyclic_weights(pres, 0) == [1, 0, 0]
    module = alexander_module(pres, 0)
    assert list(module.rows[0]) == [
        LaurentPoly({1: 3, 0: -3}),
        LaurentPoly({1: 2, 0: -1}),
    ]
    assert list(module.rows[1]) == [LaurentPoly({1: 1, 0: -2}), LaurentPoly({})]
    report = detect_splitting(module)
    assert report.certified
    plus, minus = summand_homs(pres, 0, report)
    assert isinstance(plus, MetabelianHom)
    assert plus.merid_exponent == 1 and minus.merid_exponent == -1
    assert plus.factor == "t-2" and minus.factor == "2t-1"
    assert plus.images[0] == BS12(1, DyadicRational(0))
    assert minus.images[0] == BS12(-1, DyadicRational(0))
    # e1 is the first witness, e2 the difference of the two
    assert plus.images[1] == BS12(0, DyadicRational(1))
    assert plus.images[2] == BS12(0, DyadicRational(-1))
    assert minus.images[1] == BS12(0, DyadicRational(0))
    assert minus.images[2] == BS12(0, DyadicRational(1))
    assert plus.surjective and minus.surjective
    # the maps respect every relator
    for r in pres.relators:
        assert plus(r).is_identity()
        assert minus(r).is_identity()


def test_summand_homs_need_certificate():
    pres, meridian = trefoil_group()
    report = detect_splitting(alexander_module(pres, meridian))
    assert report.verdict == "no_split"
    with pytest.raises(HypothesisNotMet):
        summand_homs(pres, meridian, report)


# ------------------------------------------- finite metabelian quotients


def test_quotient_homs_match_brute_force_trefoil():
    pres, meridian = trefoil_group()
    weights = infinite_cyclic_weights(pres, meridian)
    for n, m in [(2, 3), (4, 5), (2, 1)]:
        target, homs = metabelian_quotient_homs(pres, meridian, n, m)
        brute = brute_metabelian_homs(pres, weights, target)
        assert sorted(homs) == sorted(brute)


def test_quotient_homs_match_brute_force_synthetic():
    pres = presentation_from_rows(ROWS_946)
    weights = infinite_cyclic_weights(pres, 0)
    target, homs = metabelian_quotient_homs(pres, 0, 2, 3)
    assert len(homs) == 27
    brute = brute_metabelian_homs(pres, weights, target)
    assert sorted(homs) == sorted(brute)
    target5, homs5 = metabelian_quotient_homs(pres, 0, 4, 5)
    assert len(homs5) == 25
    assert sorted(homs5) == sorted(brute_metabelian_homs(pres, weights, target5))


def test_surjectivity_filter_is_exact():
    # against brute subgroup closure, for every enumerated hom
    for pres, meridian in [
        (presentation_from_rows(ROWS_946), 0),
        trefoil_group(),
        (wirtinger(Diagram(FIG8)).group, wirtinger(Diagram(FIG8)).meridians[0]),
    ]:
        for n, m in [(2, 3), (4, 5)]:
            target, all_homs = metabelian_quotient_homs(pres, meridian, n, m)
            _, surj = metabelian_quotient_homs(
                pres, meridian, n, m, surjective_only=True
            )
            surj = set(surj)
            for hom in all_homs:
                hits_all = len(brute_subgroup(hom, target)) == target.order()
                assert (hom in surj) == hits_all


def test_surjective_counts():
    pres = presentation_from_rows(ROWS_946)
    _, surj = metabelian_quotient_homs(pres, 0, 2, 3, surjective_only=True)
    assert len(surj) == 24
    _, surj5 = metabelian_quotient_homs(pres, 0, 4, 5, surjective_only=True)
    assert len(surj5) == 20
    # figure-eight: determinant is -1 at t=2, so only conjugation-principal
    # translation vectors survive and nothing surjects
    lg = wirtinger(Diagram(FIG8))
    _, fig_surj = metabelian_quotient_homs(
        lg.group, lg.meridians[0], 2, 3, surjective_only=True
    )
    assert fig_surj == []


# --------------------------------------------------------- finite covers


def test_trefoil_cyclic_cover_homology():
    pres, _ = trefoil_group()
    q2 = FiniteMetabelian(2, 1)
    images2 = tuple((1, 0) for _ in range(pres.num_generators))
    assert finite_cover_homology(pres, images2, q2) == (1, [3])
    q3 = FiniteMetabelian(3, 1)
    images3 = tuple((1, 0) for _ in range(pres.num_generators))
    assert finite_cover_homology(pres, images3, q3) == (1, [2, 2])


def test_fig8_double_cover_homology():
    lg = wirtinger(Diagram(FIG8))
    q = FiniteMetabelian(2, 1)
    images = tuple((1, 0) for _ in range(lg.group.num_generators))
    assert finite_cover_homology(lg.group, images, q) == (1, [5])


def test_unknot_cover_homology():
    pres = GroupPresentation(("x",), ())
    q = FiniteMetabelian(2, 1)
    assert finite_cover_homology(pres, ((1, 0),), q) == (1, [])


def test_metabelian_cover_homology_is_class_invariant():
    # scaling the translation vector by a unit re-parametrises the same
    # kernel, so the cover homology cannot change
    pres = presentation_from_rows(ROWS_946)
    target, surj = metabelian_quotient_homs(pres, 0, 2, 3, surjective_only=True)
    hom = surj[0]
    scaled = tuple((k, 2 * q % 3) for k, q in hom)
    assert scaled in set(surj)
    assert (finite_cover_homology(pres, hom, target)
            == finite_cover_homology(pres, scaled, target))


# ------------------------------------------------- second derived series


def test_second_derived_unknot():
    pres = GroupPresentation(("x",), ())
    assert second_derived_certificate(pres, 0, Word.identity())
    assert not second_derived_certificate(pres, 0, Word.gen(0))


def test_second_derived_trefoil():
    pres, meridian = trefoil_group()
    gens = [i for i in range(pres.num_generators)]
    u = commutator(Word.gen(gens[0]), Word.gen(gens[1]))
    # a commutator generates the infinite cyclic cover's homology: not
    # in the second derived subgroup
    assert not second_derived_certificate(pres, meridian, u)
    # ... and some finite metabelian quotient must see that
    target, surj = metabelian_quotient_homs(pres, meridian, 2, 3, surjective_only=True)
    seen = [evaluate_word(u, hom, target) for hom in surj]
    assert any(v != target.identity() for v in seen)
    # a commutator of two commutator-subgroup elements dies metabelianly
    v = Word.gen(gens[0]) * u * Word.gen(gens[0], -1)
    w = commutator(u, v)
    assert second_derived_certificate(pres, meridian, w)
    for hom in surj:
        assert evaluate_word(w, hom, target) == target.identity()


def test_second_derived_conjugation_invariance():
    pres, meridian = trefoil_group()
    u = commutator(Word.gen(0), Word.gen(1))
    v = Word.gen(1) * u * Word.gen(1, -1)
    w = commutator(u, v)
    for c in [Word.gen(0), Word.gen(1, -1) * Word.gen(0)]:
        assert second_derived_certificate(pres, meridian, c * w * c.inverse())


# -------------------------------------------------------------- push_fox


def test_push_fox_values():
    # d/dc of the defining BS relator a c a^-1 c^-2
    r = (Word.gen(0) * Word.gen(1) * Word.gen(0, -1)
         * Word.gen(1, -1) * Word.gen(1, -1))
    from dslice.bs12 import BS12_A, BS12_C

    poly = fox_derivative(r, 1)
    pushed = push_fox(poly, (BS12_A, BS12_C), Bs12Group)
    e = Bs12Group.identity()
    assert pushed == {
        BS12_A: 1,
        BS12(0, DyadicRational(1)): -1,
        e: -1,
    }
