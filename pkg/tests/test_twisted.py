import pytest

from dslice.bs12 import FiniteMetabelian
from dslice.diagrams import Diagram, SurgeryPresentation, infect, wirtinger, zero_surgery
from dslice.errors import TargetMismatch
from dslice.groups import metabelian_quotient_homs, summand_homs
from dslice.modules import alexander_module, detect_splitting, infinite_cyclic_weights
from dslice.snf import abelian_invariants
from dslice.twisted import (
    MetabelianHom,
    TransportRecord,
    collapse_is_free_or_relator,
    companion_collapse,
    crowell_check,
    summand_specialization_check,
    transport_record,
    twisted_invariants,
    validate_collapse_at,
)
from dslice.words import GroupPresentation, Word

from synthpres import presentation_from_rows

TREFOIL = [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]
FIG8 = [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)]
KINK = [(1, 2, 2, 1)]

# trefoil with a small meridian circle around its lowest arc
TREFOIL_MERID = [
    (3, 6, 4, 7), (5, 8, 6, 1), (7, 4, 8, 5), (1, 10, 2, 9), (10, 3, 9, 2),
]
TREFOIL_MERID_SIGNS = [-1, -1, -1, 1, 1]

# kinked unknot (edges 1-4) with a second circle (edges 5-6) that passes
# under it twice with opposite signs: linking number zero, and the circle
# slides off, so infections along it are no-ops
UNLINK_W = [(5, 2, 6, 1), (6, 2, 5, 3), (3, 1, 4, 4)]
UNLINK_W_SIGNS = [1, -1, 1]

ROWS_946 = [
    [{1: 3, 0: -3}, {1: 2, 0: -1}],
    [{1: 1, 0: -2}, {}],
]


def all_ones_images(pres, n):
    weights = infinite_cyclic_weights_of(pres)
    return tuple((w % n, 0) for w in weights)


def infinite_cyclic_weights_of(pres):
    # meridian index 0 works for every presentation used here
    return infinite_cyclic_weights(pres, 0)


# ------------------------------------------------------- two-path oracle


def test_twisted_invariants_trefoil_cyclic():
    lg = wirtinger(Diagram(TREFOIL))
    pres = lg.group
    q2 = FiniteMetabelian(2, 1)
    images = tuple((1, 0) for _ in pres.names)
    assert twisted_invariants(pres, images, q2) == (2, [3])
    q3 = FiniteMetabelian(3, 1)
    assert twisted_invariants(pres, images, q3) == (3, [2, 2])


def test_twisted_invariants_fig8_double():
    lg = wirtinger(Diagram(FIG8))
    images = tuple((1, 0) for _ in lg.group.names)
    assert twisted_invariants(lg.group, images, FiniteMetabelian(2, 1)) == (2, [5])


def test_crowell_check_cyclic_covers():
    for code in (TREFOIL, FIG8):
        lg = wirtinger(Diagram(code))
        for n in (2, 3):
            q = FiniteMetabelian(n, 1)
            images = tuple((1, 0) for _ in lg.group.names)
            assert crowell_check(lg.group, images, q)


def test_crowell_check_metabelian_covers():
    lg = wirtinger(Diagram(TREFOIL))
    target, homs = metabelian_quotient_homs(
        lg.group, lg.meridians[0], 2, 3, surjective_only=True
    )
    assert homs
    assert crowell_check(lg.group, homs[0], target)


def test_crowell_check_synthetic_module_presentation():
    pres = presentation_from_rows(ROWS_946)
    target, homs = metabelian_quotient_homs(pres, 0, 2, 3)
    for hom in homs[:5]:
        assert crowell_check(pres, hom, target)


def test_crowell_check_non_surjective_images():
    # trivial images: the "cover" is |Q| disjoint copies of the base
    lg = wirtinger(Diagram(TREFOIL))
    q = FiniteMetabelian(2, 1)
    images = tuple((0, 0) for _ in lg.group.names)
    assert crowell_check(lg.group, images, q)


# ----------------------------------------------- summand specialization


def test_summand_specialization():
    pres = presentation_from_rows(ROWS_946)
    report = detect_splitting(alexander_module(pres, 0))
    plus, minus = summand_homs(pres, 0, report)
    assert summand_specialization_check(pres, 0, plus)
    assert summand_specialization_check(pres, 0, minus)
    # lying about the meridian exponent flips the expected mirror
    doctored = MetabelianHom(plus.images, -1, plus.factor, plus.surjective)
    assert not summand_specialization_check(pres, 0, doctored)


# ------------------------------------------------------------- collapse


def test_collapse_noop_infection():
    d = Diagram(UNLINK_W, signs=UNLINK_W_SIGNS)
    inf, plain, images = companion_collapse(d, 0, {1: Diagram(TREFOIL)})
    assert collapse_is_free_or_relator(inf, plain, images)
    assert validate_collapse_at(inf, plain, images, 2, 3) >= 1
    assert abelian_invariants(
        inf.group.abelianization_matrix(), inf.group.num_generators
    ) == (1, [])
    images_mod = tuple(
        (w % 2, 0) for w in infinite_cyclic_weights(inf.group, inf.meridian)
    )
    assert crowell_check(inf.group, images_mod, FiniteMetabelian(2, 1))


def test_collapse_meridian_infection():
    d = Diagram(TREFOIL_MERID, signs=TREFOIL_MERID_SIGNS)
    inf, plain, images = companion_collapse(d, 0, {1: Diagram(FIG8)})
    assert collapse_is_free_or_relator(inf, plain, images)
    assert validate_collapse_at(inf, plain, images, 2, 3) >= 1
    images_mod = tuple(
        (w % 2, 0) for w in infinite_cyclic_weights(inf.group, inf.meridian)
    )
    assert crowell_check(inf.group, images_mod, FiniteMetabelian(2, 1))


def test_collapse_detects_tampering():
    d = Diagram(UNLINK_W, signs=UNLINK_W_SIGNS)
    inf, plain, images = companion_collapse(d, 0, {1: Diagram(TREFOIL)})
    bad = list(images)
    bad[inf.meridian] = Word.gen(plain.meridian, -1)
    assert not collapse_is_free_or_relator(inf, plain, tuple(bad))


# ------------------------------------------------------------ transport


def test_transport_record_winding_zero_second_derived():
    d = Diagram(UNLINK_W, signs=UNLINK_W_SIGNS)
    plain = zero_surgery(d, 0, curves={"w": 1})
    assert plain.curve_linking["w"] == 0
    assert plain.curve_words["w"] == Word.identity()
    rec = transport_record(plain, "w")
    assert rec.winding == 0 and rec.second_derived
    assert rec.valid
    # with companions attached the verdict only improves
    rec2 = transport_record(plain, "w", companion=Diagram(TREFOIL))
    assert rec2.valid and rec2.companion_alexander_trivial is False


def test_transport_record_winding_one_fails():
    d = Diagram(TREFOIL_MERID, signs=TREFOIL_MERID_SIGNS)
    plain = zero_surgery(d, 0, curves={"m": 1})
    rec = transport_record(plain, "m")
    assert rec.winding == 1
    assert not rec.valid


def test_transport_record_trivial_companion_branch():
    fake = SurgeryPresentation(
        group=GroupPresentation(("x",), ()),
        meridian=0,
        longitude=Word.identity(),
        curve_words={"c": Word.gen(0)},
        curve_linking={"c": 0},
    )
    # the curve survives in homology, so only a trivial companion helps
    rec_plain = transport_record(fake, "c")
    assert not rec_plain.valid and not rec_plain.second_derived
    rec_kink = transport_record(fake, "c", companion=Diagram(KINK))
    assert rec_kink.companion_alexander_trivial and rec_kink.valid
    rec_tref = transport_record(fake, "c", companion=Diagram(TREFOIL))
    assert not rec_tref.valid


def test_transport_record_is_frozen_data():
    rec = TransportRecord("c", 0, True, None)
    assert rec.valid
    rec2 = TransportRecord("c", 2, True, True)
    assert not rec2.valid
