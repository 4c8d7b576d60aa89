"""Building, assembling, and replaying double-slice certificates.

A certificate records, for one subject knot (or one satellite built on a
certified pattern), the hypotheses of the splitting criterion and one
three-valued verdict per module summand:

* ``P1`` is the summand on which the meridian acts by multiplication by
  2, annihilated by t - 2;
* ``P2`` is the summand on which it acts by 1/2, annihilated by 2t - 1.

Verdict evaluation is staged.  Stage A consults closed-form rules: the
curated registry keyed by the canonical diagram hash, and transport
records for satellites of certified patterns.  Stage B is a bounded
general search: it pushes the presentation's free derivative matrix into
the integral group ring of the target metabelian group and hunts for an
explicit right inverse, on the meridian-deleted matrix and on the
relative matrix augmented by a relation-lifting column.  A found witness
is re-verified by plain multiplication before it is trusted.  Stage B
can answer ``holds`` or give up (``undetermined``); it never answers
``fails``.  Failure verdicts only enter through curated rules.

Commutative shadows give a cheap soundness gate for stage B: applying
the group homomorphism onto the infinite cyclic quotient turns any
right-inverse identity over the group ring into one over the Laurent
ring, so a candidate matrix whose shadow cannot be right-invertible is
skipped without search.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace

from .bs12 import BS12, BS12_A, BS12_C, Bs12Group, ring_mul
from .diagrams import Diagram, SurgeryPresentation, diagram_hash, zero_surgery
from .errors import BudgetExceeded, NoSplitting, RelatorViolation
from .groups import (
    metabelian_quotient_homs,
    push_fox,
    second_derived_certificate,
    summand_homs,
)
from .laurent import LaurentPoly, ONE, ZERO
from .modules import (
    TARGET_ORDER,
    alexander_module,
    detect_splitting,
    infinite_cyclic_weights,
)
from .twisted import (
    TransportRecord,
    crowell_check,
    summand_specialization_check,
    transport_record,
)
from .words import GroupPresentation, Word, fox_derivative

__all__ = [
    "HOLDS",
    "UNDETERMINED",
    "FAILS",
    "NOT_EVALUATED",
    "CERTIFIED",
    "INCONCLUSIVE",
    "UNDECIDED",
    "NOT_APPLICABLE",
    "CERT_VERSION",
    "relator_lift",
    "stage_b_certificate",
    "verify_stage_b",
    "ext_condition",
    "Certificate",
    "certify_doubly_slice",
    "certify_satellite",
    "certify_family",
    "family_946",
    "replay_certificate",
]

HOLDS = "holds"
UNDETERMINED = "undetermined"
FAILS = "fails"
NOT_EVALUATED = "not-evaluated"

CERTIFIED = "DoublySliceCertified"
INCONCLUSIVE = "CriterionFailsButInconclusive"
UNDECIDED = "Undetermined"
NOT_APPLICABLE = "NotApplicable"

CERT_VERSION = "dslice-certificate/1"

RULE_SPLIT = "splitting-witness-pair"
RULE_BASE_EXT = "closed-form/base-pattern-ext"
RULE_TRIVIAL = "transport/trivial-companion"
RULE_DERIVED = "transport/second-derived-curve"
RULE_FAMILY_HOLDS = "family/iterated-curves"
RULE_FAMILY_FAILS = "family/nontrivial-companions-fail"
RULE_ATTEMPT = "general-attempt/right-inverse"

# Generators of the target group's own presentation < a, c | a c a^-1 c^-2 >.
_GEN_A = 0
_GEN_C = 1
RHO = Word(((_GEN_A, 1), (_GEN_C, 1), (_GEN_A, -1), (_GEN_C, -1), (_GEN_C, -1)))

# Local rewrites pushing a-letters right and inverse a-letters left.  Each
# entry: pattern pair -> (replacement, exponent of the defining relator,
# letters appended to the scanned prefix to form the conjugator).  The
# invariant per step: old word = u * rho^eps * u^-1 * new word.
_REWRITES = {
    ((_GEN_A, 1), (_GEN_C, 1)): (
        ((_GEN_C, 1), (_GEN_C, 1), (_GEN_A, 1)), 1, ()),
    ((_GEN_A, 1), (_GEN_C, -1)): (
        ((_GEN_C, -1), (_GEN_C, -1), (_GEN_A, 1)), -1,
        ((_GEN_C, -1), (_GEN_C, -1))),
    ((_GEN_C, 1), (_GEN_A, -1)): (
        ((_GEN_A, -1), (_GEN_C, 1), (_GEN_C, 1)), 1, ((_GEN_A, -1),)),
    ((_GEN_C, -1), (_GEN_A, -1)): (
        ((_GEN_A, -1), (_GEN_C, -1), (_GEN_C, -1)), -1,
        ((_GEN_C, -1), (_GEN_A, -1))),
}


def _letter_elt(letter) -> BS12:
    g, e = letter
    base = BS12_A if g == _GEN_A else BS12_C
    return base if e == 1 else base.inverse()


def _target_word(g: BS12) -> Word:
    """A word in a, c evaluating to ``g``: a^-e c^num a^(e+k)."""
    e = g.q.exp
    num = g.q.num
    letters = [(_GEN_A, -1)] * e
    letters += [(_GEN_C, 1 if num > 0 else -1)] * abs(num)
    tail = e + g.k
    letters += [(_GEN_A, 1 if tail > 0 else -1)] * abs(tail)
    return Word(tuple(letters))


def relator_lift(word: Word, budget: int = 20000) -> dict:
    """Express a trivial word as a product of conjugates of ``RHO``.

    Returns the group-ring element summing the conjugators with signs,
    which is the image of the word in the target's relation module.
    Raises RelatorViolation if the word does not represent the identity.
    """
    letters = list(word.letters)
    delta: dict = {}
    steps = 0
    while letters:
        prefix = Bs12Group.identity()
        applied = False
        for p in range(len(letters) - 1):
            hit = _REWRITES.get((letters[p], letters[p + 1]))
            if hit is not None:
                repl, eps, extra = hit
                u = prefix
                for letter in extra:
                    u = u * _letter_elt(letter)
                v = delta.get(u, 0) + eps
                if v:
                    delta[u] = v
                else:
                    del delta[u]
                letters[p:p + 2] = list(repl)
                letters = list(Word(tuple(letters)).letters)
                applied = True
                break
            prefix = prefix * _letter_elt(letters[p])
        if not applied:
            # freely reduced, no pattern left: a^-i c^e a^j, nontrivial
            raise RelatorViolation("word does not map to the identity")
        steps += 1
        if steps > budget or len(letters) > budget:
            raise BudgetExceeded("relation lifting budget exhausted")
    return delta


_ID_IMAGES = (BS12_A, BS12_C)
_RHO_FOX = tuple(
    push_fox(fox_derivative(RHO, i), _ID_IMAGES, Bs12Group)
    for i in (_GEN_A, _GEN_C)
)


def _check_lift(word: Word, delta: dict) -> None:
    """The lift must reproduce the word's Fox vector: a chain-map identity."""
    for i in (_GEN_A, _GEN_C):
        lhs = push_fox(fox_derivative(word, i), _ID_IMAGES, Bs12Group)
        rhs = ring_mul(delta, _RHO_FOX[i], Bs12Group)
        if lhs != rhs:
            raise RelatorViolation("lift fails the Fox vector identity")


# ---------------------------------------------------------------------------
# right inverses over the target group ring


def _ring_add(x: dict, y: dict, sign: int = 1) -> dict:
    out = dict(x)
    for g, c in y.items():
        v = out.get(g, 0) + sign * c
        if v:
            out[g] = v
        else:
            out.pop(g, None)
    return out


def _ring_sub(x: dict, y: dict) -> dict:
    return _ring_add(x, y, -1)


def _is_unit(x: dict) -> bool:
    if len(x) != 1:
        return False
    return abs(next(iter(x.values()))) == 1


def _unit_inverse(x: dict) -> dict:
    ((g, c),) = x.items()
    return {g.inverse(): c}


def _ring_right_inverse(rows, ncols: int, budget: int = 300000):
    """Find Y with rows * Y = identity by unit-pivot column elimination.

    Column operations are right multiplications, so the accumulated
    transform composes to a genuine right inverse.  Pivots are picked
    Markowitz style (least fill first).  Returns None when some row
    cannot be given a unit pivot.
    """
    m = len(rows)
    if m == 0:
        return []
    M = [[dict(e) for e in row] for row in rows]
    T = [
        [({Bs12Group.identity(): 1} if i == j else {}) for j in range(ncols)]
        for i in range(ncols)
    ]
    ops = 0
    piv: dict = {}
    used = set()
    while len(piv) < m:
        found = None
        best = None
        for i in range(m):
            if i in piv:
                continue
            row_nnz = sum(1 for e in M[i] if e)
            for j in range(ncols):
                if j in used or not _is_unit(M[i][j]):
                    continue
                col_nnz = sum(1 for r in range(m) if r not in piv and M[r][j])
                col_terms = sum(len(M[r][j]) for r in range(m))
                cost = ((row_nnz - 1) * (col_nnz - 1), col_terms)
                if best is None or cost < best:
                    best = cost
                    found = (i, j)
        if found is None:
            return None
        i, j = found
        s = _unit_inverse(M[i][j])
        for r in range(m):
            if M[r][j]:
                ops += len(M[r][j])
                M[r][j] = ring_mul(M[r][j], s, Bs12Group)
        for r in range(ncols):
            if T[r][j]:
                ops += len(T[r][j])
                T[r][j] = ring_mul(T[r][j], s, Bs12Group)
        for j2 in range(ncols):
            if j2 == j:
                continue
            s2 = M[i][j2]
            if not s2:
                continue
            for r in range(m):
                if M[r][j]:
                    ops += len(M[r][j]) * len(s2)
                    M[r][j2] = _ring_sub(
                        M[r][j2], ring_mul(M[r][j], s2, Bs12Group)
                    )
            for r in range(ncols):
                if T[r][j]:
                    ops += len(T[r][j]) * len(s2)
                    T[r][j2] = _ring_sub(
                        T[r][j2], ring_mul(T[r][j], s2, Bs12Group)
                    )
        if ops > budget:
            raise BudgetExceeded("right inverse search budget exhausted")
        piv[i] = j
        used.add(j)
    return [[T[r][piv[i]] for i in range(m)] for r in range(ncols)]


def _verify_right_inverse(rows, y) -> bool:
    m = len(rows)
    identity = Bs12Group.identity()
    for i in range(m):
        for k in range(m):
            acc: dict = {}
            for j, entry in enumerate(rows[i]):
                if entry and y[j][k]:
                    acc = _ring_add(acc, ring_mul(entry, y[j][k], Bs12Group))
            want = {identity: 1} if i == k else {}
            if acc != want:
                return False
    return True


# ---------------------------------------------------------------------------
# commutative shadow gate

# The group homomorphism onto the infinite cyclic quotient (kill the
# dyadic part) linearizes any right-inverse identity, so a matrix whose
# shadow is not right-invertible over the Laurent ring never admits one
# over the group ring.  For a square shadow that means the determinant
# must be a unit; for a wide matrix the maximal minors must generate the
# unit ideal, which a nonunit common divisor already rules out.


def _shadow(entry: dict) -> LaurentPoly:
    out: dict = {}
    for g, c in entry.items():
        out[g.k] = out.get(g.k, 0) + c
    return LaurentPoly({k: v for k, v in out.items() if v})


def _shadow_det(mat) -> LaurentPoly:
    """Fraction-free determinant of a square Laurent matrix."""
    m = [row[:] for row in mat]
    k = len(m)
    if k == 0:
        return ONE
    prev = ONE
    sign = 1
    for p in range(k - 1):
        if m[p][p].is_zero():
            for r in range(p + 1, k):
                if not m[r][p].is_zero():
                    m[p], m[r] = m[r], m[p]
                    sign = -sign
                    break
            else:
                return ZERO
        for r in range(p + 1, k):
            for c in range(p + 1, k):
                num = m[r][c] * m[p][p] - m[r][p] * m[p][c]
                m[r][c] = num.exact_divide(prev)
            m[r][p] = ZERO
        prev = m[p][p]
    d = m[k - 1][k - 1]
    return d if sign == 1 else -d


def _shadow_obstructed(rows, ncols: int) -> bool:
    """True when the commutative shadow rules out any right inverse."""
    from .laurent import poly_gcd

    m = len(rows)
    if m > ncols:
        return True
    shadow = [[_shadow(e) for e in row] for row in rows]
    if m == ncols:
        return not _shadow_det(shadow).is_unit()
    choices = list(itertools.combinations(range(ncols), m))
    if len(choices) > 64:
        return False
    gcd = None
    for cols in choices:
        d = _shadow_det([[shadow[r][c] for c in cols] for r in range(m)])
        if d.is_zero():
            continue
        gcd = d if gcd is None else poly_gcd(gcd, d)
        if gcd.is_unit():
            return False
    return True


# ---------------------------------------------------------------------------
# stage B: bounded right-inverse search


def _ser_ring(x: dict):
    return sorted(
        (g.k, g.q.num, g.q.exp, c) for g, c in x.items()
    )


def _de_ring(data) -> dict:
    from .laurent import DyadicRational

    return {
        BS12(k, DyadicRational(num, exp)): c for k, num, exp, c in data
    }


def _ser_matrix(y):
    return [[_ser_ring(e) for e in row] for row in y]


def _jacobian_rows(pres: GroupPresentation, hom):
    n = pres.num_generators
    return [
        [push_fox(fox_derivative(r, i), hom.images, Bs12Group) for i in range(n)]
        for r in pres.relators
    ]


def _deleted_rows(full_rows, meridian: int):
    return [
        [e for i, e in enumerate(row) if i != meridian] for row in full_rows
    ]


def _relative_rows(pres: GroupPresentation, hom, full_rows, lift_budget: int):
    n = pres.num_generators
    image_words = {i: _target_word(hom.images[i]) for i in range(n)}
    rows = []
    for r, jac in zip(pres.relators, full_rows):
        w = r.substitute(image_words)
        delta = relator_lift(w, budget=lift_budget)
        _check_lift(w, delta)
        rows.append(list(jac) + [delta])
    return rows


def _stage_b_methods(pres, meridian, hom, lift_budget):
    """Candidate matrices for the right-inverse hunt, laziest first.

    ``deleted`` drops the meridian column of the free derivative matrix;
    ``relative`` keeps every column and appends the relation-lifting
    column, which presents the module relative to the basepoint fiber.
    """
    full = _jacobian_rows(pres, hom)
    n = pres.num_generators
    yield "deleted", _deleted_rows(full, meridian), n - 1
    yield "relative", _relative_rows(pres, hom, full, lift_budget), n + 1


def _verdict(status, evidence=None, reason=""):
    out = {"status": status, "evidence": evidence or {"kind": "None"}}
    if reason:
        out["reason"] = reason
    return out


def stage_b_certificate(
    pres: GroupPresentation,
    meridian: int,
    hom,
    lift_budget: int = 20000,
    solve_budget: int = 300000,
) -> dict:
    """Bounded general search for the per-summand lifting condition.

    Tries each candidate matrix with each single redundant-relator drop,
    skipping candidates whose commutative shadow already rules a right
    inverse out.  A found witness is re-verified by multiplication.  The
    search never reports failure, only ``holds`` or ``undetermined``.
    """
    m = len(pres.relators)
    if m == 0:
        return _verdict(HOLDS, {
            "kind": "GeneralAttempt",
            "log": {"method": "deleted", "dropped": None, "witness": []},
        })
    attempts = []
    budget_hit = False
    violation = ""
    methods = _stage_b_methods(pres, meridian, hom, lift_budget)
    while True:
        try:
            method, rows, ncols = next(methods)
        except StopIteration:
            break
        except BudgetExceeded:
            # methods are ordered cheapest first, so stop at the first blowup
            budget_hit = True
            break
        except RelatorViolation as exc:
            violation = str(exc)
            break
        drops = []
        if m <= ncols:
            drops.append(None)
        if m - 1 <= ncols:
            drops.extend(range(m))
        for j in drops:
            kept = rows if j is None else [rows[i] for i in range(m) if i != j]
            if _shadow_obstructed(kept, ncols):
                attempts.append((method, j, "shadow"))
                continue
            try:
                y = _ring_right_inverse(kept, ncols, budget=solve_budget)
            except BudgetExceeded:
                attempts.append((method, j, "budget"))
                budget_hit = True
                continue
            if y is None or not _verify_right_inverse(kept, y):
                attempts.append((method, j, "stuck"))
                continue
            return _verdict(HOLDS, {
                "kind": "GeneralAttempt",
                "log": {
                    "method": method,
                    "dropped": j,
                    "witness": _ser_matrix(y),
                },
            })
    if budget_hit:
        reason = "budget"
    elif violation:
        reason = violation
    elif attempts and all(a[2] == "shadow" for a in attempts):
        reason = "commutative shadow obstructs every candidate matrix"
    else:
        reason = "no unit-pivot witness found"
    return _verdict(UNDETERMINED, reason=reason)


def verify_stage_b(
    plain: SurgeryPresentation,
    which: str,
    verdict: dict,
    lift_budget: int = 20000,
) -> bool:
    """Replay a stored stage-B witness by plain multiplication."""
    evidence = verdict.get("evidence", {})
    if verdict.get("status") != HOLDS or evidence.get("kind") != "GeneralAttempt":
        return False
    log = evidence.get("log", {})
    pres, meridian = _stage_b_presentation(plain)
    report = detect_splitting(alexander_module(plain.group, plain.meridian))
    if not report.certified:
        return False
    plus, minus = summand_homs(plain.group, plain.meridian, report)
    hom = plus if which == "P1" else minus
    full = _jacobian_rows(pres, hom)
    method = log.get("method")
    if method == "deleted":
        rows = _deleted_rows(full, meridian)
        ncols = pres.num_generators - 1
    elif method == "relative":
        try:
            rows = _relative_rows(pres, hom, full, lift_budget)
        except (BudgetExceeded, RelatorViolation):
            return False
        ncols = pres.num_generators + 1
    else:
        return False
    j = log.get("dropped")
    kept = rows if j is None else [r for i, r in enumerate(rows) if i != j]
    y = [[_de_ring(e) for e in row] for row in log.get("witness", [])]
    if len(y) != ncols or any(len(r) != len(kept) for r in y):
        return False
    return _verify_right_inverse(kept, y)


# ---------------------------------------------------------------------------
# staged verdicts


def _stage_b_presentation(plain: SurgeryPresentation):
    """The presentation stage B analyzes: surgery relators minus the framing.

    The framing relator's row is redundant for the module (the framing
    curve is trivial in the module because multiplication by t fixes it
    and the module has no (t-1)-torsion), and keeping it would make the
    matrix too tall for any right inverse.
    """
    pres = plain.group
    relators = tuple(r for r in pres.relators if r != plain.longitude)
    return GroupPresentation(pres.names, relators), plain.meridian


def ext_condition(
    plain: SurgeryPresentation,
    which: str,
    report=None,
    hom=None,
    subject_hash: str | None = None,
    registry: dict | None = None,
    satellite: dict | None = None,
    lift_budget: int = 20000,
    solve_budget: int = 300000,
) -> dict:
    """Three-valued per-summand verdict, staged closed forms first.

    Stage A sources: the curated registry row for the subject's canonical
    hash; a satellite context carrying the base verdict and a valid
    transport record; a satellite context carrying a curated failure
    rule.  Stage B is the bounded right-inverse search.  Raises
    NoSplitting when the module hypothesis has not been certified.
    """
    if which not in ("P1", "P2"):
        raise ValueError("summand tag must be P1 or P2")
    if report is None:
        report = detect_splitting(alexander_module(plain.group, plain.meridian))
    if not report.certified:
        raise NoSplitting("module splitting has not been certified")
    registry = registry or {}
    curated = registry.get("ext", {}).get(subject_hash or "", {}).get(which)
    if curated is not None:
        return _verdict(curated.get("status", HOLDS), {
            "kind": "ClosedFormFamily",
            "rule": curated["rule"],
            "citations": [curated["rule"]],
        })
    if satellite is not None:
        records = satellite.get("records", ())
        rule = satellite.get("fails_rule")
        if rule is not None:
            return _verdict(FAILS, {
                "kind": "ClosedFormFamily",
                "rule": rule,
                "citations": [rule],
            })
        if (
            satellite.get("base_status") == HOLDS
            and records
            and all(rec.valid for rec in records)
        ):
            return _verdict(HOLDS, {
                "kind": "TransportChain",
                "records": [rec.as_dict() for rec in records],
            })
    if hom is None:
        plus, minus = summand_homs(plain.group, plain.meridian, report)
        hom = plus if which == "P1" else minus
    pres, meridian = _stage_b_presentation(plain)
    return stage_b_certificate(
        pres, meridian, hom,
        lift_budget=lift_budget, solve_budget=solve_budget,
    )


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    subject: dict
    hypotheses: list
    verdicts: dict
    conclusion: str
    citations: list
    inputs: dict
    version: str = CERT_VERSION

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "hypotheses": list(self.hypotheses),
            "verdicts": self.verdicts,
            "conclusion": self.conclusion,
            "citations": list(self.citations),
            "inputs": self.inputs,
            "version": self.version,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _conclusion_from(verdicts: dict) -> str:
    statuses = [v["status"] for v in verdicts.values()]
    if all(s == HOLDS for s in statuses):
        return CERTIFIED
    if any(s == FAILS for s in statuses):
        return INCONCLUSIVE
    return UNDECIDED


def _not_evaluated() -> dict:
    return {
        "P1": _verdict(NOT_EVALUATED),
        "P2": _verdict(NOT_EVALUATED),
    }


def _cite_from_verdicts(verdicts: dict, citations: list) -> list:
    out = list(citations)
    for v in verdicts.values():
        ev = v.get("evidence", {})
        kind = ev.get("kind")
        rule = None
        if kind == "ClosedFormFamily":
            rule = ev.get("rule")
        elif kind == "TransportChain":
            rule = RULE_DERIVED
        elif kind == "GeneralAttempt" and v["status"] == HOLDS:
            rule = RULE_ATTEMPT
        if rule and rule not in out:
            out.append(rule)
    return out


def certify_doubly_slice(
    diagram: Diagram,
    name: str = "",
    registry: dict | None = None,
    stageb_budget: int = 300000,
    quotient=(2, 3),
) -> Certificate:
    """Run the full pipeline on a knot diagram and assemble a certificate."""
    registry = registry or {}
    h = diagram_hash(diagram)
    subject = {"kind": "knot", "name": name or None, "hash": h}
    inputs = {"diagram": h}
    plain = zero_surgery(diagram, 0)
    pres = plain.group
    hyps = []
    module = alexander_module(pres, plain.meridian)
    report = detect_splitting(module)
    hyps.append(f"module order: {report.order}")
    hyps.append(
        "order matches (t-2)(2t-1) up to units: "
        f"{report.order.is_associate(TARGET_ORDER)}"
    )
    hyps.append(f"splitting verdict: {report.verdict}")
    if report.note:
        hyps.append(f"splitting note: {report.note}")
    if not report.certified:
        hyps.append("module hypothesis not met; the criterion does not apply")
        return Certificate(
            subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
        )
    citations = [RULE_SPLIT]
    plus, minus = summand_homs(pres, plain.meridian, report)
    hyps.append(
        f"summand maps surjective: P1 {plus.surjective}, P2 {minus.surjective}"
    )
    spec1 = summand_specialization_check(pres, plain.meridian, plus)
    spec2 = summand_specialization_check(pres, plain.meridian, minus)
    hyps.append(
        f"summand maps specialize the plain Jacobian: P1 {spec1}, P2 {spec2}"
    )
    qn, qm = quotient
    try:
        target, homs = metabelian_quotient_homs(pres, plain.meridian, qn, qm)
        hyps.append(f"metabelian quotient maps at ({qn},{qm}): {len(homs)}")
        if homs:
            ok = crowell_check(pres, homs[0], target)
            hyps.append(f"cover homology cross-check at ({qn},{qm}): {ok}")
    except BudgetExceeded:
        hyps.append(f"metabelian quotient maps at ({qn},{qm}): skipped")
    verdicts = {}
    for tag, hom in (("P1", plus), ("P2", minus)):
        verdicts[tag] = ext_condition(
            plain, tag, report=report, hom=hom,
            subject_hash=h, registry=registry,
            solve_budget=stageb_budget,
        )
    conclusion = _conclusion_from(verdicts)
    if conclusion == INCONCLUSIVE:
        hyps.append(
            "a failed lifting condition does not refute double sliceness;"
            " the criterion is sufficient, not necessary"
        )
    return Certificate(
        subject, hyps, verdicts, conclusion,
        _cite_from_verdicts(verdicts, citations), inputs,
    )


def _ser_word(word: Word):
    return [list(letter) for letter in word.letters]


def _base_both_hold(base: Certificate) -> bool:
    return all(
        v.get("status") == HOLDS for v in base.verdicts.values()
    )


def certify_satellite(
    base: Certificate,
    plain: SurgeryPresentation,
    curve: str,
    companion: Diagram | None = None,
    companion_name: str = "",
    companion_kind: str | None = None,
) -> Certificate:
    """Transport a certified pattern through one infection.

    ``companion=None`` with kind ``any`` quantifies over all companions:
    the certificate is then valid for every knot tied into the curve,
    which requires the curve to die in the second derived subgroup.
    Kind ``doubled`` marks a symbolic doubled companion, whose module
    order is trivial by construction.  A concrete companion may ride on
    either route.
    """
    if companion_kind is None:
        companion_kind = "concrete" if companion is not None else "any"
    rec = _family_record(plain, {
        "curve": curve, "companion": companion, "kind": companion_kind,
    }, 300000)
    if companion is not None:
        label = {"name": companion_name or None, "hash": diagram_hash(companion)}
    elif companion_kind == "doubled":
        label = "DoubledAnyKnot"
    else:
        label = "AnyKnot"
    subject = {
        "kind": "satellite",
        "pattern": base.subject.get("hash"),
        "curve": curve,
        "companion": label,
    }
    inputs = {
        "pattern": base.subject.get("hash"),
        "companion": diagram_hash(companion) if companion is not None else None,
        "companion_kind": companion_kind,
        "curve_word": _ser_word(plain.curve_words[curve]),
        "curve_linking": plain.curve_linking[curve],
    }
    hyps = [
        f"base pattern verdicts both hold: {_base_both_hold(base)}",
        f"infection curve winding number: {rec.winding}",
        f"curve dies in the second derived subgroup: {rec.second_derived}",
        "companion has trivial module order: "
        f"{bool(rec.companion_alexander_trivial)}",
    ]
    if not _base_both_hold(base):
        hyps.append("failed check: base pattern lifting verdicts")
        return Certificate(
            subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
        )
    if not rec.valid:
        which = "winding" if rec.winding != 0 else "membership/order"
        hyps.append(f"failed check: transport record ({which})")
        return Certificate(
            subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
        )
    if companion_kind == "any" and not rec.second_derived:
        hyps.append("failed check: universal transport needs the curve in"
                    " the second derived subgroup")
        return Certificate(
            subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
        )
    hyps.append(
        "module splitting carried across the infection by the collapse map"
    )
    evidence = {"kind": "TransportChain", "records": [rec.as_dict()]}
    verdicts = {
        "P1": _verdict(HOLDS, evidence),
        "P2": _verdict(HOLDS, evidence),
    }
    rule = RULE_DERIVED if rec.second_derived else RULE_TRIVIAL
    citations = [rule]
    for c in base.citations:
        if c not in citations:
            citations.append(c)
    return Certificate(
        subject, hyps, verdicts, CERTIFIED, citations, inputs
    )


def _commutator_of_nullhomologous(word: Word, weights) -> bool:
    """Whether the word literally reads u v u^-1 v^-1 with u, v of weight 0."""
    letters = word.letters
    ln = len(letters)
    for i in range(1, ln):
        for j in range(i + 1, ln):
            u = Word(letters[:i])
            v = Word(letters[i:j])
            if u * v * u.inverse() * v.inverse() != word:
                continue
            wu = sum(e * weights[g] for g, e in u.letters)
            wv = sum(e * weights[g] for g, e in v.letters)
            if wu == 0 and wv == 0:
                return True
    return False


def _family_record(plain, item, budget):
    """Transport record for one family infection slot.

    Concrete companions are measured; symbolic slots carry the closed
    form for their kind: a doubled companion always has trivial module
    order, an arbitrary companion guarantees nothing.
    """
    curve = item["curve"]
    kind = item.get("kind", "concrete")
    companion = item.get("companion")
    if kind == "concrete" and companion is not None:
        return transport_record(plain, curve, companion=companion, budget=budget)
    rec = transport_record(plain, curve, companion=None, budget=budget)
    if kind == "doubled":
        rec = replace(rec, companion_alexander_trivial=True)
    return rec


def certify_family(
    plain: SurgeryPresentation,
    pattern_hash: str,
    base: Certificate,
    infections,
    registry: dict | None = None,
    pattern_name: str = "",
    budget: int = 300000,
) -> Certificate:
    """Certificate for several infections of one certified pattern.

    ``infections`` is a list of dicts with keys ``curve``, ``companion``
    (a Diagram or None), ``name``, and ``kind`` in {"concrete",
    "doubled", "any"}.  Each slot must transport: either the companion
    has trivial module order, or the curve dies in the second derived
    subgroup.  With several second-derived curves, every such curve must
    literally be a commutator of weight-zero words, which keeps its
    membership valid on the presentations produced by the infections
    before it.
    """
    registry = registry or {}
    frule = registry.get("family", {}).get(pattern_hash, {})
    subject_inf = []
    inputs_curves = {}
    hyps = [f"base pattern verdicts both hold: {_base_both_hold(base)}"]
    recs = []
    weights = infinite_cyclic_weights(plain.group, plain.meridian)
    derived_curves = []
    for item in infections:
        curve = item["curve"]
        rec = _family_record(plain, item, budget)
        recs.append(rec)
        companion = item.get("companion")
        subject_inf.append({
            "curve": curve,
            "name": item.get("name") or None,
            "kind": item.get("kind", "concrete"),
            "hash": diagram_hash(companion) if companion is not None else None,
        })
        inputs_curves[curve] = {
            "word": _ser_word(plain.curve_words[curve]),
            "linking": plain.curve_linking[curve],
        }
        hyps.append(
            f"curve {curve}: winding {rec.winding},"
            f" second derived {rec.second_derived},"
            f" companion trivial order {bool(rec.companion_alexander_trivial)}"
        )
        if not rec.companion_alexander_trivial:
            derived_curves.append(curve)
    subject = {
        "kind": "family",
        "pattern": {"name": pattern_name or None, "hash": pattern_hash},
        "infections": subject_inf,
    }
    inputs = {
        "pattern": pattern_hash,
        "companions": [i["hash"] for i in subject_inf],
        "curves": inputs_curves,
    }
    if not _base_both_hold(base):
        hyps.append("failed check: base pattern lifting verdicts")
        return Certificate(
            subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
        )
    # Curated failure rule: every infection sits on the obstructing curve
    # set and brings a companion with nontrivial module order.
    fails_on = set(frule.get("fails_on", ()))
    if (
        fails_on
        and {i["curve"] for i in subject_inf} == fails_on
        and all(
            i["kind"] == "concrete" and not r.companion_alexander_trivial
            for i, r in zip(subject_inf, recs)
        )
        and all(r.winding == 0 for r in recs)
    ):
        rule = frule["fails_rule"]
        verdicts = {
            "P1": _verdict(FAILS, {
                "kind": "ClosedFormFamily", "rule": rule, "citations": [rule],
            }),
            "P2": _verdict(FAILS, {
                "kind": "ClosedFormFamily", "rule": rule, "citations": [rule],
            }),
        }
        hyps.append(
            "curated obstruction: along these curves, companions of"
            " nontrivial module order break the lifting condition on both"
            " summands"
        )
        hyps.append(
            "a failed lifting condition does not refute double sliceness;"
            " the criterion is sufficient, not necessary"
        )
        return Certificate(
            subject, hyps, verdicts, INCONCLUSIVE, [rule], inputs
        )
    if not all(rec.valid for rec in recs):
        bad = [i["curve"] for i, r in zip(subject_inf, recs) if not r.valid]
        hyps.append(f"failed check: transport record for {', '.join(bad)}")
        return Certificate(
            subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
        )
    if len(derived_curves) > 1:
        stable = all(
            _commutator_of_nullhomologous(plain.curve_words[c], weights)
            for c in derived_curves
        )
        hyps.append(
            "second-derived curves are commutators of weight-zero words,"
            f" so membership persists through earlier infections: {stable}"
        )
        if not stable:
            return Certificate(
                subject, hyps, _not_evaluated(), NOT_APPLICABLE, [], inputs
            )
    hyps.append(
        "module splitting carried across each infection by the collapse map"
    )
    evidence = {
        "kind": "TransportChain",
        "records": [rec.as_dict() for rec in recs],
    }
    verdicts = {
        "P1": _verdict(HOLDS, evidence),
        "P2": _verdict(HOLDS, evidence),
    }
    citations = [frule.get("holds_rule", RULE_FAMILY_HOLDS)]
    if any(not r.companion_alexander_trivial for r in recs):
        citations.append(RULE_DERIVED)
    if any(r.companion_alexander_trivial for r in recs):
        citations.append(RULE_TRIVIAL)
    return Certificate(subject, hyps, verdicts, CERTIFIED, citations, inputs)


def family_946(
    t1=None,
    t2=None,
    k1=None,
    k2=None,
    registry: dict | None = None,
    names=("", "", "", ""),
    budget: int = 300000,
) -> Certificate:
    """Two-layer family certificate on the bundled doubly slice pattern.

    The first layer ties doubled companions built on ``t1`` and ``t2``
    into the two winding-zero curves with nontrivial module class; the
    second ties ``k1`` and ``k2`` into the two curves dying in the
    second derived subgroup.  ``None`` slots stay symbolic and the
    certificate quantifies over every knot in that slot.
    """
    from .corpus import bundled_pattern, default_registry

    registry = registry if registry is not None else default_registry()
    diagram, plain, pattern_name = bundled_pattern("946")
    base = certify_doubly_slice(diagram, name=pattern_name, registry=registry)
    frule = registry.get("family", {}).get(
        base.subject["hash"], {"gamma": ("gamma1", "gamma2"),
                               "eta": ("eta1", "eta2")},
    )
    gamma = list(frule["gamma"])
    eta = list(frule["eta"])
    slots = [
        {"curve": gamma[0], "companion": None, "name": names[0] or None,
         "kind": "doubled", "base": t1},
        {"curve": gamma[1], "companion": None, "name": names[1] or None,
         "kind": "doubled", "base": t2},
        {"curve": eta[0], "companion": k1, "name": names[2] or None,
         "kind": "concrete" if k1 is not None else "any"},
        {"curve": eta[1], "companion": k2, "name": names[3] or None,
         "kind": "concrete" if k2 is not None else "any"},
    ]
    return certify_family(
        plain, base.subject["hash"], base, slots,
        registry=registry, pattern_name=pattern_name, budget=budget,
    )


# ---------------------------------------------------------------------------
# replay


def _statuses(cert: dict) -> dict:
    return {k: v["status"] for k, v in cert["verdicts"].items()}


def _restore_curves(plain: SurgeryPresentation, curves: dict):
    words = dict(plain.curve_words)
    linking = dict(plain.curve_linking)
    for name, data in curves.items():
        words[name] = Word(tuple((g, s) for g, s in data["word"]))
        linking[name] = data["linking"]
    return replace(plain, curve_words=words, curve_linking=linking)


def replay_certificate(cert: dict, resolve, registry: dict | None = None) -> bool:
    """Independently rebuild a certificate and compare the verdicts.

    ``resolve`` maps a diagram hash to a Diagram.  Stored right-inverse
    witnesses are re-verified by multiplication rather than re-searched.
    """
    kind = cert.get("subject", {}).get("kind", "knot")
    if cert.get("version") != CERT_VERSION:
        return False
    if kind == "knot":
        d = resolve(cert["inputs"]["diagram"])
        if d is None or diagram_hash(d) != cert["inputs"]["diagram"]:
            return False
        fresh = certify_doubly_slice(
            d, name=cert["subject"].get("name") or "", registry=registry
        ).as_dict()
        if fresh["conclusion"] != cert["conclusion"]:
            return False
        if _statuses(fresh) != _statuses(cert):
            return False
        plain = zero_surgery(d, 0)
        for tag in ("P1", "P2"):
            v = cert["verdicts"][tag]
            ev = v.get("evidence", {})
            if v["status"] == HOLDS and ev.get("kind") == "GeneralAttempt":
                if not verify_stage_b(plain, tag, v):
                    return False
        return True
    if kind == "satellite":
        d = resolve(cert["inputs"]["pattern"])
        if d is None:
            return False
        ch = cert["inputs"].get("companion")
        companion = resolve(ch) if ch else None
        if ch and companion is None:
            return False
        base = certify_doubly_slice(d, registry=registry)
        plain = _restore_curves(
            zero_surgery(d, 0),
            {cert["subject"]["curve"]: {
                "word": cert["inputs"]["curve_word"],
                "linking": cert["inputs"]["curve_linking"],
            }},
        )
        fresh = certify_satellite(
            base, plain, cert["subject"]["curve"], companion,
            companion_kind=cert["inputs"].get("companion_kind"),
        ).as_dict()
        return (
            fresh["conclusion"] == cert["conclusion"]
            and _statuses(fresh) == _statuses(cert)
        )
    if kind == "family":
        d = resolve(cert["inputs"]["pattern"])
        if d is None:
            return False
        base = certify_doubly_slice(d, registry=registry)
        plain = _restore_curves(zero_surgery(d, 0), cert["inputs"]["curves"])
        infections = []
        for item in cert["subject"]["infections"]:
            companion = resolve(item["hash"]) if item.get("hash") else None
            if item.get("hash") and companion is None:
                return False
            infections.append({
                "curve": item["curve"],
                "companion": companion,
                "name": item.get("name") or "",
                "kind": item.get("kind", "concrete"),
            })
        fresh = certify_family(
            plain, cert["inputs"]["pattern"], base, infections,
            registry=registry,
            pattern_name=cert["subject"]["pattern"].get("name") or "",
        ).as_dict()
        return (
            fresh["conclusion"] == cert["conclusion"]
            and _statuses(fresh) == _statuses(cert)
        )
    return False
