"""Certificate-producing decision procedure for tame rational descriptors.

Two existence questions are decided.  Without filtration data the input
is a list of elementary components and the question is whether a
polarizable tame Galois pair over the prime field realizes them; with a
filtration (plus the rational action matrices) the question is whether
the full filtered module arises from an abelian variety with good
reduction.  The checks are the Weil bound with the real-factor parity,
the Tate-type divisibility, self-duality / existence of a compatible
alternating pairing, and filtration dimension and stability.  Every
verdict is wrapped in a Certificate carrying the intermediate
invariants and, on acceptance, the witnessing isogeny class over the
prime field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidInputError
from .exactalg import Poly, is_probable_prime, multiplicative_order
from .filtered import (
    FiltrationInput,
    SkewFormReport,
    WAScreenReport,
    galois_stable_check,
    hodge_tate_check,
    skew_form_filtered,
    wa_screen,
)
from .hondatate import embedding_test, ht_invariants, synthesize_isogeny_class
from .tamerep import (
    QElementaryDescriptor,
    condition1,
    condition3_unfiltered,
    decompose_matrices,
    frobenius_charpoly,
    merge_components,
    product_charpoly,
    tate_type,
    validate,
)
from .weilpoly import is_p_weil_poly, is_weil_poly, weil_split

SCHEMA_VERSION = 1

MODE_GALOIS_PAIR = "galois-pair-existence"
MODE_FILTERED = "abelian-variety-existence"

_CITATIONS_PAIR = (
    "Waterhouse order realization",
    "polarisability of tame Galois pairs",
    "descent",
)
_CITATIONS_FILTERED = _CITATIONS_PAIR + ("Breuil lifting for p != 2",)


@dataclass(frozen=True)
class ComponentReport:
    """Invariants of one validated component, as shown in certificates."""

    r: int
    pi_minpoly: Poly
    dim: int
    s: int
    cyclotomic_degree: int
    delta: int
    n_r: int
    embedding_ok: bool
    frobenius_charpoly: Poly


@dataclass(frozen=True)
class ConditionReport:
    """The four decision clauses; None means not evaluated in this mode."""

    weil_charpoly: Optional[bool]
    tate_type: Optional[bool]
    duality_pairing: Optional[bool]
    filtration_compatible: Optional[bool]


@dataclass(frozen=True)
class WitnessEntry:
    """One simple isogeny class in the witness product."""

    minpoly: Poly
    delta: int
    dimension: int
    endo_summary: str
    frobenius_charpoly: Poly
    multiplicity: int


@dataclass(frozen=True)
class FiltrationReport:
    """Filtration-level findings; the admissibility part is a screen.

    ``screen_status`` is fixed: the Newton/Hodge inequalities are only
    checked over the rational isotypic lattice, never over all
    subobjects, so no certificate claims full weak admissibility.
    """

    hodge_tate_ok: bool
    galois_stable_ok: bool
    skew: SkewFormReport
    wa: WAScreenReport
    screen_status: str = "screened, not certified"


@dataclass(frozen=True)
class Certificate:
    """Re-checkable outcome of the decision procedure.

    ``mode`` records which existence statement was decided:
    galois-pair-existence for descriptor-only inputs,
    abelian-variety-existence when filtration data was supplied.  On
    acceptance ``witness`` lists the simple classes over the prime field
    whose product realizes the global Frobenius characteristic
    polynomial, and ``citations`` names the non-computational existence
    steps the verdict relies on.  On rejection ``clause`` is the
    machine-readable name of the first failed check.
    """

    verdict: str
    p: int
    mode: str
    clause: Optional[str]
    reason: Optional[str]
    components: Tuple[ComponentReport, ...]
    pchar: Optional[Poly]
    weil_split: Tuple[Tuple[Poly, int], ...]
    witness: Tuple[WitnessEntry, ...]
    conditions: ConditionReport
    tags: Tuple[str, ...]
    filtration: Optional[FiltrationReport]
    citations: Tuple[str, ...]
    schema_version: int
    seed: int


def _no_conditions() -> ConditionReport:
    return ConditionReport(None, None, None, None)


def _rejected(p: int, mode: str, clause: str, reason: str, seed: int,
              components: Tuple[ComponentReport, ...] = (),
              pchar: Optional[Poly] = None,
              split: Tuple[Tuple[Poly, int], ...] = (),
              conditions: Optional[ConditionReport] = None,
              tags: Tuple[str, ...] = (),
              filtration: Optional[FiltrationReport] = None) -> Certificate:
    return Certificate(
        verdict="rejected", p=p, mode=mode, clause=clause, reason=reason,
        components=components, pchar=pchar, weil_split=split, witness=(),
        conditions=conditions if conditions is not None else _no_conditions(),
        tags=tags, filtration=filtration, citations=(),
        schema_version=SCHEMA_VERSION, seed=seed)


def _slope_tag(pchar: Poly, p: int) -> Optional[str]:
    """Tag by the x-valuation of the mod-p reduction: half the degree is
    ordinary, the full degree is supersingular, anything else untagged."""
    v = 0
    while v < pchar.degree and int(pchar.coeffs[v]) % p == 0:
        v += 1
    if v == pchar.degree:
        return "supersingular"
    if 2 * v == pchar.degree:
        return "ordinary"
    return None


def _component_table(merged: Sequence[QElementaryDescriptor], p: int
                     ) -> Tuple[ComponentReport, ...]:
    rows = []
    for c in merged:
        s = multiplicative_order(p, c.r) if c.r > 1 else 1
        g = c.pi_minpoly
        ht = ht_invariants(g, s, p)
        emb = embedding_test(c.r, g, s, p, c.dim // g.degree)
        rows.append(ComponentReport(
            r=c.r, pi_minpoly=g, dim=c.dim, s=s,
            cyclotomic_degree=emb.cyclotomic_degree, delta=ht.delta,
            n_r=emb.n_r, embedding_ok=emb.ok,
            frobenius_charpoly=frobenius_charpoly(c, p)))
    return tuple(rows)


def _witness_entries(pchar: Poly, p: int) -> Tuple[WitnessEntry, ...]:
    entries = []
    for desc, mult in synthesize_isogeny_class(pchar, p):
        entries.append(WitnessEntry(
            minpoly=desc.minpoly, delta=desc.delta,
            dimension=desc.dimension, endo_summary=desc.endo_summary,
            frobenius_charpoly=desc.frobenius_charpoly, multiplicity=mult))
    entries.sort(key=lambda w: (w.minpoly.degree, w.minpoly.coeffs))
    return tuple(entries)


def _weil_reason(pchar: Poly, p: int) -> str:
    if is_weil_poly(pchar, p) and not is_p_weil_poly(pchar, p):
        return ("the factor X^2 - p occurs with odd multiplicity in the "
                "Frobenius characteristic polynomial")
    return ("the Frobenius characteristic polynomial has a root off the "
            "p^(1/2)-circle")


def _rat_matrix(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    try:
        out = [[Fraction(x) for x in row] for row in rows]
    except (TypeError, ValueError) as ex:
        raise InvalidInputError(f"matrix entries must be rational: {ex}")
    if any(len(row) != len(out) for row in out):
        raise InvalidInputError("action matrices must be square")
    return out


def _resolve_components(components, p, frobenius_matrix, inertia_matrix):
    """Merge descriptor input with the optional matrix model."""
    derived = None
    if frobenius_matrix is not None:
        derived = merge_components(
            decompose_matrices(frobenius_matrix, inertia_matrix, p))
    if components is None:
        if derived is None:
            raise InvalidInputError(
                "supply components or a matrix model")
        return derived
    merged = merge_components(components)
    if not merged:
        raise InvalidInputError("at least one component is required")
    if derived is not None and derived != merged:
        raise InvalidInputError(
            "matrix model decomposes to a different component list")
    return merged


def _mat_mul(a: List[List[Fraction]], b: List[List[Fraction]]
             ) -> List[List[Fraction]]:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _descent_matrix_for(filtration: FiltrationInput,
                        frobenius_matrix: List[List[Fraction]],
                        supplied: Optional[Sequence[Sequence]]
                        ) -> List[List[Fraction]]:
    """The matrix acting for the residue-field generator of the group.

    The group action must commute with the crystalline Frobenius, so
    the generator matrix is a separate finite-order descent datum.  On
    a totally ramified model (s = 1) the group has no Frobenius part
    and the identity is the only choice; for s > 1 the datum is extra
    structure the caller has to provide.
    """
    n = filtration.nrows
    if supplied is None:
        if filtration.model.s == 1:
            return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        raise InvalidInputError(
            "residue degree s > 1: supply the descent matrix of the "
            "Frobenius-lift generator")
    mat = _rat_matrix(supplied)
    if len(mat) != n:
        raise InvalidInputError(
            "descent matrix size disagrees with the ambient dimension")
    if _mat_mul(mat, frobenius_matrix) != _mat_mul(frobenius_matrix, mat):
        raise InvalidInputError(
            "descent matrix does not commute with the Frobenius matrix")
    return mat


def classify(components: Optional[Sequence[QElementaryDescriptor]], p: int,
             frobenius_matrix: Optional[Sequence[Sequence]] = None,
             inertia_matrix: Optional[Sequence[Sequence]] = None,
             filtration: Optional[FiltrationInput] = None,
             descent_matrix: Optional[Sequence[Sequence]] = None,
             seed: int = 0, sample_cap: int = 32) -> Certificate:
    """Decide whether the input is realized by an abelian variety datum.

    Descriptor-only inputs are tested against the Galois-pair existence
    conditions; when a filtration is supplied (requiring the matrix
    model) the pairing condition is upgraded to the filtered search and
    the filtration checks and admissibility screen are added, deciding
    existence of an abelian variety over the p-adic field.  For models
    with residue degree s > 1 the Galois action on the filtration needs
    the finite-order descent matrix of the Frobenius-lift generator,
    passed separately from the crystalline Frobenius matrix.  Validation
    failures of individual components produce rejected certificates
    naming the failed clause; only malformed requests raise.

    ``sample_cap`` bounds the randomized stage of the pairing search;
    raising it trades time for fewer retriable failures and never
    changes an emitted verdict.
    """
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    mode = MODE_GALOIS_PAIR if filtration is None else MODE_FILTERED
    if (frobenius_matrix is None) != (inertia_matrix is None):
        raise InvalidInputError(
            "matrix model needs both the Frobenius and the inertia matrix")
    if frobenius_matrix is not None:
        frobenius_matrix = _rat_matrix(frobenius_matrix)
        inertia_matrix = _rat_matrix(inertia_matrix)

    if descent_matrix is not None and filtration is None:
        raise InvalidInputError(
            "the descent matrix is only meaningful in filtered mode")
    if filtration is not None and p == 2:
        return _rejected(
            p, mode, clause="p-2-filtered",
            reason="the filtered existence statement is not decided for "
                   "p = 2; omit the filtration for the pair-level verdict",
            seed=seed)
    if filtration is not None and frobenius_matrix is None:
        raise InvalidInputError("filtered mode needs the matrix model")

    merged = _resolve_components(components, p, frobenius_matrix,
                                 inertia_matrix)

    for c in merged:
        report = validate(c, p)
        if not report.ok:
            return _rejected(
                p, mode, clause=report.failures[0],
                reason=f"component (r={c.r}, dim={c.dim}) failed "
                       f"validation: {', '.join(report.failures)}",
                seed=seed)

    table = _component_table(merged, p)
    pchar = product_charpoly(merged, p)
    c1 = condition1(merged, p)
    split = tuple(weil_split(pchar, p)) if c1 else ()
    tate = tate_type(merged, p)
    c2 = tate.ok

    tags: List[str] = []
    slope = _slope_tag(pchar, p)
    if slope is not None:
        tags.append(slope)
    if p == 2 and filtration is None:
        tags.append("p-2-unfiltered-only")

    fil_report: Optional[FiltrationReport] = None
    if filtration is None:
        c3: Optional[bool] = condition3_unfiltered(merged, p)
        c4: Optional[bool] = None
    else:
        filtration.require()
        total = sum(c.dim for c in merged)
        if filtration.nrows != total:
            raise InvalidInputError(
                "filtration ambient dimension disagrees with the components")
        descent = _descent_matrix_for(filtration, frobenius_matrix,
                                      descent_matrix)
        ht_ok = total % 2 == 0 and hodge_tate_check(filtration, total // 2)
        gs_ok = galois_stable_check(filtration, descent, inertia_matrix)
        skew = skew_form_filtered(frobenius_matrix, inertia_matrix,
                                  filtration, seed=seed,
                                  sample_cap=sample_cap)
        wa = wa_screen(frobenius_matrix, inertia_matrix, filtration)
        fil_report = FiltrationReport(hodge_tate_ok=ht_ok,
                                      galois_stable_ok=gs_ok,
                                      skew=skew, wa=wa)
        c3 = skew.ok
        c4 = ht_ok and gs_ok

    conditions = ConditionReport(weil_charpoly=c1, tate_type=c2,
                                 duality_pairing=c3,
                                 filtration_compatible=c4)
    checked = [f for f in (c1, c2, c3, c4) if f is not None]
    screen_ok = fil_report is None or fil_report.wa.ok

    if all(checked) and screen_ok:
        witness = _witness_entries(pchar, p)
        total = sum(c.dim for c in merged)
        if pchar.degree != total:
            raise AssertionError("characteristic polynomial degree drifted")
        if 2 * sum(w.dimension * w.multiplicity for w in witness) != total:
            raise AssertionError("witness dimension does not match")
        if pchar.constant() != Fraction(p) ** (total // 2):
            raise AssertionError("constant term is not p^(dim/2)")
        citations = _CITATIONS_PAIR if filtration is None else _CITATIONS_FILTERED
        return Certificate(
            verdict="accepted", p=p, mode=mode, clause=None, reason=None,
            components=table, pchar=pchar, weil_split=split, witness=witness,
            conditions=conditions, tags=tuple(tags), filtration=fil_report,
            citations=citations, schema_version=SCHEMA_VERSION, seed=seed)

    if not c1:
        clause, reason = "weil-charpoly", _weil_reason(pchar, p)
    elif not c2:
        bad = [f"(r={c.r}, degree {c.pi_minpoly.degree})"
               for c, _, _, ok in tate.entries if not ok]
        clause = "tate-type"
        reason = "cyclotomic-degree times norm-order divisibility fails " \
                 "for " + ", ".join(bad)
    elif not c3:
        clause = "duality-pairing"
        if filtration is None:
            reason = ("the component multiset is not self-dual under the "
                      "twisted dual, or the real factor has odd multiplicity")
        else:
            reason = ("no nondegenerate alternating pairing is compatible "
                      "with the actions and the filtration")
    elif c4 is not None and not c4:
        clause = "filtration-type"
        assert fil_report is not None
        if not fil_report.hodge_tate_ok:
            reason = "the filtration rank is not half the ambient dimension"
        else:
            reason = "the filtration is not stable under the twisted actions"
    else:
        assert fil_report is not None
        bad_entries = [e.label for e in fil_report.wa.entries if not e.ok]
        clause = "newton-hodge-screen"
        reason = "admissibility screen fails"
        if not fil_report.wa.ok and fil_report.wa.t_newton != fil_report.wa.t_hodge:
            reason = (f"total Newton number {fil_report.wa.t_newton} differs "
                      f"from total Hodge number {fil_report.wa.t_hodge}")
        elif bad_entries:
            reason = "Hodge exceeds Newton on subobject " + bad_entries[0]

    return _rejected(p, mode, clause=clause, reason=reason, seed=seed,
                     components=table, pchar=pchar, split=split,
                     conditions=conditions, tags=tuple(tags),
                     filtration=fil_report)
