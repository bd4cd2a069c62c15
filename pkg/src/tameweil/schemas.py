"""Wire formats: pydantic models and exact-value converters.

One schema serves both the HTTP service and the command line, so the
formats live here and nowhere else.  Conventions: polynomials are
little-endian integer coefficient arrays; every rational number crosses
the wire as the string "num/den"; filtration matrices are row-major,
with a plain rational entry meaning a rational coordinate and a list of
rationals meaning coordinates over the Q-basis of the coefficient
tower.  Parsing failures surface as InvalidInputError so callers map
them onto the invalid-input exit code uniformly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from .classify import Certificate, FiltrationReport
from .errors import InvalidInputError
from .exactalg import Poly, poly_from_ints
from .filtered import FiltrationInput, GlobalModel, build_global_model
from .hondatate import HTClass
from .quaternion import CorpusRow
from .tamerep import QElementaryDescriptor

RatWire = Union[int, str]
FilEntryWire = Union[int, str, List[str]]

SKEW_SCREEN_LABEL = "screened, not certified"

# randomized searches may not shrink their budget below this
PRECISION_FLOOR = 32


# ---------------------------------------------------------------------------
# exact-value helpers


def frac_to_wire(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def frac_from_wire(v: RatWire) -> Fraction:
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError, TypeError) as ex:
        raise InvalidInputError(f"bad rational {v!r}: {ex}")


def poly_to_wire(g: Poly) -> List[int]:
    if not g.is_integral():
        raise InvalidInputError("only integral polynomials are serialized")
    return [int(c) for c in g.coeffs]


def poly_from_wire(coeffs: List[int]) -> Poly:
    if not coeffs:
        raise InvalidInputError("empty coefficient array")
    return poly_from_ints(coeffs)


def matrix_from_wire(rows: List[List[RatWire]]) -> List[List[Fraction]]:
    return [[frac_from_wire(v) for v in row] for row in rows]


def matrix_to_wire(rows) -> List[List[str]]:
    return [[frac_to_wire(Fraction(v)) for v in row] for row in rows]


# ---------------------------------------------------------------------------
# request models


class ComponentIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    r: int
    pi_minpoly: List[int]
    dim: int

    def to_descriptor(self) -> QElementaryDescriptor:
        return QElementaryDescriptor(r=self.r,
                                     pi_minpoly=poly_from_wire(self.pi_minpoly),
                                     dim=self.dim)


class MatrixModelIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    frobenius: List[List[RatWire]]
    inertia: List[List[RatWire]]


class FiltrationIn(BaseModel):
    """Declared ground-field shape plus the filtration step, row-major."""

    model_config = ConfigDict(extra="forbid")

    s: int
    e: int
    E0_poly: List[int]
    fil1: List[List[FilEntryWire]]

    def to_input(self, p: int) -> FiltrationInput:
        model = build_global_model(self.s, self.e, p)
        if poly_from_wire(self.E0_poly) != model.unram_poly:
            raise InvalidInputError(
                "declared E0_poly disagrees with the deterministic tower "
                f"for (s={self.s}, e={self.e}, p={p}); expected "
                f"{poly_to_wire(model.unram_poly)}")
        if not self.fil1 or any(len(row) != len(self.fil1[0])
                                for row in self.fil1):
            raise InvalidInputError("fil1 must be a rectangular matrix")
        ncols = len(self.fil1[0])
        cols = [[_fil_entry(model, self.fil1[i][j])
                 for i in range(len(self.fil1))] for j in range(ncols)]
        return FiltrationInput(model, cols, nrows=len(self.fil1))


def _fil_entry(model: GlobalModel, v: FilEntryWire):
    if isinstance(v, list):
        coords = [frac_from_wire(c) for c in v]
        if len(coords) != model.degree:
            raise InvalidInputError(
                f"tower coordinates need length {model.degree}, got {len(coords)}")
        d = model.base.degree
        return tuple(model.base.from_coeffs(coords[j * d:(j + 1) * d])
                     for j in range(model.e))
    return model.from_rational(frac_from_wire(v))


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    components: Optional[List[ComponentIn]] = None
    matrix_model: Optional[MatrixModelIn] = None
    filtration: Optional[FiltrationIn] = None
    descent_matrix: Optional[List[List[RatWire]]] = None
    seed: int = 0
    precision: int = PRECISION_FLOOR


class CheckPolyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    coeffs: List[int]
    seed: int = 0


class HondaTateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    minpoly: List[int]
    s: int = 1
    seed: int = 0


class DecomposeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    frobenius: List[List[RatWire]]
    inertia: List[List[RatWire]]
    seed: int = 0


class CorpusRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    primes: List[int]
    seed: int = 0


def parse_request(model_cls, data: dict):
    """Validate a raw dict, mapping schema errors to InvalidInputError."""
    try:
        return model_cls.model_validate(data)
    except ValidationError as ex:
        raise InvalidInputError(f"request does not match the schema: {ex}")


# ---------------------------------------------------------------------------
# response models


class ComponentOut(BaseModel):
    r: int
    pi_minpoly: List[int]
    dim: int
    s: int
    cyclotomic_degree: int
    delta: int
    n_r: int
    embedding_ok: bool
    frobenius_charpoly: List[int]


class ConditionsOut(BaseModel):
    weil_charpoly: Optional[bool]
    tate_type: Optional[bool]
    duality_pairing: Optional[bool]
    filtration_compatible: Optional[bool]


class SplitFactorOut(BaseModel):
    factor: List[int]
    multiplicity: int


class WitnessOut(BaseModel):
    minpoly: List[int]
    delta: int
    dimension: int
    endo_summary: str
    frobenius_charpoly: List[int]
    multiplicity: int


class SkewOut(BaseModel):
    ok: bool
    witness: Optional[List[List[str]]]
    space_dim: int
    method: str


class WAEntryOut(BaseModel):
    label: str
    dim: int
    t_newton: int
    t_hodge: int
    ok: bool


class WAOut(BaseModel):
    ok: bool
    t_newton: int
    t_hodge: int
    entries: List[WAEntryOut]


class FiltrationOut(BaseModel):
    hodge_tate_ok: bool
    galois_stable_ok: bool
    skew: SkewOut
    wa: WAOut
    screen_status: str


class CertificateOut(BaseModel):
    verdict: str
    p: int
    mode: str
    clause: Optional[str]
    reason: Optional[str]
    components: List[ComponentOut]
    pchar: Optional[List[int]]
    weil_split: List[SplitFactorOut]
    witness: List[WitnessOut]
    conditions: ConditionsOut
    tags: List[str]
    filtration: Optional[FiltrationOut]
    citations: List[str]
    schema_version: int
    seed: int


class CheckPolyResponse(BaseModel):
    p: int
    coeffs: List[int]
    is_weil: bool
    split: Optional[List[SplitFactorOut]]
    reason: Optional[str]
    seed: int


class PlaceInvariantOut(BaseModel):
    e: int
    f: int
    ord_pi: int
    invariant: str


class HondaTateResponse(BaseModel):
    p: int
    s: int
    minpoly: List[int]
    delta: int
    dimension: int
    endo_summary: str
    invariants_p: List[PlaceInvariantOut]
    real_invariant_count: int
    frobenius_charpoly: List[int]
    seed: int


class DecomposeResponse(BaseModel):
    p: int
    components: List[ComponentIn]
    seed: int


class QuaternionRowOut(BaseModel):
    p: int
    residue_mod_8: int
    a: int
    b: int
    ramified_at: List[Union[int, str]]
    has_order8_unit: bool
    tau: Optional[List[List[List[str]]]]


class EllipticRowOut(BaseModel):
    e: int
    p: int
    pi_minpoly: List[int]
    accepted: bool
    tag: Optional[str]


class CorpusResponse(BaseModel):
    primes: List[int]
    quaternion_rows: List[QuaternionRowOut]
    elliptic_rows: List[EllipticRowOut]
    seed: int


# ---------------------------------------------------------------------------
# converters from core results


def split_out(split) -> List[SplitFactorOut]:
    return [SplitFactorOut(factor=poly_to_wire(g), multiplicity=m)
            for g, m in split]


def filtration_report_out(rep: FiltrationReport) -> FiltrationOut:
    skew = SkewOut(
        ok=rep.skew.ok,
        witness=None if rep.skew.witness is None
        else matrix_to_wire(rep.skew.witness),
        space_dim=rep.skew.space_dim,
        method=rep.skew.method)
    wa = WAOut(
        ok=rep.wa.ok, t_newton=rep.wa.t_newton, t_hodge=rep.wa.t_hodge,
        entries=[WAEntryOut(label=s.label, dim=s.dim, t_newton=s.t_newton,
                            t_hodge=s.t_hodge, ok=s.ok)
                 for s in rep.wa.entries])
    return FiltrationOut(hodge_tate_ok=rep.hodge_tate_ok,
                         galois_stable_ok=rep.galois_stable_ok,
                         skew=skew, wa=wa, screen_status=rep.screen_status)


def certificate_out(cert: Certificate) -> CertificateOut:
    return CertificateOut(
        verdict=cert.verdict,
        p=cert.p,
        mode=cert.mode,
        clause=cert.clause,
        reason=cert.reason,
        components=[ComponentOut(
            r=c.r, pi_minpoly=poly_to_wire(c.pi_minpoly), dim=c.dim, s=c.s,
            cyclotomic_degree=c.cyclotomic_degree, delta=c.delta, n_r=c.n_r,
            embedding_ok=c.embedding_ok,
            frobenius_charpoly=poly_to_wire(c.frobenius_charpoly))
            for c in cert.components],
        pchar=None if cert.pchar is None else poly_to_wire(cert.pchar),
        weil_split=split_out(cert.weil_split),
        witness=[WitnessOut(
            minpoly=poly_to_wire(w.minpoly), delta=w.delta,
            dimension=w.dimension, endo_summary=w.endo_summary,
            frobenius_charpoly=poly_to_wire(w.frobenius_charpoly),
            multiplicity=w.multiplicity) for w in cert.witness],
        conditions=ConditionsOut(
            weil_charpoly=cert.conditions.weil_charpoly,
            tate_type=cert.conditions.tate_type,
            duality_pairing=cert.conditions.duality_pairing,
            filtration_compatible=cert.conditions.filtration_compatible),
        tags=list(cert.tags),
        filtration=None if cert.filtration is None
        else filtration_report_out(cert.filtration),
        citations=list(cert.citations),
        schema_version=cert.schema_version,
        seed=cert.seed)


def ht_class_out(cls: HTClass, seed: int) -> HondaTateResponse:
    return HondaTateResponse(
        p=cls.p, s=cls.s, minpoly=poly_to_wire(cls.g), delta=cls.delta,
        dimension=cls.dimension, endo_summary=cls.endo_summary,
        invariants_p=[PlaceInvariantOut(e=P.e, f=P.f, ord_pi=P.ord_pi,
                                        invariant=frac_to_wire(inv))
                      for P, inv in cls.invariants_p],
        real_invariant_count=cls.real_invariant_count,
        frobenius_charpoly=poly_to_wire(cls.g ** cls.delta),
        seed=seed)


def quaternion_row_out(row: CorpusRow) -> QuaternionRowOut:
    tau = None
    if row.tau is not None:
        tau = [[[frac_to_wire(c) for c in q] for q in mat_row]
               for mat_row in row.tau]
    return QuaternionRowOut(
        p=row.p, residue_mod_8=row.residue_mod_8, a=row.a, b=row.b,
        ramified_at=list(row.ramified_at),
        has_order8_unit=row.has_order8_unit, tau=tau)
