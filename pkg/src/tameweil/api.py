"""Operation layer shared by the HTTP service and the command line.

Each run_* function takes a validated request model, drives the exact
core, and returns the matching response model.  Rejections come back as
regular responses; only malformed input or exhausted budgets raise.
"""

from __future__ import annotations

from math import isqrt
from typing import List, Optional

from . import schemas
from .classify import classify
from .errors import InvalidInputError
from .exactalg import Poly, is_probable_prime
from .hondatate import ht_invariants
from .quaternion import build_corpus
from .tamerep import decompose_matrices
from .weilpoly import is_p_weil_poly, weil_split


def run_classify(req: schemas.ClassifyRequest) -> schemas.CertificateOut:
    components = None
    if req.components is not None:
        components = [c.to_descriptor() for c in req.components]
    F = T = None
    if req.matrix_model is not None:
        F = schemas.matrix_from_wire(req.matrix_model.frobenius)
        T = schemas.matrix_from_wire(req.matrix_model.inertia)
    fi = None
    if req.filtration is not None:
        fi = req.filtration.to_input(req.p)
    descent = None
    if req.descent_matrix is not None:
        descent = schemas.matrix_from_wire(req.descent_matrix)
    if req.precision < schemas.PRECISION_FLOOR:
        raise InvalidInputError(
            f"precision cap {req.precision} is below the floor "
            f"{schemas.PRECISION_FLOOR}")
    cert = classify(components, req.p, frobenius_matrix=F, inertia_matrix=T,
                    filtration=fi, descent_matrix=descent, seed=req.seed,
                    sample_cap=req.precision)
    return schemas.certificate_out(cert)


def run_check_poly(req: schemas.CheckPolyRequest) -> schemas.CheckPolyResponse:
    P = schemas.poly_from_wire(req.coeffs)
    ok = is_p_weil_poly(P, req.p)
    split = reason = None
    if ok:
        split = schemas.split_out(weil_split(P, req.p))
    else:
        try:
            weil_split(P, req.p)
            reason = "not a Weil polynomial"
        except InvalidInputError as ex:
            reason = str(ex)
    return schemas.CheckPolyResponse(p=req.p, coeffs=req.coeffs, is_weil=ok,
                                     split=split, reason=reason, seed=req.seed)


def run_honda_tate(req: schemas.HondaTateRequest) -> schemas.HondaTateResponse:
    g = schemas.poly_from_wire(req.minpoly)
    cls = ht_invariants(g, req.s, req.p)
    return schemas.ht_class_out(cls, req.seed)


def run_decompose(req: schemas.DecomposeRequest) -> schemas.DecomposeResponse:
    comps = decompose_matrices(schemas.matrix_from_wire(req.frobenius),
                               schemas.matrix_from_wire(req.inertia), req.p)
    return schemas.DecomposeResponse(
        p=req.p,
        components=[schemas.ComponentIn(r=c.r,
                                        pi_minpoly=schemas.poly_to_wire(c.pi_minpoly),
                                        dim=c.dim)
                    for c in comps],
        seed=req.seed)


# ---------------------------------------------------------------------------
# corpus tables


def elliptic_descriptor(e: int, p: int) -> List[int]:
    """Minimal polynomial for the order-e tame elliptic family at p.

    For p = 1 mod e the class has complex multiplication by the e-th
    roots of unity; the trace comes from the first lattice point of the
    right cyclotomic norm form (a deterministic scan, so tables rebuild
    byte for byte).  Otherwise the supersingular candidate X + p stands
    in, whether or not the classifier ends up accepting it.
    """
    if e not in (3, 4, 6):
        raise InvalidInputError("elliptic family needs e in {3, 4, 6}")
    if not is_probable_prime(p) or p == 2:
        raise InvalidInputError(f"{p} is not an odd prime")
    if p % e != 1:
        return [p, 1]
    if e == 4:
        for a in range(1, isqrt(p) + 1):
            b2 = p - a * a
            b = isqrt(b2)
            if b * b == b2:
                return [p, -2 * a, 1]
    else:
        for a in range(1, isqrt(4 * p) + 1):
            for b in range(1, a + 1):
                if e == 3 and a * a - a * b + b * b == p:
                    return [p, -(2 * a - b), 1]
                if e == 6 and a * a + a * b + b * b == p:
                    return [p, -(2 * a + b), 1]
    raise AssertionError(f"no cyclotomic norm representation for {p}, e={e}")


def elliptic_row(e: int, p: int) -> schemas.EllipticRowOut:
    g = elliptic_descriptor(e, p)
    req = schemas.ClassifyRequest(
        p=p, components=[schemas.ComponentIn(r=e, pi_minpoly=g, dim=2)])
    cert = run_classify(req)
    tag: Optional[str] = cert.tags[0] if cert.tags else None
    return schemas.EllipticRowOut(e=e, p=p, pi_minpoly=g,
                                  accepted=cert.verdict == "accepted", tag=tag)


def run_corpus(req: schemas.CorpusRequest) -> schemas.CorpusResponse:
    for p in req.primes:
        if not is_probable_prime(p) or p == 2:
            raise InvalidInputError(f"corpus primes must be odd primes, got {p}")
    qrows = [schemas.quaternion_row_out(r) for r in build_corpus(req.primes)]
    erows = [elliptic_row(e, p) for e in (3, 4, 6) for p in req.primes]
    return schemas.CorpusResponse(primes=list(req.primes),
                                  quaternion_rows=qrows,
                                  elliptic_rows=erows, seed=req.seed)
