"""Command line client for the classifier and its side tables.

The layout is fixed by the contract for scripted use: machine output on
stdout, diagnostics on stderr, and the exit code carries the verdict
(0 accepted or valid, 1 rejected or infeasible, 2 invalid input,
3 retriable resource exhaustion).  JSON output is canonical: sorted
keys, no spaces, one trailing newline, so identical input, seed and
precision produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional

from . import api, schemas
from .errors import InvalidInputError, RetriableError

EXIT_ACCEPTED = 0
EXIT_REJECTED = 1
EXIT_INVALID = 2
EXIT_RETRIABLE = 3


@dataclass
class CliConfig:
    """One parsed invocation; validation happens on construction."""

    subcommand: str
    input_source: Optional[str] = None
    output_format: str = "json"
    precision: int = schemas.PRECISION_FLOOR
    seed: int = 0
    primes: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.output_format not in ("json", "text"):
            raise InvalidInputError(
                f"unknown output format {self.output_format!r}")
        if self.precision < schemas.PRECISION_FLOOR:
            raise InvalidInputError(
                f"precision cap {self.precision} is below the floor "
                f"{schemas.PRECISION_FLOOR}")

    def input_payload(self) -> dict:
        """The request body: inline JSON if the source looks like JSON,
        otherwise the contents of the named file."""
        if self.input_source is None:
            raise InvalidInputError("this subcommand needs --input")
        text = self.input_source
        if not text.lstrip().startswith("{"):
            try:
                text = Path(self.input_source).read_text(encoding="utf-8")
            except OSError as ex:
                raise InvalidInputError(f"cannot read input file: {ex}")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as ex:
            raise InvalidInputError(f"input is not valid JSON: {ex}")
        if not isinstance(data, dict):
            raise InvalidInputError("input JSON must be an object")
        return data


def _csv_ints(text: str, what: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise InvalidInputError(f"{what} must be comma-separated integers")


# ---------------------------------------------------------------------------
# output


def _emit(model, fmt: str, render: Callable[[object], List[str]]) -> None:
    if fmt == "json":
        payload = json.dumps(model.model_dump(mode="json"), sort_keys=True,
                             separators=(",", ":"), ensure_ascii=False)
        sys.stdout.write(payload + "\n")
    else:
        sys.stdout.write("\n".join(render(model)) + "\n")


def _poly_str(coeffs: List[int]) -> str:
    return "[" + ",".join(str(c) for c in coeffs) + "]"


def _render_certificate(out: schemas.CertificateOut) -> List[str]:
    lines = [f"verdict: {out.verdict}", f"p: {out.p}", f"mode: {out.mode}"]
    if out.clause is not None:
        lines.append(f"clause: {out.clause}")
    if out.reason is not None:
        lines.append(f"reason: {out.reason}")
    if out.pchar is not None:
        lines.append(f"pchar: {_poly_str(out.pchar)}")
    for w in out.witness:
        lines.append(f"witness: minpoly={_poly_str(w.minpoly)} "
                     f"delta={w.delta} dim={w.dimension} x{w.multiplicity} "
                     f"({w.endo_summary})")
    if out.tags:
        lines.append("tags: " + ",".join(out.tags))
    if out.filtration is not None:
        f = out.filtration
        lines.append(f"filtration: hodge-tate={f.hodge_tate_ok} "
                     f"galois-stable={f.galois_stable_ok} skew={f.skew.ok} "
                     f"screen={f.wa.ok} ({f.screen_status})")
    lines.append(f"seed: {out.seed}")
    return lines


def _render_check_poly(out: schemas.CheckPolyResponse) -> List[str]:
    lines = [f"p: {out.p}", f"weil: {'yes' if out.is_weil else 'no'}"]
    if out.split is not None:
        for f in out.split:
            lines.append(f"factor: {_poly_str(f.factor)} x{f.multiplicity}")
    if out.reason is not None:
        lines.append(f"reason: {out.reason}")
    lines.append(f"seed: {out.seed}")
    return lines


def _render_honda_tate(out: schemas.HondaTateResponse) -> List[str]:
    lines = [f"p: {out.p}", f"minpoly: {_poly_str(out.minpoly)}",
             f"delta: {out.delta}", f"dimension: {out.dimension}",
             f"endo: {out.endo_summary}"]
    for inv in out.invariants_p:
        lines.append(f"place: e={inv.e} f={inv.f} ord_pi={inv.ord_pi} "
                     f"inv={inv.invariant}")
    lines.append(f"real-places: {out.real_invariant_count}")
    lines.append(f"seed: {out.seed}")
    return lines


def _render_decompose(out: schemas.DecomposeResponse) -> List[str]:
    lines = [f"p: {out.p}"]
    for c in out.components:
        lines.append(f"component: r={c.r} minpoly={_poly_str(c.pi_minpoly)} "
                     f"dim={c.dim}")
    lines.append(f"seed: {out.seed}")
    return lines


def _render_corpus(out: schemas.CorpusResponse) -> List[str]:
    lines = []
    for q in out.quaternion_rows:
        lines.append(f"quaternion: p={q.p} mod8={q.residue_mod_8} "
                     f"alg=({q.a},{q.b}) order8-unit="
                     f"{'yes' if q.has_order8_unit else 'no'}")
    for r in out.elliptic_rows:
        lines.append(f"elliptic: e={r.e} p={r.p} "
                     f"minpoly={_poly_str(r.pi_minpoly)} "
                     f"accepted={'yes' if r.accepted else 'no'}"
                     + (f" tag={r.tag}" if r.tag else ""))
    lines.append(f"seed: {out.seed}")
    return lines


# ---------------------------------------------------------------------------
# subcommand drivers


def _run_classify(cfg: CliConfig, args) -> int:
    data = cfg.input_payload() if cfg.input_source else {}
    data["p"] = args.p
    data["seed"] = cfg.seed
    data["precision"] = cfg.precision
    req = schemas.parse_request(schemas.ClassifyRequest, data)
    out = api.run_classify(req)
    _emit(out, cfg.output_format, _render_certificate)
    return EXIT_ACCEPTED if out.verdict == "accepted" else EXIT_REJECTED


def _run_check_poly(cfg: CliConfig, args) -> int:
    req = schemas.parse_request(schemas.CheckPolyRequest, {
        "p": args.p, "coeffs": _csv_ints(args.coeffs, "--coeffs"),
        "seed": cfg.seed})
    out = api.run_check_poly(req)
    _emit(out, cfg.output_format, _render_check_poly)
    return EXIT_ACCEPTED if out.is_weil else EXIT_REJECTED


def _run_honda_tate(cfg: CliConfig, args) -> int:
    req = schemas.parse_request(schemas.HondaTateRequest, {
        "p": args.p, "minpoly": _csv_ints(args.minpoly, "--minpoly"),
        "s": args.s, "seed": cfg.seed})
    out = api.run_honda_tate(req)
    _emit(out, cfg.output_format, _render_honda_tate)
    return EXIT_ACCEPTED


def _run_decompose(cfg: CliConfig, args) -> int:
    data = cfg.input_payload()
    data["p"] = args.p
    data["seed"] = cfg.seed
    req = schemas.parse_request(schemas.DecomposeRequest, data)
    out = api.run_decompose(req)
    _emit(out, cfg.output_format, _render_decompose)
    return EXIT_ACCEPTED


def _run_corpus(cfg: CliConfig, args) -> int:
    req = schemas.parse_request(schemas.CorpusRequest,
                                {"primes": cfg.primes, "seed": cfg.seed})
    out = api.run_corpus(req)
    _emit(out, cfg.output_format, _render_corpus)
    return EXIT_ACCEPTED


def _run_serve(cfg: CliConfig, args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_ACCEPTED


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tameweil",
        description="decide realizability of tame Frobenius-Galois "
                    "descriptors and emit certificates")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--precision", type=int,
                        default=schemas.PRECISION_FLOOR)

    sp = sub.add_parser("classify",
                        help="full verdict with certificate")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--input", help="request file path or inline JSON object")
    common(sp)

    sp = sub.add_parser("check-poly", help="Weil polynomial test and split")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--coeffs", required=True,
                    help="little-endian integer coefficients, comma separated")
    common(sp)

    sp = sub.add_parser("honda-tate",
                        help="isogeny class invariants of a Weil minpoly")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--minpoly", required=True,
                    help="little-endian integer coefficients, comma separated")
    sp.add_argument("--s", type=int, default=1)
    common(sp)

    sp = sub.add_parser("decompose",
                        help="split a rational matrix model into components")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--input", required=True,
                    help="file path or inline JSON with frobenius and inertia")
    common(sp)

    sp = sub.add_parser("corpus",
                        help="regenerate the verified quaternion and "
                             "elliptic tables")
    sp.add_argument("--primes", required=True,
                    help="comma separated odd primes")
    common(sp)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    common(sp)

    return parser


_DRIVERS = {
    "classify": _run_classify,
    "check-poly": _run_check_poly,
    "honda-tate": _run_honda_tate,
    "decompose": _run_decompose,
    "corpus": _run_corpus,
    "serve": _run_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = CliConfig(
            subcommand=args.subcommand,
            input_source=getattr(args, "input", None),
            output_format=getattr(args, "format", "json"),
            precision=getattr(args, "precision", schemas.PRECISION_FLOOR),
            seed=getattr(args, "seed", 0),
            primes=_csv_ints(args.primes, "--primes")
            if getattr(args, "primes", None) else [])
        return _DRIVERS[cfg.subcommand](cfg, args)
    except InvalidInputError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INVALID
    except RetriableError as ex:
        print(f"retriable: {ex}", file=sys.stderr)
        return EXIT_RETRIABLE


if __name__ == "__main__":
    sys.exit(main())
