"""Command-line front end.

Exit codes: 0 success, 1 parse error, 2 invalid input, 3 verification failure.
Data goes to stdout, logs to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, oracle
from .chains import expected_pairing, homology, pairing_matrix
from .complex import (
    CellComplex,
    ComplexParseError,
    ComplexValidationError,
    Region,
    build_genus2,
    build_sphere_cube,
    build_torus,
    dualize,
    load_complex,
    load_region,
    save_complex,
    validate,
)
from .suite import run_suite

log = logging.getLogger("kitaevlab")

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3


class VerificationFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    source: str
    d: int | None
    region: str | None
    json: bool
    oracle: bool
    seed: int


def _config(args) -> RunConfig:
    if args.load:
        source = f"file:{args.load}"
    elif args.genus2:
        source = "genus2"
    elif args.sphere:
        source = "sphere"
    else:
        source = f"torus:{args.torus or 2}"
    return RunConfig(args.command, source, args.d, getattr(args, "region", None), args.json, args.oracle, args.seed)


def build_complex(cfg: RunConfig) -> CellComplex:
    kind, _, param = cfg.source.partition(":")
    d = cfg.d or 2
    if kind == "file":
        cx = load_complex(Path(param).read_text())
        return cx.with_modulus(cfg.d) if cfg.d else cx
    if kind == "genus2":
        return build_genus2(d)
    if kind == "sphere":
        return build_sphere_cube(d)
    return build_torus(int(param), d)


# ---------------------------------------------------------------- commands


def cmd_complex(cx: CellComplex, cfg: RunConfig, args) -> dict:
    problems = validate(cx)
    if args.dual:
        cx = dualize(cx).complex
    report = {
        "source": cfg.source,
        "d": cx.d,
        "vertices": cx.n_vertices,
        "edges": cx.n_edges,
        "faces": cx.n_faces,
        "euler_characteristic": cx.euler_characteristic,
        "genus": cx.genus,
        "valid": not problems,
        "problems": problems,
    }
    if args.out:
        Path(args.out).write_text(save_complex(cx))
        report["written"] = args.out
        log.info("wrote %s", args.out)
    return report


def cmd_homology(cx: CellComplex, cfg: RunConfig, args) -> dict:
    hom = homology(cx)
    return {
        "d": cx.d,
        "b1": hom.betti,
        "genus": hom.genus,
        "order": str(hom.order),
        "group": f"(Z_{cx.d})^{hom.betti}",
        "torsion": hom.torsion,
        "generator_source": hom.source,
        "lambda": [str(c) for c in hom.lambdas],
        "tau": [str(c) for c in hom.taus],
        "x_alpha": [str(c) for c in hom.x_alpha],
        "x_beta": [str(c) for c in hom.x_beta],
        "pairing_standard": pairing_matrix(hom) == expected_pairing(hom.genus),
    }


def cmd_groundspace(cx: CellComplex, cfg: RunConfig, args) -> dict:
    alg = analysis.logical_algebra_check(cx)
    report = {"d": cx.d, "dimension": str(analysis.ground_dim(cx)), "relations": alg.to_dict()}
    if not alg.ok:
        raise VerificationFailure("logical generator relations do not match")
    if cfg.oracle:
        rank = oracle.ground_projector_rank(cx)
        basis = oracle.ground_basis(cx)
        M = oracle.basis_matrix(basis.values())
        gram = float(np.abs(M.conj().T @ M - np.eye(M.shape[1])).max())
        report["oracle"] = {"projector_rank": rank, "basis_size": len(basis), "gram_error": gram}
        if rank != analysis.ground_dim(cx) or gram > 1e-12:
            raise VerificationFailure("oracle ground space disagrees with the exact dimension")
    return report


def _region(cx: CellComplex, cfg: RunConfig, args) -> Region:
    if cfg.region:
        return load_region(Path(cfg.region).read_text(), cx)
    if args.edges is not None:
        edges = [int(t) for t in args.edges.split(",") if t.strip()]
        return Region(cx, frozenset(edges))
    return Region(cx, frozenset())


def cmd_entropy(cx: CellComplex, cfg: RunConfig, args) -> dict:
    region = _region(cx, cfg, args)
    rep = analysis.entropy(cx, region)
    report = rep.to_dict()
    if rep.area_law is False:
        raise VerificationFailure("simple region violates the area law")
    if cfg.oracle:
        psi0 = oracle.ground_state_psi0(cx)
        numeric = oracle.entropy_numeric(psi0, region.edges)
        report["oracle_entropy"] = numeric
        report["oracle_error"] = abs(numeric - rep.value)
        if abs(numeric - rep.value) >= 1e-9:
            raise VerificationFailure("counting formula disagrees with the reduced density")
    return report


def cmd_anyons(cx: CellComplex, cfg: RunConfig, args) -> dict:
    k, l = args.k, args.l
    report = {}
    if args.exchange:
        d = cfg.d or cx.d
        ex = analysis.exchange_phase(k % d, l % d, d, oracle=True, seed=cfg.seed)
        report["exchange"] = ex.to_dict()
        if ex.oracle_exponent != ex.exponent:
            raise VerificationFailure("exchange phase: symbolic and oracle disagree")
    if args.charge is not None:
        _, cowalk, _ = analysis.canonical_placement(cx)
        faces = [int(t) for t in args.charge.split(",") if t.strip()]
        charges = analysis.cowalk_charges(cx, cowalk, l)
        loop = analysis.face_loop(cx, faces)
        exp = analysis.charge_detect(cx, loop, charges)
        entry = {"cowalk": cowalk, "enclosed_faces": faces, "charges": {str(f): q for f, q in charges.items()}, "exponent": exp}
        if cfg.oracle:
            from .pauli import x_string, z_string
            from .chains import cowalk_cochain

            psi = oracle.apply(x_string(cx, cowalk_cochain(cx, cowalk), l), oracle.ground_state_psi0(cx))
            entry["oracle_exponent"] = oracle.phase_exponent(psi, oracle.apply(z_string(cx, loop), psi), cx.d)
            if entry["oracle_exponent"] != exp:
                raise VerificationFailure("charge detection: symbolic and oracle disagree")
        report["charge"] = entry
    if args.braid or not (args.exchange or args.charge is not None):
        b = analysis.braid(cx, k % cx.d, l % cx.d, oracle=cfg.oracle)
        report["braid"] = b.to_dict()
        if not b.ok:
            raise VerificationFailure("braid phase check failed")
    return report


def cmd_verify(cx: CellComplex, cfg: RunConfig, args) -> dict:
    results = run_suite(cx, quick=args.quick, seed=cfg.seed, flip_dual=args.debug_flip_dual)
    failed = [r.name for r in results if not r.passed]
    report = {"checks": [r.to_dict() for r in results], "passed": len(results) - len(failed), "failed": failed}
    if failed:
        raise VerificationFailure(f"{len(failed)} of {len(results)} checks failed", report)
    return report


COMMANDS = {
    "complex": cmd_complex,
    "homology": cmd_homology,
    "groundspace": cmd_groundspace,
    "entropy": cmd_entropy,
    "anyons": cmd_anyons,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------- output


def _table(report: dict, indent: int = 0) -> str:
    pad = " " * indent
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_table(value, indent + 2))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(pad + "  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        json.dump(report, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
    else:
        print(_table(report))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--torus", type=int, metavar="L", help="L x L square-lattice torus (default 2)")
    src.add_argument("--genus2", action="store_true", help="genus-2 surface glued from two tori")
    src.add_argument("--sphere", action="store_true", help="cube surface (genus 0)")
    src.add_argument("--load", metavar="PATH", help="read a complex file")
    common.add_argument("--d", type=int, help="qudit dimension (default 2, or the file's value)")
    common.add_argument("--oracle", action="store_true", help="cross-check with the state-vector oracle")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="kitaevlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complex", parents=[common], help="build, validate, dualize or save a complex")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--dual", action="store_true", help="report and save the dual complex")

    sub.add_parser("homology", parents=[common], help="first homology over Z_d")
    sub.add_parser("groundspace", parents=[common], help="ground-space dimension and logical algebra")

    p = sub.add_parser("entropy", parents=[common], help="entanglement entropy of an edge region")
    p.add_argument("--region", metavar="PATH", help="region file: 'region e1 e2 ...'")
    p.add_argument("--edges", metavar="LIST", help="comma-separated edge ids (alternative to --region)")

    p = sub.add_parser("anyons", parents=[common], help="braiding, exchange and charge detection")
    p.add_argument("--braid", action="store_true")
    p.add_argument("--exchange", action="store_true")
    p.add_argument("--charge", metavar="FACES", help="comma-separated faces enclosed by the detecting loop")
    p.add_argument("--k", type=int, default=1, help="Z exponent")
    p.add_argument("--l", type=int, default=1, help="X exponent")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="skip oracle checks")
    p.add_argument("--debug-flip-dual", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.d is not None and args.d < 2:
        log.error("--d must be at least 2")
        return EXIT_INVALID
    cfg = _config(args)
    try:
        cx = build_complex(cfg)
        report = COMMANDS[cfg.command](cx, cfg, args)
    except ComplexParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except ComplexValidationError as exc:
        for problem in exc.report:
            log.error("validation: %s", problem)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except VerificationFailure as exc:
        log.error("verification failed: %s", exc.args[0])
        if len(exc.args) > 1:
            _emit(exc.args[1], cfg.json)
        return EXIT_VERIFY
    _emit(report, cfg.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
