# lkgeom/main.py
"""
Command-line entrypoint.

Every command reads one JSON document (--in), runs one computation and writes
CSV or JSON to stdout or --out. Errors go to stderr as a single JSON line and
set the exit status: 1 validation, 2 numerical diagnostic, 3 I/O.
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from rich.console import Console
from rich.table import Table

from lkgeom.adapter.error.error import LKGeomError, NumericalDiagnosticError, ValidationError
from lkgeom.adapter.response.response_custom import HandleError, HandleSuccess, emit_plotdata
from lkgeom.conf import DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE, DEFAULT_WORKERS, LOG_FORMAT, LOG_LEVEL, validate_config
from lkgeom.model.resolution import SIGNS
from lkgeom.model.schemas import COMMAND_SCHEMAS, Command, RunConfig
from lkgeom.service.complex_layer import kashiwara_consistency
from lkgeom.service.crofton import crofton_volume_mc, lk_via_slices_mc
from lkgeom.service.germ_oracle import germ_chi_oracle, oracle_table
from lkgeom.service.loader import load_document
from lkgeom.service.local_invariants import density, local_lk, mlcc_verify, polar_vector
from lkgeom.service.motivic import (
    acampo_lefschetz,
    consistency_check_14,
    euler_realization,
    expand_series,
    milnor_fibre_by_series,
    monodromy_pole_candidates,
    monodromy_profile,
    motivic_milnor_fibre,
    real_chi_relations,
    zeta_from_resolution,
)
from lkgeom.service.tube_steiner import lk_curvatures, tube_sweep
from lkgeom.utils.logger import clear_run_context, get_logger, set_run_context, setup_logging
from lkgeom.utils.metrics import metrics

console = Console(stderr=True)
logger = get_logger(__name__)

DEFAULT_SWEEP = [round(0.05 * k, 2) for k in range(1, 21)]

# (payload, default format, csv columns, exit status)
Outcome = Tuple[object, str, Tuple[str, ...], int]


# --- commands -------------------------------------------------------------


def _cmd_lk(cfg: RunConfig, X) -> Outcome:
    lk = lk_curvatures(X, cfg.samples, cfg.seed)
    shape = Path(cfg.input_path).stem
    err = lk.errors()
    if cfg.output == "json":
        return {"shape": shape, "method": lk.method, "values": list(lk.values), "stderr": list(err)}, "json", (), 0
    rows = [(shape, i, v, lk.method, e) for i, (v, e) in enumerate(zip(lk.values, err))]
    return rows, "csv", ("shape", "i", "lambda", "method", "stderr"), 0


def _cmd_tube(cfg: RunConfig, X) -> Outcome:
    eps = cfg.eps or [0.1]
    rows = tube_sweep(X, eps, cfg.samples, cfg.seed, cfg.workers)
    if cfg.output == "json":
        keys = ("epsilon", "estimate", "stderr", "steiner")
        return {"rows": [dict(zip(keys, r)) for r in rows], "samples": cfg.samples, "seed": cfg.seed}, "json", (), 0
    return rows, "csv", ("epsilon", "estimate", "stderr", "steiner"), 0


def _cmd_crofton(cfg: RunConfig, X) -> Outcome:
    if cfg.target == "volume":
        stats = crofton_volume_mc(X, None, cfg.samples, cfg.seed, cfg.workers)
        i = X.dim
    else:
        if cfg.i is None:
            raise ValidationError("crofton --target lambda needs --i", error_code="MISSING_ARGUMENT")
        stats = lk_via_slices_mc(X, cfg.i, None, cfg.samples, cfg.seed, cfg.workers)
        i = cfg.i
    payload = {
        "target": cfg.target,
        "i": i,
        "estimate": stats.estimate,
        "stderr": stats.stderr,
        "samples": stats.samples,
        "seed": cfg.seed,
        "zero_hit_fraction": stats.zero_hit_fraction,
    }
    return payload, "json", (), 0


def _cmd_local(cfg: RunConfig, X0) -> Outcome:
    lam = local_lk(X0, seed=cfg.seed)
    if cfg.output == "csv":
        return list(zip(range(len(lam.values)), lam.values, lam.errors())), "csv", ("i", "lambda_loc", "stderr"), 0
    payload = {"lambda_loc": list(lam.values), "stderr": list(lam.errors())}
    if X0.is_pure:
        payload["density"] = density(X0, seed=cfg.seed)
    return payload, "json", (), 0


def _cmd_polar(cfg: RunConfig, X0) -> Outcome:
    sig = polar_vector(X0, cfg.samples, cfg.seed, cfg.workers)
    if cfg.output == "json":
        return {"sigma": list(sig.values), "stderr": list(sig.errors()), "samples": cfg.samples}, "json", (), 0
    return list(zip(range(len(sig.values)), sig.values, sig.errors())), "csv", ("i", "sigma", "stderr"), 0


def _cmd_mlcc(cfg: RunConfig, X0) -> Outcome:
    r = mlcc_verify(X0, cfg.tolerance, cfg.samples, cfg.seed, cfg.workers)
    payload = {
        "lambda_loc": r.lambda_loc,
        "sigma": r.sigma,
        "predicted": r.predicted,
        "residuals": r.residuals,
        "thresholds": r.thresholds,
        "passed": r.passed,
    }
    return payload, "json", (), 0 if r.passed else 2


def _uses_surrogate(res, mode: str) -> bool:
    """True when some stratum contributes chi instead of a class."""
    strata = [s for s in res.strata if res.meets_exceptional(s)]
    if mode == "complex":
        return any(s.klass is None for s in strata)
    return any(set(s.chi_signed) - set(s.signed) for s in strata)


def _zeta_payload(Z) -> dict:
    return {
        "n": Z.n,
        "mode": Z.mode,
        "sign": Z.sign,
        "terms": [
            {"I": list(t.ids), "coefficient": t.coefficient, "gates": [[g.nu, g.N] for g in t.gates]}
            for t in Z.terms
        ],
    }


def _cmd_zeta(cfg: RunConfig, res) -> Outcome:
    Z = zeta_from_resolution(res, cfg.mode, cfg.sign, allow_chi=True)
    payload = _zeta_payload(Z)
    payload["chi_surrogate"] = _uses_surrogate(res, cfg.mode)
    if cfg.expand:
        payload["expansion"] = expand_series(Z, cfg.expand)
    payload["poles"] = [{"nu": p.nu, "N": p.N, "candidate": p.label} for p in monodromy_pole_candidates(Z)]
    return payload, "json", (), 0


def _cmd_acampo(cfg: RunConfig, res) -> Outcome:
    profile = monodromy_profile(res, cfg.m)
    report = consistency_check_14(res, cfg.m)
    payload = {
        "chi_milnor_fibre": acampo_lefschetz(res, 0),
        "lefschetz": {m: profile.lefschetz[m] for m in range(1, cfg.m + 1)},
        "period": profile.period,
        "consistency": [{"m": m, "chi_coefficient": c, "lefschetz": lam, "ok": ok} for m, c, lam, ok in report.rows],
        "class_mismatches": list(report.class_mismatches),
        "passed": report.passed,
    }
    return payload, "json", (), 0 if report.passed else 2


def _cmd_milnor_fibre(cfg: RunConfig, res) -> Outcome:
    if cfg.mode == "complex":
        Z = zeta_from_resolution(res, "complex", allow_chi=True)
        S = motivic_milnor_fibre(Z)
        payload = {
            "chi_surrogate": _uses_surrogate(res, "complex"),
            "class": S,
            "chi": euler_realization(S, "complex"),
            "series_agrees": milnor_fibre_by_series(Z) == S,
        }
        return payload, "json", (), 0
    present = [s for s in SIGNS if any(s in st.signed or s in st.chi_signed for st in res.strata)]
    signs = [cfg.sign] if cfg.sign else present
    fibres = {}
    for sign in signs:
        Z = zeta_from_resolution(res, "real", sign, allow_chi=True)
        S = motivic_milnor_fibre(Z)
        fibres[sign] = {"class": S, "chi": euler_realization(S, "real"), "series_agrees": milnor_fibre_by_series(Z) == S}
    oracle = oracle_table(res.polynomial) if res.polynomial and res.n <= 2 else None
    report = real_chi_relations(res, oracle)
    payload = {"fibres": fibres, "relations": report.rows, "advisory": report.advisory, "passed": report.passed}
    if oracle is not None:
        payload["oracle"] = oracle
    return payload, "json", (), 0 if report.passed else 2


def _cmd_oracle(cfg: RunConfig, doc) -> Outcome:
    sign = cfg.sign or doc.sign
    value = germ_chi_oracle(doc.f, doc.question, sign, doc.eps, doc.eta, workers=cfg.workers)
    return {"f": doc.f, "question": doc.question, "sign": sign, "eps": doc.eps, "eta": doc.eta, "chi": value}, "json", (), 0


def _cmd_complex(cfg: RunConfig, data) -> Outcome:
    r = kashiwara_consistency(data)
    payload = {
        "dim": r.dim,
        "E": list(r.E),
        "polar": list(r.polar_multiplicities),
        "differences": list(r.differences),
        "euler_obstruction": r.euler_obstruction,
        "passed": r.passed,
    }
    return payload, "json", (), 0 if r.passed else 2


COMMANDS: Dict[Command, Callable[[RunConfig, object], Outcome]] = {
    Command.LK: _cmd_lk,
    Command.TUBE: _cmd_tube,
    Command.CROFTON: _cmd_crofton,
    Command.LOCAL: _cmd_local,
    Command.POLAR: _cmd_polar,
    Command.MLCC_CHECK: _cmd_mlcc,
    Command.ZETA: _cmd_zeta,
    Command.ACAMPO: _cmd_acampo,
    Command.MILNOR_FIBRE: _cmd_milnor_fibre,
    Command.ORACLE: _cmd_oracle,
    Command.COMPLEX: _cmd_complex,
}


# --- dispatch -------------------------------------------------------------


def run(cfg: RunConfig) -> int:
    set_run_context(command=cfg.command.value, seed=cfg.seed)
    try:
        if cfg.command is Command.VALIDATE:
            doc, _ = load_document(cfg.input_path)
            return HandleSuccess({"valid": True, "schema": type(doc).__name__}, "json", cfg.out)
        doc, obj = load_document(cfg.input_path, COMMAND_SCHEMAS[cfg.command])
        if cfg.command is Command.PLOTDATA:
            rows = tube_sweep(obj, cfg.eps or DEFAULT_SWEEP, cfg.samples, cfg.seed, cfg.workers)
            emit_plotdata([(eps, est) for eps, est, _, _ in rows], cfg.out)
            return 0
        payload, fmt, columns, status = COMMANDS[cfg.command](cfg, obj)
        HandleSuccess(payload, fmt, cfg.out, columns)
        if status == 2:
            logger.warning_data("check failed", command=cfg.command.value)
        return status
    finally:
        logger.debug_data("run metrics", rejection_rate=round(metrics.rejection_rate(), 6), **metrics.get_summary())
        clear_run_context()


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 with a JSON body like every other validation error."""

    def error(self, message):
        raise ValidationError(f"Bad arguments: {message}", error_code="BAD_ARGUMENTS")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lkgeom", description="Lipschitz-Killing curvatures, local invariants and motivic zeta data")
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--in", dest="input_path", required=True, metavar="PATH")
    parser.add_argument("--out", default=None, metavar="PATH")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    parser.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    parser.add_argument("--expand", type=int, default=4, metavar="M")
    parser.add_argument("--m", type=int, default=12, help="largest monodromy iterate for acampo")
    parser.add_argument("--mode", choices=["complex", "real"], default="complex")
    parser.add_argument("--sign", choices=list(SIGNS), default=None)
    parser.add_argument("--format", dest="output", choices=["csv", "json"], default=None)
    parser.add_argument("--eps", type=float, nargs="+", default=[])
    parser.add_argument("--target", choices=["volume", "lambda"], default="volume")
    parser.add_argument("--i", type=int, default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def metrics_table() -> Table:
    """Counters and kernel timings of the current process, for ``-v``."""
    summary = metrics.get_summary()
    table = Table(title="run metrics", show_lines=False)
    table.add_column("name")
    table.add_column("value", justify="right")
    for name, value in sorted(summary["counters"].items()):
        table.add_row(name, str(value))
    table.add_row("rejection_rate", f"{metrics.rejection_rate():.6f}")
    for name, stats in sorted(summary["timers"].items()):
        table.add_row(f"{name} (ms)", f"n={stats['count']} avg={stats['avg']} max={stats['max']}")
    return table


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        validate_config()
    except ValidationError as e:
        return HandleError(e)
    except RuntimeError as e:
        return HandleError(ValidationError(str(e), error_code="BAD_CONFIG"))
    setup_logging("DEBUG" if args.verbose else LOG_LEVEL, LOG_FORMAT)
    fields = {k: v for k, v in vars(args).items() if k != "verbose"}
    try:
        cfg = RunConfig(**fields)
    except Exception as e:
        return HandleError(ValidationError(f"Bad arguments: {e}", error_code="BAD_ARGUMENTS"))
    try:
        return run(cfg)
    except LKGeomError as e:
        return HandleError(e)
    except MemoryError:
        return HandleError(NumericalDiagnosticError("Out of memory", error_code="OUT_OF_MEMORY"))
    finally:
        if args.verbose:
            console.print(metrics_table())


if __name__ == "__main__":
    sys.exit(main())
