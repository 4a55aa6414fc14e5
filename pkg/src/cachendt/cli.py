"""Command-line front end.

Subcommands: ``compute``, ``sweep``, ``regions``, ``simulate``,
``verify-phy`` and ``dof-table``.  Rationals are accepted as ``p/q`` or
decimal strings and parsed exactly.  Every rational in JSON output is an
object ``{"exact": "p/q", "decimal": float}``; CSV output carries a
12-significant-digit decimal column and an ``*_exact`` column for each.

Exit codes: 0 ok, 1 unexpected error, 2 invalid or infeasible input,
3 decode failure in the simulator, 4 PHY verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .bounds import InfeasibleCachePoint, ndt_lower_coded, ndt_lower_uncoded, ndt_report, ndt_upper, gap
from .cachesim import PlacementError, simulate
from .core import CachePoint, NetworkConfig, SplitRatios, feasible_cache_point, to_fraction
from .dof import dof_table, per_user_dof, sum_dof
from .phyverify import GuardError, SchemeCase, build_case_a, build_case_b, build_case_c, verify_scheme
from .regions import classify_2x2, classify_3x3, closed_form_2x2, closed_form_3x3

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_INPUT = 2
EXIT_DECODE = 3
EXIT_PHY = 4

SWEEP_MODES = ("upper", "lower", "gap", "regions")


class InputError(Exception):
    pass


def decimal12(x: Fraction) -> str:
    """``x`` rounded to 12 significant digits, without exponent for moderate magnitudes."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d.normalize(), "f") if d != 0 else "0"


def rational_json(x) -> dict:
    x = Fraction(x)
    return {"exact": str(x), "decimal": float(decimal12(x))}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _rational_arg(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _config(args) -> NetworkConfig:
    n_files = args.l if args.l is not None else args.nr
    try:
        return NetworkConfig(args.nt, args.nr, n_files)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _point(cfg: NetworkConfig, args) -> CachePoint:
    try:
        pt = CachePoint(args.mur, args.mut)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not feasible_cache_point(cfg, pt):
        total = pt.mu_r + cfg.n_tx * pt.mu_t
        raise InputError(
            f"infeasible cache point: mu_r + n_tx*mu_t = {total} < 1 "
            f"(the library must fit in the combined caches)"
        )
    return pt


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- compute ---------------------------------------------------------------------

def report_json(rep) -> dict:
    opt = None
    if rep.optimality is not None:
        opt = {"case": rep.optimality[0], "tau_star": rational_json(rep.optimality[1])}
    l, s1, s2 = rep.lower_argmax
    return {
        "n_tx": rep.cfg.n_tx,
        "n_rx": rep.cfg.n_rx,
        "n_files": rep.cfg.n_files,
        "mu_r": rational_json(rep.point.mu_r),
        "mu_t": rational_json(rep.point.mu_t),
        "tau_upper": rational_json(rep.tau_upper),
        "ratios": {str(k): rational_json(v) for k, v in rep.ratios.items()},
        "tau_lower_coded": rational_json(rep.tau_lower_coded),
        "tau_lower_uncoded": rational_json(rep.tau_lower_uncoded),
        "lower_argmax": {"l": l, "s1": s1, "s2": s2},
        "optimality": opt,
        "gap": rational_json(rep.gap),
        "both_zero": rep.both_zero,
        "gap_bound_class": rational_json(rep.gap_bound_class),
    }


def cmd_compute(args) -> int:
    cfg = _config(args)
    pt = _point(cfg, args)
    rep = ndt_report(cfg, pt, intra_file_coding=not args.uncoded)
    _write(_dump(report_json(rep)), args.out)
    return EXIT_OK


# -- sweep / regions ---------------------------------------------------------------

def _grid(step: Fraction) -> List[Fraction]:
    if not 0 < step <= Fraction(1, 2):
        raise InputError(f"grid step must lie in (0, 1/2], got {step}")
    pts = []
    k = 0
    while k * step <= 1:
        pts.append(k * step)
        k += 1
    return pts


def _classifier(cfg: NetworkConfig):
    if (cfg.n_tx, cfg.n_rx) == (2, 2):
        return classify_2x2, closed_form_2x2
    if (cfg.n_tx, cfg.n_rx) == (3, 3):
        return classify_3x3, closed_form_3x3
    return None


def sweep_rows(cfg: NetworkConfig, step: Fraction, mode: str):
    """Header and rows of a row-major (mu_r outer, mu_t inner) sweep over feasible points."""
    if mode not in SWEEP_MODES:
        raise InputError(f"mode must be one of {SWEEP_MODES}")
    names = {
        "upper": ["tau_upper"],
        "lower": ["tau_l1", "tau_l2"],
        "gap": ["tau_upper", "tau_l1", "tau_l2", "gap"],
        "regions": ["tau_upper", "tau_l1", "tau_l2", "gap"],
    }[mode]
    cls = None
    if mode == "regions":
        cls = _classifier(cfg)
        if cls is None:
            raise InputError("region labels exist only for 2x2 and 3x3 networks")
    header = ["mu_r", "mu_t"] + names + (["region"] if cls else [])
    header += [f"{n}_exact" for n in ["mu_r", "mu_t"] + names]
    grid = _grid(step)
    rows = []
    for mu_r in grid:
        for mu_t in grid:
            pt = CachePoint(mu_r, mu_t)
            if not feasible_cache_point(cfg, pt):
                continue
            vals = {}
            if mode in ("upper", "gap", "regions"):
                vals["tau_upper"], _ = ndt_upper(cfg, pt)
            if mode in ("lower", "gap", "regions"):
                vals["tau_l1"], _ = ndt_lower_coded(cfg, pt)
                vals["tau_l2"], _ = ndt_lower_uncoded(cfg, pt)
            if mode in ("gap", "regions"):
                vals["gap"], _ = gap(cfg, pt, vals["tau_upper"])
            exact = [mu_r, mu_t] + [vals[n] for n in names]
            row = [decimal12(v) for v in exact]
            if cls:
                row.append(str(cls[0](pt)))
            row += [str(v) for v in exact]
            rows.append(row)
    return header, rows


def _rows_json(header, rows) -> str:
    return _dump([dict(zip(header, r)) for r in rows])


def cmd_sweep(args) -> int:
    cfg = _config(args)
    header, rows = sweep_rows(cfg, args.step, args.mode)
    _write(_rows_json(header, rows) if args.json else _csv_text(header, rows), args.out)
    return EXIT_OK


def region_rows(cfg: NetworkConfig, step: Fraction):
    cls = _classifier(cfg)
    if cls is None:
        raise InputError("closed-form regions exist only for 2x2 and 3x3 networks")
    classify, closed = cls
    header = ["mu_r", "mu_t", "region", "tau", "mu_r_exact", "mu_t_exact", "tau_exact"]
    rows = []
    for mu_r in _grid(step):
        for mu_t in _grid(step):
            pt = CachePoint(mu_r, mu_t)
            if not feasible_cache_point(cfg, pt):
                continue
            tau = closed(pt)
            rows.append([decimal12(mu_r), decimal12(mu_t), str(classify(pt)), decimal12(tau),
                         str(mu_r), str(mu_t), str(tau)])
    return header, rows


def cmd_regions(args) -> int:
    cfg = _config(args)
    header, rows = region_rows(cfg, args.step)
    _write(_rows_json(header, rows) if args.json else _csv_text(header, rows), args.out)
    return EXIT_OK


# -- simulate --------------------------------------------------------------------

def _load_ratios(path: str) -> SplitRatios:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return SplitRatios({k: to_fraction(v) for k, v in raw.items()})
    except (ValueError, TypeError, AttributeError) as exc:
        raise InputError(f"bad ratios file {path}: {exc}") from exc


def simulation_json(cfg, res) -> dict:
    groups = {}
    for key, acct in res.account.per_group.items():
        groups[str(key)] = {
            "messages_total": res.message_counts[key],
            "messages_per_receiver": acct.messages_per_receiver,
            "group_ndt": rational_json(acct.group_ndt),
        }
    return {
        "n_tx": cfg.n_tx,
        "n_rx": cfg.n_rx,
        "n_files": cfg.n_files,
        "file_size_bits": res.file_size_bits,
        "ratios": {str(k): rational_json(v) for k, v in res.ratios.items()},
        "demand": list(res.demand),
        "groups": groups,
        "total_ndt": rational_json(res.account.total_ndt),
        "all_decoded": res.all_decoded,
        "receivers": [
            {"receiver": v.receiver, "file": v.file_id, "decoded": v.success, "failure": v.failure}
            for v in res.verdicts
        ],
    }


def cmd_simulate(args) -> int:
    cfg = _config(args)
    pt = _point(cfg, args)
    ratios = _load_ratios(args.ratios) if args.ratios else None
    try:
        res = simulate(cfg, pt, ratios, seed=args.seed)
    except PlacementError as exc:
        raise InputError(str(exc)) from exc
    _write(_dump(simulation_json(cfg, res)), args.out)
    return EXIT_OK if res.all_decoded else EXIT_DECODE


# -- verify-phy ----------------------------------------------------------------------

def verify_phy(cfg: NetworkConfig, r: int, t: int, case: str, n: int, seeds: Sequence[int]) -> dict:
    """Build and verify one construction over several channel seeds; JSON-ready summary."""
    builders = {
        "A": lambda s: build_case_a(cfg, r, t, s),
        "B": lambda s: build_case_b(cfg, r, t, n, s),
        "C": lambda s: build_case_c(cfg, r, t, n, s),
    }
    if case not in builders:
        raise InputError("case must be A, B or C")
    reports = [verify_scheme(builders[case](s), symbol_seed=s) for s in seeds]
    first = reports[0]
    failures = [f"seed {s}: {msg}" for s, rep in zip(seeds, reports) for msg in rep.failures]
    return {
        "n_tx": cfg.n_tx,
        "n_rx": cfg.n_rx,
        "r": r,
        "t": t,
        "case": first.case.value,
        "N": n if first.case in (SchemeCase.B, SchemeCase.C_T_LESS) else None,
        "seeds": list(seeds),
        "slots": first.slots,
        "desired_per_receiver": first.desired_per_receiver,
        "finite_dof": rational_json(first.finite_dof),
        "limit_dof": rational_json(first.limit_dof),
        "closed_form_dof": rational_json(per_user_dof(cfg, r, t).per_user),
        "max_residual": max(rep.max_residual for rep in reports),
        "min_rank_ratio": min(rep.min_rank_ratio for rep in reports),
        "max_decode_error": max(rep.max_decode_error for rep in reports),
        "max_alignment_error": max(rep.max_alignment_error for rep in reports),
        "membership_ok": all(rep.membership_ok for rep in reports),
        "passed": not failures,
        "failures": failures,
    }


def cmd_verify_phy(args) -> int:
    cfg = _config(args)
    if args.seeds < 1:
        raise InputError("--seeds must be at least 1")
    seeds = list(range(args.seed, args.seed + args.seeds))
    try:
        summary = verify_phy(cfg, args.r, args.t, args.case, args.N, seeds)
    except (GuardError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    _write(_dump(summary), args.out)
    return EXIT_OK if summary["passed"] else EXIT_PHY


# -- dof-table --------------------------------------------------------------------

def cmd_dof_table(args) -> int:
    cfg = _config(args)
    header = ["r", "t", "case", "per_user", "sum_dof", "best_t_prime", "per_user_exact", "sum_dof_exact"]
    rows = []
    for e in dof_table(cfg):
        sd = sum_dof(cfg, e.r, e.t)
        rows.append([e.r, e.t, e.case.value, decimal12(e.per_user), decimal12(sd),
                     "" if e.best_t_prime is None else e.best_t_prime,
                     str(e.per_user), str(sd)])
    _write(_rows_json(header, rows) if args.json else _csv_text(header, rows), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cachendt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def network(p, need_cache=False):
        p.add_argument("--nt", type=int, required=True, help="number of transmitters")
        p.add_argument("--nr", type=int, required=True, help="number of receivers")
        p.add_argument("--l", type=int, default=None, help="library size (default: --nr)")
        if need_cache:
            p.add_argument("--mur", type=_rational_arg, required=True, help="receiver cache size")
            p.add_argument("--mut", type=_rational_arg, required=True, help="transmitter cache size")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--json", action="store_true", help="JSON instead of CSV where both exist")

    p = sub.add_parser("compute", help="bounds, ratios and gap at one cache point (JSON)")
    network(p, need_cache=True)
    p.add_argument("--uncoded", action="store_true",
                   help="cache contents restricted to uncoded pieces (enables optimality case 4)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="bounds over a rational grid (CSV)")
    network(p)
    p.add_argument("--step", type=_rational_arg, default=Fraction(1, 24))
    p.add_argument("--mode", choices=SWEEP_MODES, default="gap")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("regions", help="closed-form region map for 2x2 or 3x3 (CSV)")
    network(p)
    p.add_argument("--step", type=_rational_arg, default=Fraction(1, 24))
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("simulate", help="bit-level placement and delivery (JSON)")
    network(p, need_cache=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratios", default=None, help='JSON file mapping "r,t" to "p/q"')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-phy", help="numerical precoder checks (JSON)")
    network(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--case", choices=("A", "B", "C"), required=True)
    p.add_argument("--N", type=int, default=1, help="alignment order for cases B and C")
    p.add_argument("--seed", type=int, default=0, help="first channel seed")
    p.add_argument("--seeds", type=int, default=20, help="number of consecutive seeds")
    p.set_defaults(func=cmd_verify_phy)

    p = sub.add_parser("dof-table", help="per-user and sum DoF for every (r, t) (CSV)")
    network(p)
    p.set_defaults(func=cmd_dof_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InfeasibleCachePoint) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
