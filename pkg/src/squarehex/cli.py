"""Command line entry point: ``squarehex <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from .segment_sieve import (
    DEFAULT_SEGMENT_LEN,
    Checkpoint,
    default_workers,
    rows_to_csv,
    sample_points_powers_of_two,
    stderr_progress,
    verify_conjectures,
)

log = logging.getLogger("squarehex")


@dataclass
class RunConfig:
    command: str
    x_max: Optional[int] = None
    segment_len: int = DEFAULT_SEGMENT_LEN
    workers: int = 1
    digits: int = 30
    bound: Optional[int] = None
    output_format: str = "json"
    checkpoint_path: Optional[Path] = None
    resume: bool = False

    def validate(self) -> None:
        if self.x_max is not None and self.x_max < 1:
            raise ValueError("x-max must be positive")
        if self.segment_len < 16:
            raise ValueError("segment-len must be at least 16")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if not 1 <= self.digits <= 1000:
            raise ValueError("digits must lie in [1, 1000]")
        if self.output_format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.resume and self.checkpoint_path is None:
            raise ValueError("--resume needs --checkpoint")


def _int(text: str) -> int:
    """Accept 1e9, 2^26 and plain integers."""
    t = text.strip().replace("_", "")
    if "^" in t:
        a, b = t.split("^")
        return int(a) ** int(b)
    if "e" in t.lower():
        v = float(t)
        if v != int(v):
            raise argparse.ArgumentTypeError(f"not an integer: {text}")
        return int(v)
    return int(t)


def _emit(obj, fmt: str = "json") -> None:
    if fmt == "json":
        json.dump(obj, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(obj)


def _fail(kind: str, **detail) -> int:
    rec = {"schema": 1, "kind": "failure", "command": kind}
    rec.update(detail)
    sys.stderr.write(json.dumps(rec) + "\n")
    return 1


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=ns.command,
        x_max=getattr(ns, "x_max", None),
        segment_len=getattr(ns, "segment_len", DEFAULT_SEGMENT_LEN),
        workers=default_workers() if getattr(ns, "workers", None) is None else ns.workers,
        digits=getattr(ns, "digits", 30),
        bound=getattr(ns, "bound", None),
        output_format=getattr(ns, "format", "json"),
        checkpoint_path=getattr(ns, "checkpoint", None),
        resume=getattr(ns, "resume", False),
    )
    cfg.validate()
    return cfg


# --- sieve commands ------------------------------------------------------------

def _run_verify(ns, cfg: RunConfig, samples: Optional[Sequence[int]] = None):
    ck = None
    if cfg.checkpoint_path is not None:
        ck = Checkpoint(cfg.checkpoint_path, ns.checkpoint_format)
    progress = stderr_progress(cfg.x_max) if ns.progress else None
    return verify_conjectures(cfg.x_max, cfg.segment_len, cfg.workers, samples=samples,
                              checkpoint=ck, resume=cfg.resume, progress=progress)


def cmd_verify(ns) -> int:
    cfg = _config(ns)
    rep = _run_verify(ns, cfg)
    if cfg.output_format == "csv":
        _emit(rows_to_csv(rep.table_rows, ns.decimals), "csv")
    else:
        out = rep.to_json()
        out["rows"] = [_row_json(r) for r in rep.table_rows]
        if rep.totals.count1 == rep.totals.count3:
            out["note"] = "B1 equals B3 at x_max"
        _emit(out)
    if not rep.ok:
        return _fail("verify", counterexamples=[[x, w] for x, w in rep.counterexamples[:100]])
    return 0


def _row_json(r) -> dict:
    return {"x": r.x, "B1": r.B1, "B3": r.B3, "lambda1": repr(r.lambda1),
            "lambda3": repr(r.lambda3), "mu1": repr(r.mu1), "mu3": repr(r.mu3)}


def cmd_table1(ns) -> int:
    from .reference import TABLE1

    ns.x_max = ns.x_max or 2 ** 26
    cfg = _config(ns)
    rep = _run_verify(ns, cfg, sample_points_powers_of_two(cfg.x_max))
    mism = []
    for r in rep.table_rows:
        ref = TABLE1.get(r.x)
        if ref is not None and (r.B1, r.B3) != ref:
            mism.append({"x": r.x, "computed": [r.B1, r.B3], "reference": list(ref)})
    if cfg.output_format == "csv":
        _emit(rows_to_csv(rep.table_rows, ns.decimals), "csv")
    else:
        _emit({"schema": 1, "kind": "table1", "x_max": cfg.x_max,
               "rows": [{"x": r.x, "B1": r.B1, "B3": r.B3,
                         "matches_reference": TABLE1.get(r.x) == (r.B1, r.B3) if r.x in TABLE1 else None}
                        for r in rep.table_rows],
               "mismatches": mism, "ok": rep.ok and not mism})
    if mism or not rep.ok:
        return _fail("table1", mismatches=mism)
    return 0


def table2_points(x_max: int) -> List[int]:
    """j * 10^k for j in 1, 1.5, 2, ..., 10 at the largest k that fits, plus smaller decades."""
    pts = set()
    k = 1
    while 10 ** k <= x_max:
        base = 10 ** (k - 1)
        for j2 in (2, 3, 4, 6, 8, 10, 12, 14, 16, 18, 20):
            v = j2 * base * 10 // 2
            if v <= x_max:
                pts.add(v)
        k += 1
    return sorted(pts)


def cmd_table2(ns) -> int:
    from decimal import Decimal

    from .reference import ALT_W, TABLE2

    ns.x_max = ns.x_max or 10 ** 9
    cfg = _config(ns)
    rep = _run_verify(ns, cfg, table2_points(cfg.x_max))
    rows, mism, flags = [], [], []
    for r in rep.table_rows:
        d = _row_json(r)
        ref = TABLE2.get(r.x)
        if ref is not None:
            l1, l3, b1, b3 = ref
            good = (abs(Decimal(repr(r.lambda1)) - Decimal(l1)) <= Decimal("0.5")
                    and abs(Decimal(repr(r.lambda3)) - Decimal(l3)) <= Decimal("0.5")
                    and (r.B1, r.B3) == (b1, b3))
            d["matches_reference"] = good
            if not good:
                mism.append(r.x)
        if r.x in ALT_W and ALT_W[r.x] != r.B1:
            flags.append({"x": r.x, "B1": r.B1, "other_published": ALT_W[r.x]})
        rows.append(d)
    if cfg.output_format == "csv":
        _emit(rows_to_csv(rep.table_rows, ns.decimals), "csv")
    else:
        _emit({"schema": 1, "kind": "table2", "x_max": cfg.x_max, "rows": rows,
               "flags": flags, "mismatches": mism, "ok": rep.ok and not mism})
    if mism or not rep.ok:
        return _fail("table2", mismatches=mism)
    return 0


# --- prime power sums -----------------------------------------------------------

def _forms(which: str):
    from .repr_core import B1, B3

    return {"1": [B1], "3": [B3], "both": [B1, B3]}[which]


def cmd_hmax(ns) -> int:
    from .chebyshev import EventTable, h_extrema

    out = []
    for fc in _forms(ns.form):
        t = EventTable.build(fc, ns.bound)
        out.append(h_extrema(fc, ns.bound, t).to_json())
        if ns.csv:
            Path(f"{ns.csv}_{fc.name}.csv").write_text(t.to_csv())
    _emit({"schema": 1, "kind": "hmax", "results": out})
    return 0


def cmd_envelopes(ns) -> int:
    from .chebyshev import check_envelopes

    rep = check_envelopes(ns.x_max)
    _emit(rep.to_json())
    return 0 if rep.ok else _fail("envelopes", checks=[c.to_json() for c in rep.checks if not c.ok])


# --- constants and bounds ------------------------------------------------------

def cmd_constants(ns) -> int:
    from .constants import compute_constants
    from .reference import CONSTANTS

    cs = compute_constants(ns.digits + 10)
    d = cs.to_dict(ns.digits)
    if ns.json:
        _emit({"schema": 1, "kind": "constants", "digits": ns.digits, "constants": d})
    else:
        for k, v in d.items():
            print(f"{k:15s} {v['value']}  ({v['certified_digits']} digits)")
    # agreement with the published digits, to the shorter of the two
    bad = []
    for k, ref in CONSTANTS.items():
        got = d[k]["value"]
        n = min(len(ref), len(got)) - 1
        if got[:n] != ref[:n]:
            bad.append(k)
    return _fail("constants", disagree=bad) if bad else 0


def cmd_bounds_chain(ns) -> int:
    from .bounds import theorem7_chain

    rep = theorem7_chain(ns.x0, ns.iters)
    _emit(rep.to_dict())
    if not rep.ok:
        return _fail("bounds chain", failing=[l.name for l in rep.failing()])
    return 0


def cmd_bounds_iterate(ns) -> int:
    from .bounds import tilde_iteration

    out = [tilde_iteration(fc, ns.x0, ns.iters).to_dict() for fc in _forms(ns.form)]
    _emit({"schema": 1, "kind": "iterate", "traces": out})
    return 0


def cmd_bounds_threshold(ns) -> int:
    from .bounds import conjecture3_threshold
    from .segment_sieve import verify_conjectures as vc

    x = conjecture3_threshold()
    rep = vc(x, workers=1, samples=[])
    _emit({"schema": 1, "kind": "mu_threshold", "analytic_threshold": x,
           "exact_scan_ok": rep.conjecture3_ok})
    return 0 if rep.conjecture3_ok else _fail("bounds threshold")


# --- elementary route ----------------------------------------------------------

def cmd_selberg_check(ns) -> int:
    from .selberg import functional_terms

    out = [functional_terms(ns.x, fc.j).to_dict() for fc in _forms(ns.form)]
    bad = [o for o in out if float(o["residual"]) > 1e-9 * ns.x]
    _emit({"schema": 1, "kind": "functional", "results": out, "ok": not bad})
    return _fail("selberg check") if bad else 0


def cmd_selberg_explicit(ns) -> int:
    from .selberg import explicit_bound_check

    rep = explicit_bound_check(ns.x_max)
    _emit(rep.to_dict())
    return 0 if rep.ok else _fail("selberg explicit", first_violation=rep.first_violation)


def cmd_selberg_osc(ns) -> int:
    import numpy as np

    from .selberg import F_OSC, G_OSC, osc_eval, osc_sup, osc_sup_closed_form

    out = {}
    for w in (F_OSC, G_OSC):
        loc, val = osc_sup(w)
        out[w.which.value] = {"sup_location": loc, "sup": repr(val),
                              "closed_form": repr(osc_sup_closed_form(w))}
    if ns.csv:
        zs = np.linspace(1.0, 20.0, 3801)
        lines = ["z,f,g"] + [f"{z!r},{osc_eval(z, F_OSC)!r},{osc_eval(z, G_OSC)!r}" for z in zs.tolist()]
        Path(ns.csv).write_text("\n".join(lines) + "\n")
    _emit({"schema": 1, "kind": "oscillation", "results": out})
    return 0


def cmd_crossover(ns) -> int:
    from .selberg import crossover

    v = crossover(ns.k1, ns.k3)
    _emit({"schema": 1, "kind": "crossover", "k1": ns.k1, "k3": ns.k3,
           "log10_x": "inf" if v == float("inf") else repr(v),
           "derivation": "log x >= ((k1 + k3)/(C_b1 - C_b3))^2"})
    return 0


# --- parser --------------------------------------------------------------------

def _sieve_opts(p: argparse.ArgumentParser, default_x: Optional[int]) -> None:
    p.add_argument("--x-max", type=_int, default=default_x)
    p.add_argument("--segment-len", type=_int, default=DEFAULT_SEGMENT_LEN)
    p.add_argument("--workers", type=int, default=None,
                   help="thread count (default: SQUAREHEX_WORKERS or the core count)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--decimals", type=int, choices=(3, 15), default=3)
    p.add_argument("--checkpoint", type=Path)
    p.add_argument("--checkpoint-format", choices=("binary", "json"), default="binary")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--progress", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="squarehex",
                                 description="Square versus hexagonal lattice counting checks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="scan [1, x] checking the three counting inequalities")
    _sieve_opts(p, 10 ** 9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table1", help="counts at powers of two against the reference table")
    _sieve_opts(p, None)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("table2", help="lambda and counts at j*10^k sample points")
    _sieve_opts(p, None)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("hmax", help="maximum of the weighted prime-power sum minus log sqrt(x)")
    p.add_argument("--bound", type=_int, default=10 ** 6)
    p.add_argument("--form", choices=("1", "3", "both"), default="both")
    p.add_argument("--csv", help="write n,Lambda,psi,H rows to <prefix>_<form>.csv")
    p.set_defaults(func=cmd_hmax)

    p = sub.add_parser("envelopes", help="linear and piecewise envelopes for psi")
    p.add_argument("--x-max", type=_int, default=10 ** 7)
    p.set_defaults(func=cmd_envelopes)

    p = sub.add_parser("constants", help="high precision constants")
    p.add_argument("--digits", type=int, default=30)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bounds", help="effective sandwich bounds")
    bsub = p.add_subparsers(dest="bounds_command", required=True)
    q = bsub.add_parser("chain", help="final inequality chain at x0")
    q.add_argument("--x0", type=float, default=1.5e11)
    q.add_argument("--iters", type=int, default=8)
    q.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    q.set_defaults(func=cmd_bounds_chain)
    q = bsub.add_parser("iterate", help="bootstrap of the lower constant")
    q.add_argument("--x0", type=float, default=1e9)
    q.add_argument("--iters", type=int, default=8)
    q.add_argument("--form", choices=("1", "3", "both"), default="both")
    q.set_defaults(func=cmd_bounds_iterate)
    q = bsub.add_parser("threshold", help="point past which mu_b1 >= mu_b3 analytically")
    q.set_defaults(func=cmd_bounds_threshold)

    p = sub.add_parser("selberg", help="elementary functional equation route")
    ssub = p.add_subparsers(dest="selberg_command", required=True)
    q = ssub.add_parser("check", help="both sides of the functional equation at x")
    q.add_argument("--x", type=_int, default=10 ** 4)
    q.add_argument("--form", choices=("1", "3", "both"), default="both")
    q.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    q.set_defaults(func=cmd_selberg_check)
    q = ssub.add_parser("explicit", help="explicit error bounds against exact counts")
    q.add_argument("--x-max", type=_int, default=10 ** 6)
    q.set_defaults(func=cmd_selberg_explicit)
    q = ssub.add_parser("osc", help="suprema of the oscillating functions")
    q.add_argument("--csv", help="write z,f,g samples on [1, 20]")
    q.set_defaults(func=cmd_selberg_osc)

    p = sub.add_parser("crossover", help="log10 of the point where the explicit bounds separate")
    p.add_argument("--k1", type=float, default=9.62)
    p.add_argument("--k3", type=float, default=8.53)
    p.set_defaults(func=cmd_crossover)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        _config(ns)
        return ns.func(ns)
    except (ValueError, RuntimeError) as exc:
        return _fail(ns.command, error=str(exc))


if __name__ == "__main__":
    sys.exit(main())
