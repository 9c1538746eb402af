"""Command-line harness: reproducible experiments over the library.

Subcommands
-----------
count           exact progression count, main term, error, error-shape ratio
norms           Gowers norms of a chosen function
weil-scan       monomial character-sum sweep against the square-root bound
base-scan       base-case averages (value, main term, sqrt(q)-scaled error)
extremal        progression-free search ledger (both degeneracy policies)
decompose       structured/small/uniform split with certified budgets
schedule        delta schedule, exponent sign report, bound recursion
cs-check        Cauchy-Schwarz projection inequality on random instances
verify-theorem  empirical main-term/error sweep across primes
acceptance      the full numbered acceptance suite

Conventions shared by every subcommand:

* output is JSON lines (`--out`, default stdout); some commands add a CSV
  export (`--csv`);
* every record carries `"schema": 1`, the tool version, the subcommand,
  the effective config, and the seed actually used (auto-generated and
  recorded when not supplied);
* identical config + seed reproduce identical output except for the
  wall-clock `ms` fields;
* `--config file.json` supplies defaults for any long flag (dashes as
  underscores); explicit flags win;
* exit status: 0 success, 1 usage or input errors, 2 when a checked
  property or bound fails (a machine-readable `failures` record is
  emitted before exiting).

Set sources (`--set`): `random:DENSITY[:seedN]`, `explicit:i,j,k`,
`file:PATH` (JSON array of element indices), or `all`.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .counting import base_case_report, count_progressions, lambda_average
from .decomposition import (budget, budget_from_schedule,
                            u2_threshold_decompose, verify_decomposition)
from .errors import FFProgError, ThresholdViolation
from .extremal import build_hypergraph, r_exact, r_lower_random
from .field import make_field
from .functions import (balanced_indicator, dense_function, indicator,
                        random_one_bounded, two_var_function)
from .gowers import (check_cs_inequality, gowers_norm, gowers_u2_via_fourier,
                     u2_dual_upper_bound)
from .polys import parse_poly, progression_system, render_poly
from .rng import SplitMix64, derive_seed
from .schedule import (bound_recursion, budget_condition, delta_schedule,
                       exponent_negativity, initial_state)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


class Ledger:
    """JSON-lines sink with immediate flush (plus optional CSV)."""

    def __init__(self, out_path: str | None, csv_path: str | None = None,
                 csv_columns=None):
        self._own = out_path not in (None, "-")
        self._fh = open(out_path, "w") if self._own else sys.stdout
        self._csv_fh = None
        self._csv = None
        if csv_path:
            self._csv_fh = open(csv_path, "w", newline="")
            self._csv = csv.writer(self._csv_fh)
            if csv_columns:
                self._csv.writerow(csv_columns)

    def write(self, record: dict):
        self._fh.write(json.dumps(record, separators=(", ", ": ")) + "\n")
        self._fh.flush()

    def csv_row(self, row):
        if self._csv is not None:
            self._csv.writerow(row)
            self._csv_fh.flush()

    def close(self):
        if self._own:
            self._fh.close()
        if self._csv_fh is not None:
            self._csv_fh.close()


def _envelope(args, seed: int, command: str) -> dict:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "config") and v is not None}
    return {"schema": 1, "tool": "ffprog", "version": __version__,
            "command": command, "config": config, "seed": seed}


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int.from_bytes(os.urandom(8), "big")


def _parse_set(source: str, q: int, seed: int):
    """Resolve a set source string to a sorted list of element indices."""
    if source == "all":
        return list(range(q)), {"source": "all"}
    kind, _, rest = source.partition(":")
    if kind == "random":
        density_s, _, seed_s = rest.partition(":")
        density = float(density_s)
        if seed_s:
            if not seed_s.startswith("seed"):
                raise FFProgError(f"bad set source {source!r}")
            seed = int(seed_s[4:])
        rng = SplitMix64(derive_seed(seed, 0x5E7))
        return sorted(rng.subset(q, density)), {
            "source": "random", "density": density, "set_seed": seed}
    if kind == "explicit":
        idx = sorted({int(t) for t in rest.split(",") if t != ""})
        if idx and not 0 <= idx[0] <= idx[-1] < q:
            raise FFProgError(f"set indices out of range for q={q}")
        return idx, {"source": "explicit"}
    if kind == "file":
        with open(rest) as fh:
            idx = sorted({int(v) for v in json.load(fh)})
        if idx and not 0 <= idx[0] <= idx[-1] < q:
            raise FFProgError(f"set indices out of range for q={q}")
        return idx, {"source": "file", "path": rest}
    raise FFProgError(f"unknown set source {source!r}")


def _make_function(kind: str, field, set_source: str, seed: int):
    if kind in ("indicator", "balanced"):
        idx, echo = _parse_set(set_source, field.q, seed)
        fn = (indicator if kind == "indicator" else balanced_indicator)(
            field, idx)
        return fn, {"fn": kind, **echo, "set_size": len(idx)}
    rng = SplitMix64(derive_seed(seed, 0xF0))
    if kind == "disk":
        return random_one_bounded(field, rng), {"fn": "disk"}
    if kind == "phase":
        vals = np.exp(2j * np.pi *
                      np.array([rng.random() for _ in range(field.q)]))
        return dense_function(field, vals), {"fn": "phase"}
    if kind == "spike":
        a = 1 + rng.randrange(field.q - 1)
        eps = 0.01 + 0.03 * rng.random()
        noise = np.exp(2j * np.pi *
                       np.array([rng.random() for _ in range(field.q)]))
        vals = field.character_matrix()[a] + eps * noise
        vals = vals / np.sqrt(np.mean(np.abs(vals) ** 2))
        return dense_function(field, vals), {"fn": "spike", "character": a}
    raise FFProgError(f"unknown function kind {kind!r}")


def _jobs_default() -> int:
    env = os.environ.get("FFPROG_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _pmap(fn, items, jobs: int):
    """Order-preserving map, optionally across processes."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def _primes(lo: int, hi: int):
    out = []
    for n in range(max(lo, 2), hi + 1):
        i = 2
        while i * i <= n:
            if n % i == 0:
                break
            i += 1
        else:
            out.append(n)
    return out


def _fail_exit(ledger: Ledger, failures: list) -> int:
    ledger.write({"schema": 1, "record": "failures", "failures": failures})
    return 2


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _cmd_count(args) -> int:
    seed = _resolve_seed(args)
    field = make_field(args.p, args.k)
    system = progression_system([s.strip() for s in args.polys.split(",")])
    idx, echo = _parse_set(args.set, field.q, seed)
    n = len(idx)
    count = count_progressions(system, idx, y_rule=args.y_rule, field=field)
    q = field.q
    ys = q if args.y_rule == "all" else q - 1
    m1 = system.m1
    main = n ** (m1 + 1) / q ** (m1 - 1) * (ys / q)
    err = count - main
    bc_ratio = abs(err) / (n ** 1.5 * q ** 0.4) if n else 0.0
    ledger = Ledger(args.out)
    rec = _envelope(args, seed, "count")
    rec.update({"system": str(system), "p": field.p, "k": field.k,
                "set": echo, "set_size": n, "y_rule": args.y_rule,
                "count": count, "main_term": main, "error": err,
                "bc_ratio": bc_ratio})
    ledger.write(rec)
    ledger.close()
    return 0


def _cmd_norms(args) -> int:
    seed = _resolve_seed(args)
    field = make_field(args.p, args.k)
    f, echo = _make_function(args.fn, field, args.set, seed)
    val = gowers_norm(f, args.s)
    rec = _envelope(args, seed, "norms")
    rec.update({"p": field.p, "k": field.k, **echo, "s": args.s,
                "value": val.value, "raw_power": val.raw_power})
    if args.s == 2:
        rec["fourier_value"] = gowers_u2_via_fourier(f).value
        rec["dual_upper_bound"] = u2_dual_upper_bound(f)
    ledger = Ledger(args.out)
    ledger.write(rec)
    ledger.close()
    return 0


def _weil_cell(cell):
    p, coeffs = cell
    red = [c % p for c in coeffs]
    d = max((i for i, c in enumerate(red) if c), default=0)
    if d < 1:
        return {"p": p, "degree": d, "max_scaled": None, "bound": None,
                "within": None, "note": "degenerate modulo p"}
    y = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in reversed(red):
        vals = (vals * y + c) % p
    counts = np.bincount(vals, minlength=p)
    omega = np.exp(2j * np.pi * np.arange(p) / p)
    phase = (np.arange(p)[:, None] * np.arange(p)[None, :]) % p
    sums = (omega[phase] @ counts) / p
    max_scaled = float(np.abs(sums[1:]).max() * math.sqrt(p))
    return {"p": p, "degree": d, "max_scaled": max_scaled,
            "bound": float(d - 1),
            "within": bool(max_scaled <= (d - 1) + 1e-12 * math.sqrt(p))}


def _cmd_weil_scan(args) -> int:
    seed = _resolve_seed(args)
    poly = parse_poly(args.poly)
    cells = [(p, poly.coeffs) for p in _primes(args.pmin, args.pmax)]
    rows = _pmap(_weil_cell, cells, args.jobs)
    ledger = Ledger(args.out, args.csv, ["p", "max_scaled", "bound"])
    head = _envelope(args, seed, "weil-scan")
    failures = []
    for row in rows:
        rec = dict(head)
        rec.update(row)
        ledger.write(rec)
        if row["within"] is not None:
            ledger.csv_row([row["p"], row["max_scaled"], row["bound"]])
            if not row["within"]:
                failures.append({"p": row["p"], "max_scaled": row["max_scaled"],
                                 "bound": row["bound"]})
    code = _fail_exit(ledger, failures) if failures else 0
    ledger.close()
    return code


def _cmd_base_scan(args) -> int:
    seed = _resolve_seed(args)
    p1 = parse_poly(args.p1)
    qs = ([parse_poly(s.strip()) for s in args.qs.split(",")]
          if args.qs else [])
    psi = ([int(t) for t in args.psi.split(",")] if args.psi
           else [0] * len(qs))
    ledger = Ledger(args.out)
    head = _envelope(args, seed, "base-scan")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore" if args.quiet_warnings else "default")
        for p in _primes(args.pmin, args.pmax):
            field = make_field(p)
            for trial in range(args.trials):
                rng = SplitMix64(derive_seed(seed, p, trial))
                f0 = indicator(field, rng.subset(p, args.density))
                f1 = indicator(field, rng.subset(p, args.density))
                rep = base_case_report(p1, qs, [f0, f1], psi)
                rec = dict(head)
                rec.update({"p": p, "trial": trial,
                            "value_re": rep.value.real,
                            "value_im": rep.value.imag,
                            "main_re": rep.main_term.real,
                            "main_im": rep.main_term.imag,
                            "abs_error": abs(rep.error),
                            "sqrt_q_error": rep.sqrt_q_error,
                            "trivial_twist": rep.trivial_twist})
                ledger.write(rec)
    ledger.close()
    return 0


def _cmd_extremal(args) -> int:
    seed = _resolve_seed(args)
    polys = [s.strip() for s in args.polys.split(",")]
    system = progression_system(polys)
    policies = (["paper_literal", "distinct_points"] if args.degeneracy == "both"
                else [args.degeneracy])
    ps = [int(t) for t in args.p.split(",")]
    ledger = Ledger(args.out, args.csv, ["q", "r", "exact", "gamma_point"])
    head = _envelope(args, seed, "extremal")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for p in ps:
            field = make_field(p, args.k)
            for policy in policies:
                hg = build_hypergraph(system, field, y_rule=args.y_rule,
                                      degeneracy=policy)
                if args.method == "exact":
                    res = r_exact(hg, node_budget=args.node_budget)
                else:
                    res = r_lower_random(hg, args.iters,
                                         derive_seed(seed, p))
                rec = dict(head)
                rec.update({"system": str(system), "p": field.p, "k": field.k,
                            "policy": policy, "r": res.r, "exact": res.exact,
                            "witness": list(res.witness_indices),
                            "seed": res.seed if res.seed is not None else seed,
                            "nodes": res.nodes_explored,
                            "ms": int(res.wall_time * 1000)})
                ledger.write(rec)
                if policy == policies[0]:
                    gamma_point = ""
                    if res.exact and res.r >= 1 and field.q > 1:
                        gamma_point = 1.0 - math.log(res.r) / math.log(field.q)
                    ledger.csv_row([field.q, res.r, res.exact, gamma_point])
    ledger.close()
    return 0


def _budget_from_args(args):
    if args.deltas:
        parts = [Fraction(t.strip()) for t in args.deltas.split(",")]
        if len(parts) != 4:
            raise FFProgError("--deltas needs four comma-separated rationals")
        return budget(*parts, s=args.s)
    params = delta_schedule(args.s, Fraction(args.beta), Fraction(args.gamma))
    return budget_from_schedule(params, args.ell if args.ell else args.s)


def _cmd_decompose(args) -> int:
    seed = _resolve_seed(args)
    field = make_field(args.p, args.k)
    bud = _budget_from_args(args)
    f, echo = _make_function(args.fn, field, args.set, seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore" if args.quiet_warnings else "default")
        res = u2_threshold_decompose(f, bud)
        ver = verify_decomposition(f, res.fa, res.fb, res.fc, bud,
                                   dual_upper=res.certificates.dual_bound)
    th = bud.thresholds(field.q)
    ledger = Ledger(args.out)
    rec = _envelope(args, seed, "decompose")
    rec.update({"p": field.p, "k": field.k, **echo,
                "deltas": [str(d) for d in bud.deltas],
                "thresholds": list(th), "tau": res.tau,
                "producer_status": res.status, "verifier_status": ver.status,
                "certificates": {
                    "dual_bound": ver.certificates.dual_bound,
                    "l1_fb": ver.certificates.l1_fb,
                    "linf_fc": ver.certificates.linf_fc,
                    "usnorm_fc": ver.certificates.usnorm_fc},
                "diagnostics": ver.diagnostics})
    ledger.write(rec)
    code = 0
    if ver.status == "failed":
        code = _fail_exit(ledger, [{"check": "decomposition",
                                    "diagnostics": ver.diagnostics}])
    ledger.close()
    return code


def _cmd_schedule(args) -> int:
    seed = _resolve_seed(args)
    params = delta_schedule(args.s, Fraction(args.beta), Fraction(args.gamma))
    q = float(args.q)
    neg = exponent_negativity(params)
    levels = []
    for ell in range(2, args.s + 1):
        d = params.level_deltas(ell)
        bc = budget_condition(d, q)
        levels.append({"ell": ell, "deltas": [str(x) for x in d],
                       "deltas_float": [float(x) for x in d],
                       "budget_lhs": bc.lhs, "budget_ok": bc.ok})
    gp = Fraction(args.gamma_prime) if args.gamma_prime else None
    rec_state = bound_recursion(params, initial_state(params), q,
                                gamma_prime=gp, c2_prime=args.c2)
    final = rec_state.states[-1]
    ledger = Ledger(args.out)
    rec = _envelope(args, seed, "schedule")
    rec.update({
        "s": args.s, "beta": str(params.beta), "gamma": str(params.gamma),
        "levels": levels,
        "negativity": {
            "all_ok": neg.all_ok,
            "checks": [{"family": c.family, "j": c.j,
                        "exponent": str(c.exponent),
                        "ceiling": str(c.ceiling), "ok": c.ok}
                       for c in neg.checks]},
        "recursion": {"final_ell": final.ell, "b1": final.b1,
                      "b2": str(final.b2), "b3": final.b3,
                      "final_coeff": rec_state.final_coeff,
                      "u1_exponent": str(rec_state.u1_exponent),
                      "constants_dropped": rec_state.constants_dropped}})
    ledger.write(rec)
    code = 0
    if not neg.all_ok:
        bad = [{"family": c.family, "j": c.j, "exponent": str(c.exponent),
                "ceiling": str(c.ceiling)} for c in neg.checks if not c.ok]
        code = _fail_exit(ledger, bad)
    ledger.close()
    return code


def _cmd_cs_check(args) -> int:
    seed = _resolve_seed(args)
    field = make_field(args.p, args.k)
    q = field.q
    ledger = Ledger(args.out)
    head = _envelope(args, seed, "cs-check")
    rng = SplitMix64(derive_seed(seed, 0xC5))
    failures = []
    for trial in range(args.trials):
        fs = []
        for _ in range(args.m + 1):
            vals = np.array([rng.unit_disk() for _ in range(q * q)],
                            dtype=np.complex128).reshape(q, q)
            fs.append(two_var_function(field, vals))
        chk = check_cs_inequality(fs, args.s)
        rec = dict(head)
        rec.update({"trial": trial, "lhs": chk.lhs, "rhs": chk.rhs,
                    "holds": chk.holds})
        ledger.write(rec)
        if not chk.holds:
            failures.append({"trial": trial, "lhs": chk.lhs, "rhs": chk.rhs})
    code = _fail_exit(ledger, failures) if failures else 0
    ledger.close()
    return code


def verify_theorem(system, primes, trials: int, density: float, seed: int,
                   psi=None, allow_below_threshold: bool = False,
                   ledger: Ledger | None = None, head: dict | None = None):
    """Empirical main-term/error sweep; returns the summary report dict.

    For each prime and trial, draws a random set A of the given density,
    computes the exact count, the predicted main term (zero when any twist
    character is nontrivial) and the count-level error q^2 |Lambda - main|,
    and finally fits log max-error against log q.  The fit is evidence, not
    proof; records are tagged accordingly.
    """
    head = dict(head or {"schema": 1})
    psi = list(psi or [0] * len(system.Q))
    below = [p for p in primes if p < system.threshold]
    if below and not allow_below_threshold:
        raise ThresholdViolation(
            f"primes {below} lie below the system threshold "
            f"{system.threshold}; pass --allow-below-threshold to proceed")
    max_err: dict[int, float] = {}
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for p in primes:
            field = make_field(p)
            q = field.q
            for trial in range(trials):
                rng = SplitMix64(derive_seed(seed, p, trial))
                idx = rng.subset(q, density)
                n = len(idx)
                fs = [indicator(field, idx) for _ in range(system.m1 + 1)]
                if system.m2:
                    from .functions import character_function
                    gs = [character_function(field, a) for a in psi]
                    value = lambda_average(system, fs, gs)
                    trivial = all(a == 0 for a in psi)
                    main = (n / q) ** (system.m1 + 1) if trivial else 0.0
                else:
                    value = lambda_average(system, fs)
                    main = (n / q) ** (system.m1 + 1)
                scaled_err = abs(value - main) * q * q
                max_err[p] = max(max_err.get(p, 0.0), scaled_err)
                row = {"p": p, "trial": trial, "set_size": n,
                       "value_re": value.real, "value_im": value.imag,
                       "main_term": main, "scaled_error": scaled_err}
                rows.append(row)
                if ledger is not None:
                    rec = dict(head)
                    rec.update(row)
                    ledger.write(rec)
    pts = [(math.log(p), math.log(e)) for p, e in sorted(max_err.items())
           if e > 0]
    slope = None
    if len(pts) >= 2:
        xs = np.array([x for x, _ in pts])
        ys = np.array([y for _, y in pts])
        slope = float(np.polyfit(xs, ys, 1)[0])
    report = {"record": "fit", "points": len(pts), "error_exponent": slope,
              "note": "empirical evidence only", "rows": len(rows),
              "below_threshold": below}
    if ledger is not None:
        rec = dict(head)
        rec.update(report)
        ledger.write(rec)
    return report


def _cmd_verify_theorem(args) -> int:
    seed = _resolve_seed(args)
    system = progression_system(
        [s.strip() for s in args.polys.split(",")],
        Q=[s.strip() for s in args.qs.split(",")] if args.qs else ())
    psi = [int(t) for t in args.psi.split(",")] if args.psi else None
    primes = _primes(args.pmin, args.pmax)
    ledger = Ledger(args.out)
    head = _envelope(args, seed, "verify-theorem")
    try:
        verify_theorem(system, primes, args.trials, args.density, seed,
                       psi=psi,
                       allow_below_threshold=args.allow_below_threshold,
                       ledger=ledger, head=head)
    finally:
        ledger.close()
    return 0


def _cmd_acceptance(args) -> int:
    from .acceptance import run_all

    seed = _resolve_seed(args)
    ledger = Ledger(args.out) if args.out and args.out != "-" else None
    head = _envelope(args, seed, "acceptance")
    results = []
    echo = print if not args.quiet else (lambda line: None)
    for res in run_all(echo=None):
        results.append(res)
        echo(res.line())
        if ledger is not None:
            rec = dict(head)
            rec.update({"criterion": res.index, "name": res.name,
                        "passed": res.passed, "detail": res.detail,
                        "ms": int(res.seconds * 1000)})
            ledger.write(rec)
    failures = [{"criterion": r.index, "name": r.name, "detail": r.detail}
                for r in results if not r.passed]
    code = 0
    if failures:
        sink = ledger if ledger is not None else Ledger(None)
        code = _fail_exit(sink, failures)
        if ledger is None:
            sink.close()
    if ledger is not None:
        ledger.close()
    return code


# --------------------------------------------------------------------------
# parser construction
# --------------------------------------------------------------------------

def _add_common(sp, seed=True, out=True):
    if seed:
        sp.add_argument("--seed", type=int, default=None,
                        help="PRNG seed (auto-generated and recorded if absent)")
    if out:
        sp.add_argument("--out", default="-",
                        help="JSON-lines output path ('-' = stdout)")
    sp.add_argument("--config", default=None,
                    help="JSON file of flag defaults (dashes as underscores)")
    sp.add_argument("--jobs", type=int, default=_jobs_default(),
                    help="worker processes for sweeps (env FFPROG_JOBS)")


def build_parser() -> _Parser:
    ap = _Parser(prog="ffprog",
                 description="polynomial progressions over finite fields")
    ap.add_argument("--version", action="version",
                    version=f"ffprog {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    parsers = {}

    sp = sub.add_parser("count", help="exact progression count and error")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--polys", default=None,
                    help='comma list, e.g. "y,y^2"')
    sp.add_argument("--set", default="random:0.5", help="set source")
    sp.add_argument("--y-rule", choices=("all", "nonzero"), default="all")
    _add_common(sp)
    sp.set_defaults(func=_cmd_count)
    parsers["count"] = sp

    sp = sub.add_parser("norms", help="Gowers norms of a function")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--fn", default="balanced",
                    choices=("indicator", "balanced", "phase", "disk", "spike"))
    sp.add_argument("--set", default="random:0.5")
    _add_common(sp)
    sp.set_defaults(func=_cmd_norms)
    parsers["norms"] = sp

    sp = sub.add_parser("weil-scan",
                        help="character-sum sweep vs the square-root bound")
    sp.add_argument("--pmin", type=int, default=5)
    sp.add_argument("--pmax", type=int, default=199)
    sp.add_argument("--poly", default=None, help='e.g. "y^3"')
    sp.add_argument("--csv", default=None, help="CSV export path")
    _add_common(sp)
    sp.set_defaults(func=_cmd_weil_scan)
    parsers["weil-scan"] = sp

    sp = sub.add_parser("base-scan", help="base-case average sweep")
    sp.add_argument("--pmin", type=int, default=31)
    sp.add_argument("--pmax", type=int, default=101)
    sp.add_argument("--p1", default=None, help="progression polynomial")
    sp.add_argument("--qs", default=None, help="comma list of twist polys")
    sp.add_argument("--psi", default=None,
                    help="comma list of twist character indices")
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--quiet-warnings", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=_cmd_base_scan)
    parsers["base-scan"] = sp

    sp = sub.add_parser("extremal", help="progression-free set search")
    sp.add_argument("--p", default=None,
                    help="prime (or comma list for a sweep)")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--polys", default=None)
    sp.add_argument("--y-rule", choices=("all", "nonzero"), default="nonzero")
    sp.add_argument("--degeneracy",
                    choices=("paper_literal", "distinct_points", "both"),
                    default="both")
    sp.add_argument("--method", choices=("exact", "random"), default="exact")
    sp.add_argument("--iters", type=int, default=200,
                    help="random-method greedy passes")
    sp.add_argument("--node-budget", type=int, default=10_000_000)
    sp.add_argument("--csv", default=None)
    _add_common(sp)
    sp.set_defaults(func=_cmd_extremal)
    parsers["extremal"] = sp

    sp = sub.add_parser("decompose",
                        help="structured/small/uniform split, certified")
    sp.add_argument("--p", type=int, default=101)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--s", type=int, default=2)
    sp.add_argument("--beta", default="1")
    sp.add_argument("--gamma", default="1/2")
    sp.add_argument("--ell", type=int, default=None,
                    help="schedule level (default s)")
    sp.add_argument("--deltas", default=None,
                    help='explicit budget "d1,d2,d3,d4" (rationals)')
    sp.add_argument("--fn", default="phase",
                    choices=("indicator", "balanced", "phase", "disk", "spike"))
    sp.add_argument("--set", default="random:0.5")
    sp.add_argument("--quiet-warnings", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=_cmd_decompose)
    parsers["decompose"] = sp

    sp = sub.add_parser("schedule",
                        help="delta schedule, sign report, bound recursion")
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--beta", default=None, help="rational in (0,1]")
    sp.add_argument("--gamma", default=None, help="rational in (0,1]")
    sp.add_argument("--q", default="1e8", help="field size for the budget")
    sp.add_argument("--gamma-prime", default=None,
                    help="lower-level exponent for the counting term")
    sp.add_argument("--c2", type=float, default=1.0,
                    help="lower-level constant for the counting term")
    _add_common(sp)
    sp.set_defaults(func=_cmd_schedule)
    parsers["schedule"] = sp

    sp = sub.add_parser("cs-check",
                        help="Cauchy-Schwarz inequality on random instances")
    sp.add_argument("--p", type=int, default=7)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--s", type=int, default=3)
    sp.add_argument("--trials", type=int, default=10)
    _add_common(sp)
    sp.set_defaults(func=_cmd_cs_check)
    parsers["cs-check"] = sp

    sp = sub.add_parser("verify-theorem",
                        help="empirical main-term/error sweep across primes")
    sp.add_argument("--polys", default=None)
    sp.add_argument("--qs", default=None)
    sp.add_argument("--psi", default=None)
    sp.add_argument("--pmin", type=int, default=31)
    sp.add_argument("--pmax", type=int, default=199)
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--allow-below-threshold", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=_cmd_verify_theorem)
    parsers["verify-theorem"] = sp

    sp = sub.add_parser("acceptance", help="run the numbered acceptance suite")
    sp.add_argument("--quiet", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=_cmd_acceptance)
    parsers["acceptance"] = sp

    ap._subparsers_by_name = parsers
    return ap


_REQUIRED = {
    "count": ("p", "polys"),
    "weil-scan": ("poly",),
    "base-scan": ("p1",),
    "extremal": ("p", "polys"),
    "schedule": ("s", "beta", "gamma"),
    "verify-theorem": ("polys",),
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.config:
            with open(args.config) as fh:
                defaults = json.load(fh)
            sp = ap._subparsers_by_name[args.command]
            known = {a.dest for a in sp._actions}
            bad = set(defaults) - known
            if bad:
                raise FFProgError(
                    f"unknown config keys {sorted(bad)} for {args.command}")
            sp.set_defaults(**defaults)
            args = ap.parse_args(argv)  # explicit flags still win
        missing = [k for k in _REQUIRED.get(args.command, ())
                   if getattr(args, k) is None]
        if missing:
            flags = ", ".join("--" + k.replace("_", "-") for k in missing)
            print(f"ffprog {args.command}: error: missing {flags} "
                  f"(flag or config)", file=sys.stderr)
            return 1
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except FFProgError as exc:
        print(f"ffprog: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        try:  # keep the interpreter from whining about the closed pipe
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        except OSError:
            pass
        return 0
    except OSError as exc:
        print(f"ffprog: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
