"""Command-line front end.

Subcommands: sweep, random, counterexample, skew, oracle, diagnose-sum.
Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 assertion
failure.  Flags may also come from a JSON document via --config; explicit
flags override document fields, and unknown document fields are rejected
by name.  PARIMPLODE_THREADS overrides worker count.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .convergence import (
    fit_loglog,
    run_sweep,
    write_rate_csv,
)
from .errors import (
    AllPointsSkippedError,
    DegenerateMapError,
    DegenerateNormalizationError,
    IdentityViolationError,
    InvalidSpecError,
    NonPositiveValueError,
    OracleMismatchError,
    PoleProximityError,
    RecurrenceOverflowError,
    ScheduleMismatchError,
    SweepError,
    UsageError,
)
from .ioutil import atomic_write_text, fmt17, write_csv
from .mobius import compose_chain, projective_distance
from .randomlab import (
    FixedLambda,
    PropLambda,
    exceedance_vs_bound,
    run_ensemble,
    write_summary_csv,
    write_trial_csv,
)
from .recurrences import coefficients_from_qr, run_recurrences
from .schedules import (
    CounterexampleC,
    QuadraticNonconvergent,
    Rademacher,
    TheoremA,
    TheoremB,
    UniformSymmetric,
    materialize,
    random_small_schedule,
    summation_diagnostic,
)
from .skew import build_example, iterate_skew, write_skew_csv
from .svgplot import loglog_svg

_NUMERICAL_ERRORS = (
    OracleMismatchError, RecurrenceOverflowError, DegenerateMapError,
    DegenerateNormalizationError, SweepError, IdentityViolationError,
    AllPointsSkippedError, PoleProximityError, ScheduleMismatchError,
    NonPositiveValueError,
)

# pre-registered acceptance bands
_A_SLOPE_BAND = (-1.4, -0.8)
_B_CE_BAND = (-1.4, -0.6)
_R_SLOPE_MAX = -0.6
_G_SLOPE_MAX = -0.6
_F_FLOOR = 1.0 / math.pi - 0.07
_SKEW_SLOPE_MAX = -0.5
_RANDOM_HALFWIDTH = 0.2
_NQ_BOUND = 50.0
_BELOW_FLOOR = 1e-12

COUNTEREXAMPLE_CSV_HEADER = "N,f_coeff_err,f_qN_abs,g_coeff_err,g_qN_abs"


class _AssertionFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_ladder(text) -> list[int]:
    """'1000' | 'start:end:xFACTOR' (geometric) | 'start:end:+STEP' (arithmetic)."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        ns = [int(v) for v in text]
        if not ns:
            raise UsageError("n: ladder list is empty")
        return ns
    text = str(text).strip()
    if ":" not in text:
        try:
            return [int(text)]
        except ValueError:
            raise UsageError(f"n: expected an integer or start:end:step ladder, got {text!r}") from None
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"n: ladder must be start:end:xFACTOR or start:end:+STEP, got {text!r}")
    try:
        start, end = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"n: non-integer ladder endpoints in {text!r}") from None
    rule = parts[2]
    ns: list[int] = []
    if rule.startswith("x"):
        try:
            factor = float(rule[1:])
        except ValueError:
            raise UsageError(f"n: bad geometric factor in {text!r}") from None
        if factor <= 1.0:
            raise UsageError("n: geometric factor must be > 1")
        cur = start
        while cur <= end:
            ns.append(cur)
            nxt = int(round(cur * factor))
            if nxt <= cur:
                break
            cur = nxt
    elif rule.startswith("+"):
        try:
            step = int(rule[1:])
        except ValueError:
            raise UsageError(f"n: bad arithmetic step in {text!r}") from None
        if step <= 0:
            raise UsageError("n: arithmetic step must be positive")
        ns = list(range(start, end + 1, step))
    else:
        raise UsageError(f"n: ladder step must start with 'x' or '+', got {rule!r}")
    if not ns:
        raise UsageError(f"n: ladder {text!r} is empty")
    return ns


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config: invalid JSON in {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config: document must be a JSON object")
    return doc


def _resolve(args: argparse.Namespace, fields: dict) -> dict:
    """Merge flag values over config document values over hard defaults.

    ``fields`` maps field name -> hard default; a default of ``...``
    marks the field required.
    """
    doc = _load_config(args.config) if getattr(args, "config", None) else {}
    for key in doc:
        if key not in fields:
            raise UsageError(f"config: unknown field {key!r}")
    merged = {}
    for name, default in fields.items():
        flag_val = getattr(args, name, None)
        if flag_val is not None:
            merged[name] = flag_val
        elif name in doc:
            merged[name] = doc[name]
        elif default is ...:
            raise UsageError(f"{name}: required (flag or config field)")
        else:
            merged[name] = default
    return merged


def _schedule_fields() -> dict:
    return {
        "theorem": None, "case": None, "quadratic_noncvg": False,
        "amplitude": None, "eps_amp": None, "pair_amp": None,
        "pair_bound": None, "rot_coeff": None,
    }


def _build_deterministic_spec(cfg: dict):
    if cfg["quadratic_noncvg"]:
        if cfg["theorem"] is not None:
            raise UsageError("theorem: cannot combine --theorem with --quadratic-noncvg")
        return QuadraticNonconvergent()
    if cfg["theorem"] is None:
        raise UsageError("theorem: choose --theorem A|B or --quadratic-noncvg")
    family = str(cfg["theorem"]).upper()
    case = cfg["case"] if cfg["case"] is not None else 1
    try:
        case = int(case)
    except (TypeError, ValueError):
        raise UsageError(f"case: expected an integer, got {cfg['case']!r}") from None
    params = {name: float(cfg[name]) for name in
              ("amplitude", "eps_amp", "pair_amp", "pair_bound", "rot_coeff")
              if cfg[name] is not None}
    try:
        if family == "A":
            if "eps_amp" in params:
                raise UsageError("eps_amp: only valid with --theorem B")
            return TheoremA(case=case, **params)
        if family == "B":
            return TheoremB(case=case, **params)
    except InvalidSpecError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"theorem: must be A or B, got {cfg['theorem']!r}")


def _maybe_fit(ns, values):
    positive = [(n, v) for n, v in zip(ns, values) if v > 0]
    if len(positive) < 3:
        return None
    return fit_loglog([n for n, _ in positive], [v for _, v in positive])


def _check_decaying(name: str, ns, values, slope_max: float, failures: list[str]) -> None:
    """Band check with a below-floor escape: points at exactly 0 (or all
    remaining values under 1e-12) count as converged, not as fit points."""
    fit = _maybe_fit(ns, values)
    if fit is None:
        if max(values) > _BELOW_FLOOR:
            failures.append(f"{name}: too few positive points to fit and not below floor")
        return
    if fit.slope > slope_max:
        failures.append(f"{name}: slope {fit.slope:.3f} exceeds {slope_max}")


def _write_svg(path, series, fit, band, title, ylabel):
    fit_tuple = (fit.slope, fit.intercept) if fit is not None else None
    atomic_write_text(path, loglog_svg(series, title=title, ylabel=ylabel,
                                       fit=fit_tuple, band=band))


def cmd_sweep(args) -> int:
    fields = _schedule_fields()
    fields.update({"n": ..., "out": None, "svg": None, "assert": False,
                   "extended": False, "oracle_limit": 512, "threads": None})
    cfg = _resolve(args, fields)
    spec = _build_deterministic_spec(cfg)
    ns = parse_ladder(cfg["n"])
    points = run_sweep(spec, ns, extended=bool(cfg["extended"]),
                       oracle_limit=int(cfg["oracle_limit"]),
                       max_workers=cfg["threads"] and int(cfg["threads"]))
    if cfg["out"]:
        write_rate_csv(points, cfg["out"])
    for p in points:
        print(f"N={p.N} coeff_err={p.coeff_err:.6g} sup_err={p.sup_err:.6g} "
              f"qN_abs={p.q_N_abs:.6g} rN_err={p.r_N_err:.6g}")

    field = "q_N_abs" if isinstance(spec, TheoremA) else "coeff_err"
    fit = _maybe_fit(ns, [getattr(p, field) for p in points])
    if fit is not None:
        print(f"fit {field}: slope={fit.slope:.4f} intercept={fit.intercept:.4f} "
              f"r2={fit.r_squared:.4f} n={fit.n_points}")
    else:
        print(f"fit {field}: not available (needs >= 3 positive points)")

    band = _A_SLOPE_BAND if isinstance(spec, TheoremA) else _B_CE_BAND
    if cfg["svg"]:
        series = [(field, [p.N for p in points], [getattr(p, field) for p in points])]
        _write_svg(cfg["svg"], series, fit,
                   band if isinstance(spec, (TheoremA, TheoremB)) else None,
                   f"sweep {type(spec).__name__}", field)

    if cfg["assert"]:
        failures: list[str] = []
        if isinstance(spec, QuadraticNonconvergent):
            for p in points:
                if p.coeff_err < 0.9:
                    failures.append(f"coeff_err at N={p.N} is {p.coeff_err:.4g}, expected >= 0.9")
        elif isinstance(spec, TheoremA):
            if fit is None or not band[0] <= fit.slope <= band[1]:
                got = "n/a" if fit is None else f"{fit.slope:.3f}"
                failures.append(f"q_N_abs slope {got} outside {band}")
            worst = max(p.N * p.q_N_abs for p in points)
            if worst > _NQ_BOUND:
                failures.append(f"max N*q_N_abs = {worst:.3g} exceeds {_NQ_BOUND}")
        elif isinstance(spec, TheoremB):
            if fit is None or not band[0] <= fit.slope <= band[1]:
                got = "n/a" if fit is None else f"{fit.slope:.3f}"
                failures.append(f"coeff_err slope {got} outside {band}")
            _check_decaying("r_N_err", ns, [p.r_N_err for p in points], _R_SLOPE_MAX, failures)
            _check_decaying("r_N1_err", ns, [p.r_N1_err for p in points], _R_SLOPE_MAX, failures)
        if failures:
            raise _AssertionFailed("; ".join(failures))
    return 0


def cmd_random(args) -> int:
    fields = {"delta": ..., "trials": 200, "seed": 0, "n": "200:6400:x2",
              "dist": "uniform", "m": 1.0, "out_trials": None, "out_summary": None,
              "svg": None, "assert": False, "threshold": 1.0,
              "lambda_rule": "prop", "lambda_value": 1.0, "threads": None}
    cfg = _resolve(args, fields)
    delta = float(cfg["delta"])
    if delta <= 0:
        raise UsageError(f"delta: must be > 0, got {delta}")
    trials = int(cfg["trials"])
    if trials < 30:
        raise UsageError(f"trials: need at least 30, got {trials}")
    if cfg["dist"] == "uniform":
        dist = UniformSymmetric(m=float(cfg["m"]))
    elif cfg["dist"] == "rademacher":
        dist = Rademacher()
    else:
        raise UsageError(f"dist: must be 'uniform' or 'rademacher', got {cfg['dist']!r}")
    if cfg["lambda_rule"] == "prop":
        rule = PropLambda()
    elif cfg["lambda_rule"] == "fixed":
        rule = FixedLambda(float(cfg["lambda_value"]))
    else:
        raise UsageError(f"lambda_rule: must be 'prop' or 'fixed', got {cfg['lambda_rule']!r}")
    ns = parse_ladder(cfg["n"])

    result = run_ensemble(delta, dist, ns, trials, int(cfg["seed"]),
                          lambda_rule=rule, exceed_threshold=float(cfg["threshold"]),
                          max_workers=cfg["threads"] and int(cfg["threads"]))
    summaries = result.summaries
    for s in summaries:
        print(f"N={s.N} trials={s.trials} median|qN|={s.median_qN:.6g} "
              f"q90|qN|={s.q90_qN:.6g} exceed={s.exceed_count} bound={s.azuma_bound:.4g}")
    if result.failures:
        print(f"failed trials: {len(result.failures)}", file=sys.stderr)

    fit = _maybe_fit([s.N for s in summaries], [s.median_qN for s in summaries])
    if fit is not None:
        print(f"fit median|qN|: slope={fit.slope:.4f} r2={fit.r_squared:.4f} "
              f"(target {-(1 + delta) / 2:.3f} +/- {_RANDOM_HALFWIDTH})")
    if cfg["out_trials"]:
        write_trial_csv(result.records, cfg["out_trials"])
    if cfg["out_summary"]:
        write_summary_csv(summaries, cfg["out_summary"])
    if cfg["svg"]:
        series = [("median |qN|", [s.N for s in summaries], [s.median_qN for s in summaries]),
                  ("q90 |qN|", [s.N for s in summaries], [s.q90_qN for s in summaries])]
        target = -(1 + delta) / 2
        _write_svg(cfg["svg"], series, fit,
                   (target - _RANDOM_HALFWIDTH, target + _RANDOM_HALFWIDTH),
                   f"random delta={delta}", "|q_N| quantiles")

    if cfg["assert"]:
        failures: list[str] = []
        target = -(1 + delta) / 2
        if fit is None:
            failures.append("median slope not available")
        elif abs(fit.slope - target) > _RANDOM_HALFWIDTH:
            failures.append(
                f"median slope {fit.slope:.3f} outside {target:.3f} +/- {_RANDOM_HALFWIDTH}")
        for row in exceedance_vs_bound(summaries, rule, M=dist.magnitude_bound):
            if row.vacuous:
                continue
            tol = 3.0 * math.sqrt(row.bound / trials) + 3.0 / trials
            if row.empirical > row.bound + tol:
                failures.append(
                    f"exceedance at N={row.N}: {row.empirical:.4g} > bound {row.bound:.4g} + {tol:.4g}")
        if failures:
            raise _AssertionFailed("; ".join(failures))
    return 0


def cmd_counterexample(args) -> int:
    fields = {"n": "500:8000:x2", "out": None, "svg": None, "assert": False,
              "extended": False, "threads": None}
    cfg = _resolve(args, fields)
    ns = parse_ladder(cfg["n"])
    if any(n % 2 for n in ns):
        raise UsageError(f"n: counterexample ladder must be even, got {ns}")
    workers = cfg["threads"] and int(cfg["threads"])
    f_points = run_sweep(CounterexampleC("multiplicative_f"), ns,
                         extended=bool(cfg["extended"]), max_workers=workers)
    g_points = run_sweep(CounterexampleC("additive_g"), ns,
                         extended=bool(cfg["extended"]), max_workers=workers)
    for fp, gp in zip(f_points, g_points):
        print(f"N={fp.N} f_coeff_err={fp.coeff_err:.6g} f_qN_abs={fp.q_N_abs:.6g} "
              f"g_coeff_err={gp.coeff_err:.6g}")
    if cfg["out"]:
        rows = ((str(fp.N), fmt17(fp.coeff_err), fmt17(fp.q_N_abs),
                 fmt17(gp.coeff_err), fmt17(gp.q_N_abs))
                for fp, gp in zip(f_points, g_points))
        write_csv(cfg["out"], COUNTEREXAMPLE_CSV_HEADER, rows)
    g_fit = _maybe_fit(ns, [p.coeff_err for p in g_points])
    if g_fit is not None:
        print(f"fit g coeff_err: slope={g_fit.slope:.4f} r2={g_fit.r_squared:.4f}")
    if cfg["svg"]:
        series = [("f coeff_err", ns, [p.coeff_err for p in f_points]),
                  ("g coeff_err", ns, [p.coeff_err for p in g_points])]
        _write_svg(cfg["svg"], series, g_fit, None,
                   "multiplicative vs additive split schedule", "coeff_err")
    if cfg["assert"]:
        failures: list[str] = []
        if g_fit is None or g_fit.slope > _G_SLOPE_MAX:
            got = "n/a" if g_fit is None else f"{g_fit.slope:.3f}"
            failures.append(f"g coeff_err slope {got} exceeds {_G_SLOPE_MAX}")
        floor_pts = [p for p in f_points if p.N >= 500]
        for p in floor_pts:
            if p.coeff_err < _F_FLOOR:
                failures.append(
                    f"f coeff_err at N={p.N} is {p.coeff_err:.4g}, below floor {_F_FLOOR:.4g}")
        if failures:
            raise _AssertionFailed("; ".join(failures))
    return 0


def cmd_skew(args) -> int:
    fields = {"example": ..., "n": "100:12800:x2", "out": None, "svg": None,
              "assert": False, "extended": False, "oracle_limit": 512}
    cfg = _resolve(args, fields)
    example = int(cfg["example"])
    ns = parse_ladder(cfg["n"])
    rows = []
    for n in ns:
        sys_n = build_example(example, n)
        rows.append((example, iterate_skew(sys_n, n, extended=bool(cfg["extended"]),
                                           oracle_limit=int(cfg["oracle_limit"]))))
    for _, res in rows:
        print(f"N={res.N} |w_N|={abs(res.w_final):.6g} fiber_coeff_err={res.fiber_coeff_err:.6g} "
              f"fiber_sup_err={res.fiber_sup_err:.6g}")
    if cfg["out"]:
        write_skew_csv(rows, cfg["out"])
    fit = _maybe_fit(ns, [res.fiber_coeff_err for _, res in rows])
    if fit is not None:
        print(f"fit fiber_coeff_err: slope={fit.slope:.4f} r2={fit.r_squared:.4f}")
    if cfg["svg"]:
        series = [(f"example {example}", ns, [res.fiber_coeff_err for _, res in rows])]
        _write_svg(cfg["svg"], series, fit, None, f"skew example {example}", "fiber_coeff_err")
    if cfg["assert"]:
        failures: list[str] = []
        if example == 1:
            for _, res in rows:
                if res.fiber_coeff_err > 1e-9:
                    failures.append(
                        f"fiber_coeff_err at N={res.N} is {res.fiber_coeff_err:.3g}, expected <= 1e-9")
        else:
            if fit is None or fit.slope > _SKEW_SLOPE_MAX:
                got = "n/a" if fit is None else f"{fit.slope:.3f}"
                failures.append(f"fiber_coeff_err slope {got} exceeds {_SKEW_SLOPE_MAX}")
            w_abs = [abs(res.w_final) for _, res in rows]
            if not w_abs[-1] < w_abs[0]:
                failures.append(f"|w_N| did not shrink along the ladder: {w_abs[0]:.3g} -> {w_abs[-1]:.3g}")
        if failures:
            raise _AssertionFailed("; ".join(failures))
    return 0


def cmd_oracle(args) -> int:
    fields = {"trials": 200, "n_max": 512, "seed": 1}
    cfg = _resolve(args, fields)
    trials = int(cfg["trials"])
    n_max = int(cfg["n_max"])
    seed = int(cfg["seed"])
    ns = [n for n in (16, 64, 256, 512) if n <= n_max]
    if not ns:
        raise UsageError(f"n_max: must be >= 16, got {n_max}")
    worst = 0.0
    worst_at = (0, 0)
    for n in ns:
        for trial in range(trials):
            seqs = random_small_schedule(n, seed, trial)
            coeffs = coefficients_from_qr(run_recurrences(seqs), n)
            chain = compose_chain(seqs.step_maps())
            dev = projective_distance(coeffs, chain)
            if dev > worst:
                worst, worst_at = dev, (n, trial)
    print(f"oracle: {trials} trials x {len(ns)} sizes, max projective deviation "
          f"{worst:.3e} at N={worst_at[0]} trial={worst_at[1]}")
    if worst > 1e-9:
        raise OracleMismatchError(
            f"recurrence vs chain deviation {worst:.3e} exceeds 1e-9 "
            f"at N={worst_at[0]} trial={worst_at[1]}")
    return 0


def cmd_diagnose_sum(args) -> int:
    fields = _schedule_fields()
    fields.update({"n": ...})
    cfg = _resolve(args, fields)
    spec = _build_deterministic_spec(cfg)
    for n in parse_ladder(cfg["n"]):
        total, scaled = summation_diagnostic(materialize(spec, n))
        print(f"N={n} sum={total.real:.6g}{total.imag:+.6g}j N*|sum|={scaled:.6g}")
    return 0


def _add_schedule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theorem", choices=["A", "B", "a", "b"], default=None,
                   help="deterministic schedule family")
    p.add_argument("--case", type=int, default=None, help="case number within the family")
    p.add_argument("--quadratic-noncvg", dest="quadratic_noncvg", action="store_const",
                   const=True, default=None, help="constant-angle non-convergent schedule")
    p.add_argument("--amplitude", type=float, default=None, help="cubic remainder amplitude")
    p.add_argument("--eps-amp", dest="eps_amp", type=float, default=None,
                   help="additive amplitude (family B cases 1-3)")
    p.add_argument("--pair-amp", dest="pair_amp", type=float, default=None,
                   help="pair-cancelling amplitude (case 2 / case 5)")
    p.add_argument("--pair-bound", dest="pair_bound", type=float, default=None,
                   help="bound constant for pair sums (case 2 / case 5)")
    p.add_argument("--rot-coeff", dest="rot_coeff", type=float, default=None,
                   help="rotating-term coefficient (case 3)")


def _add_common_output_flags(p: argparse.ArgumentParser, with_extended: bool = True) -> None:
    p.add_argument("--n", default=None,
                   help="N ladder: single value, start:end:xFACTOR, or start:end:+STEP")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--svg", default=None, help="SVG plot output path")
    p.add_argument("--assert", dest="assert", action="store_const", const=True, default=None,
                   help="exit 3 if the pre-registered acceptance band fails")
    p.add_argument("--config", default=None, help="JSON config document (flags override)")
    p.add_argument("--threads", type=int, default=None, help="worker count override")
    if with_extended:
        p.add_argument("--extended", action="store_const", const=True, default=None,
                       help="compensated double-double accumulation")
        p.add_argument("--oracle-limit", dest="oracle_limit", type=int, default=None,
                       help="largest N cross-checked against direct composition")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parimplode",
                     description="Non-autonomous perturbed parabolic compositions: "
                                 "rate sweeps, random ensembles, skew products.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("sweep", parents=[], help="deterministic N-sweep for one schedule")
    _add_schedule_flags(p)
    _add_common_output_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("random", help="seeded Monte Carlo ensemble")
    p.add_argument("--delta", type=float, default=None, help="decay exponent offset (> 0)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dist", choices=["uniform", "rademacher"], default=None)
    p.add_argument("--m", type=float, default=None, help="uniform distribution bound")
    p.add_argument("--n", default=None, help="N ladder")
    p.add_argument("--out-trials", dest="out_trials", default=None, help="per-trial CSV path")
    p.add_argument("--out-summary", dest="out_summary", default=None, help="summary CSV path")
    p.add_argument("--svg", default=None)
    p.add_argument("--assert", dest="assert", action="store_const", const=True, default=None)
    p.add_argument("--threshold", type=float, default=None, help="exceedance ratio threshold")
    p.add_argument("--lambda-rule", dest="lambda_rule", choices=["prop", "fixed"], default=None)
    p.add_argument("--lambda-value", dest="lambda_value", type=float, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("counterexample", help="both sides of the split-angle schedule")
    p.add_argument("--n", default=None, help="N ladder (even values)")
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--assert", dest="assert", action="store_const", const=True, default=None)
    p.add_argument("--extended", action="store_const", const=True, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("skew", help="skew-product example ladder")
    p.add_argument("--example", type=int, default=None, help="example id 1..5")
    p.add_argument("--n", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--assert", dest="assert", action="store_const", const=True, default=None)
    p.add_argument("--extended", action="store_const", const=True, default=None)
    p.add_argument("--oracle-limit", dest="oracle_limit", type=int, default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_skew)

    p = sub.add_parser("oracle", help="recurrence vs direct composition cross-check")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("diagnose-sum", help="print the scaled admissibility sum per N")
    _add_schedule_flags(p)
    p.add_argument("--n", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_diagnose_sum)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except (UsageError, InvalidSpecError) as exc:
        print(f"parimplode: error: {exc}", file=sys.stderr)
        return 1
    except _AssertionFailed as exc:
        print(f"parimplode: assertion failed: {exc}", file=sys.stderr)
        return 3
    except _NUMERICAL_ERRORS as exc:
        print(f"parimplode: numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"parimplode: error: {exc}", file=sys.stderr)
        return 1


def entry() -> int:
    return main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(entry())
