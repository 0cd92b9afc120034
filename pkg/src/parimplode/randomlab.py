"""Monte Carlo lab for additive random schedules eps_k = pi/N + eta_k/N^(1+delta).

With rho == 1 the recurrence coefficient is 2 - eps_k^2 and everything is
real; ensembles are vectorized across trials (one numpy row per trial) and
still bit-identical to the scalar single-trial path, because complex
arithmetic on exactly-real values performs the same operations on the real
parts.  All randomness is counter-based, so concurrent and sequential runs
produce the same records in the same order.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import IdentityViolationError
from .ioutil import fmt17, worker_count, write_csv
from .recurrences import ChebyshevPoint, chebyshev_U, martingale_sum, run_recurrences
from .schedules import RandomDist, RandomSchedule, materialize

TRIAL_CSV_HEADER = "N,delta,seed,trial,qN_re,qN_im,qN1_re,qN1_im,coeff_err"
SUMMARY_CSV_HEADER = "N,delta,trials,median_qN,q90_qN,exceed_count,azuma_bound"


@dataclass(frozen=True)
class TrialRecord:
    """Checkpoint values for one (seed, trial) at one N.

    q_Nm1 is q_{N-1}; s_Nm1 and s_Nm2 are s_{N-1} and s_{N-2}.  The record
    is a pure function of (delta, dist, seed, trial, N).
    """

    N: int
    delta: float
    seed: int
    trial: int
    q_N: complex
    q_N1: complex
    q_Nm1: complex
    s_Nm1: complex
    s_Nm2: complex
    coeff_err: float


@dataclass(frozen=True)
class EnsembleSummary:
    N: int
    delta: float
    trials: int
    median_qN: float
    q90_qN: float
    exceed_count: int
    azuma_bound: float

    def __post_init__(self):
        if not 0 <= self.exceed_count <= self.trials:
            raise ValueError(
                f"exceed_count {self.exceed_count} outside 0..trials={self.trials}")


@dataclass(frozen=True)
class PropLambda:
    """The proof's threshold choice lambda_n = sqrt(2n) * N^(-(3/2+delta/2)),
    which makes the per-n tail exponent independent of n."""

    def lambda_at(self, n, N: int, delta: float):
        return np.sqrt(2.0 * np.asarray(n, dtype=float)) * N ** -(1.5 + delta / 2.0)


@dataclass(frozen=True)
class FixedLambda:
    """Constant threshold; the tail bound then collapses to 0 for large N."""

    value: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValueError(f"lambda must be positive, got {self.value}")

    def lambda_at(self, n, N: int, delta: float):
        return np.full_like(np.asarray(n, dtype=float), self.value)


LambdaRule = Union[PropLambda, FixedLambda]


class EnsembleResult(NamedTuple):
    summaries: list
    records: list
    failures: list


class MartingaleCheck(NamedTuple):
    max_identity_residual: float
    mean_increment_abs: float
    increment_stderr: float


class ExceedanceRow(NamedTuple):
    N: int
    empirical: float
    bound: float
    vacuous: bool


def azuma_tail_bound(lam: float, n: int, N: int, delta: float, M: float) -> float:
    """Sub-Gaussian tail exp(-lam^2 N^(2(1+delta)) / (2 M^2 n))."""
    if lam <= 0 or n <= 0 or N <= 0 or delta <= 0 or M <= 0:
        raise ValueError("all arguments must be positive")
    exponent = lam * lam * N ** (2.0 * (1.0 + delta)) / (2.0 * M * M * n)
    return math.exp(-exponent)


def quantile_nearest_rank(values, p: float) -> float:
    """Nearest-rank quantile: the ceil(p*n)-th smallest value."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("quantile of empty sample")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    idx = max(1, math.ceil(p * v.size)) - 1
    return float(v[idx])


def union_bound(N: int, delta: float, M: float, lambda_rule: LambdaRule) -> float:
    """(N+1) times the worst per-n Azuma term (n = N+1, where it is largest)."""
    lam = float(lambda_rule.lambda_at(np.array(N + 1), N, delta))
    return (N + 1) * azuma_tail_bound(lam, N + 1, N, delta, M)


def _run_trials_at(N: int, delta: float, dist: RandomDist, trials: int, seed: int,
                   lambda_rule: LambdaRule, threshold: float):
    # one vectorized pass: rows are trials, the k loop is sequential
    t_idx = np.arange(trials, dtype=np.uint64)
    k_idx = np.arange(N + 2, dtype=np.uint64)
    eta = dist.draw(seed, t_idx[:, None], k_idx[None, :])
    eps = math.pi / N + eta / N ** (1.0 + delta)
    eps[:, 0] = 0.0
    coeff = 2.0 - eps * eps
    x = 2.0 * math.cos(math.pi / N)
    theta = math.pi / N
    d = coeff - x

    q = np.empty((trials, N + 2))
    q[:, 0] = 0.0
    q[:, 1] = 1.0
    r_prev = np.ones(trials)
    r_cur = np.ones(trials)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, N + 1):
            q[:, k + 1] = coeff[:, k] * q[:, k] - q[:, k - 1]
            r_next = coeff[:, k] * r_cur - r_prev
            r_prev, r_cur = r_cur, r_next
        # after the loop s_prev = s_{N-1}, s_cur = s_N; s_{N-2} is captured
        # at the start of its iteration
        s_prev = np.zeros(trials)
        s_cur = np.ones(trials)
        s_nm2 = np.zeros(trials)
        for k in range(1, N):
            if k == N - 2:
                s_nm2 = s_cur.copy()
            s_next = coeff[:, k + 1] * s_cur - s_prev
            s_prev, s_cur = s_cur, s_next

        # delta_n = sum_{k<n} d_k q_k e^{ik theta}, n = 1..N+1, and its
        # running comparison against the lambda_rule thresholds
        phases = np.exp(1j * theta * np.arange(N + 1))
        terms = d[:, : N + 1] * q[:, : N + 1] * phases[None, :]
        delta_partial = np.cumsum(terms, axis=1)
        lam = lambda_rule.lambda_at(np.arange(1, N + 2), N, delta)
        ratios = np.abs(delta_partial) / lam[None, :]
        exceeded = np.max(ratios, axis=1) >= threshold

        a_coef = q[:, N + 1] - q[:, N]
        b_coef = r_prev - r_cur  # r_N - r_{N+1} after the final swap
        c_coef = -q[:, N]
        d_coef = r_prev  # r_N
        ce = np.abs(a_coef / d_coef - 1.0) + np.abs(b_coef / d_coef) + np.abs(c_coef / d_coef)

    ok = (
        np.isfinite(q[:, N - 1]) & np.isfinite(q[:, N]) & np.isfinite(q[:, N + 1])
        & np.isfinite(s_prev) & np.isfinite(s_nm2) & np.isfinite(ce)
        & (np.abs(d_coef) > 1e-12)
    )
    return {
        "q_Nm1": q[:, N - 1], "q_N": q[:, N], "q_N1": q[:, N + 1],
        "s_Nm1": s_prev, "s_Nm2": s_nm2, "coeff_err": ce,
        "exceeded": exceeded, "ok": ok,
    }


def run_ensemble(delta: float, dist: RandomDist, Ns: list[int], trials: int, seed: int, *,
                 lambda_rule: LambdaRule = PropLambda(),
                 exceed_threshold: float = 1.0,
                 max_workers: int | None = None) -> EnsembleResult:
    """Seeded ensemble over an N ladder.

    Returns summaries (one per N), all per-trial records, and a list of
    (N, trial, message) failures; failed trials are excluded from the
    quantiles and counts but never abort the ensemble.  The exceedance
    event for a trial is max_n |delta_n| / lambda_n >= exceed_threshold,
    the event the tail bound actually controls.
    """
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if trials < 30:
        raise ValueError(f"need at least 30 trials for quantiles, got {trials}")
    if any(n < 4 for n in Ns):
        raise ValueError(f"every N must be >= 4, got {Ns}")

    per_n: dict[int, dict] = {}
    with ThreadPoolExecutor(max_workers=worker_count(max_workers)) as pool:
        futures = {
            pool.submit(_run_trials_at, n, delta, dist, trials, seed,
                        lambda_rule, exceed_threshold): n
            for n in Ns
        }
        for fut, n in futures.items():
            per_n[n] = fut.result()

    summaries: list[EnsembleSummary] = []
    records: list[TrialRecord] = []
    failures: list[tuple[int, int, str]] = []
    m_bound = dist.magnitude_bound
    for n in Ns:
        data = per_n[n]
        ok = data["ok"]
        for t in range(trials):
            if not ok[t]:
                failures.append((n, t, "non-finite trial output"))
                continue
            records.append(TrialRecord(
                N=n, delta=delta, seed=seed, trial=t,
                q_N=complex(data["q_N"][t]), q_N1=complex(data["q_N1"][t]),
                q_Nm1=complex(data["q_Nm1"][t]),
                s_Nm1=complex(data["s_Nm1"][t]), s_Nm2=complex(data["s_Nm2"][t]),
                coeff_err=float(data["coeff_err"][t]),
            ))
        good_q = np.abs(data["q_N"][ok])
        n_ok = int(np.count_nonzero(ok))
        summaries.append(EnsembleSummary(
            N=n, delta=delta, trials=n_ok,
            median_qN=quantile_nearest_rank(good_q, 0.5),
            q90_qN=quantile_nearest_rank(good_q, 0.9),
            exceed_count=int(np.count_nonzero(data["exceeded"] & ok)),
            azuma_bound=union_bound(n, delta, m_bound, lambda_rule),
        ))
    return EnsembleResult(summaries, records, failures)


def martingale_check(delta: float, dist: RandomDist, N: int, trials: int,
                     seed: int) -> MartingaleCheck:
    """Verify the summation identity on every prefix of every trial.

    Each delta_n goes through martingale_sum (which self-checks and raises
    IdentityViolationError beyond 1e-8); the returned maximum residual is
    the worst value observed.  The mean increment is taken at n = N//2
    across trials, with its standard error for a mean-zero sanity check.
    """
    theta = math.pi / N
    x = 2.0 * math.cos(theta)
    n_mid = max(2, N // 2)
    max_resid = 0.0
    increments = np.empty(trials, dtype=complex)
    for t in range(trials):
        spec = RandomSchedule(delta=delta, dist=dist, seed=seed, trial=t)
        seqs = materialize(spec, N)
        triple = run_recurrences(seqs)
        d = (2.0 - seqs.eps_sq.real) - x
        for n in range(1, N + 2):
            delta_n = martingale_sum(d, triple, theta, n)
            u_n = chebyshev_U(n, ChebyshevPoint.from_theta(theta))
            lhs = math.sin(theta) * (triple.q[n].real - u_n)
            rhs = -(delta_n * cmath.exp(-1j * n * theta)).imag
            max_resid = max(max_resid, abs(lhs - rhs))
        inc = d[n_mid - 1] * triple.q[n_mid - 1] * cmath.exp(1j * (n_mid - 1) * theta)
        increments[t] = inc
    mean_inc = complex(np.mean(increments))
    stderr = float(np.std(increments) / math.sqrt(trials))
    return MartingaleCheck(max_resid, abs(mean_inc), stderr)


def exceedance_vs_bound(summaries: list[EnsembleSummary], lambda_rule: LambdaRule,
                        M: float = 1.0) -> list[ExceedanceRow]:
    """Empirical exceedance fraction next to the union-bounded prediction.

    Rows with bound >= 1 carry vacuous=True: the inequality holds trivially
    and says nothing about the data.
    """
    rows = []
    for s in summaries:
        bound = union_bound(s.N, s.delta, M, lambda_rule)
        empirical = s.exceed_count / s.trials if s.trials else 0.0
        rows.append(ExceedanceRow(s.N, empirical, bound, bound >= 1.0))
    return rows


def write_trial_csv(records: list[TrialRecord], path: str) -> None:
    rows = (
        (str(t.N), fmt17(t.delta), str(t.seed), str(t.trial),
         fmt17(t.q_N.real), fmt17(t.q_N.imag),
         fmt17(t.q_N1.real), fmt17(t.q_N1.imag), fmt17(t.coeff_err))
        for t in records
    )
    write_csv(path, TRIAL_CSV_HEADER, rows)


def write_summary_csv(summaries: list[EnsembleSummary], path: str) -> None:
    rows = (
        (str(s.N), fmt17(s.delta), str(s.trials), fmt17(s.median_qN),
         fmt17(s.q90_qN), str(s.exceed_count), fmt17(s.azuma_bound))
        for s in summaries
    )
    write_csv(path, SUMMARY_CSV_HEADER, rows)
