"""Three-term recurrences that propagate composed-map coefficients.

For steps f_k(z) = rho_k*z/(1-z) + eps_k^2 the composition
F_N = f_N o ... o f_1 has coefficients (A, B, C, D) with

    A_N = q_{N+1} - q_N,  B_N = r_N - r_{N+1},  C_N = -q_N,  D_N = r_N,

where q and r satisfy x_{k+1} = (1 + rho_k - eps_k^2) x_k - rho_k x_{k-1}
from (q_0, q_1) = (0, 1) and (r_0, r_1) = (1, 1).  The auxiliary sequence
s runs the same recurrence with coefficients shifted one step ahead and
recovers r through r_k = q_k - rho_1 * s_{k-1}.

Index conventions (documented once, used everywhere):

* ``rho`` and ``eps_sq`` have length N+2 and are 1-based; slot 0 is unused
  and kept at 0.  Index N+1 exists because s consumes shifted coefficients.
* ``q`` and ``r`` have length N+2 covering 0..N+1; ``s`` has length N+1
  covering 0..N.
* Additive perturbations enter only through eps^2, so sequences store
  eps_sq directly and no square root is ever taken.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import ddouble as dd
from .errors import (
    DegenerateMapError,
    IdentityViolationError,
    InvalidSpecError,
    RecurrenceOverflowError,
    ScheduleMismatchError,
)
from .mobius import MoebiusCoeffs, perturbed_parabolic_step

_OVERFLOW_LIMIT = 1e100


class PerturbationSequences:
    """Concrete per-step sequences rho_k, eps_k^2 for one composition.

    Parameters
    ----------
    rho : array_like of complex, length N+2
        Multiplicative factors, 1-based (slot 0 ignored and zeroed).
    eps_sq : array_like of complex, length N+2
        Squared additive perturbations, same indexing.
    rho_base : complex
        The reference rotation (e^{2 pi i / N} for all built-in schedules);
        the derived sequences are b_k = rho_k - rho_base and
        a_k = b_k - eps_k^2.

    Raises
    ------
    InvalidSpecError
        On length mismatch, non-finite entries, or perturbations outside
        the admissible region (|b_k| > 1 or |eps_k^2| > 1).
    """

    __slots__ = ("_rho", "_eps_sq", "_rho_base")

    def __init__(self, rho, eps_sq, rho_base: complex):
        rho = np.array(rho, dtype=complex)
        eps_sq = np.array(eps_sq, dtype=complex)
        if rho.ndim != 1 or rho.shape != eps_sq.shape:
            raise InvalidSpecError(
                f"rho and eps_sq must be 1-D with equal length, got {rho.shape} and {eps_sq.shape}")
        if rho.size < 3:
            raise InvalidSpecError("need at least N=1, i.e. arrays of length 3")
        rho[0] = 0.0
        eps_sq[0] = 0.0
        if not (np.all(np.isfinite(rho.view(float))) and np.all(np.isfinite(eps_sq.view(float)))):
            raise InvalidSpecError("sequences contain non-finite entries")
        rho_base = complex(rho_base)
        b = rho[1:] - rho_base
        if np.max(np.abs(b)) > 1.0 + 1e-12:
            raise InvalidSpecError(f"|b_k| must be <= 1, max is {np.max(np.abs(b))}")
        if np.max(np.abs(eps_sq[1:])) > 1.0 + 1e-12:
            raise InvalidSpecError(f"|eps_k^2| must be <= 1, max is {np.max(np.abs(eps_sq[1:]))}")
        rho.setflags(write=False)
        eps_sq.setflags(write=False)
        self._rho = rho
        self._eps_sq = eps_sq
        self._rho_base = rho_base

    @classmethod
    def from_eps(cls, rho, eps, rho_base: complex) -> "PerturbationSequences":
        """Build from eps_k rather than eps_k^2 (squares taken here)."""
        eps = np.asarray(eps, dtype=complex)
        return cls(rho, eps * eps, rho_base)

    @property
    def N(self) -> int:
        return self._rho.size - 2

    @property
    def rho(self) -> np.ndarray:
        return self._rho

    @property
    def eps_sq(self) -> np.ndarray:
        return self._eps_sq

    @property
    def rho_base(self) -> complex:
        return self._rho_base

    @property
    def b(self) -> np.ndarray:
        """b_k = rho_k - rho_base (slot 0 meaningless)."""
        out = self._rho - self._rho_base
        out[0] = 0.0
        return out

    @property
    def a(self) -> np.ndarray:
        """a_k = b_k - eps_k^2 (slot 0 meaningless)."""
        return self.b - self._eps_sq

    def eps_all_zero(self) -> bool:
        return bool(np.all(self._eps_sq[1:] == 0))

    def step_maps(self):
        """The per-step coefficient matrices, index 1 first (oracle input)."""
        return [perturbed_parabolic_step(self._rho[k], self._eps_sq[k])
                for k in range(1, self.N + 1)]


@dataclass(frozen=True)
class QRSTriple:
    """Recurrence outputs plus bookkeeping needed by downstream checks.

    ``rho_cumprod[k]`` is prod_{j<=k} rho_j (length N+1, index 0 = 1); it is
    the exact value of the Wronskian q_{k+1} r_k - r_{k+1} q_k and is carried
    along so corruption checks need no access to the original schedule.
    """

    q: np.ndarray
    r: np.ndarray
    s: np.ndarray
    rho_cumprod: np.ndarray
    eps_was_zero: bool

    @property
    def N(self) -> int:
        return self.q.size - 2


def _check_overflow(value: complex, name: str, k: int) -> None:
    if abs(value) > _OVERFLOW_LIMIT:
        raise RecurrenceOverflowError(
            f"|{name}_{k}| exceeded 1e100; schedule is far outside the perturbative regime")


def run_recurrences(seqs: PerturbationSequences, extended: bool = False) -> QRSTriple:
    """Advance the q, r, s recurrences for the full composition.

    Parameters
    ----------
    seqs : PerturbationSequences
    extended : bool
        When True, accumulate in compensated double-double arithmetic
        (inputs stay binary64).  Roughly 30x slower; removes essentially
        all accumulation rounding, leaving only input representation error.

    Returns
    -------
    QRSTriple

    Raises
    ------
    RecurrenceOverflowError
        If any sequence value exceeds 1e100 in modulus.
    """
    if extended:
        return _run_extended(seqs)
    N = seqs.N
    rho = seqs.rho
    es = seqs.eps_sq
    q = np.zeros(N + 2, dtype=complex)
    r = np.zeros(N + 2, dtype=complex)
    s = np.zeros(N + 1, dtype=complex)
    prod = np.ones(N + 1, dtype=complex)
    q[1] = 1.0
    r[0] = 1.0
    r[1] = 1.0
    s[1] = 1.0
    for k in range(1, N + 1):
        coeff = 1.0 + rho[k] - es[k]
        q[k + 1] = coeff * q[k] - rho[k] * q[k - 1]
        r[k + 1] = coeff * r[k] - rho[k] * r[k - 1]
        prod[k] = prod[k - 1] * rho[k]
        _check_overflow(q[k + 1], "q", k + 1)
        _check_overflow(r[k + 1], "r", k + 1)
    for k in range(1, N):
        coeff = 1.0 + rho[k + 1] - es[k + 1]
        s[k + 1] = coeff * s[k] - rho[k + 1] * s[k - 1]
        _check_overflow(s[k + 1], "s", k + 1)
    return QRSTriple(q=q, r=r, s=s, rho_cumprod=prod, eps_was_zero=seqs.eps_all_zero())


def _run_extended(seqs: PerturbationSequences) -> QRSTriple:
    # same recursion, complex double-double accumulators
    N = seqs.N
    rho = seqs.rho
    es = seqs.eps_sq
    one = dd.cfrom(1.0)
    q = np.zeros(N + 2, dtype=complex)
    r = np.zeros(N + 2, dtype=complex)
    s = np.zeros(N + 1, dtype=complex)
    prod = np.ones(N + 1, dtype=complex)
    q[1] = 1.0
    r[0] = 1.0
    r[1] = 1.0
    s[1] = 1.0
    qm, qk = dd.cfrom(0.0), dd.cfrom(1.0)
    rm, rk = dd.cfrom(1.0), dd.cfrom(1.0)
    pk = dd.cfrom(1.0)
    for k in range(1, N + 1):
        rk_in = dd.cfrom(complex(rho[k]))
        ek_in = dd.cfrom(complex(es[k]))
        coeff = dd.csub(dd.cadd(one, rk_in), ek_in)
        qn = dd.csub(dd.cmul(coeff, qk), dd.cmul(rk_in, qm))
        rn = dd.csub(dd.cmul(coeff, rk), dd.cmul(rk_in, rm))
        pk = dd.cmul(pk, rk_in)
        qm, qk = qk, qn
        rm, rk = rk, rn
        q[k + 1] = dd.cval(qn)
        r[k + 1] = dd.cval(rn)
        prod[k] = dd.cval(pk)
        _check_overflow(q[k + 1], "q", k + 1)
        _check_overflow(r[k + 1], "r", k + 1)
    sm, sk = dd.cfrom(0.0), dd.cfrom(1.0)
    for k in range(1, N):
        rk_in = dd.cfrom(complex(rho[k + 1]))
        ek_in = dd.cfrom(complex(es[k + 1]))
        coeff = dd.csub(dd.cadd(one, rk_in), ek_in)
        sn = dd.csub(dd.cmul(coeff, sk), dd.cmul(rk_in, sm))
        sm, sk = sk, sn
        s[k + 1] = dd.cval(sn)
        _check_overflow(s[k + 1], "s", k + 1)
    return QRSTriple(q=q, r=r, s=s, rho_cumprod=prod, eps_was_zero=seqs.eps_all_zero())


def closed_form_T(k: int, N: int) -> complex:
    """The unperturbed comparison value T_k = (1 - rho^k)/(1 - rho).

    Evaluated in the product form e^{i pi (k-1)/N} sin(pi k/N)/sin(pi/N),
    which is exact at the endpoints up to one rounding of the sine.
    """
    if not 0 <= k <= N + 1:
        raise ValueError(f"k must be in 0..N+1, got k={k}, N={N}")
    return cmath.exp(1j * math.pi * (k - 1) / N) * math.sin(math.pi * k / N) / math.sin(math.pi / N)


def closed_form_T_array(N: int) -> np.ndarray:
    """Vectorized T_k for k = 0..N+1."""
    k = np.arange(0, N + 2, dtype=float)
    return np.exp(1j * np.pi * (k - 1) / N) * np.sin(np.pi * k / N) / math.sin(math.pi / N)


@dataclass(frozen=True)
class ChebyshevPoint:
    """A point x = 2 cos(theta) on the Chebyshev interval [-2, 2]."""

    theta: float
    x: float

    def __post_init__(self):
        if not math.isfinite(self.theta) or not math.isfinite(self.x):
            raise ValueError("theta and x must be finite")
        if abs(self.x - 2.0 * math.cos(self.theta)) > 1e-9:
            raise ValueError(f"x={self.x} is not 2*cos(theta={self.theta})")
        if not -2.0 <= self.x <= 2.0:
            raise ValueError(f"x must lie in [-2, 2], got {self.x}")

    @classmethod
    def from_theta(cls, theta: float) -> "ChebyshevPoint":
        return cls(theta=theta, x=2.0 * math.cos(theta))


def chebyshev_U(k: int, point: ChebyshevPoint) -> float:
    """Second-kind Chebyshev value U_k = sin(k theta)/sin(theta).

    At sin(theta) == 0 the limit value k * cos(theta)^(k+1) is returned
    (k at x = 2, (-1)^(k+1) k at x = -2).
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    sin_t = math.sin(point.theta)
    if sin_t == 0.0:
        return float(k) * math.cos(point.theta) ** (k + 1)
    return math.sin(k * point.theta) / sin_t


def difference_formula(seqs: PerturbationSequences, triple: QRSTriple, k: int) -> complex:
    """Right-hand side of the exact perturbation expansion of q_k - T_k.

    Returns sum_{j=1}^{k-1} (a_j q_j - b_j q_{j-1}) T_{k-j}.  This equals
    q_k - closed_form_T(k, N) identically; callers check the residual.
    """
    N = seqs.N
    if not 2 <= k <= N + 1:
        raise ValueError(f"k must be in 2..N+1, got {k}")
    a = seqs.a
    b = seqs.b
    q = triple.q
    T = closed_form_T_array(N)
    j = np.arange(1, k)
    terms = (a[j] * q[j] - b[j] * q[j - 1]) * T[k - j]
    return complex(np.sum(terms))


def r_from_qs(seqs: PerturbationSequences, triple: QRSTriple, k: int) -> complex:
    """Reconstruct r_k from the q and s sequences: q_k - rho_1 * s_{k-1}."""
    if not 1 <= k <= seqs.N + 1:
        raise ValueError(f"k must be in 1..N+1, got {k}")
    return complex(triple.q[k] - seqs.rho[1] * triple.s[k - 1])


def wronskian_residual(triple: QRSTriple, k: int) -> float:
    """Relative defect of q_{k+1} r_k - r_{k+1} q_k against prod rho_j."""
    if not 0 <= k <= triple.N:
        raise ValueError(f"k must be in 0..N, got {k}")
    w = triple.q[k + 1] * triple.r[k] - triple.r[k + 1] * triple.q[k]
    expected = triple.rho_cumprod[k]
    return float(abs(w - expected) / abs(expected))


def coefficients_from_qr(triple: QRSTriple, N: int) -> MoebiusCoeffs:
    """Composed-map coefficients (q_{N+1}-q_N, r_N-r_{N+1}, -q_N, r_N).

    Raises
    ------
    DegenerateMapError
        If the Wronskian conservation law is violated beyond relative 1e-6,
        which indicates recurrence corruption rather than bad input.
    """
    if N > triple.N:
        raise ValueError(f"triple only covers N={triple.N}, asked for {N}")
    resid = wronskian_residual(triple, N)
    if resid > 1e-6:
        raise DegenerateMapError(f"Wronskian residual {resid:.3e} at k={N} exceeds 1e-6")
    return MoebiusCoeffs(
        triple.q[N + 1] - triple.q[N],
        triple.r[N] - triple.r[N + 1],
        -triple.q[N],
        triple.r[N],
    )


def coefficients_rho_only(triple: QRSTriple, N: int) -> MoebiusCoeffs:
    """Purely multiplicative form (q_{N+1}-q_N, 0, -q_N, 1).

    Valid only when the schedule had eps identically zero (then r_k == 1
    for all k and the general quadruple collapses to this one).
    """
    if not triple.eps_was_zero:
        raise ScheduleMismatchError("coefficients_rho_only requires an eps == 0 schedule")
    if N > triple.N:
        raise ValueError(f"triple only covers N={triple.N}, asked for {N}")
    return MoebiusCoeffs(triple.q[N + 1] - triple.q[N], 0.0, -triple.q[N], 1.0)


def martingale_sum(d, triple: QRSTriple, theta: float, n: int) -> complex:
    """Partial sum delta_n = sum_{k=0}^{n-1} d_k q_k e^{i k theta}.

    The summation convention is verified on the spot: for the additive
    regime (rho == 1, recurrence coefficient x + d_k with x = 2 cos theta)
    the identity

        sin(theta) * (q_n - U_n) = -Im(delta_n e^{-i n theta})

    holds exactly in exact arithmetic, so any residual beyond 1e-8 is an
    indexing or corruption bug and raises IdentityViolationError.

    Parameters
    ----------
    d : array_like
        Coefficient deviations d_k = (2 - eps_k^2) - x, indexed so that
        d[k] multiplies q_k; entries 0..n-1 are consumed (d[0] is
        irrelevant because q_0 = 0).
    triple : QRSTriple
        Output of run_recurrences for the schedule being probed.
    theta : float
        Comparison angle (pi/N for the random lab).
    n : int
        Number of terms, 1 <= n <= N+1.
    """
    N = triple.N
    if not 1 <= n <= N + 1:
        raise ValueError(f"n must be in 1..N+1, got {n}")
    d = np.asarray(d, dtype=complex)
    if d.size < n:
        raise ValueError(f"need at least n={n} entries of d, got {d.size}")
    k = np.arange(0, n)
    delta_n = complex(np.sum(d[:n] * triple.q[:n] * np.exp(1j * k * theta)))
    u_n = chebyshev_U(n, ChebyshevPoint.from_theta(theta))
    lhs = math.sin(theta) * (triple.q[n] - u_n)
    rhs = -(delta_n * cmath.exp(-1j * n * theta)).imag
    resid = abs(lhs - rhs)
    if resid > 1e-8:
        raise IdentityViolationError(
            f"martingale identity residual {resid:.3e} at n={n} exceeds 1e-8")
    return delta_n
