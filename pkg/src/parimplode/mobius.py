"""Moebius (linear fractional) transformations as coefficient quadruples.

A map z -> (a*z + b)/(c*z + d) is identified with its 2x2 coefficient
matrix up to a nonzero complex scale.  Everything here is deliberately
simple and direct: this module is the brute-force oracle against which
the recurrence machinery is validated, so it must stay independent of it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AllPointsSkippedError,
    DegenerateMapError,
    DegenerateNormalizationError,
    PoleProximityError,
)

_RENORM_EVERY = 64  # renormalize chain products this often to dodge overflow


def _require_finite(name: str, z: complex) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")


@dataclass(frozen=True)
class MoebiusCoeffs:
    """Coefficients of z -> (a*z + b)/(c*z + d).

    Parameters
    ----------
    a, b, c, d : complex
        Map coefficients.  The map must be non-degenerate (a*d - b*c != 0)
        and all components finite.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            _require_finite(name, getattr(self, name))
        if self.det() == 0:
            raise DegenerateMapError(f"degenerate coefficients {self.as_tuple()}")

    @classmethod
    def identity(cls) -> "MoebiusCoeffs":
        return cls(1.0, 0.0, 0.0, 1.0)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def scaled(self, lam: complex) -> "MoebiusCoeffs":
        """The same projective map with all coefficients multiplied by lam."""
        if lam == 0:
            raise ValueError("scale factor must be nonzero")
        return MoebiusCoeffs(lam * self.a, lam * self.b, lam * self.c, lam * self.d)

    def pole(self) -> complex | None:
        """The finite pole -d/c, or None when c == 0."""
        if self.c == 0:
            return None
        return -self.d / self.c


@dataclass(frozen=True)
class EvalRegion:
    """A closed disk in the plane with grid-evaluation parameters.

    ``pole_guard`` is the minimum admissible distance from the map's pole;
    grid points closer than that are skipped (and counted).  When left at
    None it defaults to ``1e-3 * radius``.
    """

    center: complex = 0.0
    radius: float = 0.25
    grid_points: int = 64
    pole_guard: float | None = field(default=None)

    def __post_init__(self):
        _require_finite("center", complex(self.center))
        if not (self.radius > 0):
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.pole_guard is None:
            object.__setattr__(self, "pole_guard", 1e-3 * self.radius)
        if not (self.pole_guard > 0):
            raise ValueError(f"pole_guard must be > 0, got {self.pole_guard}")

    def grid(self) -> np.ndarray:
        """Complex grid over the bounding square, masked to the disk.

        Returns a 1-D array of the in-disk points, in row-major order of
        the underlying (y, x) mesh so that "first maximum" is well defined.
        """
        xs = np.linspace(self.center.real - self.radius, self.center.real + self.radius, self.grid_points)
        ys = np.linspace(self.center.imag - self.radius, self.center.imag + self.radius, self.grid_points)
        X, Y = np.meshgrid(xs, ys)
        Z = (X + 1j * Y).ravel()
        return Z[np.abs(Z - self.center) <= self.radius]


def evaluate(map_: MoebiusCoeffs, z: complex, pole_threshold: float = 1e-12) -> complex:
    """Apply the map to a point.

    Raises
    ------
    PoleProximityError
        When |c*z + d| <= pole_threshold.  This marks the evaluation point
        as unusable; it is not a program bug.
    """
    denom = map_.c * z + map_.d
    if abs(denom) <= pole_threshold:
        raise PoleProximityError(f"evaluation at z={z!r} is within {pole_threshold} of the pole")
    return (map_.a * z + map_.b) / denom


def compose(outer: MoebiusCoeffs, inner: MoebiusCoeffs) -> MoebiusCoeffs:
    """Coefficient matrix product outer * inner (inner applied first).

    The determinant of the result must match the product of the input
    determinants to relative 1e-12; a violation means the product lost
    non-degeneracy to cancellation and raises DegenerateMapError.
    """
    a = outer.a * inner.a + outer.b * inner.c
    b = outer.a * inner.b + outer.b * inner.d
    c = outer.c * inner.a + outer.d * inner.c
    d = outer.c * inner.b + outer.d * inner.d
    det = a * d - b * c
    expected = outer.det() * inner.det()
    if abs(det - expected) > 1e-12 * abs(expected) or det == 0:
        raise DegenerateMapError(
            f"composition degenerated: det={det!r}, expected {expected!r}")
    return MoebiusCoeffs(a, b, c, d)


def compose_chain(maps, return_log_scale: bool = False):
    """Left-fold product M_n * ... * M_1 (index 1 applied first).

    Entries are renormalized by the largest modulus every 64 multiplies to
    prevent overflow on adversarial inputs; the accumulated log-scale is
    tracked separately and returned on request.  The returned coefficients
    therefore represent the product projectively.

    Parameters
    ----------
    maps : sequence of MoebiusCoeffs
        Non-empty; maps[0] is applied first.
    return_log_scale : bool
        When True, return (coeffs, log_scale) where the true product is
        exp(log_scale) * coeffs.

    Raises
    ------
    DegenerateMapError
        If any intermediate product degenerates.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("compose_chain requires at least one map")
    a, b, c, d = maps[0].as_tuple()
    log_scale = 0.0
    for i, m in enumerate(maps[1:], start=2):
        # product m * current, current applied first
        a, b, c, d = (
            m.a * a + m.b * c,
            m.a * b + m.b * d,
            m.c * a + m.d * c,
            m.c * b + m.d * d,
        )
        if i % _RENORM_EVERY == 0:
            scale = max(abs(a), abs(b), abs(c), abs(d))
            if scale == 0 or not math.isfinite(scale):
                raise DegenerateMapError(f"chain product degenerated at step {i}")
            a, b, c, d = a / scale, b / scale, c / scale, d / scale
            log_scale += math.log(scale)
    out = MoebiusCoeffs(a, b, c, d)
    if return_log_scale:
        return out, log_scale
    return out


def projective_coeff_error(map_: MoebiusCoeffs) -> float:
    """Scale-invariant coefficient distance from the identity.

    Returns |a/d - 1| + |b/d| + |c/d|; zero iff the map is projectively
    the identity.

    Raises
    ------
    DegenerateNormalizationError
        When |d| <= 1e-12; the map is far from the identity and the caller
        should report divergence instead.
    """
    if abs(map_.d) <= 1e-12:
        raise DegenerateNormalizationError(f"|d|={abs(map_.d)!r} too small to normalize")
    return abs(map_.a / map_.d - 1.0) + abs(map_.b / map_.d) + abs(map_.c / map_.d)


def projective_distance(m1: MoebiusCoeffs, m2: MoebiusCoeffs) -> float:
    """Phase-aligned distance between unit-normalized coefficient vectors.

    Both quadruples are scaled to unit Euclidean norm, then one is rotated
    by the phase that best aligns them; the result is the norm of the
    difference.  Zero iff the maps agree projectively.  This is the metric
    used for oracle cross-checks.
    """
    v1 = np.array(m1.as_tuple(), dtype=complex)
    v2 = np.array(m2.as_tuple(), dtype=complex)
    v1 /= np.linalg.norm(v1)
    v2 /= np.linalg.norm(v2)
    phase = np.vdot(v2, v1)
    mag = abs(phase)
    if mag == 0:  # orthogonal; maximal separation
        return math.sqrt(2.0)
    return float(np.linalg.norm(v1 - (phase / mag) * v2))


def identity_distance(map_: MoebiusCoeffs, region: EvalRegion):
    """Sup of |F(z) - z| over the region's grid, away from the pole.

    Parameters
    ----------
    map_ : MoebiusCoeffs
    region : EvalRegion

    Returns
    -------
    (sup_error, skipped_points) : (float, int)
        Maximum deviation over admissible grid points and the number of
        in-disk points discarded by the pole guard.

    Raises
    ------
    AllPointsSkippedError
        When the guard removes every grid point (gross divergence).
    """
    Z = region.grid()
    keep = np.ones(Z.shape, dtype=bool)
    pole = map_.pole()
    if pole is not None:
        keep = np.abs(Z - pole) >= region.pole_guard
    skipped = int(np.count_nonzero(~keep))
    Z = Z[keep]
    if Z.size == 0:
        raise AllPointsSkippedError("every grid point is within pole_guard of the pole")
    W = (map_.a * Z + map_.b) / (map_.c * Z + map_.d)
    sup = float(np.max(np.abs(W - Z)))
    return sup, skipped


def perturbed_parabolic_step(rho: complex, eps_sq: complex) -> MoebiusCoeffs:
    """One composition step z -> rho*z/(1-z) + eps^2 in matrix form.

    Clearing denominators gives the quadruple ((rho - eps^2, eps^2), (-1, 1));
    its determinant is rho.
    """
    return MoebiusCoeffs(rho - eps_sq, eps_sq, -1.0, 1.0)


def rotation_step(theta: float) -> MoebiusCoeffs:
    """Convenience builder for the pure multiplicative step with angle theta."""
    return perturbed_parabolic_step(cmath.exp(2j * math.pi * theta), 0.0)
