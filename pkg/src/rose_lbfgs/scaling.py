"""Cautious trust intervals, Barzilai-Borwein scalars, and diagonal seeds.

Given a step s and the structured secant residual z = y - S s, this module
produces the next diagonal seed part D: the BB scalars measure the average
curvature s carries about z, the trust interval bounds the admissible seed
spectrum as a function of the gradient norm, and the diagonal builder fits
entries z_j / s_j clamped into that interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .operators import DiagonalOp


@dataclass(frozen=True)
class BBScalars:
    """Scalar curvature estimates of z against s.

    tau_s = z's/||s||^2, tau_g = ||z||/||s||, tau_z = ||z||^2/(z's); tau_z
    is ``None`` when z's = 0. Whenever rho = z's > 0 the ordering
    0 < tau_s <= tau_g <= tau_z holds.
    """

    tau_s: float
    tau_g: float
    tau_z: float | None
    rho: float


@dataclass(frozen=True)
class TrustInterval:
    """Admissible seed-spectrum range [lower, upper] inside [omega_l, omega_u]."""

    lower: float
    upper: float
    omega_l: float
    omega_u: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")
        if self.lower < self.omega_l or self.upper > self.omega_u:
            raise ValueError("interval escapes its cautious bounds")

    def clamp(self, t: float) -> float:
        """Project a scalar onto [lower, upper]."""
        return min(self.upper, max(self.lower, t))


class SeedFormula(enum.Enum):
    """Diagonal entry rule: signed ratio (DS) or absolute ratio (DG)."""

    DS = "ds"
    DG = "dg"


class BoundChoice(enum.Enum):
    """Restriction [a, b] intersected with the trust interval.

    FULL keeps (omega_l, omega_u); UPPER_Z caps above by |tau_z|; BB_BAND
    additionally raises the floor to |tau_s|.
    """

    FULL = "full"
    UPPER_Z = "upperz"
    BB_BAND = "bbband"


@dataclass(frozen=True)
class DiagonalSeedVariant:
    formula: SeedFormula
    bound_choice: BoundChoice


def bb_scalars(s: np.ndarray, z: np.ndarray) -> BBScalars:
    """Compute the three BB curvature scalars for a step s and residual z.

    Raises ``ValueError`` when s = 0 (the caller guarantees a step was taken).
    """
    s = np.asarray(s, dtype=float)
    z = np.asarray(z, dtype=float)
    s_norm2 = float(s @ s)
    if s_norm2 == 0.0:
        raise ValueError("bb_scalars requires a nonzero step s")
    rho = float(z @ s)
    z_norm2 = float(z @ z)
    tau_s = rho / s_norm2
    tau_g = math.sqrt(z_norm2 / s_norm2)
    tau_z = z_norm2 / rho if rho != 0.0 else None
    return BBScalars(tau_s=tau_s, tau_g=tau_g, tau_z=tau_z, rho=rho)


def cautious_bounds(grad_norm: float, cfg) -> tuple[float, float]:
    """Gradient-norm-driven bounds (omega_l, omega_u) for the seed spectrum.

    omega_l = min(c0, c1*g^c2) and omega_u = max(C0, 1/(c1*g^c2)); a zero
    gradient norm yields (0, inf). ``cfg`` supplies c0, C0, c1, c2.
    """
    if grad_norm < 0:
        raise ValueError("grad_norm must be >= 0")
    if grad_norm == 0.0:
        return 0.0, math.inf
    powered = cfg.c1 * grad_norm**cfg.c2
    return min(cfg.c0, powered), max(cfg.C0, 1.0 / powered)


def trust_interval(bb: BBScalars, bounds: tuple[float, float]) -> TrustInterval:
    """Trust interval T for the next seed, from the sign of rho = z's.

    Positive curvature keeps the full [omega_l, omega_u]; otherwise the
    upper end is tau_g projected onto the bounds.
    """
    omega_l, omega_u = bounds
    if bb.rho > 0:
        upper = omega_u
    else:
        upper = min(omega_u, max(omega_l, bb.tau_g))
    return TrustInterval(lower=omega_l, upper=upper, omega_l=omega_l, omega_u=omega_u)


def restrict_interval(
    T: TrustInterval, variant: DiagonalSeedVariant, bb: BBScalars
) -> TrustInterval:
    """Intersect T with the variant's BB band [a, b].

    Uses |tau_s| and |tau_z| so a negative-curvature step still yields a
    usable band; an undefined tau_z leaves the upper end at omega_u. An
    empty intersection collapses to the nearest endpoint of T.
    """
    lo, hi = T.lower, T.upper
    if variant.bound_choice is not BoundChoice.FULL:
        cap = abs(bb.tau_z) if bb.tau_z is not None else T.omega_u
        hi = min(hi, cap)
        if variant.bound_choice is BoundChoice.BB_BAND:
            lo = max(lo, abs(bb.tau_s))
    if lo > hi:
        # |tau_z| below T or |tau_s| above T; the two cannot happen at once
        point = T.lower if hi < T.lower else T.upper
        lo = hi = point
    return TrustInterval(lower=lo, upper=hi, omega_l=T.omega_l, omega_u=T.omega_u)


def build_diagonal_seed(
    s: np.ndarray,
    z: np.ndarray,
    T_hat: TrustInterval,
    formula: SeedFormula,
    prev_diag: np.ndarray,
) -> DiagonalOp:
    """Fit the next diagonal seed part to z_j ~ gamma_j * s_j inside T_hat.

    Entry j is clamp(z_j/s_j) for DS and clamp(|z_j/s_j|) for DG; where
    s_j = 0 the previous diagonal entry is carried forward, clamped.
    """
    s = np.asarray(s, dtype=float)
    z = np.asarray(z, dtype=float)
    prev_diag = np.asarray(prev_diag, dtype=float)
    if not (s.shape == z.shape == prev_diag.shape):
        raise ValueError("s, z, and prev_diag must share one shape")
    moved = s != 0.0
    ratio = np.divide(z, s, out=prev_diag.astype(float), where=moved)
    if formula is SeedFormula.DG:
        ratio = np.where(moved, np.abs(ratio), ratio)
    return DiagonalOp(np.clip(ratio, T_hat.lower, T_hat.upper))
