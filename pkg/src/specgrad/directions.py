"""Search-direction strategies: the spectral CG update and its baselines.

All strategies produce d_new = -theta * g_new + beta * d_prev:

* ``scgmmwls``  beta is the truncated max(beta_L, beta_R) computed from the
  modified secant vector z; theta is the quasi-Newton-motivated quotient,
  truncated into [1/4 + eta, tau] with fallback 1.
* ``m2``        identical formulas with the max(mu, 0)-truncated vector v.
* ``dk``        theta = 1 and the curvature-corrected beta built from y.
* ``jian``      the same beta as dk plus its own truncated spectral theta.

Degenerate denominators and numerically non-descent results never escape:
they restart the direction at -g_new and are flagged in the diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numkit import Vector, dot, norm2
from .secant import SecantData, SecantParams, v_vector_m2

METHODS = ("scgmmwls", "dk", "jian", "m2")

# Denominators smaller than this (relative to the factor norms) are treated as
# degenerate rather than divided through.
_DEGENERATE_REL = 1e-300


class DegenerateCurvatureError(ArithmeticError):
    """d^T z vanished; the conjugate parameter is undefined."""


class DegenerateSpectralError(ArithmeticError):
    """g_new^T z vanished; the spectral quotient is undefined."""


@dataclass(frozen=True)
class DirectionParams:
    method: str = "scgmmwls"
    eta: float = 1e-3
    tau: float = 10.0
    secant: SecantParams = SecantParams()

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method '{self.method}'; known: {', '.join(METHODS)}")
        if not self.eta > 0.0:
            raise ValueError("eta must be positive")
        if not 0.25 + self.eta < self.tau:
            raise ValueError(f"need 1/4 + eta < tau, got eta={self.eta}, tau={self.tau}")


@dataclass
class DirectionDiag:
    beta: float = 0.0
    theta: float = 1.0
    truncated_theta: bool = False
    truncated_beta: bool = False
    restart: bool = False


def beta_m(g_new: Vector, g_old: Vector, d: Vector, z: Vector) -> tuple[float, bool]:
    """max(beta_L, beta_R); the flag reports whether the beta_R branch won."""
    dz = dot(d, z)
    if abs(dz) <= _DEGENERATE_REL * norm2(d) * norm2(z):
        raise DegenerateCurvatureError(f"d^T z = {dz}")
    beta_l = dot(g_new, z) / dz - (dot(z, z) / dz) * (dot(g_new, d) / dz)
    beta_r = dot(g_old, d) / dot(d, d)
    if beta_l >= beta_r:
        return beta_l, False
    return beta_r, True


def theta_tilde(g_new: Vector, s: Vector, d: Vector, z: Vector, beta: float) -> float:
    gz = dot(g_new, z)
    if abs(gz) <= _DEGENERATE_REL * norm2(g_new) * norm2(z):
        raise DegenerateSpectralError(f"g_new^T z = {gz}")
    return (dot(s, g_new) + beta * dot(d, z)) / gz


def theta_bar(theta_t: float, params: DirectionParams) -> float:
    """Identity on [1/4 + eta, tau]; everything else (non-finite included) maps to 1."""
    if 0.25 + params.eta <= theta_t <= params.tau:
        return theta_t
    return 1.0


def _restart(g_new: Vector, diag: DirectionDiag) -> tuple[Vector, DirectionDiag]:
    diag.beta = 0.0
    diag.theta = 1.0
    diag.restart = True
    return -g_new.copy(), diag


def _spectral_direction(g_new, prev_d, prev_g, s, w, params) -> tuple[Vector, DirectionDiag]:
    diag = DirectionDiag()
    try:
        beta, diag.truncated_beta = beta_m(g_new, prev_g, prev_d, w)
    except DegenerateCurvatureError:
        return _restart(g_new, diag)
    diag.beta = beta
    try:
        theta_t = theta_tilde(g_new, s, prev_d, w, beta)
    except DegenerateSpectralError:
        theta_t = math.nan
    theta = theta_bar(theta_t, params)
    diag.theta = theta
    diag.truncated_theta = theta != theta_t
    d = -theta * g_new + beta * prev_d
    if dot(g_new, d) <= -params.eta * dot(g_new, g_new):
        return d, diag
    return _restart(g_new, diag)


def next_direction_scgmmwls(
    g_new: Vector, prev_d: Vector, prev_g: Vector, secant: SecantData, params: DirectionParams
) -> tuple[Vector, DirectionDiag]:
    return _spectral_direction(g_new, prev_d, prev_g, secant.s, secant.z, params)


def next_direction_m2(
    g_new: Vector, prev_d: Vector, prev_g: Vector, secant: SecantData, params: DirectionParams
) -> tuple[Vector, DirectionDiag]:
    v = v_vector_m2(secant.y, secant.s, secant.mu, params.secant.m)
    return _spectral_direction(g_new, prev_d, prev_g, secant.s, v, params)


def next_direction_dk(
    g_new: Vector, prev_d: Vector, prev_g: Vector, y: Vector
) -> tuple[Vector, DirectionDiag]:
    diag = DirectionDiag()
    dy = dot(prev_d, y)
    if abs(dy) <= _DEGENERATE_REL * norm2(prev_d) * norm2(y):
        return _restart(g_new, diag)
    beta = dot(y, g_new) / dy - dot(y, y) * dot(prev_d, g_new) / (dy * dy)
    diag.beta = beta
    d = -g_new + beta * prev_d
    # Plain descent only; dk carries no eta-margin guarantee.
    if dot(g_new, d) >= 0.0 and dot(g_new, g_new) > 0.0:
        return _restart(g_new, diag)
    return d, diag


def next_direction_jian(
    g_new: Vector, prev_d: Vector, prev_g: Vector, y: Vector, s: Vector, params: DirectionParams
) -> tuple[Vector, DirectionDiag]:
    diag = DirectionDiag()
    dy = dot(prev_d, y)
    if abs(dy) <= _DEGENERATE_REL * norm2(prev_d) * norm2(y):
        return _restart(g_new, diag)
    beta = dot(y, g_new) / dy - dot(y, y) * dot(prev_d, g_new) / (dy * dy)
    diag.beta = beta
    yg = dot(y, g_new)
    if abs(yg) <= _DEGENERATE_REL * norm2(y) * norm2(g_new):
        theta_plus = math.nan
    else:
        theta_plus = 1.0 - (dot(y, y) * dot(prev_d, g_new) / dy - dot(s, g_new)) / yg
    theta = theta_bar(theta_plus, params)
    diag.theta = theta
    diag.truncated_theta = theta != theta_plus
    d = -theta * g_new + beta * prev_d
    if dot(g_new, d) <= -params.eta * dot(g_new, g_new):
        return d, diag
    return _restart(g_new, diag)


def next_direction(
    g_new: Vector, prev_d: Vector, prev_g: Vector, secant: SecantData, params: DirectionParams
) -> tuple[Vector, DirectionDiag]:
    """Dispatch to the configured strategy given the last accepted step's bundle."""
    if params.method == "scgmmwls":
        return next_direction_scgmmwls(g_new, prev_d, prev_g, secant, params)
    if params.method == "m2":
        return next_direction_m2(g_new, prev_d, prev_g, secant, params)
    if params.method == "dk":
        return next_direction_dk(g_new, prev_d, prev_g, secant.y)
    if params.method == "jian":
        return next_direction_jian(g_new, prev_d, prev_g, secant.y, secant.s, params)
    raise ValueError(f"unknown method '{params.method}'")
