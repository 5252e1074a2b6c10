"""Parameters of the Meixner family and the scalar maps psi, psi_inv."""
from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


class Regime(str, enum.Enum):
    MEIXNER = "meixner"  # lambda < 2
    GAMMA = "gamma"      # lambda == 2
    PASCAL = "pascal"    # lambda > 2


@dataclass(frozen=True)
class MeixnerParams:
    """lambda together with its derived constants.

    ``alpha`` and ``beta`` are the roots of ``1 + lam z + z^2 = (1 - alpha z)(1 - beta z)``,
    ordered so that ``alpha`` has nonnegative imaginary part (lam < 2) or the
    larger real value (lam >= 2).
    """

    lam: float
    c: float
    alpha: complex
    beta: complex
    p: float | None
    regime: Regime

    @property
    def is_gamma(self) -> bool:
        return self.regime is Regime.GAMMA

    @property
    def gap(self) -> complex:
        """``alpha - beta``; purely imaginary in the Meixner regime."""
        return self.alpha - self.beta

    @property
    def lattice_step(self) -> float:
        """Spacing of the Pascal lattice, ``sqrt(lam^2 - 4)``."""
        if self.regime is not Regime.PASCAL:
            raise DomainError("lattice step is defined only for lam > 2")
        return math.sqrt(self.lam * self.lam - 4.0)

    @property
    def radius(self) -> float:
        """Radius of the disk on which the generating functions converge."""
        return 1.0 / max(abs(self.alpha), abs(self.beta))

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "c_lambda": self.c,
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "p_lambda": self.p,
            "regime": self.regime.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "MeixnerParams":
        return make_params(float(d["lambda"]))


def make_params(lam: float) -> MeixnerParams:
    lam = float(lam)
    if not math.isfinite(lam):
        raise DomainError(f"lambda must be finite, got {lam!r}")
    if lam < 0:
        raise DomainError("lambda must be >= 0 (negative lambda is the reflected measure)")
    if lam == 2.0:
        return MeixnerParams(lam, 1.0, complex(-1.0), complex(-1.0), None, Regime.GAMMA)
    if lam < 2.0:
        root = math.sqrt(4.0 - lam * lam)
        alpha = complex(-lam / 2.0, root / 2.0)
        return MeixnerParams(lam, lam / 2.0, alpha, alpha.conjugate(), None, Regime.MEIXNER)
    root = math.sqrt(lam * lam - 4.0)
    alpha = (-lam + root) / 2.0
    beta = (-lam - root) / 2.0
    c = 2.0 / (lam + root)
    p = (lam - root) / (lam + root)
    return MeixnerParams(lam, c, complex(alpha), complex(beta), p, Regime.PASCAL)


def _check_radius(params: MeixnerParams, z, radius: float, what: str):
    if np.any(np.abs(z) >= radius):
        raise DomainError(f"{what}: |z| must be < {radius:.6g}")


def psi(params: MeixnerParams, z):
    """Psi_lambda(z).  Accepts scalars or arrays; always returns complex."""
    z = np.asarray(z, dtype=np.complex128)
    _check_radius(params, z, params.radius, "psi")
    if params.is_gamma:
        out = z / (z + 1.0)
    else:
        a, b = params.alpha, params.beta
        out = (np.log1p(-b * z) - np.log1p(-a * z)) / (a - b)
    return out[()] if out.ndim == 0 else out


def psi_inv_radius(params: MeixnerParams) -> float:
    """Distance from 0 to the nearest pole of psi_inv."""
    if params.is_gamma:
        return 1.0
    a, b = params.alpha, params.beta
    base = cmath.log(b / a)
    return min(abs(base + 2j * math.pi * k) for k in (-1, 0, 1)) / abs(a - b)


def psi_inv(params: MeixnerParams, z):
    z = np.asarray(z, dtype=np.complex128)
    _check_radius(params, z, psi_inv_radius(params), "psi_inv")
    if params.is_gamma:
        out = z / (1.0 - z)
    else:
        a, b = params.alpha, params.beta
        ea, eb = np.exp(a * z), np.exp(b * z)
        den = a * ea - b * eb
        if np.any(np.abs(den) < 1e-14):
            raise DomainError("psi_inv: denominator vanishes")
        out = (ea - eb) / den
    return out[()] if out.ndim == 0 else out
