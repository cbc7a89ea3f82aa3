"""A continuous fixed circle in the plane, checked numerically.

The plane carries the norm ``||x + iy|| = sqrt(x^2/9 + 4 y^2)``; its unit
circle centred at 0 is the curve ``z(theta) = 3 cos(theta) + i sin(theta)/2``.
The map ``g`` is the identity on the closed first and third quadrants and

    g(z) = 36 z / (-35 (z^2 + conj(z)^2) + 74 z conj(z))

elsewhere.  The denominator equals ``4 x^2 + 144 y^2 = 36 ||z||^2``, so ``g``
fixes every point of the unit circle while moving points off it.  This is
the only binary64 code in the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from fixfig.spaces import ParameterError

__all__ = ["QuadrantPolicy", "EllipseDemoConfig", "EllipseDemoReport", "norm", "g_map", "demo_ellipse"]

OFF_FIGURE_PROBE = complex(-1.0, 0.5)


class QuadrantPolicy(str, enum.Enum):
    # piecewise: the map as defined; inversion-everywhere: apply the rational branch at every sample
    PIECEWISE = "piecewise"
    INVERSION_EVERYWHERE = "inversion-everywhere"


@dataclass(frozen=True)
class EllipseDemoConfig:
    n: int = 10000
    eps: float = 1e-9
    quadrant_policy: QuadrantPolicy = QuadrantPolicy.PIECEWISE

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"sample count must be >= 1, got {self.n}")
        if not self.eps > 0:
            raise ParameterError(f"tolerance must be > 0, got {self.eps}")
        object.__setattr__(self, "quadrant_policy", QuadrantPolicy(self.quadrant_policy))


@dataclass(frozen=True)
class EllipseDemoReport:
    config: EllipseDemoConfig
    max_deviation: float
    max_identity_error: float
    max_radius_error: float
    probe: complex
    probe_image: complex
    probe_deviation: float

    @property
    def on_figure_fixed(self) -> bool:
        return self.max_deviation < self.config.eps

    @property
    def identity_confirmed(self) -> bool:
        return self.max_identity_error < self.config.eps and self.max_radius_error < self.config.eps

    @property
    def probe_moves(self) -> bool:
        return self.probe_deviation > self.config.eps

    @property
    def passed(self) -> bool:
        return self.on_figure_fixed and self.identity_confirmed and self.probe_moves

    def as_dict(self) -> dict:
        return {
            "n": self.config.n,
            "eps": self.config.eps,
            "quadrant_policy": self.config.quadrant_policy.value,
            "max_deviation": self.max_deviation,
            "max_identity_relative_error": self.max_identity_error,
            "max_denominator_minus_36_relative_error": self.max_radius_error,
            "probe": [self.probe.real, self.probe.imag],
            "probe_image": [self.probe_image.real, self.probe_image.imag],
            "probe_deviation": self.probe_deviation,
            "status": "pass" if self.passed else "fail",
        }


def norm(z):
    z = np.asarray(z)
    return np.sqrt(z.real ** 2 / 9 + 4 * z.imag ** 2)


def _denominator(z):
    zc = np.conj(z)
    return -35 * (z * z + zc * zc) + 74 * z * zc


def g_map(z, policy: QuadrantPolicy | str = QuadrantPolicy.PIECEWISE):
    """Apply g elementwise; ``policy`` may force the rational branch everywhere."""
    z = np.asarray(z, dtype=complex)
    inverted = 36 * z / _denominator(z)
    if QuadrantPolicy(policy) is QuadrantPolicy.INVERSION_EVERYWHERE:
        return inverted
    identity_branch = z.real * z.imag >= 0
    return np.where(identity_branch, z, inverted)


def demo_ellipse(config: EllipseDemoConfig = EllipseDemoConfig()) -> EllipseDemoReport:
    theta = 2 * np.pi * np.arange(config.n) / config.n
    z = 3 * np.cos(theta) + 1j * np.sin(theta) / 2
    gz = g_map(z, config.quadrant_policy)
    deviation = float(np.max(norm(gz - z)))
    den = _denominator(z)
    x, y = z.real, z.imag
    closed_form = 4 * x ** 2 + 144 * y ** 2
    identity_err = float(np.max(np.abs(den - closed_form) / closed_form))
    radius_err = float(np.max(np.abs(den - 36) / 36))
    probe = OFF_FIGURE_PROBE
    probe_image = complex(g_map(np.array([probe]), config.quadrant_policy)[0])
    return EllipseDemoReport(
        config, deviation, identity_err, radius_err, probe, probe_image,
        float(norm(np.array([probe_image - probe]))[0]),
    )
