import numpy as np
import pytest

from fixfig.demo import EllipseDemoConfig, QuadrantPolicy, demo_ellipse, g_map, norm
from fixfig.spaces import ParameterError


@pytest.mark.parametrize("n", [1, 100, 10000])
def test_demo_passes(n):
    rep = demo_ellipse(EllipseDemoConfig(n=n, eps=1e-9))
    assert rep.passed
    assert rep.max_deviation < 1e-9


def test_axis_point_is_fixed_exactly():
    z = np.array([3 + 0j])
    assert g_map(z)[0] == z[0]
    assert norm(z)[0] == 1.0


def test_off_figure_probe_moves():
    z = complex(-1.0, 0.5)
    gz = complex(g_map(np.array([z]))[0])
    # denominator is 4 + 36 = 40 at this point
    assert gz == pytest.approx(36 * z / 40, rel=1e-15)
    assert demo_ellipse(EllipseDemoConfig(n=16)).probe_moves


def test_inversion_everywhere_still_fixes_the_figure():
    rep = demo_ellipse(EllipseDemoConfig(n=1000, quadrant_policy=QuadrantPolicy.INVERSION_EVERYWHERE))
    assert rep.on_figure_fixed and rep.identity_confirmed


def test_config_validation():
    with pytest.raises(ParameterError):
        EllipseDemoConfig(n=0)
    with pytest.raises(ParameterError):
        EllipseDemoConfig(eps=0)
