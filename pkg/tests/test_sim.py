import math
from fractions import Fraction

import numpy as np
import pytest

from supersle.catalog import walk_classical
from supersle.sim import (DEFAULT_GRID, SimConfig, brownian_increments, closed_form_error, estimate_martingale,
                          loewner_closed_form, simulate_sle)


def small(**kw):
    base = dict(kappa=Fraction(8, 3), paths=50, steps=200, t_max=0.5, seed=3, checkpoints=4)
    base.update(kw)
    return SimConfig(**base)


def test_starts_at_grid():
    tr = simulate_sle(small())
    assert tr.times[0] == 0
    assert np.allclose(tr.g[0], np.asarray(DEFAULT_GRID)[None, :])
    assert np.allclose(tr.f[0], tr.g[0])


def test_shifted_map_identity():
    tr = simulate_sle(small())
    assert np.max(np.abs(tr.f + tr.driver[:, :, None] - tr.g)) < 1e-12


def test_driver_is_scaled_brownian_motion():
    cfg = small(checkpoints=200)
    tr = simulate_sle(cfg)
    dB = brownian_increments(cfg.seed, cfg.paths, cfg.steps, cfg.dt)
    assert np.allclose(tr.driver[-1], math.sqrt(8 / 3) * dB.sum(axis=1))


def test_checkpoints_include_end():
    tr = simulate_sle(small(checkpoints=7))
    assert math.isclose(tr.times[-1], 0.5)
    assert len(tr.times) == 8


def test_closed_form_at_zero_kappa():
    assert closed_form_error(1000, 1.0) < 1e-3


def test_closed_form_branch():
    w = loewner_closed_form(np.asarray(DEFAULT_GRID), 1.0)
    assert (w.imag > 0).all()
    assert np.allclose(w ** 2, np.asarray(DEFAULT_GRID) ** 2 + 4)


def test_first_order_convergence():
    e1, e2 = closed_form_error(500), closed_form_error(1000)
    assert 1.5 <= e1 / e2 <= 2.5


def test_determinism():
    a, b = simulate_sle(small()), simulate_sle(small())
    assert np.array_equal(a.g, b.g)
    c = simulate_sle(small(seed=4))
    assert not np.array_equal(a.g, c.g)


def test_adding_paths_keeps_existing_ones():
    a = simulate_sle(small(paths=10))
    b = simulate_sle(small(paths=25))
    assert np.array_equal(a.g, b.g[:, :10])


def test_imaginary_part_decays_without_noise():
    tr = simulate_sle(small(kappa=0, checkpoints=20))
    im = tr.g[:, 0].imag
    assert (im > 0).all()
    assert (np.diff(im, axis=0) < 0).all()


@pytest.mark.parametrize("kw", [dict(kappa=-1), dict(steps=0), dict(paths=0), dict(t_max=0),
                                dict(seed=-1), dict(grid=(1 + 0j,))])
def test_invalid_configs(kw):
    with pytest.raises(ValueError):
        small(**kw)


def test_martingale_estimate_small_sample():
    rep = estimate_martingale(small(paths=400, steps=200, t_max=1.0), walk_classical(Fraction(8, 3)))
    assert rep.passed, rep.details
    assert rep.details["components"]
    assert rep.to_json()["status"] == "pass"


def test_martingale_estimate_rejects_off_locus():
    w = walk_classical(Fraction(8, 3), c=Fraction(1, 2), delta=Fraction(1, 3))
    rep = estimate_martingale(small(paths=400, steps=200, t_max=1.0), w)
    assert not rep.passed
    assert rep.details["max_abs_z"] > 10


def test_closed_form_at_i_before_it_reaches_the_driver():
    # z = i meets the driver 0 at t = 1/4
    assert closed_form_error(1000, 0.2, grid=(1j,)) < 1e-3
    assert abs(loewner_closed_form(1j, 0.25)) < 1e-12
