import math

import numpy as np
import pytest

from pushcut import berq, qhuber, qnorm

ALL_LOSSES = [
    qnorm(1.25), qnorm(1.5), qnorm(2.0), qnorm(4.0),
    qhuber(1.5, 1e-3), qhuber(1.2, 0.1), berq(1.5, 1e-3), berq(1.8, 0.04),
]
REGIME_3A = [s for s in ALL_LOSSES if s.regime == "3a"]


def test_constants():
    assert qnorm(1.5).regime == "3a"
    assert qnorm(1.5).c == pytest.approx(0.5)
    assert qnorm(1.5).k == pytest.approx(2 ** 0.5)
    assert qnorm(2.0).regime == "3b"
    assert qnorm(2.0).c == 1.0
    assert qnorm(2.0).k == 1.0
    assert qnorm(4.0).regime == "3b"
    assert qnorm(4.0).c == 3.0
    assert qhuber(1.5, 1e-3).c == pytest.approx(0.5)
    assert berq(1.5, 1e-3).c == 1.0
    assert berq(1.5, 1e-3).k == pytest.approx(2 ** 0.5)


def test_parameter_validation():
    with pytest.raises(ValueError):
        qnorm(1.0)
    with pytest.raises(ValueError):
        qhuber(2.0)          # core families need q < 2
    with pytest.raises(ValueError):
        berq(2.5)
    with pytest.raises(ValueError):
        qhuber(1.5, delta=0.0)
    with pytest.raises(ValueError):
        berq(1.5, delta=1.0)


def test_domain_rejection():
    spec = qnorm(1.5)
    with pytest.raises(ValueError):
        spec.value(1.5)
    with pytest.raises(ValueError):
        spec.deriv(-1.01)
    with pytest.raises(ValueError):
        spec.deriv_inverse(1.1)


def test_value_examples():
    assert qnorm(2.0).value(0.5) == pytest.approx(0.125)
    assert berq(1.5, 0.1).value(0.0) == 0.0
    # both branches agree at |x| = delta (value is delta^q / 2)
    qh = qhuber(1.5, 0.1)
    quad = 0.5 * 0.1 ** (1.5 - 2.0) * 0.1 ** 2
    power = 0.1 ** 1.5 / 1.5 + ((1.5 - 2.0) / (2 * 1.5)) * 0.1 ** 1.5
    assert quad == pytest.approx(power, abs=1e-15)
    assert qh.value(0.1) == pytest.approx(0.1 ** 1.5 / 2.0)


def test_deriv_examples():
    assert qnorm(1.5).deriv(0.25) == pytest.approx(0.5)
    assert qnorm(2.0).deriv(-0.3) == pytest.approx(-0.3)
    # quadratic-core branch: delta^(q-2) * x
    spec = qhuber(1.5, 0.04)
    assert spec.deriv(0.01) == pytest.approx(0.05)
    fd = (spec.value(0.01 + 1e-8) - spec.value(0.01 - 1e-8)) / 2e-8
    assert spec.deriv(0.01) == pytest.approx(fd, abs=1e-6)


def test_deriv_inverse_examples():
    assert qnorm(2.0).deriv_inverse(0.25) == pytest.approx(0.25)
    assert qnorm(1.5).deriv_inverse(0.5) == pytest.approx(0.25)
    spec = qhuber(1.5, 0.04)
    assert spec.deriv_inverse(0.05) == pytest.approx(0.01)
    assert spec.deriv(spec.deriv_inverse(0.05)) == pytest.approx(0.05, rel=1e-14)


@pytest.mark.parametrize("spec", ALL_LOSSES, ids=lambda s: f"{s.kind}-{s.q}")
def test_deriv_at_one_and_antisymmetry(spec):
    assert spec.deriv(1.0) == pytest.approx(1.0)
    rng = np.random.default_rng(0)
    for t in rng.uniform(-1, 1, size=200):
        assert spec.deriv(-t) == pytest.approx(-spec.deriv(t), abs=1e-15)
        assert spec.value(-t) == pytest.approx(spec.value(t), abs=1e-15)


@pytest.mark.parametrize("spec", [qhuber(1.5, 1e-3), qhuber(1.2, 0.1),
                                  berq(1.5, 1e-3), berq(1.8, 0.04)],
                         ids=lambda s: f"{s.kind}-{s.q}-{s.delta}")
def test_continuity_at_core_edge(spec):
    d = spec.delta
    for sign in (1.0, -1.0):
        below = spec.value(sign * d * (1 - 1e-13))
        above = spec.value(sign * d * (1 + 1e-13))
        assert abs(below - above) < 1e-12
        below = spec.deriv(sign * d * (1 - 1e-13))
        above = spec.deriv(sign * d * (1 + 1e-13))
        assert abs(below - above) < 1e-12


@pytest.mark.parametrize("spec", ALL_LOSSES, ids=lambda s: f"{s.kind}-{s.q}")
def test_deriv_matches_finite_differences(spec):
    rng = np.random.default_rng(1)
    h = 1e-7
    checked = 0
    for t in rng.uniform(-1 + 2 * h, 1 - 2 * h, size=400):
        if spec.delta and abs(abs(t) - spec.delta) < 10 * h:
            continue  # kink of the spliced families
        fd = (spec.value(t + h) - spec.value(t - h)) / (2 * h)
        assert spec.deriv(t) == pytest.approx(fd, rel=2e-5, abs=1e-6)
        checked += 1
    assert checked > 300


@pytest.mark.parametrize("spec", REGIME_3A, ids=lambda s: f"{s.kind}-{s.q}")
def test_subadditive_increment_3a(spec):
    rng = np.random.default_rng(2)
    for _ in range(10_000):
        t = rng.uniform(-1, 1)
        dt = rng.uniform(0, min(1.0, 1 - t))
        if dt <= 0:
            continue
        lhs = spec.deriv(t + dt)
        rhs = spec.deriv(t) + spec.k * spec.deriv(dt)
        assert lhs <= rhs + 1e-12


@pytest.mark.parametrize("spec", [qnorm(2.0), qnorm(3.5), qnorm(4.0)],
                         ids=lambda s: f"{s.kind}-{s.q}")
def test_superadditive_increment_3b(spec):
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        t = rng.uniform(0, 1)
        dt = rng.uniform(0, 1 - t)
        if dt <= 0:
            continue
        lhs = spec.deriv(t + dt)
        rhs = spec.deriv(t) + spec.k * spec.deriv(dt)
        assert lhs >= rhs - 1e-12


@pytest.mark.parametrize("spec", REGIME_3A + [qnorm(2.0), qnorm(4.0)],
                         ids=lambda s: f"{s.kind}-{s.q}")
def test_inverse_roundtrip(spec):
    for t in np.linspace(0.0, 1.0, 501):
        y = spec.deriv(t)
        assert spec.deriv_inverse(y) == pytest.approx(t, abs=1e-12)


def test_zero_fast_path():
    for spec in ALL_LOSSES:
        assert spec.value(0.0) == 0.0
        assert spec.deriv(0.0) == 0.0
        assert spec.deriv_inverse(0.0) == 0.0
        assert math.isfinite(spec.deriv(1e-300))
