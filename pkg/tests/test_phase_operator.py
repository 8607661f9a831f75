"""Truncated phase operators: algebra, limits, and the commutator ladder."""

import warnings

import numpy as np
import pytest

from bcsbec.coherent import pegg_barnett


def _quiet(s, theta0=0.0, omega=4.0, state_phase=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return pegg_barnett(s, theta0, omega, state_phase=state_phase)


def test_exponential_phase_operator_is_unitary():
    ops, _ = _quiet(64)
    e = ops.exp_itheta
    eye = np.eye(e.shape[0])
    assert np.abs(e @ e.conj().T - eye).max() < 1e-12
    assert np.abs(e.conj().T @ e - eye).max() < 1e-12


def test_phase_operator_is_hermitian_with_branch_spectrum():
    theta0 = 0.6
    ops, _ = _quiet(32, theta0=theta0)
    t = ops.theta_op
    assert np.abs(t - t.conj().T).max() < 1e-12
    eig = np.sort(np.linalg.eigvalsh(t))
    expected = np.sort(theta0 + 2.0 * np.pi * np.arange(33) / 33.0)
    assert np.allclose(eig, expected, atol=1e-9)


def test_two_level_exponential_is_the_flip():
    ops, _ = _quiet(1, theta0=0.0)
    assert np.allclose(ops.exp_itheta, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-14)


def test_number_operator_diagonal():
    ops, _ = _quiet(16)
    assert np.allclose(ops.number_op, np.diag(np.arange(17.0)), atol=1e-12)


def test_commutator_deviation_decreases_along_the_ladder():
    devs = []
    for s in (64, 128, 256):
        _, report = _quiet(s)
        devs.append(report.deviation_from_canonical)
    assert devs[0] <= 0.05
    assert devs[0] > devs[1] > devs[2]


def test_truncation_warning_when_tail_not_contained():
    with pytest.warns(RuntimeWarning):
        _, report = pegg_barnett(8, 0.0, 4.0)
    assert report.truncation_warning
    # a well-contained state neither warns nor flags
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        _, report = pegg_barnett(64, 0.0, 4.0)
    assert not report.truncation_warning
    assert report.truncation_error < 1e-12


def test_state_phase_defaults_to_antipode():
    theta0 = 0.25
    _, report = _quiet(32, theta0=theta0)
    assert report.state_phase == pytest.approx(theta0 + np.pi, rel=1e-15)


def test_branch_cut_state_breaks_the_commutator():
    # a probe state centered on the branch cut sees the 2 pi jump; the
    # antipodal default avoids it
    _, on_cut = _quiet(64, state_phase=0.0)
    _, default = _quiet(64)
    assert on_cut.deviation_from_canonical > 100.0 * default.deviation_from_canonical


def test_validation():
    with pytest.raises(ValueError):
        pegg_barnett(0)
    with pytest.raises(ValueError):
        pegg_barnett(8, 0.0, 0.0)


def test_commutator_expectation_value_is_reported():
    _, report = _quiet(64)
    assert report.Omega == 4.0
    assert report.commutator_expectation.imag == pytest.approx(-1.0, abs=0.05)
    assert report.deviation_from_canonical == pytest.approx(
        abs(report.commutator_expectation + 1j), rel=1e-12
    )
