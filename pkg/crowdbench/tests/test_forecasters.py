import numpy as np
import pytest

from crowdbench.conftest import walking_track
from crowdbench.core.errors import ForecastError
from crowdbench.services.forecasters import KalmanConfig, cv_forecast, kalman_forecast, run_kalman


def test_cv_continues_a_line() -> None:
    """Constant velocity reproduces a straight walk exactly."""
    track = walking_track((1.0, -2.0), (0.8, 0.6), 21, 0.4)
    np.testing.assert_allclose(cv_forecast(track[:9], 12), track[9:], atol=1e-12)


def test_cv_velocity_offset_is_per_step() -> None:
    """The offset is added to the last displacement."""
    track = walking_track((0.0, 0.0), (1.0, 0.0), 9, 0.4)
    prediction = cv_forecast(track, 2, velocity_offset=np.array([0.0, 0.1]))
    np.testing.assert_allclose(prediction, [[3.6, 0.1], [4.0, 0.2]], atol=1e-12)


def test_cv_needs_two_points() -> None:
    """One observed point has no velocity."""
    with pytest.raises(ForecastError):
        cv_forecast(np.zeros((1, 2)), 12)


def test_kalman_matches_noise_free_line() -> None:
    """On noise-free linear input the filter agrees with constant velocity."""
    track = walking_track((0.0, 1.0), (1.2, -0.3), 21, 0.4)
    prediction = kalman_forecast(track[:9], KalmanConfig(), 12)
    assert np.hypot(*(prediction[-1] - track[-1])) < 1e-6
    np.testing.assert_allclose(prediction, cv_forecast(track[:9], 12), atol=1e-6)


def test_kalman_single_point_stands_still() -> None:
    """A single observation starts with zero velocity."""
    prediction = kalman_forecast(np.array([[2.0, 3.0]]), KalmanConfig(), 4)
    np.testing.assert_allclose(prediction, np.tile([2.0, 3.0], (4, 1)))


def test_kalman_covariance_history() -> None:
    """One covariance per update, each symmetric and positive definite."""
    run = run_kalman(walking_track((0.0, 0.0), (1.0, 0.0), 9, 0.4), KalmanConfig())
    assert len(run.covariances) == 8
    for covariance in run.covariances:
        np.testing.assert_allclose(covariance, covariance.T, atol=1e-12)
        assert np.linalg.eigvalsh(covariance).min() > 0


def test_kalman_tolerates_position_noise() -> None:
    """With default settings, 5 cm position noise keeps the final error under 0.5 m in 99% of trials."""
    rng = np.random.default_rng(7)
    config = KalmanConfig()
    truth = walking_track((0.0, 0.0), (1.0, 0.5), 21, 0.4)
    trials = 1000
    passed = 0
    for _ in range(trials):
        observation = truth[:9] + rng.normal(scale=0.05, size=(9, 2))
        prediction = kalman_forecast(observation, config, 12)
        passed += np.hypot(*(prediction[-1] - truth[-1])) < 0.5
    assert passed >= 0.99 * trials
