"""Constant-velocity and Kalman forecasters."""

from crowdbench.services.forecasters.config import KalmanConfig
from crowdbench.services.forecasters.constant_velocity import cv_forecast
from crowdbench.services.forecasters.kalman import KalmanRun, kalman_forecast, run_kalman

__all__ = ["KalmanConfig", "KalmanRun", "cv_forecast", "kalman_forecast", "run_kalman"]
