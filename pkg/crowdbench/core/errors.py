"""Exception hierarchy for the benchmark.

Classes:
    CrowdBenchError: Base class; the CLI reports these and exits with status 1.
    NDJSONParseError: A line could not be decoded or has the wrong shape.
    DatasetValidationError: Records are individually fine but jointly inconsistent.
    IncompleteTrackError: A primary pedestrian misses a sampled frame of its window.
    UndefinedHeadingError: The reference pedestrian is (near) stationary.
    ForecastError: A forecaster got an observation it cannot extrapolate.
    ScenarioPlacementError: Circle placement exceeded its retry budget.
    MetricError: Inputs of a metric are misaligned.
    MissingNeighbourPredictionsError: Col-I requested without joint predictions.
    PoolingError: Feature vectors of a social grid disagree in dimension.
    CalibrationError: The parameter grid is empty or names unknown parameters.
    ReportError: Predictions and dataset disagree on scene ids.
"""


class CrowdBenchError(Exception):
    """Base error of the package."""


class NDJSONParseError(CrowdBenchError):
    """Raised on a malformed NDJSON line.

    Attributes:
        line_number (int): 1-based line number of the offending record.
    """

    def __init__(self, line_number: int, message: str):
        """Initialize the error.

        Args:
            line_number (int): 1-based line number of the offending record.
            message (str): What was wrong with it.
        """
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DatasetValidationError(CrowdBenchError):
    """Raised when a dataset violates one of its invariants."""


class IncompleteTrackError(DatasetValidationError):
    """Raised when a primary track is not complete over its window."""


class UndefinedHeadingError(CrowdBenchError):
    """Raised when a heading is requested for a (near) stationary pedestrian."""


class ForecastError(CrowdBenchError):
    """Raised when a forecaster cannot run on the given observation."""


class ScenarioPlacementError(CrowdBenchError):
    """Raised when agents cannot be placed on the circle."""


class MetricError(CrowdBenchError):
    """Raised on inconsistent metric inputs."""


class MissingNeighbourPredictionsError(MetricError):
    """Raised when Col-I is computed for a prediction without neighbour tracks."""


class PoolingError(CrowdBenchError):
    """Raised on inconsistent grid inputs."""


class CalibrationError(CrowdBenchError):
    """Raised on an unusable calibration grid."""


class ReportError(CrowdBenchError):
    """Raised when predictions and dataset cannot be joined."""
