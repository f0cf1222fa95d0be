"""Command-line harness: generation, categorization, prediction, evaluation and calibration."""
