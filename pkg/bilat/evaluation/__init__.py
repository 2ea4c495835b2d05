"""Scoring of demonstrations and rollouts: stages, force accuracy, histograms and reports."""

from .bands import ForceBands, InstructionBand, cup_force_bands, default_force_bands, sponge_force_bands
from .errors import EmptyWindowError, EvaluationError, HistogramEdgeMismatchError, MissingSceneLogError
from .force import ForceAccuracy, InstructionScore, force_accuracy, rate
from .histograms import Histogram, grip_histogram, histogram_of, overlap_coefficient, pooled_histogram
from .outcomes import (JointStats, TaskOutcome, band_coverage, detect_cup_outcome, detect_outcome,
                       detect_sponge_outcome, gripper_torques, hold_window, joint_statistics)
from .plotdata import series_columns, write_histogram_csv, write_series_csv
from .report import InstructionSummary, Report, build_report, read_report, summarize, write_report


__all__ = [
    "EmptyWindowError",
    "EvaluationError",
    "ForceAccuracy",
    "ForceBands",
    "Histogram",
    "HistogramEdgeMismatchError",
    "InstructionBand",
    "InstructionScore",
    "InstructionSummary",
    "JointStats",
    "MissingSceneLogError",
    "Report",
    "TaskOutcome",
    "band_coverage",
    "build_report",
    "cup_force_bands",
    "default_force_bands",
    "detect_cup_outcome",
    "detect_outcome",
    "detect_sponge_outcome",
    "force_accuracy",
    "grip_histogram",
    "gripper_torques",
    "histogram_of",
    "hold_window",
    "joint_statistics",
    "overlap_coefficient",
    "pooled_histogram",
    "rate",
    "read_report",
    "series_columns",
    "sponge_force_bands",
    "summarize",
    "write_histogram_csv",
    "write_report",
    "write_series_csv",
]
