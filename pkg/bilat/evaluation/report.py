"""The evaluation report: success tables, force-accuracy ratings and histograms.

JSON keys:
  task             task name
  rating_rule      the rule behind every rating
  instructions     per instruction: trials, successes, success_rate ("k/n"), stages ("k/n" per stage),
                   crushed and slipped counts, mean force_accuracy
  force_accuracy   one entry per rated model or encoder run
  histograms       name -> {edges, counts, channel}
  outcomes         every TaskOutcome
  run_config       the effective configuration, when known
"""

import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from ..datasets.episode import Episode
from .force import RATING_RULE, ForceAccuracy
from .histograms import Histogram
from .outcomes import TaskOutcome
from .plotdata import write_histogram_csv, write_series_csv


logger = logging.getLogger(__name__)


class InstructionSummary(BaseModel):
    instruction: str
    trials: int
    successes: int
    success_rate: str
    stages: dict[str, str]
    crushed: int
    slipped: int
    force_accuracy: float | None = None


class Report(BaseModel):
    task: str
    rating_rule: str = RATING_RULE
    instructions: list[InstructionSummary] = Field(default_factory=list)
    force_accuracy: list[ForceAccuracy] = Field(default_factory=list)
    histograms: dict[str, Histogram] = Field(default_factory=dict)
    outcomes: list[TaskOutcome] = Field(default_factory=list)
    run_config: dict[str, Any] | None = None

    def summary(self, instruction: str) -> InstructionSummary:
        for item in self.instructions:
            if item.instruction == instruction:
                return item
        raise KeyError(instruction)


def summarize(outcomes: list[TaskOutcome]) -> list[InstructionSummary]:
    """One success-table row per instruction, in first-seen order."""
    grouped: dict[str, list[TaskOutcome]] = {}
    for outcome in outcomes:
        grouped.setdefault(outcome.instruction, []).append(outcome)
    rows = []
    for instruction, items in grouped.items():
        trials = len(items)
        successes = sum(item.success for item in items)
        stages = {stage: f"{sum(item.stages[stage] for item in items)}/{trials}" for stage in items[0].stages}
        scores = [item.force_accuracy for item in items if item.force_accuracy is not None]
        rows.append(InstructionSummary(
            instruction=instruction,
            trials=trials,
            successes=successes,
            success_rate=f"{successes}/{trials}",
            stages=stages,
            crushed=sum(item.crushed for item in items),
            slipped=sum(item.slipped for item in items),
            force_accuracy=float(np.mean(scores)) if scores else None,
        ))
    return rows


def build_report(outcomes: list[TaskOutcome], histograms: dict[str, Histogram],
                 force: list[ForceAccuracy] | None = None, run_config: dict[str, Any] | None = None) -> Report:
    if not outcomes:
        raise ValueError("a report needs at least one outcome")
    return Report(task=outcomes[0].task, instructions=summarize(outcomes), force_accuracy=force or [],
                  histograms=histograms, outcomes=outcomes, run_config=run_config)


def write_report(outcomes: list[TaskOutcome], histograms: dict[str, Histogram], path: str | Path, *,
                 force: list[ForceAccuracy] | None = None, episodes: dict[str, Episode] | None = None,
                 run_config: dict[str, Any] | None = None) -> Path:
    """Write the JSON report plus companion CSVs next to it.

    `<stem>.histograms.csv` holds every histogram; `<stem>.<label>.csv` holds the
    per-tick series of each episode in `episodes`.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report = build_report(outcomes, histograms, force, run_config)
    path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    write_histogram_csv(histograms, path.with_name(f"{path.stem}.histograms.csv"))
    for label, episode in (episodes or {}).items():
        write_series_csv(episode, path.with_name(f"{path.stem}.{label}.csv"))
    logger.info("report written", extra={"fields": {"path": str(path), "outcomes": len(outcomes)}})
    return path


def read_report(path: str | Path) -> Report:
    return Report.model_validate_json(Path(path).read_text(encoding="utf-8"))
