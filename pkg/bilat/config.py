"""RunConfig: the single JSON document driving every pipeline stage.

Task-specific values left out of the document are filled from the task's
preset, so `{"task": "cup", "seed": 0}` is a complete configuration.
"""

import json
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .control.controller import BilateralController
from .control.gains import ControllerGains, ObserverConfig
from .datasets.dabi import DabiConfig
from .datasets.expert import ExpertTargets, OperatorConfig
from .evaluation.bands import ForceBands, default_force_bands
from .lang.encoders import EncoderSelection, HashedEncoder
from .lang.encoders.base import LanguageEncoder
from .lang.prompt import PromptTemplate
from .policy.config import PolicyConfig
from .policy.train import OptimizerSettings
from .runtime.rollout import RolloutConfig
from .sim.tasks import TaskSelection, get_task_preset
from .sim.world import Simulation


EXPERT_PRESETS: dict[str, dict[str, ExpertTargets]] = {
    "cup": {
        "softly grasp the cup": ExpertTargets(torque_target=0.03),
        "strongly grasp the cup": ExpertTargets(torque_target=0.17),
    },
    "sponge": {
        "softly twist the sponge": ExpertTargets(torque_target=0.05, twist=0.2),
        "strongly twist the sponge": ExpertTargets(torque_target=0.2, twist=1.2),
    },
}
DURATION_PRESETS = {"cup": 10.0, "sponge": 8.5}


class GainSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    kp: float = Field(default=400.0, gt=0)
    kd: float | None = Field(default=None, gt=0)
    kf: float = Field(default=1.0, gt=0)


class ObserverSettings(BaseModel):
    """Observer cutoff plus the inertia scale of the nominal model (1.0 = exact plant)."""

    model_config = ConfigDict(frozen=True)

    cutoff: float = Field(default=100.0, gt=0)
    inertia_scale: float = Field(default=1.0, gt=0)
    velocity_source: Literal["state", "difference"] = "state"


class PolicySettings(BaseModel):
    """Architecture fields of PolicyConfig; shapes come from the task and the encoder."""

    model_config = ConfigDict(frozen=True)

    encoder_layers: int = Field(default=4, ge=1)
    decoder_layers: int = Field(default=7, ge=1)
    model_dim: int = Field(default=128, gt=0)
    head_count: int = Field(default=8, gt=0)
    feedforward_dim: int = Field(default=256, gt=0)
    chunk_size: int = Field(default=20, ge=1)
    latent_dim: int = Field(default=16, gt=0)
    kl_weight: float = Field(default=10.0, ge=0)
    backbone_channels: tuple[int, int, int, int] = (8, 16, 32, 32)
    use_language: bool = True
    dtype: Literal["float32", "float64"] = "float32"


class RolloutSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int = Field(default=5, gt=0)
    duration: float | None = Field(default=None, gt=0)
    ensembling: bool = True
    decay: float = Field(default=0.01, ge=0)
    replan: Literal["step", "chunk"] = "step"
    mode: Literal["sync", "async"] = "sync"
    home_jitter: float = Field(default=0.01, ge=0)


class PathSettings(BaseModel):
    """Artifact locations, relative to the working directory unless absolute."""

    model_config = ConfigDict(frozen=True)

    demos: Path = Path("demos")
    augmented: Path = Path("aug")
    checkpoint: Path = Path("model.blatm")
    training_log: Path = Path("training_log.csv")
    rollouts: Path = Path("rollouts")
    report: Path = Path("report.json")
    plotdata: Path = Path("plotdata")


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    task: TaskSelection
    seed: int
    gains: GainSettings = GainSettings()
    observer: ObserverSettings = ObserverSettings()
    operator: OperatorConfig = OperatorConfig()
    experts: dict[str, ExpertTargets] | None = None
    """Expert targets per instruction."""
    episodes_per_instruction: int = Field(default=3, gt=0)
    demo_duration: float | None = Field(default=None, gt=0)
    dabi: DabiConfig = DabiConfig()
    template: PromptTemplate = PromptTemplate()
    encoder: EncoderSelection = HashedEncoder()
    comparison_encoders: list[EncoderSelection] = Field(default_factory=list)
    policy: PolicySettings = PolicySettings()
    training: OptimizerSettings = OptimizerSettings()
    rollout: RolloutSettings = RolloutSettings()
    bands: ForceBands | None = None
    paths: PathSettings = PathSettings()

    @field_validator("task", mode="before")
    @classmethod
    def _task_by_name(cls, value):
        if isinstance(value, str):
            return get_task_preset(value)
        return value

    @model_validator(mode="after")
    def _fill_presets(self):
        name = self.task.task
        if self.experts is None:
            object.__setattr__(self, "experts", dict(EXPERT_PRESETS[name]))
        if self.demo_duration is None:
            object.__setattr__(self, "demo_duration", DURATION_PRESETS[name])
        if self.rollout.duration is None:
            object.__setattr__(self, "rollout", self.rollout.model_copy(update={"duration": DURATION_PRESETS[name]}))
        if self.bands is None:
            object.__setattr__(self, "bands", default_force_bands(name))
        if self.dabi.source_rate != self.task.control_rate or self.dabi.target_rate != self.task.image_rate:
            raise ValueError(f"augmentation rates {self.dabi.source_rate}/{self.dabi.target_rate} Hz do not match "
                             f"the task's control/image rates {self.task.control_rate}/{self.task.image_rate} Hz")
        return self

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def with_overrides(self, overrides: dict[str, Any]) -> "RunConfig":
        """New config with `overrides` merged in; nested dicts merge key by key.

        Switching to another task replaces the task object and re-derives the
        experts, bands and durations that were still at the previous task's
        presets; values set explicitly are kept.
        """
        def merge(base: dict, extra: dict) -> dict:
            merged = dict(base)
            for key, value in extra.items():
                if isinstance(value, dict) and isinstance(merged.get(key), dict):
                    merged[key] = merge(merged[key], value)
                else:
                    merged[key] = value
            return merged
        document = json.loads(self.model_dump_json())
        task = overrides.get("task")
        new_name = task if isinstance(task, str) else task.get("task") if isinstance(task, dict) else None
        if new_name is not None and new_name != self.task.task:
            # values still at the old task's presets are re-derived for the new task
            presets = json.loads(RunConfig.model_validate({"task": self.task.task, "seed": self.seed}).model_dump_json())
            del document["task"]
            for key in ("experts", "bands", "demo_duration"):
                if key not in overrides and document[key] == presets[key]:
                    del document[key]
            if document["rollout"]["duration"] == presets["rollout"]["duration"]:
                del document["rollout"]["duration"]
        return RunConfig.model_validate(merge(document, overrides))

    def provenance(self) -> dict[str, Any]:
        """The effective config as plain JSON data, for embedding in artifacts."""
        return json.loads(self.model_dump_json())

    # builders

    @property
    def instructions(self) -> list[str]:
        return list(self.experts)

    def simulation(self, with_leaders: bool = True) -> Simulation:
        return Simulation(self.task, with_leaders=with_leaders)

    def controller_gains(self) -> ControllerGains:
        return ControllerGains.for_plant(self.task.arm_params(), **self.gains.model_dump())

    def observer_config(self) -> ObserverConfig:
        return ObserverConfig(
            cutoff=self.observer.cutoff,
            nominal=self.task.arm_params().scaled(self.observer.inertia_scale),
            velocity_source=self.observer.velocity_source,
        )

    def controller(self) -> BilateralController:
        return BilateralController(self.controller_gains(), self.observer_config(),
                                   self.task.arms_per_side, self.task.dt)

    def language_encoder(self) -> LanguageEncoder:
        return self.encoder

    def policy_config(self, language_dim: int | None = None) -> PolicyConfig:
        return PolicyConfig(
            joint_count=self.task.joint_count,
            arms_per_side=self.task.arms_per_side,
            camera_count=self.task.camera_count,
            image_height=self.task.image_height,
            image_width=self.task.image_width,
            language_dim=language_dim if language_dim is not None else self.encoder.dim,
            **self.policy.model_dump(),
        )

    def rollout_config(self, instruction: str, seed: int) -> RolloutConfig:
        return RolloutConfig(
            instruction=instruction,
            seed=seed,
            duration=self.rollout.duration,
            policy_rate=self.task.image_rate,
            control_rate=self.task.control_rate,
            ensembling=self.rollout.ensembling,
            decay=self.rollout.decay,
            replan=self.rollout.replan,
            mode=self.rollout.mode,
            home_jitter=self.rollout.home_jitter,
        )
