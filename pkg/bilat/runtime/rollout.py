"""Closed-loop autonomous execution of a trained policy in the simulator."""

import logging
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..control.controller import BilateralController
from ..datasets.episode import Episode
from ..datasets.recorder import pack_triples
from ..evaluation.bands import ForceBands, default_force_bands
from ..evaluation.outcomes import TaskOutcome, detect_outcome
from ..lang import encode
from ..lang.encoders.base import LanguageEncoder
from ..lang.prompt import PromptTemplate, normalize_instruction
from ..policy.infer import infer
from ..policy.model import ActionChunkingPolicy
from ..sim.tasks import TaskConfig
from ..sim.world import Simulation
from .ensemble import EnsembleState, temporal_ensemble
from .interpolate import interpolate_to_control_rate
from .mailbox import PolicyWorker
from .telemetry import TelemetryRecorder
from .tick import autonomous_tick


logger = logging.getLogger(__name__)


class RolloutConfig(BaseModel):
    """How a rollout runs.

    `replan` is "step" to query the policy at every policy step or "chunk" to
    query once per chunk. `mode` "async" evaluates the policy on a worker thread
    and never makes the control loop wait for it.
    """

    model_config = ConfigDict(frozen=True)

    instruction: str
    seed: int
    duration: float = Field(default=10.0, gt=0)
    policy_rate: int = Field(default=100, gt=0)
    control_rate: int = Field(default=1000, gt=0)
    ensembling: bool = True
    decay: float = Field(default=0.01, ge=0)
    replan: Literal["step", "chunk"] = "step"
    mode: Literal["sync", "async"] = "sync"
    home_jitter: float = Field(default=0.01, ge=0)

    @model_validator(mode="after")
    def _rates(self):
        if self.control_rate % self.policy_rate:
            raise ValueError(f"control rate {self.control_rate} Hz is not a multiple of "
                             f"policy rate {self.policy_rate} Hz")
        return self

    @property
    def ticks_per_query(self) -> int:
        return self.control_rate // self.policy_rate


def _check_compatible(policy: ActionChunkingPolicy, task: TaskConfig, rollout: RolloutConfig) -> int:
    if rollout.control_rate != task.control_rate or rollout.policy_rate != task.image_rate:
        raise ValueError(f"rollout rates {rollout.control_rate}/{rollout.policy_rate} Hz do not match the "
                         f"task's control/image rates {task.control_rate}/{task.image_rate} Hz")
    config = policy.config
    expected = (task.joint_count, task.arms_per_side, task.camera_count, task.image_height, task.image_width)
    actual = (config.joint_count, config.arms_per_side, config.camera_count, config.image_height, config.image_width)
    if expected != actual:
        raise ValueError(f"policy expects (joints, arms, cameras, height, width) = {actual}, task provides {expected}")
    ticks = round(rollout.duration * rollout.control_rate)
    if ticks % rollout.ticks_per_query:
        raise ValueError(f"duration {rollout.duration}s is not a multiple of the policy period")
    return ticks


def home_offsets(task: TaskConfig, seed: int, jitter: float) -> list[np.ndarray]:
    """Seeded perturbation of every arm joint except the gripper."""
    rng = np.random.default_rng(seed)
    offsets = []
    for _ in range(task.arms_per_side):
        offset = rng.uniform(-jitter, jitter, task.joint_count)
        offset[task.gripper_index] = 0.0
        offsets.append(offset)
    return offsets


def run_rollout(policy: ActionChunkingPolicy, task: TaskConfig, controller: BilateralController,
                encoder: LanguageEncoder, rollout: RolloutConfig, *,
                template: PromptTemplate = PromptTemplate(), bands: ForceBands | None = None,
                telemetry_path: str | Path | None = None) -> tuple[Episode, TaskOutcome]:
    """Run the policy in closed loop and score the result.

    Per control tick: observers update, the follower triple is recorded, and on
    policy steps the cameras render and the policy is queried. The ensembled
    target is interpolated to the tick and drives the follower. The returned
    episode stores the targets as its leader stream.
    """
    ticks = _check_compatible(policy, task, rollout)
    per_query = rollout.ticks_per_query
    replan_every = 1 if rollout.replan == "step" else policy.config.chunk_size
    arms, n = task.arms_per_side, task.joint_count

    sim = Simulation(task, with_leaders=False)
    sim.reset(home_offsets(task, rollout.seed, rollout.home_jitter))
    controller.reset()
    embedding = encode(rollout.instruction, encoder, template)
    normalized = normalize_instruction(rollout.instruction, template)
    ensemble = EnsembleState(decay=rollout.decay, enabled=rollout.ensembling)
    recorder = TelemetryRecorder(arms, n)

    leader = np.empty((ticks, arms, n, 3), dtype=np.float32)
    follower = np.empty((ticks, arms, n, 3), dtype=np.float32)
    frames = [np.empty((ticks // per_query, task.image_height, task.image_width, 3), dtype=np.uint8)
              for _ in range(task.camera_count)]
    queries = stale = 0
    worker = None
    if rollout.mode == "async":
        worker = PolicyWorker(lambda request: infer(policy, request[1], request[2], embedding))
        worker.start()

    current = following = None
    try:
        for tick in range(ticks):
            _, reactions = controller.observe(sim.followers)
            follower[tick] = pack_triples(sim.followers, reactions)
            phase = tick % per_query
            if phase == 0:
                step = tick // per_query
                images = sim.render_all()
                for camera, image in enumerate(images):
                    frames[camera][step] = image
                if ensemble.last_target is None:
                    hold = follower[tick].astype(np.float64)
                    hold[..., 1] = 0.0
                    hold[..., 2] = -hold[..., 2]
                    ensemble.last_target = hold.reshape(-1)
                if step % replan_every == 0:
                    queries += 1
                    if worker is None:
                        chunk = infer(policy, follower[tick], images, embedding)
                        ensemble.add(step, chunk.values)
                    else:
                        worker.submit((step, follower[tick].copy(), images))
                if worker is not None:
                    if worker.error is not None:
                        raise worker.error
                    result = worker.results.take()
                    if result is not None:
                        (issued, _, _), chunk = result
                        if issued < step:
                            stale += 1
                        ensemble.add(issued, chunk.values)
                ensemble.prune(step)
                current, _ = temporal_ensemble(ensemble, step)
                following = ensemble.blend(step + 1)
                if following is None:
                    following = current
            target = interpolate_to_control_rate(current, following, phase / per_query)
            leader[tick] = target.reshape(arms, n, 3)
            telemetry = autonomous_tick(sim, controller, target.reshape(arms, n, 3), observe=False)
            recorder.record(tick, target, telemetry)
    finally:
        if worker is not None:
            worker.stop()

    scene = sim.scene
    episode = Episode(
        task=task.name,
        instruction=rollout.instruction,
        normalized_instruction=normalized,
        control_rate=task.control_rate,
        image_rate=task.image_rate,
        joint_count=n,
        arm_count=2 * arms,
        leader=leader,
        follower=follower,
        frames=frames,
        seed=rollout.seed,
        annotations={
            "source": "rollout",
            "scene_log": scene.scene_log(),
            "crushed": scene.crushed,
            "slipped": scene.slipped,
            "encoder_id": policy.encoder_id,
            "use_language": policy.config.use_language,
            "rollout": rollout.model_dump(mode="json"),
            "policy_queries": queries,
            "ensemble_gaps": ensemble.gaps,
            "stale_chunks": stale,
            "mean_command_change": recorder.mean_command_change(),
        },
    )
    if telemetry_path is not None:
        recorder.write_csv(telemetry_path)
    outcome = detect_outcome(episode, bands=bands if bands is not None else default_force_bands(task.task))
    logger.info("rollout scored", extra={"fields": {
        "task": task.name, "instruction": rollout.instruction, "seed": rollout.seed,
        "success": outcome.success, "force_accuracy": outcome.force_accuracy,
    }})
    return episode, outcome
