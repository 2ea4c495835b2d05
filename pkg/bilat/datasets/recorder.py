"""Recording demonstrations under 4-channel bilateral teleoperation."""

import logging
from typing import Any

import numpy as np

from ..control.controller import BilateralController
from ..lang.prompt import PromptTemplate, normalize_instruction
from ..sim.world import Simulation
from .episode import Episode
from .expert import ExpertScript, ExpertTargets, OperatorConfig, ScriptedOperator, build_expert_script


logger = logging.getLogger(__name__)


def pack_triples(arms, reactions: np.ndarray) -> np.ndarray:
    """Stack (angle, velocity, reaction) per joint into [arms, joints, 3]."""
    return np.stack([np.stack([arm.angle, arm.velocity, reaction], axis=-1)
                     for arm, reaction in zip(arms, reactions)])


def record_session(sim: Simulation, controller: BilateralController, expert: ExpertScript,
                   instruction: str, duration: float, seed: int, *,
                   template: PromptTemplate = PromptTemplate(),
                   operator: OperatorConfig = OperatorConfig(),
                   annotations: dict[str, Any] | None = None) -> Episode:
    """Teleoperate the follower with a scripted operator on the leader and record everything.

    Both arms' (angle, velocity, reaction torque) are stored every control tick and
    every camera renders once per image period, at the tick that opens the period.
    A crush or slip does not abort the session; the episode carries the flags.
    """
    task = sim.task
    ticks = round(duration * task.control_rate)
    if ticks <= 0 or ticks % task.ticks_per_frame:
        raise ValueError(f"duration {duration}s is not a positive multiple of the image period")
    if not sim.with_leaders:
        raise ValueError("recording needs a simulation with leader arms")
    normalized = normalize_instruction(instruction, template)

    sim.reset()
    controller.reset()
    hand = ScriptedOperator(expert, sim.leaders, controller.gains, operator)
    arms, n, g = task.arms_per_side, task.joint_count, task.gripper_index
    leader = np.empty((ticks, arms, n, 3), dtype=np.float32)
    follower = np.empty((ticks, arms, n, 3), dtype=np.float32)
    frames = [np.empty((ticks // task.ticks_per_frame, task.image_height, task.image_width, 3), dtype=np.uint8)
              for _ in range(task.camera_count)]

    for tick in range(ticks):
        leader_reaction, follower_reaction = controller.observe(sim.followers, sim.leaders)
        leader[tick] = pack_triples(sim.leaders, leader_reaction)
        follower[tick] = pack_triples(sim.followers, follower_reaction)
        if tick % task.ticks_per_frame == 0:
            for camera, image in enumerate(sim.render_all()):
                frames[camera][tick // task.ticks_per_frame] = image
        telemetry = controller.teleoperate(sim.leaders, sim.followers)
        hand_torques = hand.torques(sim.time, sim.leaders, -leader_reaction[:, g])
        sim.step(list(telemetry.follower_command), list(telemetry.leader_command), hand_torques)

    scene = sim.scene
    if scene.crushed:
        logger.warning("demonstration crushed the object", extra={"fields": {"instruction": normalized, "seed": seed}})
    if scene.slipped:
        logger.warning("demonstration slipped", extra={"fields": {"instruction": normalized, "seed": seed}})
    notes = {
        "source": "demonstration",
        "scene_log": scene.scene_log(),
        "crushed": scene.crushed,
        "slipped": scene.slipped,
        "torque_target": expert.torque_target,
        "prompt_template": template.model_dump(),
        **(annotations or {}),
    }
    episode = Episode(
        task=task.name,
        instruction=instruction,
        normalized_instruction=normalized,
        control_rate=task.control_rate,
        image_rate=task.image_rate,
        joint_count=n,
        arm_count=2 * arms,
        leader=leader,
        follower=follower,
        frames=frames,
        seed=seed,
        annotations=notes,
    )
    logger.info("session recorded", extra={"fields": {
        "task": task.name, "instruction": normalized, "seed": seed,
        "samples": episode.sample_count, "events": len(scene.events),
    }})
    return episode


def collect_demonstration(sim: Simulation, controller: BilateralController, targets: ExpertTargets,
                          instruction: str, duration: float, seed: int, **kwargs) -> Episode:
    """Build a seeded expert script for `targets` and record one session with it."""
    operator = kwargs.get("operator", OperatorConfig())
    script = build_expert_script(sim.task, targets, np.random.default_rng(seed), operator)
    notes = {"twist": targets.twist, **kwargs.pop("annotations", {})}
    return record_session(sim, controller, script, instruction, duration, seed, annotations=notes, **kwargs)
