"""One autonomous control tick: the follower side of the bilateral law against predicted leader triples."""

import numpy as np

from ..control.controller import BilateralController, ControlTelemetry
from ..control.errors import NonFiniteSignalError
from ..sim.world import Simulation


def autonomous_tick(sim: Simulation, controller: BilateralController, leader_target: np.ndarray,
                    observe: bool = True) -> ControlTelemetry:
    """Advance the followers by one tick toward `leader_target` [arms, joints, 3].

    With `observe` false the reactions from the caller's last `controller.observe`
    are used, which lets a rollout record the observation the policy saw.

    Raises:
        NonFiniteSignalError: an observer estimate or a command is not finite.
    """
    leader_target = np.asarray(leader_target, dtype=np.float64)
    if observe:
        controller.observe(sim.followers)
    telemetry = controller.autonomous(list(leader_target), sim.followers)
    if not np.all(np.isfinite(telemetry.follower_reaction)):
        raise NonFiniteSignalError("follower reaction estimate")
    if not np.all(np.isfinite(telemetry.follower_command)):
        raise NonFiniteSignalError("follower torque command")
    sim.step(list(telemetry.follower_command))
    return telemetry
