"""bilat: language-conditioned bilateral imitation learning on a simulated leader-follower pair.

The sub-packages follow the data flow of a run:

- ``bilat.sim``: arm dynamics, contact, task scenes and cameras
- ``bilat.control``: disturbance/reaction observers and the 4-channel bilateral law
- ``bilat.datasets``: demonstration episodes, the ``.blat`` codec, DABI augmentation
- ``bilat.lang``: instruction templates and text encoders
- ``bilat.policy``: the action-chunking transformer, its training loop and checkpoints
- ``bilat.runtime``: temporal ensembling and autonomous rollouts
- ``bilat.evaluation``: task outcomes, grip-torque histograms and force-accuracy ratings
- ``bilat.cli``: the ``bilat`` command line
"""

from .config import RunConfig
from .errors import BilatError

__version__ = "0.1.0"

__all__ = ["BilatError", "RunConfig", "__version__"]
