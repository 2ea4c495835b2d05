"""Errors raised while scoring episodes."""

from ..errors import BilatError


class EvaluationError(BilatError):
    """Base class for evaluation failures."""


class MissingSceneLogError(EvaluationError):
    def __init__(self, episode: str = ""):
        self.episode = episode
        where = f" {episode}" if episode else ""
        super().__init__(f"episode{where} carries no scene log; record it with the simulator to score stages")


class EmptyWindowError(EvaluationError):
    def __init__(self, window: tuple[float, float | None], reason: str = ""):
        self.window = window
        start, end = window
        span = f"[{start:g}, {'end' if end is None else f'{end:g}'})"
        super().__init__(f"analysis window {span} holds no samples" + (f": {reason}" if reason else ""))


class HistogramEdgeMismatchError(EvaluationError):
    def __init__(self, first: list[float], second: list[float]):
        self.first = first
        self.second = second
        super().__init__(f"histograms have different bin edges ({len(first)} vs {len(second)} edges, "
                         f"ranges [{first[0]:g}, {first[-1]:g}] and [{second[0]:g}, {second[-1]:g}])")
