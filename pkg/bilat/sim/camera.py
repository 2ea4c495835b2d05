"""Synthetic RGB cameras: a deterministic rasterizer of the table, the objects and the arms."""

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import UnknownCameraError
from .scene import Location, SceneState
from .tasks import TaskConfig


BACKGROUND = (40, 40, 48)
TABLE = (120, 90, 60)
LINK = (200, 200, 210)
CUP = (60, 150, 220)
CUP_CRUSHED = (30, 70, 110)
SPONGE = (230, 210, 60)
UPPER_LINK_LENGTH = 1.0
LOWER_LINK_LENGTH = 0.8


class CameraView(BaseModel):
    """Pixel placement of the planar scene for one camera."""

    model_config = ConfigDict(frozen=True)

    scale: float
    """Pixels per link-length unit."""
    origin_x: float
    """Relative horizontal position of the first arm base, in [0, 1] of the width."""
    table_y: float
    """Relative height of the table surface, in [0, 1] of the height."""
    yaw_gain: float = 6.0
    mirror: bool = False


VIEWS: tuple[CameraView, ...] = (
    CameraView(scale=10.0, origin_x=0.30, table_y=0.83),
    CameraView(scale=8.0, origin_x=0.70, table_y=0.80, mirror=True),
    CameraView(scale=12.0, origin_x=0.20, table_y=0.90, yaw_gain=4.0),
    CameraView(scale=9.0, origin_x=0.50, table_y=0.78, yaw_gain=8.0),
)


class CameraFrame(BaseModel):
    """One RGB8 image, row-major."""

    model_config = ConfigDict(frozen=True)

    camera_id: int
    width: int
    height: int
    pixels: bytes
    timestamp: float

    @model_validator(mode="after")
    def _check_length(self):
        if len(self.pixels) != 3 * self.width * self.height:
            raise ValueError(f"pixel buffer holds {len(self.pixels)} bytes, "
                             f"expected {3 * self.width * self.height}")
        return self

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width, 3)


class _Canvas:

    def __init__(self, width: int, height: int, view: CameraView):
        self.width = width
        self.height = height
        self.view = view
        self.pixels = np.empty((height, width, 3), dtype=np.uint8)
        self.pixels[:] = BACKGROUND
        self.table_row = int(round(view.table_y * (height - 1)))
        self.pixels[self.table_row:] = TABLE

    def to_pixel(self, x: float, y: float) -> tuple[float, float]:
        px = self.view.origin_x * (self.width - 1) + self.view.scale * x
        if self.view.mirror:
            px = (self.width - 1) - px
        return px, self.table_row - self.view.scale * y

    def line(self, start: tuple[float, float], end: tuple[float, float], color) -> None:
        (x0, y0), (x1, y1) = self.to_pixel(*start), self.to_pixel(*end)
        steps = int(max(abs(x1 - x0), abs(y1 - y0))) + 2
        xs = np.rint(np.linspace(x0, x1, steps)).astype(int)
        ys = np.rint(np.linspace(y0, y1, steps)).astype(int)
        keep = (xs >= 0) & (xs < self.width) & (ys >= 0) & (ys < self.height)
        self.pixels[ys[keep], xs[keep]] = color

    def rectangle(self, center: tuple[float, float], half_width: int, half_height: int, color) -> None:
        cx, cy = self.to_pixel(*center)
        cx, cy = int(round(cx)), int(round(cy))
        top, bottom = max(cy - half_height, 0), min(cy + half_height + 1, self.height)
        left, right = max(cx - half_width, 0), min(cx + half_width + 1, self.width)
        if top < bottom and left < right:
            self.pixels[top:bottom, left:right] = color


def arm_points(angle: np.ndarray, base_x: float, yaw_gain: float) -> list[tuple[float, float]]:
    """Base, elbow and tip of the planar two-link chain formed by joints 2 and 3."""
    base = (base_x + angle[0] * yaw_gain / 10.0, 0.0)
    upper = angle[1]
    lower = angle[1] + angle[2]
    elbow = (base[0] + UPPER_LINK_LENGTH * np.cos(upper), base[1] + UPPER_LINK_LENGTH * np.sin(upper))
    tip = (elbow[0] + LOWER_LINK_LENGTH * np.cos(lower), elbow[1] + LOWER_LINK_LENGTH * np.sin(lower))
    return [base, elbow, tip]


def _gripper_color(opening: float) -> tuple[int, int, int]:
    level = int(np.clip(opening, 0.0, 1.0) * 255)
    return (255, 255 - level, 64)


def _draw_cup(canvas: _Canvas, scene: SceneState, tips: list[tuple[float, float]]) -> None:
    color = CUP_CRUSHED if scene.crushed else CUP
    source, place = (1.6, 0.25), (-0.4, 0.25)
    canvas.rectangle(place, 2, 3, CUP)
    location = scene.locations["cup"]
    if location == Location.SOURCE:
        canvas.rectangle(source, 2, 3, color)
    elif location == Location.IN_GRIPPER:
        canvas.rectangle((tips[0][0], tips[0][1] - 0.3), 2, 3, color)
    elif location == Location.STACKED:
        canvas.rectangle((place[0], place[1] + 0.6), 2, 3, color)
    else:
        canvas.rectangle((tips[0][0], 0.15), 3, 2, color)


def _draw_sponge(canvas: _Canvas, scene: SceneState, tips: list[tuple[float, float]], twist: float) -> None:
    shade = int(np.clip(abs(twist) / 1.5, 0.0, 1.0) * 150)
    color = (SPONGE[0], SPONGE[1] - shade, SPONGE[2])
    if scene.locations["sponge"] == Location.IN_GRIPPER:
        center = ((tips[0][0] + tips[1][0]) / 2, (tips[0][1] + tips[1][1]) / 2 - 0.2)
        canvas.rectangle(center, 3, 2, color)
        canvas.line(tips[0], tips[1], color)
    else:
        canvas.rectangle((1.2, 0.15), 4, 2, color)


def render_camera(scene: SceneState, camera_id: int, task: TaskConfig) -> CameraFrame:
    """Rasterize `scene` as seen by camera `camera_id` of `task`.

    Identical scenes produce bit-identical frames.
    """
    if not 0 <= camera_id < task.camera_count:
        raise UnknownCameraError(camera_id, task.camera_count)
    view = VIEWS[camera_id % len(VIEWS)]
    canvas = _Canvas(task.image_width, task.image_height, view)
    g = task.gripper_index
    tips = []
    for index, arm in enumerate(scene.arms):
        points = arm_points(arm.angle, base_x=0.6 * index, yaw_gain=view.yaw_gain)
        canvas.line(points[0], points[1], LINK)
        canvas.line(points[1], points[2], LINK)
        opening = (arm.angle[g] - task.gripper_open) / 0.5
        canvas.rectangle(points[2], 1, 1, _gripper_color(opening))
        tips.append(points[2])
    if scene.task == "cup":
        _draw_cup(canvas, scene, tips)
    else:
        _draw_sponge(canvas, scene, tips, task.twist(scene.arms))
    return CameraFrame(
        camera_id=camera_id,
        width=task.image_width,
        height=task.image_height,
        pixels=canvas.pixels.tobytes(),
        timestamp=scene.time,
    )
