"""Portrait geometry: Vogel floret placement for post circles, collision-free
label placement for topics, colors, and the topic<->post link map.

Circles follow the floret pattern r = c*sqrt(n), theta = n * 137.508 degrees
with n = 1 for the oldest post, so the timeline grows organically outward
from the canvas center. Labels are placed greedily in score order along an
outward spiral that starts just beyond the circle cluster; a label is
accepted only when its box clears every accepted label box and every circle
bounding box.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from portrait_engine.corpus import Post, post_gram_set
from portrait_engine.preferences import PreferenceProfile, TopicCandidate

logger = logging.getLogger(__name__)

GOLDEN_ANGLE_DEG = 137.508
MISC_TOPIC = "misc"
MISC_COLOR = "#b8b8b8"

# fixed categorical palette, cycled in topic-score order
PALETTE = (
    "#4c78a8",
    "#f58518",
    "#54a24b",
    "#e45756",
    "#72b7b2",
    "#eeca3b",
    "#b279a2",
    "#ff9da6",
    "#9d755d",
    "#bab0ac",
    "#5778a4",
    "#d67195",
)


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle; `intersects` is strict, shared edges do not
    count as overlap."""

    x0: float
    y0: float
    x1: float
    y1: float

    def intersects(self, other: "Box") -> bool:
        return (
            self.x0 < other.x1
            and other.x0 < self.x1
            and self.y0 < other.y1
            and other.y0 < self.y1
        )

    def inside(self, width: float, height: float) -> bool:
        return self.x0 >= 0 and self.y0 >= 0 and self.x1 <= width and self.y1 <= height


@dataclass(frozen=True)
class CircleGlyph:
    post_id: str
    n: int
    x: float
    y: float
    radius: float
    color_topic: str

    @property
    def box(self) -> Box:
        return Box(self.x - self.radius, self.y - self.radius,
                   self.x + self.radius, self.y + self.radius)


@dataclass(frozen=True)
class LabelGlyph:
    gram: str
    kind: str
    display: str
    font_size: float
    x: float  # box center
    y: float
    w: float
    h: float
    click_w: float
    click_h: float
    color: str

    @property
    def box(self) -> Box:
        return Box(self.x - self.w / 2, self.y - self.h / 2,
                   self.x + self.w / 2, self.y + self.h / 2)

    @property
    def click_box(self) -> Box:
        return Box(self.x - self.click_w / 2, self.y - self.click_h / 2,
                   self.x + self.click_w / 2, self.y + self.click_h / 2)


@dataclass(frozen=True)
class LayoutParams:
    canvas: tuple[float, float] = (1200.0, 800.0)
    vogel_c: float = 8.0
    circle_radius_factor: float = 0.42  # keeps neighbouring florets apart
    font_min: float = 14.0
    font_max: float = 42.0
    char_width_ratio: float = 0.6  # label width ~ ratio * font * characters
    line_height_ratio: float = 1.25
    click_expand: float = 0.2  # clickable box grows 20% per axis
    label_padding: float = 2.0
    spiral_pitch: float = 14.0  # radial growth per full turn, in canvas units
    spiral_angle_step: float = 0.35  # radians between candidate positions
    max_spiral_steps: int = 6000


@dataclass
class PortraitLayout:
    canvas: tuple[float, float]
    circles: list[CircleGlyph]
    labels: list[LabelGlyph]
    links: dict[str, list[str]]
    palette: dict[str, str]
    # post_id -> {text, timestamp, is_retweet}; the balloon and the baseline
    # lists render from this, the layout being the UI's only data source
    posts: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "canvas": {"width": self.canvas[0], "height": self.canvas[1]},
            "circles": [
                {
                    "post_id": c.post_id,
                    "n": c.n,
                    "x": c.x,
                    "y": c.y,
                    "r": c.radius,
                    "color": self.palette.get(c.color_topic, MISC_COLOR),
                }
                for c in self.circles
            ],
            "labels": [
                {
                    "gram": l.gram,
                    "kind": l.kind,
                    "display": l.display,
                    "x": l.x,
                    "y": l.y,
                    "w": l.w,
                    "h": l.h,
                    "click_w": l.click_w,
                    "click_h": l.click_h,
                    "font_size": l.font_size,
                    "color": l.color,
                }
                for l in self.labels
            ],
            "links": {gram: list(ids) for gram, ids in self.links.items()},
            "palette": dict(self.palette),
            "posts": {pid: dict(meta) for pid, meta in self.posts.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def vogel_polar(n: int, c: float) -> tuple[float, float]:
    """Floret n in polar form: (r, theta in degrees, unreduced)."""
    if n < 1:
        raise ValueError("floret index must be >= 1")
    if c <= 0:
        raise ValueError("spacing constant must be positive")
    return c * math.sqrt(n), n * GOLDEN_ANGLE_DEG


def vogel_position(n: int, c: float, center: tuple[float, float]) -> tuple[float, float]:
    """Cartesian floret position around `center`."""
    r, theta_deg = vogel_polar(n, c)
    theta = math.radians(theta_deg)
    return center[0] + r * math.cos(theta), center[1] + r * math.sin(theta)


def assign_indices(posts: Sequence[Post]) -> dict[str, int]:
    """Chronological floret indices: oldest post gets 1; timestamp ties break
    by post id ascending."""
    if not posts:
        raise ValueError("assign_indices requires at least one post")
    ordered = sorted(posts, key=lambda p: (p.timestamp, p.id))
    return {post.id: i for i, post in enumerate(ordered, start=1)}


def _font_size(score: float, lo: float, hi: float, params: LayoutParams) -> float:
    if hi <= lo:
        return params.font_max
    frac = (score - lo) / (hi - lo)
    return params.font_min + frac * (params.font_max - params.font_min)


def _label_extent(display: str, font_size: float, params: LayoutParams) -> tuple[float, float]:
    w = max(len(display), 1) * params.char_width_ratio * font_size
    h = params.line_height_ratio * font_size
    return w, h


class _CircleIndex:
    """Uniform grid over circle boxes for fast candidate rejection."""

    def __init__(self, circles: Sequence[CircleGlyph], center: tuple[float, float]):
        self.boxes = [c.box for c in circles]
        self.cell = 32.0
        self.grid: dict[tuple[int, int], list[int]] = {}
        self.center = center
        reach = 0.0
        for i, box in enumerate(self.boxes):
            for gx in range(int(box.x0 // self.cell), int(box.x1 // self.cell) + 1):
                for gy in range(int(box.y0 // self.cell), int(box.y1 // self.cell) + 1):
                    self.grid.setdefault((gx, gy), []).append(i)
            corner = max(
                math.hypot(box.x0 - center[0], box.y0 - center[1]),
                math.hypot(box.x1 - center[0], box.y1 - center[1]),
                math.hypot(box.x0 - center[0], box.y1 - center[1]),
                math.hypot(box.x1 - center[0], box.y0 - center[1]),
            )
            reach = max(reach, corner)
        self.reach = reach  # circles live within this radius of the center

    def collides(self, box: Box) -> bool:
        # cheap reject: the box lies entirely beyond every circle
        dx = max(box.x0 - self.center[0], self.center[0] - box.x1, 0.0)
        dy = max(box.y0 - self.center[1], self.center[1] - box.y1, 0.0)
        if dx * dx + dy * dy >= self.reach * self.reach:
            return False
        seen: set[int] = set()
        for gx in range(int(box.x0 // self.cell), int(box.x1 // self.cell) + 1):
            for gy in range(int(box.y0 // self.cell), int(box.y1 // self.cell) + 1):
                for i in self.grid.get((gx, gy), ()):
                    if i not in seen:
                        seen.add(i)
                        if box.intersects(self.boxes[i]):
                            return True
        return False


def place_labels(
    topics: Sequence[TopicCandidate],
    circles: Sequence[CircleGlyph],
    canvas: tuple[float, float],
    seed: int,
    params: LayoutParams | None = None,
) -> list[LabelGlyph]:
    """Greedy score-order placement along an outward spiral from a
    seeded-random start angle. Labels that cannot be placed within the
    bounded search are dropped and logged."""
    params = params or LayoutParams()
    width, height = canvas
    if not topics:
        return []

    scores = [t.score for t in topics]
    lo, hi = min(scores), max(scores)
    largest = max(
        _label_extent(t.display or t.gram, _font_size(t.score, lo, hi, params), params)
        for t in topics
    )
    if largest[0] > width or largest[1] > height:
        raise ValueError("canvas cannot hold the largest label")

    center = (width / 2.0, height / 2.0)
    index = _CircleIndex(circles, center)
    rng = random.Random(seed)
    placed: list[LabelGlyph] = []
    placed_boxes: list[Box] = []

    for rank, topic in enumerate(topics):
        font = _font_size(topic.score, lo, hi, params)
        display = topic.display or topic.gram
        w, h = _label_extent(display, font, params)
        half_diag = math.hypot(w, h) / 2.0
        start_radius = index.reach + half_diag if circles else 0.0
        theta0 = rng.uniform(0.0, 2.0 * math.pi)
        b = params.spiral_pitch / (2.0 * math.pi)
        pad = params.label_padding

        accepted = None
        for step in range(params.max_spiral_steps):
            theta = theta0 + step * params.spiral_angle_step
            r = start_radius + b * step * params.spiral_angle_step
            x = center[0] + r * math.cos(theta)
            y = center[1] + r * math.sin(theta)
            box = Box(x - w / 2, y - h / 2, x + w / 2, y + h / 2)
            if not box.inside(width, height):
                continue
            test_box = Box(box.x0 - pad, box.y0 - pad, box.x1 + pad, box.y1 + pad)
            if any(test_box.intersects(other) for other in reversed(placed_boxes)):
                continue
            if index.collides(test_box):
                continue
            accepted = (x, y, box)
            break

        if accepted is None:
            logger.warning("dropping label %r: no collision-free position", topic.gram)
            continue
        x, y, box = accepted
        placed.append(
            LabelGlyph(
                gram=topic.gram,
                kind=topic.kind,
                display=display,
                font_size=font,
                x=x,
                y=y,
                w=w,
                h=h,
                click_w=w * (1.0 + params.click_expand),
                click_h=h * (1.0 + params.click_expand),
                color=PALETTE[rank % len(PALETTE)],
            )
        )
        placed_boxes.append(box)
    return placed


def build_layout(
    profile: PreferenceProfile,
    posts: Sequence[Post],
    params: LayoutParams | None = None,
    seed: int = 42,
) -> PortraitLayout:
    """Assemble the full renderable portrait: floret circles, placed labels,
    the exact gram containment link map, and the palette."""
    params = params or LayoutParams()
    width, height = params.canvas
    center = (width / 2.0, height / 2.0)

    palette = {
        topic.gram: PALETTE[rank % len(PALETTE)]
        for rank, topic in enumerate(profile.topics)
    }
    palette[MISC_TOPIC] = MISC_COLOR
    topic_rank = {topic.gram: rank for rank, topic in enumerate(profile.topics)}

    circles: list[CircleGlyph] = []
    links: dict[str, list[str]] = {topic.gram: [] for topic in profile.topics}
    if posts:
        indices = assign_indices(posts)
        radius = params.circle_radius_factor * params.vogel_c
        for post in sorted(posts, key=lambda p: indices[p.id]):
            n = indices[post.id]
            x, y = vogel_position(n, params.vogel_c, center)
            grams = post_gram_set(post)
            matched = sorted(
                (g for g in links if g in grams), key=lambda g: topic_rank[g]
            )
            for gram in matched:
                links[gram].append(post.id)
            color_topic = matched[0] if matched else MISC_TOPIC
            circles.append(CircleGlyph(post.id, n, x, y, radius, color_topic))

    labels = place_labels(profile.topics, circles, params.canvas, seed, params)
    return PortraitLayout(
        canvas=params.canvas,
        circles=circles,
        labels=labels,
        links=links,
        palette=palette,
        posts={
            p.id: {"text": p.text, "timestamp": p.timestamp, "is_retweet": p.is_retweet}
            for p in posts
        },
    )
