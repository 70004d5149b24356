"""Engine configuration: scoring weights, recommendation blend, layout
parameters, topic-model settings, and per-user experiment assignments.

Everything has a default; a JSON config file overrides field by field.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from portrait_engine.layout import LayoutParams
from portrait_engine.preferences import ScoreWeights

MODE_BASELINE = "baseline"
MODE_TREATMENT = "treatment"


@dataclass
class Assignment:
    """Experiment condition for one user: which recommender blend and which
    interface they get."""

    mode: str = MODE_TREATMENT  # baseline -> lambda 1.0, treatment -> configured lambda
    ui: str = "organic"  # "organic" | "baseline"


@dataclass
class EngineConfig:
    # recommendation blend
    lam: float = 0.75
    recommend_top: int = 20
    balloon_recs: int = 3
    # preference scoring
    top_k_topics: int = 30
    alpha: tuple[float, float, float] = (0.5, 0.65, 0.8)
    tau_days: float = 30.0
    stopword_count: int = 50
    # stance
    idf_scope: str = "issue"  # "issue" | "all"
    # layout
    canvas: tuple[float, float] = (1200.0, 800.0)
    vogel_c: float = 8.0
    circle_radius_factor: float = 0.42
    font_min: float = 14.0
    font_max: float = 42.0
    click_expand: float = 0.2
    layout_seed: int = 42
    # topic model
    lda_k: int = 300
    lda_iterations: int = 1000
    lda_alpha: float | None = None  # default 50/k
    lda_beta: float = 0.01
    lda_seed: int = 42
    contribution_threshold: float = 0.05
    # experiment assignments: user_id -> Assignment
    assignments: dict[str, Assignment] = field(default_factory=dict)

    def score_weights(self) -> ScoreWeights:
        return ScoreWeights(alpha=tuple(self.alpha), tau_seconds=self.tau_days * 86400.0)

    def layout_params(self) -> LayoutParams:
        return LayoutParams(
            canvas=tuple(self.canvas),
            vogel_c=self.vogel_c,
            circle_radius_factor=self.circle_radius_factor,
            font_min=self.font_min,
            font_max=self.font_max,
            click_expand=self.click_expand,
        )

    def assignment_for(self, user_id: str) -> Assignment:
        return self.assignments.get(user_id, Assignment())

    def lambda_for(self, user_id: str) -> float:
        mode = self.assignment_for(user_id).mode
        return 1.0 if mode == MODE_BASELINE else self.lam

    def to_dict(self) -> dict:
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        data["alpha"] = list(self.alpha)
        data["canvas"] = list(self.canvas)
        data["assignments"] = {
            user: {"mode": a.mode, "ui": a.ui} if isinstance(a, Assignment) else a
            for user, a in self.assignments.items()
        }
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        if "alpha" in data:
            data["alpha"] = tuple(data["alpha"])
        if "canvas" in data:
            data["canvas"] = tuple(data["canvas"])
        if "assignments" in data:
            data["assignments"] = {
                user: Assignment(**a) if isinstance(a, dict) else a
                for user, a in data["assignments"].items()
            }
        known = {f for f in cls.__dataclass_fields__}  # tolerate extra keys
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def load(cls, path: str | Path) -> "EngineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
