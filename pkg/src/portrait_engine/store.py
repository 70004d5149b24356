"""File-backed store for pipeline artifacts plus the append-only interaction
event log.

Layout under the store root:
    posts.jsonl          normalized posts, one JSON record per line
    users.json           author_id -> {follower_count, friend_count, posts}
    config.json          engine configuration (optional)
    stances.json         stance vectors + per-user stance profiles
    prefs/<user>.json    preference profiles
    layouts/<user>.json  portrait layout documents
    topics/              topic model, graph, intermediary report
    events.ndjson        append-only interaction events

Writers replace files atomically (temp file + rename) so concurrent readers
always see complete documents.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Iterable, Sequence

from portrait_engine.config import EngineConfig
from portrait_engine.corpus import Post, UserDocument, build_user_documents
from portrait_engine.preferences import PreferenceProfile
from portrait_engine.stance import StanceProfile
from portrait_engine.vecspace import SparseVector

EVENT_KINDS = {
    "topic_click": "gram",
    "circle_click": "post_id",
    "balloon_open": "post_id",
    "balloon_close": "post_id",
    "recommendation_shown": "post_id",
    "recommendation_clicked": "post_id",
}


class EventValidationError(ValueError):
    """Raised when an event is structurally valid JSON but breaks the
    kind/payload contract."""


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "prefs").mkdir(exist_ok=True)
        (self.root / "layouts").mkdir(exist_ok=True)
        (self.root / "topics").mkdir(exist_ok=True)
        self._event_lock = threading.Lock()
        self._event_seq: int | None = None

    # --- paths ---------------------------------------------------------

    @property
    def posts_path(self) -> Path:
        return self.root / "posts.jsonl"

    @property
    def users_path(self) -> Path:
        return self.root / "users.json"

    @property
    def config_path(self) -> Path:
        return self.root / "config.json"

    @property
    def stances_path(self) -> Path:
        return self.root / "stances.json"

    @property
    def events_path(self) -> Path:
        return self.root / "events.ndjson"

    def prefs_path(self, user_id: str) -> Path:
        return self.root / "prefs" / f"{user_id}.json"

    def layout_path(self, user_id: str) -> Path:
        return self.root / "layouts" / f"{user_id}.json"

    # --- corpus ----------------------------------------------------------

    def write_corpus(self, records: Iterable[tuple[Post, int, int]]) -> list[UserDocument]:
        records = list(records)
        lines = []
        for post, followers, friends in records:
            lines.append(
                json.dumps(
                    {
                        "id": post.id,
                        "author_id": post.author_id,
                        "timestamp": post.timestamp,
                        "text": post.text,
                        "is_retweet": post.is_retweet,
                        "follower_count": followers,
                        "friend_count": friends,
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
        _atomic_write(self.posts_path, "\n".join(lines) + ("\n" if lines else ""))
        docs = build_user_documents(records)
        users = {
            doc.author_id: {
                "follower_count": doc.follower_count,
                "friend_count": doc.friend_count,
                "posts": len(doc.posts),
            }
            for doc in docs
        }
        _atomic_write(self.users_path, json.dumps(users, indent=2, sort_keys=True) + "\n")
        return docs

    def read_posts(self) -> list[Post]:
        posts = []
        with open(self.posts_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                posts.append(
                    Post(
                        id=rec["id"],
                        author_id=rec["author_id"],
                        timestamp=rec["timestamp"],
                        text=rec["text"],
                        is_retweet=rec.get("is_retweet", False),
                    )
                )
        return posts

    def read_users(self) -> dict[str, dict]:
        with open(self.users_path, "r", encoding="utf-8") as fh:
            return json.load(fh)

    def load_user_documents(self) -> list[UserDocument]:
        users = self.read_users()
        by_author: dict[str, list[Post]] = {}
        for post in self.read_posts():
            by_author.setdefault(post.author_id, []).append(post)
        return [
            UserDocument.from_posts(
                author_id,
                by_author.get(author_id, []),
                meta.get("follower_count", 0),
                meta.get("friend_count", 0),
            )
            for author_id, meta in sorted(users.items())
        ]

    # --- config ----------------------------------------------------------

    def load_config(self) -> EngineConfig:
        if self.config_path.exists():
            return EngineConfig.load(self.config_path)
        return EngineConfig()

    def save_config(self, config: EngineConfig) -> None:
        config.save(self.config_path)

    # --- stance ----------------------------------------------------------

    def write_stances(
        self,
        issue_name: str,
        stance_vectors: Sequence[tuple[str, SparseVector]],
        profiles: Sequence[StanceProfile],
        path: Path | None = None,
    ) -> Path:
        doc = {
            "issue": issue_name,
            "stance_vectors": {
                name: dict(vec.weights) for name, vec in stance_vectors
            },
            "profiles": {p.author_id: p.to_dict() for p in profiles},
        }
        out = path or self.stances_path
        out.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(out, json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
        return out

    def read_stances(self) -> dict:
        with open(self.stances_path, "r", encoding="utf-8") as fh:
            return json.load(fh)

    def stance_profiles(self) -> dict[str, StanceProfile]:
        data = self.read_stances()
        return {
            user: StanceProfile.from_dict(p) for user, p in data["profiles"].items()
        }

    # --- preferences -------------------------------------------------------

    def write_preferences(self, profile: PreferenceProfile, path: Path | None = None) -> Path:
        out = path or self.prefs_path(profile.author_id)
        out.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(
            out, json.dumps(profile.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        )
        return out

    def read_preferences(self, user_id: str) -> PreferenceProfile:
        with open(self.prefs_path(user_id), "r", encoding="utf-8") as fh:
            return PreferenceProfile.from_dict(json.load(fh))

    # --- layouts -----------------------------------------------------------

    def write_layout(self, user_id: str, layout_json: str) -> Path:
        out = self.layout_path(user_id)
        _atomic_write(out, layout_json)
        return out

    def read_layout_bytes(self, user_id: str) -> bytes:
        return self.layout_path(user_id).read_bytes()

    # --- events ------------------------------------------------------------

    def _init_event_seq(self) -> int:
        if self._event_seq is None:
            count = 0
            if self.events_path.exists():
                with open(self.events_path, "r", encoding="utf-8") as fh:
                    count = sum(1 for line in fh if line.strip())
            self._event_seq = count
        return self._event_seq

    def append_event(self, event: dict) -> dict:
        """Validate, stamp the next sequence number, and append durably."""
        validated = validate_event(event)
        with self._event_lock:
            seq = self._init_event_seq() + 1
            validated["seq"] = seq
            with open(self.events_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(validated, sort_keys=True, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._event_seq = seq
        return validated

    def read_events(self) -> list[dict]:
        if not self.events_path.exists():
            return []
        events = []
        with open(self.events_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events


def validate_event(event: dict) -> dict:
    """Check the kind/payload contract; returns a normalized copy without a
    sequence number."""
    if not isinstance(event, dict):
        raise ValueError("event must be an object")
    for key in ("user_id", "kind", "payload"):
        if key not in event:
            raise ValueError(f"event missing field {key!r}")
    kind = event["kind"]
    if kind not in EVENT_KINDS:
        raise ValueError(f"unknown event kind {kind!r}")
    payload = event["payload"]
    if not isinstance(payload, dict):
        raise ValueError("payload must be an object")
    expected_key = EVENT_KINDS[kind]
    if set(payload.keys()) != {expected_key}:
        raise EventValidationError(
            f"event kind {kind!r} requires payload with exactly {expected_key!r}"
        )
    if not isinstance(payload[expected_key], str) or not payload[expected_key]:
        raise EventValidationError(f"payload {expected_key!r} must be a nonempty string")
    return {
        "timestamp": int(event.get("timestamp", 0)),
        "user_id": str(event["user_id"]),
        "kind": kind,
        "payload": dict(payload),
    }
