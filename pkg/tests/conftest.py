from __future__ import annotations

import shutil
from pathlib import Path

import pytest

from portrait_engine import pipeline
from portrait_engine.corpus import Post, UserDocument
from portrait_engine.store import Store

FIXTURES = Path(__file__).parent.parent / "fixtures"


def make_post(pid: str, author: str, text: str, ts: int = 1000, rt: bool = False) -> Post:
    return Post(id=pid, author_id=author, timestamp=ts, text=text, is_retweet=rt)


def make_user(author: str, texts: list[str], start_ts: int = 1000, **kwargs) -> UserDocument:
    posts = [
        make_post(f"{author}-{i}", author, text, ts=start_ts + i * 60)
        for i, text in enumerate(texts)
    ]
    return UserDocument.from_posts(author, posts, **kwargs)


@pytest.fixture(scope="session")
def fixture_paths() -> dict:
    return {
        "corpus": FIXTURES / "synthetic_corpus.jsonl",
        "issue": FIXTURES / "issue.json",
        "config": FIXTURES / "config.json",
    }


@pytest.fixture(scope="session")
def pipelined_store(tmp_path_factory, fixture_paths) -> Store:
    """Bundled fixture run end to end once per session; tests that mutate the
    store must copy it first."""
    root = tmp_path_factory.mktemp("store")
    store = Store(root)
    shutil.copy(fixture_paths["config"], store.config_path)
    pipeline.run_ingest(fixture_paths["corpus"], store)
    pipeline.run_stance(store, fixture_paths["issue"])
    pipeline.run_prefs(store)
    pipeline.run_layout(store)
    return store


@pytest.fixture()
def store_copy(pipelined_store, tmp_path) -> Store:
    root = tmp_path / "store"
    shutil.copytree(pipelined_store.root, root)
    return Store(root)
