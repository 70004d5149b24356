"""Command-line entry point: `engine <verb>`.

Verbs mirror the pipeline stages: ingest, stance, prefs, recommend, layout,
topics, serve. The store directory comes from --store (or --out for ingest),
falling back to the ENGINE_STORE environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from portrait_engine import pipeline
from portrait_engine.store import Store


def _store_from(args, attr: str = "store") -> Store:
    path = getattr(args, attr, None) or os.environ.get("ENGINE_STORE")
    if not path:
        raise SystemExit(f"no store directory: pass --{attr.replace('_', '-')} or set ENGINE_STORE")
    return Store(path)


def _add_store_arg(parser: argparse.ArgumentParser):
    parser.add_argument("--store", help="store directory (default: $ENGINE_STORE)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="engine",
        description="Characterize users, recommend opposing-view posts, build data portraits.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read a JSONL crawl into a store")
    p.add_argument("--input", required=True, help="newline-delimited JSON posts")
    p.add_argument("--out", required=True, help="store directory to create/overwrite")
    p.add_argument("--min-posts", type=int, default=1)
    p.add_argument("--cohort-fences", action="store_true",
                   help="drop connectivity outliers via boxplot upper fences")
    p.add_argument("--skip-invalid", action="store_true",
                   help="skip malformed records instead of failing")

    p = sub.add_parser("stance", help="build stance vectors and user stance profiles")
    p.add_argument("--issue", required=True, help="issue config JSON")
    _add_store_arg(p)
    p.add_argument("--out", help="output path (default: <store>/stances.json)")

    p = sub.add_parser("prefs", help="build preference profiles")
    p.add_argument("--user", help="single user id (default: all users)")
    p.add_argument("--k", type=int, help="topics per profile")
    _add_store_arg(p)

    p = sub.add_parser("recommend", help="rank recommendations for a user")
    p.add_argument("--user", required=True)
    p.add_argument("--lambda", dest="lam", type=float,
                   help="relevance weight in [0,1] (default: per-user assignment)")
    p.add_argument("--top", type=int)
    p.add_argument("--post", help="restrict to candidates sharing this post's topics")
    _add_store_arg(p)

    p = sub.add_parser("layout", help="compute portrait layouts")
    p.add_argument("--user", help="single user id (default: all users)")
    p.add_argument("--seed", type=int)
    _add_store_arg(p)

    p = sub.add_parser("topics", help="train the topic model and analyze the topic graph")
    p.add_argument("--k", type=int)
    p.add_argument("--iters", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tau", type=float, help="topic contribution threshold")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    _add_store_arg(p)

    p = sub.add_parser("serve", help="serve portraits, recommendations and events over HTTP")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="directory of static frontend files to serve")
    _add_store_arg(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.command == "ingest":
        store = Store(args.out)
        count = pipeline.run_ingest(
            args.input,
            store,
            min_posts=args.min_posts,
            use_fences=args.cohort_fences,
            skip_invalid=args.skip_invalid,
        )
        print(f"ingested {count} users into {store.root}")
        return 0

    if args.command == "stance":
        store = _store_from(args)
        out = None
        if args.out:
            out = Path(args.out)
            if not out.is_absolute():
                out = store.root / out
        path = pipeline.run_stance(store, args.issue, out)
        print(f"wrote {path}")
        return 0

    if args.command == "prefs":
        store = _store_from(args)
        written = pipeline.run_prefs(store, user_id=args.user, k=args.k)
        print(f"wrote {len(written)} preference profiles")
        return 0

    if args.command == "recommend":
        store = _store_from(args)
        recs = pipeline.recommend_for_user(
            store, args.user, lam=args.lam, top=args.top, post_id=args.post
        )
        json.dump(recs, sys.stdout, indent=2, ensure_ascii=False)
        print()
        return 0

    if args.command == "layout":
        store = _store_from(args)
        written = pipeline.run_layout(store, user_id=args.user, seed=args.seed)
        print(f"wrote {len(written)} layouts")
        return 0

    if args.command == "topics":
        store = _store_from(args)
        paths = pipeline.run_topics(
            store, k=args.k, iterations=args.iters, seed=args.seed,
            tau=args.tau, alpha=args.alpha, beta=args.beta,
        )
        for name, path in paths.items():
            print(f"{name}: {path}")
        return 0

    if args.command == "serve":
        from portrait_engine.service import create_server

        store = _store_from(args)
        server = create_server(store, port=args.port, host=args.host, ui_dir=args.ui)
        print(f"serving {store.root} on http://{args.host}:{args.port}")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            server.shutdown()
        return 0

    raise SystemExit(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
