"""Operational CLI: ingest, serve, ask, search."""

from __future__ import annotations

import argparse
import sys

from . import engine
from .abilities import load_catalog
from .config import ServiceConfig, load_config
from .corpus import Theme, corpus_stats, load_corpus
from .errors import WorkbenchError
from .providers import StubProvider
from .retrieval import build_index, passages_from_corpus, retrieve


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persona-workbench",
        description="Grounded persona chat service and corpus tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate a corpus file")
    p_ingest.add_argument("path", help="corpus JSONL file")
    p_ingest.add_argument("--stats", action="store_true", help="print per-theme counts")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", help="JSON config file (defaults used when omitted)")

    p_ask = sub.add_parser("ask", help="one grounded exchange without the server")
    p_ask.add_argument("--theme", required=True, help="theme restricting retrieval")
    p_ask.add_argument("--question", required=True, help="the user question")
    p_ask.add_argument("--stub", action="store_true", help="force the offline stub provider")
    p_ask.add_argument("--config", help="JSON config file")

    p_search = sub.add_parser("search", help="debug the retrieval index")
    p_search.add_argument("theme", help="theme restricting retrieval")
    p_search.add_argument("query", help="query text")
    p_search.add_argument("-k", type=int, default=4, help="max results (default 4)")
    p_search.add_argument("--config", help="JSON config file")

    return parser


def _load_service_config(path: str | None) -> ServiceConfig:
    return load_config(path) if path else ServiceConfig()


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.path)
    print(f"ok: {len(corpus)} records")
    if args.stats:
        for theme, count in corpus_stats(corpus).items():
            print(f"{theme.value}: {count}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load_service_config(args.config)
    app = create_app(config)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    except (OSError, SystemExit) as exc:
        code = exc.code if isinstance(exc, SystemExit) else 1
        if code:
            print(f"error: server failed to start: {exc}", file=sys.stderr)
            return int(code) if isinstance(code, int) else 1
    return 0


def _cmd_ask(args: argparse.Namespace) -> int:
    if not args.question.strip():
        print("error: question must be non-empty", file=sys.stderr)
        return 2
    config = _load_service_config(args.config)
    theme = Theme.parse(args.theme)
    corpus = load_corpus(config.corpus_path)
    index = build_index(passages_from_corpus(corpus))
    if args.stub or config.provider == "stub":
        provider = StubProvider(seed=config.stub_seed)
    else:
        from .service import build_provider

        provider = build_provider(config)

    profile = engine.PersonaProfile(
        persona_id="cli-ask",
        theme=theme,
        name="Alex",
        age=30,
        occupation="community advocate",
        medical_condition="Down Syndrome",
    )
    profile.system_prompt = engine.assemble_system_prompt(
        profile, [], reply_word_cap=config.reply_word_cap
    )
    passages = [p for p, _ in retrieve(index, args.question, theme, config.retrieval_k)]
    bundle = engine.assemble_chat_bundle(profile, [], args.question, passages)
    print(provider.complete(bundle))
    if passages:
        print("grounded on: " + ", ".join(p.record_id for p in passages))
    else:
        print("grounded on: (no matching passages)")
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    config = _load_service_config(args.config)
    theme = Theme.parse(args.theme)
    corpus = load_corpus(config.corpus_path)
    index = build_index(passages_from_corpus(corpus))
    results = retrieve(index, args.query, theme, args.k)
    if not results:
        print("no matches")
        return 0
    for passage, score in results:
        snippet = passage.text[:100].replace("\n", " ")
        print(f"{passage.passage_id}\t{score:.4f}\t[{passage.record_id}] {snippet}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "ingest": _cmd_ingest,
        "serve": _cmd_serve,
        "ask": _cmd_ask,
        "search": _cmd_search,
    }
    try:
        return handlers[args.command](args)
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
