"""Command-line entry points.

Exit codes: 0 on success, 1 on a domain error (bad corpus, failed
generation, unreachable gateway), 2 on usage errors.
"""

from __future__ import annotations

import datetime as dt
import functools
import sys
from pathlib import Path

import click

from . import baseline as baseline_mod
from . import dataset as dataset_mod
from .config import build_chat_gateway, build_orchestrator, lecture_config, load_config
from .corpus import CorpusStore, DateWindow, SourceConfig, ingest as run_ingest, open_source
from .errors import GroundflowError
from .evaluator import render_table, run_bench, save_results
from .fixtures import corpus_source_dir
from .gateway.local import LocalEmbeddingBackend
from .methods import ContextReaderBackend, build_bench_methods
from .ncen.api import NcenApis
from .orchestrator import Orchestrator


def domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GroundflowError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
def main() -> None:
    """Grounded workflow generation over N-CEN fund reports."""


def _config_default(config_path, value, getter, missing: str):
    """Explicit flag wins; otherwise fall back to the config file."""
    if value is not None:
        return value
    if config_path is not None:
        cfg = load_config(config_path)
        resolved = getter(cfg)
        if resolved:
            return resolved
    raise click.UsageError(missing)


@main.command("ingest")
@click.option("--source", required=True, help="HTTP base URL, a directory, or 'fixture'.")
@click.option("--out", "out_dir", default=None, type=click.Path(path_type=Path))
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
@click.option("--rate", default=None, type=int, help="Max requests per second (default 10).")
@click.option("--contact", default="", help="Contact string sent as User-Agent.")
@click.option("--window-from", "window_from", default=None, help="Earliest filing date (ISO).")
@click.option("--window-to", "window_to", default=None, help="Latest filing date (ISO).")
@click.option("--workers", default=4, show_default=True)
@domain_errors
def ingest_cmd(source, out_dir, config_path, rate, contact, window_from, window_to, workers):
    """Fetch filings, dedup funds, and persist a corpus store."""
    cfg = load_config(config_path) if config_path else None
    out_dir = _config_default(
        config_path, out_dir, lambda c: c.resolve(c.corpus), "--out (or --config) is required"
    )
    if rate is None:
        rate = cfg.rate if cfg else 10
    if not contact and cfg:
        contact = cfg.contact
    location = str(corpus_source_dir()) if source == "fixture" else source
    src = open_source(location, SourceConfig(contact=contact, rate_limit=rate))
    window = DateWindow(
        start=dt.date.fromisoformat(window_from) if window_from else None,
        end=dt.date.fromisoformat(window_to) if window_to else None,
    )
    result = run_ingest(src, CorpusStore(out_dir), window, workers=workers)
    click.echo(
        f"ingested {result.downloaded} reports: "
        f"{result.index.fund_count} funds across {result.index.report_count} retained filings"
    )


@main.command("build-dataset")
@click.option("--corpus", default=None, type=click.Path(path_type=Path))
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--per-tier", default=40, show_default=True)
@click.option("--seed", default=7, show_default=True)
@domain_errors
def build_dataset_cmd(corpus, config_path, out_path, per_tier, seed):
    """Generate the three-tier QA set from a corpus store."""
    corpus = _config_default(
        config_path, corpus, lambda c: c.resolve(c.corpus), "--corpus (or --config) is required"
    )
    apis = NcenApis(CorpusStore(corpus))
    items = dataset_mod.build_all(apis, per_tier, seed)
    dataset_mod.save(items, out_path)
    click.echo(f"wrote {len(items)} items ({per_tier} per tier, seed {seed}) to {out_path}")


@main.command("bench")
@click.option("--dataset", "dataset_path", default=None, type=click.Path(path_type=Path))
@click.option("--corpus", default=None, type=click.Path(path_type=Path))
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
@click.option(
    "--methods",
    default="flowmind,flowmind+feedback,baseline,nct,ba,ncp",
    show_default=True,
)
@click.option("--backend", type=click.Choice(["golden", "faulty"]), default="golden", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path(path_type=Path))
@click.option("--workers", default=1, show_default=True)
@domain_errors
def bench_cmd(dataset_path, corpus, config_path, methods, backend, seed, out_path, workers):
    """Score methods tier by tier and print the comparison table."""
    corpus = _config_default(
        config_path, corpus, lambda c: c.resolve(c.corpus), "--corpus (or --config) is required"
    )
    dataset_path = _config_default(
        config_path,
        dataset_path,
        lambda c: c.resolve(c.gateway.dataset) if c.gateway.dataset else None,
        "--dataset (or --config with a gateway dataset) is required",
    )
    apis = NcenApis(CorpusStore(corpus))
    items = dataset_mod.load(dataset_path)
    names = [m for m in methods.split(",") if m.strip()]
    retrieval = baseline_mod.RetrievalBaseline(apis, LocalEmbeddingBackend())
    index = retrieval.build_index() if "baseline" in [n.strip().lower() for n in names] else None

    from .fixtures import registry_path
    from .lecture import load_registry

    registry = load_registry(registry_path())

    def orchestrator_factory(chat_backend):
        return Orchestrator(
            registry=registry,
            gateway=chat_backend,
            bindings=apis.registry_bindings(),
        )

    method_list = build_bench_methods(
        names,
        orchestrator_factory,
        items,
        baseline=retrieval,
        index=index,
        seed=seed,
        faulty=backend == "faulty",
    )
    results = []
    for method in method_list:
        for tier in dataset_mod.TIER_ORDER:
            if any(i.tier.value == tier for i in items):
                results.append(run_bench(method, items, tier, workers=workers))
    click.echo(render_table(results))
    if out_path:
        save_results(results, out_path)
        click.echo(f"results written to {out_path}")


@main.group("baseline")
def baseline_group() -> None:
    """Retrieval-baseline index and question answering."""


@baseline_group.command("build-index")
@click.option("--corpus", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@domain_errors
def baseline_build_index_cmd(corpus, out_path):
    apis = NcenApis(CorpusStore(corpus))
    retrieval = baseline_mod.RetrievalBaseline(apis, LocalEmbeddingBackend())
    index = retrieval.build_index()
    baseline_mod.save_index(index, out_path)
    click.echo(f"indexed {len(index)} fund blocks (dimension {index.dimension}) to {out_path}")


@baseline_group.command("ask")
@click.option("--corpus", required=True, type=click.Path(path_type=Path))
@click.option("--index", "index_path", required=True, type=click.Path(path_type=Path))
@click.option("--question", required=True)
@click.option("-k", "top_k", default=1, show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path))
@domain_errors
def baseline_ask_cmd(corpus, index_path, question, top_k, config_path):
    apis = NcenApis(CorpusStore(corpus))
    retrieval = baseline_mod.RetrievalBaseline(apis, LocalEmbeddingBackend())
    index = baseline_mod.load_index(index_path)
    gateway = (
        build_chat_gateway(load_config(config_path)) if config_path else ContextReaderBackend()
    )
    click.echo(retrieval.ask(gateway, index, question, k=top_k))


@main.command("ask")
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--question", default=None, help="Single question (otherwise prompt).")
@click.option("--no-feedback", is_flag=True, help="Single-shot: skip the feedback loop.")
@domain_errors
def ask_cmd(config_path, question, no_feedback):
    """Interactive terminal session: question, draft, feedback, approve."""
    cfg = load_config(config_path)
    orch = build_orchestrator(cfg)
    session = orch.start_session(lecture_config(cfg))
    if session.state.value == "FAILED":
        raise GroundflowError(session.failure_cause or "gateway unavailable")
    text = question or click.prompt("question")
    draft = orch.ask(session, text)
    while True:
        if draft.ok:
            click.echo("\n--- workflow ---")
            click.echo(draft.code)
            click.echo("\n--- summary ---")
            click.echo(orch.summarize(session))
            click.echo("\n--- answer ---")
            click.echo(draft.answer_display)
        else:
            click.echo("generation failed:", err=True)
            for diag in draft.diagnostics or [draft.error or ""]:
                click.echo(f"  {diag}", err=True)
        if no_feedback:
            break
        reply = click.prompt("feedback (or 'approve')", default="approve")
        if reply.strip().lower() in ("approve", ""):
            break
        draft = orch.feedback(session, reply)
    if draft.ok:
        final = orch.approve(session)
        click.echo(f"\napproved: {final['answer_text']}  (session {session.id})")
    else:
        sys.exit(1)


@main.command("serve")
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
@domain_errors
def serve_cmd(config_path, host, port):
    """Run the HTTP session service."""
    import uvicorn

    from .service import create_app

    app = create_app(load_config(config_path))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
