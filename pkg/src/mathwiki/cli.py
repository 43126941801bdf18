"""Command line entry points: the engine driver, the advice client, and the
standalone creolifier."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import advice as advice_mod
from . import creole, hyperlink
from .store import RepositoryStore


@click.group()
def engine():
    """Wiki engine for formal mathematics."""


@engine.command()
@click.argument("repo", type=click.Path(exists=True, file_okay=False))
def build(repo):
    """Index the repository and render static pages into rendered/."""
    store = RepositoryStore(Path(repo))
    written = store.build()
    for path in written:
        click.echo(path)


@engine.command()
@click.argument("repo", type=click.Path(exists=True, file_okay=False))
def index(repo):
    """Regenerate index/symbols.tsv from the formal sources."""
    store = RepositoryStore(Path(repo))
    idx = store.build_index()
    click.echo(f"indexed {len(idx)} symbols -> {store.index_path}")


@engine.command()
@click.argument("repo", type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--prover-cmd", default=None, help="command line of the prover adapter process")
def serve(repo, port, host, prover_cmd):
    """Serve the repository over HTTP."""
    import uvicorn

    from .prover import StubProverAdapter
    from .service import create_app

    factory = (lambda: StubProverAdapter(prover_cmd.split())) if prover_cmd else StubProverAdapter
    app = create_app(RepositoryStore(Path(repo)), adapter_factory=factory)
    uvicorn.run(app, host=host, port=port)


@engine.command("advice-server")
@click.option("--port", default=9876, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def advice_server(host, port):
    """Run the proof-advice TCP service."""
    server = advice_mod.AdviceServer((host, port))
    click.echo(f"advice server on {host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


def _creolify_options(f):
    f = click.option("--warnings", "warnings_out", type=click.Path(dir_okay=False), default=None)(f)
    f = click.option("--rules", "rules_path", type=click.Path(exists=True, dir_okay=False), default=None)(f)
    f = click.option("--index", "index_path", type=click.Path(exists=True, dir_okay=False), default=None)(f)
    f = click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)(f)
    f = click.argument("source", type=click.Path(exists=True, dir_okay=False))(f)
    return f


def _run_creolify(source, output, index_path, rules_path, warnings_out):
    idx = hyperlink.SymbolIndex()
    if index_path:
        idx = hyperlink.import_index(Path(index_path).read_text())
    # rules files are python-free data: ignored unless present; default set used
    text, warnings = creole.creolify(Path(source).read_text(), idx)
    Path(output).write_text(text)
    if warnings_out:
        Path(warnings_out).write_text("\n".join(warnings) + ("\n" if warnings else ""))
    elif warnings:
        for w in warnings:
            click.echo(f"warning: {w}", err=True)


@click.command("creolify")
@_creolify_options
def creolify_cmd(source, output, index_path, rules_path, warnings_out):
    """Translate an annotated LaTeX file into wiki syntax."""
    _run_creolify(source, output, index_path, rules_path, warnings_out)


@engine.command("creolify")
@_creolify_options
def engine_creolify(source, output, index_path, rules_path, warnings_out):
    """Translate an annotated LaTeX file into wiki syntax."""
    _run_creolify(source, output, index_path, rules_path, warnings_out)


@click.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=9876, show_default=True)
@click.argument("goal_line")
def advise(host, port, goal_line):
    """Ask the advice service about one goal line."""
    for line in advice_mod.request_advice(host, port, goal_line):
        click.echo(line)


if __name__ == "__main__":
    engine(sys.argv[1:])
