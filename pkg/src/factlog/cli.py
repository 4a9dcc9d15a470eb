"""Command-line client of the authoring service.

Every subcommand talks to the FastAPI app: in-process by default (the
app is built from the same flags and driven through an ASGI transport),
or to a remote server via ``--server``.  Exit codes: 0 ok, 1 validation
failure, 2 configuration problem, 3 provider/transport failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import httpx

from .service import ServiceConfig, create_app

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_TRANSPORT = 3


def _config_options(f):
    options = [
        click.option("--frames", envvar="FACTLOG_FRAMES", default=None,
                     help="Frame registry file."),
        click.option("--lvp", envvar="FACTLOG_LVP", default=None,
                     help="Valence-pattern store file."),
        click.option("--training", envvar="FACTLOG_TRAINING", default=None,
                     help="Training annotations to learn at startup."),
        click.option("--parser", envvar="FACTLOG_PARSER", default=None,
                     help="Parser provider: a fixture directory of .conllu "
                          "files or exec:<command>."),
        click.option("--graph", envvar="FACTLOG_GRAPH", default=None,
                     help="Lexical sense-graph file (lexical scorer)."),
        click.option("--embeddings", envvar="FACTLOG_EMBEDDINGS", default=None,
                     help="Embedding fixture file (rbd/sbd scorers)."),
        click.option("--definitions", envvar="FACTLOG_DEFINITIONS", default=None,
                     help="Definition fixture file (rbd/sbd scorers)."),
        click.option("--scorer", envvar="FACTLOG_SCORER", default="none",
                     type=click.Choice(["lexical", "rbd", "sbd", "none"]),
                     help="Role-filler disambiguation scorer."),
        click.option("--mode", envvar="FACTLOG_MODE", default="brave",
                     type=click.Choice(["brave", "cautious"]),
                     help="Query answering mode."),
        click.option("--server", envvar="FACTLOG_SERVER", default=None,
                     help="Base URL of a running service; default in-process."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


class Client:
    """Minimal HTTP client; in-process unless a server URL is given."""

    def __init__(self, server: str | None, config: ServiceConfig):
        if server:
            self._client = httpx.Client(base_url=server, timeout=60.0)
        else:
            from starlette.testclient import TestClient

            self._client = TestClient(create_app(config))

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code >= 400:
            detail = response.json().get("detail", response.text)
            raise click.ClickException(str(detail))
        return response.json()

    def get(self, path: str) -> dict:
        response = self._client.get(path)
        response.raise_for_status()
        return response.json()


def _make_config(opts) -> ServiceConfig:
    return ServiceConfig(
        frames=opts["frames"],
        lvp=opts["lvp"],
        training=opts["training"],
        parser=opts["parser"],
        graph=opts["graph"],
        embeddings=opts["embeddings"],
        definitions=opts["definitions"],
        scorer=opts["scorer"],
        mode=opts["mode"],
    )


def _client(opts) -> Client:
    try:
        return Client(opts["server"], _make_config(opts))
    except Exception as exc:
        raise click.ClickException(f"configuration failed: {exc}")


@click.group()
def main():
    """Factual-English knowledge authoring and reasoning."""


@main.command()
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@_config_options
def validate(files, **opts):
    """Check parses for factual-sentence structure."""
    client = _client(opts)
    any_rejected = False
    for file in files:
        text = Path(file).read_text("utf-8")
        if not text.strip():
            raise click.UsageError(f"{file} is empty")
        result = client.post("/validate", {"conllu": text})
        for sentence in result["sentences"]:
            status = sentence["status"]
            click.echo(f"{file} sent {sentence['sentence_id']}: {status}")
            for violation in sentence["violations"]:
                click.echo(violation["rendered"], err=True)
        any_rejected = any_rejected or not result["accepted"]
    sys.exit(EXIT_VALIDATION if any_rejected else EXIT_OK)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_config_options
def wordfacts(file, **opts):
    """Emit word/9 records for each sentence's best parse."""
    client = _client(opts)
    result = client.post(
        "/wordfacts", {"conllu": Path(file).read_text("utf-8")}
    )
    click.echo(result["records"], nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@_config_options
def normalize(file, output, **opts):
    """Normalize parses (adnominal, coordination, passive)."""
    client = _client(opts)
    result = client.post(
        "/normalize", {"conllu": Path(file).read_text("utf-8")}
    )
    if output:
        Path(output).write_text(result["conllu"], "utf-8")
    else:
        click.echo(result["conllu"], nl=False)


@main.command()
@click.option("--annotations", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--parses", "parses_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_config_options
def learn(annotations, parses_file, output, **opts):
    """Learn valence patterns from annotated training sentences."""
    client = _client(opts)
    payload = {
        "training": Path(annotations).read_text("utf-8"),
        "conllu": Path(parses_file).read_text("utf-8"),
    }
    if opts["frames"]:
        payload["frames"] = Path(opts["frames"]).read_text("utf-8")
    result = client.post("/learn", payload)
    Path(output).write_text(result["lvp"], "utf-8")
    click.echo(f"learned {result['learned']} annotation(s) -> {output}")


@main.command()
@click.argument("sentences", nargs=-1)
@click.option("--sentences-file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="One sentence per line.")
@click.option("--parses", "parses_file",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="Fixture parses for the sentences (CoNLL-U).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@_config_options
def parse(sentences, sentences_file, parses_file, output, **opts):
    """Convert sentences to their unique logical representation."""
    sentence_list = list(sentences)
    if sentences_file:
        sentence_list.extend(
            line.strip()
            for line in Path(sentences_file).read_text("utf-8").splitlines()
            if line.strip()
        )
    if not sentence_list:
        raise click.UsageError("no sentences given")
    client = _client(opts)
    payload: dict = {"sentences": sentence_list}
    if parses_file:
        payload["conllu"] = Path(parses_file).read_text("utf-8")
    result = client.post("/parse", payload)
    for diagnostic in result["diagnostics"]:
        click.echo(diagnostic, err=True)
    if output:
        Path(output).write_text(result["ulr"], "utf-8")
    else:
        click.echo(result["ulr"], nl=False)


@main.command()
@click.option("--kb", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--query", "query_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@_config_options
def reason(kb, query_file, **opts):
    """Answer queries against a knowledge-base file."""
    client = _client(opts)
    result = client.post(
        "/reason",
        {
            "kb": Path(kb).read_text("utf-8"),
            "queries": Path(query_file).read_text("utf-8"),
            "mode": opts["mode"],
        },
    )
    for answer in result["answers"]:
        click.echo(f"% {answer['query']}  [{opts['mode']}]")
        if not answer["bindings"]:
            click.echo("no")
        for binding in answer["bindings"]:
            if binding:
                rendered = ", ".join(f"{k} = {v}" for k, v in sorted(binding.items()))
                click.echo(rendered)
            else:
                click.echo("yes")
    sys.exit(EXIT_OK)


@main.command()
@click.option("--temporal/--no-temporal", default=False,
              help="Treat facts as narrative events with timestamps.")
@_config_options
def repl(temporal, **opts):
    """Interactive authoring session.

    Facts, rules (If ..., then ...), fluent statements (... initiates ...),
    and queries (...?) are accepted; directives: :mode, :temporal, :save,
    :load, :kb.
    """
    client = _client(opts)
    session = client.post(
        "/sessions", {"temporal": temporal, "mode": opts["mode"]}
    )["session_id"]
    click.echo("factlog authoring session; empty line or EOF ends it.")
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if not line:
            break
        reply = client.post(f"/sessions/{session}/input", {"line": line})
        if reply.get("error"):
            click.echo(f"! {reply['message']}")
            for warning in reply["warnings"]:
                click.echo(f"  {warning}")
            continue
        click.echo(f"{reply['kind']}: {reply['message']}")
        for unit in reply["units"]:
            click.echo(f"  {unit}")
        for answer in reply["answers"]:
            if answer:
                click.echo(
                    "  " + ", ".join(f"{k} = {v}" for k, v in sorted(answer.items()))
                )
            else:
                click.echo("  yes")
        if reply["kind"] == "query" and not reply["answers"]:
            click.echo("  no")
        for warning in reply["warnings"]:
            click.echo(f"  warning: {warning}", err=True)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@_config_options
def serve(host, port, **opts):
    """Run the authoring service."""
    import uvicorn

    app = create_app(_make_config(opts))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
