"""Command-line client: batch verification, level listing, and servers.

``verify`` runs in-process and exits 0 when the board implements the
circuit, 1 when it does not, and 2 on unreadable input files.  ``serve``
starts the HTTP service, ``stdio`` the line protocol, and ``request``
forwards a single protocol message to a running server.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .board import board_from_json
from .canonical import ComparisonMode
from .circuit import parse_circuit
from .errors import MoveError, ParseError, PuzzleError
from .evaluator import evaluate
from .levels import builtin_levels
from .protocol import SessionStore, default_seed, run_stdio
from .tableau import OutcomePolicy


@click.group()
@click.version_option(__version__)
def main():
    """MBQC polyomino puzzle engine."""


@main.command()
@click.argument("circuit_path", type=click.Path(path_type=Path))
@click.argument("board_path", type=click.Path(path_type=Path))
@click.option("--mode", type=click.Choice(["unsigned", "strict"]), default="unsigned",
              show_default=True, help="Stabilizer comparison mode.")
@click.option("--seed", type=int, default=None,
              help="Use seeded random measurement outcomes instead of +1 "
                   "post-selection (ENGINE_SEED supplies a default).")
@click.option("--quiet", is_flag=True, help="Suppress the JSON report.")
def verify(circuit_path: Path, board_path: Path, mode: str, seed: int | None,
           quiet: bool):
    """Verify a board file against a circuit file."""

    def fail_parse(message: str):
        if not quiet:
            click.echo(json.dumps({"error": message}))
        sys.exit(2)

    try:
        circuit = parse_circuit(circuit_path.read_text())
    except OSError as exc:
        fail_parse(f"cannot read circuit: {exc}")
    except ParseError as exc:
        fail_parse(f"circuit: {exc}")
    try:
        board = board_from_json(board_path.read_text())
    except OSError as exc:
        fail_parse(f"cannot read board: {exc}")
    except ParseError as exc:
        fail_parse(f"board: {exc}")
    except MoveError as exc:
        # structurally illegal board: a wrong submission, not a file error
        report = {
            "correct": False,
            "mode": mode,
            "diagnostics": [f"illegal board (rule {exc.rule}): {exc}"],
        }
        if not quiet:
            click.echo(json.dumps(report))
        sys.exit(1)

    policy = (
        OutcomePolicy.random(seed if seed is not None else default_seed())
        if seed is not None
        else OutcomePolicy.plus_one()
    )
    try:
        result = evaluate(board, circuit, ComparisonMode(mode), policy)
    except PuzzleError as exc:
        fail_parse(str(exc))
    if not quiet:
        click.echo(json.dumps(result.to_json(), indent=2))
    sys.exit(0 if result.correct else 1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--static", default=None, type=click.Path(),
              help="Directory with the built frontend to serve at /.")
def serve(host: str, port: int, static: str | None):
    """Run the HTTP service (protocol mirror + typed endpoints)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(static_dir=static), host=host, port=port)


@main.command()
def stdio():
    """Serve the line-delimited JSON protocol over stdin/stdout."""
    run_stdio(SessionStore())


@main.command()
@click.option("--url", default="http://127.0.0.1:8000", show_default=True)
@click.argument("message")
def request(url: str, message: str):
    """Send one protocol MESSAGE (JSON) to a running server."""
    import httpx

    try:
        msg = json.loads(message)
    except json.JSONDecodeError as exc:
        click.echo(json.dumps({"error": f"invalid JSON: {exc.msg}"}))
        sys.exit(2)
    reply = httpx.post(f"{url}/api/protocol", json=msg, timeout=30.0)
    click.echo(json.dumps(reply.json(), indent=2))
    sys.exit(0 if reply.json().get("ok") else 1)


@main.command()
@click.option("--as-json", "as_json", is_flag=True, help="Print full level JSON.")
def levels(as_json: bool):
    """List the built-in levels."""
    lvls = builtin_levels()
    if as_json:
        click.echo(json.dumps([lv.to_json() for lv in lvls], indent=2))
        return
    for lv in lvls:
        gates = " ".join(
            f"{g.kind}({','.join(map(str, g.qubits))})" for g in lv.circuit.gates
        ) or "identity"
        click.echo(
            f"{lv.id}  {lv.name:15s} n={lv.circuit.n} "
            f"grid={lv.grid.width}x{lv.grid.height} par={lv.par}  [{gates}]"
        )


if __name__ == "__main__":
    main()
