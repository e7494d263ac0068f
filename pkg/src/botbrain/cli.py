"""Command-line interface: batch generation/evaluation, headless runs,
service launchers, and a thin HTTP client for a live orchestrator."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

from .bt import default_registry, serialize_xml
from .dataset import export_corpus, generate_bt_corpus, generate_qa_corpus
from .evaluation import (
    ExperimentSpec,
    ReportInputs,
    emit_report,
    krippendorff_alpha,
    load_generation_log,
    load_ratings_csv,
    one_way_anova,
    run_integration_experiment,
    score_generation_log,
)
from .orchestrator import OrchestratorConfig, Session, load_config, persist
from .strategy import Command, GenerationRejected, make_backend
from .world import default_scenario_dict


@click.group()
def main():
    """Multi-agent robot orchestration toolkit."""


def _load_commands(path: str) -> list[dict]:
    data = json.loads(Path(path).read_text())
    return data if isinstance(data, list) else [data]


def _backend_from_options(backend, endpoint, drop_prob, swap_prob, seed):
    if backend == "remote":
        if not endpoint:
            raise click.UsageError("--endpoint is required for the remote backend")
        return make_backend("remote", endpoint=endpoint)
    if backend == "faulty":
        return make_backend("faulty", drop_prob=drop_prob, swap_prob=swap_prob, seed=seed)
    return make_backend("oracle")


@main.command()
@click.option("--cmd-file", required=True, type=click.Path(exists=True))
@click.option("--backend", type=click.Choice(["oracle", "faulty", "remote"]), default="oracle")
@click.option("--endpoint", default="")
@click.option("--drop-prob", type=float, default=0.2)
@click.option("--swap-prob", type=float, default=0.0)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None, help="write XML files here instead of stdout")
def gen(cmd_file, backend, endpoint, drop_prob, swap_prob, seed, out):
    """Generate behavior trees for the commands in a JSON file."""
    generator = _backend_from_options(backend, endpoint, drop_prob, swap_prob, seed)
    registry = default_registry()
    out_dir = Path(out) if out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for i, payload in enumerate(_load_commands(cmd_file)):
        cmd = Command.from_dict(payload)
        try:
            xml = serialize_xml(generator.generate(cmd, registry))
        except GenerationRejected as exc:
            click.echo(f"command {i}: REJECTED - {exc}", err=True)
            for violation in exc.violations:
                click.echo(f"  {violation}", err=True)
            continue
        if out_dir:
            path = out_dir / f"command{i}.xml"
            path.write_text(xml)
            click.echo(f"command {i}: {path}")
        else:
            click.echo(xml)


@main.group()
def dataset():
    """Fine-tuning corpus generation."""


@dataset.command("bt")
@click.option("--n", type=int, default=7500, show_default=True)
@click.option("--seed", type=int, default=1)
@click.option("--out", required=True, type=click.Path())
def dataset_bt(n, seed, out):
    """Command-to-tree corpus (instruction tuning layout)."""
    samples = generate_bt_corpus(n, seed=seed)
    export_corpus(samples, out)
    click.echo(f"wrote {n} samples to {out}")


@dataset.command("qa")
@click.option("--n", type=int, default=11000, show_default=True)
@click.option("--seed", type=int, default=1)
@click.option("--out", required=True, type=click.Path())
def dataset_qa(n, seed, out):
    """Outcome-question-answer corpus."""
    samples = generate_qa_corpus(n, seed=seed)
    export_corpus(samples, out)
    click.echo(f"wrote {n} samples to {out}")


@main.command()
@click.option("--scenario", type=click.Path(exists=True), default=None)
@click.option("--commands", "commands_file", type=click.Path(exists=True), default=None,
              help="JSON list of {t_ms, kind, payload} messages")
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=7)
@click.option("--headless", is_flag=True, default=True)
@click.option("--duration-ms", type=int, default=None)
@click.option("--log-dir", type=click.Path(), default="logs")
def run(scenario, commands_file, config_file, seed, headless, duration_ms, log_dir):
    """Run a headless session, injecting scripted messages at their sim times."""
    scenario_dict = (
        json.loads(Path(scenario).read_text()) if scenario else default_scenario_dict()
    )
    config = load_config(config_file) if config_file else OrchestratorConfig()
    digest = hashlib.sha256(
        json.dumps(scenario_dict, sort_keys=True).encode()
    ).hexdigest()[:8]
    session = Session.from_dicts(
        scenario_dict, config, seed=seed, session_id=f"run-{digest}-{seed}"
    )
    messages = sorted(_load_commands(commands_file), key=lambda m: m.get("t_ms", 0)) if commands_file else []
    for message in messages:
        session.run_until(message.get("t_ms", 0))
        session.handle_message(message["kind"], message["payload"])
    if duration_ms is not None:
        session.run_until(duration_ms)
    else:
        session.run_to_completion()
    path = persist(session, log_dir)
    resolved = [e for e in session.event_log if e["type"] == "treeResolved"]
    answers = [e for e in session.event_log if e["type"] == "answer"]
    click.echo(f"session {session.id}: t={session.world.t_ms} ms, log={path}")
    for event in resolved:
        click.echo(f"  agent {event['agent']}: tree {event['status']} at {event['t_ms']} ms")
    for event in answers:
        click.echo(f"  answer at {event['t_ms']} ms: {event['text']}")


@main.group("eval")
def eval_group():
    """Evaluation harness."""


@eval_group.command("integration")
@click.option("--backend", type=click.Choice(["oracle", "faulty", "remote"]), default="oracle")
@click.option("--endpoint", default="")
@click.option("--drop-prob", type=float, default=0.2)
@click.option("--swap-prob", type=float, default=0.0)
@click.option("--seed", type=int, default=0)
@click.option("--examples-per-count", type=int, default=10)
@click.option("--out", type=click.Path(), default="report")
def eval_integration(backend, endpoint, drop_prob, swap_prob, seed, examples_per_count, out):
    """The one-to-six-task integration experiment."""
    generator = _backend_from_options(backend, endpoint, drop_prob, swap_prob, seed)
    spec = ExperimentSpec(backend=generator, examples_per_count=examples_per_count, seed=seed)
    result = run_integration_experiment(spec)
    groups = [g for g in result.fractions_by_count().values() if len(g) >= 2]
    anova = None
    if len(groups) >= 2:
        try:
            anova = one_way_anova(groups)
        except ValueError:
            anova = None
    md_path, csv_path = emit_report(ReportInputs(experiment=result, anova=anova), out)
    click.echo(f"task-level accuracy: {result.task_level_accuracy * 100:.2f}%")
    click.echo(f"mean per-command fraction: {result.mean_per_command_fraction * 100:.2f}%")
    click.echo(f"report: {md_path}, {csv_path}")


@eval_group.command("score-log")
@click.argument("log_file", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default="report")
def eval_score_log(log_file, out):
    """Score an external generation log (JSONL of commandId/tasks/xml)."""
    result = score_generation_log(load_generation_log(log_file))
    md_path, csv_path = emit_report(ReportInputs(experiment=result), out)
    click.echo(f"task-level accuracy: {result.task_level_accuracy * 100:.2f}%")
    click.echo(f"mean per-command fraction: {result.mean_per_command_fraction * 100:.2f}%")
    click.echo(f"report: {md_path}, {csv_path}")


@eval_group.command("ratings")
@click.argument("csv_file", type=click.Path(exists=True))
@click.option("--criterion", "criteria", multiple=True, default=("accuracy:nominal01",),
              help="criterion:scale pairs, e.g. relevance:ordinal1to5")
def eval_ratings(csv_file, criteria):
    """Krippendorff's alpha per criterion from a ratings CSV."""
    scale_by_criterion = dict(c.split(":", 1) for c in criteria)
    matrices = load_ratings_csv(csv_file, scale_by_criterion)
    for criterion, matrix in matrices.items():
        alpha = krippendorff_alpha(matrix)
        click.echo(f"{criterion}: alpha = {alpha:.4f}")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Launch the orchestrator HTTP/WebSocket service."""
    import uvicorn

    uvicorn.run("botbrain.service.app:app", host=host, port=port)


@main.command("serve-mock")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8100)
@click.option("--backend", type=click.Choice(["oracle", "faulty"]), default="oracle")
@click.option("--drop-prob", type=float, default=0.2)
@click.option("--swap-prob", type=float, default=0.0)
@click.option("--seed", type=int, default=0)
def serve_mock(host, port, backend, drop_prob, swap_prob, seed):
    """Launch the mock model server (remote generate/answer protocol)."""
    import uvicorn

    from .service.mockllm import create_mockllm_app

    uvicorn.run(create_mockllm_app(backend, drop_prob, swap_prob, seed), host=host, port=port)


@main.group()
def client():
    """Thin HTTP client for a running orchestrator service."""


def _client_call(method: str, url: str, **kwargs):
    import httpx

    response = httpx.request(method, url, timeout=30.0, **kwargs)
    if response.status_code >= 400:
        click.echo(f"HTTP {response.status_code}: {response.text}", err=True)
        sys.exit(1)
    return response.json()


@client.command("create")
@click.option("--server", default="http://127.0.0.1:8000")
@click.option("--seed", type=int, default=0)
@click.option("--realtime-factor", type=float, default=1.0)
@click.option("--scenario", type=click.Path(exists=True), default=None)
def client_create(server, seed, realtime_factor, scenario):
    body = {"seed": seed, "realtime_factor": realtime_factor}
    if scenario:
        body["scenario"] = json.loads(Path(scenario).read_text())
    data = _client_call("POST", f"{server}/sessions", json=body)
    click.echo(data["id"])


@client.command("send")
@click.argument("session_id")
@click.argument("text")
@click.option("--server", default="http://127.0.0.1:8000")
@click.option("--agent", default=None)
def client_send(session_id, text, server, agent):
    payload = {"text": text}
    if agent:
        payload["agent"] = agent
    data = _client_call(
        "POST",
        f"{server}/sessions/{session_id}/messages",
        json={"kind": "command", "payload": payload},
    )
    for event in data["events"]:
        click.echo(json.dumps(event))


@client.command("ask")
@click.argument("session_id")
@click.argument("text")
@click.option("--server", default="http://127.0.0.1:8000")
@click.option("--agent", default=None)
def client_ask(session_id, text, server, agent):
    payload = {"text": text}
    if agent:
        payload["agent"] = agent
    data = _client_call(
        "POST",
        f"{server}/sessions/{session_id}/messages",
        json={"kind": "question", "payload": payload},
    )
    for event in data["events"]:
        click.echo(json.dumps(event))


@client.command("state")
@click.argument("session_id")
@click.option("--server", default="http://127.0.0.1:8000")
def client_state(session_id, server):
    data = _client_call("GET", f"{server}/sessions/{session_id}/state")
    click.echo(json.dumps(data["state"], indent=2, sort_keys=True))


@client.command("advance")
@click.argument("session_id")
@click.option("--ms", type=int, default=1000)
@click.option("--server", default="http://127.0.0.1:8000")
def client_advance(session_id, ms, server):
    data = _client_call(
        "POST", f"{server}/sessions/{session_id}/advance", json={"duration_ms": ms}
    )
    click.echo(f"t={data['t_ms']} ms, {len(data['events'])} events")


if __name__ == "__main__":
    main()
