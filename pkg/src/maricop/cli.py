"""Command line entry points: serve the API, replay a recorded log, or
generate simulator scenarios."""

from __future__ import annotations

import json
import socket
import threading
import time

import click
import yaml

from .engine import AppConfig, CopEngine, event_payloads, replay_log
from .simulator import Scenario, reference_scenarios, run_scenario


@click.group()
def main():
    """Maritime common-operating-picture fusion service."""


def _load_config(path: str | None) -> AppConfig:
    return AppConfig.from_yaml(path) if path else AppConfig()


def _iter_lines(source: str):
    """Yield lines from a file path or a tcp:host:port stream."""
    if source.startswith("tcp:"):
        _, host, port = source.split(":")
        sock = socket.create_connection((host, int(port)))
        buf = b""
        while True:
            chunk = sock.recv(4096)
            if not chunk:
                break
            buf += chunk
            while b"\n" in buf:
                line, buf = buf.split(b"\n", 1)
                yield line.decode("utf-8", errors="replace")
    else:
        with open(source, encoding="utf-8") as fh:
            yield from fh


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--ais", "ais_source", default=None, help="AIS file or tcp:host:port")
@click.option("--fmv", "fmv_source", default=None, help="FMV jsonl file or tcp:host:port")
@click.option("--log-dir", default=None, type=click.Path())
@click.option("--replay", "replay_path", default=None, type=click.Path(exists=True))
@click.option("--speed", default=None, type=float, help="replay pacing multiplier")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(config_path, ais_source, fmv_source, log_dir, replay_path, speed,
          host, port):
    """Run the HTTP API, optionally ingesting live sources or a replay."""
    import uvicorn
    from .service import create_app

    cfg = _load_config(config_path)
    if replay_path:
        engine = replay_log(replay_path, cfg, speed, log_dir)
    else:
        engine = CopEngine(cfg, log_dir)
        epoch = cfg.events.epoch
        t0 = time.time()

        def pump(source, kind):
            for line in _iter_lines(source):
                t = time.time()
                if kind == "ais":
                    engine.ingest_ais_line(line, t)
                else:
                    engine.ingest_fmv_record(json.loads(line), t)

        def ticker():
            while True:
                time.sleep(epoch)
                engine.advance_to(time.time())

        if ais_source:
            threading.Thread(target=pump, args=(ais_source, "ais"), daemon=True).start()
        if fmv_source:
            threading.Thread(target=pump, args=(fmv_source, "fmv"), daemon=True).start()
        if ais_source or fmv_source:
            threading.Thread(target=ticker, daemon=True).start()

    uvicorn.run(create_app(engine), host=host, port=port)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--speed", default=None, type=float)
@click.option("--out", "out_path", default=None, type=click.Path())
def replay(input_path, config_path, speed, out_path):
    """Replay a recorded input log and print (or save) the event payloads."""
    engine = replay_log(input_path, _load_config(config_path), speed)
    payloads = event_payloads(engine)
    text = "\n".join(json.dumps(p) for p in payloads)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.option("--scenario", "scenario_path", default=None, type=click.Path(exists=True),
              help="scenario YAML; omit with --name for a bundled scenario")
@click.option("--name", default=None, help="bundled reference scenario name")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", default=None, type=int)
def simulate(scenario_path, name, out_dir, seed):
    """Generate AIS/FMV input streams and ground truth for a scenario."""
    if scenario_path:
        with open(scenario_path, encoding="utf-8") as fh:
            scenario = Scenario.from_dict(yaml.safe_load(fh))
    elif name:
        scenarios = reference_scenarios()
        if name not in scenarios:
            raise click.ClickException(
                f"unknown scenario {name!r}; choose from {sorted(scenarios)}")
        scenario = scenarios[name]
    else:
        raise click.ClickException("provide --scenario or --name")
    if seed is not None:
        scenario.seed = seed
    truth = run_scenario(scenario, out_dir)
    click.echo(f"wrote {out_dir}: {len(truth['states'])} vessel states, "
               f"{len(truth['detections'])} detections, "
               f"{len(truth['expected_events'])} expected events")


if __name__ == "__main__":
    main()
