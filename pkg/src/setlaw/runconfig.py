"""Run-configuration loading: schema validation and normalization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .embedding import DirectionSet, grid_directions, random_directions
from .experiments import ExperimentConfig
from .randomsets import Process

EXPERIMENT_KINDS = ("fd_slln", "reduced", "intermediate_fd")


class ConfigError(ValueError):
    """A run configuration failed schema validation; carries path-qualified
    messages, one per violation."""

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("\n".join(self.messages))


def load_schema() -> dict:
    text = resources.files("setlaw.schemas").joinpath("run_config.json").read_text("utf-8")
    return json.loads(text)


def validate_payload(payload: dict):
    validator = jsonschema.Draft7Validator(load_schema())
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError(
            f"$.{'.'.join(str(p) for p in err.absolute_path)}: {err.message}"
            if err.absolute_path
            else f"$: {err.message}"
            for err in errors
        )


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    config: ExperimentConfig
    emit_csv: bool
    emit_json: bool
    emit_svg: bool
    payload: dict  # the normalized JSON form (round-trips to this RunConfig)


def _directions_from(payload: dict, space) -> DirectionSet:
    if payload["kind"] == "grid":
        return grid_directions(space, int(payload["count"]))
    return random_directions(space, int(payload["count"]), int(payload.get("seed", 0)))


def from_payload(payload: dict) -> RunConfig:
    validate_payload(payload)
    process = Process.from_json(payload["process"])
    directions = None
    if "directions" in payload:
        directions = _directions_from(payload["directions"], process.space)
    slope_band = tuple(payload["slope_band"]) if "slope_band" in payload else None
    cfg = ExperimentConfig(
        process=process,
        horizon=int(payload["horizon"]),
        n_trajectories=int(payload["trajectories"]),
        mode=payload.get("mode", "exact"),
        checkpoints=tuple(payload["checkpoints"]) if "checkpoints" in payload else None,
        directions=directions,
        master_seed=int(payload["seed"]),
        prune_threshold=int(payload.get("prune_threshold", 5000)),
        exact_gen_ceiling=int(payload.get("exact_gen_ceiling", 200_000)),
        threads=int(payload.get("threads", 1)),
        slope_band=slope_band,
    )
    emit = payload.get("emit", {})
    return RunConfig(
        experiment=payload["experiment"],
        config=cfg,
        emit_csv=bool(emit.get("csv", True)),
        emit_json=bool(emit.get("json", True)),
        emit_svg=bool(emit.get("svg", False)),
        payload=normalized_payload(payload, cfg),
    )


def normalized_payload(payload: dict, cfg: ExperimentConfig) -> dict:
    """The effective configuration with defaults made explicit; feeding it
    back through from_payload reproduces the same run."""
    out = {
        "experiment": payload["experiment"],
        "process": cfg.process.to_json(),
        "horizon": cfg.horizon,
        "trajectories": cfg.n_trajectories,
        "seed": cfg.master_seed,
        "mode": cfg.mode,
        "prune_threshold": cfg.prune_threshold,
        "exact_gen_ceiling": cfg.exact_gen_ceiling,
        "threads": cfg.threads,
        "emit": {
            "csv": bool(payload.get("emit", {}).get("csv", True)),
            "json": bool(payload.get("emit", {}).get("json", True)),
            "svg": bool(payload.get("emit", {}).get("svg", False)),
        },
    }
    if "checkpoints" in payload:
        out["checkpoints"] = [int(c) for c in payload["checkpoints"]]
    if "directions" in payload:
        out["directions"] = dict(payload["directions"])
    if cfg.slope_band is not None:
        out["slope_band"] = [float(cfg.slope_band[0]), float(cfg.slope_band[1])]
    return out


def load_file(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"$: not valid JSON ({exc})"]) from exc
    if not isinstance(payload, dict):
        raise ConfigError(["$: the configuration must be a JSON object"])
    return from_payload(payload)
