"""Scenario files: JSON schema, validation and construction of domain objects."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import jsonschema

from .model import (
    DEFAULT_N_F,
    LinkProfile,
    Placement,
    Scenario,
    ServiceProfile,
    ValidationError,
)
from .oracle import ExternalOracle, SyntheticOracle, TableOracle
from .reward import RewardConfig
from .search import SearchConfig


class SchemaError(ValueError):
    """A scenario document is malformed; the message names the location."""


_number = {"type": "number"}
_nonneg = {"type": "number", "minimum": 0}
_fraction = {"type": "number", "minimum": 0, "maximum": 1}

_cost = {
    "type": "object",
    "properties": {"a": _nonneg, "c": _nonneg},
    "required": ["a", "c"],
    "additionalProperties": False,
}

_service = {
    "type": "object",
    "properties": {
        "service_id": {"type": "string"},
        "blocks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"a": _nonneg, "c": {"type": "number", "exclusiveMinimum": 0}},
                "required": ["a", "c"],
                "additionalProperties": False,
            },
        },
        "batch_size": {"type": "integer", "minimum": 1},
        "base_accuracy": _fraction,
    },
    "required": ["blocks", "batch_size"],
    "additionalProperties": False,
}

_record = {
    "type": "object",
    "properties": {
        "r_p": {
            "type": "array",
            "minItems": 4,
            "maxItems": 4,
            "items": {"type": ["integer", "null"]},
        },
        "kind": {"enum": ["cross", "skip"]},
        "accuracy": _fraction,
    },
    "required": ["r_p", "accuracy"],
    "additionalProperties": True,
}

SCENARIO_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "scenario_id": {"type": "string"},
        "description": {"type": "string"},
        "local": _service,
        "host": _service,
        "links": {
            "type": "object",
            "properties": {
                "entry": _cost,
                "exit": _cost,
                "skip": _cost,
                "skip_overrides": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "lout": {"type": "integer", "minimum": 0},
                            "lin": {"type": "integer", "minimum": 0},
                            "a": _nonneg,
                            "c": _nonneg,
                        },
                        "required": ["lout", "lin", "a", "c"],
                        "additionalProperties": False,
                    },
                },
            },
            "additionalProperties": False,
        },
        "s": {"type": "integer", "minimum": 0},
        "n_f": {"type": "integer", "minimum": 1},
        "search": {
            "type": "object",
            "properties": {
                "k": {"type": "number", "exclusiveMinimum": 0},
                "a_min": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "epsilon": _nonneg,
                "c_stop": {"type": "integer", "minimum": 1},
                "bootstrap": {"enum": ["first_admissible", "cheapest_path"]},
                "rebuild_q": {"type": "boolean"},
                "max_stages": {"type": "integer", "minimum": 1},
                "max_evaluations": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "oracle": {
            "type": "object",
            "required": ["type"],
            "oneOf": [
                {
                    "properties": {
                        "type": {"const": "table"},
                        "entries": {"type": "array", "items": _record},
                        "file": {"type": "string"},
                        "default": _fraction,
                        "note": {"type": "string"},
                    },
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "type": {"const": "synthetic"},
                        "base": _fraction,
                        "alpha": _number,
                        "beta": _number,
                        "sigma": _nonneg,
                        "seed": {"type": "integer", "minimum": 0},
                    },
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "type": {"const": "external"},
                        "command": {
                            "type": "array",
                            "minItems": 1,
                            "items": {"type": "string"},
                        },
                        "timeout": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "required": ["command"],
                    "additionalProperties": False,
                },
            ],
        },
    },
    "required": ["local", "s"],
    "additionalProperties": False,
}


@dataclass
class ScenarioBundle:
    """A parsed scenario file: the scenario plus its search and oracle settings."""

    scenario: Scenario
    search: SearchConfig
    oracle: Any
    source: Optional[Path] = None
    raw: Optional[dict] = None


def _location(err: jsonschema.ValidationError) -> str:
    parts = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return "$" + parts


def validate_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if not errors:
        return
    err = errors[0]
    if err.validator == "oneOf" and isinstance(err.instance, dict):
        # pick the branch the declared oracle type asked for
        kind = err.instance.get("type")
        for sub in err.context:
            branch = err.schema["oneOf"][sub.schema_path[0]]
            if branch["properties"]["type"].get("const") == kind:
                err = sub
                break
    if err.validator == "additionalProperties":
        allowed = set(err.schema.get("properties", {}))
        extra = sorted(set(err.instance) - allowed)
        where = _location(err)
        names = ", ".join(f"{where}.{k}" for k in extra)
        raise SchemaError(f"unknown key(s): {names}")
    raise SchemaError(f"{_location(err)}: {err.message}")


def _service(doc: dict, default_id: str) -> ServiceProfile:
    return ServiceProfile.from_costs(
        doc.get("service_id", default_id),
        [(b["a"], b["c"]) for b in doc["blocks"]],
        doc["batch_size"],
        doc.get("base_accuracy", 0.0),
    )


def _link(doc: Optional[dict], placement: Placement) -> LinkProfile:
    if doc is None:
        return LinkProfile(placement=placement)
    return LinkProfile(float(doc["a"]), float(doc["c"]), placement)


def build_oracle(doc: Optional[dict], base_dir: Optional[Path], seed: Optional[int] = None):
    if doc is None:
        doc = {"type": "synthetic"}
    kind = doc["type"]
    if kind == "table":
        records = list(doc.get("entries", []))
        default = doc.get("default")
        if "file" in doc:
            fname = Path(doc["file"])
            if base_dir is not None and not fname.is_absolute():
                fname = base_dir / fname
            try:
                with open(fname, encoding="utf-8") as fin:
                    ext = json.load(fin)
            except (OSError, json.JSONDecodeError) as exc:
                raise SchemaError(f"$.oracle.file: cannot read {fname}: {exc}") from None
            if isinstance(ext, list):
                records += ext
            else:
                records += ext.get("entries", [])
                if default is None:
                    default = ext.get("default")
        try:
            return TableOracle.from_records(records, default)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"$.oracle: {exc}") from None
    if kind == "synthetic":
        return SyntheticOracle(
            base=doc.get("base", 0.85),
            skip_penalty_alpha=doc.get("alpha", 0.3),
            host_recovery_beta=doc.get("beta", 0.2),
            noise_sigma=doc.get("sigma", 0.0),
            seed=doc.get("seed", 0) if seed is None else seed,
        )
    return ExternalOracle(doc["command"], doc.get("timeout"), cwd=base_dir)


def build_search_config(doc: Optional[dict]) -> SearchConfig:
    doc = doc or {}
    rc = RewardConfig(k=doc.get("k", 100.0), a_min=doc.get("a_min", 0.86))
    return SearchConfig(
        reward=rc,
        epsilon=doc.get("epsilon", 0.01),
        c_stop=doc.get("c_stop", 3),
        bootstrap=doc.get("bootstrap", "first_admissible"),
        max_stages=doc.get("max_stages"),
        rebuild_q=doc.get("rebuild_q", True),
        max_evaluations=doc.get("max_evaluations", 100_000),
    )


def scenario_from_dict(doc: dict, base_dir: Optional[Path] = None, seed: Optional[int] = None):
    validate_document(doc)
    links = doc.get("links", {})
    overrides = {
        (o["lout"], o["lin"]): LinkProfile(o["a"], o["c"], Placement.ON_LOCAL)
        for o in links.get("skip_overrides", [])
    }
    n_l = len(doc["local"]["blocks"])
    for i, (lout, lin) in enumerate(overrides):
        if not lout < lin < n_l:
            raise SchemaError(
                f"$.links.skip_overrides[{i}]: constraint lout < lin < N_l violated "
                f"(lout={lout}, lin={lin}, N_l={n_l})"
            )
    try:
        scenario = Scenario(
            local=_service(doc["local"], "local"),
            host=_service(doc["host"], "host") if "host" in doc else None,
            entry_link=_link(links.get("entry"), Placement.ON_HOST),
            exit_link=_link(links.get("exit"), Placement.ON_HOST),
            skip_link=_link(links.get("skip"), Placement.ON_LOCAL),
            offload_count_s=doc["s"],
            n_f=doc.get("n_f", DEFAULT_N_F),
            scenario_id=doc.get("scenario_id", "scenario"),
            skip_overrides=overrides,
        )
        search = build_search_config(doc.get("search"))
    except ValidationError as exc:
        raise SchemaError(str(exc)) from None
    oracle = build_oracle(doc.get("oracle"), base_dir, seed)
    return ScenarioBundle(scenario, search, oracle, raw=doc)


def load_scenario(fname, seed: Optional[int] = None) -> ScenarioBundle:
    fname = Path(fname)
    try:
        text = fname.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {fname}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{fname}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    bundle = scenario_from_dict(doc, fname.parent, seed)
    bundle.source = fname
    return bundle
