"""Flat-file persistence: sorted-key JSON, long-format CSV, run manifests."""

import json
import platform
from pathlib import Path
from typing import Any, Dict, Type, TypeVar, Union

import numpy as np
import pandas as pd
import pydantic
import scipy
from loguru import logger
from pydantic import BaseModel, ValidationError

from ..exceptions import ScenarioError
from ..models.scenario import Scenario

ModelT = TypeVar("ModelT", bound=BaseModel)
PathLike = Union[str, Path]


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def dumps(value: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline"""
    return json.dumps(_plain(value), sort_keys=True, indent=2) + "\n"


def write_json(path: PathLike, value: Any) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(value), encoding="utf-8")
    logger.debug(f"wrote {path}")
    return path


def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ScenarioError(f"File not found: {path}", field=str(path))
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Invalid JSON in {path}: {e}", field=str(path)) from e


def load_model(cls: Type[ModelT], path: PathLike) -> ModelT:
    """Validate a JSON file into a pydantic model, naming the file on failure"""
    data = read_json(path)
    try:
        return cls.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        raise ScenarioError(
            f"Invalid {cls.__name__} in {path}: {location or 'root'}: {first.get('msg')}",
            field=location or None,
        ) from e


def load_scenario(path: PathLike) -> Scenario:
    return load_model(Scenario, path)


def save_scenario(scenario: Scenario, path: PathLike) -> Path:
    return write_json(path, scenario.model_dump(mode="json", exclude_none=True))


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.12g", lineterminator="\n")
    logger.debug(f"wrote {path} ({len(frame)} rows)")
    return path


def read_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path)


def manifest_path(out: PathLike) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}.manifest.json")


def versions() -> Dict[str, str]:
    from .. import __version__

    return {
        "hetnet_power": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "pydantic": pydantic.VERSION,
        "python": platform.python_version(),
    }


def write_manifest(out: PathLike, command: str, flags: Dict[str, Any], seed=None) -> Path:
    """Record how an output was produced next to it"""
    return write_json(
        manifest_path(out),
        {
            "command": command,
            "flags": flags,
            "seed": seed,
            "output": Path(out).name,
            "versions": versions(),
        },
    )
