"""Accessors for the scenes and traces shipped inside the package."""

from __future__ import annotations

from importlib import resources

from .scene import Scene, load_scene

_SCENES = resources.files(__package__) / "data" / "scenes"
_TRACES = resources.files(__package__) / "data" / "traces"


def bundled_scene_names() -> list[str]:
    return sorted(p.name[: -len(".json")] for p in _SCENES.iterdir() if p.name.endswith(".json"))


def bundled_trace_names() -> list[str]:
    return sorted(p.name[: -len(".jsonl")] for p in _TRACES.iterdir() if p.name.endswith(".jsonl"))


def scene_path(name: str):
    p = _SCENES / f"{name}.json"
    if not p.is_file():
        raise FileNotFoundError(f"no bundled scene named {name!r}")
    return p


def trace_path(name: str):
    p = _TRACES / f"{name}.jsonl"
    if not p.is_file():
        raise FileNotFoundError(f"no bundled trace named {name!r}")
    return p


def load_bundled_scene(name: str) -> Scene:
    return load_scene(scene_path(name).read_bytes())
