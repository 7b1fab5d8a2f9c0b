"""Bundled example models."""

from importlib.resources import files

from ..syntax import ModelFile, parse_model


def available() -> list:
    return sorted(p.name for p in files(__name__).iterdir() if p.name.endswith(".tcp"))


def model_text(name: str) -> str:
    return files(__name__).joinpath(name).read_text(encoding="utf-8")


def load_model(name: str) -> ModelFile:
    return parse_model(model_text(name))
