"""Example networks shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def path(name: str) -> Path:
    return Path(str(resources.files(__name__) / name))


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def program(name: str):
    from ..parser import parse_program

    return parse_program(text(name if "." in name else name + ".casp"))


def qbf(name: str):
    from ..parser import parse_qbf

    return parse_qbf(text(name if "." in name else name + ".qbf"))
