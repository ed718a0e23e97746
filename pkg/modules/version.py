"""
Version Module for t-Improper Colouring

Reads application metadata from pyproject.toml with a built-in fallback.
"""

import tomllib
from pathlib import Path

FALLBACK_INFO = {
    "name": "tdep-colouring",
    "version": "Unknown",
    "description": "t-improper colouring of Erdos-Renyi random graphs",
    "python_requirement": ">=3.12",
}


def _pyproject_path():
    return Path(__file__).parent.parent / "pyproject.toml"


def get_app_info():
    """
    Get application information from pyproject.toml

    Returns:
    dict: name, version, description and python_requirement
    """
    try:
        with open(_pyproject_path(), "rb") as f:
            project = tomllib.load(f).get("project", {})
    except (OSError, tomllib.TOMLDecodeError):
        return dict(FALLBACK_INFO)
    return {
        "name": project.get("name", FALLBACK_INFO["name"]),
        "version": project.get("version", FALLBACK_INFO["version"]),
        "description": project.get("description", FALLBACK_INFO["description"]),
        "python_requirement": project.get("requires-python", FALLBACK_INFO["python_requirement"]),
    }
