"""Bundled benchmark networks and static result tables."""

import pathlib

_HERE = pathlib.Path(__file__).resolve().parent

BUNDLED = ("karate", "dolphins", "football", "polbooks")


def path(name):
    """Absolute path of a bundled data file.

    ``name`` is either a bare dataset name ('karate' resolves to karate.gml)
    or an exact file name ('karate.labels', 'reported_modularity.csv').
    """
    candidate = _HERE / (f"{name}.gml" if name in BUNDLED else name)
    if not candidate.is_file():
        raise FileNotFoundError(f"no bundled data file '{name}'")
    return candidate


def reference_front_path(dataset, variant, seed=0):
    """Path of a bundled cached reference front, or None if not shipped."""
    candidate = _HERE / "reference_fronts" / f"{dataset}_{variant.lower()}_s{seed}.txt"
    return candidate if candidate.is_file() else None
