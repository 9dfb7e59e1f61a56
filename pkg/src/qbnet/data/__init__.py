"""Bundled example networks."""

from importlib import resources


def example_path(name="fig1"):
    """Filesystem path of a bundled network file (``fig1``: five-variable family-out network)."""
    return resources.files(__name__) / f"{name}.qbn"


def load_example(name="fig1", validate=True):
    from ..model import parse_network

    return parse_network(example_path(name).read_text(encoding="utf-8"), validate=validate)
