"""Bundled track assets."""

from importlib import resources

from ..track import TrainTrack, load_track, parse_track

BUNDLED = ("torus", "sphere4", "genus2")


def load_asset(name: str) -> TrainTrack:
    """Load a bundled asset by name, or any ``.track`` file by path."""
    if name in BUNDLED:
        text = resources.files(__name__).joinpath(f"{name}.track").read_text(encoding="utf-8")
        return parse_track(text, name=name)
    return load_track(name)
