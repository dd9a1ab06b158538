"""Laminations as generators of their realized edge-path languages."""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ContractViolation, DepthLimitError
from .track import (
    TrainTrack,
    canonical_cycle,
    canonical_path,
    format_path,
    multicurve_from_weights,
    parse_path,
    reverse_path,
)


@dataclass(frozen=True)
class RealizedPathSet:
    r: int
    paths: tuple  # sorted, closed under reversal

    def __len__(self) -> int:
        return len(self.paths)

    def __contains__(self, path) -> bool:
        return tuple(path) in self._set

    @functools.cached_property
    def _set(self) -> frozenset:
        return frozenset(self.paths)

    def canonical(self) -> tuple:
        """One representative per unoriented path."""
        return tuple(sorted({canonical_path(p) for p in self.paths}))

    def serialize(self) -> str:
        return "".join(format_path(p) + "\n" for p in self.paths)

    @classmethod
    def parse(cls, text: str) -> "RealizedPathSet":
        paths = sorted(parse_path(line) for line in text.splitlines() if line.strip())
        lengths = {len(p) for p in paths}
        if len(lengths) > 1:
            raise ValueError(f"mixed path lengths {sorted(lengths)}")
        return cls(lengths.pop() if lengths else 0, tuple(paths))

    @classmethod
    def from_paths(cls, r: int, paths: Iterable[tuple]) -> "RealizedPathSet":
        closed = set()
        for p in paths:
            p = tuple(p)
            if len(p) != r:
                raise ContractViolation(f"path {format_path(p)} does not have length {r}")
            closed.add(p)
            closed.add(reverse_path(p))
        return cls(r, tuple(sorted(closed)))


class Lamination:
    """Base class for lamination backends.

    Subclasses implement :meth:`_paths`.  ``max_depth`` is ``None`` when every
    length can be answered exactly.  ``factor_closed`` declares that the
    backend's languages are factor closed, which lets callers stop comparing
    at the first disagreement.
    """

    backend = "abstract"
    factor_closed = True
    max_depth: int | None = None

    def __init__(self, track: TrainTrack):
        self.track = track
        self._cache: dict = {}
        self._lock = threading.Lock()

    def _paths(self, r: int) -> Iterable[tuple]:
        raise NotImplementedError

    def realized_paths(self, r: int) -> RealizedPathSet:
        if r < 1:
            raise ContractViolation("path length must be >= 1")
        if self.max_depth is not None and r > self.max_depth:
            raise DepthLimitError(
                f"{self.backend} backend answers up to length {self.max_depth}, asked {r}", r)
        hit = self._cache.get(r)
        if hit is None:
            hit = RealizedPathSet.from_paths(r, self._paths(r))
            with self._lock:
                self._cache.setdefault(r, hit)
        return hit

    def language_key(self, r: int):
        """Hashable value equal for two laminations iff their length-r sets agree.

        Keys are only comparable between laminations of the same backend class.
        """
        return self.realized_paths(r).paths

    def provably_equal(self, other: "Lamination") -> bool:
        return self is other

    def crosses(self) -> set:
        """Edges met by at least one leaf."""
        return {d.edge for p in self.realized_paths(1).paths for d in p}


class PeriodicLamination(Lamination):
    """Finite union of closed leaves, each a closed legal edge path."""

    backend = "periodic"

    def __init__(self, track: TrainTrack, loops: Iterable[tuple]):
        super().__init__(track)
        loops = {canonical_cycle(tuple(loop)) for loop in loops}
        if not loops:
            raise ContractViolation("a lamination needs at least one leaf")
        for loop in loops:
            if not track.is_legal(loop + loop[:1]):
                raise ContractViolation(f"loop {format_path(loop)} is not a legal closed path")
        self.loops = tuple(sorted(loops))

    def _paths(self, r: int):
        for loop in self.loops:
            n = len(loop)
            reps = loop * (r // n + 2)
            for k in range(n):
                yield reps[k:k + r]

    def provably_equal(self, other: Lamination) -> bool:
        return (self is other or isinstance(other, PeriodicLamination)
                and other.track == self.track and other.loops == self.loops)

    def __repr__(self) -> str:
        return f"PeriodicLamination({[format_path(l) for l in self.loops]})"


class ExplicitLanguage(Lamination):
    """Language given directly as path sets per length.

    Lengths that are not listed are derived as factors of the next listed
    length when ``factor_closed`` is true.  Intended for fixtures and for
    injecting faulty languages into the checkers.
    """

    backend = "explicit"

    def __init__(self, track: TrainTrack, paths_by_length: Mapping[int, Iterable],
                 factor_closed: bool = False):
        super().__init__(track)
        self._given = {int(r): [tuple(p) for p in ps] for r, ps in paths_by_length.items()}
        self.max_depth = max(self._given) if self._given else 0
        self.factor_closed = factor_closed

    def _paths(self, r: int):
        if r in self._given:
            return self._given[r]
        longer = [k for k in self._given if k > r]
        if not longer or not self.factor_closed:
            raise DepthLimitError(f"no path set stored for length {r}", r)
        k = min(longer)
        return {p[i:i + r] for p in self._given[k] for i in range(k - r + 1)}


def from_multicurve(track: TrainTrack, w: Mapping) -> PeriodicLamination:
    if all(int(v) == 0 for v in w.values()):
        raise ContractViolation("the zero weight system carries no lamination")
    return PeriodicLamination(track, multicurve_from_weights(track, w))


def same_language(lam: Lamination, other: Lamination, r: int) -> bool:
    if lam.track != other.track:
        raise ContractViolation("laminations live on different tracks")
    if type(lam) is type(other):
        return lam.language_key(r) == other.language_key(r)
    return lam.realized_paths(r).paths == other.realized_paths(r).paths


def equal_up_to_depth(lam: Lamination, other: Lamination, r: int) -> bool:
    """True iff the realized path sets agree at every length 1..r."""
    if r < 1:
        raise ContractViolation("depth must be >= 1")
    return all(same_language(lam, other, k) for k in range(1, r + 1))
