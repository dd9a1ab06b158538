"""Slope model for laminations carried by the once-punctured-torus track.

A slope ``alpha`` in ``[0, inf]`` stands for the lamination whose leaves cut
the bundled track with ``alpha`` crossings of edge ``b`` per crossing of edge
``a``.  Its leaves follow the two-sided mechanical word of slope
``beta = alpha / (1 + alpha)`` in the letters ``a`` (edge ``a`` forward) and
``b`` (edge ``b`` forward).

Length-``n`` factor sets of mechanical words only change at slopes ``beta``
whose denominator is at most ``n``.  A slope is therefore summarised at
length ``n`` by its *cell*: the point itself if its ``beta`` denominator is at
most ``n``, otherwise the open interval between its two neighbours of that
order.  Cells are found by Stern-Brocot descent on ``alpha``, which maps
mediants to mediants under ``alpha -> beta``, using only integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import ContractViolation, DepthLimitError
from .lamination import Lamination
from .track import DirectedEdge, TrainTrack

LETTER_EDGE = {"a": DirectedEdge("a", True), "b": DirectedEdge("b", True)}


@dataclass(frozen=True)
class Slope:
    """Rational ``p/q`` (``q`` may be 0 for infinity) or continued fraction.

    A continued fraction is ``[a0; prefix..., (tail)...]``: ``terms`` are the
    leading partial quotients and ``period`` repeats forever.  An empty
    ``period`` means only ``terms`` are known, so deep queries fail.
    """

    p: int = 0
    q: int = 1
    terms: tuple = ()
    period: tuple = ()
    kind: str = "rational"

    def __post_init__(self):
        if self.kind == "rational":
            if self.p < 0 or self.q < 0 or (self.p, self.q) == (0, 0):
                raise ContractViolation(f"slope {self.p}/{self.q} is outside [0, inf]")
            if math.gcd(self.p, self.q) != 1:
                raise ContractViolation(f"slope {self.p}/{self.q} is not in lowest terms")
        elif self.kind == "cf":
            if not self.terms or self.terms[0] < 0:
                raise ContractViolation("continued fraction needs a0 >= 0")
            if any(t < 1 for t in self.terms[1:] + self.period):
                raise ContractViolation("partial quotients after a0 must be >= 1")
        else:
            raise ContractViolation(f"unknown slope kind {self.kind!r}")

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "Slope":
        g = math.gcd(p, q) or 1
        return cls(p // g, q // g)

    @classmethod
    def cf(cls, terms, period=()) -> "Slope":
        return cls(terms=tuple(terms), period=tuple(period), kind="cf")

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def exact_depth(self) -> bool:
        return self.is_rational or bool(self.period)

    def partial_quotients(self) -> Iterator[int]:
        if self.is_rational:
            p, q = self.p, self.q
            while q:
                yield p // q
                p, q = q, p % q
        else:
            yield from self.terms
            if self.period:
                yield from itertools.cycle(self.period)

    def __str__(self) -> str:
        if self.is_rational:
            return f"{self.p}/{self.q}"
        head = f"cf:[{self.terms[0]};{','.join(map(str, self.terms[1:]))}]"
        if self.period:
            head += f"periodic:[{','.join(map(str, self.period))}]"
        return head

    def __lt__(self, other: "Slope") -> bool:
        if self.is_rational and other.is_rational:
            return self.p * other.q < other.p * self.q
        return str(self) < str(other)


_CF_RE = re.compile(r"^cf:\[(\d+);([\d,\s]*)\](?:periodic:\[([\d,\s]+)\])?$")


def parse_slope(text: str) -> Slope:
    """Parse ``p/q``, ``inf`` or ``cf:[a0;a1,...]`` with optional ``periodic:[...]``."""
    text = text.strip()
    if text in ("inf", "1/0"):
        return Slope(1, 0)
    m = _CF_RE.match(text)
    if m:
        ints = lambda s: tuple(int(x) for x in s.split(",") if x.strip()) if s else ()
        return Slope.cf((int(m.group(1)),) + ints(m.group(2)), ints(m.group(3)))
    if "/" in text:
        p, q = text.split("/")
        return Slope.rational(int(p), int(q))
    if text.isdigit():
        return Slope.rational(int(text), 1)
    raise ValueError(f"cannot parse slope {text!r}")


# Stern-Brocot cells

def _bden(f) -> int:
    """Denominator of beta = p/(p+q) for alpha = p/q."""
    return f[0] + f[1]


@dataclass(frozen=True)
class Cell:
    """Factor-set class of a slope at a given length.

    ``lo == hi`` for a point cell; otherwise the open interval ``(lo, hi)``
    of alpha values.  Fractions are ``(p, q)`` pairs.
    """

    lo: tuple
    hi: tuple

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def representative(self) -> tuple:
        if self.is_point:
            return self.lo
        return (self.lo[0] + self.hi[0], self.lo[1] + self.hi[1])


def cell(slope: Slope, n: int) -> Cell:
    """Cell of ``slope`` among slopes with beta denominator at most ``n``."""
    if n < 1:
        raise ContractViolation("cell order must be >= 1")
    if slope.is_rational and (slope.q == 0 or slope.p == 0):
        f = (slope.p, slope.q)
        return Cell(f, f)
    lo, hi = (0, 1), (1, 0)
    quotients = slope.partial_quotients()
    for i in itertools.count():
        try:
            a = next(quotients)
        except StopIteration:
            if slope.is_rational:
                break
            raise DepthLimitError(
                f"continued fraction of {slope} exhausted before order {n}", n) from None
        if slope.is_rational:
            # the last quotient of a rational stops one step early on the node itself
            peek = _peek_is_last(slope, i)
            if peek:
                a -= 1
        if i % 2 == 0:
            jmax = (n - _bden(lo)) // _bden(hi)
            j = min(a, jmax)
            lo = (lo[0] + j * hi[0], lo[1] + j * hi[1])
        else:
            jmax = (n - _bden(hi)) // _bden(lo)
            j = min(a, jmax)
            hi = (hi[0] + j * lo[0], hi[1] + j * lo[1])
        if j < a:
            return Cell(lo, hi)
    node = (lo[0] + hi[0], lo[1] + hi[1])
    if _bden(node) <= n:
        return Cell(node, node)
    return Cell(lo, hi)


def _peek_is_last(slope: Slope, i: int) -> bool:
    return i == _cf_length(slope.p, slope.q) - 1


def _cf_length(p: int, q: int) -> int:
    k = 0
    while q:
        p, q = q, p % q
        k += 1
    return k


# words

def christoffel_word(p: int, q: int) -> str:
    """Lower mechanical word of slope p/(p+q) over one period (q a's, p b's)."""
    n = p + q
    return "".join("b" if ((k + 1) * p) // n - (k * p) // n == 1 else "a" for k in range(n))


def cyclic_factors(word: str, r: int) -> set:
    n = len(word)
    reps = word * (r // n + 2)
    return {reps[k:k + r] for k in range(n)}


class MechanicalWord:
    """Lower mechanical word ``s(k) = floor((k+1) beta) - floor(k beta)``."""

    def __init__(self, slope: Slope):
        self.slope = slope

    def prefix(self, length: int) -> str:
        # floor(k beta) for k <= length is constant on cells of order `length`
        rep = cell(self.slope, max(length, 1)).representative()
        p, q = rep
        n = p + q
        return "".join("b" if ((k + 1) * p) // n - (k * p) // n == 1 else "a"
                       for k in range(length))

    def letter(self, k: int) -> str:
        return self.prefix(k + 1)[k]

    def factors(self, r: int) -> set:
        p, q = cell(self.slope, r).representative()
        return cyclic_factors(christoffel_word(p, q), r)


def _word_to_path(word: str) -> tuple:
    return tuple(LETTER_EDGE[c] for c in word)


class SlopeLamination(Lamination):
    backend = "slope-model"

    def __init__(self, track: TrainTrack, slope: Slope):
        super().__init__(track)
        if set(track.edge_ids) != {"a", "b"}:
            raise ContractViolation("the slope model needs the torus track with edges a, b")
        self.slope = slope
        self.word = MechanicalWord(slope)

    def _paths(self, r: int):
        return [_word_to_path(w) for w in self.word.factors(r)]

    def language_key(self, r: int):
        return cell(self.slope, r)

    def provably_equal(self, other: Lamination) -> bool:
        return self is other or (isinstance(other, SlopeLamination)
                                 and other.slope == self.slope and other.track == self.track)

    def __repr__(self) -> str:
        return f"SlopeLamination({self.slope})"


def slope_to_lamination(slope: Slope, track: TrainTrack | None = None) -> SlopeLamination:
    if track is None:
        from .assets import load_asset

        track = load_asset("torus")
    return SlopeLamination(track, slope)


def farey_slopes(Q: int) -> list:
    """Reduced fractions in [0, 1] with denominator at most Q, ascending."""
    if Q < 1:
        raise ContractViolation("Q must be >= 1")
    out = []
    a, b, c, d = 0, 1, 1, Q
    out.append(Slope(a, b))
    while c <= Q:
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append(Slope(a, b))
    return out


def divergence_depth(alpha: Slope, beta: Slope, r_max: int) -> int | None:
    """Largest r <= r_max at which the two factor sets agree.

    Returns 0 when they already differ at length 1 and ``None`` when they
    agree through ``r_max``.
    """
    if r_max < 1:
        raise ContractViolation("r_max must be >= 1")
    if alpha == beta:
        return None
    if cell(alpha, r_max) == cell(beta, r_max):
        return None
    lo, hi = 0, r_max  # agree at lo (vacuous for 0), differ at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if cell(alpha, mid) == cell(beta, mid):
            lo = mid
        else:
            hi = mid
    return lo


def beta_value(slope: Slope) -> Fraction:
    if not slope.is_rational:
        raise ContractViolation("exact value only for rational slopes")
    return Fraction(slope.p, slope.p + slope.q)
