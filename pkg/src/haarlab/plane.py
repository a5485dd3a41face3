"""The seminorm plane: R^2 with the topology of |x|, and its Haar measure.

Borel sets are represented on the sub-lattice of cylinders E x R where E
is a finite union of rational-endpoint intervals; the Haar measure of a
cylinder is the Lebesgue length of its base, which is what the seminorm
topology forces.  The module also produces and re-verifies the
counterexample certificate for the compact-generated measure attempt.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NegativeMass


@dataclass(frozen=True)
class Interval:
    """A rational interval with open/closed endpoint flags."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo = Fraction(self.lo)
        hi = Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo > hi:
            raise ValueError(f"empty interval {lo} > {hi}")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate interval must be closed")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def shifted(self, a) -> "Interval":
        a = Fraction(a)
        return Interval(self.lo + a, self.hi + a, self.lo_closed, self.hi_closed)

    def contains_point(self, x) -> bool:
        x = Fraction(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        lo_ok = self.lo < other.lo or (
            self.lo == other.lo and (self.lo_closed or not other.lo_closed)
        )
        hi_ok = self.hi > other.hi or (
            self.hi == other.hi and (self.hi_closed or not other.hi_closed)
        )
        return lo_ok and hi_ok

    def touches_or_overlaps(self, other: "Interval") -> bool:
        """Assuming self.lo <= other.lo: true if the union is one interval."""
        if self.hi > other.lo:
            return True
        return self.hi == other.lo and (self.hi_closed or other.lo_closed)

    def overlaps(self, other: "Interval") -> bool:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo < hi:
            return True
        if lo > hi:
            return False
        return self.contains_point(lo) and other.contains_point(lo)


class IntervalUnion:
    """A finite union of intervals in canonical (sorted, merged) form."""

    def __init__(self, intervals):
        ivs = sorted(
            (iv if isinstance(iv, Interval) else Interval(*iv) for iv in intervals),
            key=lambda iv: (iv.lo, not iv.lo_closed),
        )
        merged = []
        for iv in ivs:
            if merged and merged[-1].touches_or_overlaps(iv):
                last = merged.pop()
                if iv.hi > last.hi:
                    hi, hic = iv.hi, iv.hi_closed
                elif iv.hi < last.hi:
                    hi, hic = last.hi, last.hi_closed
                else:
                    hi, hic = last.hi, last.hi_closed or iv.hi_closed
                merged.append(Interval(last.lo, hi, last.lo_closed, hic))
            else:
                merged.append(iv)
        self.intervals = tuple(merged)

    @property
    def length(self) -> Fraction:
        """Lebesgue length; independent of the endpoint flags."""
        return sum((iv.length for iv in self.intervals), Fraction(0))

    def shifted(self, a) -> "IntervalUnion":
        return IntervalUnion(iv.shifted(a) for iv in self.intervals)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.intervals + other.intervals)

    def intersects(self, other: "IntervalUnion") -> bool:
        return any(
            a.overlaps(b) for a in self.intervals for b in other.intervals
        )

    def contains(self, other: "IntervalUnion") -> bool:
        return all(
            any(mine.contains_interval(iv) for mine in self.intervals)
            for iv in other.intervals
        )

    def is_closed(self) -> bool:
        return all(iv.lo_closed and iv.hi_closed for iv in self.intervals)

    def is_open(self) -> bool:
        return all(
            not iv.lo_closed and not iv.hi_closed for iv in self.intervals
        )

    def __eq__(self, other):
        return (
            isinstance(other, IntervalUnion)
            and self.intervals == other.intervals
        )

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        parts = ", ".join(
            f"{'[' if iv.lo_closed else '('}{iv.lo}, {iv.hi}"
            f"{']' if iv.hi_closed else ')'}"
            for iv in self.intervals
        )
        return f"IntervalUnion({parts})"


@dataclass(frozen=True)
class CylinderSet:
    """The Borel set base x R of the seminorm plane."""

    base: IntervalUnion

    def is_closed_compact(self) -> bool:
        return self.base.is_closed()


def haar_v(e: CylinderSet) -> Fraction:
    """Haar mass of a cylinder: the Lebesgue length of its base."""
    return e.base.length


def translate_v(e: CylinderSet, a, b=0) -> CylinderSet:
    """Translate by (a, b); the second coordinate cannot affect the set."""
    Fraction(b)  # validated but irrelevant: the base ignores y
    return CylinderSet(e.base.shifted(a))


def regularity_gap(e: CylinderSet, eps):
    """A closed compact inner cylinder and an open outer cylinder whose
    masses are within eps of e, obtained by rational endpoint nudges."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    m = len(e.base.intervals)
    if m == 0:
        outer = IntervalUnion([Interval(0, eps / 2, False, False)])
        return CylinderSet(IntervalUnion([])), CylinderSet(outer)
    delta = eps / (2 * m)
    inner_ivs = []
    for iv in e.base.intervals:
        lo = iv.lo if iv.lo_closed else iv.lo + delta
        hi = iv.hi if iv.hi_closed else iv.hi - delta
        if lo > hi:
            mid = (iv.lo + iv.hi) / 2
            lo = hi = mid
        inner_ivs.append(Interval(lo, hi, True, True))
    outer_ivs = [
        Interval(iv.lo - delta, iv.hi + delta, False, False)
        for iv in e.base.intervals
    ]
    return (
        CylinderSet(IntervalUnion(inner_ivs)),
        CylinderSet(IntervalUnion(outer_ivs)),
    )


# -- the counterexample for the compact-generated attempt --------------------


@dataclass(frozen=True)
class Rect:
    """A closed axis-aligned rectangle with rational corners."""

    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError("empty rectangle")

    def shifted(self, dx, dy) -> "Rect":
        return Rect(
            self.x_lo + dx, self.x_hi + dx, self.y_lo + dy, self.y_hi + dy
        )

    def disjoint_from(self, other: "Rect") -> bool:
        return (
            self.x_hi < other.x_lo
            or other.x_hi < self.x_lo
            or self.y_hi < other.y_lo
            or other.y_hi < self.y_lo
        )


#: The unit tile whose translates generate the contradiction.
UNIT_TILE = Rect(0, 1, 0, 1)

FINITENESS_VIOLATED = "FinitenessViolated"
NONZERO_VIOLATED = "NonzeroViolated"

#: Half-width of the finite grid window materialized in zero-mass certificates.
GRID_WINDOW = 3


@dataclass(frozen=True)
class BkCertificate:
    """A machine-checkable refutation of one hypothesized tile mass.

    For a positive mass c the witness is a stack of disjoint vertical
    translates of the unit tile inside [0,1] x R whose total mass exceeds
    the probe bound.  For c = 0 the witness is the grid of integer
    translates of the tile (a finite window is materialized) whose
    subadditivity chain forces total mass zero against nonzeroness.
    """

    input_mass: Fraction
    probe_bound: Fraction
    verdict: str
    translates: tuple = ()  # Rects, FinitenessViolated branch
    grid_offsets: tuple = ()  # (m, n) integer pairs, NonzeroViolated branch


def counterexample_bk(c, probe_bound) -> BkCertificate:
    c = Fraction(c)
    probe_bound = Fraction(probe_bound)
    if c < 0:
        raise NegativeMass(f"hypothesized tile mass {c} is negative")
    if probe_bound <= 0:
        raise ValueError("probe bound must be positive")
    if c > 0:
        m = probe_bound // c + 1
        translates = tuple(
            UNIT_TILE.shifted(0, 2 * n) for n in range(m)
        )
        cert = BkCertificate(
            input_mass=c,
            probe_bound=probe_bound,
            verdict=FINITENESS_VIOLATED,
            translates=translates,
        )
    else:
        offsets = tuple(
            (mm, nn)
            for mm in range(-GRID_WINDOW, GRID_WINDOW + 1)
            for nn in range(-GRID_WINDOW, GRID_WINDOW + 1)
        )
        cert = BkCertificate(
            input_mass=c,
            probe_bound=probe_bound,
            verdict=NONZERO_VIOLATED,
            grid_offsets=offsets,
        )
    if not verify_bk_certificate(cert):
        raise NegativeMass("internal error: certificate failed verification")
    return cert


def verify_bk_certificate(cert: BkCertificate) -> bool:
    """Independent arithmetic re-check of a certificate."""
    c = cert.input_mass
    if cert.verdict == FINITENESS_VIOLATED:
        if c <= 0:
            return False
        tiles = cert.translates
        # each tile is a vertical translate of the unit tile by an even step
        for n, tile in enumerate(tiles):
            if tile != UNIT_TILE.shifted(0, 2 * n):
                return False
        # pairwise disjoint
        for i in range(len(tiles)):
            for j in range(i + 1, len(tiles)):
                if not tiles[i].disjoint_from(tiles[j]):
                    return False
        # contained in K = [0,1] x R
        for tile in tiles:
            if tile.x_lo < 0 or tile.x_hi > 1:
                return False
        # total mass exceeds the probe bound
        return len(tiles) * c > cert.probe_bound
    if cert.verdict == NONZERO_VIOLATED:
        if c != 0:
            return False
        offsets = set(cert.grid_offsets)
        w = GRID_WINDOW
        if offsets != {
            (mm, nn)
            for mm in range(-w, w + 1)
            for nn in range(-w, w + 1)
        }:
            return False
        # the window of tiles covers the square [-w, w+1]^2: translates of
        # the closed unit tile by every integer offset in the window
        tiles = [UNIT_TILE.shifted(mm, nn) for mm, nn in cert.grid_offsets]
        for tile in tiles:
            if tile.x_hi - tile.x_lo != 1 or tile.y_hi - tile.y_lo != 1:
                return False
        xs = {t.x_lo for t in tiles}
        ys = {t.y_lo for t in tiles}
        if xs != {Fraction(i) for i in range(-w, w + 1)}:
            return False
        if ys != {Fraction(i) for i in range(-w, w + 1)}:
            return False
        # subadditivity chain: the countable sum of copies of c is zero,
        # contradicting nonzeroness of a Haar measure
        total = sum((c for _ in tiles), Fraction(0))
        return total == 0
    return False
