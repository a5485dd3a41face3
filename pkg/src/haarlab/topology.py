"""Finite topological spaces over bitmask-encoded point sets.

Points of a space on n points are the indices 0..n-1; a subset is an int
whose bit i records membership of point i.  Open families are stored
explicitly, canonically sorted, so every quantifier in the separation
predicates can be eliminated by direct enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InternalInconsistency,
    NotClosed,
    NotCovered,
    NotDisjoint,
    NotNested,
    NotOpen,
    NotRegular,
    NotStronglyLocallyCompact,
    TooLarge,
)

MAX_POINTS = 64

#: Number of topologies on n labeled points, n = 0..5 (used as a sanity oracle).
TOPOLOGY_COUNTS = (1, 1, 4, 29, 355, 6942)


def bit_indices(mask: int):
    """Yield the set bit positions of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


class FiniteSpace:
    """A topology on points 0..n-1, given by its full family of open sets.

    Validation checks that the family contains the empty and full sets and
    is closed under pairwise union and intersection; the check runs in
    O(#opens * n) by generating the family from the minimal open
    neighborhoods of the points and comparing.
    """

    def __init__(self, n: int, opens):
        if not 1 <= n <= MAX_POINTS:
            raise TooLarge(f"point count {n} outside 1..{MAX_POINTS}")
        full = (1 << n) - 1
        fam = sorted(set(opens))
        for u in fam:
            if u < 0 or u > full:
                raise ValueError(f"open set {u:#x} not a subset of {n} points")
        if 0 not in fam or full not in fam:
            raise ValueError("opens must contain the empty set and the full set")

        fam_set = frozenset(fam)
        min_open = []
        for x in range(n):
            m = full
            for u in fam:
                if u >> x & 1:
                    m &= u
            min_open.append(m)
            if m not in fam_set:
                raise ValueError(
                    f"opens not closed under intersection near point {x}"
                )
        # The family is a topology iff it equals the set of all unions of
        # minimal point neighborhoods (which is one by construction).
        generated = {0}
        frontier = [0]
        distinct_min = sorted(set(min_open))
        while frontier:
            cur = frontier.pop()
            for u in distinct_min:
                nxt = cur | u
                if nxt not in generated:
                    generated.add(nxt)
                    frontier.append(nxt)
        if generated != set(fam):
            raise ValueError("opens not closed under pairwise union")

        self.n = n
        self.full = full
        self.opens = tuple(fam)
        self._open_set = fam_set
        self.min_open = tuple(min_open)
        self._flags = None

    # -- basic predicates ------------------------------------------------

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set

    def is_closed(self, mask: int) -> bool:
        return (self.full ^ mask) in self._open_set

    def closed_sets(self):
        return tuple(sorted(self.full ^ u for u in self.opens))

    def check_subset(self, mask: int) -> int:
        if mask < 0 or mask > self.full:
            raise ValueError(f"subset {mask:#x} not valid for {self.n} points")
        return mask

    # -- closure / interior ----------------------------------------------

    def closure(self, mask: int) -> int:
        """Smallest closed superset: intersection of all closed supersets."""
        self.check_subset(mask)
        acc = self.full
        for u in self.opens:
            if u & mask == 0:  # complement of u is a closed superset
                acc &= self.full ^ u
        return acc

    def interior(self, mask: int) -> int:
        """Largest open subset: union of minimal opens contained in mask."""
        self.check_subset(mask)
        acc = 0
        for x in bit_indices(mask):
            u = self.min_open[x]
            if u & ~mask == 0:
                acc |= u
        return acc

    def smallest_open_superset(self, mask: int) -> int:
        """Opens are intersection-closed, so this is itself open."""
        acc = 0
        for x in bit_indices(mask):
            acc |= self.min_open[x]
        return acc

    # -- separation flags -------------------------------------------------

    def separation_flags(self) -> "SeparationFlags":
        if self._flags is None:
            self._flags = self._compute_flags()
        return self._flags

    def _compute_flags(self) -> "SeparationFlags":
        n = self.n
        mo = self.min_open
        # Two sets admit disjoint open supersets iff their smallest open
        # supersets are disjoint (opens are intersection-closed).
        hausdorff = all(
            mo[x] & mo[y] == 0 for x in range(n) for y in range(x + 1, n)
        )
        closed = self.closed_sets()
        sos_closed = {c: self.smallest_open_superset(c) for c in closed}
        regular = all(
            mo[x] & sos_closed[c] == 0
            for c in closed
            for x in range(n)
            if not c >> x & 1
        )
        normal = all(
            sos_closed[c1] & sos_closed[c2] == 0
            for c1 in closed
            for c2 in closed
            if c1 & c2 == 0
        )
        # Every subset of a finite space is compact, so the full set is a
        # compact neighborhood of every point.
        locally_compact = True
        # A closed compact neighborhood of x: any closed superset of an open
        # set containing x; the full set always qualifies.
        strongly_locally_compact = all(
            any(self.closure(mo[x]) & ~c == 0 for c in closed) for x in range(n)
        )
        # Minimal opens are compact, so they form a base of compact nbhds.
        base_compact = all(
            mo[x] & ~w == 0 for x in range(n) for w in self.opens if w >> x & 1
        )
        # Base of closed compact nbhds: inside every open W containing x there
        # must be a closed set containing an open neighborhood of x; the
        # smallest candidate is the closure of the minimal open of x.
        base_closed_compact = all(
            self.closure(mo[x]) & ~w == 0
            for x in range(n)
            for w in self.opens
            if w >> x & 1
        )
        return SeparationFlags(
            hausdorff=hausdorff,
            regular=regular,
            normal=normal,
            locally_compact=locally_compact,
            strongly_locally_compact=strongly_locally_compact,
            base_compact_nbhds=base_compact,
            base_closed_compact_nbhds=base_closed_compact,
        )

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FiniteSpace)
            and self.n == other.n
            and self.opens == other.opens
        )

    def __hash__(self):
        return hash((self.n, self.opens))

    def __repr__(self):
        return f"FiniteSpace(n={self.n}, opens={len(self.opens)} sets)"


@dataclass(frozen=True)
class SeparationFlags:
    hausdorff: bool
    regular: bool
    normal: bool
    locally_compact: bool
    strongly_locally_compact: bool
    base_compact_nbhds: bool
    base_closed_compact_nbhds: bool


@dataclass(frozen=True)
class PointFunction:
    """A rational-valued function on the points of a finite space."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "values", tuple(Fraction(v) for v in self.values)
        )

    @classmethod
    def indicator(cls, n: int, mask: int) -> "PointFunction":
        return cls(tuple(Fraction(mask >> x & 1) for x in range(n)))

    @classmethod
    def constant(cls, n: int, value) -> "PointFunction":
        return cls((Fraction(value),) * n)

    def support_mask(self) -> int:
        return mask_of(x for x, v in enumerate(self.values) if v != 0)

    def level_set(self, value) -> int:
        return mask_of(x for x, v in enumerate(self.values) if v == value)

    def is_continuous(self, space: FiniteSpace) -> bool:
        """The image is a finite subset of the reals, hence discrete in the
        subspace topology: continuity means every level set is open."""
        if len(self.values) != space.n:
            raise ValueError("function defined on a different point set")
        return all(space.is_open(self.level_set(v)) for v in set(self.values))


# -- constructive separation lemmas ----------------------------------------


def separate(space: FiniteSpace, a: int, b: int):
    """Disjoint open sets (U, V) with a <= U and b <= V, lexicographically
    smallest in the canonical ordering of opens."""
    space.check_subset(a)
    space.check_subset(b)
    if a & b:
        raise NotDisjoint(f"sets share points {a & b:#x}")
    if not space.is_closed(b):
        raise NotClosed(f"{b:#x} is not closed")
    if not space.separation_flags().regular:
        raise NotRegular("separation is only guaranteed on regular spaces")
    for u in space.opens:
        if a & ~u:
            continue
        for v in space.opens:
            if b & ~v == 0 and u & v == 0:
                return u, v
    raise InternalInconsistency("regular space failed to separate")


def split_compact(space: FiniteSpace, k: int, u1: int, u2: int):
    """Split a closed compact k covered by opens u1, u2 into closed parts
    K1 <= u1, K2 <= u2 with K1 | K2 == k, replaying the separation proof."""
    space.check_subset(k)
    if not space.is_closed(k):
        raise NotClosed(f"{k:#x} is not closed")
    for u in (u1, u2):
        if not space.is_open(u):
            raise NotOpen(f"{u:#x} is not open")
    if k & ~(u1 | u2):
        raise NotCovered(f"{k:#x} not covered by {u1:#x} | {u2:#x}")
    l1 = k & ~u1
    l2 = k & ~u2
    v1, v2 = separate(space, l1, l2)
    k1 = k & ~v1
    k2 = k & ~v2
    if k1 | k2 != k or k1 & ~u1 or k2 & ~u2:
        raise InternalInconsistency("split postcondition failed")
    return k1, k2


def closed_compact_sandwich(space: FiniteSpace, k: int):
    """An open U and a closed compact L with k <= U <= L, built from the
    per-point minimal neighborhoods."""
    space.check_subset(k)
    if not space.separation_flags().strongly_locally_compact:
        raise NotStronglyLocallyCompact(
            "sandwich requires a strongly locally compact space"
        )
    u = 0
    l = 0
    for x in bit_indices(k):
        ux = space.min_open[x]
        u |= ux
        l |= space.closure(ux)
    return u, l


def urysohn_finite(space: FiniteSpace, k: int, u: int) -> PointFunction:
    """A continuous g with 1_k <= g <= 1_u and closed support inside u.

    On a regular finite space every closed set is clopen, so the indicator
    of k already qualifies.
    """
    space.check_subset(k)
    if not space.is_closed(k):
        raise NotClosed(f"{k:#x} is not closed")
    if not space.is_open(u):
        raise NotOpen(f"{u:#x} is not open")
    if k & ~u:
        raise NotNested(f"{k:#x} is not contained in {u:#x}")
    if not space.separation_flags().regular:
        raise NotRegular("construction requires a regular space")
    g = PointFunction.indicator(space.n, k)
    if not g.is_continuous(space):
        raise InternalInconsistency("indicator of closed set not continuous")
    return g


# -- enumeration ------------------------------------------------------------


def enumerate_topologies(n: int, max_points: int = 4):
    """All topologies on n labeled points, canonically ordered.

    A topology is determined by the minimal open neighborhoods of its
    points: any assignment x -> U_x with x in U_x and U_y <= U_x for every
    y in U_x arises from exactly one topology, whose opens are the unions
    of the U_x.  This walks all such assignments.
    """
    if n < 1 or n > max_points:
        raise TooLarge(f"n={n} exceeds the enumeration bound {max_points}")
    full = (1 << n) - 1
    spaces = []
    rows = [0] * n

    def rec(i):
        if i == n:
            for x in range(n):
                rx = rows[x]
                ok = True
                for y in bit_indices(rx):
                    if rows[y] & ~rx:
                        ok = False
                        break
                if not ok:
                    return
            opens = {0}
            frontier = [0]
            distinct = sorted(set(rows))
            while frontier:
                cur = frontier.pop()
                for r in distinct:
                    nxt = cur | r
                    if nxt not in opens:
                        opens.add(nxt)
                        frontier.append(nxt)
            spaces.append(FiniteSpace(n, opens))
            return
        for r in range(full + 1):
            if r >> i & 1:
                rows[i] = r
                rec(i + 1)

    rec(0)
    spaces.sort(key=lambda s: s.opens)
    return spaces
