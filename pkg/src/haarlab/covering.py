"""Exact covering numbers (K:S) and the ratio-functional construction.

The covering number is the minimum number of left translates of the
interior of S needed to cover K.  It is computed exactly: iterative
deepening over candidate translates in ascending element order, which
also makes the reported optimal translate list the lexicographically
smallest one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyInterior, InternalInconsistency, NotClosed, NotOpen
from .groups import FiniteTopGroup, identity_closure
from .measure import FiniteMeasure


@dataclass(frozen=True)
class CoveringProblem:
    group: FiniteTopGroup
    k: int  # target point mask, closed compact
    s: int  # covering template point mask, nonempty interior

    def __post_init__(self):
        space = self.group.space
        space.check_subset(self.k)
        space.check_subset(self.s)
        if not space.is_closed(self.k):
            raise NotClosed(f"target {self.k:#x} is not closed")
        if space.interior(self.s) == 0:
            raise EmptyInterior(f"template {self.s:#x} has empty interior")


@dataclass(frozen=True)
class CoveringSolution:
    count: int
    translates: tuple


def covering_number(p: CoveringProblem) -> CoveringSolution:
    """Minimal translate cover of p.k by copies of interior(p.s).

    The empty target needs zero translates by convention (the measure
    axioms force mu(empty) = 0 downstream).
    """
    if p.k == 0:
        return CoveringSolution(0, ())
    group = p.group.group
    s_int = p.group.space.interior(p.s)
    # candidate translate masks, deduplicated keeping the smallest element
    masks = {}
    for g in range(group.order):
        m = group.translate(g, s_int, "left")
        if m & p.k and m not in masks:
            masks[m] = g
    cands = sorted(masks.items(), key=lambda kv: kv[1])  # by element index
    union_all = 0
    for m, _ in cands:
        union_all |= m
    if p.k & ~union_all:
        raise InternalInconsistency("target not coverable by any translates")
    max_gain = max(bin(m & p.k).count("1") for m, _ in cands)

    target = p.k

    def dfs(start, covered, depth):
        """Lex-first cover of target using exactly depth more candidates
        with indices >= start; returns a list of elements or None."""
        if covered & target == target:
            return []
        if depth == 0:
            return None
        missing = bin(target & ~covered).count("1")
        if missing > depth * max_gain:
            return None
        for idx in range(start, len(cands)):
            m, g = cands[idx]
            if m & target & ~covered == 0:
                continue
            rest = dfs(idx + 1, covered | m, depth - 1)
            if rest is not None:
                return [g] + rest
        return None

    for depth in range(1, len(cands) + 1):
        sol = dfs(0, 0, depth)
        if sol is not None:
            if len(sol) != depth:
                raise InternalInconsistency("non-minimal depth reported")
            return CoveringSolution(depth, tuple(sol))
    raise InternalInconsistency("no cover found despite coverability")


def mu_u(g: FiniteTopGroup, k: int, k0: int, u: int) -> Fraction:
    """The ratio functional value (K:U) / (K0:U)."""
    space = g.space
    if not space.is_open(u) or not u >> g.group.identity & 1:
        raise NotOpen(f"{u:#x} is not an open neighborhood of the identity")
    if space.interior(k0) == 0:
        raise EmptyInterior(f"reference set {k0:#x} has empty interior")
    num = covering_number(CoveringProblem(g, k, u)).count
    den = covering_number(CoveringProblem(g, k0, u)).count
    if den == 0:
        raise InternalInconsistency("reference covering number vanished")
    return Fraction(num, den)


def existence_via_covering(g: FiniteTopGroup, k0: int) -> FiniteMeasure:
    """The existence construction, landed exactly on the finite group.

    The neighborhood filter of the identity has minimum N, so the net of
    ratio functionals stabilizes at mu_N; extending from closed compact
    sets to atoms (each atom is closed compact) gives the measure.
    """
    space = g.space
    space.check_subset(k0)
    if not space.is_closed(k0):
        raise NotClosed(f"reference set {k0:#x} is not closed")
    if space.interior(k0) == 0:
        raise EmptyInterior(f"reference set {k0:#x} has empty interior")
    n_mask = identity_closure(g)
    masses = tuple(mu_u(g, atom, k0, n_mask) for atom in g.atoms)
    return FiniteMeasure(g, masses)


def brute_force_covering_count(p: CoveringProblem) -> int:
    """Independent all-subsets oracle for the covering number."""
    from itertools import combinations

    if p.k == 0:
        return 0
    group = p.group.group
    s_int = p.group.space.interior(p.s)
    translate_masks = sorted(
        {group.translate(g, s_int, "left") for g in range(group.order)}
    )
    for size in range(1, len(translate_masks) + 1):
        for combo in combinations(translate_masks, size):
            acc = 0
            for m in combo:
                acc |= m
            if p.k & ~acc == 0:
                return size
    raise InternalInconsistency("no cover found")
