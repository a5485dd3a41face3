"""Exact-rational measures on finite topological groups.

A Borel set is a union of atoms (the N-cosets), so a measure is a tuple of
nonnegative rational atom masses.  Haar verification checks every axiom
literally over the finite lattice: invariance over all Borel sets and all
group elements, outer regularity as an infimum over open supersets, inner
regularity as a supremum over closed compact subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InternalInconsistency,
    MeasureSpaceMismatch,
    NotHaar,
    NotMeasurable,
    TooLarge,
)
from .groups import FiniteTopGroup, QuotientData
from .topology import PointFunction, bit_indices

MAX_ATOMS_CHECK = 16


@dataclass(frozen=True)
class FiniteMeasure:
    group_ref: FiniteTopGroup
    atom_mass: tuple

    def __post_init__(self):
        masses = tuple(Fraction(m) for m in self.atom_mass)
        if len(masses) != len(self.group_ref.atoms):
            raise MeasureSpaceMismatch(
                f"{len(masses)} masses for {len(self.group_ref.atoms)} atoms"
            )
        if any(m < 0 for m in masses):
            raise ValueError("atom masses must be nonnegative")
        object.__setattr__(self, "atom_mass", masses)

    def total(self) -> Fraction:
        return sum(self.atom_mass, Fraction(0))

    def mass_of_atoms(self, atom_sel: int) -> Fraction:
        """Mass of the Borel set selected by an atom-index bitmask."""
        return sum(
            (self.atom_mass[i] for i in bit_indices(atom_sel)), Fraction(0)
        )

    def mass_of(self, point_mask: int) -> Fraction:
        """Mass of a Borel set given as a point mask (must be atom-aligned)."""
        sel = _atom_selection(self.group_ref, point_mask)
        return self.mass_of_atoms(sel)

    def scaled(self, a) -> "FiniteMeasure":
        a = Fraction(a)
        return FiniteMeasure(
            self.group_ref, tuple(m * a for m in self.atom_mass)
        )

    def is_zero(self) -> bool:
        return all(m == 0 for m in self.atom_mass)


def _atom_selection(g: FiniteTopGroup, point_mask: int) -> int:
    atoms = g.atoms
    sel = 0
    covered = 0
    for i, a in enumerate(atoms):
        if a & point_mask:
            if a & ~point_mask:
                raise NotMeasurable(
                    f"set {point_mask:#x} cuts atom {a:#x}"
                )
            sel |= 1 << i
            covered |= a
    if covered != point_mask:
        raise NotMeasurable(f"set {point_mask:#x} is not a union of atoms")
    return sel


@dataclass(frozen=True)
class HaarReport:
    side: str
    nonzero: bool
    left_invariant: bool
    right_invariant: bool
    locally_finite: bool
    outer_regular: bool
    inner_regular_on_opens: bool
    witnesses: tuple = field(default_factory=tuple)

    @property
    def invariant_for_side(self) -> bool:
        return self.left_invariant if self.side == "left" else self.right_invariant

    @property
    def is_haar(self) -> bool:
        return (
            self.nonzero
            and self.invariant_for_side
            and self.locally_finite
            and self.outer_regular
            and self.inner_regular_on_opens
        )


def _atom_perm(g: FiniteTopGroup, elem: int, side: str):
    """Atom index permutation induced by translation by elem."""
    atoms = g.atoms
    perm = []
    for a in atoms:
        rep = next(bit_indices(a))
        moved = (
            g.group.mul(elem, rep) if side == "left" else g.group.mul(rep, elem)
        )
        perm.append(g.atom_index_of(moved))
    return perm


def _apply_perm(perm, sel: int) -> int:
    out = 0
    for i in bit_indices(sel):
        out |= 1 << perm[i]
    return out


def _set_masses(mu: FiniteMeasure, k: int):
    """Masses of all 2^k atom selections, by dynamic programming."""
    masses = [Fraction(0)] * (1 << k)
    for sel in range(1, 1 << k):
        low = sel & -sel
        masses[sel] = masses[sel ^ low] + mu.atom_mass[low.bit_length() - 1]
    return masses


def _check_invariance(g, mu, masses, side, witnesses):
    k = len(g.atoms)
    ok = True
    for elem in range(g.group.order):
        perm = _atom_perm(g, elem, side)
        for sel in range(1 << k):
            if masses[_apply_perm(perm, sel)] != masses[sel]:
                ok = False
                witnesses.append((side, sel, elem))
                break
        if not ok:
            break
    return ok


def is_haar(g: FiniteTopGroup, mu: FiniteMeasure, side: str = "left") -> HaarReport:
    """Verify every Haar axiom exhaustively over the Borel lattice."""
    if mu.group_ref is not g and mu.group_ref != g:
        raise MeasureSpaceMismatch("measure lives on a different group")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    k = len(g.atoms)
    if k > MAX_ATOMS_CHECK:
        raise TooLarge(f"{k} atoms exceeds the exhaustive-check cap")
    masses = _set_masses(mu, k)
    witnesses = []

    nonzero = any(m > 0 for m in mu.atom_mass)
    # Every atom mass is a finite rational, so every closed compact set
    # (a union of atoms) has finite mass.
    locally_finite = True

    left_inv = _check_invariance(g, mu, masses, "left", witnesses)
    right_inv = _check_invariance(g, mu, masses, "right", witnesses)

    # Outer regularity: inf over open supersets.  Opens at atom level are
    # all selections (atoms are clopen); masses are monotone, so the scan
    # stops as soon as the infimum matches the set's own mass.
    outer = True
    full = (1 << k) - 1
    for sel in range(1 << k):
        target = masses[sel]
        best = None
        sup = sel
        while True:
            if best is None or masses[sup] < best:
                best = masses[sup]
            if best == target:
                break
            if sup == full:
                break
            sup = (sup + 1) | sel
        if best != target:
            outer = False
            witnesses.append(("outer", sel, None))
            break

    # Inner regularity on opens: sup over closed compact subsets.
    inner = True
    for sel in range(1 << k):
        target = masses[sel]
        best = None
        sub = sel
        while True:
            if best is None or masses[sub] > best:
                best = masses[sub]
            if best == target:
                break
            if sub == 0:
                break
            sub = (sub - 1) & sel
        if best != target:
            inner = False
            witnesses.append(("inner", sel, None))
            break

    return HaarReport(
        side=side,
        nonzero=nonzero,
        left_invariant=left_inv,
        right_invariant=right_inv,
        locally_finite=locally_finite,
        outer_regular=outer,
        inner_regular_on_opens=inner,
        witnesses=tuple(witnesses),
    )


def is_radon(g: FiniteTopGroup, mu: FiniteMeasure) -> bool:
    """The Haar axioms minus invariance and nonzeroness."""
    report = is_haar(g, mu)
    return (
        report.locally_finite
        and report.outer_regular
        and report.inner_regular_on_opens
    )


def canonical_haar(g: FiniteTopGroup) -> FiniteMeasure:
    """Mass 1 per atom: the pullback of counting measure on the quotient."""
    return FiniteMeasure(g, (Fraction(1),) * len(g.atoms))


def haar_solution_space(g: FiniteTopGroup):
    """Solve the left-invariance constraints on atom masses exactly.

    Translation by any element permutes atoms, forcing equal masses along
    each orbit; the solution cone is spanned by the orbit indicators.
    Returns (dimension, basis measures).
    """
    k = len(g.atoms)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for elem in range(g.group.order):
        perm = _atom_perm(g, elem, "left")
        for i, j in enumerate(perm):
            union(i, j)
    roots = sorted({find(i) for i in range(k)})
    basis = []
    for r in roots:
        masses = tuple(
            Fraction(1) if find(i) == r else Fraction(0) for i in range(k)
        )
        basis.append(FiniteMeasure(g, masses))
    return len(roots), basis


def invert_measure(g: FiniteTopGroup, mu: FiniteMeasure) -> FiniteMeasure:
    """mu'(E) = mu(E^-1); inversion permutes atoms since N^-1 = N."""
    if mu.group_ref != g:
        raise MeasureSpaceMismatch("measure lives on a different group")
    atoms = g.atoms
    masses = []
    for a in atoms:
        inv_a = g.group.inv_set(a)
        masses.append(mu.atom_mass[g.atoms.index(inv_a)])
    return FiniteMeasure(g, tuple(masses))


def pushforward(q: QuotientData, mu: FiniteMeasure) -> FiniteMeasure:
    """(pi_* mu)(F) = mu(pi^-1(F)), per quotient atom."""
    if mu.group_ref != q.base:
        raise MeasureSpaceMismatch("measure does not live on the base group")
    base_atoms = q.base.atoms
    qk = len(q.quotient.atoms)
    masses = [Fraction(0)] * qk
    for i, a in enumerate(base_atoms):
        rep = next(bit_indices(a))
        qpoint = q.proj[rep]
        qatom = q.quotient.atom_index_of(qpoint)
        masses[qatom] += mu.atom_mass[i]
    return FiniteMeasure(q.quotient, tuple(masses))


def pullback(q: QuotientData, nu: FiniteMeasure) -> FiniteMeasure:
    """(pi^* nu)(E) = nu(pi(E)), per base atom."""
    if nu.group_ref != q.quotient:
        raise MeasureSpaceMismatch("measure does not live on the quotient")
    masses = []
    for a in q.base.atoms:
        rep = next(bit_indices(a))
        qatom = q.quotient.atom_index_of(q.proj[rep])
        masses.append(nu.atom_mass[qatom])
    return FiniteMeasure(q.base, tuple(masses))


def integrate(g: FiniteTopGroup, f: PointFunction, mu: FiniteMeasure) -> Fraction:
    """Sum over atoms of f(atom) * mass(atom); f must be constant on atoms."""
    if mu.group_ref != g:
        raise MeasureSpaceMismatch("measure lives on a different group")
    if len(f.values) != g.group.order:
        raise MeasureSpaceMismatch("function defined on a different point set")
    acc = Fraction(0)
    for i, a in enumerate(g.atoms):
        vals = {f.values[x] for x in bit_indices(a)}
        if len(vals) != 1:
            raise NotMeasurable(f"function not constant on atom {a:#x}")
        acc += vals.pop() * mu.atom_mass[i]
    return acc


def fubini_check(
    g: FiniteTopGroup,
    h: FiniteTopGroup,
    f: PointFunction,
    mu: FiniteMeasure,
    lam: FiniteMeasure,
):
    """Both iterated integrals of f over g x h, computed independently.

    The point (x, y) of the product is indexed x * |H| + y.  Continuity on
    the product topology means constancy on product atoms A x B.
    """
    if mu.group_ref != g or lam.group_ref != h:
        raise MeasureSpaceMismatch("measures do not match the factor groups")
    oh = h.group.order
    if len(f.values) != g.group.order * oh:
        raise MeasureSpaceMismatch("function not defined on the product points")
    for a in g.atoms:
        for b in h.atoms:
            vals = {
                f.values[x * oh + y]
                for x in bit_indices(a)
                for y in bit_indices(b)
            }
            if len(vals) != 1:
                raise NotMeasurable(
                    f"function not constant on product atom {a:#x} x {b:#x}"
                )
    for tg, m in ((g, mu), (h, lam)):
        if not is_radon(tg, m):
            raise InternalInconsistency("factor measure is not Radon")
    # lhs: integrate over lam in y first, then mu in x
    lhs = Fraction(0)
    for i, a in enumerate(g.atoms):
        x = next(bit_indices(a))
        inner = Fraction(0)
        for j, b in enumerate(h.atoms):
            y = next(bit_indices(b))
            inner += f.values[x * oh + y] * lam.atom_mass[j]
        lhs += inner * mu.atom_mass[i]
    # rhs: integrate over mu in x first, then lam in y
    rhs = Fraction(0)
    for j, b in enumerate(h.atoms):
        y = next(bit_indices(b))
        inner = Fraction(0)
        for i, a in enumerate(g.atoms):
            x = next(bit_indices(a))
            inner += f.values[x * oh + y] * mu.atom_mass[i]
        rhs += inner * lam.atom_mass[j]
    return lhs, rhs


def riesz_check(g: FiniteTopGroup, mu1: FiniteMeasure, mu2: FiniteMeasure) -> bool:
    """True iff the two Radon measures integrate every atom indicator alike."""
    for m in (mu1, mu2):
        if m.group_ref != g:
            raise MeasureSpaceMismatch("measure lives on a different group")
    n = g.group.order
    for a in g.atoms:
        f = PointFunction.indicator(n, a)
        if integrate(g, f, mu1) != integrate(g, f, mu2):
            return False
    return True


@dataclass(frozen=True)
class PositivityReport:
    closed_compact_positive: bool
    opens_positive: bool
    integrals_positive: bool

    @property
    def all_hold(self) -> bool:
        return (
            self.closed_compact_positive
            and self.opens_positive
            and self.integrals_positive
        )


def positivity_report(g: FiniteTopGroup, mu: FiniteMeasure) -> PositivityReport:
    """Positivity facts for a Haar measure: a heavy closed compact set,
    positive mass on nonempty opens, positive atom-indicator integrals."""
    report = is_haar(g, mu)
    if not report.is_haar:
        raise NotHaar("positivity requires a Haar measure")
    closed_positive = any(
        mu.mass_of(c) > 0 for c in g.space.closed_sets() if c != 0
    )
    opens_positive = all(mu.mass_of(u) > 0 for u in g.space.opens if u != 0)
    integrals_positive = all(
        integrate(g, PointFunction.indicator(g.group.order, a), mu) > 0
        for a in g.atoms
    )
    return PositivityReport(
        closed_compact_positive=closed_positive,
        opens_positive=opens_positive,
        integrals_positive=integrals_positive,
    )
