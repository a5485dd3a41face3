"""Finite groups as Cayley tables, and finite topological groups.

A compatible topology on a finite group turns out to be exactly a coset
topology of a normal subgroup; the library never assumes this, it is
verified by the continuity checks at construction and by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InternalInconsistency,
    NotContinuousInversion,
    NotContinuousMultiplication,
    TooLarge,
)
from .topology import FiniteSpace, bit_indices, mask_of

MAX_ORDER = 64

# Materializing a coset topology needs 2^(#cosets) open sets; cap it.
MAX_ATOMS_EXPLICIT = 16


class FiniteGroup:
    """A group on elements 0..order-1 given by its Cayley table."""

    def __init__(self, table, name: str = "group"):
        order = len(table)
        if not 1 <= order <= MAX_ORDER:
            raise TooLarge(f"order {order} outside 1..{MAX_ORDER}")
        table = tuple(tuple(row) for row in table)
        for row in table:
            if len(row) != order or any(not 0 <= v < order for v in row):
                raise ValueError("Cayley table is not square over 0..order-1")
        for i in range(order):
            if len({table[i][j] for j in range(order)}) != order:
                raise ValueError(f"row {i} is not a permutation")
            if len({table[j][i] for j in range(order)}) != order:
                raise ValueError(f"column {i} is not a permutation")
        identity = None
        for e in range(order):
            if all(table[e][x] == x and table[x][e] == x for x in range(order)):
                identity = e
                break
        if identity is None:
            raise ValueError("no identity element")
        inverse = [None] * order
        for x in range(order):
            for y in range(order):
                if table[x][y] == identity and table[y][x] == identity:
                    inverse[x] = y
                    break
            if inverse[x] is None:
                raise ValueError(f"element {x} has no inverse")
        for a in range(order):
            for b in range(order):
                for c in range(order):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise ValueError(f"associativity fails at {(a, b, c)}")

        self.order = order
        self.table = table
        self.identity = identity
        self.inverse = tuple(inverse)
        self.name = name

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def mul_sets(self, a_mask: int, b_mask: int) -> int:
        acc = 0
        for a in bit_indices(a_mask):
            row = self.table[a]
            for b in bit_indices(b_mask):
                acc |= 1 << row[b]
        return acc

    def inv_set(self, mask: int) -> int:
        return mask_of(self.inverse[x] for x in bit_indices(mask))

    def translate(self, g: int, mask: int, side: str = "left") -> int:
        if side == "left":
            return mask_of(self.table[g][x] for x in bit_indices(mask))
        return mask_of(self.table[x][g] for x in bit_indices(mask))

    # -- subgroup machinery ------------------------------------------------

    def generated_subgroup(self, gens) -> int:
        """Mask of the subgroup generated by the given elements."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (self.table[x][g], self.table[x][self.inverse[g]]):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return mask_of(seen)

    def subgroups(self):
        """All subgroups, as masks, found by closing the join lattice."""
        found = {self.generated_subgroup([])}
        frontier = list(found)
        while frontier:
            h = frontier.pop()
            members = list(bit_indices(h))
            for g in range(self.order):
                if h >> g & 1:
                    continue
                j = self.generated_subgroup(members + [g])
                if j not in found:
                    found.add(j)
                    frontier.append(j)
        return sorted(found)

    def is_subgroup(self, mask: int) -> bool:
        if not mask >> self.identity & 1:
            return False
        members = list(bit_indices(mask))
        return all(
            mask >> self.table[a][b] & 1 for a in members for b in members
        ) and all(mask >> self.inverse[a] & 1 for a in members)

    def is_normal(self, mask: int) -> bool:
        return all(
            mask >> self.table[self.table[g][h]][self.inverse[g]] & 1
            for g in range(self.order)
            for h in bit_indices(mask)
        )

    def normal_subgroups(self):
        return [h for h in self.subgroups() if self.is_normal(h)]

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)


# -- named constructors ------------------------------------------------------


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="trivial")


def cyclic(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Order 2n; index k*n + i encodes s^k r^i with s r s = r^-1."""
    if n < 1:
        raise ValueError("dihedral requires n >= 1")

    def mul(a, b):
        k1, i1 = divmod(a, n)
        k2, i2 = divmod(b, n)
        k = (k1 + k2) % 2
        i = (i1 * (-1) ** k2 + i2) % n
        return k * n + i

    order = 2 * n
    table = [[mul(a, b) for b in range(order)] for a in range(order)]
    return FiniteGroup(table, name=f"D{n}")


def symmetric3() -> FiniteGroup:
    """S3 on permutations of (0,1,2), listed lexicographically."""
    from itertools import permutations

    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p . q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(3))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return FiniteGroup(table, name="S3")


def quaternion8() -> FiniteGroup:
    """Q8 on 1, -1, i, -i, j, -j, k, -k in that order."""
    units = ["1", "i", "j", "k"]
    # unit multiplication: (sign, unit)
    rules = {
        ("1", "1"): (1, "1"),
        ("1", "i"): (1, "i"),
        ("1", "j"): (1, "j"),
        ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"),
        ("j", "1"): (1, "j"),
        ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"),
        ("j", "j"): (-1, "1"),
        ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"),
        ("j", "k"): (1, "i"),
        ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"),
        ("k", "j"): (-1, "i"),
        ("i", "k"): (-1, "j"),
    }

    def decode(x):
        return (1 if x % 2 == 0 else -1), units[x // 2]

    def encode(sign, unit):
        return units.index(unit) * 2 + (0 if sign == 1 else 1)

    def mul(a, b):
        sa, ua = decode(a)
        sb, ub = decode(b)
        sr, ur = rules[(ua, ub)]
        return encode(sa * sb * sr, ur)

    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    return FiniteGroup(table, name="Q8")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    order = g.order * h.order
    if order > MAX_ORDER:
        raise TooLarge(f"combined order {order} exceeds {MAX_ORDER}")

    def mul(a, b):
        a1, a2 = divmod(a, h.order)
        b1, b2 = divmod(b, h.order)
        return g.mul(a1, b1) * h.order + h.mul(a2, b2)

    table = [[mul(a, b) for b in range(order)] for a in range(order)]
    return FiniteGroup(table, name=f"{g.name}x{h.name}")


# -- topological groups ------------------------------------------------------


class FiniteTopGroup:
    """A finite group together with a compatible topology on its elements.

    Continuity of multiplication reduces to U_a * U_b <= U_ab on minimal
    open neighborhoods (any open around a contains U_a), and similarly
    (U_a)^-1 <= U_{a^-1} for inversion; both are checked exhaustively.
    """

    def __init__(self, group: FiniteGroup, space: FiniteSpace):
        if group.order != space.n:
            raise ValueError("group and space must share the index set")
        mo = space.min_open
        memo = {}
        for a in range(group.order):
            for b in range(group.order):
                key = (mo[a], mo[b])
                prod = memo.get(key)
                if prod is None:
                    prod = group.mul_sets(mo[a], mo[b])
                    memo[key] = prod
                target = mo[group.mul(a, b)]
                if prod & ~target:
                    raise NotContinuousMultiplication(
                        f"witness: pair ({a}, {b}), open {target:#x}"
                    )
        for a in range(group.order):
            if group.inv_set(mo[a]) & ~mo[group.inv(a)]:
                raise NotContinuousInversion(
                    f"witness: point {a}, open {mo[group.inv(a)]:#x}"
                )
        self.group = group
        self.space = space
        self._atoms = None

    @property
    def identity_closure_mask(self) -> int:
        return self.space.closure(1 << self.group.identity)

    @property
    def atoms(self):
        """The N-cosets, identity coset first then by smallest member."""
        if self._atoms is None:
            n_mask = identity_closure(self)
            cosets = sorted(
                {
                    self.group.translate(x, n_mask, "left")
                    for x in range(self.group.order)
                },
                key=lambda c: min(bit_indices(c)),
            )
            ident = self.group.translate(self.group.identity, n_mask, "left")
            cosets.remove(ident)
            self._atoms = tuple([ident] + cosets)
        return self._atoms

    def atom_index_of(self, point: int) -> int:
        for i, a in enumerate(self.atoms):
            if a >> point & 1:
                return i
        raise InternalInconsistency("atoms do not partition the points")

    def __repr__(self):
        return (
            f"FiniteTopGroup({self.group.name}, "
            f"N={sorted(bit_indices(identity_closure(self)))})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, FiniteTopGroup)
            and self.group == other.group
            and self.space == other.space
        )

    def __hash__(self):
        return hash((self.group, self.space))


def validate_top_group(group: FiniteGroup, space: FiniteSpace) -> FiniteTopGroup:
    """Constructor enforcing continuity of multiplication and inversion."""
    return FiniteTopGroup(group, space)


def identity_closure(g: FiniteTopGroup) -> int:
    """N = closure({e}); asserts it is a normal subgroup with xN = cl({x})."""
    n_mask = g.space.closure(1 << g.group.identity)
    if not g.group.is_subgroup(n_mask):
        raise InternalInconsistency("closure of identity is not a subgroup")
    if not g.group.is_normal(n_mask):
        raise InternalInconsistency("closure of identity is not normal")
    for x in range(g.group.order):
        if g.group.translate(x, n_mask, side="left") != g.space.closure(1 << x):
            raise InternalInconsistency(f"xN != closure(x) at x={x}")
    return n_mask


def coset_topology(group: FiniteGroup, n_mask: int) -> FiniteSpace:
    """The topology whose opens are all unions of cosets of a normal subgroup."""
    if not group.is_subgroup(n_mask) or not group.is_normal(n_mask):
        raise ValueError("mask is not a normal subgroup")
    cosets = sorted({group.translate(x, n_mask, "left") for x in range(group.order)})
    k = len(cosets)
    if k > MAX_ATOMS_EXPLICIT:
        raise TooLarge(
            f"{k} cosets would need 2^{k} explicit opens "
            f"(cap {MAX_ATOMS_EXPLICIT})"
        )
    opens = []
    for sel in range(1 << k):
        acc = 0
        for i in bit_indices(sel):
            acc |= cosets[i]
        opens.append(acc)
    return FiniteSpace(group.order, opens)


def group_topologies(group: FiniteGroup):
    """All compatible topologies on the group, one per normal subgroup."""
    if group.order > MAX_ORDER:
        raise TooLarge(f"order {group.order} exceeds {MAX_ORDER}")
    out = []
    for n_mask in group.normal_subgroups():
        space = coset_topology(group, n_mask)
        out.append(validate_top_group(group, space))
    return out


# -- quotient and Borel atoms ------------------------------------------------


@dataclass(frozen=True)
class QuotientData:
    base: FiniteTopGroup
    quotient: FiniteTopGroup
    proj: tuple  # base point -> quotient point


@dataclass(frozen=True)
class BorelAtoms:
    atoms: tuple  # masks, canonical order


def quotient(g: FiniteTopGroup) -> QuotientData:
    """The quotient by the identity closure, with its (discrete) topology.

    All the saturation facts the construction relies on are verified at
    build time: surjective homomorphism, open and closed projection,
    Hausdorff quotient, image descriptions of topology and Borel sets,
    and compact lifting via preimages.
    """
    group = g.group
    atoms = g.atoms
    k = len(atoms)
    reps = [min(bit_indices(a)) for a in atoms]
    proj = [None] * group.order
    for i, a in enumerate(atoms):
        for x in bit_indices(a):
            proj[x] = i
    qtable = [
        [proj[group.mul(reps[i], reps[j])] for j in range(k)] for i in range(k)
    ]
    qspace = FiniteSpace(k, range(1 << k))  # discrete
    qgroup = FiniteGroup(qtable, name=f"{group.name}/N")
    qtg = validate_top_group(qgroup, qspace)

    # homomorphism + well-definedness
    for a in range(group.order):
        for b in range(group.order):
            if proj[group.mul(a, b)] != qgroup.mul(proj[a], proj[b]):
                raise InternalInconsistency("projection is not a homomorphism")
    if set(proj) != set(range(k)):
        raise InternalInconsistency("projection is not surjective")

    def image(mask):
        return mask_of(proj[x] for x in bit_indices(mask))

    def preimage(qmask):
        acc = 0
        for i in bit_indices(qmask):
            acc |= atoms[i]
        return acc

    # statements: projection open and closed; quotient Hausdorff
    for u in g.space.opens:
        if not qspace.is_open(image(u)):
            raise InternalInconsistency("projection is not open")
        if not qspace.is_closed(image(g.space.full ^ u)):
            raise InternalInconsistency("projection is not closed")
    if not qspace.separation_flags().hausdorff:
        raise InternalInconsistency("quotient is not Hausdorff")
    # topology and Borel sets of the quotient are exactly images
    if {image(u) for u in g.space.opens} != set(qspace.opens):
        raise InternalInconsistency("quotient topology is not the image family")
    # compact lifting: every subset C of the quotient lifts to the closed
    # compact preimage
    check_all = k <= 12
    candidates = range(1 << k) if check_all else [1 << i for i in range(k)] + [
        (1 << k) - 1
    ]
    for c in candidates:
        lift = preimage(c)
        if image(lift) != c or not g.space.is_closed(lift):
            raise InternalInconsistency("compact lifting failed")
    return QuotientData(base=g, quotient=qtg, proj=tuple(proj))


def borel_atoms(g: FiniteTopGroup) -> BorelAtoms:
    """The atom partition, with the saturation statements verified.

    Saturation of opens and Borel sets, disjointness preservation and the
    image inclusion/equality cancellations are checked exhaustively over
    atom-generated sets when the atom count is small; past that bound the
    checks fall back to the per-atom facts (injectivity of the projection
    on atoms and preimage round trips) that imply them.
    """
    space = g.space
    atoms = g.atoms
    k = len(atoms)
    # partition + clopen atoms
    acc = 0
    for a in atoms:
        if acc & a:
            raise InternalInconsistency("atoms overlap")
        acc |= a
        if not (space.is_open(a) and space.is_closed(a)):
            raise InternalInconsistency("atom is not clopen")
    if acc != space.full:
        raise InternalInconsistency("atoms do not cover the points")
    # saturation: x in E implies closure(x) <= E, for opens (and hence for
    # every union of atoms)
    for u in space.opens:
        for x in bit_indices(u):
            if space.closure(1 << x) & ~u:
                raise InternalInconsistency("open set is not saturated")

    def image(mask):
        return mask_of(g.atom_index_of(x) for x in bit_indices(mask))

    def preimage(qmask):
        out = 0
        for i in bit_indices(qmask):
            out |= atoms[i]
        return out

    if k <= 8:
        sets = []
        for sel in range(1 << k):
            m = 0
            for i in bit_indices(sel):
                m |= atoms[i]
            sets.append(m)
        for e1 in sets:
            if preimage(image(e1)) != e1:
                raise InternalInconsistency("preimage round trip failed")
            for e2 in sets:
                i1, i2 = image(e1), image(e2)
                if e1 & e2 == 0 and i1 & i2:
                    raise InternalInconsistency("disjointness not preserved")
                if i1 & ~i2 == 0 and e1 & ~e2:
                    raise InternalInconsistency("image inclusion cancellation")
                if i1 == i2 and e1 != e2:
                    raise InternalInconsistency("image equality cancellation")
    else:
        images = [image(a) for a in atoms]
        if len(set(images)) != k:
            raise InternalInconsistency("projection not injective on atoms")
        for a in atoms:
            if preimage(image(a)) != a:
                raise InternalInconsistency("atom preimage round trip failed")
    return BorelAtoms(atoms=atoms)


def product_group(g: FiniteTopGroup, h: FiniteTopGroup) -> FiniteTopGroup:
    """Direct product with the product topology (coset topology of N_g x N_h)."""
    pg = direct_product(g.group, h.group)
    ng = identity_closure(g)
    nh = identity_closure(h)
    n_mask = 0
    for a in bit_indices(ng):
        for b in bit_indices(nh):
            n_mask |= 1 << (a * h.group.order + b)
    space = coset_topology(pg, n_mask)
    return validate_top_group(pg, space)
