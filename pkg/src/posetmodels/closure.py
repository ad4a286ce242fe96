"""Moore families, closure/interior operators, and their classification.

A Moore family on an n-element ground set is an intersection-closed
collection of subsets containing the ground set itself.  Families are
stored as a bit mask over the 2^n subset indices of ``boolean_algebra(n)``,
so membership, intersection closure and duality are word operations.
Moore families are exactly the fixed-point sets of closure operators,
and the special families (topologies, matroid flat lattices, geometries)
are detected by direct predicate sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import SizeLimitError, UnsupportedStructureError, ValidationError
from .poset import FinitePoset, MorphismClass, bits, boolean_algebra

MAX_MOORE_GROUND = 5

_BOOLEAN_CACHE: dict[int, FinitePoset] = {}


def _boolean(n: int) -> FinitePoset:
    if n not in _BOOLEAN_CACHE:
        _BOOLEAN_CACHE[n] = boolean_algebra(n)
    return _BOOLEAN_CACHE[n]


@dataclass(frozen=True)
class ClosureOperator:
    """Extensive, monotone, idempotent endofunction on a poset."""

    poset: FinitePoset
    table: tuple[int, ...]

    def __post_init__(self):
        _check_operator(self.poset, self.table, extensive=True)

    def __call__(self, x: int) -> int:
        return self.table[x]

    @property
    def fixed_points(self) -> int:
        return _fixed_mask(self.table)


@dataclass(frozen=True)
class InteriorOperator:
    """Intensive, monotone, idempotent endofunction on a poset."""

    poset: FinitePoset
    table: tuple[int, ...]

    def __post_init__(self):
        _check_operator(self.poset, self.table, extensive=False)

    def __call__(self, x: int) -> int:
        return self.table[x]

    @property
    def fixed_points(self) -> int:
        return _fixed_mask(self.table)


def _check_operator(poset: FinitePoset, table: Sequence[int], extensive: bool) -> None:
    if len(table) != poset.size:
        raise ValidationError(f"operator table has {len(table)} entries, poset has {poset.size}")
    word = "extensive" if extensive else "intensive"
    for x, fx in enumerate(table):
        ok = poset.leq(x, fx) if extensive else poset.leq(fx, x)
        if not ok:
            raise ValidationError(f"operator is not {word} at element {x}")
        if table[fx] != fx:
            raise ValidationError(f"operator is not idempotent at element {x}")
    for x in range(poset.size):
        for y in bits(poset.up[x]):
            if not poset.leq(table[x], table[y]):
                raise ValidationError(f"operator is not monotone on pair ({x}, {y})")


def _fixed_mask(table: Sequence[int]) -> int:
    m = 0
    for x, fx in enumerate(table):
        if x == fx:
            m |= 1 << x
    return m


@dataclass(frozen=True)
class MooreFamily:
    """Intersection-closed subset collection containing the ground set.

    ``closed`` has bit s set iff subset-mask s belongs to the family.
    """

    ground_size: int
    closed: int

    def __post_init__(self):
        n = self.ground_size
        full = (1 << n) - 1
        sets = self.sets
        if full not in sets:
            raise ValidationError("family does not contain the ground set")
        have = set(sets)
        for i, s in enumerate(sets):
            for t in sets[i + 1:]:
                if s & t not in have:
                    raise ValidationError(
                        f"family is not intersection-closed on ({s}, {t})")

    @property
    def sets(self) -> tuple[int, ...]:
        return tuple(bits(self.closed))

    def __contains__(self, subset: int) -> bool:
        return bool(self.closed >> subset & 1)

    def __len__(self) -> int:
        return self.closed.bit_count()


def enumerate_moore_families(n: int) -> list[MooreFamily]:
    """All Moore families on an n-set, canonically ordered.

    Depth-first search over subsets in descending mask order.  At each
    position the pending set of forced elements (intersections of the
    already-chosen members that are still missing) is tracked; a forced
    position must be included, any other position branches.  Every leaf
    is intersection-closed and every family is reached exactly once.
    """
    if not 0 <= n <= MAX_MOORE_GROUND:
        raise SizeLimitError(f"moore ground size {n} outside 0..{MAX_MOORE_GROUND}")
    full = (1 << n) - 1
    results: list[int] = []

    def descend(pos: int, chosen: tuple[int, ...], family_mask: int, forced: int) -> None:
        if pos < 0:
            results.append(family_mask)
            return
        must = bool(forced >> pos & 1)
        new_forced = forced & ~(1 << pos)
        # include pos
        extra = 0
        for c in chosen:
            meet = c & pos
            if not family_mask >> meet & 1 and meet != pos:
                extra |= 1 << meet
        descend(pos - 1, chosen + (pos,), family_mask | 1 << pos,
                new_forced | extra)
        if not must:
            descend(pos - 1, chosen, family_mask, new_forced)

    descend(full - 1, (full,), 1 << full, 0)
    results.sort()
    return [MooreFamily(n, mask) for mask in results]


def closure_from_family(family: MooreFamily) -> ClosureOperator:
    """Send each subset to the intersection of its closed supersets."""
    n = family.ground_size
    full = (1 << n) - 1
    sets = family.sets
    table = []
    for y in range(full + 1):
        acc = full
        for s in sets:
            if y & ~s == 0:
                acc &= s
        table.append(acc)
    return ClosureOperator(_boolean(n), tuple(table))


def family_from_closure(op: ClosureOperator) -> MooreFamily:
    """Fixed points of a closure operator on a Boolean algebra."""
    n = op.poset.boolean_ground
    if n is None:
        raise UnsupportedStructureError("fixed-point families need a Boolean algebra")
    return MooreFamily(n, op.fixed_points)


def dual_interior(family: MooreFamily) -> InteriorOperator:
    """Interior operator u -> complement(Cl(complement(u)))."""
    n = family.ground_size
    full = (1 << n) - 1
    cl = closure_from_family(family).table
    table = tuple(full ^ cl[full ^ u] for u in range(full + 1))
    return InteriorOperator(_boolean(n), table)


def interior_from_closure(op: ClosureOperator) -> InteriorOperator:
    """Complement-conjugate of a closure operator on a Boolean algebra."""
    n = op.poset.boolean_ground
    if n is None:
        raise UnsupportedStructureError("complement conjugation needs a Boolean algebra")
    full = (1 << n) - 1
    table = tuple(full ^ op.table[full ^ u] for u in range(full + 1))
    return InteriorOperator(op.poset, table)


def closure_from_interior(op: InteriorOperator) -> ClosureOperator:
    """Inverse of :func:`interior_from_closure`."""
    n = op.poset.boolean_ground
    if n is None:
        raise UnsupportedStructureError("complement conjugation needs a Boolean algebra")
    full = (1 << n) - 1
    table = tuple(full ^ op.table[full ^ u] for u in range(full + 1))
    return ClosureOperator(op.poset, table)


def is_topology(family: MooreFamily) -> bool:
    """Closed-set presentation: contains the empty set, union-closed."""
    if 0 not in family:
        return False
    sets = family.sets
    for i, s in enumerate(sets):
        for t in sets[i + 1:]:
            if s | t not in family:
                return False
    return True


def is_matroid(family: MooreFamily) -> bool:
    """Exchange property of the family's closure operator.

    For all x not in Cl(A) with x in Cl(A + y), also y in Cl(A + x).
    The finiteness of the ground set makes the finitary property
    automatic.
    """
    n = family.ground_size
    cl = closure_from_family(family).table
    for a in range(1 << n):
        ca = cl[a]
        for x in range(n):
            if ca >> x & 1:
                continue
            for y in range(n):
                if y == x:
                    continue
                if cl[a | 1 << y] >> x & 1 and not cl[a | 1 << x] >> y & 1:
                    return False
    return True


def is_geometry(family: MooreFamily) -> bool:
    """Simple matroid: empty set and all singletons are closed."""
    n = family.ground_size
    cl = closure_from_family(family).table
    if cl[0] != 0:
        return False
    for x in range(n):
        if cl[1 << x] != 1 << x:
            return False
    return is_matroid(family)


def inverted_class(op: Union[ClosureOperator, InteriorOperator]) -> MorphismClass:
    """Comparable pairs the operator collapses to equality."""
    poset, table = op.poset, op.table
    mask = 0
    for i, (x, y) in enumerate(poset.rels):
        if table[x] == table[y]:
            mask |= 1 << i
    return MorphismClass(poset, mask)


def identity_closure(poset: FinitePoset) -> ClosureOperator:
    return ClosureOperator(poset, tuple(range(poset.size)))


def identity_interior(poset: FinitePoset) -> InteriorOperator:
    return InteriorOperator(poset, tuple(range(poset.size)))
