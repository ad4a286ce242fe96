"""Finite posets, bit-set morphism classes, and the lifting calculus.

Elements are integers ``0..size-1``.  The order relation is stored as one
up-set bit mask per element (bit ``y`` of ``up[x]`` set iff ``x <= y``),
so order queries are single word operations.  Boolean algebras use the
subset bit mask itself as the element index, which turns the order into
a mask comparison and meets/joins into ``&``/``|``.

A comparable pair ``(x, y)`` with ``x <= y`` is the poset's only kind of
morphism.  The full list of such pairs (``rels``) is materialized once,
in lexicographic ``(src, dst)`` order, and a ``MorphismClass`` is a flat
bit set over that list.  All class algebra, including the left/right
lifting closures ``proj``/``inj``, is word-parallel on those bit sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .errors import SizeLimitError, UnsupportedStructureError, ValidationError

MAX_ELEMENTS = 64
MAX_BOOLEAN_GROUND = 6


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """Immutable finite poset over integer elements.

    ``up`` maps each element to the bit mask of its upper set.  The
    relation is validated (reflexive, transitive, antisymmetric) at
    construction; the offending pair is named on failure.
    """

    def __init__(self, up: Sequence[int], boolean_ground: Optional[int] = None):
        size = len(up)
        if size > MAX_ELEMENTS:
            raise SizeLimitError(f"poset has {size} elements, cap is {MAX_ELEMENTS}")
        self.size = size
        self.up = tuple(up)
        self.boolean_ground = boolean_ground
        full = (1 << size) - 1
        for x, row in enumerate(self.up):
            if row & ~full:
                raise ValidationError(f"up-set of {x} references elements outside 0..{size - 1}")
            if not row >> x & 1:
                raise ValidationError(f"relation is not reflexive at element {x}")
        down = [0] * size
        for x in range(size):
            for y in bits(self.up[x]):
                down[y] |= 1 << x
        self.down = tuple(down)
        for x in range(size):
            for y in bits(self.up[x]):
                if self.up[y] & ~self.up[x]:
                    z = next(bits(self.up[y] & ~self.up[x]))
                    raise ValidationError(
                        f"relation is not transitive: {x}<={y}<={z} but not {x}<={z}")
                if y != x and self.up[y] >> x & 1:
                    raise ValidationError(
                        f"relation is not antisymmetric on pair ({x}, {y})")
        bot = [x for x in range(size) if self.up[x] == full]
        top = [x for x in range(size) if self.down[x] == full]
        self._bottom = bot[0] if bot else None
        self._top = top[0] if top else None

    # -- basic queries ------------------------------------------------

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    @property
    def bottom(self) -> Optional[int]:
        return self._bottom

    @property
    def top(self) -> Optional[int]:
        return self._top

    def elements(self) -> range:
        return range(self.size)

    def interval(self, x: int, y: int) -> list[int]:
        """Elements m with x <= m <= y, ascending."""
        return list(bits(self.up[x] & self.down[y]))

    def element_name(self, x: int) -> str:
        """Brace-set notation for Boolean algebras, plain index otherwise."""
        if self.boolean_ground is not None:
            return "{" + ",".join(str(i) for i in bits(x)) + "}"
        return str(x)

    # -- meets and joins ----------------------------------------------

    @cached_property
    def _meet_join(self):
        n = self.size
        meet = [[-1] * n for _ in range(n)]
        join = [[-1] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                below = self.down[x] & self.down[y]
                lower = [z for z in bits(below) if below & ~self.down[z] == 0]
                above = self.up[x] & self.up[y]
                upper = [z for z in bits(above) if above & ~self.up[z] == 0]
                if len(lower) != 1 or len(upper) != 1:
                    return None
                meet[x][y] = lower[0]
                join[x][y] = upper[0]
        return tuple(map(tuple, meet)), tuple(map(tuple, join))

    @property
    def has_meets_joins(self) -> bool:
        return self._meet_join is not None

    def meet(self, x: int, y: int) -> int:
        if self._meet_join is None:
            raise UnsupportedStructureError("poset has no meet table")
        return self._meet_join[0][x][y]

    def join(self, x: int, y: int) -> int:
        if self._meet_join is None:
            raise UnsupportedStructureError("poset has no join table")
        return self._meet_join[1][x][y]

    def complement(self, x: int) -> int:
        if self.boolean_ground is None:
            raise UnsupportedStructureError("complementation needs a Boolean algebra")
        return ((1 << self.boolean_ground) - 1) ^ x

    # -- the morphism list --------------------------------------------

    @cached_property
    def rels(self) -> tuple[tuple[int, int], ...]:
        """All comparable pairs, lexicographic by (src, dst)."""
        return tuple((x, y) for x in range(self.size) for y in bits(self.up[x]))

    @cached_property
    def rel_index(self) -> dict[tuple[int, int], int]:
        return {pair: i for i, pair in enumerate(self.rels)}

    @cached_property
    def identities_mask(self) -> int:
        m = 0
        for i, (x, y) in enumerate(self.rels):
            if x == y:
                m |= 1 << i
        return m

    @cached_property
    def all_rels_mask(self) -> int:
        return (1 << len(self.rels)) - 1

    @cached_property
    def chains(self) -> tuple[tuple[int, int, int], ...]:
        """Composable pairs as rel-index triples (xy, yz, xz)."""
        idx = self.rel_index
        out = []
        for xy, (x, y) in enumerate(self.rels):
            for z in bits(self.up[y]):
                out.append((xy, idx[y, z], idx[x, z]))
        return tuple(out)

    # -- lifting calculus ---------------------------------------------

    def lifting(self, i_src: int, i_dst: int, p_src: int, p_dst: int) -> bool:
        """Left lifting of (i_src<=i_dst) against (p_src<=p_dst).

        The only possible square needs i_src <= p_src and i_dst <= p_dst;
        its diagonal filler exists iff i_dst <= p_src.
        """
        if self.leq(i_src, p_src) and self.leq(i_dst, p_dst):
            return self.leq(i_dst, p_src)
        return True

    @cached_property
    def _left_lift_masks(self) -> tuple[int, ...]:
        """For rel q: bit mask of rels p such that q lifts left against p."""
        rels = self.rels
        out = []
        for qs, qd in rels:
            m = 0
            for i, (ps, pd) in enumerate(rels):
                if self.lifting(qs, qd, ps, pd):
                    m |= 1 << i
            out.append(m)
        return tuple(out)

    @cached_property
    def _right_lift_masks(self) -> tuple[int, ...]:
        """For rel p: bit mask of rels q such that q lifts left against p."""
        rels = self.rels
        out = [0] * len(rels)
        for q, row in enumerate(self._left_lift_masks):
            for p in bits(row):
                out[p] |= 1 << q
        return tuple(out)

    def proj_mask(self, mask: int) -> int:
        """Rels with the left lifting property against every member of mask."""
        lift = self._left_lift_masks
        out = 0
        for q in range(len(self.rels)):
            if mask & ~lift[q] == 0:
                out |= 1 << q
        return out

    def inj_mask(self, mask: int) -> int:
        """Rels with the right lifting property against every member of mask."""
        lift = self._right_lift_masks
        out = 0
        for p in range(len(self.rels)):
            if mask & ~lift[p] == 0:
                out |= 1 << p
        return out

    # -- dunder -------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FinitePoset) and self.up == other.up

    def __hash__(self) -> int:
        return hash(self.up)

    def __repr__(self) -> str:
        kind = f"boolean:{self.boolean_ground}" if self.boolean_ground is not None else "poset"
        return f"FinitePoset({kind}, size={self.size})"


def boolean_algebra(n: int) -> FinitePoset:
    """Power-set lattice on n generators with bit-mask elements."""
    if not 0 <= n <= MAX_BOOLEAN_GROUND:
        raise SizeLimitError(f"boolean algebra ground size {n} outside 0..{MAX_BOOLEAN_GROUND}")
    size = 1 << n
    up = []
    for x in range(size):
        row = 0
        for y in range(size):
            if x & ~y == 0:
                row |= 1 << y
        up.append(row)
    return FinitePoset(up, boolean_ground=n)


def skeletonize(relation: Sequence[Sequence[int]]) -> tuple[FinitePoset, tuple[int, ...]]:
    """Quotient a reflexive-transitive relation by mutual comparability.

    Returns the skeletal poset together with the map from raw indices to
    class-representative indices.  Rejects non-preorders, naming the
    first offending pair.
    """
    n = len(relation)
    rows = []
    for x, row in enumerate(relation):
        if len(row) != n:
            raise ValidationError(f"relation row {x} has length {len(row)}, expected {n}")
        m = 0
        for y, v in enumerate(row):
            if v:
                m |= 1 << y
        rows.append(m)
    for x in range(n):
        if not rows[x] >> x & 1:
            raise ValidationError(f"relation is not reflexive at element {x}")
        for y in bits(rows[x]):
            if rows[y] & ~rows[x]:
                z = next(bits(rows[y] & ~rows[x]))
                raise ValidationError(
                    f"relation is not transitive: {x}<={y}<={z} but not {x}<={z}")
    # mutual-comparability classes, represented by their smallest member
    rep = list(range(n))
    for x in range(n):
        for y in range(x):
            if rows[x] >> y & 1 and rows[y] >> x & 1:
                rep[x] = rep[y]
                break
    reps = sorted(set(rep))
    new_index = {r: i for i, r in enumerate(reps)}
    up = []
    for r in reps:
        m = 0
        for s in reps:
            if rows[r] >> s & 1:
                m |= 1 << new_index[s]
        up.append(m)
    mapping = tuple(new_index[rep[x]] for x in range(n))
    return FinitePoset(up), mapping


@dataclass(frozen=True)
class RelPair:
    """A single comparable pair x <= y of a fixed poset."""

    poset: FinitePoset
    src: int
    dst: int

    def __post_init__(self):
        if not self.poset.leq(self.src, self.dst):
            raise ValidationError(f"({self.src}, {self.dst}) is not a comparable pair")

    @property
    def is_identity(self) -> bool:
        return self.src == self.dst

    @property
    def index(self) -> int:
        return self.poset.rel_index[self.src, self.dst]


@dataclass(frozen=True)
class MorphismClass:
    """A set of comparable pairs, stored as a bit set over poset.rels."""

    poset: FinitePoset
    mask: int

    @classmethod
    def from_pairs(cls, poset: FinitePoset, pairs) -> "MorphismClass":
        mask = 0
        for p in pairs:
            src, dst = (p.src, p.dst) if isinstance(p, RelPair) else p
            mask |= 1 << poset.rel_index[src, dst]
        return cls(poset, mask)

    def members(self) -> tuple[RelPair, ...]:
        rels = self.poset.rels
        return tuple(RelPair(self.poset, *rels[i]) for i in bits(self.mask))

    def pairs(self) -> tuple[tuple[int, int], ...]:
        rels = self.poset.rels
        return tuple(rels[i] for i in bits(self.mask))

    def __contains__(self, p) -> bool:
        src, dst = (p.src, p.dst) if isinstance(p, RelPair) else p
        return bool(self.mask >> self.poset.rel_index[src, dst] & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __le__(self, other: "MorphismClass") -> bool:
        return self.mask & ~other.mask == 0

    def __and__(self, other: "MorphismClass") -> "MorphismClass":
        return MorphismClass(self.poset, self.mask & other.mask)

    def __or__(self, other: "MorphismClass") -> "MorphismClass":
        return MorphismClass(self.poset, self.mask | other.mask)


def _same_poset(a, b) -> FinitePoset:
    if a.poset is not b.poset and a.poset != b.poset:
        raise ValidationError("arguments live on different posets")
    return a.poset


def has_lifting(i: RelPair, p: RelPair) -> bool:
    """True iff i has the left lifting property against p."""
    poset = _same_poset(i, p)
    return poset.lifting(i.src, i.dst, p.src, p.dst)


def proj(m: MorphismClass) -> MorphismClass:
    """All pairs lifting left against every member of m."""
    return MorphismClass(m.poset, m.poset.proj_mask(m.mask))


def inj(m: MorphismClass) -> MorphismClass:
    """All pairs lifting right against every member of m."""
    return MorphismClass(m.poset, m.poset.inj_mask(m.mask))


@dataclass(frozen=True)
class ClassPredicates:
    retractile: bool
    sectile: bool
    decomposable: bool
    composition_closed: bool
    contains_identities: bool


def class_predicates(m: MorphismClass) -> ClassPredicates:
    """Closure behaviour of a morphism class under (de)composition."""
    poset, mask = m.poset, m.mask
    retractile = sectile = composition_closed = True
    for xy, yz, xz in poset.chains:
        whole = mask >> xz & 1
        first = mask >> xy & 1
        second = mask >> yz & 1
        if whole and not first:
            retractile = False
        if whole and not second:
            sectile = False
        if first and second and not whole:
            composition_closed = False
        if not (retractile or sectile or composition_closed):
            break
    return ClassPredicates(
        retractile=retractile,
        sectile=sectile,
        decomposable=retractile and sectile,
        composition_closed=composition_closed,
        contains_identities=poset.identities_mask & ~mask == 0,
    )
