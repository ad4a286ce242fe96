"""Monad-comonad pairs: compatibility, orthogonality, and the monad
bijection with retractile factorization systems.

A replacement pair is a closure operator F (fibrant-replacement
candidate) and an interior operator C (cofibrant-replacement candidate)
on one poset.  Compatibility is the commuting-plus-mixed-lifting
condition; orthogonality adds lifting of F-inverted maps against
C-inverted maps, which coincides with strong compatibility.  The n=4
census sweeps all 2480 x 2480 (Moore family, dualized Moore family)
combinations, so that check is vectorized with numpy; the scalar
predicates remain the reference implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .closure import (
    ClosureOperator,
    InteriorOperator,
    MooreFamily,
    closure_from_family,
    dual_interior,
    enumerate_moore_families,
    inverted_class,
    is_topology,
)
from .errors import (
    InternalConsistencyError,
    PreconditionError,
    SizeLimitError,
    UnsupportedStructureError,
    ValidationError,
)
from .poset import FinitePoset, MorphismClass, bits, class_predicates

MAX_PAIR_GROUND = 4


@dataclass(frozen=True)
class ReplacementPair:
    """A closure operator and an interior operator on one poset."""

    F: ClosureOperator
    C: InteriorOperator

    def __post_init__(self):
        if self.F.poset != self.C.poset:
            raise ValidationError("operators live on different posets")

    @property
    def poset(self) -> FinitePoset:
        return self.F.poset


def is_compatible(pair: ReplacementPair) -> bool:
    """Commuting plus the mixed lifting condition.

    F and C commute pointwise, and x <= C(y) with F(x) <= y forces
    F(x) <= C(y).
    """
    poset = pair.poset
    f, c = pair.F.table, pair.C.table
    for x in range(poset.size):
        if f[c[x]] != c[f[x]]:
            return False
    for x in range(poset.size):
        fx = f[x]
        for y in range(poset.size):
            cy = c[y]
            if poset.leq(x, cy) and poset.leq(fx, y) and not poset.leq(fx, cy):
                return False
    return True


def is_strongly_compatible(pair: ReplacementPair) -> bool:
    """Compatible, and only identities are inverted by both operators."""
    if not is_compatible(pair):
        return False
    f, c = pair.F.table, pair.C.table
    for x, y in pair.poset.rels:
        if x != y and f[x] == f[y] and c[x] == c[y]:
            return False
    return True


def is_orthogonal(pair: ReplacementPair) -> bool:
    """Compatible, and every F-inverted map lifts against every C-inverted map."""
    if not is_compatible(pair):
        return False
    poset = pair.poset
    i_f = inverted_class(pair.F).mask
    right = poset._right_lift_masks
    for g in bits(inverted_class(pair.C).mask):
        if i_f & ~right[g]:
            return False
    return True


def identity_pair(poset: FinitePoset) -> ReplacementPair:
    ident = tuple(range(poset.size))
    return ReplacementPair(ClosureOperator(poset, ident), InteriorOperator(poset, ident))


def compatibility_witness(pair: ReplacementPair) -> Optional[tuple[int, int]]:
    """First element pair violating compatibility, None when compatible."""
    poset = pair.poset
    f, c = pair.F.table, pair.C.table
    for x in range(poset.size):
        if f[c[x]] != c[f[x]]:
            return (x, x)
    for x in range(poset.size):
        fx = f[x]
        for y in range(poset.size):
            cy = c[y]
            if poset.leq(x, cy) and poset.leq(fx, y) and not poset.leq(fx, cy):
                return (x, y)
    return None


def orthogonality_witness(pair: ReplacementPair) -> Optional[tuple[int, int]]:
    """Witness against orthogonality: a compatibility witness, or an
    unsolvable lifting problem between inverted maps (reported by the
    sources of the two maps)."""
    bad = compatibility_witness(pair)
    if bad is not None:
        return bad
    poset = pair.poset
    rels = poset.rels
    i_f = inverted_class(pair.F).mask
    right = poset._right_lift_masks
    for g in bits(inverted_class(pair.C).mask):
        missing = i_f & ~right[g]
        if missing:
            q = next(bits(missing))
            return (rels[q][0], rels[g][0])
    return None


# -- the powerset census --------------------------------------------------

def powerset_strong_conditions(cl: ClosureOperator, interior: InteriorOperator) -> bool:
    """Closure/interior form of strong compatibility on a Boolean algebra.

    (i) Cl and Int commute, (ii) u inside Int(v) with Cl(u) inside v
    forces Cl(u) inside Int(v), (iii) nested sets with equal closure and
    equal interior are equal.
    """
    poset = cl.poset
    if poset.boolean_ground is None:
        raise UnsupportedStructureError("powerset conditions need a Boolean algebra")
    if interior.poset != poset:
        raise ValidationError("operators live on different posets")
    f, c = cl.table, interior.table
    size = poset.size
    for u in range(size):
        if f[c[u]] != c[f[u]]:
            return False
    for u in range(size):
        fu = f[u]
        for v in range(size):
            cv = c[v]
            if u & ~cv == 0 and fu & ~v == 0 and fu & ~cv != 0:
                return False
    for u in range(size):
        for v in range(size):
            if u & ~v == 0 and u != v and f[u] == f[v] and c[u] == c[v]:
                return False
    return True


def _family_tables(n: int, topologies_only: bool):
    """Closure and dual-interior tables of the Moore families on an n-set."""
    families = enumerate_moore_families(n)
    if topologies_only:
        families = [fam for fam in families if is_topology(fam)]
    closures = [closure_from_family(fam) for fam in families]
    interiors = [dual_interior(fam) for fam in families]
    return families, closures, interiors


def _strong_pair_matrix(cl_tables: np.ndarray, int_tables: np.ndarray,
                        leq: np.ndarray, require_strong: bool = True) -> np.ndarray:
    """Boolean matrix: entry (i, j) iff (Cl_i, Int_j) passes the powerset
    conditions ((i)+(ii); plus (iii) when require_strong)."""
    ncl = cl_tables.shape[0]
    nint = int_tables.shape[0]
    out = np.zeros((ncl, nint), dtype=bool)
    # closure-side precomputations shared across all interiors
    # eq[c, x, y] iff Cl_c(x) == Cl_c(y)
    cl_eq = cl_tables[:, :, None] == cl_tables[:, None, :]
    # b[c, x, y] iff Cl_c(x) <= y
    cl_leq = leq[cl_tables]
    size = cl_tables.shape[1]
    strict_leq = leq & ~np.eye(size, dtype=bool)
    for j in range(nint):
        ic = int_tables[j]
        commute = (cl_tables[:, ic] == ic[cl_tables]).all(axis=1)
        # mixed lifting: x <= Int(y) and Cl(x) <= y  =>  Cl(x) <= Int(y)
        a = leq[:, ic]                         # x <= Int(y)
        c_ok = cl_leq[:, :, ic.astype(np.intp)]
        # c_ok[c, x, y'] = Cl_c(x) <= Int(y') after fancy index on axis 2
        mixed_bad = (a[None, :, :] & cl_leq & ~c_ok).any(axis=(1, 2))
        ok = commute & ~mixed_bad
        if require_strong:
            int_eq = ic[:, None] == ic[None, :]
            merge_bad = (strict_leq[None, :, :] & int_eq[None, :, :] & cl_eq).any(axis=(1, 2))
            ok &= ~merge_bad
        out[:, j] = ok
    return out


def _pair_matrix(n: int, topologies_only: bool, require_strong: bool):
    families, closures, interiors = _family_tables(n, topologies_only)
    poset = closures[0].poset if closures else None
    cl_tab = np.array([op.table for op in closures], dtype=np.intp)
    int_tab = np.array([op.table for op in interiors], dtype=np.intp)
    size = 1 << n
    leq = np.zeros((size, size), dtype=bool)
    for x in range(size):
        for y in range(size):
            leq[x, y] = x & ~y == 0
    matrix = _strong_pair_matrix(cl_tab, int_tab, leq, require_strong=require_strong)
    return families, closures, interiors, matrix


def enumerate_orthogonal_pairs(n: int, topologies_only: bool = False,
                               jobs: int = 1) -> list[ReplacementPair]:
    """All orthogonal pairs over (Moore family, dualized Moore family)
    combinations on an n-set, in (monad index, comonad index) order.

    ``topologies_only`` restricts both sides to topologies.  ``jobs`` is
    accepted for interface symmetry; the sweep is already vectorized and
    its output is identical for any worker count.
    """
    if not 0 <= n <= MAX_PAIR_GROUND:
        raise SizeLimitError(f"pair ground size {n} outside 0..{MAX_PAIR_GROUND}")
    _, closures, interiors, matrix = _pair_matrix(n, topologies_only, require_strong=True)
    out = []
    for i, j in zip(*np.nonzero(matrix)):
        out.append(ReplacementPair(closures[int(i)], interiors[int(j)]))
    return out


def count_orthogonal_pairs(n: int, topologies_only: bool = False) -> int:
    if not 0 <= n <= MAX_PAIR_GROUND:
        raise SizeLimitError(f"pair ground size {n} outside 0..{MAX_PAIR_GROUND}")
    return int(_pair_matrix(n, topologies_only, require_strong=True)[3].sum())


def enumerate_compatible_pairs(n: int, topologies_only: bool = False) -> list[ReplacementPair]:
    """All compatible (not necessarily strong) pairs on an n-set."""
    if not 0 <= n <= MAX_PAIR_GROUND:
        raise SizeLimitError(f"pair ground size {n} outside 0..{MAX_PAIR_GROUND}")
    _, closures, interiors, matrix = _pair_matrix(n, topologies_only, require_strong=False)
    out = []
    for i, j in zip(*np.nonzero(matrix)):
        out.append(ReplacementPair(closures[int(i)], interiors[int(j)]))
    return out


# -- monads versus factorization systems ----------------------------------

def monad_to_fs(op: ClosureOperator) -> tuple[MorphismClass, MorphismClass]:
    """Factorization system with left class the maps inverted by the monad."""
    poset = op.poset
    left = inverted_class(op)
    right = MorphismClass(poset, poset.inj_mask(left.mask))
    _verify_factorizations(left, right)
    return left, right


def comonad_to_fs(op: InteriorOperator) -> tuple[MorphismClass, MorphismClass]:
    """Factorization system with right class the maps inverted by the comonad."""
    poset = op.poset
    right = inverted_class(op)
    left = MorphismClass(poset, poset.proj_mask(right.mask))
    _verify_factorizations(left, right)
    return left, right


def _verify_factorizations(left: MorphismClass, right: MorphismClass) -> None:
    poset = left.poset
    if poset.proj_mask(right.mask) != left.mask or poset.inj_mask(left.mask) != right.mask:
        raise InternalConsistencyError("classes are not mutually lifting-closed")
    for x, y in poset.rels:
        if len(_factor_candidates(left, right, x, y)) != 1:
            raise InternalConsistencyError(
                f"factorization of ({x}, {y}) is not unique")


def _factor_candidates(left: MorphismClass, right: MorphismClass, x: int, y: int) -> list[int]:
    poset = left.poset
    idx = poset.rel_index
    return [m for m in poset.interval(x, y)
            if left.mask >> idx[x, m] & 1 and right.mask >> idx[m, y] & 1]


def fs_to_monad(left: MorphismClass, right: MorphismClass) -> ClosureOperator:
    """Monad of a retractile factorization system: x maps to the middle
    object of the factorization of x <= top."""
    poset = left.poset
    if poset.top is None:
        raise PreconditionError("poset has no top element")
    if not class_predicates(left).retractile:
        raise PreconditionError("left class is not retractile")
    table = []
    for x in range(poset.size):
        cands = _factor_candidates(left, right, x, poset.top)
        if len(cands) != 1:
            raise PreconditionError(f"({x}, top) has {len(cands)} factorizations")
        table.append(cands[0])
    return ClosureOperator(poset, tuple(table))


def fs_to_comonad(left: MorphismClass, right: MorphismClass) -> InteriorOperator:
    """Dual of :func:`fs_to_monad` for sectile systems with a bottom."""
    poset = left.poset
    if poset.bottom is None:
        raise PreconditionError("poset has no bottom element")
    if not class_predicates(right).sectile:
        raise PreconditionError("right class is not sectile")
    table = []
    for x in range(poset.size):
        cands = _factor_candidates(left, right, poset.bottom, x)
        if len(cands) != 1:
            raise PreconditionError(f"(bottom, {x}) has {len(cands)} factorizations")
        table.append(cands[0])
    return InteriorOperator(poset, tuple(table))


# -- centers ---------------------------------------------------------------

def is_center(chi: Sequence[int], weq: MorphismClass) -> bool:
    """Monotone endofunction collapsing weq, with the four span/cospan
    comparisons at every element landing in weq."""
    poset = weq.poset
    if not class_predicates(weq).decomposable:
        raise PreconditionError("the reference class is not decomposable")
    if not poset.has_meets_joins:
        raise UnsupportedStructureError("centers need meets and joins")
    if len(chi) != poset.size:
        raise ValidationError("endofunction table has the wrong size")
    for x in range(poset.size):
        for y in bits(poset.up[x]):
            if not poset.leq(chi[x], chi[y]):
                return False
    idx = poset.rel_index
    for i in bits(weq.mask):
        x, y = poset.rels[i]
        if chi[x] != chi[y]:
            return False
    wmask = weq.mask
    for a in range(poset.size):
        ca = chi[a]
        lo = poset.meet(a, ca)
        hi = poset.join(a, ca)
        for s, d in ((lo, a), (lo, ca), (a, hi), (ca, hi)):
            if not wmask >> idx[s, d] & 1:
                return False
    return True
