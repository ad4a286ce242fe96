"""Factorization brackets, bracket pairs, and model-structure records.

A factorization bracket assigns to every comparable pair (X, Y) the
middle object of its factorization, subject to four laws: the value
lies in the interval [X, Y]; collapsing the left or right leg of a
factorization does not change the remaining middle object (left/right
composition laws); and left legs lift against right legs (lifting law).
Brackets encode factorization systems; ordered bracket pairs satisfying
five more laws encode model structures, with weak equivalences the
pairs on which the two brackets agree.

Enumeration is an interval-constrained depth-first search that assigns
values pair by pair and re-checks only the law instances involving the
newly assigned pair.  The all-functions oracle is kept alongside as the
small-poset reference.
"""

from __future__ import annotations

import dataclasses
import itertools
import os
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .closure import (
    ClosureOperator,
    InteriorOperator,
    MooreFamily,
    is_geometry,
    is_matroid,
    is_topology,
)
from .errors import (
    BudgetExceededError,
    InternalConsistencyError,
    UnsupportedStructureError,
    ValidationError,
)
from .pairs import ReplacementPair, is_compatible, is_strongly_compatible
from .poset import FinitePoset, MorphismClass, bits, class_predicates

TIME_BUDGET_ENV = "POSETMODELS_TIME_BUDGET"


def _env_budget() -> Optional[float]:
    raw = os.environ.get(TIME_BUDGET_ENV)
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"{TIME_BUDGET_ENV} must be a number, got {raw!r}")


@dataclass(frozen=True)
class FactorizationBracket:
    """A middle-object table over the poset's comparable pairs."""

    poset: FinitePoset
    table: tuple[int, ...]

    def __post_init__(self):
        reason = bracket_violation(self.poset, self.table)
        if reason:
            raise ValidationError(f"not a factorization bracket: {reason}")

    def __call__(self, x: int, y: int) -> int:
        return self.table[self.poset.rel_index[x, y]]

    @cached_property
    def left_mask(self) -> int:
        m = 0
        for i, (x, y) in enumerate(self.poset.rels):
            if self.table[i] == y:
                m |= 1 << i
        return m

    @cached_property
    def right_mask(self) -> int:
        m = 0
        for i, (x, y) in enumerate(self.poset.rels):
            if self.table[i] == x:
                m |= 1 << i
        return m

    @property
    def left_class(self) -> MorphismClass:
        return MorphismClass(self.poset, self.left_mask)

    @property
    def right_class(self) -> MorphismClass:
        return MorphismClass(self.poset, self.right_mask)

    @cached_property
    def retractile(self) -> bool:
        return class_predicates(self.left_class).retractile

    @cached_property
    def sectile(self) -> bool:
        return class_predicates(self.right_class).sectile


def bracket_violation(poset: FinitePoset, table: Sequence[int]) -> Optional[str]:
    """First violated bracket law, or None for a valid bracket."""
    rels = poset.rels
    if len(table) != len(rels):
        raise ValidationError(
            f"table has {len(table)} entries, poset has {len(rels)} comparable pairs")
    idx = poset.rel_index
    for i, (x, y) in enumerate(rels):
        m = table[i]
        if not (poset.leq(x, m) and poset.leq(m, y)):
            return f"value at ({x},{y}) lies outside the interval"
    for i, (x, y) in enumerate(rels):
        m = table[i]
        for z in bits(poset.up[m]):
            if table[idx[m, z]] != table[idx[x, z]]:
                return f"left composition law fails at ({x},{y}) with {z}"
    for i, (y, z) in enumerate(rels):
        m = table[i]
        for x in bits(poset.down[m]):
            if table[idx[x, m]] != table[idx[x, z]]:
                return f"right composition law fails at ({y},{z}) with {x}"
    n = len(rels)
    for u in range(n):
        w, xe = rels[u]
        mu = table[u]
        for v in range(n):
            yv, zv = rels[v]
            mv = table[v]
            if poset.leq(w, mv) and poset.leq(mu, zv) and not poset.leq(mu, mv):
                return f"lifting law fails between ({w},{xe}) and ({yv},{zv})"
    return None


def is_bracket(poset: FinitePoset, table: Sequence[int]) -> bool:
    """True iff the total table satisfies all four bracket laws."""
    return bracket_violation(poset, table) is None


def _search_order(poset: FinitePoset) -> list[int]:
    """Non-identity pair indices, smallest intervals first."""
    order = [i for i, (x, y) in enumerate(poset.rels) if x != y]
    order.sort(key=lambda i: (len(poset.interval(*poset.rels[i])), i))
    return order


def _enumerate_tables(poset: FinitePoset, deadline: Optional[float]) -> list[tuple[int, ...]]:
    """Depth-first search over interval-constrained tables.

    Only law instances whose last reference is the newly assigned pair
    are re-checked, so every law instance is verified exactly once per
    completed assignment and dead branches are cut at the first violation.
    """
    rels = poset.rels
    idx = poset.rel_index
    nrels = len(rels)
    phi: list[Optional[int]] = [None] * nrels
    for i, (x, y) in enumerate(rels):
        if x == y:
            phi[i] = x
    order = _search_order(poset)
    intervals = {i: poset.interval(*rels[i]) for i in order}
    by_value: list[list[int]] = [[] for _ in range(poset.size)]
    by_src: list[list[int]] = [[] for _ in range(poset.size)]
    by_dst: list[list[int]] = [[] for _ in range(poset.size)]
    assigned: list[int] = []
    for i, (x, y) in enumerate(rels):
        if x == y:
            by_value[x].append(i)
            by_src[x].append(i)
            by_dst[y].append(i)
            assigned.append(i)

    leq = poset.leq
    up, down = poset.up, poset.down

    def consistent(t: int, m: int) -> bool:
        a, b = rels[t]
        # left composition, new pair as the factored base
        for z in bits(up[m]):
            q = phi[idx[m, z]]
            r = phi[idx[a, z]]
            if q is not None and r is not None and q != r:
                return False
        # left composition, new pair in the collapsed-left role
        for p in by_value[a]:
            xs = rels[p][0]
            r = phi[idx[xs, b]]
            if r is not None and r != m:
                return False
        # left composition, new pair in the whole-map role
        for p in by_src[a]:
            mp = phi[p]
            if leq(mp, b):
                q = phi[idx[mp, b]]
                if q is not None and q != m:
                    return False
        # right composition, new pair as the factored base
        for x in bits(down[m]):
            q = phi[idx[x, m]]
            r = phi[idx[x, b]]
            if q is not None and r is not None and q != r:
                return False
        # right composition, new pair in the collapsed-right role
        for p in by_value[b]:
            zd = rels[p][1]
            r = phi[idx[a, zd]]
            if r is not None and r != m:
                return False
        # right composition, new pair in the whole-map role
        for p in by_dst[b]:
            mp = phi[p]
            if leq(a, mp):
                q = phi[idx[a, mp]]
                if q is not None and q != m:
                    return False
        # lifting, both orders against every assigned pair
        for j in assigned:
            js, jd = rels[j]
            mj = phi[j]
            if leq(a, mj) and leq(m, jd) and not leq(m, mj):
                return False
            if leq(js, m) and leq(mj, b) and not leq(mj, m):
                return False
        return True

    results: list[tuple[int, ...]] = []
    explored = 0

    def descend(depth: int) -> None:
        nonlocal explored
        if depth == len(order):
            results.append(tuple(phi))  # type: ignore[arg-type]
            return
        explored += 1
        if deadline is not None and explored % 1024 == 0 and time.monotonic() > deadline:
            raise BudgetExceededError(
                f"bracket search budget exceeded after {explored} nodes",
                found=len(results), explored=explored)
        t = order[depth]
        a, b = rels[t]
        for m in intervals[t]:
            phi[t] = m
            if consistent(t, m):
                by_value[m].append(t)
                by_src[a].append(t)
                by_dst[b].append(t)
                assigned.append(t)
                descend(depth + 1)
                by_value[m].pop()
                by_src[a].pop()
                by_dst[b].pop()
                assigned.pop()
        phi[t] = None

    descend(0)
    results.sort()
    return results


def enumerate_brackets(poset: FinitePoset,
                       budget: Optional[float] = None) -> list[FactorizationBracket]:
    """All factorization brackets on the poset, sorted by table.

    ``budget`` (seconds; defaults to the POSETMODELS_TIME_BUDGET
    environment variable) aborts the search with a partial-progress
    report once exceeded.
    """
    if poset.bottom is None or poset.top is None:
        raise UnsupportedStructureError("bracket enumeration needs bottom and top")
    if budget is None:
        budget = _env_budget()
    deadline = time.monotonic() + budget if budget is not None else None
    tables = _enumerate_tables(poset, deadline)
    return [FactorizationBracket(poset, t) for t in tables]


def enumerate_brackets_naive(poset: FinitePoset) -> list[FactorizationBracket]:
    """All-functions oracle: test every total table against the laws."""
    size = poset.size
    nrels = len(poset.rels)
    out = []
    for table in itertools.product(range(size), repeat=nrels):
        if bracket_violation(poset, table) is None:
            out.append(table)
    out.sort()
    return [FactorizationBracket(poset, t) for t in out]


def is_localization(a: FactorizationBracket, b: FactorizationBracket) -> bool:
    """True iff b's right class is contained in a's right class."""
    if a.poset != b.poset:
        raise ValidationError("brackets live on different posets")
    return b.right_mask & ~a.right_mask == 0


def pair_violation(phi: Sequence[int], psi: Sequence[int],
                   poset: FinitePoset) -> Optional[str]:
    """First violated bracket-pair law, or None.

    Both tables are assumed to already satisfy the single-bracket laws.
    """
    idx = poset.rel_index
    rels = poset.rels
    for i, (x, y) in enumerate(rels):
        m = phi[i]
        if psi[idx[x, m]] != m:
            return f"acyclic left leg at ({x},{y}) is not in the second left class"
        m = psi[i]
        if phi[idx[m, y]] != m:
            return f"acyclic right leg at ({x},{y}) is not in the first right class"
    for xy, yz, _ in poset.chains:
        y = rels[xy][1]
        a, b = psi[xy], phi[yz]
        t = idx[a, b]
        if phi[t] != psi[t]:
            return "merged pairs do not compose"
        a, b = psi[xy], psi[yz]
        t = idx[a, b]
        if phi[t] == psi[t] and phi[idx[y, b]] != b:
            return "two-of-three fails on the left legs"
        a, b = phi[xy], phi[yz]
        t = idx[a, b]
        if phi[t] == psi[t] and psi[idx[a, y]] != a:
            return "two-of-three fails on the right legs"
    return None


@dataclass(frozen=True)
class BracketPair:
    """An ordered pair of brackets encoding one model structure."""

    phi: FactorizationBracket
    psi: FactorizationBracket

    def __post_init__(self):
        if self.phi.poset != self.psi.poset:
            raise ValidationError("brackets live on different posets")
        reason = pair_violation(self.phi.table, self.psi.table, self.phi.poset)
        if reason:
            raise ValidationError(f"not a bracket pair: {reason}")

    @property
    def poset(self) -> FinitePoset:
        return self.phi.poset

    @property
    def tables(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.phi.table, self.psi.table


def is_bracket_pair(phi: FactorizationBracket, psi: FactorizationBracket) -> bool:
    if phi.poset != psi.poset:
        raise ValidationError("brackets live on different posets")
    return pair_violation(phi.table, psi.table, phi.poset) is None


@dataclass(frozen=True)
class Classification:
    strong: bool
    topological: bool
    matroidal: bool
    geometric: bool
    applicable: bool  # False with flags cleared on non-Boolean posets

    @property
    def note(self) -> Optional[str]:
        return None if self.applicable else "not applicable"


@dataclass(frozen=True)
class ModelStructure:
    """Derived record of one model structure on a finite poset."""

    pair: BracketPair
    ids: Optional[tuple[int, int]]
    cof: MorphismClass
    we: MorphismClass
    fib: MorphismClass
    acof: MorphismClass
    afib: MorphismClass
    fibrant: int
    cofibrant: int
    replacement: Optional[ReplacementPair]
    flags: Classification

    @property
    def poset(self) -> FinitePoset:
        return self.pair.poset

    @property
    def bifibrant(self) -> int:
        return self.fibrant & self.cofibrant

    @property
    def signature(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.pair.tables


def _strongness(poset: FinitePoset, acof_mask: int, afib_mask: int) -> bool:
    return (class_predicates(MorphismClass(poset, afib_mask)).sectile
            and class_predicates(MorphismClass(poset, acof_mask)).retractile)


def _moore_side_flags(poset: FinitePoset, fixed_mask: int, dualize: bool):
    n = poset.boolean_ground
    assert n is not None
    if dualize:
        full = (1 << n) - 1
        fixed_mask = sum(1 << (full ^ s) for s in bits(fixed_mask))
    fam = MooreFamily(n, fixed_mask)
    return is_topology(fam), is_matroid(fam), is_geometry(fam)


def classify(ms: "ModelStructure") -> Classification:
    """Strongness, and for strong structures on Boolean algebras the
    topology/matroid/geometry provenance of both replacement operators."""
    poset = ms.poset
    strong = _strongness(poset, ms.acof.mask, ms.afib.mask)
    applicable = poset.boolean_ground is not None
    if not (strong and applicable and ms.replacement is not None):
        return Classification(strong, False, False, False, applicable)
    f_top, f_mat, f_geo = _moore_side_flags(
        poset, ms.replacement.F.fixed_points, dualize=False)
    c_top, c_mat, c_geo = _moore_side_flags(
        poset, ms.replacement.C.fixed_points, dualize=True)
    return Classification(
        strong=True,
        topological=f_top and c_top,
        matroidal=f_mat and c_mat,
        geometric=f_geo and c_geo,
        applicable=True,
    )


def build_model_structure(pair: BracketPair,
                          ids: Optional[tuple[int, int]] = None) -> ModelStructure:
    """Expand a verified bracket pair into a full record.

    The derived classes are re-checked against the lifting calculus; a
    failure here means a bug upstream, not bad input.
    """
    poset = pair.poset
    phi, psi = pair.phi, pair.psi
    acof_mask, fib_mask = phi.left_mask, phi.right_mask
    cof_mask, afib_mask = psi.left_mask, psi.right_mask
    we_mask = 0
    for i in range(len(poset.rels)):
        if phi.table[i] == psi.table[i]:
            we_mask |= 1 << i
    if acof_mask != cof_mask & we_mask or afib_mask != fib_mask & we_mask:
        raise InternalConsistencyError("acyclic classes disagree with intersections")
    if (poset.proj_mask(afib_mask) != cof_mask or poset.inj_mask(acof_mask) != fib_mask
            or poset.proj_mask(fib_mask) != acof_mask or poset.inj_mask(cof_mask) != afib_mask):
        raise InternalConsistencyError("classes are not lifting-closed")
    fibrant = 0
    cofibrant = 0
    replacement = None
    if poset.top is not None and poset.bottom is not None:
        idx = poset.rel_index
        ftab = tuple(phi.table[idx[x, poset.top]] for x in range(poset.size))
        ctab = tuple(psi.table[idx[poset.bottom, x]] for x in range(poset.size))
        replacement = ReplacementPair(ClosureOperator(poset, ftab),
                                      InteriorOperator(poset, ctab))
        for x in range(poset.size):
            if ftab[x] == x:
                fibrant |= 1 << x
            if ctab[x] == x:
                cofibrant |= 1 << x
    ms = ModelStructure(
        pair=pair,
        ids=ids,
        cof=MorphismClass(poset, cof_mask),
        we=MorphismClass(poset, we_mask),
        fib=MorphismClass(poset, fib_mask),
        acof=MorphismClass(poset, acof_mask),
        afib=MorphismClass(poset, afib_mask),
        fibrant=fibrant,
        cofibrant=cofibrant,
        replacement=replacement,
        flags=Classification(False, False, False, False, False),
    )
    return dataclasses.replace(ms, flags=classify(ms))


def localization_pairs(brackets: Sequence[FactorizationBracket]) -> list[tuple[int, int]]:
    """Ordered index pairs (i, j) with bracket j a localization of bracket i."""
    rmasks = [b.right_mask for b in brackets]
    out = []
    for i, ri in enumerate(rmasks):
        for j, rj in enumerate(rmasks):
            if rj & ~ri == 0:
                out.append((i, j))
    return out


def _pair_check_chunk(args) -> list[tuple[int, int]]:
    up, ground, tables, chunk = args
    poset = FinitePoset(up, boolean_ground=ground)
    return [(i, j) for i, j in chunk
            if pair_violation(tables[i], tables[j], poset) is None]


def enumerate_model_structures(poset: FinitePoset, jobs: int = 1,
                               budget: Optional[float] = None) -> list[ModelStructure]:
    """All model structures, in (phi index, psi index) order.

    Candidates are the localization pairs of the bracket list; the five
    pair laws filter them, and survivors are expanded to full records.
    """
    brackets = enumerate_brackets(poset, budget=budget)
    candidates = localization_pairs(brackets)
    tables = [b.table for b in brackets]
    if jobs > 1 and len(candidates) > 64:
        from .parallel import run_chunked
        chunks = run_chunked(
            _pair_check_chunk,
            [(poset.up, poset.boolean_ground, tables, chunk)
             for chunk in _split(candidates, jobs * 4)],
            jobs,
        )
        passing = [p for chunk in chunks for p in chunk]
    else:
        passing = [(i, j) for i, j in candidates
                   if pair_violation(tables[i], tables[j], poset) is None]
    passing.sort()
    out = []
    for i, j in passing:
        pair = BracketPair(brackets[i], brackets[j])
        out.append(build_model_structure(pair, ids=(i, j)))
    return out


def _split(items, parts: int):
    parts = max(1, min(parts, len(items)))
    step = (len(items) + parts - 1) // parts
    return [items[k:k + step] for k in range(0, len(items), step)]


def associated_pair(ms: ModelStructure) -> ReplacementPair:
    """Fibrant/cofibrant replacement operators of a model structure."""
    if ms.replacement is None:
        raise UnsupportedStructureError("replacements need bottom and top elements")
    return ms.replacement


# -- existence with prescribed objects -------------------------------------

def _reflector(poset: FinitePoset, subset_mask: int) -> Optional[tuple[int, ...]]:
    """Least upper bound inside the subset for every element, or None."""
    table = []
    for x in range(poset.size):
        ubs = subset_mask & poset.up[x]
        least = [m for m in bits(ubs) if ubs & ~poset.up[m] == 0]
        if not least:
            return None
        table.append(least[0])
    return tuple(table)


def _coreflector(poset: FinitePoset, subset_mask: int) -> Optional[tuple[int, ...]]:
    table = []
    for x in range(poset.size):
        lbs = subset_mask & poset.down[x]
        greatest = [m for m in bits(lbs) if lbs & ~poset.down[m] == 0]
        if not greatest:
            return None
        table.append(greatest[0])
    return tuple(table)


def _objects_pair(poset: FinitePoset, fibrant_mask: int,
                  cofibrant_mask: int) -> Optional[ReplacementPair]:
    if poset.bottom is None or poset.top is None:
        raise UnsupportedStructureError("object existence tests need bottom and top")
    ftab = _reflector(poset, fibrant_mask)
    ctab = _coreflector(poset, cofibrant_mask)
    if ftab is None or ctab is None:
        return None
    return ReplacementPair(ClosureOperator(poset, ftab), InteriorOperator(poset, ctab))


def exists_ms_with_objects(poset: FinitePoset, fibrant_mask: int,
                           cofibrant_mask: int) -> bool:
    """Is there a model structure with exactly these fibrant and
    cofibrant objects?  Holds iff the fibrant set is reflective, the
    cofibrant set is coreflective, and the induced operators form a
    compatible pair."""
    pair = _objects_pair(poset, fibrant_mask, cofibrant_mask)
    return pair is not None and is_compatible(pair)


def exists_strong_ms_with_objects(poset: FinitePoset, fibrant_mask: int,
                                  cofibrant_mask: int) -> bool:
    """Strong variant: the induced pair must be strongly compatible."""
    pair = _objects_pair(poset, fibrant_mask, cofibrant_mask)
    return pair is not None and is_strongly_compatible(pair)
