"""Explicit model structures built from a compatible replacement pair.

Three constructions produce a model structure whose weak equivalences
are the maps merged by the composite replacement FC: one whose acyclic
fibrations lift on the right against every map with semicofibrant
codomain; one whose acyclic cofibrations are exactly the F-inverted
maps; and the cofibration-trimmed variant of the latter whose fibrant
and cofibrant objects are exactly the operator fixed points.  A fourth
takes an orthogonal pair straight to its unique strong structure.

Each construction only assembles morphism classes; the classes are then
factored into bracket tables and pushed through the same validators the
enumerator uses, so a construction can never certify itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .brackets import (
    BracketPair,
    FactorizationBracket,
    ModelStructure,
    build_model_structure,
)
from .closure import inverted_class
from .errors import InternalConsistencyError, PreconditionError, UnsupportedStructureError
from .pairs import ReplacementPair, is_compatible, is_orthogonal
from .poset import FinitePoset, MorphismClass, RelPair, bits


@dataclass(frozen=True)
class SemiStatus:
    """Replacement-relative status of one element."""

    semifibrant: bool      # FC(x) <= x
    semicofibrant: bool    # x <= FC(x)
    f_fibrant: bool        # F(x) = x
    c_cofibrant: bool      # C(x) = x
    anodyne_witnesses: tuple[int, ...]  # C-cofibrant elements below x


@dataclass(frozen=True)
class ConstructionResult:
    ms: ModelStructure
    provenance: str
    input: ReplacementPair


def semistatus(pair: ReplacementPair, x: int) -> SemiStatus:
    poset = pair.poset
    f, c = pair.F.table, pair.C.table
    fc = f[c[x]]
    witnesses = tuple(t for t in bits(poset.down[x]) if c[t] == t)
    return SemiStatus(
        semifibrant=poset.leq(fc, x),
        semicofibrant=poset.leq(x, fc),
        f_fibrant=f[x] == x,
        c_cofibrant=c[x] == x,
        anodyne_witnesses=witnesses,
    )


def is_c_anodyne(pair: ReplacementPair, src: int, dst: int) -> bool:
    """Right lifting against every map with c-cofibrant codomain: each
    c-cofibrant element below dst already sits below src."""
    poset = pair.poset
    c = pair.C.table
    for t in range(poset.size):
        ct = c[t]
        if poset.leq(ct, dst) and not poset.leq(ct, src):
            return False
    return True


def semicofibrant_mask(pair: ReplacementPair) -> int:
    poset = pair.poset
    f, c = pair.F.table, pair.C.table
    m = 0
    for x in range(poset.size):
        if poset.leq(x, f[c[x]]):
            m |= 1 << x
    return m


def factor_with_classes(left: MorphismClass, right: MorphismClass, f: RelPair) -> int:
    """Unique middle object m with (src <= m) in left, (m <= dst) in right."""
    poset = left.poset
    idx = poset.rel_index
    cands = [m for m in poset.interval(f.src, f.dst)
             if left.mask >> idx[f.src, m] & 1 and right.mask >> idx[m, f.dst] & 1]
    if len(cands) != 1:
        raise InternalConsistencyError(
            f"({f.src}, {f.dst}) has {len(cands)} factorizations; "
            "the classes do not form a factorization system")
    return cands[0]


def _table_from_classes(poset: FinitePoset, left_mask: int, right_mask: int) -> tuple[int, ...]:
    left = MorphismClass(poset, left_mask)
    right = MorphismClass(poset, right_mask)
    return tuple(factor_with_classes(left, right, RelPair(poset, x, y))
                 for x, y in poset.rels)


def _assemble(pair: ReplacementPair, provenance: str, cof: int, we: int,
              fib: int, acof: int, afib: int) -> ConstructionResult:
    """Factor the classes into brackets and run the full verifier stack."""
    poset = pair.poset
    phi = FactorizationBracket(poset, _table_from_classes(poset, acof, fib))
    psi = FactorizationBracket(poset, _table_from_classes(poset, cof, afib))
    ms = build_model_structure(BracketPair(phi, psi))
    if (ms.cof.mask, ms.we.mask, ms.fib.mask) != (cof, we, fib):
        raise InternalConsistencyError(
            f"{provenance}: derived classes disagree with the construction")
    return ConstructionResult(ms=ms, provenance=provenance, input=pair)


def _require_compatible(pair: ReplacementPair) -> None:
    if not is_compatible(pair):
        raise PreconditionError("the replacement pair is not compatible")


def _merged_mask(pair: ReplacementPair) -> int:
    poset = pair.poset
    f, c = pair.F.table, pair.C.table
    m = 0
    for i, (x, y) in enumerate(poset.rels):
        if f[c[x]] == f[c[y]]:
            m |= 1 << i
    return m


def dz_model_structure(pair: ReplacementPair) -> ConstructionResult:
    """Acyclic fibrations lift on the right against every map whose
    codomain is semicofibrant; every semicofibrant object comes out
    cofibrant."""
    _require_compatible(pair)
    poset = pair.poset
    if not poset.has_meets_joins:
        raise UnsupportedStructureError("this construction needs a lattice")
    semicof = semicofibrant_mask(pair)
    codomain_semicof = 0
    for i, (_, y) in enumerate(poset.rels):
        if semicof >> y & 1:
            codomain_semicof |= 1 << i
    afib = poset.inj_mask(codomain_semicof)
    we = _merged_mask(pair)
    cof = poset.proj_mask(afib)
    acof = cof & we
    fib = poset.inj_mask(acof)
    return _assemble(pair, "dz", cof, we, fib, acof, afib)


def stanculescu_model_structure(pair: ReplacementPair) -> ConstructionResult:
    """Acyclic cofibrations are exactly the F-inverted maps; the
    cofibrant objects come out as the semicofibrant elements."""
    _require_compatible(pair)
    poset = pair.poset
    acof = inverted_class(pair.F).mask
    we = _merged_mask(pair)
    fib = poset.inj_mask(acof)
    afib = we & fib
    cof = poset.proj_mask(afib)
    return _assemble(pair, "stanculescu", cof, we, fib, acof, afib)


def trimmed_cofibration_mask(pair: ReplacementPair) -> int:
    """Cofibrations of the prescribed-objects construction: the maps in
    the wider class that do not start at bottom, plus those ending at a
    c-cofibrant object."""
    poset = pair.poset
    we = _merged_mask(pair)
    stanculescu_cof = poset.proj_mask(we & poset.inj_mask(inverted_class(pair.F).mask))
    c = pair.C.table
    out = 0
    for i in bits(stanculescu_cof):
        x, y = poset.rels[i]
        if x != poset.bottom or c[y] == y:
            out |= 1 << i
    return out


def main_construction(pair: ReplacementPair) -> ConstructionResult:
    """Model structure whose fibrants and cofibrants are exactly the
    fixed points of the two replacement operators."""
    _require_compatible(pair)
    poset = pair.poset
    we = _merged_mask(pair)
    cof = trimmed_cofibration_mask(pair)
    acof = cof & we
    fib = poset.inj_mask(acof)
    afib = we & fib
    result = _assemble(pair, "main", cof, we, fib, acof, afib)
    rep = result.ms.replacement
    if rep is None or rep.F.table != pair.F.table or rep.C.table != pair.C.table:
        raise InternalConsistencyError("replacement pair does not round-trip")
    return result


def strong_from_orthogonal(pair: ReplacementPair) -> ConstructionResult:
    """Unique strong model structure of an orthogonal pair: acyclic
    cofibrations are the F-inverted maps, acyclic fibrations the
    C-inverted maps."""
    if not is_orthogonal(pair):
        raise PreconditionError("the replacement pair is not orthogonal")
    poset = pair.poset
    acof = inverted_class(pair.F).mask
    afib = inverted_class(pair.C).mask
    fib = poset.inj_mask(acof)
    cof = poset.proj_mask(afib)
    we = _merged_mask(pair)
    result = _assemble(pair, "strong", cof, we, fib, acof, afib)
    if not result.ms.flags.strong:
        raise InternalConsistencyError("constructed structure failed the strongness check")
    return result
