import pytest

from posetmodels.brackets import (
    FactorizationBracket,
    build_model_structure,
    enumerate_brackets,
    enumerate_brackets_naive,
    enumerate_model_structures,
    exists_ms_with_objects,
    exists_strong_ms_with_objects,
    is_bracket,
    is_bracket_pair,
    is_localization,
    localization_pairs,
)
from posetmodels.closure import enumerate_moore_families
from posetmodels.errors import BudgetExceededError, ValidationError
from posetmodels.pairs import is_compatible, is_orthogonal
from posetmodels.poset import bits, boolean_algebra, class_predicates

BRACKET_COUNTS = {0: 1, 1: 2, 2: 10, 3: 450}
MS_COUNTS = {1: 3, 2: 23, 3: 1026}
# frozen regression value; the count is not published
P3_LOCALIZATION_PAIRS = 33903


@pytest.mark.parametrize("n", sorted(BRACKET_COUNTS))
def test_bracket_counts(n):
    assert len(enumerate_brackets(boolean_algebra(n))) == BRACKET_COUNTS[n]


def test_enumeration_agrees_with_naive_oracle(p1, p2, brackets1, brackets2):
    assert [b.table for b in brackets1] == [b.table for b in enumerate_brackets_naive(p1)]
    assert [b.table for b in brackets2] == [b.table for b in enumerate_brackets_naive(p2)]


def test_trivial_brackets(p2):
    top_valued = tuple(y for _, y in p2.rels)     # everything a left map
    bottom_valued = tuple(x for x, _ in p2.rels)  # everything a right map
    assert is_bracket(p2, top_valued)
    assert is_bracket(p2, bottom_valued)


def test_rejected_candidate_witness(p2):
    # first interval-valid candidate rejected in canonical order; it
    # breaks the left composition law
    witness = (0, 0, 0, 1, 1, 1, 2, 2, 3)
    assert not is_bracket(p2, witness)
    from posetmodels.brackets import bracket_violation
    assert "left composition" in bracket_violation(p2, witness)


def test_is_bracket_rejects_partial_tables(p2):
    with pytest.raises(ValidationError, match="entries"):
        is_bracket(p2, (0, 1, 2))


def test_bracket_annotations(brackets2):
    assert sum(b.retractile for b in brackets2) == 7
    assert sum(b.sectile for b in brackets2) == 7
    for b in brackets2:
        assert class_predicates(b.right_class).retractile
        assert class_predicates(b.left_class).sectile


def test_localization_reflexive_and_discrete(brackets2):
    disc = brackets2[0]
    assert disc.right_mask == disc.poset.all_rels_mask
    for b in brackets2:
        assert is_localization(b, b)
        assert is_localization(disc, b)


def test_localization_pair_counts(brackets1, brackets2, brackets3):
    assert len(localization_pairs(brackets1)) == 3
    assert len(localization_pairs(brackets2)) == 44
    assert len(localization_pairs(brackets3)) == P3_LOCALIZATION_PAIRS


@pytest.mark.parametrize("n", sorted(MS_COUNTS))
def test_model_structure_counts(n):
    assert len(enumerate_model_structures(boolean_algebra(n))) == MS_COUNTS[n]


def test_p2_model_structure_ids(ms2):
    assert [m.ids for m in ms2] == [
        (0, 0), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 9),
        (1, 1), (1, 6), (1, 9), (2, 2), (2, 8), (2, 9), (3, 3), (3, 9),
        (4, 4), (5, 5), (5, 9), (6, 6), (7, 7), (7, 9), (8, 8), (9, 9),
    ]


def test_classification_counts(ms1, ms2, ms3):
    def counts(structures):
        return (
            sum(m.flags.strong for m in structures),
            sum(m.flags.topological for m in structures),
            sum(m.flags.matroidal for m in structures),
            sum(m.flags.geometric for m in structures),
        )

    assert counts(ms1) == (3, 1, 3, 1)
    assert counts(ms2) == (17, 9, 11, 1)
    assert counts(ms3) == (377, 84, 50, 4)
    assert sum(m.flags.topological and m.flags.matroidal for m in ms3) == 9


def test_every_strong_p2_structure_is_topological_or_matroidal(ms2):
    for m in ms2:
        if m.flags.strong:
            assert m.flags.topological or m.flags.matroidal


def test_not_every_strong_p3_structure_is_topological_or_matroidal(ms3):
    assert any(m.flags.strong and not m.flags.topological and not m.flags.matroidal
               for m in ms3)


def test_geometric_structures_on_small_algebras_are_discrete(ms1, ms2):
    for structures in (ms1, ms2):
        geo = [m for m in structures if m.flags.geometric]
        assert len(geo) == 1
        assert geo[0].we.mask == geo[0].poset.identities_mask


def test_model_structure_classes_cohere(ms2):
    for m in ms2:
        poset = m.poset
        assert m.acof.mask == m.cof.mask & m.we.mask
        assert m.afib.mask == m.fib.mask & m.we.mask
        assert class_predicates(m.we).decomposable
        assert m.cof.mask == poset.proj_mask(m.afib.mask)
        assert m.fib.mask == poset.inj_mask(m.acof.mask)


def test_bifibrant_weak_equivalences_are_identities(ms2, ms3):
    for structures in (ms2, ms3):
        for m in structures:
            bif = m.bifibrant
            for x, y in m.we.pairs():
                if bif >> x & 1 and bif >> y & 1:
                    assert x == y


def test_associated_pairs_are_compatible(ms2):
    for m in ms2:
        assert is_compatible(m.replacement)
        if m.flags.strong:
            assert is_orthogonal(m.replacement)


def test_strong_bijection_with_orthogonal_pairs(ms1, ms2, ms3):
    for structures in (ms1, ms2, ms3):
        strong = [m for m in structures if m.flags.strong]
        images = {(m.replacement.F.table, m.replacement.C.table) for m in strong}
        assert len(images) == len(strong)
        from posetmodels.pairs import enumerate_orthogonal_pairs
        n = structures[0].poset.boolean_ground
        orth = {(p.F.table, p.C.table) for p in enumerate_orthogonal_pairs(n)}
        assert images == orth


def test_weak_equivalence_detection_via_composite(ms2):
    # a comparable pair is a weak equivalence iff the composite
    # replacement merges its endpoints
    for m in ms2:
        f, c = m.replacement.F.table, m.replacement.C.table
        for i, (x, y) in enumerate(m.poset.rels):
            merged = f[c[x]] == f[c[y]]
            assert merged == bool(m.we.mask >> i & 1)


def test_acyclic_fibration_collapse_chain(ms2):
    # acyclic fibrations are collapsed by the cofibrant replacement; in
    # strong structures the converse holds as well
    for m in ms2:
        c = m.replacement.C.table
        collapsed = {i for i, (x, y) in enumerate(m.poset.rels) if c[x] == c[y]}
        afib = set(bits(m.afib.mask))
        assert afib <= collapsed
        if m.flags.strong:
            assert afib == collapsed


def test_counit_factorization_matches_collapse(ms2):
    # the counit into y factors through x by an acyclic fibration
    # exactly when the cofibrant replacement merges x and y
    for m in ms2:
        poset = m.poset
        c = m.replacement.C.table
        idx = poset.rel_index
        for x, y in poset.rels:
            cy = c[y]
            factors = poset.leq(cy, x) and bool(m.afib.mask >> idx[cy, x] & 1)
            assert factors == (c[x] == cy)


def test_fibration_between_fibrants(ms2):
    # into a fibrant target, being a fibration is having a fibrant source
    for m in ms2:
        fib = m.fibrant
        for i, (x, y) in enumerate(m.poset.rels):
            if fib >> y & 1:
                assert bool(m.fib.mask >> i & 1) == bool(fib >> x & 1)


def test_cofibrant_replacement_factors_through(ms2):
    # with a cofibrant source, the middle object of the second system
    # equals the source's global cofibrant replacement value
    for m in ms2:
        poset = m.poset
        psi = m.pair.psi
        for x, y in poset.rels:
            if m.cofibrant >> x & 1:
                assert psi(x, y) == psi(poset.bottom, y)


def test_exists_ms_with_objects_matches_census(p2, ms2):
    realized = {(m.fibrant, m.cofibrant) for m in ms2}
    for fmask in range(16):
        for cmask in range(16):
            assert exists_ms_with_objects(p2, fmask, cmask) == ((fmask, cmask) in realized)


def test_exists_ms_trivial_cases(p2):
    assert exists_ms_with_objects(p2, 0b1111, 0b1111)
    assert not exists_ms_with_objects(p2, 0b0001, 0b1111)  # top has no bound in {empty}


def test_exists_strong_counts(p2):
    assert exists_strong_ms_with_objects(p2, 0b1111, 0b1111)
    count2 = sum(exists_strong_ms_with_objects(p2, f, c)
                 for f in range(16) for c in range(16))
    assert count2 == 17


def test_exists_strong_count_p3(p3, ms3):
    realized = {(m.fibrant, m.cofibrant) for m in ms3 if m.flags.strong}
    assert len(realized) == 377
    for fmask, cmask in sorted(realized):
        assert exists_strong_ms_with_objects(p3, fmask, cmask)


def test_budget_exceeded_reports_progress(p3):
    with pytest.raises(BudgetExceededError) as info:
        enumerate_brackets(p3, budget=1e-9)
    assert info.value.explored > 0


def test_non_boolean_posets_supported():
    # pentagon lattice: 0 < 1 < 3 < 4 and 0 < 2 < 4
    from posetmodels.poset import FinitePoset
    up = [0b11111, 0b11010, 0b10100, 0b11000, 0b10000]
    pent = FinitePoset(up)
    assert pent.bottom == 0 and pent.top == 4
    structures = enumerate_model_structures(pent)
    assert structures
    for m in structures:
        assert not m.flags.applicable
        assert not m.flags.topological and not m.flags.matroidal


def test_build_model_structure_rederives_classes(brackets2):
    from posetmodels.brackets import BracketPair
    pair = BracketPair(brackets2[0], brackets2[-1])  # the discrete structure
    ms = build_model_structure(pair)
    assert ms.we.mask == pair.poset.identities_mask
    assert ms.fibrant == (1 << pair.poset.size) - 1
    assert ms.cofibrant == (1 << pair.poset.size) - 1
