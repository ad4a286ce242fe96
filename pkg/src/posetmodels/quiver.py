"""Localization quivers over the model structures of one poset.

A structure is a localization of another when they share cofibrations
and the weak equivalences only grow; colocalization shares fibrations
instead.  The quiver stores the strict parts of both relations as
per-node bit masks, plus connected components and shortest-chain
distances from the discrete structure (all maps cofibrations and
fibrations, weak equivalences the identities).  Transitive reductions
are derived views for drawing.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .brackets import FactorizationBracket, ModelStructure, localization_pairs
from .errors import InternalConsistencyError, PreconditionError, ValidationError
from .poset import bits


def is_bousfield_localization(a: ModelStructure, b: ModelStructure) -> bool:
    """Same cofibrations, weak equivalences of a contained in b's."""
    if a.poset != b.poset:
        raise ValidationError("structures live on different posets")
    return a.cof.mask == b.cof.mask and a.we.mask & ~b.we.mask == 0


def is_bousfield_colocalization(a: ModelStructure, b: ModelStructure) -> bool:
    """Same fibrations, weak equivalences of a contained in b's."""
    if a.poset != b.poset:
        raise ValidationError("structures live on different posets")
    return a.fib.mask == b.fib.mask and a.we.mask & ~b.we.mask == 0


@dataclass(frozen=True)
class BousfieldQuiver:
    """Strict localization/colocalization relations over structure ids."""

    nodes: tuple[tuple[int, int], ...]
    loc: tuple[int, ...]     # loc[i] = bit mask of strict localizations of node i
    coloc: tuple[int, ...]
    components: tuple[int, ...]   # component index per node
    distances: tuple[Optional[int], ...]  # shortest chain from the discrete node
    discrete: int            # node index of the discrete structure

    def loc_edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return [(self.nodes[i], self.nodes[j])
                for i, row in enumerate(self.loc) for j in bits(row)]

    def coloc_edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return [(self.nodes[i], self.nodes[j])
                for i, row in enumerate(self.coloc) for j in bits(row)]


def _relation_chunk(args) -> list[tuple[int, int]]:
    cofs, fibs, wes, rows = args
    n = len(cofs)
    out = []
    for i in rows:
        loc_row = 0
        coloc_row = 0
        ci, fi, wi = cofs[i], fibs[i], wes[i]
        for j in range(n):
            if j == i:
                continue
            if wi & ~wes[j] == 0:
                if cofs[j] == ci:
                    loc_row |= 1 << j
                if fibs[j] == fi:
                    coloc_row |= 1 << j
        out.append((loc_row, coloc_row))
    return out


def build_quiver(structures: Sequence[ModelStructure], jobs: int = 1) -> BousfieldQuiver:
    """Test all ordered pairs for both relations, then annotate
    components and shortest-chain distances from the discrete node."""
    if not structures:
        raise ValidationError("no structures given")
    poset = structures[0].poset
    n = len(structures)
    cofs = [m.cof.mask for m in structures]
    fibs = [m.fib.mask for m in structures]
    wes = [m.we.mask for m in structures]
    rows = list(range(n))
    if jobs > 1 and n > 64:
        from .parallel import run_chunked
        step = (n + jobs * 4 - 1) // (jobs * 4)
        chunks = [rows[k:k + step] for k in range(0, n, step)]
        results = run_chunked(_relation_chunk,
                              [(cofs, fibs, wes, c) for c in chunks], jobs)
        pairs_rows = [r for chunk in results for r in chunk]
    else:
        pairs_rows = _relation_chunk((cofs, fibs, wes, rows))
    loc = tuple(r[0] for r in pairs_rows)
    coloc = tuple(r[1] for r in pairs_rows)

    ids_mask = poset.identities_mask
    all_mask = poset.all_rels_mask
    discrete = [i for i, m in enumerate(structures)
                if m.we.mask == ids_mask and m.cof.mask == all_mask
                and m.fib.mask == all_mask]
    if len(discrete) != 1:
        raise InternalConsistencyError("the discrete structure is missing or duplicated")
    disc = discrete[0]

    # undirected components over the union of both relations
    undirected = [loc[i] | coloc[i] for i in range(n)]
    for i in range(n):
        for j in bits(loc[i] | coloc[i]):
            undirected[j] |= 1 << i
    comp = [-1] * n
    ncomp = 0
    for s in range(n):
        if comp[s] != -1:
            continue
        comp[s] = ncomp
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in bits(undirected[u]):
                if comp[v] == -1:
                    comp[v] = ncomp
                    queue.append(v)
        ncomp += 1

    distances: list[Optional[int]] = [None] * n
    distances[disc] = 0
    queue = deque([disc])
    while queue:
        u = queue.popleft()
        for v in bits(loc[u] | coloc[u]):
            if distances[v] is None:
                distances[v] = distances[u] + 1
                queue.append(v)

    return BousfieldQuiver(
        nodes=tuple(m.ids if m.ids is not None else (-1, -1) for m in structures),
        loc=loc,
        coloc=coloc,
        components=tuple(comp),
        distances=tuple(distances),
        discrete=disc,
    )


def ms_distance_histogram(q: BousfieldQuiver) -> tuple[dict[int, int], int]:
    """Counts per finite distance, plus the number of unreachable nodes."""
    hist: Counter[int] = Counter(d for d in q.distances if d is not None)
    unreachable = sum(1 for d in q.distances if d is None)
    return dict(sorted(hist.items())), unreachable


def quiver_radius(q: BousfieldQuiver) -> int:
    """Largest finite distance from the discrete structure."""
    return max(d for d in q.distances if d is not None)


def component_size_census(q: BousfieldQuiver) -> dict[int, int]:
    """Map component size -> number of components of that size."""
    sizes = Counter(q.components)
    return dict(sorted(Counter(sizes.values()).items()))


def alternating_distances(q: BousfieldQuiver) -> tuple[Optional[int], ...]:
    """Shortest strictly alternating localization/colocalization chain
    from the discrete node; computed to confirm it matches the plain
    shortest-chain distance."""
    n = len(q.nodes)
    INF = None
    # state: (node, last edge kind); kind 0 = loc, 1 = coloc
    dist = [[INF, INF] for _ in range(n)]
    queue = deque()
    for kind, rel in ((0, q.loc), (1, q.coloc)):
        for v in bits(rel[q.discrete]):
            if dist[v][kind] is None:
                dist[v][kind] = 1
                queue.append((v, kind))
    while queue:
        u, kind = queue.popleft()
        nxt = 1 - kind
        rel = q.loc if nxt == 0 else q.coloc
        for v in bits(rel[u]):
            if dist[v][nxt] is None:
                dist[v][nxt] = dist[u][kind] + 1
                queue.append((v, nxt))
    out: list[Optional[int]] = []
    for i in range(n):
        cands = [d for d in dist[i] if d is not None]
        if i == q.discrete:
            out.append(0)
        else:
            out.append(min(cands) if cands else None)
    return tuple(out)


# -- factorization-system distances ----------------------------------------

def fs_distances(brackets: Sequence[FactorizationBracket],
                 loc_pairs: Optional[Iterable[tuple[int, int]]] = None) -> list[int]:
    """Number of minimal localization steps from the discrete system.

    A minimal (irreducible) localization is a cover relation of the
    localization order: no third system sits strictly between.  The
    distance of a system is the length of the shortest chain of such
    steps from the discrete system (right class everything); every
    system is reachable because it is a localization of the discrete
    one.
    """
    n = len(brackets)
    rmasks = [b.right_mask for b in brackets]
    if loc_pairs is None:
        loc_pairs = localization_pairs(brackets)
    strict = [0] * n
    for i, j in loc_pairs:
        if i != j:
            strict[i] |= 1 << j
    covers = reduced_masks(strict)
    all_mask = brackets[0].poset.all_rels_mask
    disc = [i for i in range(n) if rmasks[i] == all_mask]
    if len(disc) != 1:
        raise InternalConsistencyError("discrete factorization system missing")
    dist: list[Optional[int]] = [None] * n
    dist[disc[0]] = 0
    queue = deque(disc)
    while queue:
        u = queue.popleft()
        for v in bits(covers[u]):
            if dist[v] is None:
                dist[v] = dist[u] + 1
                queue.append(v)
    if any(d is None for d in dist):
        raise InternalConsistencyError("a factorization system is unreachable")
    return dist  # type: ignore[return-value]


def fs_distance_histogram(brackets: Sequence[FactorizationBracket],
                          loc_pairs: Optional[Iterable[tuple[int, int]]] = None) -> dict[int, int]:
    return dict(sorted(Counter(fs_distances(brackets, loc_pairs)).items()))


# -- transitive reduction ---------------------------------------------------

def transitive_reduction(edges: Iterable[tuple]) -> set[tuple]:
    """Unique minimal relation with the same transitive closure.

    The input must be the strict part of a partial order (a DAG on
    distinct nodes); a cycle raises a precondition error.
    """
    edge_list = list(edges)
    nodes = sorted({u for u, _ in edge_list} | {v for _, v in edge_list})
    index = {u: i for i, u in enumerate(nodes)}
    n = len(nodes)
    adj = [0] * n
    for u, v in edge_list:
        if u == v:
            raise PreconditionError(f"self-loop on {u!r}")
        adj[index[u]] |= 1 << index[v]
    reduced = reduced_masks(adj)
    out = set()
    for u in range(n):
        for v in bits(reduced[u]):
            out.add((nodes[u], nodes[v]))
    return out


def reduced_masks(rel: Sequence[int]) -> list[int]:
    """Transitive reduction of a strict DAG given as bit-mask rows."""
    n = len(rel)
    reach = [0] * n
    state = [0] * n  # 0 fresh, 1 open, 2 done
    for root in range(n):
        if state[root] != 0:
            continue
        stack = [(root, iter(bits(rel[root])))]
        state[root] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if state[v] == 1:
                    raise PreconditionError("the relation contains a cycle")
                if state[v] == 0:
                    state[v] = 1
                    stack.append((v, iter(bits(rel[v]))))
                    advanced = True
                    break
            if not advanced:
                r = rel[u]
                for v in bits(rel[u]):
                    r |= reach[v]
                reach[u] = r
                state[u] = 2
                stack.pop()
    out = []
    for u in range(n):
        implied = 0
        for w in bits(rel[u]):
            implied |= reach[w]
        out.append(rel[u] & ~implied)
    return out
