"""Poset input files and census output documents.

JSON is the source-of-truth export format: key order and list order are
canonical, so a census is byte-identical across runs and worker counts
once the timing field is stripped.  CSV is a flat projection of the
same data, and DOT is derived from the census for rendering quivers.
"""

from __future__ import annotations

import hashlib
import json
from typing import Optional, Sequence

from . import __version__
from .brackets import FactorizationBracket, ModelStructure
from .closure import MooreFamily, is_geometry, is_matroid, is_topology
from .errors import ValidationError
from .pairs import ReplacementPair, fs_to_monad
from .poset import FinitePoset, MorphismClass, bits, class_predicates, skeletonize

DISTANCE_PALETTE = (
    "red", "orange", "yellow", "green", "blue", "indigo", "violet",
    "olive", "cyan", "brown", "gray", "pink", "yellowgreen",
)
UNREACHABLE_COLOR = "black"
FILL_GEOMETRIC = "red"
FILL_BOTH = "orchid"
FILL_MATROIDAL = "orange"
FILL_TOPOLOGICAL = "lightblue"
FILL_NONE = "white"


# -- poset files ------------------------------------------------------------

def load_poset_document(text: str) -> tuple[FinitePoset, list[str]]:
    """Parse a poset file: element names, generating pairs, flags.

    The generating relation is closed reflexively and transitively on
    load.  Without the skeletonize flag, antisymmetry is required.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"poset file is not valid JSON: {exc}")
    if not isinstance(doc, dict) or "elements" not in doc or "leq_pairs" not in doc:
        raise ValidationError("poset file needs 'elements' and 'leq_pairs'")
    names = list(map(str, doc["elements"]))
    n = len(names)
    rows = [1 << i for i in range(n)]
    for entry in doc["leq_pairs"]:
        if (not isinstance(entry, (list, tuple)) or len(entry) != 2
                or not all(isinstance(v, int) for v in entry)):
            raise ValidationError(f"bad leq pair {entry!r}")
        i, j = entry
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"leq pair ({i}, {j}) out of range 0..{n - 1}")
        rows[i] |= 1 << j
    # transitive closure
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = rows[i]
            for j in bits(rows[i]):
                acc |= rows[j]
            if acc != rows[i]:
                rows[i] = acc
                changed = True
    matrix = [[rows[i] >> j & 1 for j in range(n)] for i in range(n)]
    if doc.get("skeletonize"):
        poset, mapping = skeletonize(matrix)
        merged = [[] for _ in range(poset.size)]
        for raw, rep in enumerate(mapping):
            merged[rep].append(names[raw])
        return poset, ["|".join(group) for group in merged]
    for i in range(n):
        for j in range(n):
            if i != j and matrix[i][j] and matrix[j][i]:
                raise ValidationError(
                    f"relation is not antisymmetric on pair ({i}, {j}); "
                    "set \"skeletonize\": true to quotient")
    poset, mapping = skeletonize(matrix)
    return poset, names


def poset_descriptor(poset: FinitePoset, names: Optional[Sequence[str]] = None,
                     source: str = "") -> dict:
    if names is None:
        names = [poset.element_name(x) for x in range(poset.size)]
    digest = hashlib.sha256(repr(poset.up).encode()).hexdigest()[:16]
    return {
        "element_names": list(names),
        "hash": digest,
        "size": poset.size,
        "source": source,
    }


# -- census assembly ---------------------------------------------------------

def _pairs_of(mask_class: MorphismClass) -> list[list[int]]:
    return [list(p) for p in mask_class.pairs()]


def _fs_flags(bracket: FactorizationBracket) -> tuple[bool, bool, bool]:
    """Topology/matroid/geometry provenance of a retractile system's
    fixed-point family; False for non-retractile or non-Boolean."""
    poset = bracket.poset
    if not bracket.retractile or poset.boolean_ground is None:
        return False, False, False
    monad = fs_to_monad(bracket.left_class, bracket.right_class)
    fam = MooreFamily(poset.boolean_ground, monad.fixed_points)
    return is_topology(fam), is_matroid(fam), is_geometry(fam)


def fs_entry(index: int, bracket: FactorizationBracket) -> dict:
    topological, matroidal, geometric = _fs_flags(bracket)
    return {
        "geometric": geometric,
        "id": index,
        "left": _pairs_of(bracket.left_class),
        "matroidal": matroidal,
        "retractile": bracket.retractile,
        "right": _pairs_of(bracket.right_class),
        "sectile": bracket.sectile,
        "topological": topological,
    }


def ms_entry(ms: ModelStructure, distance: Optional[int], component: int) -> dict:
    return {
        "bifibrant": sorted(bits(ms.bifibrant)),
        "cof": _pairs_of(ms.cof),
        "cofibrant": sorted(bits(ms.cofibrant)),
        "component": component,
        "distance": distance,
        "fib": _pairs_of(ms.fib),
        "fibrant": sorted(bits(ms.fibrant)),
        "geometric": ms.flags.geometric,
        "id": list(ms.ids) if ms.ids is not None else None,
        "matroidal": ms.flags.matroidal,
        "strong": ms.flags.strong,
        "topological": ms.flags.topological,
        "we": _pairs_of(ms.we),
    }


def moore_entry(index: int, fam: MooreFamily) -> dict:
    return {
        "closed_sets": sorted(fam.sets),
        "geometry": is_geometry(fam),
        "id": index,
        "matroid": is_matroid(fam),
        "topology": is_topology(fam),
    }


def census_to_json_bytes(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, indent=1).encode() + b"\n"


def strip_timing(doc: dict) -> dict:
    out = dict(doc)
    meta = dict(out.get("meta", {}))
    meta.pop("timing_seconds", None)
    out["meta"] = meta
    return out


def census_meta(timing_seconds: float) -> dict:
    return {
        "timing_seconds": round(timing_seconds, 6),
        "tool": "posetmodels",
        "version": __version__,
    }


def load_census(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"census file is not valid JSON: {exc}")


# -- CSV projection ----------------------------------------------------------

def _join_pairs(pairs: Sequence[Sequence[int]]) -> str:
    return ";".join(f"{s}<={d}" for s, d in pairs)


def _join_elems(elems: Sequence[int]) -> str:
    return ";".join(map(str, elems))


def census_to_csv(doc: dict) -> str:
    lines = []
    if "model_structures" in doc:
        lines.append("phi_id,psi_id,strong,topological,matroidal,geometric,"
                     "distance,component,fibrant,cofibrant,bifibrant,cof,we,fib")
        for e in doc["model_structures"]:
            dist = "" if e["distance"] is None else str(e["distance"])
            lines.append(",".join([
                str(e["id"][0]), str(e["id"][1]),
                str(e["strong"]).lower(), str(e["topological"]).lower(),
                str(e["matroidal"]).lower(), str(e["geometric"]).lower(),
                dist, str(e["component"]),
                _join_elems(e["fibrant"]), _join_elems(e["cofibrant"]),
                _join_elems(e["bifibrant"]),
                _join_pairs(e["cof"]), _join_pairs(e["we"]), _join_pairs(e["fib"]),
            ]))
    elif "factorization_systems" in doc:
        lines.append("id,retractile,sectile,topological,matroidal,geometric,left,right")
        for e in doc["factorization_systems"]:
            lines.append(",".join([
                str(e["id"]),
                str(e["retractile"]).lower(), str(e["sectile"]).lower(),
                str(e["topological"]).lower(), str(e["matroidal"]).lower(),
                str(e["geometric"]).lower(),
                _join_pairs(e["left"]), _join_pairs(e["right"]),
            ]))
    elif "moore_families" in doc:
        lines.append("id,topology,matroid,geometry,closed_sets")
        for e in doc["moore_families"]:
            lines.append(",".join([
                str(e["id"]),
                str(e["topology"]).lower(), str(e["matroid"]).lower(),
                str(e["geometry"]).lower(), _join_elems(e["closed_sets"]),
            ]))
    elif "orthogonal_pairs" in doc:
        lines.append("monad_family,comonad_family")
        for e in doc["orthogonal_pairs"]:
            lines.append(f"{e['monad']},{e['comonad']}")
    return "\n".join(lines) + "\n"


# -- DOT export --------------------------------------------------------------

def _node_fill(entry: dict) -> str:
    if entry["geometric"]:
        return FILL_GEOMETRIC
    if entry["topological"] and entry["matroidal"]:
        return FILL_BOTH
    if entry["matroidal"]:
        return FILL_MATROIDAL
    if entry["topological"]:
        return FILL_TOPOLOGICAL
    return FILL_NONE


def _node_border(distance: Optional[int]) -> str:
    if distance is None or distance >= len(DISTANCE_PALETTE):
        return UNREACHABLE_COLOR
    return DISTANCE_PALETTE[distance]


def quiver_dot(doc: dict) -> str:
    """DOT digraph: one node per model structure, solid localization and
    dashed colocalization arrows after transitive reduction."""
    from .quiver import transitive_reduction

    entries = doc["model_structures"]
    lines = [
        "digraph bousfield_quiver {",
        "  rankdir=BT;",
        "  node [style=filled, shape=ellipse];",
    ]
    for e in entries:
        m, n = e["id"]
        label = f"({m},{n})" + ("*" if e["strong"] else "")
        lines.append(
            f'  "{m},{n}" [label="{label}", fillcolor="{_node_fill(e)}", '
            f'color="{_node_border(e["distance"])}"];')
    loc = [tuple(map(tuple, p)) for p in doc["quiver"]["localizations"]]
    coloc = [tuple(map(tuple, p)) for p in doc["quiver"]["colocalizations"]]
    for a, b in sorted(transitive_reduction(loc)) if loc else []:
        lines.append(f'  "{a[0]},{a[1]}" -> "{b[0]},{b[1]}";')
    for a, b in sorted(transitive_reduction(coloc)) if coloc else []:
        lines.append(f'  "{a[0]},{a[1]}" -> "{b[0]},{b[1]}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
