"""Command-line front end.

Exit codes: 0 success, 2 argument errors, 3 resource/budget errors,
4 input-validation errors.  Summaries go to standard output, error
messages to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .brackets import (
    enumerate_brackets,
    enumerate_model_structures,
    exists_ms_with_objects,
    exists_strong_ms_with_objects,
)
from .closure import ClosureOperator, InteriorOperator, enumerate_moore_families
from .constructions import (
    dz_model_structure,
    main_construction,
    stanculescu_model_structure,
    strong_from_orthogonal,
)
from .documents import (
    census_meta,
    census_to_csv,
    census_to_json_bytes,
    fs_entry,
    load_poset_document,
    moore_entry,
    ms_entry,
    poset_descriptor,
    quiver_dot,
)
from .errors import (
    BudgetExceededError,
    PosetModelError,
    PreconditionError,
    SizeLimitError,
    UnsupportedStructureError,
    ValidationError,
)
from .pairs import (
    ReplacementPair,
    compatibility_witness,
    count_orthogonal_pairs,
    enumerate_compatible_pairs,
    is_compatible,
    is_orthogonal,
    orthogonality_witness,
    _pair_matrix,
)
from .poset import FinitePoset, boolean_algebra
from .quiver import build_quiver, ms_distance_histogram, quiver_radius, reduced_masks


def _target_poset(args) -> tuple[FinitePoset, list[str], str]:
    if args.boolean is not None:
        poset = boolean_algebra(args.boolean)
        names = [poset.element_name(x) for x in range(poset.size)]
        return poset, names, f"boolean:{args.boolean}"
    text = Path(args.poset).read_text()
    poset, names = load_poset_document(text)
    return poset, names, f"file:{args.poset}"


def _write_census(doc: dict, args) -> None:
    payload: bytes
    if args.format == "csv":
        payload = census_to_csv(doc).encode()
    else:
        payload = census_to_json_bytes(doc)
    if args.out:
        Path(args.out).write_bytes(payload)
    elif args.format == "csv":
        sys.stdout.write(payload.decode())


def build_fs_census(poset: FinitePoset, names, source: str, jobs: int = 1) -> dict:
    start = time.perf_counter()
    brackets = enumerate_brackets(poset)
    doc = {
        "factorization_systems": [fs_entry(i, b) for i, b in enumerate(brackets)],
        "meta": census_meta(time.perf_counter() - start),
        "poset": poset_descriptor(poset, names, source),
    }
    return doc


def build_ms_census(poset: FinitePoset, names, source: str, jobs: int = 1) -> dict:
    start = time.perf_counter()
    structures = enumerate_model_structures(poset, jobs=jobs)
    q = build_quiver(structures, jobs=jobs)
    entries = [
        ms_entry(ms, q.distances[i], q.components[i])
        for i, ms in enumerate(structures)
    ]
    loc_pairs = sorted([list(a), list(b)] for a, b in q.loc_edges())
    coloc_pairs = sorted([list(a), list(b)] for a, b in q.coloc_edges())
    doc = {
        "meta": census_meta(time.perf_counter() - start),
        "model_structures": entries,
        "poset": poset_descriptor(poset, names, source),
        "quiver": {"colocalizations": coloc_pairs, "localizations": loc_pairs},
    }
    return doc


def build_moore_census(n: int) -> dict:
    start = time.perf_counter()
    families = enumerate_moore_families(n)
    return {
        "ground_size": n,
        "meta": census_meta(time.perf_counter() - start),
        "moore_families": [moore_entry(i, f) for i, f in enumerate(families)],
    }


def build_pairs_census(n: int, topologies_only: bool,
                       include_compatible: bool) -> dict:
    start = time.perf_counter()
    _, _, _, matrix = _pair_matrix(n, topologies_only, require_strong=True)
    pairs = [{"comonad": int(j), "monad": int(i)}
             for i, j in zip(*matrix.nonzero())]
    doc = {
        "ground_size": n,
        "meta": census_meta(time.perf_counter() - start),
        "orthogonal_pairs": pairs,
        "topologies_only": topologies_only,
    }
    if include_compatible:
        doc["compatible_count"] = len(enumerate_compatible_pairs(n, topologies_only))
    return doc


def _cmd_enumerate(args) -> int:
    if args.what in ("moore", "pairs"):
        if args.boolean is None:
            raise ValidationError(f"'enumerate {args.what}' needs --boolean N")
        if args.what == "moore":
            doc = build_moore_census(args.boolean)
            fams = doc["moore_families"]
            print(f"moore={len(fams)} topologies={sum(e['topology'] for e in fams)}")
        else:
            doc = build_pairs_census(args.boolean, args.topologies_only,
                                     args.include_compatible)
            line = f"orthogonal={len(doc['orthogonal_pairs'])}"
            if args.include_compatible:
                line = f"compatible={doc['compatible_count']} " + line
            print(line)
        _write_census(doc, args)
        return 0
    poset, names, source = _target_poset(args)
    if args.what == "fs":
        doc = build_fs_census(poset, names, source, jobs=args.jobs)
        entries = doc["factorization_systems"]
        print(f"factorization_systems={len(entries)} "
              f"retractile={sum(e['retractile'] for e in entries)} "
              f"sectile={sum(e['sectile'] for e in entries)}")
    else:
        doc = build_ms_census(poset, names, source, jobs=args.jobs)
        entries = doc["model_structures"]
        print(f"model_structures={len(entries)} "
              f"strong={sum(e['strong'] for e in entries)}")
    _write_census(doc, args)
    return 0


def _cmd_quiver(args) -> int:
    from .quiver import transitive_reduction

    poset, names, source = _target_poset(args)
    doc = build_ms_census(poset, names, source, jobs=args.jobs)
    structures = doc["model_structures"]
    components = len({e["component"] for e in structures})
    radius = max(e["distance"] for e in structures if e["distance"] is not None)
    loc = [tuple(map(tuple, p)) for p in doc["quiver"]["localizations"]]
    coloc = [tuple(map(tuple, p)) for p in doc["quiver"]["colocalizations"]]
    solid = len(transitive_reduction(loc)) if loc else 0
    dashed = len(transitive_reduction(coloc)) if coloc else 0
    dot = quiver_dot(doc)
    print(f"nodes={len(structures)} components={components} radius={radius} "
          f"loc_reduced={solid} coloc_reduced={dashed}")
    if args.dot:
        Path(args.dot).write_text(dot)
    else:
        sys.stdout.write(dot)
    if args.out:
        Path(args.out).write_bytes(census_to_json_bytes(doc))
    return 0


def _load_pair(path: str, poset: FinitePoset) -> ReplacementPair:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"pair file is not valid JSON: {exc}")
    if not isinstance(doc, dict) or "closure" not in doc or "interior" not in doc:
        raise ValidationError("pair file needs 'closure' and 'interior' tables")
    return ReplacementPair(
        ClosureOperator(poset, tuple(doc["closure"])),
        InteriorOperator(poset, tuple(doc["interior"])),
    )


def _cmd_check_pair(args) -> int:
    poset, _, _ = _target_poset(args)
    pair = _load_pair(args.pair, poset)
    compatible = is_compatible(pair)
    orthogonal = compatible and is_orthogonal(pair)
    line = f"compatible={str(compatible).lower()} orthogonal={str(orthogonal).lower()}"
    if not compatible:
        line += f" witness={compatibility_witness(pair)}"
    elif not orthogonal:
        line += f" witness={orthogonality_witness(pair)}"
    print(line)
    return 0


def _parse_object_set(spec: str, poset: FinitePoset) -> int:
    if spec == "ALL":
        return (1 << poset.size) - 1
    mask = 0
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            x = int(token)
        except ValueError:
            raise ValidationError(f"bad element index {token!r}")
        if not 0 <= x < poset.size:
            raise ValidationError(f"element index {x} out of range 0..{poset.size - 1}")
        mask |= 1 << x
    return mask


def _cmd_check_objects(args) -> int:
    poset, _, _ = _target_poset(args)
    fib = _parse_object_set(args.fibrant, poset)
    cof = _parse_object_set(args.cofibrant, poset)
    if args.strong:
        print(f"exists_strong={str(exists_strong_ms_with_objects(poset, fib, cof)).lower()}")
    else:
        print(f"exists={str(exists_ms_with_objects(poset, fib, cof)).lower()}")
    return 0


_METHODS = {
    "dz": dz_model_structure,
    "stanculescu": stanculescu_model_structure,
    "main": main_construction,
    "strong": strong_from_orthogonal,
}


def _cmd_check_construct(args) -> int:
    poset, _, _ = _target_poset(args)
    pair = _load_pair(args.pair, poset)
    result = _METHODS[args.method](pair)
    print(f"verified=true method={result.provenance}")
    fragment = ms_entry(result.ms, None, 0)
    payload = census_to_json_bytes(fragment)
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode())
    return 0


def _add_target_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--boolean", type=int, default=None, metavar="N",
                   help="use the power-set lattice on N generators")
    p.add_argument("--poset", default=None, metavar="FILE",
                   help="load the poset from a JSON file")


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=1, metavar="K",
                   help="worker processes (output is identical for any K)")
    p.add_argument("--out", default=None, metavar="PATH", help="write the census here")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posetmodels",
        description="Census and verification engine for model structures on finite posets.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="enumerate structures and export a census")
    p_enum.add_argument("what", choices=("fs", "ms", "moore", "pairs"))
    _add_target_options(p_enum)
    _add_output_options(p_enum)
    p_enum.add_argument("--orthogonal-only", action="store_true", default=True,
                        help="pairs: list only orthogonal pairs (the default)")
    p_enum.add_argument("--include-compatible", action="store_true",
                        help="pairs: also count merely-compatible pairs")
    p_enum.add_argument("--topologies-only", action="store_true",
                        help="pairs: restrict both sides to topologies")
    p_enum.set_defaults(fn=_cmd_enumerate)

    p_quiver = sub.add_parser("quiver", help="model-structure census plus DOT export")
    _add_target_options(p_quiver)
    _add_output_options(p_quiver)
    p_quiver.add_argument("--dot", default=None, metavar="PATH", help="write DOT here")
    p_quiver.set_defaults(fn=_cmd_quiver)

    p_check = sub.add_parser("check", help="verify pairs, object sets, constructions")
    check_sub = p_check.add_subparsers(dest="check_what", required=True)

    p_pair = check_sub.add_parser("pair", help="compatibility and orthogonality of a pair")
    _add_target_options(p_pair)
    p_pair.add_argument("--pair", required=True, metavar="FILE",
                        help="JSON file with 'closure' and 'interior' tables")
    p_pair.set_defaults(fn=_cmd_check_pair)

    p_obj = check_sub.add_parser("objects",
                                 help="existence of a model structure with given objects")
    _add_target_options(p_obj)
    p_obj.add_argument("--fibrant", required=True, metavar="SET",
                       help="'ALL' or comma-separated element indices")
    p_obj.add_argument("--cofibrant", required=True, metavar="SET")
    p_obj.add_argument("--strong", action="store_true",
                       help="require a strong model structure")
    p_obj.set_defaults(fn=_cmd_check_objects)

    p_con = check_sub.add_parser("construct", help="run and verify a construction")
    _add_target_options(p_con)
    p_con.add_argument("--method", choices=sorted(_METHODS), required=True)
    p_con.add_argument("--pair", required=True, metavar="FILE")
    p_con.add_argument("--out", default=None, metavar="PATH")
    p_con.set_defaults(fn=_cmd_check_construct)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "boolean", None) is None and getattr(args, "poset", None) is None:
        if args.command in ("enumerate", "quiver") or getattr(args, "check_what", None):
            parser.exit(2, "error: one of --boolean or --poset is required\n")
    try:
        return args.fn(args)
    except BudgetExceededError as exc:
        print(f"error: {exc} (found={exc.found}, explored={exc.explored})",
              file=sys.stderr)
        return 3
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, UnsupportedStructureError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except PosetModelError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
