"""Command line interface.

Exit codes: 0 success, 1 mathematical validation failure (category laws,
topology axioms, missing structure), 2 search-space bound exceeded,
3 unreadable input (bad JSON, unknown names, file errors).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

from .classify import classify_report
from .density import is_dense, topologies_with_dense
from .errors import (
    FinsiteError,
    ParseError,
    SizeBoundExceeded,
    UnknownName,
    UnknownObject,
)
from .sheaf import is_sheaf, sheafify
from .siteio import (
    canonical_json,
    load_site,
    presheaf_data,
    save_site,
    serialize_site,
)
from .topology import enumerate_topologies


def _emit(args, data, text_renderer=None):
    if args.format == "json":
        sys.stdout.write(canonical_json(data))
    elif text_renderer is not None:
        sys.stdout.write(text_renderer(data))
    else:
        sys.stdout.write(_render_text(data))


def _render_text(data, indent=0):
    """Generic deterministic text rendering of the JSON-shaped data."""
    pad = "  " * indent
    out = []
    if isinstance(data, dict):
        for key in data:
            value = data[key]
            if isinstance(value, (dict, list)) and value:
                out.append("%s%s:\n" % (pad, key))
                out.append(_render_text(value, indent + 1))
            else:
                out.append("%s%s: %s\n" % (pad, key, _scalar(value)))
    elif isinstance(data, list):
        for value in data:
            if isinstance(value, (dict, list)) and value:
                out.append("%s-\n" % pad)
                out.append(_render_text(value, indent + 1))
            else:
                out.append("%s- %s\n" % (pad, _scalar(value)))
    else:
        out.append("%s%s\n" % (pad, _scalar(data)))
    return "".join(out)


def _scalar(value):
    if value is None:
        return "none"
    if value is True:
        return "yes"
    if value is False:
        return "no"
    if isinstance(value, (list, tuple)):
        return "[%s]" % ", ".join(_scalar(v) for v in value)
    if isinstance(value, dict) and not value:
        return "{}"
    return str(value)


def _require_topology(site):
    if site.topology is None:
        raise ParseError("site %r has no topology block" % (site.name,))
    return site.topology


def _named_subcategory(site, name):
    try:
        return site.subcategories[name]
    except KeyError:
        raise UnknownName(
            "site %r has no subcategory %r (have %s)"
            % (site.name, name, ", ".join(sorted(site.subcategories)) or "none")
        ) from None


def _named_presheaf(site, name):
    try:
        return site.presheaves[name]
    except KeyError:
        raise UnknownName(
            "site %r has no presheaf %r (have %s)"
            % (site.name, name, ", ".join(sorted(site.presheaves)) or "none")
        ) from None


def cmd_validate(args):
    site = load_site(args.file)
    data = {
        "site": site.name,
        "ok": True,
        "category": {
            "objects": len(site.category.objects),
            "morphisms": len(site.category.morphisms),
        },
        "topology": None,
        "subcategories": sorted(site.subcategories),
        "presheaves": sorted(site.presheaves),
    }
    if site.topology is not None:
        data["topology"] = {
            "covering_sieves": sum(
                len(masks) for masks in site.topology.covering
            ),
        }
    _emit(args, data)


def cmd_topologies(args):
    site = load_site(args.file)
    lattice = enumerate_topologies(site.category, args.max_assignments)
    data = {
        "site": site.name,
        "count": len(lattice.elements),
        "topologies": [J.describe() for J in lattice.elements],
    }
    if site.topology is not None:
        data["file_topology_index"] = lattice.index_of(site.topology)
    _emit(args, data)


def cmd_dense(args):
    site = load_site(args.file)
    J = _require_topology(site)
    sub = _named_subcategory(site, args.sub)
    verdict = is_dense(site.category, J, sub)
    data = {
        "site": site.name,
        "sub": args.sub,
        "dense": verdict.dense,
        "failures": [asdict(f) for f in verdict.failures],
    }
    if args.enumerate:
        family = topologies_with_dense(site.category, sub)
        data["family"] = {
            "size": len(family.member_indices),
            "of": len(family.lattice.elements),
            "members": list(family.member_indices),
            "minimum_index": family.minimum_index,
            "minimum": family.minimum.describe(),
        }
    _emit(args, data)


def cmd_sheafify(args):
    site = load_site(args.file)
    J = _require_topology(site)
    P = _named_presheaf(site, args.presheaf)
    F, unit = sheafify(site.category, J, P)
    data = {
        "site": site.name,
        "presheaf": args.presheaf,
        "already_sheaf": bool(is_sheaf(site.category, J, P)),
        "sheaf": presheaf_data(F),
        "unit": {
            "components": [list(comp) for comp in unit.components],
            "injective": unit.is_componentwise_injective(),
            "surjective": unit.is_componentwise_surjective(),
        },
    }
    _emit(args, data)


def cmd_classify(args):
    site = load_site(args.file)
    J = _require_topology(site)
    data = classify_report(
        site.category, J, name=site.name, include_objects=False
    )
    _emit(args, data)


def cmd_report(args):
    site = load_site(args.file)
    J = _require_topology(site)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            data = classify_report(
                site.category,
                J,
                name=site.name,
                include_objects=True,
                mapper=pool.map,
            )
    else:
        data = classify_report(
            site.category, J, name=site.name, include_objects=True
        )
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(canonical_json(data))
        sys.stdout.write("wrote %s\n" % args.out)
    else:
        sys.stdout.write(canonical_json(data))


def cmd_corpus(args):
    from .corpus import corpus

    sites = corpus(seed=args.seed, random_count=args.count)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    manifest = {"seed": args.seed, "sites": []}
    for site in sites:
        entry = {
            "name": site.name,
            "objects": len(site.category.objects),
            "morphisms": len(site.category.morphisms),
        }
        if args.out:
            path = os.path.join(args.out, "%s.json" % site.name)
            save_site(site, path)
            entry["path"] = path
        manifest["sites"].append(entry)
    if args.out:
        _emit(args, manifest)
    else:
        if args.format == "json":
            sys.stdout.write(
                canonical_json(
                    {
                        "seed": args.seed,
                        "sites": [
                            json.loads(serialize_site(site)) for site in sites
                        ],
                    }
                )
            )
        else:
            _emit(args, manifest)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="finsite",
        description="Grothendieck topologies, sheaves and site classification "
        "on finite categories.",
    )
    parser.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="output format (default text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a site file against all laws")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("topologies", help="enumerate every topology on the category")
    p.add_argument("file")
    p.add_argument(
        "--max-assignments",
        type=int,
        default=None,
        help="override the candidate-assignment bound",
    )
    p.set_defaults(func=cmd_topologies)

    p = sub.add_parser("dense", help="test a named subcategory for density")
    p.add_argument("file")
    p.add_argument("--sub", required=True, help="subcategory name from the file")
    p.add_argument(
        "--enumerate",
        action="store_true",
        help="also enumerate all topologies making it dense",
    )
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("sheafify", help="sheafify a named presheaf from the file")
    p.add_argument("file")
    p.add_argument("--presheaf", required=True, help="presheaf name from the file")
    p.set_defaults(func=cmd_sheafify)

    p = sub.add_parser("classify", help="site-level classification summary")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="full classification report as JSON")
    p.add_argument("file")
    p.add_argument("--out", default=None, help="write the report to this path")
    p.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker threads for per-object checks (output is identical)",
    )
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("corpus", help="emit the built-in site corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=4, help="random sites to append")
    p.add_argument("--out", default=None, help="directory for one file per site")
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 3
    except (UnknownName, UnknownObject) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 3
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 3
    except SizeBoundExceeded as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except FinsiteError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
