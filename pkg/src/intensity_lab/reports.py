"""JSON reports for the CLI, a Markdown renderer over them, and the group cache."""
from __future__ import annotations

import json
import os
from pathlib import Path

from .constructions import GroupSpec, build
from .groups import (TABLE_LIMIT, all_subgroups, center, load_snapshot, save_snapshot,
                     subgroup_conjugacy_classes)
from .structure import (NotAnObelisk, is_extraspecial, is_framed, is_kappa_group, is_obelisk,
                        lines_report, regularity, series)

SCHEMA_VERSION = 1


# --- cache ---------------------------------------------------------------------

def cache_dir():
    root = os.environ.get("INTENSITY_LAB_CACHE_DIR")
    path = Path(root) if root else Path.home() / ".cache" / "intensity_lab"
    return path


def cached_group(spec: GroupSpec, use_cache=True, max_order=None):
    """Build a group, reusing a snapshot keyed by the spec's content hash."""
    kw = {} if max_order is None else {"max_order": max_order}
    if not use_cache:
        return build(spec, **kw)
    path = cache_dir() / f"{spec.content_hash()}.igrp"
    if path.exists():
        try:
            G, desc = load_snapshot(path)
            if G.table is not None and desc.get("spec") == spec.to_dict():
                G.name = desc.get("name", "")
                G.meta["spec"] = spec.to_dict()
                return G
        except (ValueError, OSError, AssertionError):
            pass
    G = build(spec, **kw)
    if G.n <= TABLE_LIMIT:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_snapshot(G, path, {"spec": spec.to_dict(), "name": G.name})
        except OSError:
            pass
    return G


def clear_cache():
    d = cache_dir()
    removed = 0
    if d.exists():
        for f in d.glob("*.igrp"):
            f.unlink()
            removed += 1
    return removed


# --- report builders --------------------------------------------------------------

def _predicate(fn, G):
    try:
        return fn(G)
    except NotAnObelisk:
        return False
    except ValueError:
        return None


def analyze(G, seed=0):
    S = series(G)
    reg = regularity(G, seed=seed) if G.n > 1 else None
    obelisk = _predicate(is_obelisk, G)
    framed = _predicate(is_framed, G) if obelisk else (None if obelisk is None else False)
    lines = None
    if obelisk and S.nilpotency_class >= 3:
        lines = {str(x): ok for x, ok in lines_report(G).items()}
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "analyze",
        "spec": G.meta.get("spec"),
        "name": G.name,
        "order": G.n,
        "p": G.p,
        "class": S.nilpotency_class,
        "widths": S.widths,
        "exponent": G.exponent(),
        "series": {
            "lowerCentral": [len(H) for H in S.lcs],
            "pCentral": [len(H) for H in S.pcs],
            "derived": [len(H) for H in S.derived],
            "frattini": len(S.frattini),
            "centre": len(center(G)),
        },
        "predicates": {
            "abelian": G.is_abelian(),
            "extraspecial": is_extraspecial(G),
            "kappa": is_kappa_group(G),
            "obelisk": obelisk,
            "framed": framed,
            "regular": None if reg is None else reg.regular,
            "regularSampled": None if reg is None else reg.sampled,
        },
        "linesCriterion": lines,
    }


def intensity_report(G, report):
    d = report.to_dict()
    d.pop("seconds", None)   # keeps reports byte-identical across runs
    gens = d["generators"]
    d["generatorWords"] = [G.word(g) for g in gens]
    d["witnessWords"] = {lam: [G.word(x) for x in imgs] for lam, imgs in d["witnesses"].items()}
    return {"schemaVersion": SCHEMA_VERSION, "kind": "intensity", "spec": G.meta.get("spec"), **d}


def subgroups_report(G, classes_only=False):
    subs = all_subgroups(G)
    classes = subgroup_conjugacy_classes(G)
    out = {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "subgroups",
        "spec": G.meta.get("spec"),
        "order": G.n,
        "subgroupCount": len(subs),
        "classCount": len(classes),
        "classes": [{"representativeOrder": len(subs[c[0]]), "size": len(c),
                     "representativeGens": list(subs[c[0]].gens)} for c in classes],
    }
    if not classes_only:
        out["subgroups"] = [{"order": len(H), "gens": list(H.gens)} for H in subs]
    return out


def to_json(report):
    return json.dumps(report, indent=2, sort_keys=True, default=str)


def to_markdown(report):
    """Render any JSON report as Markdown (derived from the JSON, never recomputed)."""
    data = json.loads(to_json(report))
    lines = [f"# {data.get('kind', 'report')}", ""]
    for key in sorted(data):
        val = data[key]
        if isinstance(val, dict):
            lines += [f"## {key}", "", "| key | value |", "| --- | --- |"]
            lines += [f"| {k} | {json.dumps(v)} |" for k, v in sorted(val.items())]
            lines.append("")
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            cols = sorted({c for row in val for c in row})
            lines += [f"## {key}", "", "| " + " | ".join(cols) + " |",
                      "|" + " --- |" * len(cols)]
            lines += ["| " + " | ".join(json.dumps(row.get(c)) for c in cols) + " |" for row in val]
            lines.append("")
        else:
            lines.append(f"- **{key}**: {json.dumps(val)}")
    return "\n".join(lines) + "\n"
