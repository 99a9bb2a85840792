"""Serialization of scan results: JSON, CSV summary and a text digest.

Output is a pure function of the reports, so equal runs give equal bytes.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from typing import Iterable

import numpy as np

from .criteria import CriterionReport

CSV_FIELDS = ("group", "class", "n", "shape", "agreement", "conclusions_passed", "conclusions_total")


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default) + "\n"


def shape_label(r: CriterionReport) -> str:
    if r.oracle_shape is not None:
        return r.oracle_shape.tag.value
    held = [name for name in ("char1", "char2", "char3") if r.char_verdicts[name].holds]
    return "+".join(held) if held else "none"


def summarize(reports: Iterable[CriterionReport]) -> dict:
    reports = list(reports)
    shapes = Counter(shape_label(r) for r in reports if r.is_hit)
    return {
        "pairs": len(reports),
        "hits": dict(sorted(shapes.items())),
        "disagreements": sum(r.agreement is False for r in reports),
        "violations": sum(len(r.violations) for r in reports),
        "conclusions_checked": sum(len(r.conclusions) for r in reports),
    }


def group_block(name: str, order: int | None, reports: list[CriterionReport], extra: dict | None = None) -> dict:
    block = {"group": name, "order": order, "summary": summarize(reports)}
    if extra:
        block.update(extra)
    block["reports"] = [r.to_dict() for r in reports]
    return block


def to_json(blocks: list[dict]) -> str:
    return dumps(blocks)


def to_csv(reports: Iterable[CriterionReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        passed = sum(c.holds for c in r.conclusions)
        agreement = "" if r.agreement is None else str(r.agreement).lower()
        writer.writerow([r.group, r.class_id, r.n, shape_label(r), agreement, passed, len(r.conclusions)])
    return buf.getvalue()


def to_text(blocks: list[dict], reports_by_group: dict[str, list[CriterionReport]]) -> str:
    lines = []
    for block in blocks:
        s = block["summary"]
        hits = ", ".join(f"{k}={v}" for k, v in s["hits"].items()) or "none"
        lines.append(
            f"{block['group']} (order {block['order'] if block['order'] is not None else '?'}): "
            f"{s['pairs']} pairs, hits {hits}, disagreements {s['disagreements']}, violations {s['violations']}"
        )
        for r in reports_by_group.get(block["group"], []):
            if not (r.is_hit or r.is_finding):
                continue
            passed = sum(c.holds for c in r.conclusions)
            flag = "" if not r.is_finding else "  FINDING"
            lines.append(
                f"  class {r.class_id} (|K|={r.class_size}, o={r.element_order}) n={r.n}: "
                f"{shape_label(r)}, conclusions {passed}/{len(r.conclusions)}{flag}"
            )
            for c in r.violations:
                lines.append(f"    violated {c.name}: {c.details}")
    return "\n".join(lines) + "\n"


def census(reports: Iterable[CriterionReport]) -> dict:
    """Hits per shape together with the solvability verdicts attached to them."""
    out: dict[str, dict] = {}
    for r in reports:
        if not r.is_hit:
            continue
        entry = out.setdefault(shape_label(r), {"hits": 0, "solvable": 0, "pairs": []})
        entry["hits"] += 1
        solv = [c for c in r.conclusions if c.name.endswith("solvable")]
        entry["solvable"] += bool(solv) and all(c.holds for c in solv)
        entry["pairs"].append([r.class_id, r.n])
    return dict(sorted(out.items()))
