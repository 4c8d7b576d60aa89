"""Reading and writing knot, link, and satellite documents.

A diagram document is a JSON object::

    {
      "name": "9_46",                    # optional display name
      "pd": [[11, 1, 12, 18], ...],      # crossings, 1-based edge labels
      "signs": [1, -1, ...],             # optional, else inferred
      "components": [[1, 2, ...], ...],  # optional, cross-checked
      "marks": {                         # optional
        "pattern": 0,                    # surgery component index
        "infection": 1,                  # drawn infection component
        "curves": {"name": [[edge, sign], ...], ...}
      }
    }

Each crossing lists the four edges counterclockwise starting from the
incoming under-edge.  For a positive crossing the over-strand runs from
the fourth listed edge to the second; for a negative crossing it runs
from the second to the fourth.  Worked example: in the trefoil document
``[1, 4, 2, 5]`` the under-strand enters on edge 1 and leaves on edge 2
while the over-strand runs 5 -> 4, which makes the crossing positive.

A satellite document describes infections of a pattern::

    {
      "name": "r-rr",
      "pattern": {"bundled": "946"} | <diagram document>,
      "infections": [
        {"curve": "gamma1",
         "companion": {"bundled": "946"} | <diagram document>
                      | "any" | "doubled",
         "name": "9_46"},
        ...
      ]
    }

``"any"`` leaves the companion slot universally quantified; ``"doubled"``
marks a symbolic doubled companion (trivial module order by
construction).
"""

from __future__ import annotations

import json

from .diagrams import Diagram, attach_curve_words, zero_surgery
from .errors import MalformedInput

__all__ = [
    "load_document",
    "dump_document",
    "validate_diagram_document",
    "validate_satellite_document",
    "document_kind",
    "diagram_from_document",
    "marked_presentation",
    "diagram_to_document",
]


def load_document(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read document: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("document must be a JSON object")
    return doc


def dump_document(doc: dict, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True))
        fh.write("\n")


def document_kind(doc: dict) -> str:
    if "pd" in doc:
        return "diagram"
    if "pattern" in doc and "infections" in doc:
        return "satellite"
    raise MalformedInput("document is neither a diagram nor a satellite")


def validate_diagram_document(doc: dict) -> None:
    pd = doc.get("pd")
    if not isinstance(pd, list) or not pd:
        raise MalformedInput("diagram document needs a nonempty 'pd' list")
    for row in pd:
        if (
            not isinstance(row, (list, tuple))
            or len(row) != 4
            or not all(isinstance(x, int) and x >= 1 for x in row)
        ):
            raise MalformedInput(
                "each crossing must list four 1-based edge labels"
            )
    signs = doc.get("signs")
    if signs is not None:
        if len(signs) != len(pd) or not all(s in (1, -1) for s in signs):
            raise MalformedInput("signs must be one of +1/-1 per crossing")
    marks = doc.get("marks", {})
    if marks and not isinstance(marks, dict):
        raise MalformedInput("marks must be an object")
    curves = marks.get("curves", {}) if marks else {}
    for name, letters in curves.items():
        if not isinstance(letters, list) or not letters:
            raise MalformedInput(f"curve {name!r} must be a nonempty list")
        for pair in letters:
            if (
                not isinstance(pair, (list, tuple))
                or len(pair) != 2
                or pair[1] not in (1, -1)
            ):
                raise MalformedInput(
                    f"curve {name!r} entries must be [edge, sign] pairs"
                )


def validate_satellite_document(doc: dict) -> None:
    if not isinstance(doc.get("pattern"), dict):
        raise MalformedInput(
            "satellite document needs a 'pattern' object"
        )
    infections = doc.get("infections")
    if not isinstance(infections, list) or not infections:
        raise MalformedInput(
            "satellite document needs a nonempty 'infections' list"
        )
    for item in infections:
        if not isinstance(item, dict) or "curve" not in item:
            raise MalformedInput("each infection needs a 'curve' name")
        companion = item.get("companion")
        if isinstance(companion, str):
            if companion not in ("any", "doubled"):
                raise MalformedInput(
                    "companion tokens are 'any' or 'doubled'"
                )
        elif not isinstance(companion, dict):
            raise MalformedInput(
                "companion must be a document, a bundled reference,"
                " 'any', or 'doubled'"
            )


def _resolve_diagram_ref(ref: dict):
    """A diagram document or a {"bundled": name} reference."""
    if "bundled" in ref:
        from .corpus import bundled_document

        doc = bundled_document(ref["bundled"])
        if doc is None:
            raise MalformedInput(f"no bundled document {ref['bundled']!r}")
        return doc
    return ref


def diagram_from_document(doc: dict):
    """Parse and validate, returning (Diagram, display name)."""
    doc = _resolve_diagram_ref(doc)
    validate_diagram_document(doc)
    signs = doc.get("signs")
    diagram = Diagram(
        [tuple(row) for row in doc["pd"]],
        signs=list(signs) if signs is not None else None,
    )
    comps = doc.get("components")
    if comps is not None:
        got = [sorted(c) for c in diagram.components]
        want = sorted(sorted(c) for c in comps)
        if sorted(got) != want:
            raise MalformedInput("components do not match the crossing data")
    return diagram, doc.get("name", "")


def marked_presentation(doc: dict):
    """Diagram plus zero-surgery presentation with marked curves attached."""
    doc = _resolve_diagram_ref(doc)
    diagram, name = diagram_from_document(doc)
    marks = doc.get("marks", {}) or {}
    pattern = marks.get("pattern", 0)
    plain = zero_surgery(diagram, pattern)
    curves = marks.get("curves", {})
    if curves:
        plain = attach_curve_words(
            plain,
            {k: [tuple(p) for p in v] for k, v in curves.items()},
        )
    return diagram, plain, name


def diagram_to_document(diagram: Diagram, name: str = "") -> dict:
    doc = {
        "pd": [list(c) for c in diagram.crossings],
        "signs": list(diagram.signs),
    }
    if name:
        doc["name"] = name
    return doc
