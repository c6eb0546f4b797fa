"""Named fixtures written as deterministic JSON files."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import UnknownFixture
from .lpa import GRAPH_FIXTURES

SPACE_FIXTURES = {
    "z_line": {"kind": "grid", "dim": 1},
    "z2": {"kind": "grid", "dim": 2},
    "free_group": {"kind": "free_group", "rank": 2},
    "trunked_free_group": {"kind": "trunked_free_group", "trunks": [1, 2, 3, 4, 5, 6, 7, 8]},
    "two_components": {
        "kind": "disjoint_union",
        "parts": [
            {"kind": "graph", "vertices": [0, 1, 2, 3], "edges": [[0, 1], [1, 2], [2, 3]]},
            {"kind": "graph", "vertices": [0, 1, 2], "edges": [[0, 1], [1, 2], [2, 0]]},
        ],
    },
    "ten_point": {
        "kind": "graph",
        "vertices": list(range(10)),
        "edges": [[i, i + 1] for i in range(9)] + [[0, 5]],
    },
}

OTHER_FIXTURES = {
    "bridge_f2": {
        "space": {"kind": "free_group", "rank": 2},
        "window_radius": 5,
        "decomposition": "first_letter",
    },
}


def fixture_names() -> list[str]:
    return sorted(set(GRAPH_FIXTURES) | set(SPACE_FIXTURES) | set(OTHER_FIXTURES))


def fixture(name: str) -> dict:
    if name in GRAPH_FIXTURES:
        return GRAPH_FIXTURES[name]().to_json()
    if name in SPACE_FIXTURES:
        return json.loads(json.dumps(SPACE_FIXTURES[name]))
    if name in OTHER_FIXTURES:
        return json.loads(json.dumps(OTHER_FIXTURES[name]))
    raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_fixture(name: str, out_dir: str | Path = ".") -> Path:
    obj = fixture(name)
    path = Path(out_dir) / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")
    return path
