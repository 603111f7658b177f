#!/usr/bin/env python3
"""Render every bundled fixture poset to Graphviz text under out/.

Usage: python scripts/render_fixtures.py

Pipe any result through `dot -Tpng` to get a picture of the Hasse diagram.
"""

from __future__ import annotations

import sys
from pathlib import Path

from posetglue.documents import emit_dot, parse_poset

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    out = ROOT / "out"
    out.mkdir(exist_ok=True)
    for path in sorted((ROOT / "fixtures").glob("*.poset")):
        P = parse_poset(path.read_text())
        target = out / (path.stem + ".dot")
        target.write_text(emit_dot(P))
        print(f"{path.name}: {len(P.nodes)} nodes -> out/{target.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
