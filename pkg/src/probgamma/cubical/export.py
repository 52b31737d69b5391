"""Cell-complex JSON for truncated cubical sets."""
from __future__ import annotations

from ..errors import ParseError
from .cset import TruncatedCubicalSet, degenerate_mask

FORMAT = "probgamma.cubical/1"


def export_complex(k: TruncatedCubicalSet) -> dict:
    levels = []
    for n in range(k.top_dim + 1):
        level = {
            "n": n,
            "size": k.sizes[n],
            "base": k.base[n],
            "degenerate": [bool(x) for x in degenerate_mask(k, n)],
        }
        if k.labels:
            level["labels"] = list(k.labels[n])
        levels.append(level)
    return {
        "format": FORMAT,
        "top_dim": k.top_dim,
        "dim_bound": k.dim_bound,
        "levels": levels,
        "faces": {f"{n},{i},{a}": list(t) for (n, i, a), t in sorted(k.face.items())},
        "degeneracies": {f"{n},{i}": list(t) for (n, i), t in sorted(k.degen.items())},
        "connections": {f"{n},{i}": list(t) for (n, i), t in sorted(k.conn.items())},
    }


def import_complex(data: dict) -> TruncatedCubicalSet:
    if data.get("format") != FORMAT:
        raise ParseError("unknown cell-complex format", location="format")
    try:
        levels = sorted(data["levels"], key=lambda l: l["n"])
        labels = tuple(tuple(l["labels"]) for l in levels) if levels and "labels" in levels[0] else None

        def keys(d):
            return {tuple(int(x) for x in key.split(",")): tuple(v) for key, v in d.items()}

        return TruncatedCubicalSet(
            int(data["top_dim"]),
            tuple(int(l["size"]) for l in levels),
            tuple(int(l["base"]) for l in levels),
            keys(data["faces"]), keys(data["degeneracies"]), keys(data["connections"]),
            data.get("dim_bound"), labels)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed cell complex: {exc}", location="complex") from exc
