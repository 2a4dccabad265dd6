"""Bundled three-dimensional real Lie algebras, addressed by name."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .exactcore import Mat, Q
from .liealg import StructureTensor, almost_abelian

ALIASES = {
    "g3_1": "heisenberg",
    "h1": "heisenberg",
    "g3_6": "sl2",
    "g3_7": "so3",
    "e1_1": "e11",
    "abelian": "3g1",
}


@lru_cache(maxsize=None)
def _fixed() -> dict:
    text = resources.files("saletan").joinpath("data/atlas.json").read_text()
    return json.loads(text)


def names() -> list:
    return sorted(_fixed()) + ["g3_4:<k>", "g3_5:<k>"]


def _family(tag: str, k) -> StructureTensor:
    k = Q(k)
    if tag == "g3_4":
        if 0 < k <= 4:
            raise ValueError("g3.4 invariant must be <= 0 or > 4")
        tr, det = (0, -1) if k == 0 else (k, k)
    else:
        if not 0 <= k < 4:
            raise ValueError("g3.5 invariant must lie in [0, 4)")
        tr, det = (0, 1) if k == 0 else (k, k)
    # companion matrix: trace tr, determinant det, so tr^2/det = k
    return almost_abelian(Mat([[0, -det], [1, tr]]))


def load(name: str) -> StructureTensor:
    """Resolve an atlas name such as ``so3`` or ``g3_4:-1/2``.

    For the families g3_4 and g3_5 the suffix is the invariant k = tr^2/det.
    """
    name = name.strip()
    if name.startswith("atlas:"):
        name = name[len("atlas:"):]
    if ":" in name:
        tag, k = name.split(":", 1)
        if tag not in ("g3_4", "g3_5"):
            raise KeyError(f"unknown parametric atlas family {tag!r}")
        return _family(tag, k)
    name = ALIASES.get(name, name)
    try:
        return StructureTensor.from_json(_fixed()[name])
    except KeyError:
        raise KeyError(f"unknown atlas algebra {name!r}") from None


def standard_algebras() -> dict:
    """Named representatives used by the test and audit sweeps."""
    out = {name: load(name) for name in sorted(_fixed())}
    for spec in ("g3_4:-1", "g3_4:9/2", "g3_5:1", "g3_5:1/2"):
        out[spec] = load(spec)
    return out
