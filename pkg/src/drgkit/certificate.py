"""JSON certificate assembly.

A certificate is a plain dict with ``"schema": 1``.  Sections appear only for
stages that ran; every section carries a ``"regime"`` entry naming the
arithmetic (exact integers, exact rationals, or float64 with the tolerances
used).  Only the ``"timings"`` section varies between identical runs.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import tempfile

import numpy as np

from . import __version__
from ._accel import backend_name
from .graph import Graph

SCHEMA = 1
EXACT = {"regime": "exact-integer"}


def graph_digest(g: Graph) -> str:
    h = hashlib.sha256()
    h.update(f"n={g.n};".encode())
    h.update(np.ascontiguousarray(g.edges(), dtype="<i8").tobytes())
    return "sha256:" + h.hexdigest()


def new_certificate(g: Graph, source: dict, command: str, options: dict | None = None) -> dict:
    return {
        "options": dict(options or {}),
        "schema": SCHEMA,
        "tool": {"name": "drgkit", "version": __version__, "kernels": backend_name()},
        "command": command,
        "input": dict(source, digest=graph_digest(g)),
        "timings": {},
    }


def graph_section(g: Graph, diameter: int | None, diameter_source: str) -> dict:
    deg = g.degrees()
    regular = bool(np.all(deg == deg[0])) if g.n else True
    return {"n": g.n, "edges": g.edge_count, "diameter": diameter,
            "diameter_source": diameter_source,
            "valency": int(deg[0]) if regular and g.n else None, **EXACT}


def krein_bitset(zero: np.ndarray) -> str:
    """Row-major (h, i, j) zero pattern as a string of '0'/'1' (1 = zero)."""
    return "".join("1" if zero[h, i, j] else "0"
                   for h, i, j in itertools.product(range(zero.shape[0]), repeat=3))


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    return str(o)


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2, default=_default) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".drgkit-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
