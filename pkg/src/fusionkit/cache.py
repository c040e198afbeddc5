"""On-disk cache for group-backed fusion systems.

Entries are JSON files named by the sha256 of the inputs that determine them
(generators, degree, prime, caps and an artifact version).  Writes go to a
temporary file in the same directory and are moved into place with
``os.replace``, so readers never see a partial entry.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InternalError
from .fusion import FusionSystem, _Class, conjugate_rows_by
from .perm import Perm
from .permgrp import PermGroup
from .plattice import DEFAULT_MAX_S_ORDER, PGroup, build_lattice

ARTIFACT_VERSION = "fusionkit-cache-1"


def cache_dir() -> Path:
    return Path(os.environ.get("FUSIONKIT_CACHE", "./.fusionkit-cache"))


def cache_key(kind: str, G: PermGroup, p: int, caps: dict) -> str:
    payload = {
        "kind": kind,
        "degree": G.degree,
        "gens": [list(g) for g in G.gens],
        "p": p,
        "caps": {k: caps[k] for k in sorted(caps)},
        "version": ARTIFACT_VERSION,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _path(key: str, root: Path | None) -> Path:
    root = cache_dir() if root is None else root
    return root / key[:2] / f"{key}.json"


def load(key: str, root: Path | None = None):
    path = _path(key, root)
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError):
        # unreadable entries are treated as misses and rewritten
        return None


def store(key: str, data, root: Path | None = None) -> Path:
    path = _path(key, root)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


# ---------------------------------------------------------------- fusion systems

def fusion_to_json(F: FusionSystem) -> dict:
    if F.gconj is None:
        raise InternalError("only group-backed systems are cached")
    S = F.S.group
    return {
        "degree": S.degree,
        "sylow": [list(g) for g in S.gens],
        "n_nodes": len(F.L),
        "node_class": [int(c) for c in F.node_class],
        "classes": [{"rep": int(cl.rep), "members": [int(m) for m in cl.members],
                     "aut": [list(a) for a in cl.aut.gens]} for cl in F._classes],
        "gconj": [list(g) for g in F.gconj],
    }


def fusion_from_json(data: dict, G: PermGroup, p: int,
                     max_s_order: int = DEFAULT_MAX_S_ORDER, name: str = "") -> FusionSystem:
    S = PermGroup(data["degree"], [Perm(g) for g in data["sylow"]])
    PG = PGroup(S, p, max_s_order)
    L = build_lattice(PG)
    if len(L) != data["n_nodes"]:
        raise InternalError("cached lattice does not match the rebuilt one")
    classes = []
    for c in data["classes"]:
        e = L.elements(c["rep"])
        classes.append(_Class(c["rep"], list(c["members"]),
                              PermGroup(len(e), [Perm(a) for a in c["aut"]])))
    node_class = np.asarray(data["node_class"], dtype=np.int64)
    gconj = [Perm(g) for g in data["gconj"]]
    tau = []
    for i in range(len(L)):
        R = classes[node_class[i]].rep
        t = PG.index.lookup(conjugate_rows_by(gconj[i], PG.rows[L.elements(R)]))
        if (t < 0).any():
            raise InternalError("cached conjugating element does not map into S")
        tau.append(t)
    return FusionSystem(L, classes, node_class, tau, kind="group", G=G, gconj=gconj, name=name)
