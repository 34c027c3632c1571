"""JSON documents for instances, results and packing/covering problems.

Instance document::

    {"cone": {"type": "psd", "d": 2},
     "elements": [[...], ...],      # one flattened element per entry
     "epsilon": 0.3,                # optional if given on the command line
     "target": [...]}               # optional, defaults to the element sum

Flattening: vectors as-is; symmetric matrices full and row-major (nested
lists are accepted and flattened); spectral-epigraph points as ``X``
row-major followed by ``t``; products concatenate their parts.
"""

from __future__ import annotations

import json

import numpy as np

from conesparse.barriers import cone_from_spec
from conesparse.cone_core import make_instance
from conesparse.errors import InputError
from conesparse.programs import make_pack_cover


def _flat(x):
    return np.asarray(x, dtype=float).ravel()


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def instance_from_doc(doc, eps=None):
    if not isinstance(doc, dict):
        raise InputError("instance document must be a JSON object")
    for key in ("cone", "elements"):
        if key not in doc:
            raise InputError(f"instance document lacks {key!r}")
    eps = doc.get("epsilon") if eps is None else eps
    if eps is None:
        raise InputError("no epsilon in the instance and none given on the command line")
    cone = cone_from_spec(doc["cone"])
    try:
        elements = [_flat(x) for x in doc["elements"]]
        target = None if doc.get("target") is None else _flat(doc["target"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot read elements: {exc}") from None
    return make_instance(cone, elements, float(eps), target)


def instance_to_doc(instance):
    return {
        "cone": instance.cone.to_spec(),
        "elements": [list(map(float, r)) for r in instance.elements],
        "epsilon": instance.epsilon,
        "target": list(map(float, instance.target)),
    }


def pack_cover_from_doc(doc):
    if not isinstance(doc, dict):
        raise InputError("packing/covering document must be a JSON object")
    cone = doc.get("cone", {"type": "orthant"})
    if cone.get("type") != "orthant":
        raise InputError("packing/covering programs are only supported over the orthant")
    try:
        inst = make_pack_cover(doc["a"], doc["b"], doc["c"])
    except KeyError as exc:
        raise InputError(f"packing/covering document lacks {exc}") from None
    parts = doc.get("c_parts")
    return inst, (None if parts is None else [_flat(p) for p in parts])
