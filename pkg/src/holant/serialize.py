"""JSON forms for signatures, grids, transforms, gadgets, and graphs.

Complex scalars are [re, im] pairs throughout.  Serialization is
canonical (sorted keys, no whitespace), so objects round-trip to
byte-identical text.
"""

from __future__ import annotations

import json

import numpy as np

from .grids import QuantumGadget, SignatureGrid
from .homgraphs import SimpleGraph
from .tensors import MixedTensor, SymBoolSignature
from .transforms import HoloTransform


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads(text: str):
    return json.loads(text)


def _pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _unpair(p) -> complex:
    if not (isinstance(p, (list, tuple)) and len(p) == 2):
        raise ValueError(f"expected an [re, im] pair, got {p!r}")
    return complex(float(p[0]), float(p[1]))


def _need(obj: dict, key: str, what: str):
    if key not in obj:
        raise ValueError(f"{what} object is missing {key!r}")
    return obj[key]


# -- signatures ----------------------------------------------------------------


def signature_to_obj(sig) -> dict:
    if isinstance(sig, SymBoolSignature):
        return {
            "symbool": [_pair(v) for v in sig.values],
            "left": sig.left,
            "right": sig.right,
        }
    if isinstance(sig, MixedTensor):
        return {
            "q": sig.q,
            "left": sig.left,
            "right": sig.right,
            "entries": [_pair(v) for v in sig.entries],
        }
    raise TypeError(f"not a signature: {type(sig).__name__}")


def signature_from_obj(obj: dict):
    if not isinstance(obj, dict):
        raise ValueError("signature must be a JSON object")
    if "symbool" in obj:
        values = tuple(_unpair(p) for p in obj["symbool"])
        return SymBoolSignature(
            values, int(_need(obj, "left", "signature")), int(_need(obj, "right", "signature"))
        )
    q = int(_need(obj, "q", "signature"))
    left = int(_need(obj, "left", "signature"))
    right = int(_need(obj, "right", "signature"))
    entries = [_unpair(p) for p in _need(obj, "entries", "signature")]
    return MixedTensor(q, left, right, np.array(entries, dtype=np.complex128))


def sigset_to_obj(sigs: dict) -> dict:
    return {name: signature_to_obj(sig) for name, sig in sigs.items()}


def sigset_from_obj(obj: dict) -> dict:
    if not isinstance(obj, dict):
        raise ValueError("signature set must be a JSON object keyed by id")
    return {name: signature_from_obj(sub) for name, sub in obj.items()}


# -- grids and gadgets ------------------------------------------------------------


def grid_to_obj(grid: SignatureGrid) -> dict:
    return {
        "q": grid.q,
        "loops": grid.loops,
        "vertices": [{"sig": sid} for sid in grid.vertices],
        "edges": [list(e) for e in grid.edges],
        "left_dangling": [list(s) for s in grid.left_dangling],
        "right_dangling": [list(s) for s in grid.right_dangling],
    }


def grid_from_obj(obj: dict) -> SignatureGrid:
    if not isinstance(obj, dict):
        raise ValueError("grid must be a JSON object")
    vertices = tuple(
        str(_need(v, "sig", "vertex")) for v in _need(obj, "vertices", "grid")
    )
    return SignatureGrid(
        q=int(_need(obj, "q", "grid")),
        vertices=vertices,
        edges=tuple(tuple(int(x) for x in e) for e in obj.get("edges", [])),
        left_dangling=tuple(tuple(int(x) for x in s) for s in obj.get("left_dangling", [])),
        right_dangling=tuple(tuple(int(x) for x in s) for s in obj.get("right_dangling", [])),
        loops=int(obj.get("loops", 0)),
    )


def gadget_to_obj(gadget: QuantumGadget) -> dict:
    return {
        "terms": [
            {"coeff": _pair(coeff), "grid": grid_to_obj(grid)}
            for coeff, grid in gadget.terms
        ]
    }


def gadget_from_obj(obj: dict) -> QuantumGadget:
    terms = [
        (_unpair(_need(t, "coeff", "gadget term")), grid_from_obj(_need(t, "grid", "gadget term")))
        for t in _need(obj, "terms", "gadget")
    ]
    return QuantumGadget(terms)


# -- transforms and graphs ----------------------------------------------------------


def transform_to_obj(t: HoloTransform) -> dict:
    return {
        "q": t.q,
        "matrix": [[_pair(v) for v in row] for row in t.matrix],
    }


def transform_from_obj(obj: dict) -> HoloTransform:
    rows = _need(obj, "matrix", "transform")
    mat = np.array([[_unpair(v) for v in row] for row in rows], dtype=np.complex128)
    return HoloTransform(int(_need(obj, "q", "transform")), mat)


def matrix_to_obj(m) -> list:
    return [[_pair(v) for v in row] for row in np.asarray(m, dtype=np.complex128)]


def matrix_from_obj(rows) -> np.ndarray:
    return np.array([[_unpair(v) for v in row] for row in rows], dtype=np.complex128)


def graph_to_obj(g: SimpleGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_obj(obj: dict) -> SimpleGraph:
    return SimpleGraph(
        int(_need(obj, "n", "graph")),
        tuple(tuple(int(x) for x in e) for e in obj.get("edges", [])),
    )
