"""Round-trip checks for the JSON forms."""

import numpy as np
import pytest

from holant.grids import QuantumGadget, SignatureGrid
from holant.homgraphs import SimpleGraph, cycle_graph
from holant.serialize import (
    dumps,
    gadget_from_obj,
    gadget_to_obj,
    graph_from_obj,
    graph_to_obj,
    grid_from_obj,
    grid_to_obj,
    signature_from_obj,
    signature_to_obj,
    sigset_from_obj,
    sigset_to_obj,
    transform_from_obj,
    transform_to_obj,
)
from holant.tensors import MixedTensor, SymBoolSignature, equality_signature
from holant.transforms import HoloTransform


def test_signature_byte_exact_round_trip():
    rng = np.random.default_rng(3)
    t = MixedTensor(3, 1, 2, rng.normal(size=27) + 1j * rng.normal(size=27))
    text = dumps(signature_to_obj(t))
    back = signature_from_obj(signature_to_obj(t))
    assert back.allclose(t, tol=0.0)
    assert dumps(signature_to_obj(back)) == text


def test_symbool_signature_preserved():
    s = SymBoolSignature((1.0, 0.5j, 0.0), 2, 0)
    obj = signature_to_obj(s)
    assert "symbool" in obj
    back = signature_from_obj(obj)
    assert isinstance(back, SymBoolSignature)
    assert back == s
    assert dumps(signature_to_obj(back)) == dumps(obj)


def test_signature_object_shape():
    obj = signature_to_obj(equality_signature(2, 1, 1))
    assert obj == {
        "q": 2,
        "left": 1,
        "right": 1,
        "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
    }


def test_signature_errors():
    with pytest.raises(ValueError, match="missing"):
        signature_from_obj({"q": 2, "left": 1, "right": 1})
    with pytest.raises(ValueError, match="pair"):
        signature_from_obj({"q": 1, "left": 1, "right": 0, "entries": [3.0]})


def test_sigset_round_trip():
    sigs = {"eq": equality_signature(2, 2, 0), "f": SymBoolSignature((0, 1, 0), 0, 2)}
    back = sigset_from_obj(sigset_to_obj(sigs))
    assert set(back) == {"eq", "f"}
    assert dumps(sigset_to_obj(back)) == dumps(sigset_to_obj(sigs))


def test_grid_round_trip():
    grid = SignatureGrid(
        q=2,
        vertices=("a", "b"),
        edges=((0, 1, 1, 1),),
        left_dangling=((1, 1),),
        right_dangling=(),
        loops=2,
    )
    obj = grid_to_obj(grid)
    back = grid_from_obj(obj)
    assert back == grid
    assert dumps(grid_to_obj(back)) == dumps(obj)
    assert obj["vertices"] == [{"sig": "a"}, {"sig": "b"}]


def test_gadget_round_trip():
    grid = SignatureGrid(q=2, vertices=("f",), edges=(), right_dangling=((0, 1), (0, 2)))
    gadget = QuantumGadget([(1.5 - 2.0j, grid), (0.25, grid)])
    obj = gadget_to_obj(gadget)
    back = gadget_from_obj(obj)
    assert back.terms[0][0] == 1.5 - 2.0j
    assert back.terms[1][1] == grid
    assert dumps(gadget_to_obj(back)) == dumps(obj)


def test_transform_round_trip():
    t = HoloTransform(2, np.array([[1.0, 2.0j], [0.0, 1.0]]))
    obj = transform_to_obj(t)
    back = transform_from_obj(obj)
    assert np.array_equal(back.matrix, t.matrix)
    assert dumps(transform_to_obj(back)) == dumps(obj)


def test_graph_round_trip():
    g = cycle_graph(5)
    obj = graph_to_obj(g)
    assert obj == {"n": 5, "edges": [[0, 1], [0, 4], [1, 2], [2, 3], [3, 4]]}
    assert graph_from_obj(obj) == g


def test_graph_from_obj_validates():
    with pytest.raises(ValueError, match="out of range"):
        graph_from_obj({"n": 2, "edges": [[0, 5]]})
    assert graph_from_obj({"n": 3}) == SimpleGraph(3, ())
