import json
import math

import numpy as np

from gauss_embed.gauss import GaussStatus
from gauss_embed.serialize import dumps, to_jsonable


def test_numpy_and_specials():
    data = {"a": np.float64(-0.0), "b": np.bool_(True), "c": np.arange(3), "d": float("nan"),
            "e": (1, 2), "f": GaussStatus.UNIQUE_PAIR, "g": np.int64(7), "h": math.inf}
    out = to_jsonable(data)
    assert out == {"a": 0.0, "b": True, "c": [0, 1, 2], "d": None, "e": [1, 2],
                   "f": "UNIQUE_PAIR", "g": 7, "h": None}
    assert math.copysign(1, out["a"]) == 1
    assert type(out["b"]) is bool and type(out["g"]) is int


def test_round_trip_floats():
    x = [0.1, 1 / 3, 2.048, 1e-300, -7.5e17]
    assert json.loads(dumps(x)) == x
    assert dumps({"S": -0.75}, indent=None) == '{"S": -0.75}'
