"""JSON wire formats with error locations.

Rationals travel as strings (``"p/q"`` or ``"p"``); JSON integers are also
accepted. Floats are rejected everywhere. Parse errors raise
:class:`InputError` carrying a JSON-path style location such as
``$.layers[1].neurons[0].args[2][1]``.
"""

from __future__ import annotations

import json
from typing import Any

from .network import ArchitectureSpec, MaxExpression, MaxoutNeuron, NetworkError, SparseMaxoutNetwork
from .polytope import Polytope, PolytopeError, canonical_form
from .rational import Q, RatVector, RationalParseError
from .virtual import VirtualPolytope


class InputError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(path, exc.strerror or str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _get(data: Any, key: str, where: str) -> Any:
    if not isinstance(data, dict):
        raise InputError(where, f"expected an object, got {type(data).__name__}")
    if key not in data:
        raise InputError(where, f"missing key {key!r}")
    return data[key]


def _list(data: Any, where: str) -> list:
    if not isinstance(data, list):
        raise InputError(where, f"expected a list, got {type(data).__name__}")
    return data


def _int(data: Any, where: str) -> int:
    if isinstance(data, bool) or not isinstance(data, int):
        raise InputError(where, f"expected an integer, got {data!r}")
    return data


def parse_rational(data: Any, where: str = "$"):
    if isinstance(data, float):
        raise InputError(where, f"floats are not exact; write {data!r} as a \"p/q\" string")
    try:
        return Q(data)
    except RationalParseError as exc:
        raise InputError(where, str(exc)) from None


def parse_vector(data: Any, where: str = "$", n: int | None = None) -> RatVector:
    items = _list(data, where)
    out = tuple(parse_rational(x, f"{where}[{k}]") for k, x in enumerate(items))
    if n is not None and len(out) != n:
        raise InputError(where, f"expected length {n}, got {len(out)}")
    return out


def parse_point(data: Any, n: int | None = None) -> RatVector:
    if isinstance(data, dict):
        return parse_vector(_get(data, "x", "$"), "$.x", n)
    return parse_vector(data, "$", n)


def parse_network(data: Any) -> SparseMaxoutNetwork:
    n = _int(_get(data, "n", "$"), "$.n")
    layers_raw = _list(_get(data, "layers", "$"), "$.layers")
    d, r, layers = [], [], []
    width = n
    for k, L in enumerate(layers_raw):
        at = f"$.layers[{k}]"
        d.append(_int(_get(L, "d", at), f"{at}.d"))
        r.append(_int(_get(L, "r", at), f"{at}.r"))
        neurons = []
        for i, nr in enumerate(_list(_get(L, "neurons", at), f"{at}.neurons")):
            nat = f"{at}.neurons[{i}]"
            args = _list(_get(nr, "args", nat), f"{nat}.args")
            if not args:
                raise InputError(f"{nat}.args", "a neuron needs at least one argument")
            neurons.append(MaxoutNeuron(tuple(parse_vector(a, f"{nat}.args[{j}]", width) for j, a in enumerate(args))))
        if not neurons:
            raise InputError(f"{at}.neurons", "a hidden layer needs at least one neuron")
        layers.append(tuple(neurons))
        width = len(neurons)
    output = parse_vector(_get(data, "output", "$"), "$.output", width)
    try:
        spec = ArchitectureSpec(n, len(layers), tuple(d), tuple(r))
        return SparseMaxoutNetwork(spec, tuple(layers), output)
    except NetworkError as exc:
        raise InputError("$", str(exc)) from None


def parse_expression(data: Any) -> MaxExpression:
    n = _int(_get(data, "n", "$"), "$.n")
    terms = []
    for t, term in enumerate(_list(_get(data, "terms", "$"), "$.terms")):
        at = f"$.terms[{t}]"
        beta = parse_rational(_get(term, "beta", at), f"{at}.beta")
        args = _list(_get(term, "args", at), f"{at}.args")
        if not args:
            raise InputError(f"{at}.args", "a term needs at least one argument")
        terms.append((beta, tuple(parse_vector(a, f"{at}.args[{j}]", n) for j, a in enumerate(args))))
    return MaxExpression(n, tuple(terms))


def parse_polytope(data: Any, where: str = "$") -> Polytope:
    n = _int(_get(data, "n", where), f"{where}.n")
    pts = [parse_vector(p, f"{where}.points[{k}]", n) for k, p in enumerate(_list(_get(data, "points", where), f"{where}.points"))]
    try:
        return canonical_form(pts, n=n)
    except PolytopeError as exc:
        raise InputError(f"{where}.points", str(exc)) from None


def parse_virtual(data: Any) -> VirtualPolytope:
    """A ``{"positive", "negative"}`` pair, or a bare polytope."""
    if isinstance(data, dict) and "positive" in data:
        P = parse_polytope(data["positive"], "$.positive")
        Qn = parse_polytope(_get(data, "negative", "$"), "$.negative")
        if P.n != Qn.n:
            raise InputError("$", f"parts live in R^{P.n} and R^{Qn.n}")
        return VirtualPolytope(P, Qn)
    return VirtualPolytope(parse_polytope(data))
