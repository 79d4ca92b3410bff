"""JSON interchange.  Rationals are always strings ``"p/q"`` (or ``"inf"``),
elements are coordinate lists, and value tables follow the element order of
the group.  Every parser reports malformed input as a :class:`SchemaError`
carrying a JSON path.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import SchemaError, ValuedGroupError
from .groups import FiniteAbelianGroup, GroupHom, Subgroup, subgroup_generated
from .piecewise import Modulus, PiecewiseLinear
from .rational import INF, format_rational, parse_rational
from .values import ValuedGroup, validate_value


def _need(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def rational_from_json(s, path: str = "$"):
    if not isinstance(s, str):
        raise SchemaError(path, 'rationals are strings like "3/4"')
    try:
        return parse_rational(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"bad rational {s!r}") from exc


def rational_to_json(x) -> str:
    return format_rational(x)


def _int(v, path):
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(path, "expected an integer")
    return v


def element_from_json(G: FiniteAbelianGroup, v, path: str = "$"):
    if not isinstance(v, list):
        raise SchemaError(path, "elements are coordinate lists")
    coords = tuple(_int(c, f"{path}[{i}]") for i, c in enumerate(v))
    try:
        return G.check(coords)
    except ValuedGroupError as exc:
        raise SchemaError(path, str(exc)) from exc


# -- groups ----------------------------------------------------------------------


def group_to_json(G: FiniteAbelianGroup) -> dict:
    return {"factors": list(G.factors)}


def group_from_json(obj, path: str = "$") -> FiniteAbelianGroup:
    fac = _need(obj, "factors", path, list)
    fac = [_int(n, f"{path}.factors[{i}]") for i, n in enumerate(fac)]
    try:
        return FiniteAbelianGroup(fac)
    except (ValueError, ValuedGroupError) as exc:
        raise SchemaError(f"{path}.factors", str(exc)) from exc


def subgroup_to_json(K: Subgroup) -> dict:
    return {"generators": [list(g) for g in K.generators]}


def subgroup_from_json(G: FiniteAbelianGroup, obj, path: str = "$") -> Subgroup:
    gens = _need(obj, "generators", path, list)
    return subgroup_generated(G, [element_from_json(G, g, f"{path}.generators[{i}]") for i, g in enumerate(gens)])


def hom_to_json(h: GroupHom) -> dict:
    src = h.source.ambient if isinstance(h.source, Subgroup) else h.source
    tgt = h.target.ambient if isinstance(h.target, Subgroup) else h.target
    units = [tuple(1 if j == i else 0 for j in range(src.rank)) for i in range(src.rank)]
    return {
        "source": group_to_json(src),
        "target": group_to_json(tgt),
        "images": [list(h(u)) for u in units],
    }


def hom_from_json(obj, path: str = "$") -> GroupHom:
    src = group_from_json(_need(obj, "source", path), f"{path}.source")
    tgt = group_from_json(_need(obj, "target", path), f"{path}.target")
    ims = _need(obj, "images", path, list)
    if len(ims) != src.rank:
        raise SchemaError(f"{path}.images", f"expected {src.rank} images")
    images = [element_from_json(tgt, v, f"{path}.images[{i}]") for i, v in enumerate(ims)]
    try:
        return GroupHom.from_images(src, tgt, images)
    except ValuedGroupError as exc:
        raise SchemaError(f"{path}.images", str(exc)) from exc


# -- values ----------------------------------------------------------------------


def valued_group_to_json(v: ValuedGroup) -> dict:
    return {
        "group": group_to_json(v.group),
        "values": [format_rational(x) for x in v.table],
        "cap": format_rational(v.cap) if v.cap != INF else "inf",
        "N": v.exponent,
    }


def valued_group_from_json(obj, path: str = "$", validate: bool = True) -> ValuedGroup:
    G = group_from_json(_need(obj, "group", path), f"{path}.group")
    vals = _need(obj, "values", path, list)
    if len(vals) != G.order:
        raise SchemaError(f"{path}.values", f"expected {G.order} entries")
    table = tuple(rational_from_json(s, f"{path}.values[{i}]") for i, s in enumerate(vals))
    cap = rational_from_json(obj.get("cap", "inf"), f"{path}.cap")
    N = obj.get("N")
    if N is not None:
        N = _int(N, f"{path}.N")
    if not validate:
        return ValuedGroup(G, table, cap, N if N is not None else 0)
    try:
        return validate_value(G, table, cap, N)
    except ValuedGroupError as exc:
        raise SchemaError(f"{path}.values", str(exc)) from exc


def table_map_to_json(G: FiniteAbelianGroup, m: dict) -> list:
    return [[list(x), format_rational(v)] for x, v in sorted(m.items())]


def table_map_from_json(G: FiniteAbelianGroup, obj, path: str = "$") -> dict:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of [element, value] pairs")
    out = {}
    for i, pair in enumerate(obj):
        p = f"{path}[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(p, "expected [element, value]")
        out[element_from_json(G, pair[0], f"{p}[0]")] = rational_from_json(pair[1], f"{p}[1]")
    return out


# -- piecewise-linear functions ----------------------------------------------------


def pl_to_json(f: PiecewiseLinear) -> dict:
    return {"points": [[format_rational(x), format_rational(y)] for x, y in f.points], "tail": format_rational(f.tail_slope)}


def pl_from_json(obj, path: str = "$", modulus: bool = False) -> PiecewiseLinear:
    pts = _need(obj, "points", path, list)
    parsed = []
    for i, pair in enumerate(pts):
        p = f"{path}.points[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(p, "expected [x, y]")
        parsed.append((rational_from_json(pair[0], f"{p}[0]"), rational_from_json(pair[1], f"{p}[1]")))
    tail = rational_from_json(obj.get("tail", "0/1"), f"{path}.tail")
    try:
        f = PiecewiseLinear.from_points(parsed, tail)
        return Modulus(f.xs, f.ys, f.tail_slope) if modulus else f
    except (ValueError, ValuedGroupError) as exc:
        raise SchemaError(path, str(exc)) from exc


# -- metric spaces and step functions ---------------------------------------------


def metric_space_to_json(X) -> dict:
    return {"points": list(X.points), "d": [[format_rational(v) for v in row] for row in X.d]}


def metric_space_from_json(obj, path: str = "$"):
    from .free import FiniteMetricSpace

    pts = _need(obj, "points", path, list)
    rows = _need(obj, "d", path, list)
    if len(rows) != len(pts):
        raise SchemaError(f"{path}.d", "matrix size differs from the point count")
    d = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(pts):
            raise SchemaError(f"{path}.d[{i}]", "row has the wrong length")
        d.append(tuple(rational_from_json(s, f"{path}.d[{i}][{j}]") for j, s in enumerate(row)))
    try:
        return FiniteMetricSpace(tuple(pts), tuple(d))
    except (ValueError, ValuedGroupError) as exc:
        raise SchemaError(f"{path}.d", str(exc)) from exc


def step_function_to_json(u) -> dict:
    return {"host": valued_group_to_json(u.host), "pieces": [[format_rational(t), list(g)] for t, g in u.pieces]}


def step_function_from_json(obj, path: str = "$", host: ValuedGroup | None = None):
    from .pv import StepFunction

    if host is None:
        host = valued_group_from_json(_need(obj, "host", path), f"{path}.host")
    pieces = _need(obj, "pieces", path, list)
    out = []
    for i, pair in enumerate(pieces):
        p = f"{path}.pieces[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(p, "expected [t, element]")
        out.append((rational_from_json(pair[0], f"{p}[0]"), element_from_json(host.group, pair[1], f"{p}[1]")))
    try:
        return StepFunction(host, tuple(out))
    except ValuedGroupError as exc:
        raise SchemaError(f"{path}.pieces", str(exc)) from exc


# -- Katetov maps ---------------------------------------------------------------


def _coords_key(x) -> str:
    return ",".join(str(c) for c in x)


def _parse_key(G: FiniteAbelianGroup, key: str, path: str):
    body = key.strip().strip("[]()")
    try:
        coords = [int(c) for c in body.split(",")] if body else []
    except ValueError as exc:
        raise SchemaError(path, f"bad element key {key!r}") from exc
    return element_from_json(G, coords, path)


def katetov_to_json(f) -> dict:
    return {
        "domain": [list(a) for a in f.domain],
        "f": {_coords_key(a): format_rational(f(a)) for a in f.domain},
        "cap": format_rational(f.cap) if f.cap != INF else "inf",
    }


def katetov_from_json(host: ValuedGroup, obj, path: str = "$"):
    from .extension import KatetovMap

    G = host.group
    fobj = _need(obj, "f", path, dict)
    vals = {_parse_key(G, k, f"{path}.f[{k!r}]"): rational_from_json(v, f"{path}.f[{k!r}]") for k, v in fobj.items()}
    if "domain" in obj:
        dom = [element_from_json(G, a, f"{path}.domain[{i}]") for i, a in enumerate(_need(obj, "domain", path, list))]
        if set(dom) != set(vals):
            raise SchemaError(f"{path}.domain", "domain and the keys of f differ")
    cap = rational_from_json(obj.get("cap", "inf"), f"{path}.cap")
    try:
        return KatetovMap(host, vals, cap)
    except ValuedGroupError as exc:
        raise SchemaError(f"{path}.f", str(exc)) from exc


# -- files ---------------------------------------------------------------------------


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def loads(text: str, path: str = "$") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def load_file(filename: str) -> Any:
    with open(filename, encoding="utf-8") as fh:
        return loads(fh.read(), filename)


__all__ = [
    "dumps",
    "element_from_json",
    "group_from_json",
    "group_to_json",
    "hom_from_json",
    "katetov_from_json",
    "katetov_to_json",
    "hom_to_json",
    "load_file",
    "loads",
    "metric_space_from_json",
    "metric_space_to_json",
    "pl_from_json",
    "pl_to_json",
    "rational_from_json",
    "rational_to_json",
    "step_function_from_json",
    "step_function_to_json",
    "subgroup_from_json",
    "subgroup_to_json",
    "table_map_from_json",
    "table_map_to_json",
    "valued_group_from_json",
    "valued_group_to_json",
]
