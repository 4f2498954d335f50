"""
Canonical JSON for ring elements, twisted maps, Dieudonne spaces and expansions.

Canonical form is sorted keys, no whitespace, integers only, so
``dumps(to_json(from_json(x))) == x`` byte for byte on canonical input.
"""

from __future__ import annotations

import json

from .dieudonne import TYPES, DieudonneSpace
from .exactring import QuadElement, QuadExtField, SqZeroElement, SquareZeroRing, TruncWittRing
from .fjexp import FJExpansion, HermIndex
from .semilinear import TwistedMap
from .weights import WeightTag


class InputError(ValueError):
    """Malformed serialized data."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None


def load_file(path: str):
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _int(x, what="value") -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise InputError(f"{what} must be an integer, got {x!r}")
    return x


def _require(data, key, kind, where):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{where}: missing field {key!r}")
    val = data[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"{where}: field {key!r} has the wrong type")
    return val


# elements -----------------------------------------------------------------------------------


def elem_to_json(x):
    if isinstance(x, QuadElement):
        return [x.a, x.b]
    if isinstance(x, SqZeroElement):
        return {
            "c": elem_to_json(x.const),
            "lin": {t: elem_to_json(c) for t, c in x.linear_part().items()},
        }
    raise TypeError(f"cannot serialize {type(x).__name__}")


def elem_from_json(data, ring):
    if isinstance(ring, SquareZeroRing):
        if not isinstance(data, dict):
            return ring(elem_from_json(data, ring.base))
        c = elem_from_json(_require(data, "c", None, "element"), ring.base)
        lin = _require(data, "lin", dict, "element")
        unknown = set(lin) - set(ring.params)
        if unknown:
            raise InputError(f"unknown parameters {sorted(unknown)}")
        return ring(c, {t: elem_from_json(v, ring.base) for t, v in lin.items()})
    if isinstance(data, bool):
        raise InputError("booleans are not ring elements")
    if isinstance(data, int):
        return ring(data)
    if not isinstance(data, list) or len(data) != 2:
        raise InputError(f"an F_(p^2) element is a pair [a, b], got {data!r}")
    return ring(_int(data[0], "coefficient"), _int(data[1], "coefficient"))


# twisted maps -----------------------------------------------------------------------------------


def twisted_to_json(A: TwistedMap) -> dict:
    return {
        "twist": A.twist,
        "rows": A.target_rank,
        "cols": A.source_rank,
        "entries": [[elem_to_json(x) for x in r] for r in A.matrix],
    }


def twisted_from_json(data, ring) -> TwistedMap:
    rows = _int(_require(data, "rows", int, "map"), "rows")
    cols = _int(_require(data, "cols", int, "map"), "cols")
    entries = _require(data, "entries", list, "map")
    if len(entries) != rows or any(not isinstance(r, list) or len(r) != cols for r in entries):
        raise InputError("map entries do not match rows x cols")
    M = [[elem_from_json(x, ring) for x in r] for r in entries]
    return TwistedMap(ring, M, _int(_require(data, "twist", int, "map"), "twist"), cols)


# Dieudonne spaces ---------------------------------------------------------------------------------


def _sparse_cols(M, n) -> list:
    """Per source index j: {target index: coeff} for the nonzero M[i][j]."""
    return [{str(i): elem_to_json(M[i][j]) for i in range(n) if M[i][j]} for j in range(n)]


def _dense_from_sparse(data, n, k, label) -> list:
    if not isinstance(data, list) or len(data) != n:
        raise InputError(f"{label} must list one sparse column per basis vector")
    M = [[k.zero] * n for _ in range(n)]
    for j, col in enumerate(data):
        if not isinstance(col, dict):
            raise InputError(f"{label}[{j}] must be an object")
        for i, v in col.items():
            try:
                ii = int(i)
            except ValueError:
                raise InputError(f"{label}[{j}] has a non-integer key {i!r}") from None
            if not 0 <= ii < n:
                raise InputError(f"{label}[{j}] refers to index {ii} out of range")
            M[ii][j] = elem_from_json(v, k)
    return M


def space_to_json(D: DieudonneSpace) -> dict:
    n = D.dim
    P = D.P_rows()
    return {
        "p": D.p,
        "basis": [{"name": s, "type": t} for s, t in zip(D.names, D.types)],
        "F": _sparse_cols(D.F_rows(), n),
        "V": _sparse_cols(D.V_rows(), n),
        # row i: {j: <b_i, b_j>}
        "pairing": _sparse_cols([list(r) for r in zip(*P)], n),
    }


def space_from_json(data) -> DieudonneSpace:
    p = _int(_require(data, "p", int, "space"), "p")
    try:
        k = QuadExtField(p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    basis = _require(data, "basis", list, "space")
    names, types = [], []
    for b in basis:
        names.append(_require(b, "name", str, "basis entry"))
        t = _require(b, "type", str, "basis entry")
        if t not in TYPES:
            raise InputError(f"basis type must be one of {TYPES}, got {t!r}")
        types.append(t)
    n = len(names)
    F = _dense_from_sparse(_require(data, "F", list, "space"), n, k, "F")
    V = _dense_from_sparse(_require(data, "V", list, "space"), n, k, "V")
    Pt = _dense_from_sparse(_require(data, "pairing", list, "space"), n, k, "pairing")
    P = [list(r) for r in zip(*Pt)]
    try:
        return DieudonneSpace(k, tuple(names), tuple(types), TwistedMap(k, F, 1), TwistedMap(k, V, 1), P)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# expansions --------------------------------------------------------------------------------------


def fj_to_json(f: FJExpansion) -> dict:
    w = None if f.weight is None else [f.weight.k, f.weight.theta]
    return {
        "p": f.ring.p,
        "s": f.ring.s,
        "m": f.m,
        "trunc": f.trunc,
        "weight": w,
        "terms": {h.key(): [elem_to_json(x) for x in a] for h, a in f.terms.items()},
    }


def fj_from_json(data) -> FJExpansion:
    p = _int(_require(data, "p", int, "expansion"), "p")
    s = _int(data.get("s", 1), "s")
    m = _int(data.get("m", 1), "m")
    if m < 1:
        raise InputError("m must be >= 1")
    trunc = data.get("trunc")
    if trunc is not None:
        trunc = _int(trunc, "trunc")
        if trunc < 0:
            raise InputError("trunc must be >= 0")
    try:
        ring = TruncWittRing(p, s)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    w = data.get("weight")
    weight, theta = None, 0
    if w is not None:
        if not isinstance(w, list) or len(w) != 2:
            raise InputError("weight must be [k, theta_count] or null")
        k = None if w[0] is None else _int(w[0], "weight")
        theta = _int(w[1], "theta count")
        weight = WeightTag(k, theta)
    terms_in = _require(data, "terms", dict, "expansion")
    terms = {}
    rank = None
    for key, coeffs in terms_in.items():
        try:
            h = HermIndex.from_key(key, m)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if not isinstance(coeffs, list) or not coeffs:
            raise InputError(f"coefficient at {key!r} must be a nonempty list")
        a = tuple(elem_from_json(c, ring) for c in coeffs)
        if rank is not None and len(a) != rank:
            raise InputError("coefficient vectors have different lengths")
        rank = len(a)
        terms[h] = a
    rank = rank or 1
    block = m ** (2 * theta)
    if rank % block:
        raise InputError(f"coefficient length {rank} is incompatible with {theta} theta factors")
    try:
        return FJExpansion(ring, m, terms, trunc, weight, rank // block, theta)
    except ValueError as exc:
        raise InputError(str(exc)) from None
