"""Canonical JSON for polynomials.

Coefficients are written as decimal strings (they outgrow 64 bits almost
immediately) and terms are sorted by graded lex order on the exponent
vector, so equal polynomials always serialize to identical bytes.
"""

from __future__ import annotations

import json
from typing import Any

from gmpy2 import mpq

from .ring import NVARS, VARS, Poly, graded_lex_key, pack, unpack


class DecodeError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")
        self.pos = pos


def to_obj(p: Poly) -> dict[str, Any]:
    terms = []
    for key in sorted(p.terms, key=graded_lex_key):
        c = p.terms[key]
        terms.append({"num": str(c.numerator), "den": str(c.denominator), "exps": list(unpack(key))})
    return {"vars": list(VARS), "terms": terms}


def encode(p: Poly) -> str:
    return json.dumps(to_obj(p), separators=(",", ":"))


def _int(text: Any, what: str, where: int) -> int:
    if not isinstance(text, str) or not text.lstrip("-").isdigit():
        raise DecodeError(f"term {where}: {what} must be a decimal string, got {text!r}")
    return int(text)


def from_obj(obj: Any) -> Poly:
    if not isinstance(obj, dict) or obj.get("vars") != list(VARS):
        raise DecodeError("missing or unexpected 'vars'")
    terms = obj.get("terms")
    if not isinstance(terms, list):
        raise DecodeError("'terms' must be a list")
    out: dict[int, mpq] = {}
    prev = None
    for i, t in enumerate(terms):
        if not isinstance(t, dict):
            raise DecodeError(f"term {i} is not an object")
        num = _int(t.get("num"), "num", i)
        den = _int(t.get("den"), "den", i)
        exps = t.get("exps")
        if den <= 0:
            raise DecodeError(f"term {i}: denominator must be positive")
        if num == 0:
            raise DecodeError(f"term {i}: zero coefficient")
        c = mpq(num, den)
        if c.denominator != den:
            raise DecodeError(f"term {i}: {num}/{den} is not in lowest terms")
        if (not isinstance(exps, list) or len(exps) != NVARS
                or any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exps)):
            raise DecodeError(f"term {i}: exps must be {NVARS} nonnegative integers")
        key = pack(exps)
        order = graded_lex_key(key)
        if prev is not None and order <= prev:
            raise DecodeError(f"term {i}: terms not strictly sorted")
        prev = order
        out[key] = c
    return Poly._raw(out)


def decode(text: str) -> Poly:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(exc.msg, exc.pos) from exc
    return from_obj(obj)
