"""Reading and writing module elements in multiplicative notation.

Elements of a module are written either as an exponent vector over the
module generators (``[0,0,1,0]`` or ``0,0,1,0``) or as a product of
generator names and aliases with optional powers (``mu^-1``, ``alpha*gamma``).
``1`` is the identity and ``-1`` refers to the alias of that name, which the
symbol modules use for the sign coordinate.
"""
from __future__ import annotations

import re
from typing import Sequence

import numpy as np

from .modules import GModule

_VECTOR = re.compile(r"^\s*\[?\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]?\s*$")
_TOKEN = re.compile(r"^(.+?)(?:\^\(?(-?\d+)\)?)?$")


class NotationError(ValueError):
    pass


def parse_value(module: GModule, text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        raise NotationError("empty value")
    k = module.rank
    m = _VECTOR.match(text)
    if m and (text.startswith("[") or "," in text):
        parts = [int(x) for x in m.group(1).split(",")]
        if len(parts) != k:
            raise NotationError(f"vector {text!r} has {len(parts)} entries, module has {k} generators")
        return module.nf(parts)
    v = np.zeros(k, dtype=object)
    for token in text.split("*"):
        token = token.strip()
        if token in ("1", ""):
            if token == "":
                raise NotationError(f"malformed value {text!r}")
            continue
        if token in module.aliases:
            v = v + np.array(module.aliases[token], dtype=object)
            continue
        tm = _TOKEN.match(token)
        base, exp = tm.group(1), int(tm.group(2) or 1)
        if base in module.aliases:
            vec = module.aliases[base]
        elif base in module.names:
            vec = [1 if nm == base else 0 for nm in module.names]
        else:
            raise NotationError(f"unknown symbol {base!r} in value {text!r}")
        v = v + exp * np.array(vec, dtype=object)
    return module.nf(v)


def format_value(module: GModule, vec: Sequence[int]) -> str:
    v = module.nf(vec)
    if not any(v):
        return "1"
    for name, a in module.aliases.items():
        if module.nf(a) == v:
            return name
        if module.nf([-x for x in a]) == v:
            return f"{name}^-1"
    parts = []
    sign_alias = module.aliases.get("-1")
    rest = list(v)
    if sign_alias is not None:
        idx = [i for i, x in enumerate(module.nf(sign_alias)) if x]
        if len(idx) == 1 and rest[idx[0]]:
            parts.append("-1")
            rest[idx[0]] = 0
    for name, e in zip(module.names, rest):
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)
