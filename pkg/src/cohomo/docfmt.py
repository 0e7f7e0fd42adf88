"""Plain-text input documents for groups, modules, cochains and exact sequences.

A document is a list of sections, each a header line followed by
``key = value`` lines; ``#`` starts a comment::

    [group]
    generators = s, t
    orders = 2, 2

    [module Pic]
    generators = L1
    action.s = -1
    action.t = 1

    [cochain]
    module = Pic
    degree = 1
    s = L1
    s*t = L1

Matrices are rows separated by ``;`` with entries separated by ``,``.
Cochain entries are keyed by comma-separated element words; entries not
listed are zero.  Values use the notation of :mod:`cohomo.notation`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cochains import Cochain
from .groups import GroupError, GroupTable
from .linalg import FinAbGroup
from .modules import GModule, ModuleError, ModuleMap, ShortExactSeq
from .notation import NotationError, parse_value

_HEADER = re.compile(r"^\[\s*(group|module|cochain|ses)(?:\s+([^\]\s]+))?\s*\]$")

GROUP_KEYS = {"generators", "orders", "permutations", "elements", "table", "generator_elements"}
SES_KEYS = {"sub", "mid", "quot", "inj", "surj", "section"}
COCHAIN_KEYS = {"module", "degree", "value"}


class DocumentError(ValueError):
    """Malformed or inconsistent input document."""


@dataclass
class _Block:
    kind: str
    name: str | None
    line: int
    entries: dict[str, tuple[str, int]] = field(default_factory=dict)


@dataclass
class Document:
    group: GroupTable | None = None
    modules: dict[str, GModule] = field(default_factory=dict)
    cochain: Cochain | None = None
    cochain_module: str | None = None
    ses: ShortExactSeq | None = None

    def module(self, name: str | None = None) -> GModule:
        if not self.modules:
            raise DocumentError("document defines no module")
        if name is None:
            return next(iter(self.modules.values()))
        if name not in self.modules:
            raise DocumentError(f"unknown module {name!r}")
        return self.modules[name]


def _split_blocks(text: str) -> list[_Block]:
    blocks: list[_Block] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            blocks.append(_Block(m.group(1), m.group(2), no))
            continue
        if line.startswith("["):
            raise DocumentError(f"line {no}: unknown section header {line!r}")
        if not blocks:
            raise DocumentError(f"line {no}: entry outside any section")
        if "=" not in line:
            raise DocumentError(f"line {no}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        key = re.sub(r"\s+", "", key) if blocks[-1].kind == "cochain" else key
        if not key:
            raise DocumentError(f"line {no}: empty key")
        if key in blocks[-1].entries:
            raise DocumentError(f"line {no}: duplicate key {key!r}")
        blocks[-1].entries[key] = (value, no)
    return blocks


def _ints(text: str, no: int) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise DocumentError(f"line {no}: expected comma-separated integers, got {text!r}") from None


def _matrix(text: str, no: int, ncols: int | None = None) -> list[list[int]]:
    rows = [_ints(r, no) for r in text.split(";") if r.strip()]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise DocumentError(f"line {no}: rows of different lengths")
    if ncols is not None and rows and widths != {ncols}:
        raise DocumentError(f"line {no}: expected {ncols} columns")
    return rows


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _build_group(b: _Block) -> GroupTable:
    e = b.entries
    unknown = set(e) - GROUP_KEYS
    if unknown:
        k = sorted(unknown)[0]
        raise DocumentError(f"line {e[k][1]}: unknown key {k!r} in [group]")
    if "generators" not in e:
        raise DocumentError(f"line {b.line}: [group] needs 'generators'")
    names = _names(e["generators"][0])
    modes = [k for k in ("orders", "permutations", "table") if k in e]
    if len(modes) != 1:
        raise DocumentError(f"line {b.line}: [group] needs exactly one of orders, permutations, table")
    try:
        if modes[0] == "orders":
            orders = _ints(*e["orders"])
            return GroupTable.abelian(names, orders)
        if modes[0] == "permutations":
            perms = _matrix(*e["permutations"])
            if len(perms) != len(names):
                raise DocumentError(f"line {e['permutations'][1]}: one permutation per generator required")
            return GroupTable.from_permutations(names, perms)
        if "elements" not in e:
            raise DocumentError(f"line {b.line}: a multiplication table needs 'elements'")
        words = _names(e["elements"][0])
        mult = _matrix(e["table"][0], e["table"][1], len(words))
        if "generator_elements" in e:
            gen_words = _names(e["generator_elements"][0])
        else:
            gen_words = names
        if len(gen_words) != len(names):
            raise DocumentError(f"line {b.line}: one generator element per generator required")
        index = {w: i for i, w in enumerate(words)}
        missing = [w for w in gen_words if w not in index]
        if missing:
            raise DocumentError(f"line {b.line}: generator element {missing[0]!r} is not listed in elements")
        return GroupTable(names, [index[w] for w in gen_words], words, mult)
    except GroupError as exc:
        raise DocumentError(f"line {b.line}: {exc}") from None


def _build_module(b: _Block, G: GroupTable) -> GModule:
    e = b.entries
    if "generators" not in e:
        raise DocumentError(f"line {b.line}: [module] needs 'generators'")
    names = _names(e["generators"][0])
    k = len(names)
    rels = _matrix(*e["relations"], k) if "relations" in e else []
    acts = {}
    aliases = {}
    for key, (val, no) in e.items():
        if key in ("generators", "relations"):
            continue
        if key.startswith("action."):
            g = key[len("action."):]
            if g not in G.generator_names:
                raise DocumentError(f"line {no}: {g!r} is not a group generator")
            acts[g] = _matrix(val, no, k)
            if len(acts[g]) != k:
                raise DocumentError(f"line {no}: action matrix must be {k} x {k}")
        elif key.startswith("alias."):
            aliases[key[len("alias."):]] = _ints(val, no)
            if len(aliases[key[len("alias."):]]) != k:
                raise DocumentError(f"line {no}: alias must have {k} entries")
        else:
            raise DocumentError(f"line {no}: unknown key {key!r} in [module]")
    try:
        M = GModule.from_generators(G, FinAbGroup(k, rels), acts, names)
    except (ModuleError, ValueError) as exc:
        raise DocumentError(f"line {b.line}: {exc}") from None
    M.aliases = {a: M.nf(v) for a, v in aliases.items()}
    return M


def _build_cochain(b: _Block, doc: Document) -> tuple[Cochain, str]:
    e = b.entries
    if "degree" not in e:
        raise DocumentError(f"line {b.line}: [cochain] needs 'degree'")
    try:
        n = int(e["degree"][0])
    except ValueError:
        raise DocumentError(f"line {e['degree'][1]}: degree must be an integer") from None
    if n < 0:
        raise DocumentError(f"line {e['degree'][1]}: degree must be nonnegative")
    mname = e["module"][0] if "module" in e else None
    M = doc.module(mname)
    mname = mname or next(iter(doc.modules))
    G = M.group
    values = {}
    for key, (val, no) in e.items():
        if key in ("module", "degree"):
            continue
        if key == "value":
            if n != 0:
                raise DocumentError(f"line {no}: 'value' is only for degree 0")
            words = ()
        else:
            words = tuple(key.split(","))
            if len(words) != n:
                raise DocumentError(f"line {no}: key {key!r} has {len(words)} arguments, degree is {n}")
        try:
            elems = tuple(G.parse_element(w) for w in words)
            v = parse_value(M, val)
        except (GroupError, NotationError) as exc:
            raise DocumentError(f"line {no}: {exc}") from None
        if elems in values:
            raise DocumentError(f"line {no}: entry for ({key}) given twice")
        values[elems] = v
    try:
        return Cochain.from_values(M, n, values), mname
    except (ValueError, RuntimeError) as exc:
        raise DocumentError(f"line {b.line}: {exc}") from None


def _build_ses(b: _Block, doc: Document) -> ShortExactSeq:
    e = b.entries
    unknown = set(e) - SES_KEYS
    if unknown:
        k = sorted(unknown)[0]
        raise DocumentError(f"line {e[k][1]}: unknown key {k!r} in [ses]")
    for k in ("sub", "mid", "quot", "inj", "surj"):
        if k not in e:
            raise DocumentError(f"line {b.line}: [ses] needs {k!r}")
    A, B, C = (doc.module(e[k][0]) for k in ("sub", "mid", "quot"))
    try:
        inj = ModuleMap(A, B, _matrix(*e["inj"], A.rank))
        surj = ModuleMap(B, C, _matrix(*e["surj"], B.rank))
        sec = _matrix(*e["section"], B.rank) if "section" in e else None
        return ShortExactSeq(inj, surj, section=sec)
    except (ModuleError, ValueError) as exc:
        raise DocumentError(f"line {b.line}: {exc}") from None


def parse_document(text: str, base: Document | None = None) -> Document:
    """Parse ``text``; ``base`` supplies a group and modules defined elsewhere."""
    doc = Document()
    if base is not None:
        doc.group = base.group
        doc.modules = dict(base.modules)
    blocks = _split_blocks(text)
    groups = [b for b in blocks if b.kind == "group"]
    if len(groups) > 1:
        raise DocumentError(f"line {groups[1].line}: only one [group] section allowed")
    if groups:
        doc.group = _build_group(groups[0])
    for b in blocks:
        if b.kind == "module":
            if doc.group is None:
                raise DocumentError(f"line {b.line}: module defined before any group")
            name = b.name or f"M{len(doc.modules)}"
            if b.name is None and name in doc.modules:
                raise DocumentError(f"line {b.line}: module name {name!r} already used")
            doc.modules[name] = _build_module(b, doc.group)
    for kind in ("cochain", "ses"):
        bs = [b for b in blocks if b.kind == kind]
        if len(bs) > 1:
            raise DocumentError(f"line {bs[1].line}: only one [{kind}] section allowed")
        if bs and not doc.modules:
            raise DocumentError(f"line {bs[0].line}: [{kind}] needs a module")
        if bs and kind == "cochain":
            doc.cochain, doc.cochain_module = _build_cochain(bs[0], doc)
        elif bs:
            doc.ses = _build_ses(bs[0], doc)
    return doc


def read_document(paths: Iterable[str]) -> Document:
    doc = None
    for p in paths:
        try:
            with open(p, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DocumentError(f"cannot read {p}: {exc.strerror}") from None
        try:
            doc = parse_document(text, doc)
        except DocumentError as exc:
            raise DocumentError(f"{p}: {exc}") from None
    return doc or Document()


# -- serialization -----------------------------------------------------------

def _fmt_matrix(rows) -> str:
    return "; ".join(", ".join(str(int(x)) for x in r) for r in rows)


def dump_group(G: GroupTable) -> str:
    lines = [
        "[group]",
        f"generators = {', '.join(G.generator_names)}",
        f"generator_elements = {', '.join(G.word(g) for g in G.generators)}",
        f"elements = {', '.join(G.element_words)}",
        f"table = {_fmt_matrix(G.mult)}",
    ]
    return "\n".join(lines) + "\n"


def dump_module(M: GModule, name: str) -> str:
    lines = [f"[module {name}]", f"generators = {', '.join(M.names)}"]
    if M.carrier.relations.shape[0]:
        lines.append(f"relations = {_fmt_matrix(M.carrier.relations)}")
    for nm, g in zip(M.group.generator_names, M.group.generators):
        A = M.carrier.normal_form_rows(M.actions[g].T).T if M.rank else M.actions[g]
        lines.append(f"action.{nm} = {_fmt_matrix(A)}")
    for a, v in M.aliases.items():
        lines.append(f"alias.{a} = {', '.join(str(int(x)) for x in v)}")
    return "\n".join(lines) + "\n"


def dump_cochain(c: Cochain, module_name: str) -> str:
    lines = ["[cochain]", f"module = {module_name}", f"degree = {c.degree}"]
    for t in c.support():
        vec = "[" + ", ".join(str(int(x)) for x in c.value(t)) + "]"
        key = "value" if c.degree == 0 else c.format_tuple(t)
        lines.append(f"{key} = {vec}")
    return "\n".join(lines) + "\n"


def dump_document(
    group: GroupTable,
    modules: dict[str, GModule] | None = None,
    cochain: Cochain | None = None,
    cochain_module: str | None = None,
) -> str:
    parts = [dump_group(group)]
    for name, M in (modules or {}).items():
        parts.append(dump_module(M, name))
    if cochain is not None:
        if cochain_module is None:
            raise ValueError("name the module of the cochain")
        parts.append(dump_cochain(cochain, cochain_module))
    return "\n".join(parts)
