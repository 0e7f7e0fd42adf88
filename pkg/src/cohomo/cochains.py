"""Inhomogeneous cochains ``G^n -> M`` stored as dense tables."""
from __future__ import annotations

import os
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .groups import GroupError, GroupTable, Subgroup
from .linalg import as_int_matrix
from .modules import GModule, ModuleError, ModuleMap

DEFAULT_MAX_TABLE = 10**6


class TableTooLarge(RuntimeError):
    """A cochain table would exceed the configured tuple bound."""


def max_table() -> int:
    raw = os.environ.get("COHOMO_MAX_TABLE")
    return int(raw) if raw else DEFAULT_MAX_TABLE


def check_table_size(group: GroupTable, n: int) -> int:
    size = group.order**n
    limit = max_table()
    if size > limit:
        raise TableTooLarge(f"|G|^{n} = {size} tuples exceeds the bound {limit} (COHOMO_MAX_TABLE)")
    return size


class Cochain:
    """An ``n``-cochain: one module element per ``n``-tuple of group elements.

    ``table[i]`` is the value at the ``i``-th tuple in lexicographic order of
    element indices.  Values are kept in normal form.
    """

    __slots__ = ("module", "degree", "table")

    def __init__(self, module: GModule, degree: int, table, normalize: bool = True):
        if degree < 0:
            raise ValueError("cochain degree must be nonnegative")
        size = check_table_size(module.group, degree)
        T = np.asarray(table, dtype=object).reshape(size, module.rank)
        if normalize:
            T = module.carrier.normal_form_rows(T)
        self.module = module
        self.degree = degree
        self.table = T

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "Cochain":
        size = check_table_size(module.group, degree)
        return cls(module, degree, np.zeros((size, module.rank), dtype=object), normalize=False)

    @classmethod
    def from_function(cls, module: GModule, degree: int, f: Callable[..., Sequence[int]]) -> "Cochain":
        digits = module.group.tuple_digits(degree)
        rows = [list(f(*map(int, t))) for t in digits]
        return cls(module, degree, np.array(rows, dtype=object).reshape(len(rows), module.rank))

    @classmethod
    def from_values(cls, module: GModule, degree: int, values: Mapping[tuple, Sequence[int]]) -> "Cochain":
        """Cochain that is zero except at the listed tuples of element indices."""
        c = cls.zero(module, degree)
        T = c.table
        for key, v in values.items():
            T[c.index(key)] = list(v)
        return cls(module, degree, T)

    @classmethod
    def from_vector(cls, module: GModule, degree: int, vec) -> "Cochain":
        return cls(module, degree, np.asarray(vec, dtype=object).reshape(-1, module.rank))

    # -- access -------------------------------------------------------------

    @property
    def group(self) -> GroupTable:
        return self.module.group

    def index(self, elems: Sequence[int]) -> int:
        elems = tuple(int(e) for e in elems)
        if len(elems) != self.degree:
            raise ValueError(f"expected {self.degree} arguments, got {len(elems)}")
        N = self.group.order
        out = 0
        for e in elems:
            if not 0 <= e < N:
                raise ValueError(f"element index {e} out of range")
            out = out * N + e
        return out

    def tuples(self) -> Iterator[tuple[int, ...]]:
        for t in self.group.tuple_digits(self.degree):
            yield tuple(int(x) for x in t)

    def __call__(self, *elems: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.table[self.index(elems)])

    def value(self, elems: Sequence[int]) -> tuple[int, ...]:
        return self(*elems)

    def at_words(self, *words: str) -> tuple[int, ...]:
        return self(*(self.group.parse_element(w) for w in words))

    def vector(self) -> np.ndarray:
        return self.table.reshape(-1).copy()

    def with_value(self, elems: Sequence[int], v: Sequence[int]) -> "Cochain":
        T = self.table.copy()
        T[self.index(elems)] = list(v)
        return Cochain(self.module, self.degree, T)

    # -- arithmetic ---------------------------------------------------------

    def _compatible(self, other: "Cochain") -> None:
        if not isinstance(other, Cochain):
            raise TypeError("expected a Cochain")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        if not self.module.same_as(other.module):
            raise ValueError("cochains live in different modules")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.module, self.degree, self.table + other.table)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.module, self.degree, self.table - other.table)

    def __neg__(self) -> "Cochain":
        return Cochain(self.module, self.degree, -self.table)

    def __rmul__(self, k: int) -> "Cochain":
        return Cochain(self.module, self.degree, int(k) * self.table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.module.same_as(other.module)
            and np.array_equal(self.table, other.table)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.table != 0)

    def differences(self, other: "Cochain") -> list[tuple[int, ...]]:
        """Tuples at which the two tables differ, in lexicographic order."""
        self._compatible(other)
        rows = np.flatnonzero(np.any(self.table != other.table, axis=1))
        digits = self.group.tuple_digits(self.degree)
        return [tuple(int(x) for x in digits[r]) for r in rows]

    def support(self) -> list[tuple[int, ...]]:
        rows = np.flatnonzero(np.any(self.table != 0, axis=1))
        digits = self.group.tuple_digits(self.degree)
        return [tuple(int(x) for x in digits[r]) for r in rows]

    def is_normalized(self) -> bool:
        """True if the value vanishes whenever some argument is the identity."""
        if self.degree == 0:
            return True
        digits = self.group.tuple_digits(self.degree)
        mask = np.any(digits == 0, axis=1)
        return not np.any(self.table[mask] != 0)

    def coboundary(self) -> "Cochain":
        return coboundary(self)

    def is_cocycle(self) -> bool:
        return coboundary(self).is_zero()

    def format_tuple(self, elems: Sequence[int]) -> str:
        return ",".join(self.group.word(e) for e in elems)

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, module={self.module!r}, nonzero={len(self.support())})"


def _merge_indices(group: GroupTable, digits: np.ndarray, i: int) -> np.ndarray:
    """Index of ``(g1, .., g_i g_{i+1}, .., g_{n+1})`` for each row of digits (``i`` from 1)."""
    merged = np.concatenate(
        [digits[:, : i - 1], group.mult[digits[:, i - 1], digits[:, i]][:, None], digits[:, i + 1:]], axis=1
    )
    return group.tuple_index(merged)


def coboundary(c: Cochain) -> Cochain:
    """Inhomogeneous bar differential.

    ``(dc)(g1..g_{n+1}) = g1 c(g2..) + sum_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{n+1} c(g1..g_n)``.
    """
    M, n, G = c.module, c.degree, c.group
    check_table_size(G, n + 1)
    digits = G.tuple_digits(n + 1)
    T = c.table
    A = M.actions
    tail = G.tuple_index(digits[:, 1:])
    head = G.tuple_index(digits[:, :-1])
    g1 = digits[:, 0]
    out = np.zeros((len(digits), M.rank), dtype=object)
    for g in range(G.order):
        rows = np.flatnonzero(g1 == g)
        out[rows] += T[tail[rows]] @ A[g].T
    for i in range(1, n + 1):
        out += (-1) ** i * T[_merge_indices(G, digits, i)]
    out += (-1) ** (n + 1) * T[head]
    return Cochain(M, n + 1, out)


def coboundary_matrix(M: GModule, n: int) -> np.ndarray:
    """Integer matrix of ``d: C^n -> C^{n+1}`` on generator coordinates.

    Rows index ``(tuple, generator)`` of ``C^{n+1}``, columns those of ``C^n``.
    """
    G = M.group
    R = check_table_size(G, n + 1)
    C = G.order**n
    k = M.rank
    if R * C * k * k > 6 * 10**7:
        raise TableTooLarge(f"dense differential {R * k} x {C * k} is too large")
    acts = M.actions
    big = max((abs(x) for x in acts.flat), default=0) >= 1 << 20
    dt = object if big else np.int64
    A = acts.astype(dt)
    D4 = np.zeros((R, C, k, k), dtype=dt)
    digits = G.tuple_digits(n + 1)
    rows = np.arange(R)
    eye = np.eye(k, dtype=dt)
    np.add.at(D4, (rows, G.tuple_index(digits[:, 1:])), A[digits[:, 0]])
    for i in range(1, n + 1):
        np.add.at(D4, (rows, _merge_indices(G, digits, i)), (-1) ** i * eye)
    np.add.at(D4, (rows, G.tuple_index(digits[:, :-1])), (-1) ** (n + 1) * eye)
    return D4.transpose(0, 2, 1, 3).reshape(R * k, C * k)


def push_forward(c: Cochain, f: ModuleMap) -> Cochain:
    """Apply a module map to every value."""
    if not f.source.same_as(c.module):
        raise ModuleError("map source differs from the cochain module")
    return Cochain(f.target, c.degree, c.table @ f.matrix.T)


def inflation(
    c: Cochain,
    group: GroupTable,
    proj: Sequence[int],
    target: GModule | None = None,
    via=None,
) -> Cochain:
    """Pull a cochain on a quotient ``Q`` back along ``proj: G -> Q``.

    Without ``target`` the module is inflated (``g`` acts as ``proj(g)``).
    With ``target`` (a module over ``G``) values are pushed through ``via``
    (a matrix or ``ModuleMap`` from ``c.module`` to ``target``), which must
    intertwine the two actions.
    """
    Q = c.group
    proj = np.asarray(proj, dtype=np.int64)
    if not group.is_homomorphism_to(Q, proj):
        raise GroupError("projection is not a group homomorphism")
    if set(proj.tolist()) != set(range(Q.order)):
        raise GroupError("projection is not surjective")
    M = c.module
    if target is None:
        target = M.inflate(group, proj)
        F = np.eye(M.rank, dtype=np.int64).astype(object)
    else:
        if target.group != group:
            raise ModuleError("target module lives over a different group")
        F = via.matrix if isinstance(via, ModuleMap) else as_int_matrix(via, M.rank)
        F = F.reshape(target.rank, M.rank)
        for r in M.carrier.relations:
            if not target.carrier.is_zero(F @ r):
                raise ModuleError("value map does not respect relations")
        for g in range(group.order):
            D = F @ M.actions[int(proj[g])] - target.actions[g] @ F
            if np.any(target.carrier.normal_form_rows(D.T) != 0):
                raise ModuleError(f"value map is not compatible at {group.word(g)}")
    check_table_size(group, c.degree)
    digits = group.tuple_digits(c.degree)
    src = Q.tuple_index(proj[digits]) if c.degree else np.zeros(1, dtype=np.int64)
    return Cochain(target, c.degree, c.table[src] @ F.T)


def restriction(c: Cochain, H) -> Cochain:
    """Restrict to a subgroup given as an index list or a ``Subgroup``."""
    sub = H if isinstance(H, Subgroup) and H.parent is c.group else Subgroup(c.group, H)
    M = c.module.restrict(sub)
    digits = sub.tuple_digits(c.degree)
    emb = np.asarray(sub.embedding, dtype=np.int64)
    src = c.group.tuple_index(emb[digits]) if c.degree else np.zeros(1, dtype=np.int64)
    return Cochain(M, c.degree, c.table[src], normalize=False)
