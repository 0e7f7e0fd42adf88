"""Finite groups as multiplication tables.

Elements are integers ``0..order-1``; element 0 is the identity.  Every group
carries generator names and a word for each element so tables can be printed
and parsed in the usual ``s*t`` notation.
"""
from __future__ import annotations

import itertools
import re
from functools import cached_property
from typing import Sequence

import numpy as np


class GroupError(ValueError):
    pass


def _power_word(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{k}"


class GroupTable:
    """A finite group with named generators and a fixed element enumeration."""

    def __init__(
        self,
        generator_names: Sequence[str],
        generators: Sequence[int],
        element_words: Sequence[str],
        mult,
        check: bool = True,
    ):
        self.generator_names = tuple(generator_names)
        self.generators = tuple(int(g) for g in generators)
        self.element_words = tuple(element_words)
        self.mult = np.asarray(mult, dtype=np.int64)
        n = len(self.element_words)
        if self.mult.shape != (n, n):
            raise GroupError("multiplication table does not match the element list")
        if len(self.generator_names) != len(self.generators):
            raise GroupError("one name per generator required")
        self.identity = 0
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.flatnonzero(self.mult[g] == 0)
            if hits.size != 1:
                raise GroupError(f"element {self.element_words[g]} has no unique inverse")
            inv[g] = hits[0]
        self.inverse = inv
        if check:
            self._check_axioms()

    def _check_axioms(self) -> None:
        M = self.mult
        n = self.order
        idx = np.arange(n)
        if not (np.array_equal(M[0], idx) and np.array_equal(M[:, 0], idx)):
            raise GroupError("element 0 is not the identity")
        for row in M:
            if len(set(row.tolist())) != n:
                raise GroupError("multiplication table is not a Latin square")
        # (gh)k == g(hk) for all triples
        if not np.array_equal(M[M[:, :, None], idx[None, None, :]], M[idx[:, None, None], M[None, :, :]]):
            raise GroupError("multiplication is not associative")
        if not np.all(M[idx, self.inverse] == 0):
            raise GroupError("inverse table is inconsistent")

    # -- construction -------------------------------------------------------

    @classmethod
    def abelian(cls, names: Sequence[str], orders: Sequence[int]) -> "GroupTable":
        """Direct product of cyclic groups; elements in lexicographic exponent order."""
        if len(names) != len(orders):
            raise GroupError("one order per generator required")
        if any(o < 1 for o in orders):
            raise GroupError("cyclic orders must be positive")
        exps = list(itertools.product(*[range(o) for o in orders]))
        index = {e: i for i, e in enumerate(exps)}
        words = []
        for e in exps:
            parts = [_power_word(nm, k) for nm, k in zip(names, e) if k]
            words.append("*".join(parts) if parts else "1")
        mult = np.zeros((len(exps), len(exps)), dtype=np.int64)
        for i, a in enumerate(exps):
            for j, b in enumerate(exps):
                mult[i, j] = index[tuple((x + y) % o for x, y, o in zip(a, b, orders))]
        gens = []
        for k in range(len(orders)):
            e = [0] * len(orders)
            e[k] = 1 % orders[k]
            gens.append(index[tuple(e)])
        return cls(names, gens, words, mult, check=False)

    @classmethod
    def cyclic(cls, n: int, name: str = "s") -> "GroupTable":
        return cls.abelian([name], [n])

    @classmethod
    def trivial(cls) -> "GroupTable":
        return cls([], [], ["1"], [[0]], check=False)

    @classmethod
    def from_permutations(cls, names: Sequence[str], perms: Sequence[Sequence[int]]) -> "GroupTable":
        """Group generated by permutations; elements in shortlex order of words.

        The product ``g*h`` is the permutation ``x -> g(h(x))``.
        """
        perms = [tuple(int(x) for x in p) for p in perms]
        if not perms:
            return cls.trivial()
        deg = len(perms[0])
        for p in perms:
            if len(p) != deg or sorted(p) != list(range(deg)):
                raise GroupError(f"not a permutation of 0..{deg - 1}: {p}")
        ident = tuple(range(deg))
        elems = [ident]
        words = ["1"]
        seen = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                base = words[seen[e]]
                for nm, p in zip(names, perms):
                    prod = tuple(e[p[x]] for x in range(deg))
                    if prod not in seen:
                        seen[prod] = len(elems)
                        elems.append(prod)
                        words.append(nm if base == "1" else f"{base}*{nm}")
                        nxt.append(prod)
            frontier = nxt
        n = len(elems)
        mult = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                mult[i, j] = seen[tuple(a[b[x]] for x in range(deg))]
        gens = [seen[p] for p in perms]
        return cls(names, gens, words, mult)

    @classmethod
    def from_table(cls, mult) -> "GroupTable":
        """Group from a bare multiplication table; every element is named ``g<i>``."""
        mult = np.asarray(mult, dtype=np.int64)
        n = mult.shape[0]
        words = ["1"] + [f"g{i}" for i in range(1, n)]
        return cls(words[1:], list(range(1, n)), words, mult)

    # -- basic queries ------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.element_words)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({list(self.generator_names)}, order={self.order})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, GroupTable):
            return NotImplemented
        return (
            self.generator_names == other.generator_names
            and self.element_words == other.element_words
            and np.array_equal(self.mult, other.mult)
        )

    def __hash__(self) -> int:
        return hash((self.generator_names, self.element_words))

    def mul(self, *elems: int) -> int:
        out = 0
        for g in elems:
            out = int(self.mult[out, g])
        return out

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = int(self.inverse[g]), -k
        out = 0
        for _ in range(k):
            out = int(self.mult[out, g])
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mult[x, g])
            k += 1
        return k

    def word(self, g: int) -> str:
        return self.element_words[g]

    @cached_property
    def _word_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.element_words)}

    def parse_element(self, text: str) -> int:
        """Element from a word such as ``s*t``, ``t*s``, ``s^3``, ``st`` or ``1``."""
        text = text.strip()
        if text in self._word_index:
            return self._word_index[text]
        out = 0
        for token in text.split("*"):
            token = token.strip()
            if not token:
                raise GroupError(f"malformed element word {text!r}")
            m = re.fullmatch(r"(.+?)(?:\^(-?\d+))?", token)
            base, exp = m.group(1), int(m.group(2) or 1)
            if base == "1":
                continue
            if base in self.generator_names:
                parts = [base]
            elif all(ch in self.generator_names for ch in base):
                parts = list(base)
                if exp != 1:
                    raise GroupError(f"ambiguous power in {token!r}")
            else:
                raise GroupError(f"unknown generator in {text!r}")
            for p in parts:
                g = self.generators[self.generator_names.index(p)]
                out = int(self.mult[out, self.power(g, exp)])
        return out

    def is_abelian(self) -> bool:
        return np.array_equal(self.mult, self.mult.T)

    def is_cyclic(self) -> bool:
        return self.cyclic_generator() is not None

    def cyclic_generator(self) -> int | None:
        n = self.order
        if n == 1:
            return 0
        for g in range(1, n):
            if self.element_order(g) == n:
                return g
        return None

    def is_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(int(e) for e in elems)
        if 0 not in s:
            return False
        return all(int(self.mult[a, b]) in s for a in s for b in s)

    def closure(self, elems: Sequence[int]) -> list[int]:
        """Subgroup generated by ``elems`` (sorted index list)."""
        out = {0}
        frontier = [0]
        gens = [int(e) for e in elems]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mult[x, g])
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(out)

    def subgroup(self, elems: Sequence[int]) -> "Subgroup":
        return Subgroup(self, elems)

    def is_homomorphism_to(self, target: "GroupTable", images: Sequence[int]) -> bool:
        f = np.asarray(images, dtype=np.int64)
        if f.shape != (self.order,):
            return False
        return bool(np.all(f[self.mult] == target.mult[f[:, None], f[None, :]]))

    # -- tuples of elements -------------------------------------------------

    def tuple_digits(self, n: int) -> np.ndarray:
        """All n-tuples of elements in lexicographic order, shape ``(order**n, n)``."""
        N = self.order
        if n == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices((N,) * n).reshape(n, -1).T
        return grids.astype(np.int64)

    def tuple_index(self, digits: np.ndarray) -> np.ndarray:
        N = self.order
        n = digits.shape[-1]
        weights = N ** np.arange(n - 1, -1, -1, dtype=np.int64)
        return digits @ weights if n else np.zeros(digits.shape[:-1], dtype=np.int64)


class Subgroup(GroupTable):
    """A subgroup, re-indexed so its own element 0 is the identity.

    ``embedding[i]`` is the index in the parent group of local element ``i``.
    """

    def __init__(self, parent: GroupTable, elems: Sequence[int]):
        elems = sorted(set(int(e) for e in elems))
        if not parent.is_subgroup(elems):
            raise GroupError("element list is not closed under multiplication")
        self.parent = parent
        self.embedding = tuple(elems)
        local = {g: i for i, g in enumerate(elems)}
        mult = [[local[int(parent.mult[a, b])] for b in elems] for a in elems]
        # generators: parent generators lying in H first, then greedy completion
        names, gens, span = [], [], [0]
        candidates = [(parent.generator_names[k], g) for k, g in enumerate(parent.generators) if g in local]
        candidates += [(parent.element_words[g], g) for g in elems if g != 0]
        for nm, g in candidates:
            if g in span:
                continue
            names.append(nm)
            gens.append(local[g])
            span = parent.closure([elems[i] for i in gens])
            if len(span) == len(elems):
                break
        words = [parent.element_words[g] for g in elems]
        super().__init__(names, gens, words, mult, check=False)

    def to_parent(self, i: int) -> int:
        return self.embedding[i]

    def from_parent(self, g: int) -> int:
        return self.embedding.index(g)
