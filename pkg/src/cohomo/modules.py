"""Modules over finite groups, equivariant maps and short exact sequences."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .groups import GroupTable, Subgroup
from .linalg import FinAbGroup, Solver, as_int_matrix, kernel_mod


class ModuleError(ValueError):
    pass


class NotExactError(ModuleError):
    pass


def _reduce_columns(carrier: FinAbGroup, A: np.ndarray) -> np.ndarray:
    return carrier.normal_form_rows(A.T).T


class GModule:
    """A finitely presented abelian group with a left action of ``group``.

    ``actions[g]`` is an integer matrix acting on column vectors of generator
    coordinates.  Construction checks that each matrix preserves the relation
    lattice and that the action is a homomorphism modulo relations.
    """

    def __init__(
        self,
        group: GroupTable,
        carrier: FinAbGroup,
        actions: Sequence,
        names: Sequence[str] | None = None,
        check: bool = True,
    ):
        self.group = group
        self.carrier = carrier
        k = carrier.n_gen
        if len(actions) != group.order:
            raise ModuleError(f"need {group.order} action matrices, got {len(actions)}")
        self.actions = np.array(
            [as_int_matrix(a, k).reshape(k, k) if k else np.zeros((0, 0), dtype=object) for a in actions],
            dtype=object,
        ).reshape(group.order, k, k)
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(k))
        if len(self.names) != k:
            raise ModuleError("one name per carrier generator required")
        self.aliases: dict[str, tuple[int, ...]] = {}
        if check:
            self.check()

    @classmethod
    def from_generators(
        cls,
        group: GroupTable,
        carrier: FinAbGroup,
        gen_actions: Mapping[str, Sequence] | Sequence,
        names: Sequence[str] | None = None,
    ) -> "GModule":
        """Extend generator matrices to all elements (breadth first over words)."""
        k = carrier.n_gen
        if isinstance(gen_actions, Mapping):
            unknown = set(gen_actions) - set(group.generator_names)
            if unknown:
                raise ModuleError(f"unknown group generators {sorted(unknown)}")
            mats = [gen_actions.get(nm, np.eye(k, dtype=object)) for nm in group.generator_names]
        else:
            mats = list(gen_actions)
        mats = [as_int_matrix(m, k).reshape(k, k) for m in mats]
        acts: list = [None] * group.order
        acts[0] = np.eye(k, dtype=np.int64).astype(object)
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, A in zip(group.generators, mats):
                    y = int(group.mult[g, x])
                    if acts[y] is None:
                        acts[y] = A @ acts[x]
                        nxt.append(y)
            frontier = nxt
        if any(a is None for a in acts):
            raise ModuleError("group generators do not generate the group")
        acts = [_reduce_columns(carrier, a) for a in acts]
        return cls(group, carrier, acts, names)

    @classmethod
    def trivial(cls, group: GroupTable, carrier: FinAbGroup, names=None) -> "GModule":
        k = carrier.n_gen
        eye = np.eye(k, dtype=np.int64).astype(object)
        return cls(group, carrier, [eye] * group.order, names, check=False)

    @classmethod
    def regular(cls, group: GroupTable, modulus: int = 0) -> "GModule":
        """``Z[G]`` (or ``Z/m[G]``) with the left regular action."""
        n = group.order
        acts = []
        for g in range(n):
            P = np.zeros((n, n), dtype=object)
            for h in range(n):
                P[int(group.mult[g, h]), h] = 1
            acts.append(P)
        carrier = FinAbGroup.from_invariants([modulus] * n)
        return cls(group, carrier, acts, [f"[{w}]" for w in group.element_words], check=False)

    # -- checks -------------------------------------------------------------

    def check(self) -> None:
        c = self.carrier
        k = c.n_gen
        R = c.relations
        for g in range(self.group.order):
            A = self.actions[g]
            for r in R:
                if not c.is_zero(A @ r):
                    raise ModuleError(f"action of {self.group.word(g)} does not preserve relation {list(r)}")
        eye = np.eye(k, dtype=np.int64).astype(object)
        if k and np.any(_reduce_columns(c, self.actions[0] - eye) != 0):
            raise ModuleError("identity does not act trivially")
        for g in range(self.group.order):
            for h in range(self.group.order):
                gh = int(self.group.mult[g, h])
                D = self.actions[g] @ self.actions[h] - self.actions[gh]
                if k and np.any(_reduce_columns(c, D) != 0):
                    raise ModuleError(
                        f"action is not a homomorphism at ({self.group.word(g)}, {self.group.word(h)})"
                    )

    # -- element operations -------------------------------------------------

    @property
    def rank(self) -> int:
        return self.carrier.n_gen

    def nf(self, v) -> tuple[int, ...]:
        return self.carrier.normal_form(v)

    def act(self, g: int, v) -> tuple[int, ...]:
        return self.nf(self.actions[g] @ np.asarray(v, dtype=object))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def vector(self, **coords: int) -> tuple[int, ...]:
        v = [0] * self.rank
        for nm, x in coords.items():
            v[self.names.index(nm)] += x
        return self.nf(v)

    def same_as(self, other: "GModule") -> bool:
        if self is other:
            return True
        return (
            self.group == other.group
            and self.carrier == other.carrier
            and all(
                np.all(_reduce_columns(self.carrier, self.actions[g] - other.actions[g]) == 0)
                for g in range(self.group.order)
            )
        )

    def restrict(self, sub: Subgroup) -> "GModule":
        acts = [self.actions[g] for g in sub.embedding]
        out = GModule(sub, self.carrier, acts, self.names, check=False)
        out.aliases = dict(self.aliases)
        return out

    def inflate(self, group: GroupTable, proj: Sequence[int]) -> "GModule":
        acts = [self.actions[int(q)] for q in proj]
        out = GModule(group, self.carrier, acts, self.names, check=False)
        out.aliases = dict(self.aliases)
        return out

    def invariants_action_free(self) -> bool:
        return all(np.array_equal(self.actions[g], self.actions[0]) for g in range(self.group.order))

    def __repr__(self) -> str:
        return f"GModule(group={self.group!r}, carrier={self.carrier!r})"


class ModuleMap:
    """A homomorphism of modules given on generators (columns = images)."""

    def __init__(self, source: GModule, target: GModule, matrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = as_int_matrix(matrix, source.rank).reshape(target.rank, source.rank)
        if check:
            self.check()

    def check(self) -> None:
        s, t = self.source, self.target
        for r in s.carrier.relations:
            if not t.carrier.is_zero(self.matrix @ r):
                raise ModuleError(f"map does not respect relation {list(r)}")
        if s.group is t.group or s.group == t.group:
            for g in range(s.group.order):
                D = self.matrix @ s.actions[g] - t.actions[g] @ self.matrix
                if s.rank and np.any(_reduce_columns(t.carrier, D) != 0):
                    raise ModuleError(f"map is not equivariant for {s.group.word(g)}")

    def __call__(self, v) -> tuple[int, ...]:
        return self.target.nf(self.matrix @ np.asarray(v, dtype=object))

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def kernel_generators(self) -> np.ndarray:
        """Columns spanning ``{x : f(x) = 0}`` together with the source relations."""
        return kernel_mod(self.matrix, self.target.carrier)

    def preimage_solver(self) -> Solver:
        return Solver(np.hstack([self.matrix, self.target.carrier.relations.T]))


class ShortExactSeq:
    """``0 -> A --inj--> B --surj--> C -> 0`` with exactness verified on construction.

    ``section`` optionally lists, for each generator of ``C``, a preimage in
    ``B``; lifts then use it linearly on normal forms.
    """

    def __init__(self, inj: ModuleMap, surj: ModuleMap, section=None):
        if inj.target is not surj.source:
            raise ModuleError("the middle modules of the sequence differ")
        self.inj = inj
        self.surj = surj
        self.A, self.B, self.C = inj.source, inj.target, surj.target
        self.section = None
        if section is not None:
            S = as_int_matrix(section, self.B.rank)
            if S.shape[0] != self.C.rank:
                raise ModuleError("section needs one preimage per generator of the quotient")
            self.section = S.T.copy()  # B.rank x C.rank
        self.check()
        self._lift_solver = None
        self._pull_solver = None

    def check(self) -> None:
        A, B, C = self.A, self.B, self.C
        # injective: every x with inj(x) = 0 is already zero in A
        for col in self.inj.kernel_generators().T:
            if not A.carrier.is_zero(col[: A.rank]):
                raise NotExactError(f"first map is not injective (kernel contains {list(col)})")
        # surjective
        solver = self.surj.preimage_solver()
        for i in range(C.rank):
            e = [0] * C.rank
            e[i] = 1
            if solver.solve(e) is None:
                raise NotExactError(f"second map misses generator {C.names[i]}")
        # image(inj) inside kernel(surj)
        comp = self.surj.matrix @ self.inj.matrix
        for j in range(A.rank):
            if not C.carrier.is_zero(comp[:, j]):
                raise NotExactError(f"composite is nonzero on {A.names[j]}")
        # kernel(surj) inside image(inj)
        pull = self.inj.preimage_solver()
        for col in self.surj.kernel_generators().T:
            if pull.solve(col[: B.rank]) is None:
                raise NotExactError(f"kernel element {list(col[:B.rank])} is not in the image")
        if self.section is not None:
            for i in range(C.rank):
                e = [0] * C.rank
                e[i] = 1
                if self.surj(self.section[:, i]) != C.nf(e):
                    raise NotExactError(f"section does not lift generator {C.names[i]}")

    def lift(self, v) -> tuple[int, ...]:
        """A preimage in ``B`` of ``v`` in ``C`` (deterministic)."""
        v = self.C.nf(v)
        if self.section is not None:
            return self.B.nf(self.section @ np.asarray(v, dtype=object))
        if self._lift_solver is None:
            self._lift_solver = self.surj.preimage_solver()
        x = self._lift_solver.solve(v)
        if x is None:
            raise NotExactError(f"no preimage for {v}")
        return self.B.nf(x[: self.B.rank])

    def pull_back(self, v) -> tuple[int, ...] | None:
        """The element of ``A`` mapping to ``v``, or ``None`` if ``v`` is not in the image."""
        if self._pull_solver is None:
            self._pull_solver = self.inj.preimage_solver()
        x = self._pull_solver.solve(self.B.nf(v))
        if x is None:
            return None
        return self.A.nf(x[: self.A.rank])
