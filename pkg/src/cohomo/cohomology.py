"""Cohomology groups, coboundary witnesses, connecting maps and residues."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cochains import Cochain, coboundary, coboundary_matrix, push_forward
from .groups import GroupError, GroupTable, Subgroup
from .linalg import FinAbGroup, Solver, Subquotient, as_int_matrix, kernel_mod
from .modules import GModule, ModuleError, ModuleMap, NotExactError, ShortExactSeq


class NotACocycle(ValueError):
    """Raised when an operation that needs a cocycle receives something else."""


class ResidueError(ValueError):
    pass


def _cache(M: GModule) -> dict:
    return M.__dict__.setdefault("_cohomology_cache", {})


def _cochain_carrier(M: GModule, n: int) -> FinAbGroup:
    return FinAbGroup.block_sum(M.carrier, M.group.order**n)


def _require_cocycle(z: Cochain) -> None:
    dz = coboundary(z)
    if not dz.is_zero():
        bad = dz.support()[0]
        raise NotACocycle(f"not a cocycle: d(z) is nonzero at ({dz.format_tuple(bad)})")


@dataclass
class CohomologyResult:
    """``H^n(G, M)`` with explicit generators and a decision procedure."""

    module: GModule
    degree: int
    group_invariants: FinAbGroup
    generator_cocycles: list[Cochain]
    _sq: Subquotient = field(repr=False)

    def decide(self, z: Cochain) -> tuple[int, ...]:
        """Coordinates of the class of ``z`` with respect to ``generator_cocycles``."""
        if z.degree != self.degree or not z.module.same_as(self.module):
            raise ValueError("cocycle does not match this cohomology group")
        cls = self._sq.classify(z.vector())
        if cls is None:
            raise NotACocycle("cochain is not a cocycle")
        return tuple(int(x) for x in cls)

    @property
    def invariants(self) -> list[int]:
        return self.group_invariants.invariants()

    def is_zero(self) -> bool:
        return self.group_invariants.is_trivial()

    def __str__(self) -> str:
        return str(self.group_invariants)


def cohomology(M: GModule, n: int) -> CohomologyResult:
    """``H^n(G, M)`` from the full inhomogeneous bar complex."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    key = ("H", n)
    cache = _cache(M)
    if key in cache:
        return cache[key]
    N = M.group.order
    k = M.rank
    Dn = coboundary_matrix(M, n)
    Z = kernel_mod(Dn, _cochain_carrier(M, n + 1))
    if n == 0:
        B = np.zeros((k, 0), dtype=object)
    else:
        B = coboundary_matrix(M, n - 1)
    sq = Subquotient(_cochain_carrier(M, n), Z, B)
    gens = [Cochain.from_vector(M, n, sq.generators[:, i]) for i in range(sq.generators.shape[1])]
    res = CohomologyResult(M, n, sq.group, gens, sq)
    cache[key] = res
    return res


def _boundary_solver(M: GModule, n: int) -> Solver:
    """Solver for ``d w = z`` with ``w`` in ``C^{n-1}`` modulo relations of ``C^n``."""
    key = ("B", n)
    cache = _cache(M)
    if key not in cache:
        D = coboundary_matrix(M, n - 1)
        R = _cochain_carrier(M, n).relations.T
        cache[key] = Solver(np.hstack([D, R]) if R.shape[1] else D)
    return cache[key]


def is_coboundary(z: Cochain) -> Cochain | None:
    """A cochain ``w`` with ``d w = z``, or ``None`` if the class of ``z`` is nonzero."""
    if z.degree == 0:
        raise ValueError("degree-0 cocycles are never coboundaries of anything")
    _require_cocycle(z)
    M = z.module
    x = _boundary_solver(M, z.degree).solve(z.vector())
    if x is None:
        return None
    w = Cochain.from_vector(M, z.degree - 1, x[: M.group.order ** (z.degree - 1) * M.rank])
    assert coboundary(w) == z
    return w


def classes_equal(z1: Cochain, z2: Cochain) -> bool:
    z1._compatible(z2)
    _require_cocycle(z1)
    _require_cocycle(z2)
    if z1 == z2:
        return True
    return is_coboundary(z1 - z2) is not None


def _pull_back_table(ses: ShortExactSeq, T: np.ndarray) -> np.ndarray:
    """Rows of ``T`` (values in ``B``) expressed in ``A``; fails if any is outside the image."""
    solver = ses.inj.preimage_solver()
    X, ok = solver.solve_many(T.T)
    if not ok.all():
        raise NotExactError(f"value {list(T[int(np.flatnonzero(~ok)[0])])} is not in the image of the first map")
    return X[: ses.A.rank].T


def lift_cochain(ses: ShortExactSeq, z: Cochain) -> Cochain:
    """Lift every value of ``z`` through the surjection (section first, else solving)."""
    if not z.module.same_as(ses.C):
        raise ModuleError("cochain is not valued in the quotient module")
    if ses.section is not None:
        T = z.table @ ses.section.T
    else:
        X, ok = ses.surj.preimage_solver().solve_many(z.table.T)
        if not ok.all():
            raise NotExactError("lift failed although the map is surjective")
        T = X[: ses.B.rank].T
    return Cochain(ses.B, z.degree, T)


def connecting(ses: ShortExactSeq, z: Cochain, lift: Cochain | None = None) -> Cochain:
    """Connecting map ``H^n(G, C) -> H^{n+1}(G, A)`` on cochains: lift, differentiate, pull back."""
    _require_cocycle(z)
    if lift is None:
        lift = lift_cochain(ses, z)
    elif push_forward(lift, ses.surj) != z:
        raise ValueError("supplied lift does not map onto the cocycle")
    db = coboundary(lift)
    out = Cochain(ses.A, z.degree + 1, _pull_back_table(ses, db.table))
    return out


def descend(ses: ShortExactSeq, z: Cochain, lift: Cochain) -> Cochain:
    """``z - d(lift)`` re-expressed in ``A``.

    Requires ``surj(z) = d(surj(lift))``; this is checked entrywise and the
    first failing tuple is reported.
    """
    _require_cocycle(z)
    if not z.module.same_as(ses.B) or not lift.module.same_as(ses.B):
        raise ModuleError("both cochains must be valued in the middle module")
    if lift.degree != z.degree - 1:
        raise ValueError("lift must have degree one less than the cocycle")
    lhs = push_forward(z, ses.surj)
    rhs = coboundary(push_forward(lift, ses.surj))
    bad = lhs.differences(rhs)
    if bad:
        t = bad[0]
        raise ValueError(
            f"surj(z) != d(surj(lift)) at ({z.format_tuple(t)}): {lhs.value(t)} vs {rhs.value(t)}"
        )
    diff = z - coboundary(lift)
    out = Cochain(ses.A, z.degree, _pull_back_table(ses, diff.table))
    _require_cocycle(out)
    return out


def tate_cyclic(G: GroupTable, M: GModule, n: int, generator: int | None = None) -> FinAbGroup:
    """Tate cohomology of a cyclic group from the periodic resolution."""
    if M.group != G:
        raise ModuleError("module is not over this group")
    sigma = G.cyclic_generator() if generator is None else int(generator)
    if sigma is None or G.element_order(sigma) != G.order:
        raise GroupError("group is not cyclic (or the element does not generate it)")
    k = M.rank
    eye = np.eye(k, dtype=np.int64).astype(object)
    A = M.actions[sigma]
    T = A - eye
    Nm = np.zeros((k, k), dtype=object)
    P = eye
    for _ in range(G.order):
        Nm = Nm + P
        P = A @ P
    if n % 2 == 0:
        ker, im = T, Nm
    else:
        ker, im = Nm, T
    K = kernel_mod(ker, M.carrier)
    return Subquotient(M.carrier, K, im).group


class HomModule(GModule):
    """``Hom(I, M)`` for a finite abelian ``I``, presented through a cyclic decomposition.

    ``basis[i]`` is an element of ``I`` of order ``orders[i]`` and the columns of
    ``blocks[i]`` generate the ``orders[i]``-torsion of ``M``; a homomorphism
    is determined by its values on the basis.
    """

    def coordinates(self, values) -> tuple[int, ...]:
        """Coordinates of the homomorphism sending ``basis[i]`` to ``values[i]``."""
        out: list[int] = []
        for v, K, solver in zip(values, self.blocks, self._solvers):
            x = solver.solve(list(v))
            if x is None:
                raise ResidueError(f"value {tuple(v)} is not killed by the order of the basis element")
            out.extend(int(c) for c in x[: K.shape[1]])
        return self.nf(out)

    def evaluate(self, y, h: int) -> tuple[int, ...]:
        """Value at ``h`` (an element of ``I``, written in its own indices)."""
        exps = self.exponents[h]
        v = np.zeros(self._M.rank, dtype=object)
        y = list(y)
        pos = 0
        for e, K in zip(exps, self.blocks):
            r = K.shape[1]
            v = v + e * (K @ np.array(y[pos:pos + r], dtype=object)) if r else v
            pos += r
        return self._M.nf(v)


def _cyclic_decomposition(I: GroupTable) -> tuple[list[int], list[int], dict[int, tuple[int, ...]]]:
    if not I.is_abelian():
        raise GroupError("Hom(I, M) needs an abelian I")
    if I.order == 1:
        return [], [], {0: ()}
    basis: list[int] = []
    span = {0: ()}
    for g in sorted(range(1, I.order), key=lambda x: -I.element_order(x)):
        if g in span:
            continue
        d = I.element_order(g)
        powers = [I.power(g, e) for e in range(d)]
        if any(p in span for p in powers[1:]):
            continue
        new = {}
        for x, ex in span.items():
            for e, p in enumerate(powers):
                new[int(I.mult[x, p])] = ex + (e,)
        for x in list(span):
            span[x] = span[x] + (0,)
        span = new
        basis.append(g)
        if len(span) == I.order:
            break
    if len(span) != I.order:
        raise GroupError("could not decompose I into cyclic factors")
    return basis, [I.element_order(g) for g in basis], span


def hom_module(I: GroupTable, M: GModule, Gbar: GroupTable | None = None) -> HomModule:
    """``Hom(I, M)`` as a module over ``Gbar``.

    ``Gbar`` is ``M.group`` or a subgroup of it; its action on homomorphisms is
    ``(g f)(h) = g f(h)``, which is the induced action whenever ``I`` is central.
    If ``I`` is a subgroup of ``M.group`` it must act trivially on ``M``.
    """
    if isinstance(I, Subgroup) and I.parent == M.group:
        for h in I.embedding:
            D = M.actions[h] - M.actions[0]
            if M.rank and np.any(M.carrier.normal_form_rows(D.T) != 0):
                raise ModuleError(f"{M.group.word(h)} acts nontrivially on the module")
    if Gbar is None:
        Gbar = M.group
    if Gbar == M.group:
        acts = list(M.actions)
    elif isinstance(Gbar, Subgroup) and Gbar.parent == M.group:
        acts = [M.actions[g] for g in Gbar.embedding]
    else:
        raise GroupError("Gbar must be the module's group or one of its subgroups")
    basis, orders, exps = _cyclic_decomposition(I)
    k = M.rank
    blocks = []
    for d in orders:
        K = kernel_mod(d * np.eye(k, dtype=np.int64).astype(object), M.carrier) if k else np.zeros((0, 0), dtype=object)
        blocks.append(K)
    cols = np.hstack(blocks) if blocks else np.zeros((k, 0), dtype=object)
    r = cols.shape[1]
    R = M.carrier.relations.T
    # relations among the new generators: blockwise kernel of K mod relations of M
    rel_rows = []
    offsets = []
    pos = 0
    for K in blocks:
        offsets.append(pos)
        for col in kernel_mod(K, M.carrier).T:
            row = [0] * r
            row[pos:pos + K.shape[1]] = [int(x) for x in col]
            rel_rows.append(row)
        pos += K.shape[1]
    carrier = FinAbGroup(r, rel_rows)
    solvers = [Solver(np.hstack([K, R]) if R.shape[1] else K) for K in blocks]
    new_acts = []
    for A in acts:
        X = np.zeros((r, r), dtype=object)
        for i, K in enumerate(blocks):
            Y, ok = solvers[i].solve_many(A @ K)
            if not ok.all():
                raise ModuleError("action does not preserve torsion (internal error)")
            X[offsets[i]:offsets[i] + K.shape[1], offsets[i]:offsets[i] + K.shape[1]] = Y[: K.shape[1]]
        new_acts.append(X)
    names = []
    for i, K in enumerate(blocks):
        for j in range(K.shape[1]):
            names.append(f"{I.word(basis[i])}->{j}" if K.shape[1] > 1 else f"{I.word(basis[i])}->")
    H = HomModule(Gbar, carrier, new_acts, names, check=False)
    H.basis = basis
    H.orders = orders
    H.blocks = blocks
    H.exponents = exps
    H._M = M
    H._solvers = solvers
    return H


def _as_subgroup(G: GroupTable, H) -> Subgroup:
    if isinstance(H, Subgroup) and H.parent == G:
        return H
    return Subgroup(G, G.closure(list(H)) if not G.is_subgroup(list(H)) else list(H))


def residue(
    G: GroupTable,
    I,
    Gbar,
    z: Cochain,
    representatives=None,
    check: bool = True,
) -> Cochain:
    """Residue of a normalized cocycle along a central subgroup ``I``.

    ``(r z)(g_1, .., g_{n-1})(h) = z(h, g_1, .., g_{n-1})`` with ``g_i`` running
    over representatives of ``G/I`` (by default the complement ``Gbar``).  The
    result is a cochain over ``Gbar`` valued in ``Hom(I, M)``.
    """
    if z.group != G:
        raise ResidueError("cochain is not over this group")
    if z.degree < 1:
        raise ResidueError("residue needs degree at least 1")
    if not (isinstance(I, Subgroup) or G.is_subgroup(list(I))):
        raise ResidueError("I is not a subgroup")
    if not (isinstance(Gbar, Subgroup) or G.is_subgroup(list(Gbar))):
        raise ResidueError("the complement is not a subgroup")
    Isub, Qsub = _as_subgroup(G, I), _as_subgroup(G, Gbar)
    Iel, Qel = list(Isub.embedding), list(Qsub.embedding)
    M = z.module
    for h in Iel:
        for g in range(G.order):
            if G.mult[h, g] != G.mult[g, h]:
                raise ResidueError(f"I is not central ({G.word(h)} and {G.word(g)} do not commute)")
    if len(Iel) * len(Qel) != G.order or set(Iel) & set(Qel) != {0}:
        raise ResidueError("the subgroup is not a complement of I")
    if representatives is None:
        reps = np.array(Qel, dtype=np.int64)
    else:
        reps = np.array([int(x) for x in representatives], dtype=np.int64)
        if len(reps) != len(Qel):
            raise ResidueError("one representative per complement element required")
        coset = {int(G.mult[q, h]): i for i, q in enumerate(Qel) for h in Iel}
        for i, g in enumerate(reps):
            if coset.get(int(g)) != i:
                raise ResidueError(f"{G.word(int(g))} does not represent {G.word(Qel[i])} modulo I")
    n = z.degree
    if check:
        if not z.is_normalized():
            raise ResidueError("residue needs a normalized cochain")
        _require_cocycle(z)
        digits = G.tuple_digits(n)
        for p in range(1, n):
            for h in Iel:
                moved = digits.copy()
                moved[:, p] = G.mult[digits[:, p], h]
                diff = np.flatnonzero(np.any(z.table[G.tuple_index(moved)] != z.table, axis=1))
                if diff.size:
                    t = tuple(int(x) for x in digits[diff[0]])
                    raise ResidueError(
                        f"invariance fails: argument {p + 1} of ({z.format_tuple(t)}) changed by {G.word(h)}"
                    )
    H = hom_module(Isub, M, Qsub)
    out_digits = Qsub.tuple_digits(n - 1)
    args = reps[out_digits] if n > 1 else np.zeros((1, 0), dtype=np.int64)
    rows = []
    for a in args:
        if check:
            vals = {h: z.value((h, *a)) for h in Iel}
            for h1 in Iel:
                for h2 in Iel:
                    s = M.nf(np.array(vals[h1], dtype=object) + np.array(vals[h2], dtype=object))
                    if vals[int(G.mult[h1, h2])] != s:
                        raise ResidueError(
                            f"z(h, {','.join(G.word(int(x)) for x in a)}) is not additive in h"
                        )
        rows.append(list(H.coordinates([z.value((Iel[b], *a)) for b in H.basis])))
    out = Cochain(H, n - 1, np.array(rows, dtype=object).reshape(len(rows), H.rank))
    if check and n > 1:
        _require_cocycle(out)
    return out
