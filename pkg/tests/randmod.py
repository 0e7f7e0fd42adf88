"""Random groups and modules for property tests."""
import itertools

import numpy as np

from cohomo.groups import GroupTable
from cohomo.linalg import FinAbGroup
from cohomo.modules import GModule, ModuleError


def d4():
    # rotation and reflection of a square
    return GroupTable.from_permutations(["r", "f"], [[1, 2, 3, 0], [0, 3, 2, 1]])


def q8():
    # left multiplication on {1, i, j, k, -1, -i, -j, -k}
    i = [1, 4, 3, 6, 5, 0, 7, 2]
    j = [2, 7, 4, 1, 6, 3, 0, 5]
    return GroupTable.from_permutations(["i", "j"], [i, j])


GROUPS = {
    "C2": lambda: GroupTable.cyclic(2),
    "C3": lambda: GroupTable.cyclic(3),
    "C4": lambda: GroupTable.cyclic(4),
    "V4": lambda: GroupTable.abelian(["s", "t"], [2, 2]),
    "C2^3": lambda: GroupTable.abelian(["s", "t", "w"], [2, 2, 2]),
    "C8": lambda: GroupTable.cyclic(8),
    "D4": d4,
    "Q8": q8,
}


def characters(G):
    """All homomorphisms ``G -> {+1, -1}`` as lists of signs per element."""
    out = []
    for signs in itertools.product([1, -1], repeat=len(G.generators)):
        try:
            M = GModule.from_generators(G, FinAbGroup.free(1), [[[x]] for x in signs])
        except ModuleError:
            continue
        out.append([int(M.actions[g][0, 0]) for g in range(G.order)])
    return out


def coset_module(G, H, chi, carrier_mod=0):
    """``Z[G/H]`` twisted by the sign character ``chi`` (``chi`` trivial on ``H``)."""
    H = set(H)
    cosets = []
    seen = set()
    for g in range(G.order):
        if g in seen:
            continue
        c = sorted(int(G.mult[g, h]) for h in H)
        seen.update(c)
        cosets.append(c)
    where = {x: i for i, c in enumerate(cosets) for x in c}
    k = len(cosets)
    acts = []
    for g in range(G.order):
        P = np.zeros((k, k), dtype=object)
        for i, c in enumerate(cosets):
            P[where[int(G.mult[g, c[0]])], i] = chi[g]
        acts.append(P)
    return GModule(G, FinAbGroup.from_invariants([carrier_mod] * k), acts)


def subgroups(G):
    found = set()
    for a in range(G.order):
        for b in range(G.order):
            found.add(tuple(G.closure([a, b])))
    return [list(h) for h in sorted(found)]


def unimodular(k, rng):
    U = np.eye(k, dtype=np.int64)
    for _ in range(3 * k):
        i, j = rng.choice(k, size=2, replace=False) if k > 1 else (0, 0)
        if i != j:
            U[i] += int(rng.integers(-2, 3)) * U[j]
    return U.astype(object)


def direct_sum(A, B):
    G = A.group
    ka, kb = A.rank, B.rank
    R = np.zeros((A.carrier.relations.shape[0] + B.carrier.relations.shape[0], ka + kb), dtype=object)
    R[: A.carrier.relations.shape[0], :ka] = A.carrier.relations
    R[A.carrier.relations.shape[0]:, ka:] = B.carrier.relations
    acts = []
    for g in range(G.order):
        X = np.zeros((ka + kb, ka + kb), dtype=object)
        X[:ka, :ka] = A.actions[g]
        X[ka:, ka:] = B.actions[g]
        acts.append(X)
    return GModule(G, FinAbGroup(ka + kb, R), acts)


def conjugate(M, P):
    """Same module in new coordinates ``x' = P x`` (free carriers only)."""
    Pinv = np.array(np.round(np.linalg.inv(P.astype(float))), dtype=np.int64).astype(object)
    assert (P @ Pinv == np.eye(M.rank, dtype=np.int64)).all()
    acts = [P @ A @ Pinv for A in M.actions]
    return GModule(M.group, M.carrier, acts)


def random_module(G, rng, max_rank=3):
    """A small random module: twisted permutation pieces, maybe torsion, maybe re-coordinatized."""
    chars = characters(G)
    subs = subgroups(G)
    pieces = []
    rank = 0
    for _ in range(int(rng.integers(1, 3))):
        H = subs[int(rng.integers(len(subs)))]
        chi = [c for c in chars if all(c[h] == 1 for h in H)]
        chi = chi[int(rng.integers(len(chi)))]
        mod = int(rng.choice([0, 0, 2, 3, 4]))
        piece = coset_module(G, H, chi, mod)
        if rank + piece.rank > max_rank:
            continue
        if mod == 0 and piece.rank > 1 and rng.random() < 0.5:
            piece = conjugate(piece, unimodular(piece.rank, rng))
        pieces.append(piece)
        rank += piece.rank
    if not pieces:
        pieces.append(coset_module(G, list(range(G.order)), chars[0], int(rng.choice([0, 2]))))
    M = pieces[0]
    for p in pieces[1:]:
        M = direct_sum(M, p)
    M.check()
    return M
