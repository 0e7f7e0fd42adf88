import numpy as np
import pytest

from cohomo.cochains import (
    Cochain,
    TableTooLarge,
    coboundary,
    coboundary_matrix,
    inflation,
    push_forward,
    restriction,
)
from cohomo.groups import GroupError, GroupTable
from cohomo.linalg import FinAbGroup
from cohomo.modules import GModule, ModuleError, ModuleMap
from randmod import GROUPS, random_module

V4 = GroupTable.abelian(["s", "t"], [2, 2])


def pic_module():
    # class of L1, s acts by -1 and t trivially
    return GModule.from_generators(V4, FinAbGroup.free(1), {"s": [[-1]]}, names=["L1"])


def phi():
    P = pic_module()
    return Cochain.from_function(P, 1, lambda g: [1] if g in (2, 3) else [0])


def random_cochain(M, n, rng):
    size = M.group.order ** n
    return Cochain(M, n, rng.integers(-9, 10, size=(size, M.rank)))


def test_degree_zero_coboundary_on_pic():
    c = Cochain(pic_module(), 0, [[1]])
    dc = coboundary(c)
    assert dc.at_words("s") == (-2,)
    assert dc.at_words("t") == (0,)
    assert dc.at_words("s*t") == (-2,)


def test_phi_is_cocycle():
    assert coboundary(phi()).is_zero()


def test_coboundary_formula_by_hand():
    rng = np.random.default_rng(0)
    G = GROUPS["D4"]()
    M = random_module(G, rng)
    c = random_cochain(M, 2, rng)
    dc = coboundary(c)
    for g1, g2, g3 in [(1, 2, 3), (5, 0, 7), (4, 4, 6)]:
        expect = (
            np.array(M.act(g1, c(g2, g3)), dtype=object)
            - c(G.mul(g1, g2), g3)
            + c(g1, G.mul(g2, g3))
            - c(g1, g2)
        )
        assert dc(g1, g2, g3) == M.nf(expect)


def test_d_squared_vanishes_on_100_random_cochains():
    rng = np.random.default_rng(2024)
    names = ["C2", "V4", "C4", "D4", "Q8", "C2^3"]
    count = 0
    while count < 100:
        G = GROUPS[names[count % len(names)]]()
        M = random_module(G, rng)
        n = count % 3
        c = random_cochain(M, n, rng)
        assert coboundary(coboundary(c)).is_zero()
        count += 1


def test_coboundary_matrix_matches_coboundary():
    rng = np.random.default_rng(9)
    G = GROUPS["C3"]()
    M = random_module(G, rng)
    for n in range(3):
        D = coboundary_matrix(M, n)
        c = random_cochain(M, n, rng)
        got = Cochain.from_vector(M, n + 1, D @ c.vector())
        assert got == coboundary(c)


def test_cochain_arithmetic_and_access():
    c = phi()
    assert (c + c).at_words("s") == (2,)
    assert (c - c).is_zero()
    assert (-c).at_words("s") == (-1,)
    assert (3 * c).at_words("s*t") == (3,)
    assert c.support() == [(2,), (3,)]
    assert c.is_normalized()
    d = c.with_value((1,), [5])
    assert d.differences(c) == [(1,)]
    with pytest.raises(ValueError):
        c.index((1, 2))


def test_normalization_of_torsion_values():
    M = GModule.trivial(V4, FinAbGroup.from_invariants([2]))
    c = Cochain.from_values(M, 1, {(1,): [3], (2,): [4]})
    assert c(1) == (1,) and c(2) == (0,)


def test_table_too_large(monkeypatch):
    monkeypatch.setenv("COHOMO_MAX_TABLE", "50")
    M = GModule.trivial(V4, FinAbGroup.free(1))
    Cochain.zero(M, 2)
    with pytest.raises(TableTooLarge):
        Cochain.zero(M, 3)
    monkeypatch.delenv("COHOMO_MAX_TABLE")
    assert Cochain.zero(M, 3).table.shape == (64, 1)


def test_inflation_identity_and_zero():
    c = phi()
    assert inflation(c, V4, list(range(4))) == c
    z = Cochain.zero(c.module, 2)
    G8 = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    assert inflation(z, G8, [g // 2 for g in range(8)]).is_zero()


def test_inflation_pulls_back_values():
    G8 = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    infl = inflation(phi(), G8, [g // 2 for g in range(8)])
    assert infl.at_words("s*w") == (1,)
    assert infl.at_words("t*w") == (0,)
    assert infl.is_cocycle()


def test_inflation_with_value_map():
    G8 = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    proj = [g // 2 for g in range(8)]
    P = pic_module()
    target = GModule.from_generators(G8, FinAbGroup.free(1), {"s": [[-1]]})
    infl = inflation(phi(), G8, proj, target=target, via=[[3]])
    assert infl.at_words("s*t*w") == (3,)
    bad = GModule.trivial(G8, FinAbGroup.free(1))
    with pytest.raises(ModuleError):
        inflation(phi(), G8, proj, target=bad, via=[[1]])
    with pytest.raises(GroupError):
        inflation(phi(), G8, [0, 1, 2, 3, 1, 1, 1, 1])
    assert P.rank == 1


def test_restriction_examples():
    c = phi()
    assert restriction(c, list(range(4))) == c
    rt = restriction(c, V4.closure([V4.parse_element("t")]))
    assert rt.is_zero()
    rs = restriction(c, V4.closure([V4.parse_element("s")]))
    assert rs.at_words("s") == (1,)
    with pytest.raises(GroupError):
        restriction(c, [0, 1, 2])


def test_push_forward():
    Z = GModule.trivial(V4, FinAbGroup.free(1))
    Z2 = GModule.trivial(V4, FinAbGroup.from_invariants([2]))
    c = Cochain.from_function(Z, 1, lambda g: [g])
    out = push_forward(c, ModuleMap(Z, Z2, [[1]]))
    assert [out(g) for g in range(4)] == [(0,), (1,), (0,), (1,)]
