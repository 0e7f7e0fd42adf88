import numpy as np
import pytest

from cohomo.groups import GroupTable
from cohomo.linalg import FinAbGroup
from cohomo.modules import GModule, ModuleError, ModuleMap, NotExactError, ShortExactSeq
from randmod import GROUPS, random_module

C2 = GroupTable.cyclic(2)


def sign_module(G=C2):
    return GModule.from_generators(G, FinAbGroup.free(1), [[[-1]]])


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "V4", "D4", "Q8"])
def test_random_modules_are_actions(name):
    G = GROUPS[name]()
    rng = np.random.default_rng(len(name))
    for _ in range(5):
        M = random_module(G, rng)
        for g in range(G.order):
            for h in range(G.order):
                v = tuple(int(x) for x in rng.integers(-5, 6, size=M.rank))
                assert M.act(G.mul(g, h), v) == M.act(g, M.act(h, v))
        assert M.act(0, (1,) * M.rank) == M.nf((1,) * M.rank)


def test_non_action_rejected():
    # s acting by 2 on Z is not invertible, so s^2 = 1 fails
    with pytest.raises(ModuleError):
        GModule.from_generators(C2, FinAbGroup.free(1), [[[2]]])
    # swapping two coordinates does not preserve the relation 2*e0 = 0
    with pytest.raises(ModuleError):
        GModule.from_generators(C2, FinAbGroup(2, [[2, 0]]), [[[0, 1], [1, 0]]])


def test_torsion_action_reduced():
    # on Z/3, multiplication by -1 and by 2 agree
    M = GModule.from_generators(C2, FinAbGroup.from_invariants([3]), [[[2]]])
    assert M.act(1, (1,)) == (2,)
    N = GModule.from_generators(C2, FinAbGroup.from_invariants([3]), [[[-1]]])
    assert N.same_as(M)


def test_regular_module():
    G = GroupTable.cyclic(3)
    R = GModule.regular(G)
    assert R.act(1, (1, 0, 0)) == (0, 1, 0)
    assert R.names == ("[1]", "[s]", "[s^2]")


def test_module_map_equivariance():
    Z = GModule.trivial(C2, FinAbGroup.free(1))
    S = sign_module()
    ModuleMap(Z, Z, [[2]])
    with pytest.raises(ModuleError):
        ModuleMap(Z, S, [[1]])
    Z2 = GModule.trivial(C2, FinAbGroup.from_invariants([2]))
    with pytest.raises(ModuleError):
        ModuleMap(Z2, Z, [[1]])  # 2*e = 0 must map to 0


def test_ses_double_then_reduce():
    Z = GModule.trivial(C2, FinAbGroup.free(1))
    Z2 = GModule.trivial(C2, FinAbGroup.from_invariants([2]))
    ses = ShortExactSeq(ModuleMap(Z, Z, [[2]]), ModuleMap(Z, Z2, [[1]]))
    assert ses.surj(ses.lift((1,))) == (1,)
    assert ses.pull_back((4,)) == (2,)
    assert ses.pull_back((3,)) is None


def test_ses_failures():
    Z = GModule.trivial(C2, FinAbGroup.free(1))
    Z2 = GModule.trivial(C2, FinAbGroup.from_invariants([2]))
    Z4 = GModule.trivial(C2, FinAbGroup.from_invariants([4]))
    with pytest.raises(NotExactError):  # not surjective
        ShortExactSeq(ModuleMap(Z, Z, [[2]]), ModuleMap(Z, Z4, [[2]]))
    with pytest.raises(NotExactError):  # composite nonzero
        ShortExactSeq(ModuleMap(Z, Z, [[1]]), ModuleMap(Z, Z2, [[1]]))
    with pytest.raises(NotExactError):  # kernel larger than image
        ShortExactSeq(ModuleMap(Z, Z, [[4]]), ModuleMap(Z, Z2, [[1]]))
    with pytest.raises(NotExactError):  # not injective
        ShortExactSeq(ModuleMap(Z2, Z4, [[0]]), ModuleMap(Z4, Z4, [[1]]))
    with pytest.raises(NotExactError):  # bad section
        ShortExactSeq(ModuleMap(Z, Z, [[2]]), ModuleMap(Z, Z2, [[1]]), section=[[2]])


def test_restrict_and_inflate_keep_aliases():
    G = GroupTable.abelian(["s", "t"], [2, 2])
    M = GModule.from_generators(G, FinAbGroup.free(1), {"s": [[-1]]})
    M.aliases["x"] = (1,)
    H = G.subgroup(G.closure([G.parse_element("t")]))
    R = M.restrict(H)
    assert R.invariants_action_free()
    assert R.aliases == {"x": (1,)}
    G8 = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    I = M.inflate(G8, [g // 2 for g in range(8)])
    I.check()
    assert I.act(G8.parse_element("s*w"), (1,)) == (-1,)
