import numpy as np
import pytest

from cohomo.groups import GroupError, GroupTable, Subgroup
from randmod import GROUPS, d4, q8


def test_abelian_enumeration_is_lexicographic():
    G = GroupTable.abelian(["s", "t"], [2, 2])
    assert G.element_words == ("1", "t", "s", "s*t")
    assert G.generators == (2, 1)
    G8 = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    assert [G8.parse_element(x) for x in ("w", "t", "s", "s*t")] == [1, 2, 4, 6]


def test_parse_element_variants():
    G = GroupTable.abelian(["s", "t"], [2, 2])
    assert G.parse_element("1") == 0
    assert G.parse_element("st") == G.parse_element("s*t") == G.parse_element("t*s") == 3
    assert G.parse_element("s^3") == 2
    assert G.parse_element("s^-1") == 2
    C = GroupTable.cyclic(5)
    assert C.parse_element("s^7") == 2
    with pytest.raises(GroupError):
        G.parse_element("x")
    with pytest.raises(GroupError):
        G.parse_element("s**t")


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_group_axioms(name):
    G = GROUPS[name]()
    G._check_axioms()
    n = G.order
    for g in range(n):
        assert G.mul(g, int(G.inverse[g])) == 0
        assert n % G.element_order(g) == 0
    assert G.closure(G.generators) == list(range(n))


def test_nonabelian_examples():
    D, Q = d4(), q8()
    assert D.order == Q.order == 8
    assert not D.is_abelian() and not Q.is_abelian()
    # Q8 has a unique involution, D4 has five
    assert sum(Q.element_order(g) == 2 for g in range(8)) == 1
    assert sum(D.element_order(g) == 2 for g in range(8)) == 5


def test_cyclic_generator():
    assert GroupTable.cyclic(6).is_cyclic()
    assert not GroupTable.abelian(["s", "t"], [2, 2]).is_cyclic()
    assert GroupTable.trivial().cyclic_generator() == 0


def test_bad_tables_rejected():
    with pytest.raises(GroupError):
        GroupTable.from_table([[0, 1], [1, 1]])
    # Latin square that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        GroupTable.from_table(bad)
    with pytest.raises(GroupError):
        GroupTable.from_permutations(["a"], [[0, 0, 1]])


def test_from_table_roundtrip():
    G = GroupTable.cyclic(4)
    H = GroupTable.from_table(G.mult)
    assert np.array_equal(H.mult, G.mult)
    assert H.order == 4


def test_subgroup_reindexing():
    G = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    H = Subgroup(G, G.closure([G.parse_element("t"), G.parse_element("w")]))
    assert H.order == 4
    assert H.generator_names == ("t", "w")
    assert [H.to_parent(i) for i in range(4)] == list(H.embedding)
    for i in range(4):
        for j in range(4):
            assert H.to_parent(H.mul(i, j)) == G.mul(H.to_parent(i), H.to_parent(j))
    assert H.from_parent(G.parse_element("t")) == H.parse_element("t")
    with pytest.raises(GroupError):
        Subgroup(G, [0, 1, 2])


def test_homomorphism_check():
    G8 = GroupTable.abelian(["s", "t", "w"], [2, 2, 2])
    G4 = GroupTable.abelian(["s", "t"], [2, 2])
    assert G8.is_homomorphism_to(G4, [g // 2 for g in range(8)])
    assert not G8.is_homomorphism_to(G4, [0] + [1] * 7)


def test_tuple_index_inverts_digits():
    G = GroupTable.cyclic(3)
    D = G.tuple_digits(3)
    assert D.shape == (27, 3)
    assert G.tuple_index(D).tolist() == list(range(27))
    assert D[5].tolist() == [0, 1, 2]
