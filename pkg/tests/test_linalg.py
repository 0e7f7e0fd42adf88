import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cohomo.linalg import (
    ContainmentError,
    FinAbGroup,
    Solver,
    element_normal_form,
    format_invariants,
    hnf,
    kernel,
    kernel_mod,
    smith_normal_form,
    solve_integer,
    subquotient,
)


def _det(M):
    return int(Matrix(M.tolist()).det())


def check_snf(A):
    A = np.array(A, dtype=object)
    r = smith_normal_form(A, want_inverse=True)
    assert (r.U @ A @ r.V == r.S).all()
    assert abs(_det(r.U)) == 1 and abs(_det(r.V)) == 1
    assert (r.U @ r.U_inv == np.eye(A.shape[0], dtype=np.int64)).all()
    S = r.S
    off = S.copy()
    for i in range(min(S.shape)):
        off[i, i] = 0
    assert not off.any()
    d = [int(S[i, i]) for i in range(min(S.shape))]
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return d


def test_snf_identity():
    r = smith_normal_form(np.eye(2, dtype=int))
    assert r.S.tolist() == [[1, 0], [0, 1]]
    assert r.U.tolist() == [[1, 0], [0, 1]]
    assert r.V.tolist() == [[1, 0], [0, 1]]


def test_snf_already_diagonal():
    assert check_snf([[1, 0], [0, 0]]) == [1, 0]


def test_snf_hand_example():
    # gcd of entries is 2 and |det| = 8
    assert check_snf([[2, 4], [6, 8]]) == [2, 4]


def test_snf_random_200():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m, n = rng.integers(1, 7, size=2)
        A = rng.integers(-20, 21, size=(m, n))
        d = check_snf(A)
        ref = sympy_snf(Matrix(A.tolist()), domain=ZZ)
        assert [abs(int(ref[i, i])) for i in range(min(m, n))] == d


def test_snf_large_entries_stay_exact():
    A = np.array([[2**70 + 1, 3], [5, 2**65]], dtype=object)
    d = check_snf(A)
    assert d[0] * d[1] == abs(_det(A))


def test_snf_zero_matrix():
    assert check_snf(np.zeros((3, 2), dtype=int)) == [0, 0]


def test_solve_examples():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]).tolist() == [2, 3]
    assert solve_integer([[2]], [1]) is None
    x = solve_integer([[2, 4], [6, 8]], [2, 6])
    assert (np.array([[2, 4], [6, 8]], dtype=object) @ x).tolist() == [2, 6]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_integer([[1, 2]], [1, 2])


def _snf_solvable(A, b):
    r = smith_normal_form(A)
    c = r.U @ np.array(b, dtype=object)
    d = r.diagonal
    for i, ci in enumerate(c):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ci != 0:
                return False
        elif ci % di:
            return False
    return True


def test_solve_agrees_with_snf_criterion():
    rng = np.random.default_rng(5)
    for _ in range(300):
        m, n = rng.integers(1, 6, size=2)
        A = np.array(rng.integers(-6, 7, size=(m, n)), dtype=object)
        if rng.random() < 0.5:
            b = A @ np.array(rng.integers(-5, 6, size=n), dtype=object)
        else:
            b = np.array(rng.integers(-9, 10, size=m), dtype=object)
        x = solve_integer(A, b)
        if x is not None:
            assert (A @ x == b).all()
        assert (x is not None) == _snf_solvable(A, b)


def test_solver_is_deterministic():
    A = [[2, 4, 1], [6, 8, 3]]
    assert Solver(A).solve([3, 9]).tolist() == Solver(A).solve([3, 9]).tolist()


def test_kernel_spans_nullspace():
    A = np.array([[1, 2, 3], [2, 4, 6]], dtype=object)
    K = kernel(A)
    assert K.shape == (3, 2)
    assert not (A @ K).any()
    # saturated: the lattice has index 1 in the rational null space
    assert check_snf(K.T) == [1, 1]


def test_hnf_is_canonical():
    a = hnf([[2, 4], [0, 6]], 2)
    b = hnf([[2, 10], [2, 4]], 2)
    assert a.tolist() == b.tolist() == [[2, 4], [0, 6]]


def test_element_normal_form_examples():
    G = FinAbGroup.from_invariants([0, 2])
    assert element_normal_form(G, (3, 5)) == (3, 1)
    H = FinAbGroup(3, [[1, 2, 0], [0, 3, 3]])
    assert element_normal_form(H, (1, 2, 0)) == (0, 0, 0)
    sym = FinAbGroup(4, [[0, 0, 0, 2]])
    assert element_normal_form(sym, (0, 0, 0, 2)) == (0, 0, 0, 0)


def test_element_normal_form_length_mismatch():
    with pytest.raises(ValueError):
        FinAbGroup.free(2).normal_form([1])


@settings(max_examples=60, deadline=None)
@given(
    rels=st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), max_size=3),
    v=st.lists(st.integers(-30, 30), min_size=3, max_size=3),
    w=st.lists(st.integers(-4, 4), min_size=3, max_size=3),
)
def test_normal_form_idempotent_and_class_constant(rels, v, w):
    G = FinAbGroup(3, rels)
    nf = G.normal_form(v)
    assert G.normal_form(nf) == nf
    shifted = np.array(v, dtype=object)
    for coef, r in zip(w, rels):
        shifted = shifted + coef * np.array(r, dtype=object)
    assert G.normal_form(shifted) == nf


def test_finabgroup_equality_is_lattice_equality():
    assert FinAbGroup(2, [[2, 0], [0, 2]]) == FinAbGroup(2, [[2, 2], [0, 2]])
    assert FinAbGroup(2, [[2, 0]]) != FinAbGroup(2, [[0, 2]])
    assert str(FinAbGroup(0)) == "0"
    assert FinAbGroup(0).is_trivial()


def test_invariants_display():
    assert str(FinAbGroup(2, [[2, 0]])) == "Z/2 x Z"
    assert format_invariants([]) == "0"
    assert FinAbGroup(2, [[2, 0], [0, 3]]).invariants() == [6]


def test_subquotient_examples():
    G, P = subquotient(FinAbGroup.free(2), np.eye(2, dtype=int), 2 * np.eye(2, dtype=int))
    assert G.invariants() == [2, 2]
    G, P = subquotient(FinAbGroup.free(2), np.eye(2, dtype=int), np.eye(2, dtype=int))
    assert G.is_trivial()
    G, P = subquotient(FinAbGroup.free(1), [[1]], [[2]])
    assert str(G) == "Z/2"
    assert P.tolist() == [[1]]
    for k in range(-3, 4):
        assert G.normal_form(P @ np.array([k], dtype=object)) == (k % 2,)


def test_subquotient_projection_kills_image():
    amb = FinAbGroup(3, [[0, 0, 4]])
    K = np.array([[1, 0, 0], [0, 2, 0], [0, 0, 1]], dtype=object)
    I = np.array([[2, 0], [0, 2], [0, 2]], dtype=object)
    sq = subquotient(amb, K, I)
    for col in I.T:
        assert not any(sq.classify(col))


def test_subquotient_containment_error():
    with pytest.raises(ContainmentError):
        subquotient(FinAbGroup.free(1), [[2]], [[1]])


def test_subquotient_independent_of_generator_order():
    rng = np.random.default_rng(3)
    for _ in range(30):
        K = np.array(rng.integers(-3, 4, size=(3, 3)), dtype=object)
        I = K @ np.array(rng.integers(-3, 4, size=(3, 2)), dtype=object)
        amb = FinAbGroup(3, [[0, 0, int(rng.choice([0, 2, 3]))]])
        base = subquotient(amb, K, I).group.invariants()
        for pk in itertools.permutations(range(3)):
            got = subquotient(amb, K[:, list(pk)], I[:, ::-1]).group.invariants()
            assert got == base


def test_kernel_mod_torsion_target():
    # x -> 2x into Z/4: kernel is 2Z
    K = kernel_mod([[2]], FinAbGroup.from_invariants([4]))
    assert K.tolist() == [[2]]
