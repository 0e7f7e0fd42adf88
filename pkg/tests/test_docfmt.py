import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohomo.cochains import Cochain
from cohomo.docfmt import DocumentError, dump_document, parse_document, read_document
from cohomo.quadric import QuadricModel
from randmod import GROUPS, random_module

CASE_I = """
[group]
generators = s, t
orders = 2, 2

[module Pic]
generators = L1
action.s = -1   # s swaps L1 and L2 = -L1
action.t = 1

[cochain]
module = Pic
degree = 1
s = L1
s*t = L1
"""


def roundtrip(G, modules, cochain=None, name=None):
    text = dump_document(G, modules, cochain, name)
    doc = parse_document(text)
    assert doc.group == G
    for nm, M in modules.items():
        assert doc.modules[nm].same_as(M)
        assert doc.modules[nm].aliases == M.aliases
    if cochain is not None:
        assert doc.cochain == Cochain(doc.modules[name], cochain.degree, cochain.table)
    # dumping again is a fixed point
    assert dump_document(doc.group, doc.modules, doc.cochain, doc.cochain_module) == text
    return doc


def test_parse_case_i():
    doc = parse_document(CASE_I)
    M = doc.module("Pic")
    assert M.act(doc.group.parse_element("s"), (1,)) == (-1,)
    assert doc.cochain.at_words("s") == (1,)
    assert doc.cochain.at_words("t") == (0,)


@pytest.mark.parametrize("name", ["phi", "Phi", "psi", "psi_tilde", "Psi", "Phi_prime"])
def test_roundtrip_model_cochains(name):
    m = QuadricModel()
    c = m.cochain(name)
    roundtrip(c.group, {"M": c.module}, c, "M")


def test_roundtrip_subgroup_objects():
    m = QuadricModel()
    r = m.residue_along_w(m.Phi_prime)
    doc = roundtrip(r.group, {"Hom": r.module}, r, "Hom")
    assert doc.group.element_words == ("1", "t", "s", "s*t")


def test_roundtrip_permutation_group():
    G = GROUPS["Q8"]()
    M = random_module(G, np.random.default_rng(0))
    roundtrip(G, {"A": M})


@settings(max_examples=25, deadline=None)
@given(gname=st.sampled_from(["C2", "C3", "V4", "D4"]), seed=st.integers(0, 10**6), n=st.integers(0, 2))
def test_roundtrip_random(gname, seed, n):
    rng = np.random.default_rng(seed)
    G = GROUPS[gname]()
    M = random_module(G, rng)
    c = Cochain(M, n, rng.integers(-4, 5, size=(G.order ** n, M.rank)))
    roundtrip(G, {"M": M}, c, "M")


def test_degree_zero_value():
    doc = parse_document(CASE_I.split("[cochain]")[0] + "[cochain]\ndegree = 0\nvalue = L1^3\n")
    assert doc.cochain(*()) == (3,)


def test_split_files(tmp_path):
    g, rest = CASE_I.split("[module Pic]")
    (tmp_path / "g.txt").write_text(g)
    (tmp_path / "m.txt").write_text("[module Pic]" + rest)
    doc = read_document([str(tmp_path / "g.txt"), str(tmp_path / "m.txt")])
    assert doc.cochain.at_words("s*t") == (1,)


@pytest.mark.parametrize(
    "text, where",
    [
        ("[group]\ngenerators = s\norders = 2\ncolour = red\n", "line 4"),
        ("[group]\ngenerators = s\norders = 2\n[module]\ngenerators = a\nactoin.s = 1\n", "line 6"),
        ("[group]\ngenerators = s\norders = 2\n[module]\ngenerators = a\naction.s = 2\n", "line 4"),
        ("[group]\ngenerators = s\n", "line 1"),
        ("generators = s\n", "line 1"),
        ("[groop]\n", "line 1"),
        ("[group]\ngenerators = s\norders = 2\norders = 3\n", "line 4"),
        ("[group]\ngenerators = s\norders = 2\n[module]\ngenerators = a\n[cochain]\ndegree = 1\nq = a\n", "line 8"),
        ("[group]\ngenerators = s\norders = 2\n[module]\ngenerators = a\n[cochain]\ndegree = 1\ns = b\n", "line 8"),
        ("[group]\ngenerators = s\norders = 2\n[module]\ngenerators = a\n[cochain]\ndegree = 2\ns = a\n", "line 8"),
        ("[group]\ngenerators = s\norders = x\n", "line 3"),
    ],
)
def test_document_errors_carry_line_numbers(text, where):
    with pytest.raises(DocumentError, match=where):
        parse_document(text)


def test_missing_file():
    with pytest.raises(DocumentError, match="cannot read"):
        read_document(["/nonexistent/file.txt"])
