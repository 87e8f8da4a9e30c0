import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kneser_homotopy.graph_core import GraphError, Mapping, exp_adjacent, make_complete, make_cycle
from kneser_homotopy.homotopy import (
    BASE_TABLE_ROWS,
    HomPath,
    HypothesisViolation,
    base_table,
    compose,
    compose_word,
    decompose_even,
    expand_to_flips,
    fold_to_c5,
    from_cycles,
    generator_path,
    hompath_from_text,
    hompath_to_text,
    path_for_3cycle,
    path_for_even,
    path_to_automorphism,
    restrict_to_stable,
    rho_bar,
    sign,
    stable_vertices,
    step_rho,
    step_tau,
    tau_bar,
    three_cycle,
    twist,
    validate_path,
)
from kneser_homotopy.kneser import (
    DihedralElement,
    KneserParams,
    canonical_colouring,
    dihedral_group,
    enumerate_stable,
    make_graph,
    vertex_permutation,
)

from oracles import first_failure

SG21 = make_graph(KneserParams(2, 1))
K3 = make_complete(3)


def table_path():
    return HomPath(SG21, K3, base_table(), KneserParams(2, 1), "stable")


def brute_sign(p):
    inversions = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1 if inversions % 2 else 1


# -- permutations -----------------------------------------------------------


def test_sign_examples():
    assert sign(tau_bar(3)) == 1
    assert sign(rho_bar(3)) == 1
    assert sign((1, 0, 2)) == -1


@pytest.mark.parametrize("k", range(1, 21))
def test_sign_formulas(k):
    assert sign(tau_bar(k)) == (-1) ** (k + 1) == brute_sign(tau_bar(k))
    assert sign(rho_bar(k)) == (-1) ** (k * (k + 1) // 2) == brute_sign(rho_bar(k))


def test_decompose_examples():
    assert decompose_even((0, 1, 2, 3)) == []
    assert decompose_even(three_cycle(0, 3)) == [0]
    with pytest.raises(GraphError):
        decompose_even((1, 0, 2))


@pytest.mark.parametrize("size", [3, 4, 5, 6])
def test_decompose_round_trip_exhaustive(size):
    for p in itertools.permutations(range(size)):
        if brute_sign(p) == 1:
            word = decompose_even(p)
            assert compose_word(word, size) == p
            assert all(0 <= i <= size - 3 for i in word)
            assert len(word) <= size**2


@given(st.permutations(list(range(9))))
def test_decompose_round_trip_random(p):
    p = tuple(p)
    if sign(p) == 1:
        assert compose_word(decompose_even(p), 9) == p


def test_from_cycles():
    assert from_cycles([(0, 1, 2)], 4) == (1, 2, 0, 3)
    assert three_cycle(1, 4) == (0, 2, 3, 1)


# -- validator ----------------------------------------------------------------


def test_table_is_valid():
    assert validate_path(table_path())


def test_table_rows_in_lex_order():
    assert base_table()[0] == canonical_colouring(KneserParams(2, 1))
    assert base_table()[-1] == compose(three_cycle(0, 3), base_table()[0])


def test_swapped_rows_fail_at_junction():
    rows = base_table()
    rows[1], rows[2] = rows[2], rows[1]
    v = validate_path(HomPath(SG21, K3, rows))
    assert not v
    assert (v.where, v.index) == first_failure(list(SG21.edges()), 3, rows)
    assert v.where == "junction"


def test_single_entry_valid():
    assert validate_path(HomPath(SG21, K3, [base_table()[3]]))


def test_validator_reports_shape_and_entry():
    rows = base_table()
    bad = [rows[0], (0, 0, 0, 0, 0)]
    v = validate_path(HomPath(SG21, K3, bad))
    assert (v.where, v.index) == ("entry", 1)
    v = validate_path(HomPath(SG21, K3, [rows[0], (0, 1, 2, 3, 0)]))
    assert (v.where, v.index) == ("shape", 1)


# -- synthesis ----------------------------------------------------------------


def test_fold_map():
    for n in range(2, 6):
        p = KneserParams(n, 1)
        G = make_graph(p, "semi-stable")
        h = fold_to_c5(p)
        assert all(G.has_edge(u, v) <= SG21.has_edge(h[u], h[v]) for u, v in G.edges())
        assert tuple(canonical_colouring(KneserParams(2, 1))[x] for x in h) == canonical_colouring(p, "semi-stable")
    assert fold_to_c5(KneserParams(2, 1)) == (0, 1, 0, 2, 3, 4)


def test_path_3cycle_base_case_is_table():
    p = path_for_3cycle(KneserParams(2, 1), 0)
    restricted = restrict_to_stable(p)
    assert list(restricted.entries) == base_table()
    assert len(p) == 6


def test_path_3cycle_fixes_low_colours():
    params = KneserParams(2, 2)
    p = path_for_3cycle(params, 1)
    assert validate_path(p)
    c = canonical_colouring(params, "semi-stable")
    for e in p.entries:
        assert all(e[v] == 0 for v in range(len(c)) if c[v] == 0)


@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (2, 3), (3, 3), (3, 2), (4, 4), (2, 7)])
def test_path_3cycle_valid(n, k):
    params = KneserParams(n, k)
    c = canonical_colouring(params, "semi-stable")
    for i in range(k):
        p = path_for_3cycle(params, i)
        assert validate_path(p)
        assert p.first == c
        assert p.last == compose(three_cycle(i, k + 2), c)


def test_path_3cycle_range():
    with pytest.raises(HypothesisViolation):
        path_for_3cycle(KneserParams(2, 3), 3)
    with pytest.raises(HypothesisViolation):
        path_for_3cycle(KneserParams(1, 3), 0)


def test_path_for_even():
    params = KneserParams(2, 3)
    c = canonical_colouring(params, "semi-stable")
    assert path_for_even(params, tuple(range(5))).entries == (c,)
    sq = compose(three_cycle(0, 5), three_cycle(0, 5))
    p = path_for_even(params, sq)
    assert validate_path(p) and p.last == compose(sq, c)
    p = path_for_even(params, tau_bar(3))
    assert validate_path(p) and p.last == compose(tau_bar(3), c)
    with pytest.raises(HypothesisViolation):
        path_for_even(params, (1, 0, 2, 3, 4))


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(6))))
def test_path_for_even_random(pi):
    pi = tuple(pi)
    if sign(pi) != 1:
        return
    params = KneserParams(2, 4)
    p = path_for_even(params, pi)
    assert validate_path(p)
    assert p.last == compose(pi, canonical_colouring(params, "semi-stable"))


@pytest.mark.parametrize("n,k", [(2, 1), (2, 3), (3, 3), (2, 2), (4, 5)])
def test_generator_steps(n, k):
    params = KneserParams(n, k)
    G = make_graph(params)
    K = make_complete(k + 2)
    for a, b in (step_tau(params), step_rho(params)):
        assert exp_adjacent(Mapping(G, K, a), Mapping(G, K, b))


def test_path_to_automorphism_identity_and_tau():
    params = KneserParams(2, 3)
    c = canonical_colouring(params)
    assert path_to_automorphism(params, DihedralElement(params)).entries == (c,)
    tau = DihedralElement.tau(params)
    p = path_to_automorphism(params, tau)
    assert validate_path(p)
    assert p.last == twist(c, vertex_permutation(tau))


def test_path_to_automorphism_all_sg23():
    params = KneserParams(2, 3)
    c = canonical_colouring(params)
    group = dihedral_group(params)
    assert len(group) == 14
    for d in group:
        p = path_to_automorphism(params, d)
        assert validate_path(p)
        assert p.first == c and p.last == twist(c, vertex_permutation(d))


@pytest.mark.parametrize("k", [1, 2, 4, 5, 6])
def test_path_to_automorphism_refuses(k):
    params = KneserParams(2, k)
    with pytest.raises(HypothesisViolation) as info:
        path_to_automorphism(params, DihedralElement.tau(params))
    assert set(info.value.values) == {"sign_tau", "sign_rho"}
    assert -1 in info.value.values.values()


def test_generator_paths_end_at_twists():
    params = KneserParams(3, 3)
    c = canonical_colouring(params)
    for which, d in (("tau", DihedralElement.tau(params)), ("rho", DihedralElement.rho(params))):
        p = generator_path(params, which)
        assert validate_path(p) and p.last == twist(c, vertex_permutation(d))


# -- invariances ----------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(5))))
def test_post_composition_invariance(sigma):
    p = path_for_even(KneserParams(2, 3), tau_bar(3))
    assert validate_path(p.post_compose(tuple(sigma)))


@settings(max_examples=14, deadline=None)
@given(st.sampled_from(dihedral_group(KneserParams(2, 3))))
def test_pre_composition_invariance(d):
    p = generator_path(KneserParams(2, 3), "rho")
    assert validate_path(p.pre_compose(vertex_permutation(d)))


def test_restriction_invariance():
    for n, k in ((2, 2), (3, 3), (2, 5)):
        params = KneserParams(n, k)
        for i in range(k):
            p = path_for_3cycle(params, i)
            r = restrict_to_stable(p)
            assert validate_path(r)
            sets = enumerate_stable(params, "semi-stable")
            assert [sets[v] for v in stable_vertices(params)] == list(enumerate_stable(params))


# -- flips ----------------------------------------------------------------------


def test_expand_table_single_flips():
    p = table_path()
    diffs = [sum(a != b for a, b in zip(x, y)) for x, y in zip(p.entries, p.entries[1:])]
    assert diffs == [1] * 5
    assert expand_to_flips(p).entries == p.entries


def test_expand_counts():
    C5 = make_cycle(5)
    f, g = (0, 1, 0, 1, 2), (1, 2, 1, 2, 0)
    # not adjacent: expansion refuses
    with pytest.raises(GraphError):
        expand_to_flips(HomPath(C5, K3, [f, g]))
    C6 = make_cycle(6)
    f, g = (0, 1, 0, 1, 0, 1), (2, 1, 2, 1, 2, 1)
    assert exp_adjacent(Mapping(C6, K3, f), Mapping(C6, K3, g))
    e = expand_to_flips(HomPath(C6, K3, [f, g]))
    assert len(e) == 4 and e.first == f and e.last == g
    assert validate_path(e)


def test_expand_automorphism_path():
    params = KneserParams(2, 3)
    p = path_to_automorphism(params, DihedralElement.rho(params))
    e = expand_to_flips(p)
    assert validate_path(e)
    assert e.first == p.first and e.last == p.last
    assert all(sum(a != b for a, b in zip(x, y)) == 1 for x, y in zip(e.entries, e.entries[1:]))


# -- file format --------------------------------------------------------------------


def test_hompath_text_round_trip():
    p = path_to_automorphism(KneserParams(2, 3), DihedralElement.tau(KneserParams(2, 3)))
    text = hompath_to_text(p)
    assert text.splitlines()[0] == f"hompath 2 3 stable 5 {len(p)}"
    f = hompath_from_text(text)
    assert f.entries == p.entries and (f.n, f.k, f.kind, f.palette) == (2, 3, "stable", 5)
    with pytest.raises(GraphError):
        hompath_from_text("hompath 2 3 stable 5 9\n0 0 1 1 2\n")


def test_printed_rows_are_homomorphisms_in_cycle_order():
    C5 = make_cycle(5)
    for r in BASE_TABLE_ROWS:
        assert exp_adjacent(Mapping(C5, K3, r), Mapping(C5, K3, r))
