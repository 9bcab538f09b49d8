import random

import pytest

from twinskein.alexander import (
    LinkCode,
    alexander_at_t_squared,
    alexander_symmetrized,
    braid_closure,
    braid_closure_knot,
    conway,
    diagram_to_link,
    link_to_diagram,
)
from twinskein.constructions import ClassicalKnotCode, table_knot
from twinskein.diagram import DiagramError
from twinskein.laurent import LaurentPoly
from twinskein.moves import (
    apply_r1,
    apply_r2,
    apply_r3,
    find_r1_moves,
    find_r2_moves,
    find_r3_moves,
)

Z2 = LaurentPoly({2: 1})
ONE = LaurentPoly.one()

#: Conway polynomials of the bundled knots (classical table values).
NABLA = {
    "unknot": {0: 1},
    "3_1": {0: 1, 2: 1},
    "4_1": {0: 1, 2: -1},
    "5_1": {0: 1, 2: 3, 4: 1},
    "5_2": {0: 1, 2: 2},
    "6_1": {0: 1, 2: -2},
    "6_2": {0: 1, 2: -1, 4: -1},
    "6_3": {0: 1, 2: 1, 4: 1},
    "7_1": {0: 1, 2: 6, 4: 5, 6: 1},
    "7_2": {0: 1, 2: 3},
    "7_3": {0: 1, 2: 5, 4: 2},
    "7_5": {0: 1, 2: 4, 4: 2},
    "8_1": {0: 1, 2: -3},
    "8_19": {0: 1, 2: 5, 4: 5, 6: 1},
}


class TestConwayBaseCases:
    def test_unknot(self):
        assert conway(ClassicalKnotCode((), {})) == ONE

    def test_two_component_unlink(self):
        code = LinkCode(((), ()), {})
        assert conway(code) == LaurentPoly.zero()

    def test_trefoil(self):
        assert conway(table_knot("3_1")) == ONE + Z2

    def test_figure_eight(self):
        assert conway(table_knot("4_1")) == ONE - Z2

    def test_hopf_link(self):
        # positive Hopf link: closure of s1 s1 on two strands
        link = braid_closure([1, 1])
        assert conway(link) == LaurentPoly({1: 1})

    @pytest.mark.parametrize("name", sorted(NABLA))
    def test_table_pins(self, name):
        assert conway(table_knot(name)) == LaurentPoly(NABLA[name])


class TestConwayInvariance:
    def test_r_move_invariance_on_braid_closures(self):
        rng = random.Random(20240815)
        checked = 0
        while checked < 60:
            word = [rng.choice([1, -1, 2, -2, 3, -3])
                    for _ in range(rng.randint(3, 8))]
            link = braid_closure(word)
            base = conway(link)
            d = link_to_diagram(link)
            moved = d
            for _ in range(rng.randint(1, 3)):
                options = ([("r1", p) for p in find_r1_moves(moved)]
                           + [("r2", p) for p in find_r2_moves(moved)]
                           + [("r3", p) for p in find_r3_moves(moved)])
                if not options:
                    break
                kind, p = rng.choice(options)
                moved = {"r1": apply_r1, "r2": apply_r2,
                         "r3": apply_r3}[kind](moved, p)
            assert conway(diagram_to_link(moved)) == base
            checked += 1

    def test_cut_point_independence(self):
        k = table_knot("5_2")
        base = conway(k)
        n = len(k.passages)
        for cut in range(n):
            rotated = ClassicalKnotCode(
                k.passages[cut:] + k.passages[:cut], dict(k.crossings))
            assert conway(rotated) == base


class TestAlexander:
    def test_unknot(self):
        assert alexander_symmetrized(ClassicalKnotCode((), {})) == ONE

    def test_trefoil_in_u(self):
        # substitute z = u - u^-1 into 1 + z^2
        assert alexander_symmetrized(table_knot("3_1")) == \
            LaurentPoly({-2: 1, 0: -1, 2: 1})

    def test_trefoil_at_t_squared(self):
        assert alexander_at_t_squared(table_knot("3_1")) == \
            LaurentPoly({-2: 1, 0: -1, 2: 1})

    def test_always_symmetric(self):
        for name in NABLA:
            assert alexander_symmetrized(table_knot(name)).is_symmetric()

    def test_u_form_and_t_squared_form_agree(self):
        # Delta_K(t^2) is the u-form read with u -> t: identical term data
        for name in ("3_1", "4_1", "6_2"):
            sym = alexander_symmetrized(table_knot(name))
            assert sym.pairs() == alexander_at_t_squared(table_knot(name)).pairs()


class TestConwayStructure:
    def test_nonnegative_exponents(self):
        for name in NABLA:
            nabla = conway(table_knot(name))
            assert nabla.min_exponent() >= 0

    def test_knot_constant_term_is_one(self):
        for name in NABLA:
            assert conway(table_knot(name)).coefficient(0) == 1

    def test_split_link_is_zero(self):
        # braid closure of a word not mixing the strand pairs
        link = braid_closure([1, -1], strands=3)
        assert len(link.components) >= 2
        assert conway(link) == LaurentPoly.zero()


class TestBraidClosure:
    def test_trefoil_word(self):
        k = braid_closure_knot([1, 1, 1])
        assert conway(k) == ONE + Z2

    def test_multi_component_rejected_for_knot(self):
        with pytest.raises(DiagramError):
            braid_closure_knot([1, 1])

    def test_bad_letter(self):
        with pytest.raises(DiagramError):
            braid_closure([3], strands=2)
