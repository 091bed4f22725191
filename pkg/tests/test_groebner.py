import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charp.errors import DegreeLimitError
from charp.groebner import (
    INFINITE,
    MINUS_INFINITY,
    Ideal,
    VectorElement,
    buchberger,
    hilbert_numerator,
    ideal_gb,
    ideal_intersection,
    module_length,
    monomial_dimension,
    pot_key,
    standard_monomials,
    syzygy_module,
    vanishing_order_at_1,
)
from charp.polycore import PolyRing, format_poly, mdeg, parse_poly
from oracles import (
    count_standard_monomials,
    hs_coefficients,
    ideal_member,
    monomials_of_degree,
    vector_in_span,
)

R2 = PolyRing(2, ["x", "y"])
R3 = PolyRing(3, ["x", "y"])
R23 = PolyRing(2, ["x", "y", "z"])


def P(text, ring=R2):
    return parse_poly(text, ring)


def V(text, ring=R2):
    return VectorElement.from_poly(P(text, ring))


class TestBuchberger:
    def test_spair_reduction_finds_y_cubed(self):
        gens = [P("x^2"), P("x*y + y^2")]
        gb = ideal_gb(gens, R2)
        lead_monos = {g.lead_monomial() for g in gb}
        assert (0, 3) in lead_monos
        # cross-check membership against the dense span oracle, degrees <= 3
        I = Ideal(R2, gens)
        for d in range(4):
            for m in monomials_of_degree(2, d):
                f = R2.monomial(m)
                assert I.contains(f) == ideal_member(f, gens, R2)

    def test_monomial_generators_stay_put(self):
        assert [format_poly(g) for g in ideal_gb([P("x"), P("y")], R2)] == ["y", "x"]

    def test_zero_input(self):
        assert ideal_gb([R2.zero()], R2) == []

    def test_every_spair_of_output_reduces_to_zero(self):
        gens = [P("x^2 + y*z", R23), P("x*y + z^2", R23), P("y^3", R23)]
        gb = buchberger([VectorElement.from_poly(g) for g in gens], 1, [0], R23)
        basis = gb.basis
        field = R23.field
        from charp.polycore import mdiv, mlcm

        for i in range(len(basis)):
            for j in range(i):
                (pi, mi), ci = basis[i].lead()
                (pj, mj), cj = basis[j].lead()
                if pi != pj:
                    continue
                L = mlcm(mi, mj)
                s = basis[i].term_mul(mdiv(L, mi), field.inv(ci)).sub(
                    basis[j].term_mul(mdiv(L, mj), field.inv(cj))
                )
                assert gb.normal_form(s).is_zero()
        for g in gens:
            assert gb.contains(VectorElement.from_poly(g))

    def test_reduced_basis_is_deterministic_and_reduced(self):
        gens = [P("x^2 + y*z", R23), P("x*y + z^2", R23)]
        gb1 = ideal_gb(gens, R23)
        gb2 = ideal_gb(gens, R23)
        assert [format_poly(g) for g in gb1] == [format_poly(g) for g in gb2]
        # no term of any element is divisible by another lead
        from charp.polycore import mdivides

        leads = [g.lead_monomial() for g in gb1]
        for gi, g in enumerate(gb1):
            for m in g.terms:
                for li, lm in enumerate(leads):
                    if li != gi:
                        assert not mdivides(lm, m)

    def test_degree_cap(self):
        with pytest.raises(DegreeLimitError):
            ideal_gb([P("x^5 + x^3*y^2"), P("x^2*y^3 + y^5")], R2, degree_cap=5)


class TestNormalForm:
    def test_single_reduction(self):
        gb = buchberger([V("x^2 + y^2")], 1, [0], R2)
        assert format_poly(gb.normal_form(V("x^2")).coordinate(0)) == "y^2"

    def test_membership_gives_zero(self):
        gb = buchberger([V("x^2 + y^2")], 1, [0], R2)
        assert gb.normal_form(V("x^4 + y^4")).is_zero()  # (x^2+y^2)^2 in char 2

    def test_irreducible_passes_through(self):
        gb = buchberger([V("x")], 1, [0], R2)
        assert format_poly(gb.normal_form(V("y^3")).coordinate(0)) == "y^3"

    @given(st.integers(0, 3), st.integers(0, 3))
    @settings(max_examples=30, deadline=None)
    def test_invariant_under_adding_basis_multiples(self, a, b):
        gens = [V("x^2"), V("x*y + y^2")]
        gb = buchberger(gens, 1, [0], R2)
        v = V("x^3 + y^3")
        w = gb.basis[0].term_mul((a, b))
        assert gb.normal_form(v.add(w)).terms == gb.normal_form(v).terms


class TestSyzygies:
    def test_koszul_syzygy(self):
        syz, degs = syzygy_module([V("x"), V("y")], 1, [0], R2)
        assert len(syz) == 1
        assert [format_poly(c) for c in syz[0].coordinates()] == ["y", "x"]
        assert degs == [1, 1]

    def test_principal_nonzerodivisor_has_none(self):
        syz, _ = syzygy_module([V("x")], 1, [0], R2)
        assert syz == []

    def test_three_monomials_two_syzygies(self):
        gens = [V("x^2", R3), V("x*y", R3), V("y^2", R3)]
        syz, degs = syzygy_module(gens, 1, [0], R3)
        assert len(syz) == 2
        # soundness: every syzygy kills the generator row exactly
        for s in syz:
            total = R3.zero()
            for coeff, g in zip(s.coordinates(), gens):
                total = total + coeff * g.coordinate(0)
            assert total.is_zero()
        # completeness: every low-degree brute-force syzygy is in the span
        shifts = degs
        for degree in range(2, 5):
            brute = _brute_syzygies(gens, R3, degree, shifts)
            for vec in brute:
                assert vector_in_span(vec, syz, 3, shifts, R3)

    def test_zero_generator_gets_unit_syzygy(self):
        syz, _ = syzygy_module([V("x"), VectorElement(R2, 1, {})], 1, [0], R2)
        assert any(
            format_poly(s.coordinate(1)) == "1" and s.coordinate(0).is_zero()
            for s in syz
        )


def _brute_syzygies(gens, ring, degree, shifts):
    """All syzygies of homogeneous degree `degree` by dense elimination."""
    from oracles import monomials_of_degree, rank_mod_p

    cols = []
    labels = []
    target = sorted(monomials_of_degree(ring.n, degree), key=lambda m: m)
    tindex = {m: i for i, m in enumerate(target)}
    for j, g in enumerate(gens):
        gpoly = g.coordinate(0)
        for mu in monomials_of_degree(ring.n, degree - shifts[j]):
            vec = [0] * len(target)
            for m, c in gpoly.terms.items():
                from charp.polycore import mmul

                vec[tindex[mmul(m, mu)]] = c
            cols.append(vec)
            labels.append((j, mu))
    # kernel of the column map, via row reduction of the transpose
    p = ring.p
    ncols = len(cols)
    if ncols == 0:
        return []
    mat = [[cols[c][r] for c in range(ncols)] for r in range(len(target))]
    # gaussian elimination tracking free columns
    pivots = {}
    rank = 0
    work = [row[:] for row in mat]
    for col in range(ncols):
        piv = None
        for r in range(rank, len(work)):
            if work[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], p - 2, p)
        for r in range(len(work)):
            if r != rank and work[r][col] % p:
                f = (work[r][col] * inv) % p
                work[r] = [(a - f * b) % p for a, b in zip(work[r], work[rank])]
        pivots[col] = rank
        rank += 1
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        sol = [0] * ncols
        sol[free] = 1
        for col, r in pivots.items():
            inv = pow(work[r][col], p - 2, p)
            sol[col] = (-work[r][free] * inv) % p
        terms = {}
        for c, val in enumerate(sol):
            if val:
                j, mu = labels[c]
                terms[(j, mu)] = val
        out.append(VectorElement(ring, len(gens), terms))
    return out


class TestDimension:
    def test_principal_power(self):
        assert Ideal(R2, [P("x^2")]).dimension() == 1

    def test_zero_ideal(self):
        assert Ideal(R2, []).dimension() == 2

    def test_unit_ideal(self):
        assert Ideal(R2, [P("1")]).dimension() == MINUS_INFINITY

    def test_agrees_with_hilbert_vanishing_order(self):
        corpus = [
            Ideal(R2, [P("x^2")]),
            Ideal(R2, [P("x^2"), P("y^3")]),
            Ideal(R23, [P("x*y", R23)]),
            Ideal(R23, [P("x^2 + y*z", R23), P("x*y + z^2", R23)]),
            Ideal(R3, [P("x^2", R3), P("x*y", R3)]),
        ]
        for I in corpus:
            num = I.hilbert_numerator()
            dim = I.dimension()
            assert dim == I.ring.n - vanishing_order_at_1(num)

    def test_dimension_via_hilbert_growth_oracle(self):
        # lt ideal (x^2) in 2 vars: counts grow linearly => dim 1
        counts = [count_standard_monomials([P("x^2")], R2, d) for d in range(6)]
        assert counts == [1, 2, 2, 2, 2, 2]
        assert Ideal(R2, [P("x^2")]).dimension() == 1


class TestHilbertNumerator:
    def test_single_power(self):
        assert hilbert_numerator([(2, 0)], 2) == {0: 1, 2: -1}

    def test_zero_ideal(self):
        assert hilbert_numerator([], 2) == {0: 1}

    def test_complete_intersection(self):
        num = hilbert_numerator([(2, 0), (0, 3)], 2)
        assert num == {0: 1, 2: -1, 3: -1, 5: 1}

    def test_series_matches_monomial_counts(self):
        cases = [
            ([(2, 0)], R2),
            ([(2, 0), (0, 3)], R2),
            ([(2, 1), (1, 2)], R2),
            ([(1, 1, 0), (0, 2, 1), (3, 0, 0)], R23),
        ]
        for lts, ring in cases:
            num = hilbert_numerator(lts, ring.n)
            series = hs_coefficients(num, ring.n, 6)
            gens = [ring.monomial(m) for m in lts]
            counted = [count_standard_monomials(gens, ring, d) for d in range(7)]
            assert series == counted


class TestLength:
    def test_box_ideal(self):
        gb = buchberger([V("x^2"), V("y^3")], 1, [0], R2)
        assert module_length(gb) == 6
        assert set(standard_monomials([(2, 0), (0, 3)], 2)) == {
            (0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2),
        }

    def test_residue_field(self):
        gb = buchberger([V("x"), V("y")], 1, [0], R2)
        assert module_length(gb) == 1

    def test_positive_dimension_is_infinite(self):
        gb = buchberger([V("x")], 1, [0], R2)
        assert module_length(gb) == INFINITE

    def test_two_code_paths_agree(self):
        from charp.groebner import quotient_hilbert_polynomial

        cases = [
            [P("x^2"), P("y^3")],
            [P("x^2 + y^2"), P("x*y")],
            [P("x^3"), P("x*y + y^2")],
        ]
        for gens in cases:
            I = Ideal(R2, gens)
            gb = buchberger([VectorElement.from_poly(g) for g in gens], 1, [0], R2)
            direct = module_length(gb)
            hp = quotient_hilbert_polynomial(I.lt_monomials(), 2)
            assert hp is not None
            assert direct == sum(hp.values())


class TestIdealIntersection:
    def test_principal_intersection(self):
        got = ideal_intersection([P("x")], [P("y")], R2)
        gb = ideal_gb(got, R2)
        assert [format_poly(g) for g in gb] == ["x*y"]

    def test_with_containment(self):
        got = ideal_intersection([P("x")], [P("x"), P("y")], R2)
        gb = ideal_gb(got, R2)
        assert [format_poly(g) for g in gb] == ["x"]


class TestModuleOrder:
    def test_pot_position_dominates(self):
        assert pot_key((0, (0, 0))) > pot_key((1, (5, 5)))

    def test_buchberger_module_case(self):
        # submodule of R^2 generated by (x, y) and (y, x) over F_2
        g1 = VectorElement(R2, 2, {(0, (1, 0)): 1, (1, (0, 1)): 1})
        g2 = VectorElement(R2, 2, {(0, (0, 1)): 1, (1, (1, 0)): 1})
        gb = buchberger([g1, g2], 2, [0, 0], R2)
        for g in gb.basis:
            assert g.is_homogeneous([0, 0])
        assert gb.contains(g1.add(g2))


class TestSyzygiesOfBasis:
    def test_matrix_shape_for_monomial_basis(self):
        from charp.groebner import buchberger, syzygies

        gb = buchberger([V("x"), V("y")], 1, [0], R2)
        mat = syzygies(gb)
        assert len(mat) == 2 and len(mat[0]) == 1
        got = {format_poly(mat[0][0]), format_poly(mat[1][0])}
        assert got == {"y", "x"}
        # soundness: basis row times syzygy matrix is zero
        for j in range(len(mat[0])):
            total = R2.zero()
            for i, g in enumerate(gb.basis):
                total = total + g.coordinate(0) * mat[i][j]
            assert total.is_zero()

    def test_no_syzygies_for_principal(self):
        from charp.groebner import buchberger, syzygies

        gb = buchberger([V("x")], 1, [0], R2)
        assert syzygies(gb) == [[]]


class TestBuchbergerFuzz:
    def test_membership_matches_dense_oracle_on_random_ideals(self):
        import random as _random

        for seed in range(12):
            rng = _random.Random(seed)
            ring = R23 if seed % 2 else R2
            gens = []
            for _ in range(rng.randrange(1, 4)):
                deg = rng.randrange(1, 3)
                f = ring.zero()
                for m in monomials_of_degree(ring.n, deg):
                    if rng.randrange(3) == 0:
                        f = f + ring.monomial(m, rng.randrange(1, ring.p))
                if not f.is_zero():
                    gens.append(f)
            if not gens:
                continue
            I = Ideal(ring, gens)
            for d in range(4):
                for m in monomials_of_degree(ring.n, d):
                    f = ring.monomial(m)
                    assert I.contains(f) == ideal_member(f, gens, ring), (seed, m)
