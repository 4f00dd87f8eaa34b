from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttkit.fields import QQ
from ttkit.polyring import GREVLEX, PolyRing, radical_equal
from ttkit.polymod import (
    ModuleMap,
    PresentedComplex,
    PresentedModule,
    annihilator,
    bounded_membership,
    cohomology,
    direct_sum,
    graded_dim,
    map_cokernel,
    map_is_isomorphism,
    map_kernel,
    module_groebner,
    module_tensor,
    monomials_of_degree,
    multiplication_matrix,
    standard_pairs,
    submodule_lift,
    submodule_presentation,
    syzygy_basis,
    unit_vector,
    vec_combination,
    vec_is_zero,
    vector_divmod,
    vector_normal_form,
    zero_vector,
)

RXY = PolyRing(QQ, ("x", "y"))
RX = PolyRing(QQ, ("x",))


def P(t, ring=RXY):
    return ring.parse_poly(t)


def V(*texts, ring=RXY):
    return tuple(ring.parse_poly(t) for t in texts)


# -- syzygies ------------------------------------------------------------------


def test_syzygy_of_x_y_is_koszul():
    syz = syzygy_basis([V("x"), V("y")], 1)
    assert len(syz) == 1
    v = syz[0]
    # up to sign and scale this must be (y, -x)
    assert vec_is_zero(vec_combination([V("x"), V("y")], v))
    assert radical_equal([v[0]], [P("y")]) and radical_equal([v[1]], [P("x")])


def test_syzygy_of_identity_columns_empty():
    cols = [unit_vector(RXY, 2, 0), unit_vector(RXY, 2, 1)]
    assert syzygy_basis(cols, 2) == []


def test_syzygy_of_zero_columns_is_everything():
    cols = [zero_vector(RXY, 1), zero_vector(RXY, 1)]
    syz = syzygy_basis(cols, 1)
    gb = module_groebner(syz)
    for j in range(2):
        assert vec_is_zero(vector_normal_form(unit_vector(RXY, 2, j), gb))


def _bounded_kernel_vectors(cols, rank, ring, degree_bound):
    """Oracle: all kernel vectors with entries of degree <= degree_bound,
    found by exact linear algebra over the monomial basis."""
    from ttkit.fields import Matrix, kernel_basis

    monos = []
    for d in range(degree_bound + 1):
        monos.extend(monomials_of_degree(ring, d))
    unknowns = [(j, m) for j in range(len(cols)) for m in monos]
    eq_monos = []
    for d in range(2 * degree_bound + 3):
        eq_monos.extend(monomials_of_degree(ring, d))
    rows = []
    for pos in range(rank):
        for em in eq_monos:
            row = []
            for (j, m) in unknowns:
                prod = ring.monomial(m) * cols[j][pos]
                row.append(prod.coeff_of(em))
            rows.append(row)
    mat = Matrix.from_rows(ring.field, rows)
    kb = kernel_basis(mat)
    out = []
    for c in range(kb.cols):
        vec = [ring.zero()] * len(cols)
        for i, (j, m) in enumerate(unknowns):
            coeff = kb.at(i, c)
            if not ring.field.is_zero(coeff):
                vec[j] = vec[j] + ring.monomial(m, coeff)
        out.append(tuple(vec))
    return out


def test_syzygy_completeness_against_linear_algebra_oracle():
    cols = [V("x^2"), V("x*y"), V("y^2")]
    syz = syzygy_basis(cols, 1)
    for v in syz:
        assert vec_is_zero(vec_combination(cols, v))
    gb = module_groebner(syz)
    for v in _bounded_kernel_vectors(cols, 1, RXY, 2):
        assert vec_is_zero(vector_normal_form(v, gb))


def test_koszul_three_variable_syzygies():
    r = PolyRing(QQ, ("x", "y", "z"))
    cols = [(r.var("x"),), (r.var("y"),), (r.var("z"),)]
    syz = syzygy_basis(cols, 1)
    for v in syz:
        assert vec_is_zero(vec_combination(cols, v))
    gb = module_groebner(syz)
    koszul = [
        (r.var("y"), -r.var("x"), r.zero()),
        (r.var("z"), r.zero(), -r.var("x")),
        (r.zero(), r.var("z"), -r.var("y")),
    ]
    for v in koszul:
        assert vec_is_zero(vector_normal_form(v, gb))


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
@settings(max_examples=20, deadline=None)
def test_syzygy_property_random_monomial_columns(a, b):
    cols = [V(f"x^{a}*y"), V(f"x*y^{b}")]
    for v in syzygy_basis(cols, 1):
        assert vec_is_zero(vec_combination(cols, v))


# -- division ------------------------------------------------------------------


def test_vector_divmod_reconstructs():
    basis = [V("x", "y"), V("0", "x^2")]
    v = V("x^2 + x*y", "x*y + y^2 + x^2*y")
    quots, rem = vector_divmod(v, basis)
    acc = rem
    for q, b in zip(quots, basis):
        acc = tuple(p + q * bp for p, bp in zip(acc, b))
    assert acc == v


# -- presented modules ------------------------------------------------------------


def test_annihilator_cyclic():
    m = PresentedModule.cyclic(RXY, [P("x*y - 1")])
    assert radical_equal(annihilator(m), [P("x*y - 1")])


def test_annihilator_free_is_zero_ideal():
    assert annihilator(PresentedModule.free(RXY, 2)) == []


def test_annihilator_of_direct_sum_is_intersection():
    m = direct_sum(PresentedModule.cyclic(RXY, [P("x")]), PresentedModule.cyclic(RXY, [P("y")]))
    assert radical_equal(annihilator(m), [P("x*y")])


def test_annihilator_zero_module_is_unit():
    z = PresentedModule.cyclic(RXY, [RXY.one()])
    ann = annihilator(z)
    assert ann and ann[0].is_constant()


def test_tensor_of_cyclic_modules_adds_ideals():
    a = PresentedModule.cyclic(RXY, [P("x")])
    b = PresentedModule.cyclic(RXY, [P("y")])
    t = module_tensor(a, b)
    assert radical_equal(annihilator(t), [P("x"), P("y")])


def test_support_multiplicativity_seed_cases():
    # ann(A/I tensor A/J) has the same radical as I + J
    cases = [
        ([P("x^2")], [P("y")]),
        ([P("x*y")], [P("x - 1")]),
        ([P("x - y")], [P("x + y")]),
    ]
    for i_gens, j_gens in cases:
        t = module_tensor(PresentedModule.cyclic(RXY, i_gens), PresentedModule.cyclic(RXY, j_gens))
        assert radical_equal(annihilator(t), i_gens + j_gens)


def test_is_zero_module():
    assert PresentedModule.cyclic(RXY, [RXY.one()]).is_zero()
    assert not PresentedModule.cyclic(RXY, [P("x")]).is_zero()
    assert PresentedModule.zero(RXY).is_zero()


def test_submodule_presentation_and_lift():
    free = PresentedModule.free(RXY, 2)
    gens = [V("x", "0"), V("0", "y")]
    sub, _ = submodule_presentation(gens, free)
    assert sub.rank == 2 and not sub.relations
    lift = submodule_lift(V("x^2*y", "0"), gens, free)
    assert lift is not None
    assert vec_combination(gens, lift) == V("x^2*y", "0")
    assert submodule_lift(V("1", "0"), gens, free) is None


def test_submodule_lift_respects_ambient_relations():
    amb = PresentedModule.cyclic(RXY, [P("x^2")])
    gens = [V("x")]
    lift = submodule_lift(V("x + x^2"), gens, amb)
    assert lift is not None
    diff = vec_combination(gens, lift)[0] - P("x + x^2")
    assert amb.contains_in_relations((diff,))


# -- maps -----------------------------------------------------------------------


def test_kernel_and_cokernel_of_multiplication():
    a = PresentedModule.free(RX, 1)
    f = ModuleMap(a, a, (V("x", ring=RX),))
    f.check_well_defined()
    k, _ = map_kernel(f)
    assert k.is_zero()
    c = map_cokernel(f)
    assert radical_equal(annihilator(c), [RX.var("x")])


def test_kernel_of_nilpotent_multiplication():
    m = PresentedModule.cyclic(RX, [P("x^2", RX)])
    f = ModuleMap(m, m, (V("x", ring=RX),))
    f.check_well_defined()
    k, gens = map_kernel(f)
    assert not k.is_zero()
    assert radical_equal(annihilator(k), [P("x", RX)])
    for g in gens:
        assert m.contains_in_relations(tuple(p * RX.var("x") for p in g))


def test_isomorphism_detector():
    m = PresentedModule.cyclic(RX, [P("x^2 - 1", RX)])
    two = ModuleMap(m, m, (V("2", ring=RX),))
    assert map_is_isomorphism(two)
    x = ModuleMap(m, m, (V("x", ring=RX),))
    assert map_is_isomorphism(x)  # x is a unit mod x^2 - 1
    m2 = PresentedModule.cyclic(RX, [P("x^2", RX)])
    assert not map_is_isomorphism(ModuleMap(m2, m2, (V("x", ring=RX),)))


def test_map_well_definedness_rejected():
    src = PresentedModule.cyclic(RX, [P("x", RX)])
    tgt = PresentedModule.free(RX, 1)
    bad = ModuleMap(src, tgt, (V("1", ring=RX),))
    with pytest.raises(Exception):
        bad.check_well_defined()


# -- complexes and cohomology -------------------------------------------------------


def koszul_xy():
    a0 = PresentedModule.free(RXY, 1)
    a1 = PresentedModule.free(RXY, 2)
    a2 = PresentedModule.free(RXY, 1)
    d0 = ModuleMap(a0, a1, (V("-y", "x"),))
    d1 = ModuleMap(a1, a2, (V("x"), V("y")))
    return PresentedComplex(RXY, -2, (a0, a1, a2), (d0, d1))


def test_koszul_complex_cohomology():
    c = koszul_xy()
    c.validate()
    h0 = cohomology(c, 0)
    assert radical_equal(annihilator(h0), [P("x"), P("y")])
    assert graded_dim(h0, [0] * h0.rank, 0) == 1
    assert graded_dim(h0, [0] * h0.rank, 1) == 0
    assert cohomology(c, -1).is_zero()
    assert cohomology(c, -2).is_zero()


def test_two_term_complex_cohomology():
    a = PresentedModule.free(RX, 1)
    d = ModuleMap(a, a, (V("x", ring=RX),))
    c = PresentedComplex(RX, -1, (a, a), (d,))
    c.validate()
    assert cohomology(c, -1).is_zero()
    h0 = cohomology(c, 0)
    assert radical_equal(annihilator(h0), [RX.var("x")])


def test_complex_validation_catches_nonzero_square():
    a = PresentedModule.free(RX, 1)
    d = ModuleMap(a, a, (V("x", ring=RX),))
    c = PresentedComplex(RX, 0, (a, a, a), (d, d))
    with pytest.raises(Exception):
        c.validate()


# -- graded dimensions ----------------------------------------------------------------


def test_graded_dim_of_free_module():
    free = PresentedModule.free(RXY, 1)
    assert [graded_dim(free, [0], d) for d in range(4)] == [1, 2, 3, 4]


def test_graded_dim_of_quotient():
    m = PresentedModule.cyclic(RXY, [P("x^2"), P("x*y")])
    assert [graded_dim(m, [0], d) for d in range(5)] == [1, 2, 1, 1, 1]


def test_graded_dim_with_weights():
    m = PresentedModule.free(RX, 2)
    assert graded_dim(m, [0, 1], 1) == 2  # x*e0 and e1


# -- finite-dimensional helpers ---------------------------------------------------------


def test_standard_pairs_finite_and_infinite():
    m = PresentedModule.cyclic(RX, [P("x^2 - 1", RX)])
    pairs = standard_pairs(m)
    assert pairs == [(0, (0,)), (0, (1,))]
    assert standard_pairs(PresentedModule.free(RX, 1), cap=64) is None


def test_multiplication_matrix_swap():
    m = PresentedModule.cyclic(RX, [P("x^2 - 1", RX)])
    pairs = standard_pairs(m)
    mat = multiplication_matrix(m, pairs, RX.var("x"))
    assert mat.at(0, 0) == Fraction(0) and mat.at(0, 1) == Fraction(1)
    assert mat.at(1, 0) == Fraction(1) and mat.at(1, 1) == Fraction(0)


def test_bounded_membership_examples():
    gens = [P("x^2 - y"), P("y^2 - 1")]
    assert bounded_membership(P("x^2 - y"), gens, 4)
    assert bounded_membership(P("x^2*y + x^2 - y^2 - y"), gens, 5)
    assert not bounded_membership(P("x"), gens, 6)
