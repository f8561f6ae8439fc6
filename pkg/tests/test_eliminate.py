import json
import random
from fractions import Fraction

import pytest

from quarterwalks import (
    EliminationConfig,
    EliminationError,
    EliminationFailure,
    GESSEL,
    KREWERAS,
    ModuleVector,
    MultiPoly,
    OreOperator,
    RatFunc,
    UniOperator,
    eliminate_shifts,
    generate_module,
    origin_sequence,
    reduce_mod_ij,
    takayama_pipeline,
    trivial_operator,
    uni_from_json,
    uni_to_json,
)
from quarterwalks.exactmath import poly_from
from test_ore import random_operator

N = MultiPoly.variable("n")
I = MultiPoly.variable("i")
J = MultiPoly.variable("j")
SN = OreOperator.shift("Sn")
SI = OreOperator.shift("Si")

# the closed-form recurrence of the Kreweras origin counts, order 3
P0 = UniOperator({3: RatFunc(poly_from([54, 21, 2])), 0: RatFunc(poly_from([-108, -162, -54]))})


def test_reduce_examples():
    r = OreOperator.from_poly(N) * SN + OreOperator.from_poly(I) * SI
    v = reduce_mod_ij(r)
    assert set(v.components) == {(0, 0)}
    assert v.components[(0, 0)].terms[1] == RatFunc(poly_from([0, 1]))

    t = trivial_operator(GESSEL)
    v = reduce_mod_ij(t)
    expected = {
        (1, 1): UniOperator({1: RatFunc(1)}),
        (2, 1): UniOperator({0: RatFunc(-1)}),
        (0, 1): UniOperator({0: RatFunc(-1)}),
        (2, 2): UniOperator({0: RatFunc(-1)}),
        (0, 0): UniOperator({0: RatFunc(-1)}),
    }
    assert v.components == expected

    all_i = OreOperator.from_poly(I) * random_operator(random.Random(1), max_terms=4)
    assert reduce_mod_ij(all_i).is_zero()


def test_reduce_is_module_map():
    # c(n) S_n^e commutes with the i = j = 0 substitution
    rng = random.Random(71)
    for _ in range(100):
        r = random_operator(rng, max_terms=4)
        e = rng.randint(0, 2)
        coeffs = [rng.randint(-5, 5) for _ in range(rng.randint(1, 3))]
        if not any(coeffs):
            coeffs = [1]
        as_ore = OreOperator(
            {(e, 0, 0): MultiPoly({(k, 0, 0): Fraction(v) for k, v in enumerate(coeffs) if v})}
        )
        as_uni = UniOperator({e: RatFunc(poly_from(coeffs))})
        assert reduce_mod_ij(as_ore * r) == reduce_mod_ij(r).left_mul(as_uni)


def test_left_multiple_degeneracy():
    rng = random.Random(73)
    for _ in range(100):
        r = random_operator(rng, max_terms=4)
        assert reduce_mod_ij(OreOperator.from_poly(I) * r).is_zero()
        assert reduce_mod_ij(OreOperator.from_poly(J) * r).is_zero()


def test_generate_module_pure_generator():
    r = OreOperator({(2, 0, 0): N + 1, (0, 0, 0): MultiPoly.const(3)})
    vectors, dropped = generate_module([r], EliminationConfig())
    assert len(vectors) == 1 and not dropped
    assert set(vectors[0].components) == {(0, 0)}


def test_generate_module_trivial_operator_single_vector():
    t = trivial_operator(GESSEL)
    vectors, _ = generate_module([t], EliminationConfig(multiplier_bound=0))
    assert len(vectors) == 1
    assert vectors[0] == reduce_mod_ij(t)


def test_generate_module_multiples_differ():
    r = OreOperator({(0, 1, 0): I, (0, 0, 0): N})
    vectors, _ = generate_module([r], EliminationConfig())
    # multiples 1 and S_i: S_i shifts the coefficient i to i+1 before the
    # substitution, so the two reductions differ
    assert len(vectors) == 2
    assert vectors[0] != vectors[1]
    assert vectors[0].components == {(0, 0): UniOperator({0: RatFunc(poly_from([0, 1]))})}
    assert (2, 0) in vectors[1].components


def test_generate_module_all_zero_errors():
    # with multiples suppressed the i-divisible generator has nothing left;
    # with multiples allowed S_i recovers a nonzero vector from it
    r = OreOperator.from_poly(I)
    with pytest.raises(EliminationError, match="reduce to zero"):
        generate_module([r], EliminationConfig(multiplier_bound=0))
    vectors, _ = generate_module([r], EliminationConfig())
    assert vectors


def test_truncation_drops_components():
    t = trivial_operator(GESSEL)
    vectors, dropped = generate_module([t], EliminationConfig(truncation=1))
    assert dropped
    assert all(p[0] + p[1] <= 1 for v in vectors for p in v.components)


def test_eliminate_concentrated_vector_returned():
    v = ModuleVector({(0, 0): P0})
    res, diag = eliminate_shifts([v], EliminationConfig())
    assert res is not None
    assert res.cleared() == P0.cleared()


def test_eliminate_duplicate_vectors_no_change():
    a = UniOperator({1: RatFunc(poly_from([1, 1])), 0: RatFunc(3)})
    v1 = ModuleVector({(1, 0): a, (0, 0): P0})
    res1, _ = eliminate_shifts([v1, v1], EliminationConfig())
    res2, _ = eliminate_shifts([v1], EliminationConfig())
    assert (res1 is None) == (res2 is None)
    v2 = ModuleVector({(1, 0): a, (0, 0): UniOperator({0: RatFunc(5)})})
    got_pair, _ = eliminate_shifts([v1, v2], EliminationConfig())
    got_dup, _ = eliminate_shifts([v1, v2, v2, v1], EliminationConfig())
    assert got_pair is not None and got_dup is not None
    assert got_pair.cleared() == got_dup.cleared()


def test_eliminate_synthetic_combination():
    a = UniOperator({1: RatFunc(poly_from([1, 1])), 0: RatFunc(3)})
    b = UniOperator({2: RatFunc(poly_from([0, 2])), 0: RatFunc(5)})
    v1 = ModuleVector({(1, 0): a, (0, 0): b})
    v2 = ModuleVector({(1, 0): a, (0, 0): b - P0})
    res, _ = eliminate_shifts([v1, v2], EliminationConfig())
    assert res is not None and res.cleared() == P0.cleared()


def test_eliminate_accepts_rational_coefficients():
    # the module is over Q(n)[S_n]; denominators are cleared internally
    half = RatFunc(poly_from([1]), poly_from([0, 2]))  # 1/(2n)
    a = UniOperator({1: half, 0: RatFunc(Fraction(3, 7))})
    v1 = ModuleVector({(1, 0): a, (0, 0): UniOperator({0: half}) * P0})
    v2 = ModuleVector({(1, 0): a})
    res, _ = eliminate_shifts([v1, v2], EliminationConfig())
    assert res is not None and res.cleared() == P0.cleared()


def test_eliminate_failure_returns_none():
    v = ModuleVector({(1, 0): P0})
    res, diag = eliminate_shifts([v], EliminationConfig())
    assert res is None
    assert diag["pivot_positions"] == [(1, 0)]


def test_trivial_operator_alone_fails():
    t = trivial_operator(GESSEL)
    diagonal = origin_sequence(GESSEL, 40)
    with pytest.raises(EliminationFailure) as exc:
        takayama_pipeline([t], diagonal, EliminationConfig(retry_cap=2))
    assert exc.value.attempts  # dimensions attempted are reported


def test_retry_cap_zero_undersized_reports_failure():
    t = trivial_operator(GESSEL)
    diagonal = origin_sequence(GESSEL, 20)
    with pytest.raises(EliminationFailure) as exc:
        takayama_pipeline([t], diagonal, EliminationConfig(truncation=0, retry_cap=0))
    assert len(exc.value.attempts) == 1
    assert exc.value.attempts[0]["truncation"] == 0


def test_kreweras_pipeline_end_to_end(kreweras_certified):
    diagonal = origin_sequence(KREWERAS, 500)
    p = takayama_pipeline(kreweras_certified, diagonal, EliminationConfig())
    assert p.order() >= 3
    assert p.annihilates(diagonal, range(0, 501 - p.order()))
    # independent check against the closed-form recurrence's solutions:
    # P0 annihilates the same sequence
    assert P0.annihilates(diagonal, range(0, 498))


def test_generator_monotonicity(kreweras_certified):
    diagonal = origin_sequence(KREWERAS, 200)
    p_small = takayama_pipeline(kreweras_certified[:3], diagonal, EliminationConfig())
    p_full = takayama_pipeline(kreweras_certified, diagonal, EliminationConfig())
    assert p_full.order() <= p_small.order()


def test_uni_operator_arithmetic():
    a = UniOperator({1: RatFunc(poly_from([0, 1]))})  # n Sn
    b = UniOperator({1: RatFunc(1)})
    # Ore product: (n Sn)(Sn) = n Sn^2, (Sn)(n Sn) = (n+1) Sn^2
    assert (a * b).terms == {2: RatFunc(poly_from([0, 1]))}
    assert (b * a).terms == {2: RatFunc(poly_from([1, 1]))}


def test_uni_cleared_primitive():
    p = UniOperator({1: RatFunc(poly_from([Fraction(1, 2), 1])), 0: RatFunc(poly_from([2]))})
    cleared = p.cleared()
    assert cleared == {1: [1, 2], 0: [4]}


def test_uni_json_round_trip():
    data = uni_to_json(P0)
    text = json.dumps(data, sort_keys=True)
    back = uni_from_json(json.loads(text))
    assert back == P0
    assert json.dumps(uni_to_json(back), sort_keys=True) == text
    # rational coefficients round-trip too
    q = UniOperator({2: RatFunc(poly_from([Fraction(2, 3)]), poly_from([1, 1])), 0: RatFunc(5)})
    assert uni_from_json(uni_to_json(q)) == q


def test_uni_json_rejects_inconsistent_cleared():
    data = uni_to_json(P0)
    data["cleared"][0]["coeffs"][0] = "999"
    with pytest.raises(ValueError, match="cleared"):
        uni_from_json(data)
