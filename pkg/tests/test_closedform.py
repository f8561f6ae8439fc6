import math
import random
import warnings
from fractions import Fraction

import pytest

from quarterwalks import (
    HypergeomTerm,
    RatFunc,
    UniOperator,
    check_recurrence_on_sequence,
    closed_form_value,
    gessel_rhs,
    hypergeom_term,
    kreweras_rhs,
    max_nonneg_root,
    nonneg_integer_roots,
    pochhammer,
    prove_equality,
    symbolic_satisfies,
)
from quarterwalks.exactmath import poly_from, poly_mul, poly_scale

# order-3 recurrence of the interlaced Kreweras origin counts
P0 = UniOperator({3: RatFunc(poly_from([54, 21, 2])), 0: RatFunc(poly_from([-108, -162, -54]))})
# order-2 recurrence of the interlaced Gessel origin counts
PG = UniOperator(
    {
        2: RatFunc(poly_mul(poly_from([10, 3]), poly_from([4, 1]))),
        0: RatFunc(poly_scale(poly_mul(poly_from([5, 3]), poly_from([1, 1])), -16)),
    }
)


def test_pochhammer_examples():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(0, 0) == 1
    assert pochhammer(Fraction(5, 6), 2) == Fraction(55, 36)
    for k in range(8):
        assert pochhammer(1, k) == math.factorial(k)


def test_gessel_rhs_values():
    assert [gessel_rhs(m) for m in range(6)] == [1, 2, 11, 85, 782, 8004]


def test_kreweras_rhs_values():
    assert [kreweras_rhs(m) for m in range(5)] == [1, 2, 16, 192, 2816]


def test_rhs_integrality_holds_far_out():
    for m in range(0, 60):
        gessel_rhs(m)
        kreweras_rhs(m)


def test_rhs_match_enumeration(gessel_oracle, kreweras_oracle):
    for m in range(21):
        assert gessel_rhs(m) == gessel_oracle.value(2 * m, 0, 0)
    for m in range(14):
        assert kreweras_rhs(m) == kreweras_oracle.value(3 * m, 0, 0)


def test_ratio_certificates():
    g = hypergeom_term("gessel")
    k = hypergeom_term("kreweras")
    assert g.ratio.eval(0) == 2 and g.initial == 1
    assert k.ratio.eval(0) == 2 and k.initial == 1
    for m in range(100):
        assert g.ratio.eval(m) * gessel_rhs(m) == gessel_rhs(m + 1)
        assert k.ratio.eval(m) * kreweras_rhs(m) == kreweras_rhs(m + 1)


def test_ratio_denominators_root_free():
    # construction would have raised; also evaluate directly on a window
    for which in ("gessel", "kreweras"):
        term = hypergeom_term(which)
        for m in range(50):
            term.ratio.eval(m)


def test_term_with_vanishing_denominator_rejected():
    with pytest.raises(ValueError, match="vanishes"):
        HypergeomTerm(RatFunc(poly_from([1]), poly_from([-3, 1])), Fraction(1), 1, 0)


def test_product_and_ratio_iteration_agree():
    g = hypergeom_term("gessel")
    base = g.base_values(201)
    for m in range(201):
        assert base[m] == gessel_rhs(m)
    k = hypergeom_term("kreweras")
    base = k.base_values(201)
    for m in range(201):
        assert base[m] == kreweras_rhs(m)


def test_interlaced_sequence_pattern():
    g = hypergeom_term("gessel")
    seq = g.sequence(10)
    assert seq == [1, 0, 2, 0, 11, 0, 85, 0, 782, 0, 8004]
    assert closed_form_value("kreweras", 6) == 16
    assert closed_form_value("kreweras", 7) == 0


def test_check_recurrence_first_order_on_base_sequence():
    den = poly_mul(poly_from([2, 1]), poly_from([3, 2]))  # (m+2)(2m+3)
    num = poly_scale(poly_mul(poly_from([1, 3]), poly_from([2, 3])), 6)
    p = UniOperator({1: RatFunc(den), 0: -RatFunc(num)})
    seq = [kreweras_rhs(m) for m in range(202)]
    assert check_recurrence_on_sequence(p, seq, range(201))
    shifted = seq[1:]
    assert not check_recurrence_on_sequence(p, shifted, range(195))


def test_check_recurrence_zero_operator_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert check_recurrence_on_sequence(UniOperator.zero(), [1, 2, 3], range(2))
    assert any("vacuous" in str(w.message) for w in caught)


def test_symbolic_satisfies_builtins():
    k = hypergeom_term("kreweras")
    g = hypergeom_term("gessel")
    assert symbolic_satisfies(P0, k)
    assert symbolic_satisfies(PG, g)
    assert not symbolic_satisfies(UniOperator({1: RatFunc(1), 0: RatFunc(-1)}), g)


def test_symbolic_satisfies_first_order_base_terms():
    for which in ("gessel", "kreweras"):
        term = hypergeom_term(which)
        base = HypergeomTerm(term.ratio, term.initial, 1, 0)
        p = UniOperator({1: RatFunc(term.ratio.den), 0: -RatFunc(term.ratio.num)})
        assert symbolic_satisfies(p, base)


def test_symbolic_agrees_with_numeric_windows():
    rng = random.Random(83)
    k = hypergeom_term("kreweras")
    seq = k.sequence(260)
    true_count = 0
    for _ in range(50):
        if rng.random() < 0.5:
            # a left multiple of P0 stays an annihilator
            e = rng.randint(0, 2)
            c = poly_from([rng.randint(-4, 4) for _ in range(rng.randint(1, 3))])
            if not any(c):
                c = poly_from([1])
            p = UniOperator({e: RatFunc(c)}) * P0
        else:
            p = UniOperator(
                {
                    rng.randint(0, 3): RatFunc(poly_from([rng.randint(-4, 4), 1])),
                    rng.randint(4, 6): RatFunc(poly_from([rng.randint(1, 4)])),
                }
            )
        symbolic = symbolic_satisfies(p, k)
        numeric = check_recurrence_on_sequence(p, seq, range(250 - p.order()))
        if symbolic:
            true_count += 1
            assert numeric
        else:
            assert not numeric
    assert true_count >= 10


def test_nonneg_integer_roots():
    assert nonneg_integer_roots([6, -5, 1]) == [2, 3]  # (n-2)(n-3)
    assert nonneg_integer_roots([1, 1]) == []
    assert nonneg_integer_roots([0, 0, 1]) == [0]
    assert max_nonneg_root([1, 1]) == -1
    assert max_nonneg_root([0, -7, 1]) == 7


def test_prove_equality_builtins(gessel_oracle, kreweras_oracle):
    k = hypergeom_term("kreweras")
    g = hypergeom_term("gessel")
    v = prove_equality(P0, k, kreweras_oracle)
    assert v.proved and v.checked_initial_values == 3
    v = prove_equality(PG, g, gessel_oracle)
    assert v.proved and v.checked_initial_values == 2


def test_prove_equality_extends_past_singular_indices(kreweras_oracle):
    # scale the recurrence so its leading coefficient vanishes at n = 4:
    # uniqueness needs initial values through order + 4
    k = hypergeom_term("kreweras")
    scaled = UniOperator({0: RatFunc(poly_from([-4, 1]))}) * P0
    v = prove_equality(scaled, k, kreweras_oracle)
    assert v.proved
    assert v.singular_bound == 4
    assert v.checked_initial_values == 3 + 4 + 1


def test_prove_equality_failure_modes(kreweras_oracle):
    k = hypergeom_term("kreweras")

    class Tweaked:
        def value(self, n, i, j):
            return kreweras_oracle.value(n, i, j) + (1 if n == 1 else 0)

    v = prove_equality(P0, k, Tweaked())
    assert v.status == "FAILED(initial-values)"
    assert v.failing_index == 1
    wrong = UniOperator({3: RatFunc(1), 0: RatFunc(-1)})
    v = prove_equality(wrong, k, kreweras_oracle)
    assert v.status == "FAILED(symbolic-recurrence)"
