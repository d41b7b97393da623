from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from _brute import _fm_feasible
from metricity.lp import (
    FarkasCertificate,
    check_farkas,
    check_point,
    eliminate,
    highs_probe,
    lp_feasible,
)

coef = st.integers(-3, 3).map(Fraction)


@st.composite
def systems(draw):
    nv = draw(st.integers(1, 4))
    row = st.tuples(st.dictionaries(st.integers(0, nv - 1), coef, min_size=1, max_size=nv),
                    coef)
    eqs = draw(st.lists(row, max_size=2))
    ineqs = draw(st.lists(row, max_size=6))
    return eqs, ineqs, list(range(nv))


@settings(max_examples=200, deadline=None)
@given(systems())
def test_exact_lp_matches_fourier_motzkin(system):
    eqs, ineqs, names = system
    res = lp_feasible(eqs, ineqs, names)
    assert res.feasible == _fm_feasible(eqs, ineqs)
    if res.feasible:
        assert check_point(eqs, ineqs, res.witness)


@settings(max_examples=150, deadline=None)
@given(systems())
def test_highs_probe_is_exactly_confirmed(system):
    eqs, ineqs, names = system
    probe = highs_probe(eqs, ineqs, names)
    truth = _fm_feasible(eqs, ineqs)
    if probe.status == "feasible":
        assert truth and check_point(eqs, ineqs, probe.witness)
    elif probe.status == "infeasible":
        assert not truth and check_farkas(eqs, ineqs, probe.certificate)


def test_farkas_certificate_check():
    # x >= 1 and -x >= 0
    ineqs = [({0: Fraction(1)}, Fraction(1)), ({0: Fraction(-1)}, Fraction(0))]
    assert check_farkas([], ineqs, FarkasCertificate(ineq_mult={0: Fraction(1), 1: Fraction(1)}))
    assert not check_farkas([], ineqs, FarkasCertificate(ineq_mult={0: Fraction(1)}))
    assert not check_farkas([], ineqs, FarkasCertificate(ineq_mult={0: Fraction(-1)}))
    probe = highs_probe([], ineqs, [0])
    assert probe.status == "infeasible"


def test_eliminate_detects_inconsistency():
    eqs = [({0: Fraction(1), 1: Fraction(1)}, Fraction(1)),
           ({0: Fraction(2), 1: Fraction(2)}, Fraction(3))]
    assert eliminate(eqs)[1] is False
    pivots, ok = eliminate(eqs[:1])
    assert ok and pivots == {0: {1: Fraction(-1), -1: Fraction(1)}}
