from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umemura import painleve as pv
from umemura.families import umemura_b
from umemura.ring import W, Z
from mpmath import mpf

GRID = pv.NumericConfig().t_grid
B = {"b1": "1/3", "b2": "1/5"}


def test_pvi_params_printed_relation():
    p = pv.pvi_params(pv.BValues.of("1/3", "1/5", "-1/2", 0), "printed")
    assert p.alpha == F(1, 8) and p.delta == F(-5, 8)
    assert p.beta == -F(8, 15) ** 2 / 2 and p.gamma == F(2, 15) ** 2 / 2


def test_pvi_params_hamiltonian_relation():
    p = pv.pvi_params(pv.BValues.of(0, 0, "-1/2", 0))
    assert p.delta == F(3, 8)
    # delta depends on b3 + b4 only, so the two ladder tuples agree
    s = F(5, 2)
    assert pv.pvi_params(pv.BValues.of(1, 2, s, 0)) == pv.pvi_params(pv.BValues.of(1, 2, 0, s))


@given(st.fractions(), st.sampled_from(pv.RELATIONS))
def test_pvi_params_symmetries(t, rel):
    assert pv.pvi_params(pv.BValues(F(0), F(0), F(0), F(0)), rel) == pv.PVIParams(0, 0, 0, 0)
    p = pv.pvi_params(pv.BValues(t, t, t, t), rel)
    assert p.alpha == 0 and p.gamma == 0


def test_bridge_values():
    with mpmath.workdps(50):
        br = pv.t_bridge(2)
        assert abs(br.v.c[0] - 3 / mpmath.sqrt(2)) < mpf(10) ** -45
        br = pv.t_bridge(F(4, 3))
        assert abs(br.v.c[0] - mpf(5) / 2) < mpf(10) ** -45
        assert abs(br.z.c[0] ** 2 - mpf(1) / 8) < mpf(10) ** -45
        assert abs(br.w.c[0] ** 2 - mpf(9) / 8) < mpf(10) ** -45
        assert abs(br.v_derivatives()[1] - pv.dv_dt(F(4, 3))) < mpf(10) ** -45
        assert pv.t_bridge(10 ** 12).z.c[0] < mpf(10) ** -5
    for bad in (1, F(1, 2), -3):
        with pytest.raises(ValueError):
            pv.t_bridge(bad)


def test_u_stack_examples():
    with mpmath.workdps(50):
        st_ = pv.u_stack(W * W, F(4, 3))
        assert abs(st_.value - mpf(9) / 8) < mpf(10) ** -45
        assert abs(st_.d1 - pv.dv_dt(F(4, 3)) / 4) < mpf(10) ** -45
        const = pv.u_stack(W * W - Z * Z, F(3, 2))
        assert abs(const.d1) + abs(const.d2) + abs(const.d3) < mpf(10) ** -45


def _fd_check(poly, t, b1=0, b2=0, log=False):
    digits = 50
    stack = pv.u_stack(poly, t, b1, b2, digits)

    def f(x):
        # evaluate at whatever precision the differentiator is running
        val = pv.u_stack(poly, x, b1, b2, mpmath.mp.dps).value
        return mpmath.log(abs(val)) if log else val

    with mpmath.workdps(digits):
        if log:
            want = [stack.d1 / stack.value,
                    stack.d2 / stack.value - (stack.d1 / stack.value) ** 2]
        else:
            want = [stack.d1, stack.d2, stack.d3]
        for order, w in enumerate(want, start=1):
            got = pv.central_difference(f, t, order, digits)
            assert abs(got - w) <= mpf(10) ** -20 * max(1, abs(w))


def test_finite_difference_cross_check_power():
    _fd_check(Z ** 4, F(3, 2))


@pytest.mark.parametrize("m", [1, 2])
def test_finite_difference_cross_check_log_tau(m):
    _fd_check(umemura_b(0, m), F(2), F(1, 3), F(1, 5), log=True)


def test_h_functions():
    t = F(5, 2)
    for m in range(3):
        h = pv.h_functions("h_nm", 1, m, 0, m + 1, t)
        with mpmath.workdps(50):
            assert abs(h.value + (2 * mpf(t.numerator) / t.denominator - 1) * (m + 1) ** 2 / 2) < mpf(10) ** -40
            assert abs(h.d2) < mpf(10) ** -40
    h0 = pv.h_functions("h0", 0, 0, 0, 0, F(3, 2))
    assert h0.value == 0 and h0.d1 == 0
    with pytest.raises(ValueError):
        pv.h_functions("bogus", 0, 0, 0, 0, 2)


def test_zero_of_tau_is_reported():
    with mpmath.workdps(50):
        br = pv.t_bridge(F(4, 3))
        with pytest.raises(pv.ZeroOfTau):
            pv.h_nm_jet(W * W * 8 - 9, br, 0, 0)


def test_evi_residual_vanishes_and_control_breaks():
    h = pv.h_functions("h_nm", 0, 1, F(1, 3), F(1, 5), F(4, 3))
    good = pv.BValues.of("1/3", "1/5", "3/2", 0)
    bad = pv.BValues.of("1/3", "1/5", "8/5", 0)
    with mpmath.workdps(50):
        assert abs(pv.evi_residual(h, good, F(4, 3))) < mpf(10) ** -35
        assert abs(pv.evi_residual(h, bad, F(4, 3))) > mpf(10) ** -5
        assert abs(pv.evi_residual(h, good, F(4, 3), squared=False)) > mpf(10) ** -5


def test_prop4_ii_exact_structure():
    rep = pv.sweep("PROP4_II", GRID, {"m": 2})
    assert rep.status == "pass"


def test_q_m_both_tuples_and_hbar():
    rep = pv.sweep("QM_PVI", [F(3, 2)], {**B, "m": 1})
    assert rep.status == "pass" and rep.params["reading"] == "family"
    assert pv.sweep("HBAR_EVI", [F(3, 2)], {**B, "m": 1}).status == "pass"
    printed = pv.sweep("QM_PVI", [F(3, 2)], {**B, "m": 1, "relation": "printed"})
    assert printed.status == "fail"


def test_other_reading_is_rejected():
    assert pv.sweep("QM_PVI", [F(3, 2)], {**B, "m": 2, "reading": "umemura"}).status == "fail"
    assert pv.sweep("QM_PVI", [F(3, 2)], {**B, "m": 0, "reading": "umemura"}).status == "singular"


def test_sweep_examples():
    assert pv.sweep("LEMMA8", GRID, {"n": 2, "m": 1, "b2": "1/5"}).status == "pass"
    assert pv.sweep("PROP4_III", GRID, {"n": 2, "m": 1, "b2": "1/5"}).status == "pass"
    empty = pv.sweep("LEMMA8", [], {"n": 2, "m": 1})
    assert empty.status == "pass" and empty.max_residual is None
    with pytest.raises(ValueError):
        pv.sweep("NOPE", [F(2)], {})


def test_digit_doubling_shrinks_residuals():
    for check, params in (("PROP4_I", {**B, "m": 2}), ("QM_PVI", {**B, "m": 1}),
                          ("LEMMA8", {"n": 3, "m": 1, "b2": "1/5"})):
        lo = pv.sweep(check, [F(2)], params, pv.NumericConfig(digits=50)).max_residual
        hi = pv.sweep(check, [F(2)], params, pv.NumericConfig(digits=100)).max_residual
        assert hi == 0 or lo / hi > mpf(10) ** 10


def test_grid_refinement_stays_below_tolerance():
    fine = [F(3, 2) + F(k, 20) for k in range(11)]
    assert pv.sweep("PROP4_I", fine, {**B, "m": 1}).status == "pass"


def test_report_is_deterministic():
    a = pv.sweep("PROP4_I", GRID, {**B, "m": 1}).to_json()
    b = pv.sweep("PROP4_I", GRID, {**B, "m": 1}).to_json()
    assert a == b


def test_config_validation():
    with pytest.raises(ValueError):
        pv.NumericConfig(digits=10)
    with pytest.raises(ValueError):
        pv.NumericConfig(t_grid=(F(1),))


@settings(max_examples=6, deadline=None)
@given(st.fractions(min_value=F(11, 10), max_value=F(5), max_denominator=12),
       st.fractions(min_value=F(-2), max_value=F(2), max_denominator=7),
       st.fractions(min_value=F(-2), max_value=F(2), max_denominator=7))
def test_prop4_i_random_points(t, b1, b2):
    params = {"b1": str(b1), "b2": str(b2), "m": 1}
    try:
        rep = pv.sweep("PROP4_I", [t], params)
    except pv.SingularPoint:
        return
    assert rep.status in ("pass", "singular")
