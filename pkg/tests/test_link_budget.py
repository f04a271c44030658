import math
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpcfabric.dwdm_plan import Attenuator, Awg, Connector, FiberSpan, ReceiverSpec, StarCoupler
from hpcfabric.link_budget import (
    BerModel,
    InfeasibleError,
    OpticalPath,
    ScalingLedger,
    attenuation_points,
    attenuation_sweep,
    ber_at_power,
    ber_crossing_db,
    compute_budget,
    element_loss_db,
    is_power_of_two,
    max_broadcast_ports,
    predict_scaled_margin,
    scaling_rows,
    splitting_loss_db,
)
from hpcfabric.power_math import ModulationSpec, dbm_to_mw

RX = ReceiverSpec("PIN", -14.5)


def simple_path(*elements, sensitivity=-14.5):
    launch = ModulationSpec.from_oma(dbm_to_mw(0.0), 10.0)
    return OpticalPath(launch, tuple(elements), ReceiverSpec("PIN", sensitivity))


@pytest.mark.parametrize("ports, db", [(1, 0.0), (4, 6.02), (32, 15.05), (64, 18.06)])
def test_splitting_loss(ports, db):
    assert splitting_loss_db(ports) == pytest.approx(db, abs=5e-3)


@given(st.integers(1, 512))
def test_doubling_adds_three_db(n):
    assert splitting_loss_db(2 * n) - splitting_loss_db(n) == pytest.approx(10 * math.log10(2), abs=1e-9)


def test_element_losses():
    assert element_loss_db(StarCoupler(4, 4, excess_db=1.0)) == pytest.approx(7.0206, abs=1e-4)
    assert element_loss_db(Awg(8, excess_db=2.0)) == 2.0
    assert element_loss_db(Awg(8, excess_db=2.0, direction="broadcast")) == pytest.approx(11.0309, abs=1e-4)
    assert element_loss_db(Connector(0.5)) == 0.5
    assert element_loss_db(FiberSpan(2000.0, 0.25)) == pytest.approx(0.5)
    with pytest.raises(TypeError):
        element_loss_db("splice")


def test_budget_stages_accumulate():
    path = simple_path(Connector(0.5, "c1"), StarCoupler(4, 4, name="star"), Attenuator(1.0))
    r = compute_budget(path)
    assert [s.name for s in r.stages] == ["launch", "c1", "star", "attenuator"]
    assert r.launch_oma_dbm == pytest.approx(0.0)
    assert r.received_oma_dbm == pytest.approx(-0.5 - 6.0206 - 1.0, abs=1e-4)
    assert r.stages[-1].power_dbm == r.received_oma_dbm
    assert r.margin_db == pytest.approx(r.received_oma_dbm + 14.5)
    assert r.total_loss_db == pytest.approx(sum(s.loss_db for s in r.stages))


def test_infeasible_path_is_reported_not_raised():
    r = compute_budget(simple_path(Attenuator(20.0)))
    assert r.margin_db == pytest.approx(-5.5)
    assert not r.feasible


@given(st.lists(st.floats(0.0, 10.0), max_size=6), st.floats(0.0, 10.0))
def test_extra_loss_never_raises_margin(losses, extra):
    path = simple_path(*(Connector(l) for l in losses))
    base = compute_budget(path).margin_db
    assert compute_budget(path.with_attenuation(extra)).margin_db == pytest.approx(base - extra)


def test_bundled_margins(plan):
    got = {name: compute_budget(e.path).margin_db for name, e in plan.paths.items()}
    assert got == pytest.approx({"multimode": 7.8000, "dwdm": 18.1022, "dwdm_32x32": 4.8013}, abs=1e-3)


def test_ber_at_sensitivity():
    assert ber_at_power(-14.5, RX) == pytest.approx(1e-12, rel=0.02)
    assert ber_at_power(-13.5, RX) < 1e-12 < ber_at_power(-15.5, RX)


def test_ber_model_validation():
    with pytest.raises(ValueError):
        BerModel(q_at_sensitivity=0.0)
    steeper = BerModel(slope_exponent=2.0)
    assert steeper.q(-13.5, -14.5) > BerModel().q(-13.5, -14.5)


def test_attenuation_points():
    pts = attenuation_points(0.0, 1.0, 0.1)
    assert len(pts) == 11 and pts[3] == 0.3 and pts[-1] == 1.0
    assert list(attenuation_points(2.0, 2.0, 0.5)) == [2.0]
    with pytest.raises(ValueError):
        attenuation_points(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        attenuation_points(1.0, 0.0, 0.1)


@given(st.floats(0.05, 2.0), st.floats(-30.0, -5.0))
def test_sweep_monotone_and_crossing_near_margin(step, sens):
    path = simple_path(Connector(1.0), sensitivity=sens)
    margin = compute_budget(path).margin_db
    rows = attenuation_sweep(path, 0.0, margin + 3.0, step)
    bers = [r.ber for r in rows]
    assert all(b >= a for a, b in zip(bers, bers[1:]))
    crossing = ber_crossing_db(rows)
    assert crossing is not None
    assert margin <= crossing + 1e-9 and crossing - margin <= step + 1e-9


def test_sweep_without_crossing():
    rows = attenuation_sweep(simple_path(sensitivity=-40.0), 0.0, 5.0, 1.0)
    assert ber_crossing_db(rows) is None
    assert rows[0].ber == 0.0  # far below the reporting floor


def test_apd_substitution_shifts_margin_by_sensitivity_change(plan):
    path = plan.path("multimode").path
    apd = replace(path.rx, detector="APD", sensitivity_dbm=path.rx.sensitivity_dbm - 7.0)
    delta = compute_budget(path.with_receiver(apd)).margin_db - compute_budget(path).margin_db
    assert delta == pytest.approx(7.0, abs=1e-12)


def test_power_of_two():
    assert [n for n in range(1, 70) if is_power_of_two(n)] == [1, 2, 4, 8, 16, 32, 64]
    assert not is_power_of_two(0)


def test_scaling_extrapolated_ledger():
    ledger = ScalingLedger(4, 18.1, {32: 4.0})
    assert predict_scaled_margin(ledger, 4) == 18.1
    assert predict_scaled_margin(ledger, 32) == pytest.approx(5.069, abs=1e-3)
    assert predict_scaled_margin(ledger, 64) == pytest.approx(2.059, abs=1e-3)
    assert max_broadcast_ports(ledger) == 32
    assert [p for p, _ in scaling_rows(ledger)] == [4, 8, 16, 32, 64]


def test_scaling_measured_ledger():
    ledger = ScalingLedger(32, 4.8)
    assert predict_scaled_margin(ledger, 64) == pytest.approx(1.790, abs=1e-3)
    assert max_broadcast_ports(ledger) == 32


def test_scaling_validation():
    with pytest.raises(ValueError):
        ScalingLedger(6, 10.0)
    with pytest.raises(ValueError):
        ScalingLedger(4, 10.0, {16: 2.0, 32: 1.0})
    ledger = ScalingLedger(4, 10.0)
    with pytest.raises(ValueError):
        predict_scaled_margin(ledger, 48)
    with pytest.raises(ValueError):
        predict_scaled_margin(ledger, 2)
    with pytest.raises(InfeasibleError) as info:
        max_broadcast_ports(ScalingLedger(4, 2.0))
    assert info.value.deficit_db == pytest.approx(1.0)


def test_excess_delta_carries_forward():
    ledger = ScalingLedger(4, 20.0, {16: 1.0, 64: 2.5})
    assert [ledger.excess_delta(p) for p in (4, 8, 16, 32, 64, 128)] == [0, 0, 1.0, 1.0, 2.5, 2.5]


@given(st.integers(0, 6), st.floats(0.0, 40.0),
       st.dictionaries(st.integers(0, 10).map(lambda k: 2 ** k), st.floats(0.0, 5.0), max_size=4))
def test_margin_non_increasing_with_ports(k, base, raw):
    ordered = sorted(raw.items())
    running, deltas = 0.0, {}
    for p, v in ordered:
        running = max(running, v)
        deltas[p] = running
    ledger = ScalingLedger(2 ** k, base, deltas)
    margins = [predict_scaled_margin(ledger, 2 ** j) for j in range(k, 12)]
    assert all(b <= a + 1e-12 for a, b in zip(margins, margins[1:]))


def test_error_free_operating_point():
    # 7.8 dB above sensitivity: Q near 42.4, far past double-precision BER
    assert BerModel().q(-6.7, -14.5) == pytest.approx(42.4, abs=0.05)
    assert attenuation_sweep(simple_path(sensitivity=-7.8), 0.0, 0.0, 1.0)[0].ber == 0.0
