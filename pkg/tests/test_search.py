"""Loss model, leakage audit and storage-set construction."""

import math

import pytest

from quditmol.search import (QuditPlan, audit_plan, build_qudit, manual_plan,
                             p_loss, rabi_from_t_half_pi)


def test_p_loss_limits():
    assert p_loss(0.0, 1e6) == 0.0
    assert p_loss(1e4, 0.0) == 1.0
    # equal drive and detuning splits the population evenly
    assert p_loss(5e5, 5e5) == pytest.approx(0.5)


def test_p_loss_monotone_in_detuning():
    r_omega = rabi_from_t_half_pi(5e-6)
    vals = [p_loss(r_omega, 2 * math.pi * f) for f in
            (1e5, 1e6, 1e7, 1e8, 1e9)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(0.0 < v < 1.0 for v in vals)


def test_p_loss_reference_point():
    """Full-strength spectator 10 MHz away from a 5 us pi/2 pulse."""
    r_omega = rabi_from_t_half_pi(5e-6)
    delta = 2 * math.pi * 10e6
    assert p_loss(r_omega, delta) == pytest.approx(2.5e-5, rel=1e-3)


def test_rabi_rate():
    assert rabi_from_t_half_pi(5e-6) == pytest.approx(math.pi / 1e-5)


def test_greedy_plan_caf(caf_ctx):
    plan = build_qudit(caf_ctx, primary_n=1, aux_n=0, t_half_pi=5e-6,
                       p_loss_max=1e-3)
    assert plan.dimension >= 4
    assert plan.levels[0] == str(caf_ctx.manifold(1)[0])
    rep = audit_plan(caf_ctx, plan)
    assert rep.passed
    assert 0.0 <= rep.worst <= plan.p_loss_max
    # one connection admits each member after the seed
    assert len(plan.connections) == plan.dimension - 1


def test_greedy_plan_budget_binds(caf_ctx):
    loose = build_qudit(caf_ctx, 1, 0, t_half_pi=5e-6, p_loss_max=1e-2)
    tight = build_qudit(caf_ctx, 1, 0, t_half_pi=5e-6, p_loss_max=1e-9)
    assert loose.dimension >= tight.dimension
    assert tight.dimension >= 1


def test_slower_pulses_admit_more(rbcs_ctx):
    fast = build_qudit(rbcs_ctx, 0, 1, t_half_pi=3e-5, p_loss_max=3e-3)
    slow = build_qudit(rbcs_ctx, 0, 1, t_half_pi=3e-4, p_loss_max=3e-3)
    assert slow.dimension >= fast.dimension


def test_audit_is_idempotent(rbcs_ctx):
    plan = build_qudit(rbcs_ctx, 0, 1, t_half_pi=3e-4, p_loss_max=3e-3)
    a = audit_plan(rbcs_ctx, plan)
    b = audit_plan(rbcs_ctx, plan)
    assert a.per_drive == b.per_drive
    assert a.worst == b.worst


def test_plan_json_round_trip(caf_ctx):
    plan = build_qudit(caf_ctx, 1, 0, t_half_pi=5e-6, p_loss_max=2e-5)
    text = plan.to_json()
    back = QuditPlan.from_json(text)
    assert back == plan
    assert '"version": 1' in text


def test_manual_plan_connections(rbcs_ctx):
    plan = manual_plan(
        rbcs_ctx, 0, 1,
        levels=["(0,4)_1", "(0,4)_0", "(0,5)_0", "(0,3)_0"],
        aux_levels=["(1,5)_2", "(1,4)_4"],
        t_half_pi=3e-4, p_loss_max=3e-3,
        pairs=[("(0,4)_1", "(1,5)_2"), ("(0,4)_0", "(1,5)_2"),
               ("(0,5)_0", "(1,5)_2"), ("(0,5)_0", "(1,4)_4"),
               ("(0,3)_0", "(1,4)_4")])
    assert len(plan.drives) == 5
    pols = {(d.primary, d.aux): d.pol for d in plan.drives}
    assert pols[("(0,4)_1", "(1,5)_2")] == "sigma+"
    assert pols[("(0,5)_0", "(1,5)_2")] == "pi"
    assert pols[("(0,5)_0", "(1,4)_4")] == "sigma-"
    # shared auxiliaries generate the connection graph
    assert (("(0,4)_1", "(0,4)_0", "(1,5)_2") in plan.connections
            or ("(0,4)_0", "(0,4)_1", "(1,5)_2") in plan.connections)


def test_manual_plan_rejects_unknown_level(rbcs_ctx):
    with pytest.raises(ValueError):
        manual_plan(rbcs_ctx, 0, 1, levels=["(0,99)_0"], aux_levels=[],
                    t_half_pi=3e-4, p_loss_max=3e-3)


def test_audit_worst_within_per_drive(rbcs_ctx):
    plan = build_qudit(rbcs_ctx, 0, 1, t_half_pi=3e-4, p_loss_max=3e-3)
    rep = audit_plan(rbcs_ctx, plan)
    assert rep.worst == max(rep.per_drive.values())
    key = (rep.worst_drive.primary, rep.worst_drive.aux, rep.worst_drive.pol)
    assert rep.per_drive[key] == rep.worst
