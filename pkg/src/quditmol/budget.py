"""Decoherence and gate-error estimates for qudit storage levels.

Trap-intensity noise dI dephases a level pair at the differential
ac-Stark rate |dE_a/dI - dE_b/dI| * dI; magnetic noise dB acts through
the differential moment |mu_a - mu_b| * dB.  Both give exponential
coherence decay with tau = 1/rate (rates in Hz).  A microwave gate of
length 2 t_halfpi run on a transition whose frequency is uncertain by
df picks up an error ~ 2 t_halfpi df / pi, the ratio of the angular
miss to the pi/2 Rabi rate.

circuit_budget combines these with a compiled pulse schedule: the
decoherence error is t_total / tau_d with tau_d the shortest coherence
time (intensity, magnetic, or the dataset's external rate, e.g.
blackbody), the off-resonant error sums each pulse's worst audited
single-spectator excitation, and the frequency error charges one gate
error per compiled gate.  Errors are summed; at the 1e-2 scale the
difference from 1 - prod(1 - e) is second order.

First-order intensity dephasing vanishes within an N=0 manifold (all
levels share the isotropic shift); such sets are flagged and fall back
to the dataset's second-order scale in circuit budgets.
"""

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations

__all__ = [
    "CoherenceReport", "ErrorBudget", "coherence_time_stark",
    "coherence_time_magnetic", "gate_frequency_error", "circuit_budget",
]

_RATE_FLOOR_HZ = 1e-9


@dataclass
class CoherenceReport:
    """Worst-pair dephasing time of a storage-level set."""

    tau: float                 # s (inf when no first-order sensitivity)
    rate: float                # Hz, worst pairwise splitting deviation
    worst_pair: tuple
    noise: float               # the dI (kW/cm^2) or dB (G) used
    crude_tau: float = 0.0     # single-scale bound, intensity noise only
    first_order: bool = True


@dataclass
class ErrorBudget:
    """Additive error estimate for one compiled circuit."""

    tau_stark: float
    tau_magnetic: float
    tau_external: float
    t_total: float
    decoherence: float
    off_resonant: float
    frequency: float
    gate_count: int
    pulse_count: int
    notes: list = dc_field(default_factory=list)

    @property
    def tau_d(self):
        return min(self.tau_stark, self.tau_magnetic, self.tau_external)

    @property
    def total(self):
        return self.decoherence + self.off_resonant + self.frequency

    def rows(self):
        """(component, value, formula, inputs) lines for report export."""
        return [
            ("tau_stark_s", self.tau_stark, "1/(max|dE_a/dI-dE_b/dI|*dI)",
             "storage-level Stark slopes"),
            ("tau_magnetic_s", self.tau_magnetic, "1/(max|mu_a-mu_b|*dB)",
             "storage-level moments"),
            ("tau_external_s", self.tau_external, "1/rate_external",
             "dataset constant"),
            ("tau_d_s", self.tau_d, "min(tau_stark,tau_magnetic,tau_external)",
             ""),
            ("t_total_s", self.t_total, "sum of pulse durations",
             f"{self.pulse_count} pulses"),
            ("decoherence", self.decoherence, "t_total/tau_d", ""),
            ("off_resonant", self.off_resonant,
             "sum over pulses of worst audited spectator loss", ""),
            ("frequency", self.frequency, "gates * 2*t_halfpi*df/pi",
             f"{self.gate_count} gates"),
            ("total", self.total, "decoherence+off_resonant+frequency", ""),
        ]


def _levels(ctx, labels):
    table = {str(lvl.label): lvl for lvl in ctx.levels}
    missing = [s for s in labels if str(s) not in table]
    if missing:
        raise ValueError(f"unknown levels {missing}")
    if len(labels) < 2:
        raise ValueError("need at least two levels")
    return [table[str(s)] for s in labels]


def _default_di(ctx):
    frac = ctx.spec.defaults.get("delta_i_frac", 1e-3)
    return frac * ctx.field.i_kwcm2


def coherence_time_stark(ctx, labels, delta_i=None):
    """Intensity-noise coherence time of a level set (worst pair).

    delta_i is the rms intensity excursion in kW/cm^2; by default the
    dataset's fractional noise times the working-point intensity.
    Returns tau = inf with first_order=False when every pair shares the
    same first-order slope (N=0 manifolds).
    """
    levels = _levels(ctx, labels)
    if delta_i is None:
        delta_i = _default_di(ctx)
    rate, pair = 0.0, (labels[0], labels[1])
    for a, b in combinations(levels, 2):
        r = abs(a.dedi - b.dedi) * 1e6 * delta_i
        if r > rate:
            rate, pair = r, (str(a.label), str(b.label))
    crude = ctx.spec.alpha_aniso * 1e6 * delta_i
    crude_tau = 1.0 / crude if crude > _RATE_FLOOR_HZ else math.inf
    # residual slopes far below the anisotropic scale (N=0 manifolds,
    # where only hyperfine mixing leaks in) do not count as first order
    if rate < max(_RATE_FLOOR_HZ, 1e-3 * crude):
        return CoherenceReport(math.inf, rate, pair, delta_i,
                               crude_tau, first_order=False)
    return CoherenceReport(1.0 / rate, rate, pair, delta_i, crude_tau)


def coherence_time_magnetic(ctx, labels, delta_b=None):
    """Magnetic-noise coherence time of a level set (worst pair).

    delta_b is the rms field excursion in gauss; defaults to the
    dataset noise floor.
    """
    levels = _levels(ctx, labels)
    if delta_b is None:
        delta_b = ctx.spec.defaults.get("delta_b_G", 5e-5)
    rate, pair = 0.0, (labels[0], labels[1])
    for a, b in combinations(levels, 2):
        r = abs(a.mu - b.mu) * 1e6 * delta_b
        if r > rate:
            rate, pair = r, (str(a.label), str(b.label))
    tau = 1.0 / rate if rate > _RATE_FLOOR_HZ else math.inf
    return CoherenceReport(tau, rate, pair, delta_b)


def gate_frequency_error(t_half_pi, alpha2_effective, delta_i):
    """Per-gate error from transition-frequency uncertainty.

    alpha2_effective is the relevant differential Stark slope in
    MHz/(kW/cm^2); the frequency miss alpha2*dI enters relative to the
    pi/2 Rabi rate pi/(2 t).
    """
    if t_half_pi <= 0:
        raise ValueError("t_half_pi must be positive")
    shift_hz = abs(alpha2_effective) * delta_i * 1e6
    return 2.0 * t_half_pi * shift_hz / math.pi


def _count_gates(schedule):
    names = [p.gate for p in schedule.pulses]
    return sum(1 for i, n in enumerate(names) if i == 0 or n != names[i - 1])


def circuit_budget(ctx, plan, result, delta_i=None, delta_b=None):
    """Estimate the total error of a compiled circuit on a plan.

    result is a DeutschResult or any object with a pulse `schedule`
    (PulseSequence).  Off-resonant losses come from re-auditing the
    plan against ctx; decoherence uses the worst storage-pair
    coherence times at the dataset noise defaults.
    """
    from .search import audit_plan

    schedule = getattr(result, "schedule", result)
    if delta_i is None:
        delta_i = _default_di(ctx)

    stark = coherence_time_stark(ctx, plan.levels, delta_i)
    magnetic = coherence_time_magnetic(ctx, plan.levels, delta_b)
    notes = []
    tau_stark = stark.tau
    if not stark.first_order:
        scale = ctx.spec.defaults.get("n0_second_order_stark_Hz", 0.0)
        tau_stark = 1.0 / scale if scale > 0 else math.inf
        notes.append("no first-order intensity shift; "
                     "second-order dataset scale applied")

    ext_rate = ctx.spec.defaults.get("blackbody_Hz", 0.0)
    tau_external = 1.0 / ext_rate if ext_rate > 0 else math.inf

    report = audit_plan(ctx, plan)
    if not report.passed:
        notes.append(f"plan audit above budget "
                     f"(worst {report.worst:.2e} > {report.budget:.2e})")
    off_res = 0.0
    for pulse in schedule.pulses:
        worst = 0.0
        for tone in pulse.tones:
            p = report.per_drive.get((tone.lower, tone.upper, tone.pol), 0.0)
            worst = max(worst, p)
        off_res += worst

    gates = getattr(result, "stages", None)
    n_gates = len(gates) if gates is not None else _count_gates(schedule)
    per_gate = gate_frequency_error(
        plan.t_half_pi, stark.rate / (delta_i * 1e6) if stark.first_order
        else 0.0, delta_i)
    t_total = schedule.total_duration
    budget = ErrorBudget(
        tau_stark=tau_stark, tau_magnetic=magnetic.tau,
        tau_external=tau_external, t_total=t_total,
        decoherence=t_total / min(tau_stark, magnetic.tau, tau_external),
        off_resonant=off_res, frequency=n_gates * per_gate,
        gate_count=n_gates, pulse_count=len(schedule.pulses), notes=notes)
    return budget
