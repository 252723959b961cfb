"""Command-line workbench for the qudit-molecule pipeline.

Subcommands walk the full chain: `levels` and the field maps dump
eigenlevel tables, `transitions` emits line lists, `search` discovers
storage-level sets and writes plan JSON, `compile` turns abstract gates
into pulse schedules, `deutsch` runs the four-level algorithm, and
`budget` prints the error estimate for a compiled circuit.

Exit codes: 0 success, 2 usage error, 3 dataset/schema error,
4 numerical failure.  Flags override dataset defaults.  Outputs are
deterministic; pass --plot to render a PNG beside the delimited file.
"""

import json
import math
import os
import sys

import click
import numpy as np

from .budget import circuit_budget, coherence_time_magnetic, \
    coherence_time_stark
from .circuit import REFERENCE_QUDITS, reference_plan, run_deutsch
from .gates import UnroutableGateError, compile_gate
from .hamiltonian import diagonalize, scan_levels
from .molecule import DatasetError, FieldPoint, resolve_dataset
from .reports import render_lines_png, render_scan_png, write_budget_csv, \
    write_csv, write_levels_csv, write_lines_csv, write_schedule_csv, \
    write_scan_csv
from .search import QuditPlan, audit_plan, build_qudit
from .transitions import line_list

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class _Fail(click.ClickException):
    def __init__(self, message, code):
        super().__init__(message)
        self.exit_code = code


def _load(dataset):
    try:
        return resolve_dataset(dataset)
    except (DatasetError, FileNotFoundError) as exc:
        raise _Fail(str(exc), EXIT_DATA)


def _field(spec, b, i, angle):
    if b is None:
        b = spec.defaults.get("b_G", 0.0)
    if i is None:
        i = spec.defaults.get("i_kWcm2", 0.0)
    try:
        return FieldPoint(float(b), float(i), float(angle))
    except ValueError as exc:
        raise _Fail(str(exc), EXIT_USAGE)


def _context(spec, field, n_max):
    try:
        return diagonalize(spec, field, n_max)
    except np.linalg.LinAlgError as exc:
        raise _Fail(f"diagonalization failed: {exc}", EXIT_NUMERIC)


def _common(fn):
    fn = click.option("--dataset", "-d", required=True,
                      help="builtin name (caf, rbcs) or TOML path")(fn)
    fn = click.option("--b-gauss", "-B", type=float, default=None,
                      help="magnetic field (G); dataset default otherwise")(fn)
    fn = click.option("--intensity", "-I", type=float, default=None,
                      help="laser intensity (kW/cm^2)")(fn)
    fn = click.option("--pol-angle", type=float, default=0.0,
                      help="laser polarization angle to B (rad)")(fn)
    fn = click.option("--n-max", type=int, default=2, show_default=True,
                      help="rotational basis cutoff")(fn)
    fn = click.option("--out", "-o", required=True,
                      help="output file (CSV or JSON)")(fn)
    fn = click.option("--plot", is_flag=True,
                      help="also render a PNG next to the output")(fn)
    return fn


@click.group()
def main():
    """Hyperfine-level qudit workbench for 1-Sigma/2-Sigma molecules."""


@main.command()
@_common
@click.option("--manifold-n", type=int, default=None,
              help="restrict output to one rotational manifold")
def levels(dataset, b_gauss, intensity, pol_angle, n_max, out, plot,
           manifold_n):
    """Eigenlevels at one field point: energies, moments, Stark slopes."""
    spec = _load(dataset)
    ctx = _context(spec, _field(spec, b_gauss, intensity, pol_angle), n_max)
    write_levels_csv(out, ctx, n=manifold_n)
    click.echo(f"wrote {out} ({len(ctx.levels)} levels)")


def _map_command(axis):
    @_common
    @click.option("--start", type=float, required=True)
    @click.option("--stop", type=float, required=True)
    @click.option("--points", type=int, default=101, show_default=True)
    def cmd(dataset, b_gauss, intensity, pol_angle, n_max, out, plot,
            start, stop, points):
        spec = _load(dataset)
        if points < 2 or not stop > start:
            raise _Fail("need points >= 2 and stop > start", EXIT_USAGE)
        fixed = _field(spec, b_gauss, intensity, pol_angle)
        grid = np.linspace(start, stop, points)
        try:
            scan = scan_levels(spec, axis, grid, fixed, n_max)
        except ValueError as exc:
            raise _Fail(str(exc), EXIT_USAGE)
        write_scan_csv(out, scan)
        if plot:
            png = os.path.splitext(out)[0] + ".png"
            render_scan_png(png, scan, title=f"{spec.name} {axis} map")
        if scan.flagged:
            click.echo(f"warning: {len(scan.flagged)} ambiguous "
                       f"level crossings", err=True)
        click.echo(f"wrote {out} ({points} points x "
                   f"{scan.energies.shape[1]} levels)")
    name = "magnetic field (G)" if axis == "B" else "intensity (kW/cm^2)"
    cmd.__doc__ = f"Tracked level map over a {name} scan."
    return cmd


main.command(name="zeeman-map")(_map_command("B"))
main.command(name="stark-map")(_map_command("I"))


@main.command()
@_common
@click.option("--lower-n", type=int, default=0, show_default=True)
@click.option("--upper-n", type=int, default=1, show_default=True)
@click.option("--strength-min", type=float, default=0.0, show_default=True)
def transitions(dataset, b_gauss, intensity, pol_angle, n_max, out, plot,
                lower_n, upper_n, strength_min):
    """Electric-dipole line list between two rotational manifolds."""
    spec = _load(dataset)
    ctx = _context(spec, _field(spec, b_gauss, intensity, pol_angle), n_max)
    lower = ctx.manifold(lower_n)
    upper = ctx.manifold(upper_n)
    if not lower or not upper:
        raise _Fail(f"empty manifold N={lower_n} or N={upper_n} at "
                    f"n_max={n_max}", EXIT_USAGE)
    lines = line_list(ctx, lower, upper, strength_min=strength_min)
    write_lines_csv(out, lines)
    if plot:
        png = os.path.splitext(out)[0] + ".png"
        render_lines_png(png, lines,
                         title=f"{spec.name} N={lower_n}->N={upper_n}")
    click.echo(f"wrote {out} ({len(lines)} lines)")


@main.command()
@_common
@click.option("--primary-n", type=int, required=True)
@click.option("--aux-n", type=int, default=None,
              help="auxiliary manifold; default primary_n +/- 1 toward 0")
@click.option("--t-half-pi", type=float, default=None,
              help="pi/2 pulse time (s); dataset default otherwise")
@click.option("--p-loss-max", type=float, default=None,
              help="leakage budget per drive")
@click.option("--purity", type=float, default=0.95, show_default=True)
@click.option("--strength-min", type=float, default=0.01, show_default=True)
def search(dataset, b_gauss, intensity, pol_angle, n_max, out, plot,
           primary_n, aux_n, t_half_pi, p_loss_max, purity, strength_min):
    """Greedy storage-level search; writes a plan JSON."""
    spec = _load(dataset)
    ctx = _context(spec, _field(spec, b_gauss, intensity, pol_angle), n_max)
    if aux_n is None:
        aux_n = 1 if primary_n == 0 else primary_n - 1
    if t_half_pi is None:
        t_half_pi = spec.defaults.get("t_half_pi_s", 1e-4)
    if p_loss_max is None:
        p_loss_max = spec.defaults.get("p_loss_max", 1e-3)
    try:
        plan = build_qudit(ctx, primary_n, aux_n, t_half_pi, p_loss_max,
                           purity=purity, strength_min=strength_min)
    except ValueError as exc:
        raise _Fail(str(exc), EXIT_USAGE)
    if plan.dimension < 2:
        click.echo("warning: search found no connected partner; "
                   "plan holds a single level", err=True)
    text = plan.to_json()
    assert QuditPlan.from_json(text).to_json() == text
    from .reports import atomic_write
    atomic_write(out, text + "\n")
    click.echo(f"wrote {out} (d={plan.dimension}, "
               f"{len(plan.drives)} drives)")


def _load_plan(path_or_ref, dataset):
    if path_or_ref and os.path.exists(path_or_ref):
        try:
            with open(path_or_ref) as handle:
                return QuditPlan.from_json(handle.read())
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise _Fail(f"bad plan file {path_or_ref}: {exc}", EXIT_DATA)
    if dataset is None:
        raise _Fail("need --plan file or --dataset for a reference plan",
                    EXIT_USAGE)
    try:
        return reference_plan(dataset, variant=path_or_ref or None)
    except ValueError as exc:
        raise _Fail(str(exc), EXIT_DATA)


_BUILTIN_BY_NAME = {"40Ca19F": "caf", "87Rb133Cs": "rbcs"}


def _plan_context(plan, n_max):
    spec = _load(_BUILTIN_BY_NAME.get(plan.molecule, plan.molecule))
    return spec, _context(
        spec, FieldPoint(plan.b_gauss, plan.i_kwcm2, plan.pol_angle), n_max)


@main.command(name="compile")
@click.option("--dataset", "-d", default=None,
              help="dataset for a built-in reference plan")
@click.option("--plan", "plan_path", default=None,
              help="plan JSON from `search`, or a reference variant name")
@click.option("--gate", required=True,
              help="U,k,l,zeta,phi or Q,k,phi or R,k,phi "
                   "(k,l = 1-based storage indices)")
@click.option("--out", "-o", required=True, help="schedule CSV")
def compile_cmd(dataset, plan_path, gate, out):
    """Compile one abstract gate into a timed pulse schedule."""
    plan = _load_plan(plan_path, dataset)
    parts = gate.split(",")
    try:
        kind = parts[0].upper()
        if kind == "U":
            k, l = (plan.levels[int(parts[1]) - 1],
                    plan.levels[int(parts[2]) - 1])
            request = ("U", k, l, float(parts[3]), float(parts[4]))
        elif kind in ("Q", "R"):
            request = (kind, plan.levels[int(parts[1]) - 1], float(parts[2]))
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
    except (IndexError, ValueError) as exc:
        raise _Fail(f"bad --gate spec: {exc}", EXIT_USAGE)
    try:
        compiled = compile_gate(plan, request)
    except UnroutableGateError as exc:
        raise _Fail(str(exc), EXIT_USAGE)
    except AssertionError as exc:
        raise _Fail(str(exc), EXIT_NUMERIC)
    write_schedule_csv(out, compiled.sequence)
    click.echo(f"wrote {out} ({len(compiled.sequence.pulses)} pulses, "
               f"{compiled.sequence.total_duration:.6e} s)")


@main.command()
@click.option("--dataset", "-d", default=None)
@click.option("--plan", "plan_path", default=None)
@click.option("--oracle", type=click.IntRange(1, 4), required=True)
@click.option("--n-max", type=int, default=2, show_default=True)
@click.option("--out", "-o", default=None, help="schedule CSV (optional)")
def deutsch(dataset, plan_path, oracle, n_max, out):
    """Run the four-level Deutsch algorithm for one oracle."""
    plan = _load_plan(plan_path, dataset)
    try:
        result = run_deutsch(plan, oracle)
    except (ValueError, UnroutableGateError) as exc:
        raise _Fail(str(exc), EXIT_USAGE)
    except AssertionError as exc:
        raise _Fail(str(exc), EXIT_NUMERIC)
    spec, ctx = _plan_context(plan, n_max)
    bud = circuit_budget(ctx, plan, result)
    click.echo(f"oracle F_{oracle}: P(|2>) = {result.p2:.6f} -> "
               f"{result.verdict} (truth: {result.classification})")
    click.echo(f"pulses: {result.pulse_count}, total time "
               f"{result.total_time:.6e} s")
    click.echo(f"budget: decoherence {bud.decoherence:.3e}, off-resonant "
               f"{bud.off_resonant:.3e}, frequency {bud.frequency:.3e}, "
               f"total {bud.total:.3e}")
    if out:
        write_schedule_csv(out, result.schedule)
        click.echo(f"wrote {out}")
    if not result.correct:
        raise _Fail("verdict disagrees with the oracle truth table",
                    EXIT_NUMERIC)


@main.command()
@click.option("--dataset", "-d", default=None)
@click.option("--plan", "plan_path", default=None)
@click.option("--oracle", type=click.IntRange(1, 4), default=1,
              show_default=True)
@click.option("--n-max", type=int, default=2, show_default=True)
@click.option("--delta-i", type=float, default=None,
              help="intensity noise (kW/cm^2); dataset default otherwise")
@click.option("--delta-b", type=float, default=None,
              help="magnetic noise (G); dataset default otherwise")
@click.option("--out", "-o", required=True, help="budget CSV")
def budget(dataset, plan_path, oracle, n_max, delta_i, delta_b, out):
    """Error budget of the compiled Deutsch circuit on a plan."""
    plan = _load_plan(plan_path, dataset)
    spec, ctx = _plan_context(plan, n_max)
    try:
        result = run_deutsch(plan, oracle)
    except (ValueError, UnroutableGateError) as exc:
        raise _Fail(str(exc), EXIT_USAGE)
    bud = circuit_budget(ctx, plan, result, delta_i=delta_i,
                         delta_b=delta_b)
    write_budget_csv(out, bud)
    stark = coherence_time_stark(ctx, plan.levels, delta_i)
    magnetic = coherence_time_magnetic(ctx, plan.levels, delta_b)
    click.echo(f"tau_stark {stark.tau:.3e} s"
               + (" (no first-order shift)" if not stark.first_order else "")
               + f", tau_magnetic {magnetic.tau:.3e} s")
    for note in bud.notes:
        click.echo(f"note: {note}")
    click.echo(f"wrote {out} (total {bud.total:.3e})")


if __name__ == "__main__":
    sys.exit(main())
