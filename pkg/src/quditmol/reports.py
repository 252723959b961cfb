"""Delimited report files: level maps, line lists, schedules, budgets.

All writers go through an atomic temp-file + rename so concurrent runs
into different directories never interleave, and repeated runs with the
same inputs are byte-identical.  Column headers carry units.  Each
tabular writer has an optional matplotlib companion that renders a PNG
next to the delimited file.
"""

import io
import os
import tempfile

__all__ = [
    "atomic_write", "fmt", "write_csv", "write_levels_csv",
    "write_scan_csv", "write_lines_csv", "write_schedule_csv",
    "write_budget_csv", "render_scan_png", "render_lines_png",
]


def fmt(value):
    """Deterministic scalar formatting for delimited output."""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def atomic_write(path, text):
    """Write text to path via a temp file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")
    atomic_write(path, out.getvalue())


def write_levels_csv(path, ctx, n=None):
    """One row per eigenlevel at a fixed field point."""
    rows = []
    for lvl in ctx.levels:
        lab = lvl.label
        if n is not None and lab.n != n:
            continue
        rows.append((ctx.field.b_gauss, lvl.index, lab.n, lab.tmF / 2.0,
                     lab.index, lvl.energy, lvl.mu, lvl.dedi))
    write_csv(path, ("field_G", "level_id", "N", "mF", "i", "energy_MHz",
                     "mu_MHzperG", "dEdI_MHzperkWcm2"), rows)


def write_scan_csv(path, scan):
    """Level map over a field scan, one row per (field value, level)."""
    unit = "G" if scan.axis == "B" else "kWcm2"
    rows = []
    for j, value in enumerate(scan.values):
        for k, label in enumerate(scan.labels):
            rows.append((value, k, label.n, label.tmF / 2.0, label.index,
                         scan.energies[j][k], scan.mu[j][k],
                         scan.dedi[j][k]))
    write_csv(path, (f"field_{unit}", "level_id", "N", "mF", "i",
                     "energy_MHz", "mu_MHzperG", "dEdI_MHzperkWcm2"), rows)


def write_lines_csv(path, lines):
    rows = [(str(ln.lower), str(ln.upper), ln.pol, ln.frequency,
             ln.dipole, ln.strength) for ln in lines]
    write_csv(path, ("lower_label", "upper_label", "pol", "f_MHz",
                     "dipole_D", "strength"), rows)


def write_schedule_csv(path, sequence):
    rows = [row[:7] + (row[7],) for row in sequence.rows()]
    write_csv(path, ("step", "tone", "frequency_MHz", "rabi_Hz",
                     "phase_rad", "polarization", "duration_s", "gate"),
              rows)


def write_budget_csv(path, budget):
    rows = [(name, value, formula, inputs.replace(",", ";"))
            for name, value, formula, inputs in budget.rows()]
    write_csv(path, ("component", "value", "formula", "inputs"), rows)


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_scan_png(path, scan, title=""):
    """Energy-versus-field curves for a level scan."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 5))
    energies = scan.energies
    for k in range(energies.shape[1]):
        ax.plot(scan.values, energies[:, k], lw=0.8)
    ax.set_xlabel("B (G)" if scan.axis == "B" else "I (kW cm$^{-2}$)")
    ax.set_ylabel("E (MHz)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_lines_png(path, lines, title=""):
    """Stick spectrum of a line list, colored by polarization."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    colors = {"pi": "C0", "sigma+": "C1", "sigma-": "C2"}
    seen = set()
    for ln in lines:
        label = ln.pol if ln.pol not in seen else None
        seen.add(ln.pol)
        ax.vlines(ln.frequency, 0.0, ln.strength,
                  color=colors.get(ln.pol, "C3"), label=label)
    ax.set_xlabel("f (MHz)")
    ax.set_ylabel("strength (3|$\\mu$|$^2$/$d_0^2$)")
    if seen:
        ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
