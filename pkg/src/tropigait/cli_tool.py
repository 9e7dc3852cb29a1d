"""Command-line front end.

Four commands over a shared gait-input convention:

* ``analyze``  — eigenvalue (closed form and cycle mean, cross-checked),
  eigenvector, irreducibility, assumption flags, critical graph, coupling.
* ``simulate`` — run a plan, export trajectory/schedule, verify it.
* ``matrices`` — dump the constructed system matrices.
* ``diagram``  — ASCII stance/swing chart (one row per leg).

Input is either a JSON config (``--input`` path or ``-`` for stdin) or an
inline DSL string (``--dsl "{1,4}<{2,3}"``) with timing flags. Exit codes:
0 ok, 2 validation error, 3 constraint violation, 4 I/O error.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from tropigait.errors import (
    BadQuantum,
    ConstraintViolation,
    ParseError,
    TropigaitError,
    ValidationError,
)
from tropigait.gait_model import (
    Gait,
    GaitParams,
    check_assumptions,
    closed_form_eigenpair,
    gait_from_config,
    gait_to_config,
    parse_gait_dsl,
    structural_blocks,
    system_matrix,
    validate_gait,
    is_normal,
)
from tropigait.locomotion_sim import (
    Disturbance,
    LegSchedule,
    Segment,
    SimulationPlan,
    extract_schedule,
    simulate,
    verify_schedule,
)
from tropigait.maxplus_core import MaxPlusMatrix, is_epsilon, tolerance
from tropigait.spectral_graph import (
    coupling_params,
    critical_graph,
    is_irreducible,
    max_cycle_mean,
    verify_eigenpair,
)

DEFAULT_PARAMS = GaitParams(1.0, 3.0, 2.0)


def parse_gait_spec(text: str, params: GaitParams | None = None) -> tuple[Gait, GaitParams]:
    """Parse a gait from JSON config text or from a DSL string.

    JSON configs carry their own timing values; a DSL string takes them from
    ``params`` (falling back to the defaults). The gait is validated and a
    warning is printed when assumption A2 fails.
    """
    text = text.strip()
    obj = None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        pass
    if isinstance(obj, dict):
        g, p = gait_from_config(obj)
    else:
        g = parse_gait_dsl(text)
        p = params if params is not None else DEFAULT_PARAMS
    validate_gait(g)
    a1, a2 = check_assumptions(g, p)
    if not a2:
        click.echo(
            "warning: assumption A2 fails (cycle_min > m * group_lag); "
            "steady-state guarantees void",
            err=True,
        )
    return g, p


def _encode_vector(v: MaxPlusMatrix) -> list:
    out = []
    for x in v.asarray().reshape(-1):
        if is_epsilon(x):
            out.append("-inf")
        elif float(x).is_integer():
            out.append(int(x))
        else:
            out.append(float(x))
    return out


def run_analyze(g: Gait, params: GaitParams, p_max: int | None = None) -> dict:
    """Aggregate the spectral quantities of a gait's system matrix.

    The closed-form eigenvalue and the cycle mean must agree whenever the
    A1 assumption holds; a discrepancy raises instead of being reported.
    """
    a1, a2 = check_assumptions(g, params)
    mats = system_matrix(g, params)
    a = mats.A
    karp = max_cycle_mean(a)
    report: dict = {
        "gait": gait_to_config(g, params),
        "assumptions": {"a1": a1, "a2": a2},
        "irreducible": is_irreducible(a),
        "eigenvalue": {"max_cycle_mean": karp, "closed_form": None},
    }
    if a1:
        lam, v = closed_form_eigenpair(g, params)
        if not math.isclose(lam, karp, rel_tol=0.0, abs_tol=tolerance()):
            raise ConstraintViolation(
                f"closed-form eigenvalue {lam} disagrees with cycle mean {karp}"
            )
        v_bar = mats.C.otimes(v)
        report["eigenvalue"]["closed_form"] = lam
        report["eigenvector"] = _encode_vector(v)
        report["eigenvector_normalized"] = _encode_vector(v_bar)
        report["eigenpair_verified"] = bool(
            verify_eigenpair(a, lam, v)
            and verify_eigenpair(mats.A_bar, lam, v_bar)
        )
    if report["irreducible"]:
        report["critical_graph"] = critical_graph(a).to_dict()
        report["coupling"] = coupling_params(a, p_max).to_dict()
    return report


def render_diagram(schedule: LegSchedule, quantum: float = 0.25) -> str:
    """One text row per leg: '#' while standing, '.' while swinging, blank
    outside the known window; a time ruler underneath."""
    if not (isinstance(quantum, (int, float)) and math.isfinite(quantum) and quantum > 0):
        raise BadQuantum(f"quantum must be a positive number, got {quantum!r}")
    start, end = schedule.span()
    columns = int(math.ceil((end - start) / quantum)) if end > start else 1
    if columns > 200_000:
        raise BadQuantum(
            f"quantum {quantum} gives {columns} columns over [{start}, {end}]"
        )
    label_width = len(f"leg {schedule.leg_count}")
    lines = []
    for i in range(schedule.leg_count):
        cells = []
        for c in range(columns):
            mid = start + (c + 0.5) * quantum
            if any(a <= mid < b for (a, b) in schedule.stance[i]):
                cells.append("#")
            elif any(a <= mid < b for (a, b) in schedule.swing[i]):
                cells.append(".")
            else:
                cells.append(" ")
        lines.append(f"leg {i + 1}".ljust(label_width) + " |" + "".join(cells))
    tick_every = 10
    ruler = []
    marks = []
    for c in range(columns):
        if c % tick_every == 0:
            ruler.append("+")
            marks.append((c, f"{start + c * quantum:g}"))
        else:
            ruler.append("-")
    lines.append(" " * label_width + " +" + "".join(ruler))
    label_line = [" "] * (columns + 2 + label_width)
    for c, text in marks:
        pos = label_width + 2 + c
        if pos + len(text) <= len(label_line):
            label_line[pos : pos + len(text)] = text
    lines.append("".join(label_line).rstrip())
    return "\n".join(lines)


# -- input plumbing --------------------------------------------------------


def _read_input(input_path: str | None) -> str | None:
    if input_path is None:
        return None
    if input_path == "-":
        return sys.stdin.read()
    return Path(input_path).read_text()


def _params_from_flags(tau_f: float, tau_g: float, tau_delta: float) -> GaitParams:
    return GaitParams(tau_f, tau_g, tau_delta)


def _load_gait(input_path, dsl, params) -> tuple[Gait, GaitParams]:
    if (input_path is None) == (dsl is None):
        raise ValidationError("provide exactly one of --input or --dsl")
    text = dsl if dsl is not None else _read_input(input_path)
    return parse_gait_spec(text, params)


def _event_index(name, n: int) -> int:
    """Map "t3"/"l1" (1-based legs) to a 0-based state index."""
    if not isinstance(name, str) or len(name) < 2 or name[0] not in "tl":
        raise ParseError(f"disturbance event must look like 't1' or 'l2', got {name!r}")
    try:
        leg = int(name[1:])
    except ValueError:
        raise ParseError(f"bad leg number in disturbance event {name!r}") from None
    if not 1 <= leg <= n:
        raise ValidationError(f"disturbance leg {leg} outside 1..{n}")
    return (leg - 1) + (0 if name[0] == "t" else n)


def _plan_from_config(obj: dict, default_steps: int) -> tuple[SimulationPlan, object]:
    """Build a SimulationPlan from either a plan config ({"segments": [...]})
    or a single gait config plus a step count."""
    if "segments" in obj:
        segments = []
        for seg_obj in obj["segments"]:
            if not isinstance(seg_obj, dict):
                raise ParseError("each segment must be an object")
            steps = seg_obj.get("steps", default_steps)
            if not isinstance(steps, int) or steps < 0:
                raise ParseError(f"segment steps must be a nonnegative integer")
            g, p = gait_from_config(seg_obj)
            segments.append(Segment(g, p, steps))
        if not segments:
            raise ParseError("plan has no segments")
    else:
        g, p = gait_from_config(obj)
        segments = [Segment(g, p, default_steps)]
    n = segments[0].gait.n
    disturbances = []
    for d_obj in obj.get("disturbances", []):
        if not isinstance(d_obj, dict) or "step" not in d_obj or "delay" not in d_obj:
            raise ParseError("disturbances need step, event, and delay fields")
        if "event" not in d_obj:
            raise ParseError("disturbances are addressed by event name, e.g. \"t1\"")
        step = d_obj["step"]
        if not isinstance(step, int):
            raise ParseError("disturbance step must be an integer")
        delay = d_obj["delay"]
        if not isinstance(delay, (int, float)) or isinstance(delay, bool):
            raise ParseError("disturbance delay must be a number")
        disturbances.append(
            Disturbance(step, _event_index(d_obj["event"], n), float(delay))
        )
    x0 = obj.get("x0")
    if isinstance(x0, list):
        x0 = np.array(x0, dtype=float)
    return SimulationPlan(segments, disturbances), x0


def _write_or_echo(out_dir, name: str, text: str):
    if out_dir is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out_dir, name).write_text(text)


# -- commands --------------------------------------------------------------


_INPUT_OPTIONS = [
    click.option("--input", "input_path", default=None,
                 help="Gait or plan config JSON; a path, or - for stdin."),
    click.option("--dsl", default=None,
                 help='Inline gait string such as "{1,4}<{2,3}".'),
    click.option("--tau-f", type=float, default=1.0, show_default=True,
                 help="Swing duration (used with --dsl)."),
    click.option("--tau-g", type=float, default=3.0, show_default=True,
                 help="Minimum stance duration (used with --dsl)."),
    click.option("--tau-delta", type=float, default=2.0, show_default=True,
                 help="Double-stance overlap (used with --dsl)."),
]


def _with_input_options(f):
    for opt in reversed(_INPUT_OPTIONS):
        f = opt(f)
    return f


@click.group()
def cli():
    """Max-plus gait analysis and simulation."""


@cli.command()
@_with_input_options
@click.option("--format", "fmt", type=click.Choice(["json", "ascii"]), default="json",
              show_default=True)
@click.option("--p-max", type=int, default=None,
              help="Power cap for the coupling scan (default 4 * (2n)^2).")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory to write report.json into instead of stdout.")
def analyze(input_path, dsl, tau_f, tau_g, tau_delta, fmt, p_max, out):
    """Report eigenstructure, critical graph, and coupling of a gait."""
    g, params = _load_gait(input_path, dsl, _params_from_flags(tau_f, tau_g, tau_delta))
    report = run_analyze(g, params, p_max)
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        _write_or_echo(out, "report.json", json.dumps(report, indent=2))
    else:
        lines = [f"gait          {g}"]
        lines.append(
            "params        tau_f={tau_f:g} tau_g={tau_g:g} tau_delta={tau_delta:g}".format(
                **report["gait"]
            )
        )
        ev = report["eigenvalue"]
        lines.append(f"eigenvalue    {ev['max_cycle_mean']:g}"
                     + ("" if ev["closed_form"] is None else " (closed form agrees)"))
        if "eigenvector" in report:
            lines.append(f"eigenvector   {report['eigenvector']}")
        lines.append(f"irreducible   {report['irreducible']}")
        lines.append(f"assumptions   a1={report['assumptions']['a1']} "
                     f"a2={report['assumptions']['a2']}")
        if "critical_graph" in report:
            cg = report["critical_graph"]
            lines.append(f"critical      nodes={cg['critical_nodes']} "
                         f"sccs={cg['scc_count']}")
        if "coupling" in report:
            cp = report["coupling"]
            lines.append(f"coupling      c={cp['cyclicity']} k0={cp['coupling_time']}")
        _write_or_echo(out, "report.txt", "\n".join(lines))


@cli.command("simulate")
@_with_input_options
@click.option("--steps", type=int, default=10, show_default=True,
              help="Steps per segment when the config does not say.")
@click.option("--x0", "x0_mode", type=click.Choice(["eigenvector", "zeros", "random"]),
              default="eigenvector", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for --x0 random.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "ascii"]),
              default="json", show_default=True)
@click.option("--quantum", type=float, default=0.25, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for trajectory.csv/.json, schedule.json, "
                   "verify_report.json, diagram.txt.")
def simulate_cmd(input_path, dsl, tau_f, tau_g, tau_delta, steps, x0_mode, seed,
                 fmt, quantum, out):
    """Simulate a gait or plan; verify the schedule; export everything."""
    params = _params_from_flags(tau_f, tau_g, tau_delta)
    if dsl is not None:
        if input_path is not None:
            raise ValidationError("provide exactly one of --input or --dsl")
        g, p = parse_gait_spec(dsl, params)
        plan, x0_cfg = SimulationPlan([Segment(g, p, steps)]), None
    else:
        if input_path is None:
            raise ValidationError("provide exactly one of --input or --dsl")
        text = _read_input(input_path)
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON: {err}") from None
        if not isinstance(obj, dict):
            raise ParseError("simulation input must be a JSON object")
        plan, x0_cfg = _plan_from_config(obj, steps)
    if x0_mode == "zeros":
        x0 = "zeros"
    elif x0_mode == "random":
        rng = np.random.default_rng(seed)
        x0 = rng.integers(0, 10, size=2 * plan.n).astype(float)
    else:
        x0 = x0_cfg  # config x0 if present, else eigenvector default
    traj = simulate(plan, x0)
    report = verify_schedule(traj)
    last_params = plan.segments[-1].params
    schedule = extract_schedule(traj, last_params)
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        Path(out, "trajectory.csv").write_text(traj.to_csv())
        Path(out, "trajectory.json").write_text(traj.to_json())
        Path(out, "schedule.json").write_text(schedule.to_json())
        Path(out, "verify_report.json").write_text(report.to_json())
        Path(out, "diagram.txt").write_text(render_diagram(schedule, quantum) + "\n")
        click.echo(f"wrote trajectory, schedule, report, diagram to {out}")
    elif fmt == "csv":
        click.echo(traj.to_csv(), nl=False)
    elif fmt == "ascii":
        click.echo(render_diagram(schedule, quantum))
        click.echo("")
        click.echo(f"verify: {'ok' if report.ok else 'VIOLATIONS'} "
                   f"({report.checked_steps} steps checked)")
    else:
        click.echo(json.dumps(
            {
                "trajectory": traj.to_dict(),
                "schedule": schedule.to_dict(),
                "verify": report.to_dict(),
            },
            indent=2,
        ))
    if not report.ok:
        for v in report.violations:
            click.echo(f"violation at step {v.step} [{v.kind}]: {v.detail}", err=True)
        raise ConstraintViolation(f"{len(report.violations)} schedule violations")


@cli.command()
@_with_input_options
@click.option("--format", "fmt", type=click.Choice(["json", "ascii"]), default="json",
              show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def matrices(input_path, dsl, tau_f, tau_g, tau_delta, fmt, out):
    """Dump P, Q, C, A0, A1, A, A_bar (and blocks for normal gaits)."""
    g, params = _load_gait(input_path, dsl, _params_from_flags(tau_f, tau_g, tau_delta))
    mats = system_matrix(g, params)
    named = mats.named()
    if is_normal(g):
        blocks = structural_blocks(g, params)
        named["Delta"] = blocks.Delta
        named["DeltaPrime"] = blocks.DeltaPrime
        named["V"] = blocks.V
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        payload = {name: mat.to_dict() for name, mat in named.items()}
        _write_or_echo(out, "matrices.json", json.dumps(payload, indent=2))
    else:
        chunks = [f"{name}:\n{mat.pretty()}" for name, mat in named.items()]
        _write_or_echo(out, "matrices.txt", "\n\n".join(chunks))


@cli.command()
@_with_input_options
@click.option("--steps", type=int, default=8, show_default=True)
@click.option("--quantum", type=float, default=0.25, show_default=True)
def diagram(input_path, dsl, tau_f, tau_g, tau_delta, steps, quantum):
    """Print the stance/swing chart of a steady-state run."""
    g, params = _load_gait(input_path, dsl, _params_from_flags(tau_f, tau_g, tau_delta))
    traj = simulate(SimulationPlan([Segment(g, params, steps)]))
    schedule = extract_schedule(traj, params)
    click.echo(render_diagram(schedule, quantum))


def main(argv=None) -> int:
    """Console entry point with the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except TropigaitError as err:
        click.echo(f"error: {err}", err=True)
        code = err.exit_code
    except click.UsageError as err:
        click.echo(f"error: {err.format_message()}", err=True)
        code = 2
    except click.exceptions.Exit as err:
        code = err.exit_code
    except click.Abort:
        code = 1
    except OSError as err:
        click.echo(f"i/o error: {err}", err=True)
        code = 4
    else:
        code = 0
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
