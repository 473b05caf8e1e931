"""Command-line frontend: orbits, classification, region grids, verification
campaigns, measures and fixed points.

Rationals enter as exact "num/den" strings; there is no floating-point entry
point anywhere.  Structured output is JSON (CSV for grids) with stable keys.
Exit codes: 0 on success (any orbit verdict counts as success), 1 when a
verification campaign reports failures, 2 on usage errors.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from .dynamics import (
    MapParams,
    backward_orbit,
    exact_fixed_points,
    fixed_points,
    forward_orbit,
    three_cycle,
)
from .measure import measure_report, tn_rows
from .padics import validate_odd_prime
from .regions import RegionLabel, classify, regime_of_d
from .verifier import (
    builtin_campaign,
    builtin_campaign_names,
    campaign_summary,
    load_campaign,
    parse_rational,
    run_campaign,
)


def _rational(ctx, param, value):
    if value is None:
        return None
    p = ctx.params.get("prime")
    try:
        return parse_rational(value, p)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(str(exc)) from None


def _parse_label(text: str, regime) -> RegionLabel:
    text = text.strip()
    head = text.rstrip("0123456789")
    tail = text[len(head):]
    return RegionLabel(regime, head, int(tail) if tail else None)


def _prime(ctx, param, value):
    try:
        return validate_odd_prime(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


prime_option = click.option(
    "--prime", "-p", type=int, required=True, is_eager=True, callback=_prime,
    help="Odd prime p (validated; 2 is rejected).",
)
c_option = click.option(
    "--c", "c", default=None, callback=_rational,
    help="Map parameter c as an exact 'num/den' string.",
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)
seed_option = click.option("--seed", type=int, default=None, help="Override campaign seeds.")


@click.group()
def main():
    """Exact backward dynamics of (x, y) -> (xy + c, x) over Q_p^2."""


@main.command()
@prime_option
@c_option
@click.option("--x", "x", required=True, callback=_rational, help="x as 'num/den'.")
@click.option("--y", "y", required=True, callback=_rational, help="y as 'num/den'.")
@click.option("--steps", type=int, default=20, show_default=True)
@click.option("--direction", type=click.Choice(["backward", "forward"]), default="backward",
              show_default=True)
@click.option("--escape-exp", type=int, default=None,
              help="Escape threshold on max norm exponent (omit to disable).")
@click.option("--bit-budget", type=int, default=1_000_000, show_default=True)
def orbit(prime, c, x, y, steps, direction, escape_exp, bit_budget):
    """Run an orbit and print its JSON trace; exit 0 on any verdict."""
    if c is None:
        raise click.UsageError("--c is required")
    from .padics import Point

    params = MapParams(c)
    pt = Point(x, y)
    runner = backward_orbit if direction == "backward" else forward_orbit
    rec = runner(pt, params, steps, escape_exponent=escape_exp, bit_budget=bit_budget)
    click.echo(json.dumps(rec.to_json(), indent=1))


@main.command()
@prime_option
@c_option
@click.option("--x", "x", default=None, callback=_rational)
@click.option("--y", "y", default=None, callback=_rational)
@click.option("--a", "a", type=int, default=None, help="Norm exponent of x (profile mode).")
@click.option("--b", "b", type=int, default=None, help="Norm exponent of y (profile mode).")
def classify_cmd(prime, c, x, y, a, b):
    """Classify a point or a norm profile into its region."""
    if c is None:
        raise click.UsageError("--c is required")
    if c.is_zero:
        raise click.UsageError("c = 0 is degenerate: no region partition exists")
    d = c.norm_exponent
    if x is not None and y is not None:
        profile = (x.norm_exponent, y.norm_exponent)
    elif a is not None and b is not None:
        profile = (a, b)
    else:
        raise click.UsageError("give either --x/--y or --a/--b")
    label = classify(profile, d)
    click.echo(json.dumps({"profile": list(profile), "d": d, "region": label.to_json()}))


@main.command()
@prime_option
@c_option
@click.option("--window", type=int, default=12, show_default=True)
@format_option
def grid(prime, c, window, fmt):
    """Region label for every integer profile |a|, |b| <= window (CSV or JSON)."""
    if c is None:
        raise click.UsageError("--c is required")
    if c.is_zero:
        raise click.UsageError("c = 0 is degenerate: no region partition exists")
    d = c.norm_exponent
    rows = []
    for a in range(-window, window + 1):
        for b in range(-window, window + 1):
            label = classify((a, b), d)
            rows.append((a, b, label.name, label.index))
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["a", "b", "region_name", "region_index"])
        writer.writerows(rows)
        click.echo(out.getvalue(), nl=False)
    else:
        click.echo(json.dumps([
            {"a": a, "b": b, "name": n, "index": i} for a, b, n, i in rows
        ]))


@main.command()
@click.argument("campaign")
@seed_option
@click.option("--samples", type=int, default=None, help="Override sample counts.")
@click.option("--list", "list_builtin", is_flag=True, help="List bundled campaign names.")
def verify(campaign, seed, samples, list_builtin):
    """Run a verification campaign (a JSON file or a bundled name).

    Exits 0 iff no check produced a counterexample; skipped-empty regions and
    excluded-null inverse hits are reported but do not fail the run.
    """
    if list_builtin:
        click.echo(json.dumps(builtin_campaign_names()))
        return
    try:
        specs = builtin_campaign(campaign)
    except FileNotFoundError:
        try:
            specs = load_campaign(campaign)
        except OSError as exc:
            raise click.UsageError(f"cannot load campaign {campaign!r}: {exc}") from None
    if seed is not None:
        for spec in specs:
            spec.seed = seed
    reports = run_campaign(specs, samples_override=samples)
    summary = campaign_summary(reports)
    click.echo(json.dumps(summary, indent=1))
    if not summary["ok"]:
        sys.exit(1)


@main.command()
@prime_option
@c_option
@click.option("--tn", "tn", is_flag=True, help="Overlay sphere-pair measures and partial sums.")
@click.option("--k", type=int, default=2, show_default=True, help="|c| = p^k for --tn (k >= 2).")
@click.option("--n", type=int, default=8, show_default=True, help="Largest index for --tn.")
@click.option("--region", default=None, help="Region label, e.g. Z, J0, A3, C0.")
@click.option("--window", type=int, default=8, show_default=True)
def measure(prime, c, tn, k, n, region, window):
    """Exact Haar measures: overlay family rows, or a region's window measure."""
    if tn:
        rows = tn_rows(n, k, prime)
        out = [
            {
                "n": row["n"],
                "exact": f"{row['exact'].numerator}/{row['exact'].denominator}",
                "ball_product": str(row["ball_product"]),
                "sphere_to_ball_ratio":
                    f"{row['sphere_to_ball_ratio'].numerator}/{row['sphere_to_ball_ratio'].denominator}",
                "partial_sum": f"{row['partial_sum'].numerator}/{row['partial_sum'].denominator}",
            }
            for row in rows
        ]
        click.echo(json.dumps({"k": k, "p": prime, "rows": out}, indent=1))
        return
    if region is None or c is None:
        raise click.UsageError("give --tn, or both --region and --c")
    if c.is_zero:
        raise click.UsageError("c = 0 is degenerate: no region partition exists")
    d = c.norm_exponent
    label = _parse_label(region, regime_of_d(d))
    click.echo(json.dumps(measure_report(label, d, prime, window), indent=1))


@main.command("fixed-points")
@prime_option
@c_option
@click.option("--precision", type=int, default=20, show_default=True)
def fixed_points_cmd(prime, c, precision):
    """Fixed points (digit expansions, exact rationals when they exist) and the 3-cycle."""
    if c is None:
        raise click.UsageError("--c is required")
    params = MapParams(c)
    pts = fixed_points(params, precision)
    exact = exact_fixed_points(params)
    cycle = three_cycle(params)
    report = {
        "count": len(pts),
        "fixed_points": [{"x": a.to_json(), "y": b.to_json()} for a, b in pts],
        "exact_fixed_points": None if exact is None else [pt.to_json() for pt in exact],
        "three_cycle": [pt.to_json() for pt in cycle],
    }
    if not pts:
        report["note"] = "no fixed points in Q_p^2: 1 - 4c is not a square"
    click.echo(json.dumps(report, indent=1))


main.add_command(classify_cmd, name="classify")

if __name__ == "__main__":
    main()
