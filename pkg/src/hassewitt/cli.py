"""Command-line front end for the Hasse-Witt batch engine.

Subcommands: compute (stream records to csv/jsonl), verify (recompute a
seeded sample of primes with the brute-force oracle and compare), bench
(sweep the subtree split parameter and report time/peak memory), selftest
(a handful of fixed sanity checks).

Exit codes: 0 ok, 1 usage error, 2 verification mismatch, 3 output I/O error.
"""

from __future__ import annotations

import json
import random
import sys
import time

import click

from .curve import CurveModel, validate_curve
from .errors import CurveError
from .hassewitt import (NAIVE_CUTOFF, compute_hassewitt_matrices,
                        iter_hassewitt_records, naive_hassewitt, naive_record,
                        point_count)
from .remainder import MemoryMeter

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_IO = 3

# Usage problems exit with 1; code 2 is reserved for verification mismatches.
click.UsageError.exit_code = EXIT_USAGE


def _parse_curve(text) -> CurveModel:
    try:
        coeffs = [int(x) for x in text.split(",")]
    except ValueError:
        raise click.UsageError(f"curve must be a comma list of integers, got {text!r}")
    try:
        return validate_curve(coeffs)
    except CurveError as exc:
        raise click.UsageError(f"invalid curve: {exc}")


def _csv_header(g):
    cols = ["p"]
    cols += [f"w{i}{j}" for i in range(1, g + 1) for j in range(1, g + 1)]
    cols.append("trace")
    if g == 1:
        cols.append("a_p")
    return ",".join(cols)


def _csv_line(rec, g):
    vals = [rec.p]
    vals += [rec.W[i][j] for i in range(g) for j in range(g)]
    vals.append(rec.trace)
    if g == 1:
        vals.append(rec.a_p)
    return ",".join(str(v) for v in vals)


def _jsonl_line(rec):
    return json.dumps(
        {
            "p": rec.p,
            "W": [list(row) for row in rec.W],
            "trace": rec.trace,
            "charpoly": list(rec.charpoly),
            "source": rec.source,
            "a_p": rec.a_p,
        },
        sort_keys=True,
    )


@click.group()
def main():
    """Hasse-Witt matrices of y^2 = f(x) modulo all admissible primes up to N."""


_curve_opt = click.option(
    "--curve", "curve_text", required=True,
    help="Coefficients f_0,...,f_d of f, ascending, comma separated.",
)
_n_opt = click.option("--N", "N", type=int, required=True, help="Prime bound N.")


@main.command()
@_curve_opt
@_n_opt
@click.option("--k", type=int, default=None, help="Subtree split override.")
@click.option("--k-adjust", type=int, default=0, help="Offset added to the default split.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv")
@click.option("--output", "output", type=str, default="-", help="Output path, - for stdout.")
@click.option("--naive-cutoff", type=int, default=NAIVE_CUTOFF)
@click.option("--safe-mode", is_flag=True, help="Use the large-modulus fallback everywhere.")
def compute(curve_text, N, k, k_adjust, fmt, output, naive_cutoff, safe_mode):
    """Stream one record per admissible prime p <= N."""
    curve = _parse_curve(curve_text)
    if N < 3:
        click.echo("nothing to do: N < 3", err=True)
        sys.exit(EXIT_OK)
    try:
        stream = sys.stdout if output == "-" else open(output, "w")
    except OSError as exc:
        click.echo(f"cannot open output: {exc}", err=True)
        sys.exit(EXIT_IO)
    try:
        if fmt == "csv":
            print(_csv_header(curve.g), file=stream)
        for rec in iter_hassewitt_records(
            curve, N, k=k, k_adjust=k_adjust,
            naive_cutoff=naive_cutoff, safe_mode=safe_mode,
        ):
            line = _csv_line(rec, curve.g) if fmt == "csv" else _jsonl_line(rec)
            print(line, file=stream)
            stream.flush()
    except OSError as exc:
        click.echo(f"write failed: {exc}", err=True)
        sys.exit(EXIT_IO)
    finally:
        if stream is not sys.stdout:
            stream.close()
    sys.exit(EXIT_OK)


@main.command()
@_curve_opt
@_n_opt
@click.option("--verify-fraction", type=float, default=0.1, show_default=True,
              help="Fraction of primes to re-check against the brute-force oracle.")
@click.option("--seed", type=int, default=0, show_default=True)
def verify(curve_text, N, verify_fraction, seed):
    """Recompute a seeded sample of primes naively and compare."""
    curve = _parse_curve(curve_text)
    if not 0.0 <= verify_fraction <= 1.0:
        raise click.UsageError("--verify-fraction must be in [0, 1]")
    records = compute_hassewitt_matrices(curve, N)
    rng = random.Random(seed)
    sample = [r for r in records if verify_fraction >= 1.0 or rng.random() < verify_fraction]
    mismatches = 0
    for rec in sample:
        expect = naive_hassewitt(curve, rec.p)
        if tuple(tuple(x % rec.p for x in row) for row in expect) != rec.W:
            mismatches += 1
            click.echo(f"MISMATCH p={rec.p}: got {rec.W}, oracle {expect}", err=True)
    click.echo(f"checked {len(sample)}/{len(records)} primes, {mismatches} mismatches")
    sys.exit(EXIT_OK if mismatches == 0 else EXIT_MISMATCH)


@main.command()
@_curve_opt
@_n_opt
@click.option("--k-max", type=int, default=None, help="Largest split to sweep (default: tree depth).")
def bench(curve_text, N, k_max):
    """Sweep the subtree split parameter, printing time and peak memory per k."""
    curve = _parse_curve(curve_text)
    # Depth of the forest for this N, mirroring the pipeline's sizing.
    ell = max(((N - 1) // 2).bit_length(), 1)
    ks = range(0, ell + 1 if k_max is None else min(k_max, ell) + 1)
    click.echo(f"{'k':>3} {'time(s)':>9} {'peak(MB)':>10}")
    for k in ks:
        meter = MemoryMeter()
        t0 = time.time()
        compute_hassewitt_matrices(curve, N, k=k, meter=meter)
        dt = time.time() - t0
        click.echo(f"{k:>3} {dt:>9.2f} {meter.peak / 8e6:>10.2f}")
    sys.exit(EXIT_OK)


@main.command()
def selftest():
    """Fixed end-to-end sanity checks on small built-in curves."""
    failures = 0

    def check(name, ok):
        nonlocal failures
        click.echo(f"{'ok' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1

    c = validate_curve([1, 1, 0, 1])
    rec5 = naive_record(c, 5)
    check("y^2=x^3+x+1: a_5 = -3", rec5.a_p == -3)
    check("y^2=x^3+x+1: #E(F_5) = 9", point_count(c, 5) == 9)
    recs = compute_hassewitt_matrices(c, 1 << 9)
    ok = all(
        tuple(tuple(x % r.p for x in row) for row in naive_hassewitt(c, r.p)) == r.W
        for r in recs
    )
    check("y^2=x^3+x+1: pipeline matches oracle up to 2^9", ok)
    c3 = validate_curve([19, 17, 13, 11, 7, 5, 3, 2])
    recs3 = compute_hassewitt_matrices(c3, 1 << 8)
    ok = all(
        tuple(tuple(x % r.p for x in row) for row in naive_hassewitt(c3, r.p)) == r.W
        for r in recs3
    )
    check("genus-3 curve: pipeline matches oracle up to 2^8", ok)
    sys.exit(EXIT_OK if failures == 0 else EXIT_MISMATCH)


if __name__ == "__main__":
    main()
