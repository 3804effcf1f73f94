"""Command-line front end.

Matrices travel as {"dim", "re", "im"} JSON; trajectories and clouds as CSV.
Exit status: 0 on success, 1 on a domain error (its name goes to stderr),
2 on a usage error.
"""
from __future__ import annotations

import csv
import json
import os
import sys

import click
import numpy as np

from . import cartan, kakdec, pmp, reach, timeopt
from . import kron as kr
from .config import DEFAULT, use_tolerances
from .errors import MalformedInput, SpinoptError
from .matcore import from_json, to_json

DEFAULT_SEED = 0xC0FFEE


def _dump(obj):
    click.echo(json.dumps(obj, indent=1, sort_keys=True))


def _read_json(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise click.UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path}: {e.msg} at line {e.lineno} column {e.colno}") from None


def _read_matrix(path):
    return from_json(_read_json(path))


def _floats(text):
    body = text.strip().strip("()[]")
    try:
        return [float(v) for v in body.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected numbers, got {text!r}") from None


def _terms(text, n):
    """Matrix from 'coef:label, coef:label' over the tensor basis of n spins."""
    M = 0
    for part in text.split(","):
        c, sep, lab = part.partition(":")
        if not sep:
            raise click.BadParameter(f"expected coef:label, got {part!r}")
        e = kr.parse_elem(lab)
        if len(e.factors) != n:
            raise MalformedInput(f"{lab!r} does not act on {n} spins")
        M = M + float(c) * e.matrix
    return np.asarray(M, dtype=np.complex128)


def _system(name, hd):
    if hd is None:
        return timeopt.make_system(name)
    if "I" in hd:
        return timeopt.system_from_drift(name, _terms(hd, 1 if name == "su2" else 2))
    return timeopt.make_system(name, _floats(hd))


def _seed(ctx, seed):
    if seed is not None:
        return seed
    return ctx.obj["seed"]


def _fmt(x):
    return repr(float(x))


def _matrix_row(M):
    M = np.asarray(M)
    return [_fmt(v) for v in M.real.ravel()] + [_fmt(v) for v in M.imag.ravel()]


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _matrix_header(dim):
    return ([f"re{i}{j}" for i in range(dim) for j in range(dim)]
            + [f"im{i}{j}" for i in range(dim) for j in range(dim)])


SYSTEM = click.option("--system", type=click.Choice(["su2", "su4"]), default="su2", show_default=True)
HD = click.option("--hd", default=None, help="Drift as torus coordinates '1,2,4' or terms 'c:label,...'.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--seed", type=int, default=None, help="Master seed (default SPINOPT_SEED or 0xC0FFEE).")
@click.option("--tol", "tols", multiple=True, metavar="NAME=VALUE", help="Override a named tolerance.")
@click.pass_context
def main(ctx, seed, tols):
    """Time-optimal control synthesis on SU(2) and SU(4)."""
    if seed is None:
        env = os.environ.get("SPINOPT_SEED")
        try:
            seed = int(env, 0) if env else DEFAULT_SEED
        except ValueError:
            raise click.UsageError(f"SPINOPT_SEED is not an integer: {env!r}") from None
    try:
        t = DEFAULT.with_overrides(tols)
    except (KeyError, ValueError) as e:
        raise click.UsageError(str(e)) from None
    ctx.obj = {"seed": seed}
    ctx.with_resource(use_tolerances(t))


@main.command()
@SYSTEM
@HD
@click.option("--target", required=True, help="MatC JSON file ('-' for stdin).")
@click.option("--out", default=None, help="Write the sequence here instead of stdout.")
def synthesize(system, hd, target, out):
    """Time-optimal pulse sequence for a target unitary."""
    sysm = _system(system, hd)
    seq = timeopt.synthesize(_read_matrix(target), sysm)
    text = json.dumps(seq.to_json(), indent=1, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    click.echo(text if not out else json.dumps({"total_time": seq.total_time, "segments": len(seq.segments)}))


def _seq_system(seq):
    hd = list(seq.hd) if seq.hd else None
    return timeopt.make_system(seq.system, hd)


@main.command()
@click.option("--seq", required=True, help="PulseSequence JSON file.")
@click.option("--csv", "csv_path", default=None, help="Trajectory CSV output.")
@click.option("--step", type=float, default=None, help="Sampling step (default total/256).")
@click.option("--v-max", type=float, default=None, help="Replace hard pulses by finite-amplitude pulses.")
def simulate(seq, csv_path, step, v_max):
    """Left-multiply a pulse sequence and report the endpoint."""
    s = timeopt.PulseSequence.from_json(_read_json(seq))
    sysm = _seq_system(s)
    r = timeopt.simulate(s, sysm, step=step, v_max=v_max)
    if csv_path:
        _write_csv(csv_path, ["t"] + _matrix_header(sysm.N),
                   [[_fmt(t)] + _matrix_row(M) for t, M in r.trajectory])
    _dump({"endpoint": to_json(r.endpoint), "duration": r.duration, "samples": len(r.trajectory)})


@main.command()
@click.option("--seq", required=True)
@click.option("--target", required=True)
def verify(seq, target):
    """Endpoint error and optimality certificate of a sequence."""
    s = timeopt.PulseSequence.from_json(_read_json(seq))
    rep = timeopt.verify(s, _read_matrix(target), _seq_system(s))
    _dump(rep.to_json())


@main.command()
@SYSTEM
@click.option("--target", required=True)
def kak(system, target):
    """KAK factors with the torus part in the closed cell."""
    g = _read_matrix(target)
    r = kakdec.kak(g, roots=cartan.roots_for(system))
    _dump(r.to_json())


@main.command()
@SYSTEM
@HD
def orbit(system, hd):
    """Weyl orbit of the drift as coordinate tuples."""
    sysm = _system(system, hd)
    for p in sysm.orbit.points:
        click.echo("(" + ", ".join(_fmt(v) for v in p) + ")")


@main.command()
@SYSTEM
@HD
@click.option("--target", required=True, help="Torus coordinates, e.g. '(0.785)'.")
def alpha(system, hd, target):
    """Minimal time for a torus target (folded into the cell first)."""
    sysm = _system(system, hd)
    x = np.array(_floats(target))
    if x.shape != (sysm.roots.rank,):
        raise click.BadParameter(f"need {sysm.roots.rank} coordinates")
    f = kakdec.fold_to_cell(x, sysm.cell)
    a = timeopt.alpha_star(f.x_folded, sysm.orbit)
    _dump({"alpha": a.alpha, "betas": [float(b) for b in a.betas],
           "x_folded": [float(v) for v in f.x_folded]})


@main.command("kostant-sample")
@SYSTEM
@click.option("--x", "xs", default=None, help="Torus coordinates (default: the system drift).")
@click.option("--n", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.pass_context
def kostant_sample(ctx, system, xs, n, seed):
    """Projection of random K-conjugates against the Weyl hull."""
    roots = cartan.roots_for(system)
    x = timeopt.DEFAULT_HD[system] if xs is None else _floats(xs)
    rep = cartan.kostant_sample(x, cartan.pair_for(system), roots, n, _seed(ctx, seed))
    _dump(rep.to_json())


def _reach_cfg(ctx, n, seed, n_switches, v_max, mode):
    return reach.ReachConfig(n_samples=n, seed=_seed(ctx, seed), n_switches=n_switches,
                             v_max=v_max, mode=mode)


@main.command("reach-sample")
@SYSTEM
@click.option("--which", type=click.Choice(["unreduced", "adjoint", "reduced"]), default="adjoint")
@click.option("--t", "t", type=float, required=True)
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--n-switches", type=int, default=8, show_default=True)
@click.option("--v-max", type=float, default=40.0, show_default=True)
@click.option("--mode", type=click.Choice(["emulate", "uniform"]), default="emulate")
@click.option("--csv", "csv_path", default=None)
@click.pass_context
def reach_sample(ctx, system, which, t, n, seed, n_switches, v_max, mode, csv_path):
    """Endpoints of random piecewise-constant controls."""
    sysm = timeopt.make_system(system)
    cfg = _reach_cfg(ctx, n, seed, n_switches, v_max, mode)
    cloud = reach.sample_reach(which, sysm, t, cfg)
    if csv_path:
        _write_csv(csv_path, ["i"] + _matrix_header(sysm.N),
                   [[str(i)] + _matrix_row(M) for i, M in enumerate(cloud.points)])
    d = [reach.bi_invariant_distance(M) for M in cloud.points]
    _dump({"system": which, "t": t, "n": len(cloud), "max_distance": max(d) if d else 0.0,
           "bound": float(np.linalg.norm(sysm.H_d) * t)})


@main.command("equiv-gap")
@click.option("--t", "t", type=float, required=True)
@click.option("--ladder", default="10,40,160", show_default=True)
@click.option("--n", type=int, default=5000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--n-switches", type=int, default=8, show_default=True)
@click.option("--json", "json_path", default=None)
@click.pass_context
def equiv_gap(ctx, t, ladder, n, seed, n_switches, json_path):
    """Sampled distances between unreduced and adjoint clouds over a v_max ladder."""
    sysm = timeopt.make_system("su2")
    cfg = _reach_cfg(ctx, n, seed, n_switches, 40.0, "emulate")
    rep = reach.equivalence_gap(t, sysm, cfg, _floats(ladder))
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(rep.to_json(), indent=1, sort_keys=True) + "\n")
    _dump(rep.to_json())


@main.command("pmp-extremal")
@SYSTEM
@click.option("--A", "A", default=None, help="Terms 'c:label,...' (default: the drift).")
@click.option("--C", "C", default=None, help="Terms 'c:label,...' in k (default 0).")
@click.option("--t-max", type=float, default=2 * np.pi, show_default=True)
@click.option("--samples", type=int, default=64, show_default=True)
@click.option("--csv", "csv_path", default=None)
def pmp_extremal(system, A, C, t_max, samples, csv_path):
    """Sample the extremal family and its residuals."""
    sysm = timeopt.make_system(system)
    n = 1 if system == "su2" else 2
    Am = sysm.H_d if A is None else _terms(A, n)
    Cm = np.zeros_like(sysm.H_d) if C is None else _terms(C, n)
    p = pmp.ExtremalParams.make(Am, Cm, sysm.pair, sysm.H_d)
    ts = np.linspace(0.0, t_max, samples)
    g, X, u = pmp.extremal_traj(p, ts)
    rows, worst = [], {"ode_g": 0.0, "ode_X": 0.0, "extremality": 0.0}
    H0 = pmp.hamiltonian(X[0], u[0])
    drift = 0.0
    for i, t in enumerate(ts):
        rg, rX = pmp.ode_residuals(p, t)
        ex = pmp.extremality_residual(X[i], u[i], sysm.pair)
        H = pmp.hamiltonian(X[i], u[i])
        drift = max(drift, abs(H - H0))
        worst = {"ode_g": max(worst["ode_g"], rg), "ode_X": max(worst["ode_X"], rX),
                 "extremality": max(worst["extremality"], ex)}
        rows.append([_fmt(t)] + _matrix_row(g[i]) + [_fmt(rg), _fmt(rX), _fmt(ex), _fmt(H)])
    if csv_path:
        _write_csv(csv_path, ["t"] + _matrix_header(sysm.N) + ["res_g", "res_X", "extremality", "hamiltonian"], rows)
    worst["hamiltonian_drift"] = drift
    _dump(worst)


@main.command("check-pair")
@click.option("--n", "n", type=int, required=True)
def check_pair(n):
    """Decide whether the weight pair on n spins is symmetric."""
    r = cartan.check_symmetric_pair(n)
    if r.symmetric:
        click.echo("symmetric")
        return
    click.echo("not symmetric")
    if r.witness:
        click.echo(f"witness: {r.witness[0]} , {r.witness[1]}")
        click.echo(f"p-component norm: {_fmt(r.p_component_norm)}")


def run(argv=None) -> int:
    """Entry point returning the exit status instead of exiting."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        main.main(args=argv, prog_name="spinopt", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        return 2
    except SpinoptError as e:
        click.echo(f"error: {e.name}: {e}", err=True)
        return 1
    return 0


def entry():
    sys.exit(run())
