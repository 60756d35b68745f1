"""Command-line interface.

Exit codes: 0 success / verification passed, 1 verification failed,
2 input error, 3 target infeasible for a local realization, 4 rank
condition failure.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, io, optics, states, synthesis, verify
from .core import SynthesisParams, graph_from_covariance, state_from_graph
from .errors import CovAssignError, InfeasibleTargetError, RankConditionError
from .linalg import is_hurwitz, solve_lyapunov

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_RANK = 4

TOL_ENV = "COVASSIGN_TOL"


class CommandError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _default_tol():
    try:
        return float(os.environ.get(TOL_ENV, "1e-7"))
    except ValueError:
        return 1e-7


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise CommandError(f"expected comma-separated numbers, got {text!r}") from exc


def _out_dir(path):
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(source, alpha):
    """``source`` is a graph JSON file or a fixture name."""
    path = Path(source)
    if path.exists():
        return io.graph_from_json(io.read_json(path)), io.file_hash(path)
    if source in states.FIXTURE_NAMES:
        g = states.fixture(source, alpha=alpha).graph
        return g, f"fixture:{source}:alpha={alpha!r}"
    raise CommandError(f"no graph file or fixture named {source!r}")


def _load_target(path):
    obj = io.read_json(path)
    if "V" in obj:
        V = io.decode_matrix(obj["V"], real=True)
        return state_from_graph(graph_from_covariance(V))
    return state_from_graph(io.graph_from_json(obj))


def _report_dict(rep, extra):
    out = rep.as_dict()
    out.update(extra)
    out["version"] = __version__
    return out


# ---------------------------------------------------------------- commands


def cmd_state(args):
    if args.kind == "vacuum":
        if args.modes is None or args.modes < 1:
            raise CommandError("state vacuum needs --modes >= 1")
        g = states.vacuum(args.modes)
    elif args.kind == "tms":
        g = states.two_mode_squeezed(args.alpha)
    elif args.kind == "cluster":
        if args.adjacency is None:
            raise CommandError("state cluster needs --adjacency FILE")
        B = io.decode_matrix(io.read_json(args.adjacency), real=True)
        g = states.canonical_cluster(B, args.alpha)
    elif args.kind == "fixture":
        if args.name is None:
            raise CommandError(f"state fixture needs --name (one of {', '.join(states.FIXTURE_NAMES)})")
        g = states.fixture(args.name, alpha=args.alpha, lam=args.lam).graph
    else:  # pragma: no cover - argparse restricts choices
        raise CommandError(f"unknown state kind {args.kind!r}")
    out = _out_dir(args.out)
    io.write_json(out / "graph.json", io.graph_to_json(g))
    io.write_json(out / "covariance.json", {"V": io.encode_matrix(state_from_graph(g).V)})
    return EXIT_OK


def cmd_synth(args):
    g, ghash = _load_graph(args.graph, args.alpha)
    chain = None
    method = args.method
    if method == "cascade":
        chain, r = synthesis.realize_cascade(g)
    elif method == "general":
        if not (args.R and args.Gamma and args.P):
            raise CommandError("synth general needs --R, --Gamma and --P files")
        params = SynthesisParams(
            io.decode_matrix(io.read_json(args.R), real=True),
            io.decode_matrix(io.read_json(args.Gamma), real=True),
            io.decode_matrix(io.read_json(args.P)),
        )
        r = synthesis.realize_general(g, params)
    elif method == "local":
        mode = args.mode if args.mode is not None else _first_eligible(g)
        alphas = _floats(args.alphas) if args.alphas else None
        r = synthesis.realize_local(g, mode, alphas)
    elif method == "local-passive":
        if args.P:
            P = io.decode_matrix(io.read_json(args.P))
        else:
            P = np.zeros((g.n, 1))
            P[(args.mode or g.n) - 1, 0] = 1.0
        if not args.gamma_coeffs:
            raise CommandError("synth local-passive needs --gamma-coeffs")
        r = synthesis.realize_local_passive(g, P, _floats(args.gamma_coeffs))
    else:  # pragma: no cover
        raise CommandError(f"unknown method {method!r}")

    rep = verify.verify_assignment(r, g, tol=args.tol)
    out = _out_dir(args.out)
    io.write_json(out / "M.json", io.encode_matrix(r.M))
    io.write_json(out / "C.json", io.encode_matrix(r.C))
    if chain is not None:
        io.write_json(out / "chain.json", io.chain_to_json(chain))
    io.write_json(out / "report.json", _report_dict(rep, {"method": method, "inputs": {"graph": ghash}}))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _first_eligible(g):
    feas = synthesis.local_feasibility(g)
    if not feas.feasible:
        raise InfeasibleTargetError("no mode of the target admits a local coupling", feas)
    return feas.eligible_modes[0]


def cmd_verify(args):
    r = io.realization_from_files(args.M, args.C)
    target = _load_target(args.target)
    if target.n != r.n:
        raise CommandError(f"realization has {r.n} modes, target has {target.n}")
    rep = verify.verify_assignment(r, target, tol=args.tol)
    hashes = {k: io.file_hash(p) for k, p in (("M", args.M), ("C", args.C), ("target", args.target))}
    sys.stdout.write(io.dumps(_report_dict(rep, {"inputs": hashes})))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_simulate(args):
    r = io.realization_from_files(args.M, args.C)
    dim = 2 * r.n
    if args.V0:
        obj = io.read_json(args.V0)
        V0 = io.decode_matrix(obj["V"] if "V" in obj else obj, real=True)
        if V0.shape != (dim, dim):
            raise CommandError(f"V0 must be {dim}x{dim}")
    else:
        V0 = 0.5 * np.eye(dim)
    if not args.t_end > 0 or args.steps < 1:
        raise CommandError("need --t-end > 0 and --steps >= 1")
    times = np.linspace(0.0, args.t_end, args.steps + 1)
    traj = verify.simulate_moments(r, V0, times=times)
    ss = verify.state_space(r)
    if is_hurwitz(ss.A).hurwitz:
        Vinf = solve_lyapunov(ss.A, ss.D)
        dist = [float(np.linalg.norm(V - Vinf)) for V in traj.covariances]
    else:
        dist = None
    out = _out_dir(args.out)
    io.write_json(out / "trajectory.json", {
        "times": [float(t) for t in traj.times],
        "means": [[float(x) for x in m] for m in traj.means],
        "covariances": [io.encode_matrix(V) for V in traj.covariances],
        "distance_to_steady_state": dist,
    })
    return EXIT_OK


def cmd_netlist(args):
    r = io.realization_from_files(args.M, args.C)
    if args.gamma is not None and not args.gamma > 0:
        raise CommandError("--gamma must be positive")
    nl = optics.netlist(r, args.gamma)
    out = _out_dir(args.out)
    obj = nl.as_dict()
    obj["pumped_crystal_count"] = nl.pumped_crystal_count
    io.write_json(out / "netlist.json", obj)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser():
    p = argparse.ArgumentParser(prog="covassign", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--format", choices=["json"], default="json")
        if out:
            sp.add_argument("--out", default=".")

    s = sub.add_parser("state", help="write graph.json and covariance.json for a target")
    s.add_argument("kind", choices=["vacuum", "tms", "cluster", "fixture"])
    s.add_argument("--modes", type=int)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--adjacency")
    s.add_argument("--name")
    s.add_argument("--lambda", dest="lam", type=float, default=float(states.SQRT2))
    common(s)
    s.set_defaults(func=cmd_state)

    s = sub.add_parser("synth", help="synthesize and verify a realization")
    s.add_argument("method", choices=["general", "cascade", "local", "local-passive"])
    s.add_argument("--graph", required=True, help="graph JSON file or fixture name")
    s.add_argument("--alpha", type=float, default=0.5, help="squeezing for fixture graphs")
    s.add_argument("--tol", type=float, default=_default_tol())
    s.add_argument("--mode", type=int)
    s.add_argument("--alphas")
    s.add_argument("--gamma-coeffs")
    s.add_argument("--R")
    s.add_argument("--Gamma")
    s.add_argument("--P")
    common(s)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("verify", help="check a realization against a target")
    s.add_argument("--M", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("--target", required=True, help="graph.json or covariance.json")
    s.add_argument("--tol", type=float, default=_default_tol())
    common(s, out=False)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="integrate mean and covariance dynamics")
    s.add_argument("--M", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("--V0")
    s.add_argument("--t-end", type=float, default=10.0)
    s.add_argument("--steps", type=int, default=100)
    common(s)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("netlist", help="export optical components")
    s.add_argument("--M", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("--gamma", type=float)
    common(s)
    s.set_defaults(func=cmd_netlist)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleTargetError as exc:
        sys.stderr.write(f"error: {exc}\n")
        sys.stdout.write(io.dumps(exc.feasibility.as_dict()))
        return EXIT_INFEASIBLE
    except RankConditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        rep = exc.report
        sys.stdout.write(io.dumps({
            "numerical_rank": rep.numerical_rank,
            "singular_values": [float(s) for s in rep.singular_values],
            "threshold": rep.threshold,
        }))
        return EXIT_RANK
    except CommandError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (CovAssignError, ValueError, KeyError, TypeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
