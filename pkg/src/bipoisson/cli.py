"""Command line: simulate paths, evaluate kernels and bridges, run verification suites.

Exit codes: 0 success (all claims pass), 1 a verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bridge as br
from .dists import support_table
from .kernel import PhaseError, ProcessParams, forward_kernel, reduce_params
from .trajectory import DEFAULT_DELTA, DEFAULT_K_MAX, simulate_by_representation, simulate_forward
from .verify import SUITES, make_rng, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "simulate"
    theta: float = 1.0
    eta: float | None = None
    horizon: float = 3.0
    delta: float = DEFAULT_DELTA
    k_max: int = DEFAULT_K_MAX
    n: int = 100_000
    n_seeds: int = 20
    seed: int = 42
    index: int = 0
    method: str = "forward"
    suite: str = "all"
    s: float = 0.0
    t: float | None = None
    z: int | float = 0
    u: float | None = None
    zu: int | float | None = None
    mass_table: int = 0
    grid_points: int = 1001
    out: str | None = None
    grid_out: str | None = None
    eps_tail: float = 1e-16
    eps_check: float = 1e-9

    @classmethod
    def from_json(cls, path: str) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise UsageError(f"cannot read config {path}: {err}") from err
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as err:
            raise UsageError(f"bad config: {err}") from err

    def validate(self):
        if self.command not in ("simulate", "kernel", "verify"):
            raise UsageError(f"unknown command {self.command!r}")
        if self.method not in ("forward", "representation"):
            raise UsageError(f"method must be forward or representation, got {self.method!r}")
        if self.suite not in SUITES:
            raise UsageError(f"suite must be one of {', '.join(SUITES)}")
        for name in ("k_max", "n", "n_seeds", "grid_points"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.mass_table < 0:
            raise UsageError("mass_table must be nonnegative")

    def resolve(self):
        """Canonical parameters and the (eta, theta) reduction if one was requested."""
        tol = dict(eps_tail=self.eps_tail, eps_check=self.eps_check)
        try:
            if self.eta is not None:
                red = reduce_params(self.eta, self.theta, **tol)
                return red.params, red
            return ProcessParams(self.theta, **tol), None
        except ValueError as err:
            raise UsageError(str(err)) from err


def _meta(cfg: RunConfig, params: ProcessParams, red) -> dict:
    meta = {"config": dataclasses.asdict(cfg), "theta": params.theta}
    if red is not None:
        meta["reduction"] = {"eta": cfg.eta, "theta": cfg.theta, "canonical_theta": params.theta,
                             "time_scale": red.time_scale, "space_scale": red.space_scale, "negate": red.negate}
    return meta


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


# ------------------------------------------------------------------ commands

def cmd_simulate(cfg: RunConfig) -> int:
    params, red = cfg.resolve()
    rng = make_rng(cfg.seed, cfg.index)
    sim = simulate_forward if cfg.method == "forward" else simulate_by_representation
    try:
        traj = sim(params, cfg.horizon, rng, delta=cfg.delta, k_max=cfg.k_max)
    except ValueError as err:
        raise UsageError(str(err)) from err

    fh, close = _open_out(cfg.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("phase", "time", "level"))
        for phase, t, level in traj.events():
            w.writerow((phase, repr(t), repr(level)))
    finally:
        if close:
            fh.close()

    if cfg.grid_out:
        t, x = traj.grid(cfg.grid_points)
        if red is not None:
            t, x = red.to_original(t, x)
        with open(cfg.grid_out, "w", newline="") as g:
            w = csv.writer(g, lineterminator="\n")
            w.writerow(("t", "x"))
            for a, b in zip(np.asarray(t).tolist(), np.asarray(x).tolist()):
                w.writerow((repr(a), repr(b)))

    meta = _meta(cfg, params, red)
    meta["trajectory"] = {
        "method": traj.method,
        "truncated": bool(traj.truncated),
        "n_birth": int(len(traj.birth_times)),
        "birth_window_end": traj.birth_window_end,
        "z1": traj.z1,
        "n_death": int(len(traj.death_times)),
        "death_window_start": traj.death_window_start,
        "z_T": int(traj.z_T),
        "events_coordinates": "canonical",
        "grid_coordinates": "original" if red is not None else "canonical",
    }
    if cfg.out and cfg.out != "-":
        Path(cfg.out + ".meta.json").write_text(_dump_json(meta))
    if traj.truncated:
        print("warning: event cap k_max reached; see metadata", file=sys.stderr)
    return EXIT_OK


def _parse_state(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _state_for(t: float, z):
    # integer phases take ints; at t = 1 an integral value is still a real state
    return float(z) if t == 1 and isinstance(z, int) else z


def cmd_kernel(cfg: RunConfig) -> int:
    params, red = cfg.resolve()
    if cfg.t is None:
        raise UsageError("--t is required")
    try:
        if cfg.u is None:
            z = _state_for(cfg.s, cfg.z)
            kl = forward_kernel(params, cfg.s, cfg.t, z)
            out = {"kind": "kernel", "case": kl.case, "s": cfg.s, "t": cfg.t, "z_s": z,
                   "law": kl.law.to_dict(), "offset": kl.offset}
            law, offset = kl.law, kl.offset
        else:
            if cfg.zu is None:
                raise UsageError("--zu is required with --u")
            q = br.BridgeQuery(cfg.s, cfg.t, cfg.u, _state_for(cfg.s, cfg.z), _state_for(cfg.u, cfg.zu))
            bl = br.bridge_law(params, q)
            mean, var = br.conditional_moments(params, q)
            out = {"kind": "bridge", "case": bl.case, "s": q.s, "t": q.t, "u": q.u, "z_s": q.z_s, "z_u": q.z_u,
                   "law": bl.law.to_dict(), "offset": bl.offset, "orientation": bl.orientation,
                   "x_mean": mean, "x_variance": var}
            law, offset = bl.law, bl.offset
    except (PhaseError, br.UnsupportedBridgeError, ValueError) as err:
        raise UsageError(str(err)) from err
    if cfg.mass_table:
        if not law.discrete:
            raise UsageError("mass table is only available for discrete laws")
        ks, lp, _ = support_table(law, params.eps_tail)
        out["mass_table"] = [[int(k + offset), float(v)] for k, v in zip(ks[: cfg.mass_table], lp)]
    if red is not None:
        out["reduction"] = _meta(cfg, params, red)["reduction"]
    fh, close = _open_out(cfg.out)
    try:
        fh.write(_dump_json(out))
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    params, red = cfg.resolve()
    reports = run_suite(cfg.suite, params, seed=cfg.seed, n=cfg.n, n_seeds=cfg.n_seeds)
    for r in reports:
        print(r.line(), file=sys.stderr)
    fh, close = _open_out(cfg.out)
    try:
        fh.write(_dump_json([r.to_dict() for r in reports]))
    finally:
        if close:
            fh.close()
    if cfg.out and cfg.out != "-":
        Path(cfg.out + ".meta.json").write_text(_dump_json(_meta(cfg, params, red)))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


COMMANDS = {"simulate": cmd_simulate, "kernel": cmd_kernel, "verify": cmd_verify}


# ------------------------------------------------------------------- parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON RunConfig; command-line flags override it")
    common.add_argument("--theta", type=float, default=S)
    common.add_argument("--eta", type=float, default=S, help="with --theta, reduce an (eta, theta) process")
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--out", default=S, help="output path ('-' for stdout)")
    common.add_argument("--eps-tail", dest="eps_tail", type=float, default=S)
    common.add_argument("--eps-check", dest="eps_check", type=float, default=S)

    p = _Parser(prog="bipoisson", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", parents=[common], help="simulate one trajectory")
    sim.add_argument("--horizon", "-T", type=float, default=S)
    sim.add_argument("--delta", type=float, default=S, help="half-width of the window around t = 1")
    sim.add_argument("--k-max", dest="k_max", type=int, default=S)
    sim.add_argument("--method", choices=("forward", "representation"), default=S)
    sim.add_argument("--index", type=int, default=S, help="trajectory index within the seed")
    sim.add_argument("--grid-out", dest="grid_out", default=S, help="dense (t, x) CSV")
    sim.add_argument("--grid-points", dest="grid_points", type=int, default=S)

    ker = sub.add_parser("kernel", parents=[common], help="transition or bridge law")
    ker.add_argument("--s", type=float, default=S)
    ker.add_argument("--t", type=float, default=S)
    ker.add_argument("--z", type=_parse_state, default=S, help="state at s (a real at s = 1)")
    ker.add_argument("--u", type=float, default=S, help="right endpoint: evaluate the bridge law")
    ker.add_argument("--zu", type=_parse_state, default=S)
    ker.add_argument("--mass-table", dest="mass_table", type=int, default=S, help="rows of log-mass to print")

    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("--suite", choices=SUITES, default=S)
    ver.add_argument("--n", type=int, default=S, help="Monte Carlo sample size")
    ver.add_argument("--n-seeds", dest="n_seeds", type=int, default=S)
    return p


def parse_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    path = ns.pop("config", None)
    cfg = RunConfig.from_json(path) if path else RunConfig()
    for k, v in ns.items():
        setattr(cfg, k, v)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
