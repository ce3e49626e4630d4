"""Command-line interface.

Subcommands: simulate, fit, cep, truth-cep, sweep, prentice, serve. Options
may come from a JSON/YAML config file (--config); explicit flags win. Exit
codes: 0 success, 1 malformed configuration, 2 data validation failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .cep import CepConfig, cep_from_chain, sensitivity_sweep, truth_cep
from .data import DataError, TrialData
from .mcmc import FitResult, PriorConfig, SamplerConfig, fit, load_fit
from .models import (EQUAL_13_23, FRAILTY_STRUCTURES, FULL_SIX, ArmModel,
                     DomainError, FrailtyConfig, QuadratureError, build_six_corr)
from .prentice import NumericalError, prentice_report
from .simulate import (CensoringConfig, SCENARIO_LABELS, ScenarioSpec,
                       scenario_arms, simulate_trial, transition_counts)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with the malformed-config exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _load_config_file(path):
    import yaml

    with open(path) as fh:
        text = fh.read()
    try:
        if path.endswith((".yaml", ".yml")):
            cfg = yaml.safe_load(text)
        else:
            cfg = json.loads(text)
    except Exception as e:
        raise DomainError(f"cannot parse config file {path}: {e}") from e
    if not isinstance(cfg, dict):
        raise DomainError(f"config file {path} must hold a mapping")
    return cfg


def _merge(defaults, args):
    """defaults < config file < explicit flags (argparse defaults are None)."""
    merged = dict(defaults)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        file_cfg = _load_config_file(cfg_path)
        unknown = set(file_cfg) - set(defaults)
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    for k in defaults:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    return merged


def _scales(text):
    parts = [float(v) for v in str(text).split(",")]
    if len(parts) != 3:
        raise DomainError(f"expected three comma-separated scales, got {text!r}")
    return tuple(parts)


def _grid(text):
    return [float(v) for v in str(text).split(",")]


def _frailty_config(o):
    kwargs = dict(structure=o["structure"], sigma_omega=o["sigma_omega"],
                  rho_s=o["rho_s"], rho_t=o["rho_t"])
    if o["structure"] == FULL_SIX:
        kwargs["full_corr"] = build_six_corr(rho_s=o["rho_s"], rho_t=o["rho_t"],
                                             rho_t1=o["rho_t1"], rho_t4=o["rho_t4"],
                                             rho_t2=o["rho_t"], rho_t3=o["rho_t"],
                                             rho_st=o["rho_st"])
    return FrailtyConfig(**kwargs)


def _write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
    return path


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

SIM_DEFAULTS = dict(scenario=2, n=600, seed=0, out=None, complete_out=None,
                    admin_time=10.0, no_admin=False, random_rate=0.0,
                    sigma_omega=0.4, rho_s=0.5, rho_t=0.5, structure=EQUAL_13_23,
                    rho_t1=0.95, rho_t4=0.95, rho_st=0.5)


def cmd_simulate(args):
    o = _merge(SIM_DEFAULTS, args)
    if not o["out"]:
        raise DomainError("simulate requires --out")
    spec = ScenarioSpec(
        scenario_id=int(o["scenario"]), n=int(o["n"]), seed=int(o["seed"]),
        frailty=_frailty_config(o),
        censoring=CensoringConfig(admin_time=None if o["no_admin"] else o["admin_time"],
                                  random_rate=o["random_rate"]))
    data = simulate_trial(spec, complete=bool(o["complete_out"]))
    data.write_csv(o["out"])
    if o["complete_out"]:
        data.write_csv(o["complete_out"], include_extra=True)
    counts = transition_counts(data)
    print(f"scenario {o['scenario']} ({SCENARIO_LABELS[int(o['scenario'])]}): "
          f"{len(data)} subjects -> {o['out']}")
    for z in (0, 1):
        print(f"  arm {z}: events 1->2: {counts[(z, '12')]}, 1->3: {counts[(z, '13')]}, "
              f"2->3: {counts[(z, '23')]}")
    return EXIT_OK


FIT_DEFAULTS = dict(data=None, iters=3000, burnin=900, seed=0, proposal_sd=0.1,
                    frailty_proposal_sd=0.4, fix_alpha=False, free_kappa=False,
                    structure=EQUAL_13_23, out_prefix=None,
                    rho_t1=0.95, rho_t4=0.95, rho_st=0.5, rho_s=0.5, rho_t=0.5,
                    sigma_omega=0.4)


def _sampler_from(o):
    frailty = None
    if o["structure"] == FULL_SIX:
        frailty = _frailty_config(o)
    return SamplerConfig(iterations=int(o["iters"]), burn_in=int(o["burnin"]),
                         proposal_sd_params=o["proposal_sd"],
                         proposal_sd_frailty=o["frailty_proposal_sd"],
                         fix_kappa_to_one=not o["free_kappa"],
                         fix_alpha_to_one=o["fix_alpha"],
                         structure=o["structure"], frailty=frailty, seed=int(o["seed"]))


def cmd_fit(args):
    o = _merge(FIT_DEFAULTS, args)
    if not o["data"] or not o["out_prefix"]:
        raise DomainError("fit requires --data and --out-prefix")
    data = TrialData.read_csv(o["data"])
    result = fit(data, _sampler_from(o), PriorConfig())
    paths = result.save(o["out_prefix"])
    summary = result.summary()
    print(f"fitted {o['data']} ({len(data)} subjects); artifacts: {sorted(paths.values())}")
    for k in sorted(summary["params"]):
        s = summary["params"][k]
        print(f"  {k}: mean {s['mean']:.3f} sd {s['sd']:.3f} "
              f"[{s['q025']:.3f}, {s['q975']:.3f}]")
    return EXIT_OK


CEP_DEFAULTS = dict(chain_prefix=None, data=None, tau_s=1.0, tau_t=5.0, rho_s=0.5,
                    rho_t=0.5, sigma_omega=0.4, unit_variance=False, seed=0,
                    out=None, svg=None, max_points=None)


def cmd_cep(args):
    o = _merge(CEP_DEFAULTS, args)
    if not o["chain_prefix"] or not o["data"] or not o["out"]:
        raise DomainError("cep requires --chain-prefix, --data and --out")
    data = TrialData.read_csv(o["data"])
    result = cep_from_chain(
        load_fit(o["chain_prefix"]), data,
        CepConfig(tau_s=o["tau_s"], tau_t=o["tau_t"], rho_s=o["rho_s"], rho_t=o["rho_t"],
                  sigma_omega=o["sigma_omega"], unit_variance_conditional=o["unit_variance"]),
        seed=int(o["seed"]))
    _write_json(result.to_dict(max_points=o["max_points"]), o["out"])
    if o["svg"]:
        from .plots import cep_scatter_svg
        cep_scatter_svg(result, o["svg"])
    s = result.summary
    print(f"cep -> {o['out']}: intercept {s['g0_mean']:.4f} "
          f"({s['g0_lo']:.4f}, {s['g0_hi']:.4f}); slope {s['g1_mean']:.4f} "
          f"({s['g1_lo']:.4f}, {s['g1_hi']:.4f}); mean effects "
          f"({s['mean_ds']:.4f}, {s['mean_dt']:.4f})")
    return EXIT_OK


TRUTH_DEFAULTS = dict(scenario=None, control_scales=None, treated_scales=None,
                      n_draws=200_000, tau_s=1.0, tau_t=5.0, rho_s=0.5, rho_t=0.5,
                      sigma_omega=0.4, structure=EQUAL_13_23, seed=0, out=None,
                      svg=None, max_points=None, rho_t1=0.95, rho_t4=0.95, rho_st=0.5)


def _truth_arms(o):
    if o["scenario"] is not None:
        return scenario_arms(int(o["scenario"]))
    if not o["control_scales"] or not o["treated_scales"]:
        raise DomainError("truth-cep needs --scenario or both --control-scales/--treated-scales")
    return (ArmModel.from_scales(*_scales(o["control_scales"])),
            ArmModel.from_scales(*_scales(o["treated_scales"])))


def cmd_truth_cep(args):
    o = _merge(TRUTH_DEFAULTS, args)
    control, treated = _truth_arms(o)
    config = CepConfig(tau_s=o["tau_s"], tau_t=o["tau_t"], rho_s=o["rho_s"],
                       rho_t=o["rho_t"], sigma_omega=o["sigma_omega"])
    result = truth_cep(control, treated, config, n_draws=int(o["n_draws"]),
                       seed=int(o["seed"]), frailty=_frailty_config(o))
    if o["out"]:
        _write_json(result.to_dict(max_points=o["max_points"]), o["out"])
    if o["svg"]:
        from .plots import cep_scatter_svg
        cep_scatter_svg(result, o["svg"])
    s = result.summary
    print(f"truth-cep: intercept {s['g0_mean']:.4f}, slope {s['g1_mean']:.4f}, "
          f"mean effects ({s['mean_ds']:.4f}, {s['mean_dt']:.4f})")
    return EXIT_OK


SWEEP_DEFAULTS = dict(scenario=2, rho_s_grid="0.25,0.5,0.75", rho_t_grid="0.25,0.5,0.75",
                      structures=EQUAL_13_23, n_draws=50_000, tau_s=1.0, tau_t=5.0,
                      sigma_omega=0.4, seed=0, out=None, rho_t1=0.95, rho_t4=0.95,
                      rho_st=0.5)


def cmd_sweep(args):
    o = _merge(SWEEP_DEFAULTS, args)
    control, treated = scenario_arms(int(o["scenario"]))
    config = CepConfig(tau_s=o["tau_s"], tau_t=o["tau_t"], sigma_omega=o["sigma_omega"])
    structures = [s.strip() for s in str(o["structures"]).split(",")]
    for s in structures:
        if s not in FRAILTY_STRUCTURES:
            raise DomainError(f"unknown structure {s!r}")
    rows = sensitivity_sweep(
        control, treated, config, _grid(o["rho_s_grid"]), _grid(o["rho_t_grid"]),
        structures=structures,
        full_corrs=(lambda rs, rt: build_six_corr(rho_s=rs, rho_t=rt, rho_t1=o["rho_t1"],
                                                  rho_t4=o["rho_t4"], rho_st=o["rho_st"])),
        n_draws=int(o["n_draws"]), seed=int(o["seed"]))
    if o["out"]:
        _write_json(rows, o["out"])
    print(f"sweep over {len(rows)} grid points (scenario {o['scenario']}):")
    for r in rows:
        print(f"  {r['structure']} rho_s={r['rho_s']:.2f} rho_t={r['rho_t']:.2f}: "
              f"intercept {r['g0_mean']:+.4f} slope {r['g1_mean']:+.4f}")
    return EXIT_OK


PRENTICE_DEFAULTS = dict(data=None, out=None)


def cmd_prentice(args):
    o = _merge(PRENTICE_DEFAULTS, args)
    if not o["data"]:
        raise DomainError("prentice requires --data")
    report = prentice_report(TrialData.read_csv(o["data"]))
    if o["out"]:
        _write_json(report, o["out"])
    for model, res in report.items():
        msg = ", ".join(f"{name}: HR {c['hr']:.3f} (p={c['p']:.3f})"
                        for name, c in res["coefficients"].items())
        print(f"  {model}: {msg}")
    return EXIT_OK


SERVE_DEFAULTS = dict(host="127.0.0.1", port=8000)


def cmd_serve(args):
    o = _merge(SERVE_DEFAULTS, args)
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=o["host"], port=int(o["port"]))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="idcep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, defaults, flags):
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", help="JSON/YAML file of option values; flags win")
        for flag, kwargs in flags.items():
            p.add_argument(flag, **kwargs)
        p.set_defaults(fn=fn, _defaults=defaults)

    add("simulate", cmd_simulate, SIM_DEFAULTS, {
        "--scenario": dict(type=int), "--n": dict(type=int), "--seed": dict(type=int),
        "--out": dict(), "--complete-out": dict(dest="complete_out"),
        "--admin-time": dict(type=float, dest="admin_time"),
        "--no-admin": dict(action="store_const", const=True, dest="no_admin"),
        "--random-rate": dict(type=float, dest="random_rate"),
        "--sigma-omega": dict(type=float, dest="sigma_omega"),
        "--rho-s": dict(type=float, dest="rho_s"), "--rho-t": dict(type=float, dest="rho_t"),
        "--structure": dict(choices=FRAILTY_STRUCTURES),
        "--rho-t1": dict(type=float, dest="rho_t1"), "--rho-t4": dict(type=float, dest="rho_t4"),
        "--rho-st": dict(type=float, dest="rho_st")})
    add("fit", cmd_fit, FIT_DEFAULTS, {
        "--data": dict(), "--iters": dict(type=int), "--burnin": dict(type=int),
        "--seed": dict(type=int), "--proposal-sd": dict(type=float, dest="proposal_sd"),
        "--frailty-proposal-sd": dict(type=float, dest="frailty_proposal_sd"),
        "--fix-alpha": dict(action="store_const", const=True, dest="fix_alpha"),
        "--free-kappa": dict(action="store_const", const=True, dest="free_kappa"),
        "--structure": dict(choices=FRAILTY_STRUCTURES),
        "--out-prefix": dict(dest="out_prefix"),
        "--rho-t1": dict(type=float, dest="rho_t1"), "--rho-t4": dict(type=float, dest="rho_t4"),
        "--rho-st": dict(type=float, dest="rho_st"),
        "--rho-s": dict(type=float, dest="rho_s"), "--rho-t": dict(type=float, dest="rho_t"),
        "--sigma-omega": dict(type=float, dest="sigma_omega")})
    add("cep", cmd_cep, CEP_DEFAULTS, {
        "--chain-prefix": dict(dest="chain_prefix"), "--data": dict(),
        "--tau-s": dict(type=float, dest="tau_s"), "--tau-t": dict(type=float, dest="tau_t"),
        "--rho-s": dict(type=float, dest="rho_s"), "--rho-t": dict(type=float, dest="rho_t"),
        "--sigma-omega": dict(type=float, dest="sigma_omega"),
        "--unit-variance": dict(action="store_const", const=True, dest="unit_variance"),
        "--seed": dict(type=int), "--out": dict(), "--svg": dict(),
        "--max-points": dict(type=int, dest="max_points")})
    add("truth-cep", cmd_truth_cep, TRUTH_DEFAULTS, {
        "--scenario": dict(type=int),
        "--control-scales": dict(dest="control_scales"),
        "--treated-scales": dict(dest="treated_scales"),
        "--n-draws": dict(type=int, dest="n_draws"),
        "--tau-s": dict(type=float, dest="tau_s"), "--tau-t": dict(type=float, dest="tau_t"),
        "--rho-s": dict(type=float, dest="rho_s"), "--rho-t": dict(type=float, dest="rho_t"),
        "--sigma-omega": dict(type=float, dest="sigma_omega"),
        "--structure": dict(choices=FRAILTY_STRUCTURES),
        "--seed": dict(type=int), "--out": dict(), "--svg": dict(),
        "--max-points": dict(type=int, dest="max_points"),
        "--rho-t1": dict(type=float, dest="rho_t1"), "--rho-t4": dict(type=float, dest="rho_t4"),
        "--rho-st": dict(type=float, dest="rho_st")})
    add("sweep", cmd_sweep, SWEEP_DEFAULTS, {
        "--scenario": dict(type=int),
        "--rho-s-grid": dict(dest="rho_s_grid"), "--rho-t-grid": dict(dest="rho_t_grid"),
        "--structures": dict(), "--n-draws": dict(type=int, dest="n_draws"),
        "--tau-s": dict(type=float, dest="tau_s"), "--tau-t": dict(type=float, dest="tau_t"),
        "--sigma-omega": dict(type=float, dest="sigma_omega"),
        "--seed": dict(type=int), "--out": dict(),
        "--rho-t1": dict(type=float, dest="rho_t1"), "--rho-t4": dict(type=float, dest="rho_t4"),
        "--rho-st": dict(type=float, dest="rho_st")})
    add("prentice", cmd_prentice, PRENTICE_DEFAULTS, {
        "--data": dict(), "--out": dict()})
    add("serve", cmd_serve, SERVE_DEFAULTS, {
        "--host": dict(), "--port": dict(type=int)})
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as e:
        print(f"data validation error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, QuadratureError, np.linalg.LinAlgError, FloatingPointError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except FileNotFoundError as e:
        print(f"data validation error: missing file {e.filename}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
