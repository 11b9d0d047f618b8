"""
Command line front end.

    bound SPEC                 bounds of one scenario as JSON
    curves fig1 | biomag       datasets as CSV
    mc SPEC                    Monte Carlo detection sweep as CSV
    control simulate SPEC      controlled evolution of a rotating field as CSV

Exit codes: 0 success, 1 scenario file, usage or I/O error, 2 target fidelity not reachable.
"""
from collections import namedtuple
from pathlib import Path
import argparse
import logging
import math
import sys

import numpy as np
import yaml

from qsense.bounds import BoundResult, PRODUCT, distances
from qsense.config import CONFIG
from qsense.control import (branch_phases, controlled_crossing_time, controlled_qsl, eigenframe_track,
                            simulate_controlled)
from qsense.distinguishability import critical_fidelity
from qsense.envelopes import EnvelopeSpec
from qsense.errors import INFEASIBLE, SensingError, SpecError, is_feasible
from qsense.montecarlo import sweep_time
from qsense import output
from qsense.pauli import fidelity, evolve_fixed_axis, PauliHamiltonian, QubitState, eig
from qsense.scenarios import (KINDS, SINGLE, OMEGA, K, K_TRACE_START, AcScenario, RotatingScenario,
                              ac_bound, ac_fidelity, ac_kmax, ac_tmin, biomag_dataset, envelope_bound,
                              fig1_dataset, frequency_grid, rotating_bounds, rotating_param_hamiltonian,
                              static_probe_bound, weight_grid)

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

STATIC = "static"
FIXED_AXIS = "fixed_axis"
AC = "ac"
ROTATING = "rotating"
CUSTOM_ENVELOPE = "custom_envelope"
TYPES = (STATIC, FIXED_AXIS, AC, ROTATING, CUSTOM_ENVELOPE)

REQUIRED = {
    STATIC: ("omega",),
    FIXED_AXIS: ("omega", "envelope"),
    AC: ("omega", "k"),
    ROTATING: ("omega", "epsilon"),
    CUSTOM_ENVELOPE: ("omega", "envelope"),
}

ENVELOPE_KINDS = ("constant", "sin", "samples")

FIELDS = ("type", "omega", "k", "epsilon", "target", "envelope", "n", "m", "kind", "t_max", "c0_sq",
          "omega_c", "omega_true", "points", "steps")
ENVELOPE_FIELDS = ("kind", "amplitude", "k", "times", "values")

ScenarioSpec = namedtuple("ScenarioSpec", FIELDS + ("lines",))


###################################################################################
#                              SCENARIO FILES                                     #
###################################################################################


def _mapping_lines(node, prefix=""):
    """line number of every key of a YAML mapping, nested keys as 'outer.inner'"""
    lines = {}
    for key_node, value_node in node.value:
        name = prefix + str(key_node.value)
        lines[name] = key_node.start_mark.line + 1
        if isinstance(value_node, yaml.MappingNode):
            lines.update(_mapping_lines(value_node, name + "."))
    return lines


def _number(name, value, lines, minimum=None, strict=False):
    if isinstance(value, bool):
        raise SpecError("expected a number, got {!r}".format(value), name, lines.get(name))
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise SpecError("expected a number, got {!r}".format(value), name, lines.get(name))
    if not math.isfinite(number):
        raise SpecError("numbers must be finite", name, lines.get(name))
    if minimum is not None and (number < minimum or (strict and number == minimum)):
        relation = ">" if strict else ">="
        raise SpecError("must be {} {}, got {}".format(relation, minimum, number), name, lines.get(name))
    return number


def _integer(name, value, lines, minimum=1):
    number = _number(name, value, lines)
    if number != int(number) or number < minimum:
        raise SpecError("expected an integer >= {}, got {!r}".format(minimum, value), name, lines.get(name))
    return int(number)


def _choice(name, value, choices, lines):
    if value not in choices:
        raise SpecError("must be one of {}, got {!r}".format(", ".join(choices), value), name, lines.get(name))
    return value


def _envelope(raw, lines):
    if not isinstance(raw, dict):
        raise SpecError("expected a mapping", "envelope", lines.get("envelope"))
    for key in raw:
        if key not in ENVELOPE_FIELDS:
            raise SpecError("unknown field", "envelope." + str(key), lines.get("envelope." + str(key)))
    if "kind" not in raw:
        raise SpecError("missing required field", "envelope.kind", lines.get("envelope"))

    envelope = {"kind": _choice("envelope.kind", raw["kind"], ENVELOPE_KINDS, lines)}
    if "amplitude" in raw:
        envelope["amplitude"] = _number("envelope.amplitude", raw["amplitude"], lines)
    if "k" in raw:
        envelope["k"] = _number("envelope.k", raw["k"], lines, minimum=0.0)
    for key in ("times", "values"):
        if key in raw:
            if not isinstance(raw[key], list):
                raise SpecError("expected a list of numbers", "envelope." + key, lines.get("envelope." + key))
            envelope[key] = [_number("envelope." + key, v, lines) for v in raw[key]]

    needed = {"sin": ("k",), "samples": ("times", "values")}.get(envelope["kind"], ())
    for key in needed:
        if key not in envelope:
            raise SpecError("missing required field", "envelope." + key, lines.get("envelope"))
    return envelope


def parse_spec(text):
    """ScenarioSpec from YAML (or JSON) text; SpecError names the field and line of the first problem"""
    try:
        node = yaml.compose(text)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise SpecError("malformed scenario file: {}".format(getattr(e, "problem", e)),
                        line=mark.line + 1 if mark is not None else None)
    if not isinstance(node, yaml.MappingNode) or not isinstance(raw, dict):
        raise SpecError("a scenario file holds one mapping of fields", line=1)

    lines = _mapping_lines(node)
    for key in raw:
        if key not in FIELDS:
            raise SpecError("unknown field", str(key), lines.get(str(key)))
    if "type" not in raw:
        raise SpecError("missing required field", "type", 1)
    kind_of_scenario = _choice("type", raw["type"], TYPES, lines)
    for key in REQUIRED[kind_of_scenario]:
        if key not in raw:
            raise SpecError("missing required field", key, 1)

    values = dict.fromkeys(FIELDS)
    values["type"] = kind_of_scenario
    values["omega"] = _number("omega", raw["omega"], lines, minimum=0.0, strict=True)
    values["n"] = _integer("n", raw.get("n", 1), lines)
    values["m"] = _integer("m", raw.get("m", 1), lines)
    values["kind"] = _choice("kind", raw.get("kind", SINGLE), KINDS, lines)
    values["target"] = _choice("target", raw.get("target", OMEGA), (OMEGA, K), lines)
    if "k" in raw:
        values["k"] = _number("k", raw["k"], lines, minimum=0.0)
    for key in ("epsilon", "t_max"):
        if key in raw:
            values[key] = _number(key, raw[key], lines, minimum=0.0, strict=True)
    for key in ("omega_c", "omega_true"):
        if key in raw:
            values[key] = _number(key, raw[key], lines)
    if "c0_sq" in raw:
        values["c0_sq"] = _number("c0_sq", raw["c0_sq"], lines, minimum=0.0, strict=True)
        if values["c0_sq"] >= 1.0:
            raise SpecError("must be < 1, got {}".format(values["c0_sq"]), "c0_sq", lines.get("c0_sq"))
    for key in ("points", "steps"):
        if key in raw:
            values[key] = _integer(key, raw[key], lines)
    if "envelope" in raw:
        values["envelope"] = _envelope(raw["envelope"], lines)
        if kind_of_scenario == CUSTOM_ENVELOPE and values["envelope"]["kind"] != "samples":
            raise SpecError("a custom envelope is given by samples", "envelope.kind", lines.get("envelope.kind"))

    if (values["kind"] == SINGLE) != (values["m"] == 1):
        raise SpecError("kind 'single' goes with m = 1 and vice versa", "m", lines.get("m", lines.get("kind")))
    if kind_of_scenario in (FIXED_AXIS, CUSTOM_ENVELOPE, ROTATING) and values["kind"] != SINGLE:
        raise SpecError("many-body probes are available for static and ac scenarios", "kind", lines.get("kind"))

    return ScenarioSpec(lines=lines, **values)


def load_spec(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SpecError("cannot read scenario file {}: {}".format(path, e.strerror))
    return parse_spec(text)


def build_envelope(envelope, horizon):
    kind = envelope["kind"]
    amplitude = envelope.get("amplitude", 1.0)
    if kind == "constant":
        return EnvelopeSpec.constant(horizon, amplitude)
    elif kind == "sin":
        return EnvelopeSpec.sinusoid(envelope["k"], horizon, amplitude)
    else:
        scaled = [amplitude * v for v in envelope["values"]]
        return EnvelopeSpec.samples(envelope["times"], scaled, horizon)


def _horizon(spec, default=None):
    if spec.t_max is not None:
        return spec.t_max
    return CONFIG["cli"]["horizon"] if default is None else default


def ac_scenario(spec):
    return AcScenario(spec.omega, spec.k, spec.n, spec.m, spec.kind)


def rotating_scenario(spec):
    return RotatingScenario(spec.omega, spec.epsilon, spec.target, spec.n)


###################################################################################
#                              COMMANDS                                           #
###################################################################################


def cmd_bound(spec):
    f0 = critical_fidelity(spec.n)
    metadata = {"scenario": spec.type, "n": spec.n, "m": spec.m, "kind": spec.kind}

    if spec.type == STATIC:
        c0_sq = 0.5 if spec.c0_sq is None else spec.c0_sq
        result = static_probe_bound(spec.omega, spec.n, c0_sq, spec.m, spec.kind)
        metadata["c0_sq"] = c0_sq

    elif spec.type in (FIXED_AXIS, CUSTOM_ENVELOPE):
        c0_sq = 0.5 if spec.c0_sq is None else spec.c0_sq
        samples = spec.envelope.get("times")
        default = samples[-1] if samples else None
        env = build_envelope(spec.envelope, _horizon(spec, default))
        result = envelope_bound(spec.omega, env, spec.n, c0_sq)
        metadata.update({"c0_sq": c0_sq, "horizon": env.horizon})

    elif spec.type == AC:
        s = ac_scenario(spec)
        result = ac_bound(s, spec.t_max)
        metadata.update({"k": s.k, "k_max": ac_kmax(s), "t_min_closed_form": ac_tmin(s)})
        if s.kind == PRODUCT:
            metadata["product_kmax_extrapolated"] = True

    elif spec.type == ROTATING:
        s = rotating_scenario(spec)
        bound = rotating_bounds(s)
        tau_mt, tau_ml = bound.tau_mt, bound.tau_ml
        if spec.t_max is not None:
            tau_mt = tau_mt if tau_mt <= spec.t_max else INFEASIBLE
            tau_ml = tau_ml if tau_ml <= spec.t_max else INFEASIBLE
        result = BoundResult.combine(tau_mt, tau_ml, distances(f0))
        metadata.update({"target": s.target, "epsilon": s.epsilon, "signal_strength": s.signal_strength})

    else:
        raise NotImplementedError()

    document = output.bound_document(result, f0, metadata)
    return document, EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_curves(which, args):
    if which == "fig1":
        rows = fig1_dataset(args.omega, args.n, weight_grid(args.grid), args.m, args.kind)
        output.write_csv(("c0_sq", "tau_mt", "tau_ml", "t_actual", "feasible"), rows, args.out)
    elif which == "biomag":
        rows = biomag_dataset(frequency_grid(args.f, args.points), args.n, args.m, args.kind)
        constants = output.constants_metadata()
        comments = ["hbar={!r} bohr_magneton={!r}".format(constants["hbar"], constants["bohr_magneton"])]
        output.write_csv(("frequency_hz", "b_min_tesla", "n", "m", "kind"), rows, args.out, comments)
    else:
        raise NotImplementedError()
    return EXIT_OK


def _fidelity_trajectory(spec):
    if spec.type == AC:
        s = ac_scenario(spec)
        default = math.pi / s.k if s.k > 0 else math.pi / s.omega
        return (lambda t: ac_fidelity(s, t)), _horizon(spec, default)
    elif spec.type == STATIC:
        if spec.kind != SINGLE:
            raise SpecError("the Monte Carlo sweep of a static scenario takes a single probe", "kind",
                            spec.lines.get("kind"))
        h = PauliHamiltonian(az=spec.omega / 2.0)
        system = eig(h)
        c0_sq = 0.5 if spec.c0_sq is None else spec.c0_sq
        state = QubitState.superposition(system.v_plus, system.v_minus, c0_sq)
        return (lambda t: fidelity(state, evolve_fixed_axis(h, t, state))), _horizon(spec, math.pi / spec.omega)
    raise SpecError("the Monte Carlo sweep supports static and ac scenarios", "type", spec.lines.get("type"))


def cmd_mc(spec, args):
    replicates = CONFIG["montecarlo"]["replicates"] if args.reps is None else args.reps
    seed = CONFIG["montecarlo"]["seed"] if args.seed is None else args.seed
    if replicates < 1:
        raise SpecError("replicates must be a positive integer, got {}".format(replicates), "--reps")
    points = args.points or spec.points or CONFIG["cli"]["points"]

    fidelity_fn, horizon = _fidelity_trajectory(spec)
    sweep = sweep_time(fidelity_fn, np.linspace(0.0, horizon, points), spec.n, replicates, seed,
                       processes=args.processes)

    comments = ["seed={} replicates={} n={}".format(seed, replicates, spec.n),
                "threshold_time={} threshold_rate={}".format(output.format_value(sweep.threshold_time),
                                                             output.format_value(sweep.threshold_rate))]
    rows = [(row.t, row.detection_rate, row.exact_rate, sweep.n, sweep.replicates, sweep.seed) for row in sweep.rows]
    output.write_csv(("t", "detection_rate", "exact_rate", "n", "replicates", "seed"), rows, args.out, comments)
    return EXIT_OK


def cmd_control_simulate(spec, args):
    if spec.type != ROTATING:
        raise SpecError("controlled simulation runs on rotating scenarios", "type", spec.lines.get("type"))
    if spec.omega_true is None:
        raise SpecError("missing required field", "omega_true", 1)

    s = rotating_scenario(spec)
    ph = rotating_param_hamiltonian(s)
    omega_c = s.signal_strength if spec.omega_c is None else spec.omega_c
    steps = args.steps or spec.steps or CONFIG["cli"]["steps"]
    horizon = _horizon(spec)
    start = 0.0 if s.target == OMEGA else K_TRACE_START

    trace = eigenframe_track(ph, omega_c, np.linspace(start, horizon, steps + 1))
    simulation = simulate_controlled(ph, spec.omega_true, omega_c, trace, horizon, steps)

    deviation = spec.omega_true - omega_c
    f0 = s.f0
    if deviation == 0:
        tau_mt = crossing = INFEASIBLE
    else:
        tau_mt = controlled_qsl(trace, abs(deviation), f0).tau_mt
        crossing = controlled_crossing_time(simulation, ph, spec.omega_true, omega_c, trace, f0)

    rows = []
    for t, f in zip(simulation.times, simulation.fidelity):
        phase_max, phase_min = branch_phases(trace, deviation, t)
        rows.append((t, f, math.cos((phase_max - phase_min) / 2.0) ** 2))

    comments = ["target={} omega_true={!r} omega_c={!r} f0={!r}".format(s.target, spec.omega_true, omega_c, f0),
                "crossing_time={} tau_mt={}".format(output.format_value(crossing), output.format_value(tau_mt))]
    output.write_csv(("t", "fidelity", "predicted_fidelity"), rows, args.out, comments)
    return EXIT_OK if is_feasible(crossing) else EXIT_INFEASIBLE


###################################################################################
#                              ARGUMENTS                                          #
###################################################################################


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors share exit code 1 with scenario file errors, 2 means infeasible
        self.print_usage(sys.stderr)
        raise SpecError(message)


def budget(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number, got '{}'".format(text))
    if not math.isfinite(value) or value != int(value):
        raise argparse.ArgumentTypeError("expected an integer, got '{}'".format(text))
    return int(value)


def build_parser():
    parser = ArgumentParser(prog="qsense", description="Temporal resolution limits of qubit sensors")
    parser.add_argument("--config", help="settings file replacing config.yaml")
    parser.add_argument("--debug", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    commands.required = True

    bound = commands.add_parser("bound", help="MT and ML bounds of a scenario file, as JSON")
    bound.add_argument("spec", help="scenario file (YAML or JSON)")
    bound.add_argument("--out", default="-", help="output file, '-' for standard output")

    curves = commands.add_parser("curves", help="datasets as CSV")
    which = curves.add_subparsers(dest="curve", parser_class=ArgumentParser)
    which.required = True

    fig1 = which.add_parser("fig1", help="bounds and actual time against the probe weight")
    fig1.add_argument("--omega", type=float, default=1.0)
    fig1.add_argument("--n", type=budget, default=1)
    fig1.add_argument("--grid", type=budget, default=CONFIG["cli"]["grid"])
    fig1.add_argument("--m", type=budget, default=1)
    fig1.add_argument("--kind", choices=KINDS, default=SINGLE)
    fig1.add_argument("--out", default="-")

    biomag = which.add_parser("biomag", help="smallest resolvable field amplitude against frequency")
    biomag.add_argument("--n", type=budget, default=1000000)
    biomag.add_argument("--f", default="1:1000:log", help="start:stop[:lin|log] in Hz")
    biomag.add_argument("--points", type=budget, default=CONFIG["cli"]["points"])
    biomag.add_argument("--m", type=budget, default=1)
    biomag.add_argument("--kind", choices=KINDS, default=SINGLE)
    biomag.add_argument("--out", default="-")

    mc = commands.add_parser("mc", help="Monte Carlo detection rates along a scenario, as CSV")
    mc.add_argument("spec")
    mc.add_argument("--reps", type=budget)
    mc.add_argument("--seed", type=budget)
    mc.add_argument("--points", type=budget)
    mc.add_argument("--processes", type=budget)
    mc.add_argument("--out", default="-")

    control = commands.add_parser("control", help="quantum control of rotating fields")
    actions = control.add_subparsers(dest="action", parser_class=ArgumentParser)
    actions.required = True
    simulate = actions.add_parser("simulate", help="controlled evolution against the phase law, as CSV")
    simulate.add_argument("spec")
    simulate.add_argument("--steps", type=budget)
    simulate.add_argument("--out", default="-")

    return parser


def _run(args):
    logger.debug("running {}".format(args.command))
    if args.command == "bound":
        document, code = cmd_bound(load_spec(args.spec))
        output.write_json(document, args.out)
        return code
    elif args.command == "curves":
        return cmd_curves(args.curve, args)
    elif args.command == "mc":
        return cmd_mc(load_spec(args.spec), args)
    elif args.command == "control":
        return cmd_control_simulate(load_spec(args.spec), args)
    raise NotImplementedError()


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.config:
            CONFIG.reload(args.config)
        if args.debug:
            logging.getLogger().setLevel(logging.DEBUG)
        return _run(args)

    except (SensingError, ValueError, OSError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_ERROR
