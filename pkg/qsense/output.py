"""
Serialisation of results: JSON for single results, CSV for sweeps. Floats are written in their
shortest round-trip form and infeasible times as the string "infeasible".
"""
from contextlib import contextmanager
import csv
import json
import sys

import numpy as np

from qsense.bounds import ALPHA_IS_BETA_SQUARED
from qsense.config import CONFIG
from qsense.errors import Infeasible


def format_value(value):
    if isinstance(value, Infeasible):
        return value.value
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def json_value(value):
    if isinstance(value, Infeasible):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, dict):
        return {key: json_value(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    return value


def constants_metadata():
    constants = CONFIG["constants"]
    return {"hbar": constants["hbar"], "bohr_magneton": constants["bohr_magneton"]}


def bound_document(result, f0, metadata=None):
    document = {
        "tau_mt": result.tau_mt,
        "tau_ml": result.tau_ml,
        "t_min": result.t_min,
        "t_actual": result.t_actual,
        "feasible": result.feasible,
        "alpha": result.distances.alpha,
        "beta": result.distances.beta,
        "f0": f0,
        "metadata": {"alpha_is_beta_squared": ALPHA_IS_BETA_SQUARED, "constants": constants_metadata()},
    }
    if metadata:
        document["metadata"].update(metadata)
    return json_value(document)


def dumps(document):
    return json.dumps(document, indent=2, allow_nan=False, ensure_ascii=False)


@contextmanager
def open_output(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as stream:
            yield stream


def write_json(document, path=None):
    with open_output(path) as stream:
        stream.write(dumps(document))
        stream.write("\n")


def write_csv(header, rows, path=None, comments=()):
    with open_output(path) as stream:
        for comment in comments:
            stream.write("# {}\n".format(comment))
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
