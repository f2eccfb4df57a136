"""Printed reference data: the C1-C5 Choi matrices, Tables I-VI and the random-channel matrix."""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources

import numpy as np

from qchansim.channels import Choi, PauliChi
from qchansim.extreme import Decomposition17

TABLE1_NAMES = ("C1", "C2", "C3", "C4", "C5")


@lru_cache(maxsize=None)
def load() -> dict:
    with resources.files("qchansim").joinpath("data/reference_data.json").open() as fh:
        return json.load(fh)


def _matrix(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def printed_choi(name: str) -> np.ndarray:
    """The matrix exactly as printed."""
    return _matrix(_table1_entry(name)["choi_printed"])


def table1_target(name: str) -> Choi:
    """Printed matrix converted to this package's Choi convention (complex conjugate)."""
    return Choi(printed_choi(name).conj())


def _table1_entry(name: str) -> dict:
    for entry in load()["table1"]:
        if entry["name"] == name:
            return entry
    raise KeyError(name)


def table1_decomposition(name: str) -> Decomposition17:
    return Decomposition17.from_json(_table1_entry(name)["decomposition"])


def table1_epsilon(name: str) -> float:
    return _table1_entry(name)["epsilon"]


def table2_chi() -> PauliChi:
    return PauliChi(_matrix(load()["table2"]["chi_printed"]))


def table2_decomposition() -> Decomposition17:
    doc = load()["table2"]["decomposition_pi_units"]

    def scaled(e):
        out = dict(e)
        for k in ("alpha", "beta", "delta", "varphi"):
            out[k] = e[k] * math.pi
        return out

    return Decomposition17.from_json({"e1": scaled(doc["e1"]), "e2": scaled(doc["e2"]), "p": doc["p"]})


def noise_rows(kind: str) -> list[dict]:
    return load()["tables3_6"][kind]


def printed_p(kind: str, row: dict) -> float:
    """Printed mixing weight, with the depolarizing table's 0.33/0.66 read as thirds."""
    if kind == "depolarizing":
        return load()["table6_fraction_reading"].get(f"{row['p']:.2f}", row["p"])
    return row["p"]
