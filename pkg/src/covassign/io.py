"""JSON encoding of matrices, graphs, realizations and reports.

A matrix file is ``{"shape": [rows, cols], "data": [[...], ...]}`` in
row-major order. Complex entries are ``[re, im]`` pairs; a real matrix is
written with plain numbers, and readers accept plain numbers anywhere.
Vectors ordered over quadratures always use (q_1..q_N, p_1..p_N).
"""

import hashlib
import json
from pathlib import Path

import numpy as np

from .core import CascadeChain, GaussianGraph, OscSubsystem, Realization


class FormatError(ValueError):
    pass


def encode_matrix(A):
    A = np.atleast_2d(np.asarray(A))
    if A.ndim != 2:
        raise FormatError(f"expected a 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise FormatError("matrix has non-finite entries")
    if np.iscomplexobj(A):
        data = [[[float(z.real), float(z.imag)] for z in row] for row in A]
    else:
        data = [[float(x) for x in row] for row in A]
    return {"shape": [int(A.shape[0]), int(A.shape[1])], "data": data}


def _entry(v):
    if isinstance(v, bool):
        raise FormatError("boolean matrix entry")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) in (1, 2) and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        return complex(v[0], v[1] if len(v) == 2 else 0.0)
    raise FormatError(f"bad matrix entry {v!r}")


def decode_matrix(obj, real=False):
    try:
        rows, cols = obj["shape"]
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("matrix object needs 'shape' and 'data'") from exc
    if len(data) != rows or any(len(r) != cols for r in data):
        raise FormatError(f"data does not match shape [{rows}, {cols}]")
    A = np.array([[_entry(v) for v in row] for row in data], dtype=complex).reshape(rows, cols)
    if not np.all(np.isfinite(A)):
        raise FormatError("matrix has non-finite entries")
    if real:
        if np.any(A.imag != 0):
            raise FormatError("expected a real matrix")
        return A.real.copy()
    # keep complex dtype whenever the file used [re, im] pairs so that
    # write -> read -> write is byte-identical
    if any(isinstance(v, list) for row in data for v in row):
        return A
    return A.real.copy()


def dumps(obj):
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def file_hash(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def graph_to_json(g):
    return {"X": encode_matrix(g.X), "Y": encode_matrix(g.Y)}


def graph_from_json(obj):
    try:
        return GaussianGraph(decode_matrix(obj["X"], real=True), decode_matrix(obj["Y"], real=True))
    except KeyError as exc:
        raise FormatError("graph file needs 'X' and 'Y'") from exc


def chain_to_json(chain):
    return {"subsystems": [{"M": encode_matrix(s.M), "C": encode_matrix(s.C)} for s in chain]}


def chain_from_json(obj):
    return CascadeChain(tuple(
        OscSubsystem(decode_matrix(s["M"], real=True), decode_matrix(s["C"]))
        for s in obj["subsystems"]
    ))


def realization_from_files(m_path, c_path):
    M = decode_matrix(read_json(m_path), real=True)
    C = decode_matrix(read_json(c_path))
    return Realization(M, np.asarray(C, dtype=complex))
