"""Instance and result files.

Instances are JSON objects ``{"field", "n", "basis", "name"?, "expected"?}``
with integer or ``"p/q"`` entries.  Results carry every field element as a
decimal string so they survive any integer width.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import DimensionMismatchError, InvalidInputError, InvalidWitnessError
from .exactfield import make_field
from .linalg import Subspace
from .mspace import MatrixSpace, ShrunkWitness
from .ncrank import FullCert, NcrkResult


@dataclass
class Instance:
    space: MatrixSpace
    name: str | None = None
    expected: dict | None = None
    raw: dict | None = None


def parse_json_text(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from None


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_json_text(text, str(path))


def instance_from_dict(doc, field_override: str | None = None) -> Instance:
    if not isinstance(doc, dict):
        raise InvalidInputError("instance must be a JSON object")
    for key in ("field", "n", "basis"):
        if key not in doc:
            raise InvalidInputError(f"instance is missing '{key}'")
    field = make_field(field_override or doc["field"])
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InvalidInputError("'n' must be a non-negative integer")
    basis = doc["basis"]
    if not isinstance(basis, list):
        raise InvalidInputError("'basis' must be a list of matrices")
    mats = []
    for idx, B in enumerate(basis):
        if not isinstance(B, list) or len(B) != n or any(not isinstance(r, list) or len(r) != n for r in B):
            raise DimensionMismatchError(f"basis[{idx}] is not an {n}x{n} matrix")
        try:
            mats.append(field.array(B))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise InvalidInputError(f"basis[{idx}]: bad entry ({exc})") from None
    return Instance(MatrixSpace(field, n, mats), doc.get("name"), doc.get("expected"), doc)


def load_instance(path, field_override: str | None = None) -> Instance:
    return instance_from_dict(read_json(path), field_override)


def instance_to_dict(space: MatrixSpace, name: str | None = None) -> dict:
    F = space.field
    doc = {"field": F.name, "n": space.n, "basis": [encode_matrix(F, B) for B in space.basis]}
    if name:
        doc["name"] = name
    return doc


# -- field element encoding -------------------------------------------------


def encode_matrix(F, M):
    M = np.asarray(M)
    if M.ndim == 0:
        return F.to_str(M.item())
    return [encode_matrix(F, row) for row in M]


def decode_array(F, data):
    try:
        return F.array(data)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidInputError(f"bad field element in result file ({exc})") from None


def encode_subspace(F, U: Subspace):
    return [encode_matrix(F, v) for v in U.vectors()]


def decode_subspace(F, n: int, vectors) -> Subspace:
    if not isinstance(vectors, list):
        raise InvalidInputError("subspace must be a list of vectors")
    vecs = [decode_array(F, v) for v in vectors]
    if any(v.shape != (n,) for v in vecs):
        raise DimensionMismatchError(f"subspace vectors must have length {n}")
    return Subspace.span(F, vecs, n)


def encode_fullcert(F, cert: FullCert) -> dict:
    return {
        "kind": "full",
        "d_prime": cert.d_prime,
        "achieved_rank": cert.achieved_rank,
        "coeffs": encode_matrix(F, cert.coeffs),
        "index_order": "coeffs[i][j][k] multiplies B_i (x) E_jk",
    }


def encode_witness(F, w) -> dict | None:
    if isinstance(w, ShrunkWitness):
        return {"kind": "shrunk", "c": w.c, "U": encode_subspace(F, w.U), "W": encode_subspace(F, w.W)}
    if isinstance(w, FullCert):
        return encode_fullcert(F, w)
    return None


def decode_witness(space: MatrixSpace, doc):
    """Rebuild a witness; structurally invalid payloads raise InvalidWitnessError."""
    F, n = space.field, space.n
    if doc is None:
        return None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidInputError("witness must be an object with a 'kind'")
    if doc["kind"] == "shrunk":
        U = decode_subspace(F, n, doc.get("U", []))
        W = decode_subspace(F, n, doc.get("W", []))
        c = doc.get("c")
        if not isinstance(c, int):
            raise InvalidInputError("shrunk witness needs an integer 'c'")
        return ShrunkWitness(U, W, c)
    if doc["kind"] == "full":
        return decode_fullcert(space, doc)
    raise InvalidInputError(f"unknown witness kind {doc['kind']!r}")


def decode_fullcert(space: MatrixSpace, doc) -> FullCert:
    F = space.field
    try:
        d = int(doc["d_prime"])
        achieved = int(doc["achieved_rank"])
    except (KeyError, TypeError, ValueError):
        raise InvalidInputError("full certificate needs integer 'd_prime' and 'achieved_rank'") from None
    coeffs = decode_array(F, doc.get("coeffs", []))
    if coeffs.shape != (space.m, d, d):
        if space.m == 0 and coeffs.size == 0:
            coeffs = F.zeros((0, d, d))
        else:
            raise InvalidWitnessError(f"certificate coefficients have shape {coeffs.shape}")
    return FullCert(d, coeffs, achieved)


# -- result files -----------------------------------------------------------


def result_header(command: str, space: MatrixSpace | None, seed, name=None) -> dict:
    doc = {"tool": "edmonds", "version": __version__, "command": command, "seed": seed}
    if space is not None:
        doc["instance"] = {"field": space.field.name, "n": space.n, "m": space.m}
        if name:
            doc["instance"]["name"] = name
    return doc


def ncrk_result_to_dict(space: MatrixSpace, res: NcrkResult) -> dict:
    F = space.field
    return {
        "ncrk": res.ncrk,
        "start_rank": res.start_rank,
        "witness": encode_witness(F, res.witness),
        "rank_cert": encode_fullcert(F, res.rank_cert) if res.rank_cert is not None else None,
        "trace": [[d, r] for d, r in res.trace],
    }


def ncrk_result_from_dict(space: MatrixSpace, doc) -> NcrkResult:
    if not isinstance(doc, dict) or "ncrk" not in doc:
        raise InvalidInputError("result file has no 'ncrk' verdict")
    inst = doc.get("instance")
    if isinstance(inst, dict):
        if inst.get("n") != space.n:
            raise DimensionMismatchError(f"result is for n={inst.get('n')}, instance has n={space.n}")
        if inst.get("field") not in (None, space.field.name):
            raise InvalidInputError(f"result is over {inst.get('field')}, instance over {space.field.name}")
        if inst.get("m") not in (None, space.m):
            raise DimensionMismatchError(f"result is for m={inst.get('m')}, instance has m={space.m}")
    witness = decode_witness(space, doc.get("witness"))
    cert_doc = doc.get("rank_cert")
    cert = decode_fullcert(space, cert_doc) if cert_doc is not None else None
    trace = [tuple(t) for t in doc.get("trace", [])]
    return NcrkResult(int(doc["ncrk"]), witness, trace, int(doc.get("start_rank", 0)),
                      rank_cert=cert, seed=doc.get("seed"))


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
