"""Problem-file parsing: a strict JSON schema with explicit defaults.

A problem document has up to four blocks::

    {
      "space":   {"field": "real", "p": 2, "dim": 2},
      "pair":    {"kind": "finite", "labels": [...], "g": [[...]], "f": [[...]]},
      "compute": {"ranges": ["spatial", "approx", "intrinsic"], ...},
      "verify":  {"suite": "main", ...}
    }

Pair kinds: ``finite`` (labels plus g/f vector lists), ``generated``
(built-in family name, truncation N, optional parameters) and ``operator``
(matrix, domain_dim, sphere sampling scheme and count).  Complex scalars are
written as two-element [re, im] arrays; p may be the string "inf".

Unknown keys are rejected by name; all defaults are filled in so the parsed
structure echoes the complete effective configuration.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .spaces import SpaceSpec
from .pairs import OperatorSpec, from_operator, make_finite_pair, make_generated_pair

COMPUTE_DEFAULTS = {
    "ranges": ["spatial", "approx", "intrinsic"],
    "depth": 12,          # eps_k = 2^-k, k = 1..depth
    "eps_schedule": None,  # explicit schedule overrides depth
    "eta": None,           # None: 1e-3 relative to ||f||_inf
    "budget": 10_000,
    "face_budget": 64,
    "angles": 64,
    "method": "both",
    "seed": 0,
}

VERIFY_DEFAULTS = {
    "suite": "main",
    "count": None,   # suite default
    "tol": None,     # suite default
    "budget": 10_000,
    "seed": 0,
}

_PAIR_KEYS = {
    "finite": {"kind", "labels", "g", "f"},
    "generated": {"kind", "family", "N", "v"},
    "operator": {"kind", "matrix", "domain_dim", "scheme", "samples", "seed"},
}


def _reject_unknown(block: dict, allowed, where: str):
    for key in block:
        if key not in allowed:
            raise InputError(f"unknown key {key!r} in {where!r} block")


def _parse_scalar(x, where: str):
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(float(x[0]), float(x[1]))
    raise InputError(f"{where}: scalar entries must be numbers or [re, im] pairs, got {x!r}")


def _parse_vector(xs, where: str):
    if not isinstance(xs, list) or not xs:
        raise InputError(f"{where}: expected a nonempty list of scalars")
    return [_parse_scalar(x, where) for x in xs]


def _parse_space(block) -> SpaceSpec:
    if not isinstance(block, dict):
        raise InputError("'space' block must be an object")
    _reject_unknown(block, {"field", "p", "dim"}, "space")
    for key in ("field", "p", "dim"):
        if key not in block:
            raise InputError(f"'space' block is missing key {key!r}")
    p = block["p"]
    if isinstance(p, str):
        if p not in ("inf", "Infinity"):
            raise InputError(f"p must be a number in [1, inf] or 'inf', got {p!r}")
        p = math.inf
    if not isinstance(p, (int, float)) or (p != math.inf and p < 1):
        raise InputError(f"p must be in [1, ∞], got {block['p']!r}")
    return SpaceSpec(block["field"], int(block["dim"]), float(p))


@dataclass
class ProblemFile:
    """A validated problem document with all defaults filled in."""

    space: SpaceSpec | None
    pair_block: dict
    compute: dict
    verify: dict | None
    path: str | None = None

    def build_pair(self):
        blk = self.pair_block
        if blk is None:
            raise InputError("problem file has no 'pair' block")
        kind = blk["kind"]
        if kind == "finite":
            return make_finite_pair(self.space, blk["labels"],
                                    [np.asarray(v) for v in blk["g"]],
                                    [np.asarray(v) for v in blk["f"]])
        if kind == "generated":
            return make_generated_pair(blk["family"], blk["N"], v=blk.get("v"))
        op = OperatorSpec(np.asarray(blk["matrix"]), blk["domain_dim"])
        return from_operator(op, self.space, scheme=blk["scheme"],
                             count=blk["samples"], seed=blk["seed"])

    def echo_dict(self) -> dict:
        space = None
        if self.space is not None:
            space = {"field": self.space.field,
                     "p": "inf" if self.space.p == math.inf else self.space.p,
                     "dim": self.space.dim}
        blk = dict(self.pair_block)
        if blk["kind"] in ("finite", "operator"):
            for key in ("g", "f", "matrix"):
                if key in blk:
                    blk[key] = [
                        [[z.real, z.imag] if isinstance(z, complex) else z for z in row]
                        for row in blk[key]
                    ]
        return {"space": space, "pair": blk, "compute": self.compute,
                "verify": self.verify}


def _parse_pair(block, space: SpaceSpec | None) -> dict:
    if not isinstance(block, dict):
        raise InputError("'pair' block must be an object")
    kind = block.get("kind")
    if kind not in _PAIR_KEYS:
        raise InputError(
            f"pair kind must be one of {sorted(_PAIR_KEYS)}, got {kind!r}"
        )
    _reject_unknown(block, _PAIR_KEYS[kind], "pair")
    out = {"kind": kind}
    if kind == "finite":
        if space is None:
            raise InputError("finite pairs need a 'space' block")
        for key in ("labels", "g", "f"):
            if key not in block:
                raise InputError(f"finite pair is missing key {key!r}")
        labels = block["labels"]
        if not isinstance(labels, list) or not labels:
            raise InputError("labels must be a nonempty list")
        g = [_parse_vector(v, f"pair.g[{i}]") for i, v in enumerate(block["g"])]
        f = [_parse_vector(v, f"pair.f[{i}]") for i, v in enumerate(block["f"])]
        out.update(labels=labels, g=g, f=f)
    elif kind == "generated":
        if "family" not in block or "N" not in block:
            raise InputError("generated pair needs 'family' and 'N'")
        out.update(family=block["family"], N=int(block["N"]))
        if "v" in block:
            out["v"] = [float(x) for x in block["v"]]
    else:
        if space is None:
            raise InputError("operator pairs need a 'space' block")
        for key in ("matrix", "domain_dim"):
            if key not in block:
                raise InputError(f"operator pair is missing key {key!r}")
        matrix = [_parse_vector(row, f"pair.matrix[{i}]") for i, row in enumerate(block["matrix"])]
        out.update(matrix=matrix, domain_dim=int(block["domain_dim"]),
                   scheme=block.get("scheme", "grid"),
                   samples=int(block.get("samples", 64)),
                   seed=int(block.get("seed", 0)))
        if out["scheme"] not in ("grid", "quasi-random"):
            raise InputError(f"unknown sphere sampling scheme {out['scheme']!r}")
    return out


def _parse_compute(block) -> dict:
    out = dict(COMPUTE_DEFAULTS)
    out["ranges"] = list(COMPUTE_DEFAULTS["ranges"])
    if block is None:
        return out
    if not isinstance(block, dict):
        raise InputError("'compute' block must be an object")
    _reject_unknown(block, set(COMPUTE_DEFAULTS), "compute")
    out.update(block)
    if not isinstance(out["ranges"], list) or not out["ranges"]:
        raise InputError("compute.ranges must be a nonempty list")
    for r in out["ranges"]:
        if r not in ("spatial", "approx", "intrinsic"):
            raise InputError(f"unknown range kind {r!r} in compute.ranges")
    if out["method"] not in ("norm-derivative", "states", "both"):
        raise InputError(f"unknown intrinsic method {out['method']!r}")
    if out["eps_schedule"] is not None:
        sched = [float(e) for e in out["eps_schedule"]]
        if any(e <= 0 for e in sched) or sorted(sched, reverse=True) != sched:
            raise InputError("compute.eps_schedule must be positive and strictly decreasing")
        out["eps_schedule"] = sched
    for key in ("depth", "budget", "face_budget", "angles", "seed"):
        out[key] = int(out[key])
    if out["eta"] is not None:
        out["eta"] = float(out["eta"])
    return out


def _parse_verify(block) -> dict | None:
    if block is None:
        return None
    if not isinstance(block, dict):
        raise InputError("'verify' block must be an object")
    _reject_unknown(block, set(VERIFY_DEFAULTS), "verify")
    out = dict(VERIFY_DEFAULTS)
    out.update(block)
    if out["suite"] not in ("main", "compact", "smooth"):
        raise InputError(f"unknown verify suite {out['suite']!r}")
    return out


def parse_problem(path: str) -> ProblemFile:
    """Read, validate and default-fill a problem file."""
    if not os.path.exists(path):
        raise InputError(f"problem file {path!r} does not exist")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(
                f"JSON syntax error in {path!r} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    if not isinstance(doc, dict):
        raise InputError("problem document must be a JSON object")
    _reject_unknown(doc, {"space", "pair", "compute", "verify"}, "problem")
    space = _parse_space(doc["space"]) if "space" in doc and doc["space"] is not None else None
    if "pair" not in doc and ("verify" not in doc or doc["verify"] is None):
        raise InputError("problem needs a 'pair' block or a 'verify' block")
    pair_block = _parse_pair(doc["pair"], space) if "pair" in doc else None
    problem = ProblemFile(space, pair_block, _parse_compute(doc.get("compute")),
                          _parse_verify(doc.get("verify")), path=path)
    if pair_block is not None:
        problem.build_pair()  # validation: raises on bad data, e.g. sup-norm violations
    return problem
