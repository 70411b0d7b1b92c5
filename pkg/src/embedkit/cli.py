"""JSON-in / JSON-out command line front end.

    embedkit <subcommand> [--input FILE] [--seed N] [--size-bound N]

The input document is either a bare params object or a full job
``{"subcommand": ..., "params": {...}, "seed": N}``.  Exactly one JSON
document goes to stdout; logging goes to stderr.  Exit codes: 0 success,
2 invalid input, 3 size bound refused, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any

import jsonschema
from sympy import factorint

from . import linalg
from .cyclotomic import DEFAULT_SEED, cyclo_factorization, factor_cyclotomic
from .gmodule import (
    GModule, GradedDims, InconsistencyError, SizeBoundError, decompose, graded_dims, is_type_t1,
)
from .modarith import ModulusError, multiplicative_order, prime_power
from .oracle import DEFAULT_SIZE_BOUND, count_isomorphic, enumerate_g_submodules
from .pm_builder import (
    PmModule, PuncturedCoverSpec, artin_schreier_example, build_pm_genus0, pm_inclusion,
    synthetic_module,
)
from .solvability import (
    ActionData, FieldInvariants, HShape, count_for_module, count_nsext, invariants_of,
    solvable_field, solvable_prime_power, solvable_squarefree,
)

log = logging.getLogger("embedkit")

EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_INCONSISTENT = 0, 2, 3, 4

SUBCOMMANDS = ("factor", "build-pm", "decompose", "solvable", "count", "oracle-count", "t1-check")


class InputError(ValueError):
    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path


# -- schemas --------------------------------------------------------------------

_int = {"type": "integer"}
_nat = {"type": "integer", "minimum": 0}
_pos = {"type": "integer", "minimum": 1}
_nat_list = {"type": "array", "items": _nat}
_nat_table = {"type": "array", "items": _nat_list}

_label = {"type": ["string", "integer"]}


def _variant(kind: str, required: list, props: dict) -> dict:
    return {"if": {"properties": {"kind": {"const": kind}}},
            "then": {"required": required, "additionalProperties": False,
                     "properties": {"kind": {"const": kind}, **props}}}


MODULE_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["matrix", "genus0", "synthetic", "artin-schreier"]}},
    "allOf": [
        _variant("matrix", ["p", "a", "m", "sigma"],
                 {"p": _pos, "a": _pos, "m": _pos,
                  "sigma": {"type": "array", "items": {"type": "array", "items": _int}}}),
        _variant("genus0", ["p", "a", "m", "punctures"],
                 {"p": _pos, "a": _pos, "m": _pos,
                  "punctures": {"type": "array", "minItems": 1, "items": _label},
                  "permutation": {"type": "object", "additionalProperties": _label}}),
        _variant("synthetic", ["p", "a", "m", "orbitSizes"],
                 {"p": _pos, "a": _pos, "m": _pos,
                  "orbitSizes": {"type": "array", "minItems": 1, "items": _pos}}),
        _variant("artin-schreier", ["p", "m"], {"p": _pos, "m": _pos, "a": {"const": 1}}),
    ],
}

_invariants = {"type": "object", "required": ["n0", "nb"],
               "properties": {"n0": _nat, "nb": _nat_list}, "additionalProperties": False}

_graded = {"type": "object", "required": ["fPrime", "f"],
           "properties": {"fPrime": _nat_list,
                          "f": {"type": "object", "additionalProperties": _nat_list}},
           "additionalProperties": False}

_action = {"type": "object",
           "properties": {"trivial": {"type": "object", "additionalProperties": _nat},
                          "components": {"type": "array", "items": {
                              "type": "object", "required": ["b", "j", "i", "multiplicity"],
                              "properties": {"b": _pos, "j": _pos, "i": _pos, "multiplicity": _nat},
                              "additionalProperties": False}}},
           "additionalProperties": False}

SCHEMAS: dict[str, dict] = {
    "factor": {
        "type": "object", "required": ["p", "b", "l"],
        "properties": {"p": _pos, "b": _pos, "l": _pos, "c": _pos},
        "additionalProperties": False,
    },
    "build-pm": {
        "type": "object", "required": ["module"],
        "properties": {"module": MODULE_SCHEMA, "subset": {"type": "array", "items": _label}},
        "additionalProperties": False,
    },
    "decompose": {
        "type": "object", "required": ["module"],
        "properties": {"module": MODULE_SCHEMA}, "additionalProperties": False,
    },
    "solvable": {
        "type": "object",
        "properties": {
            "shape": {"enum": ["field", "squarefree", "prime-power"]},
            "p": _pos, "a": _pos, "l": _pos, "m": _pos, "n": _nat,
            "invariants": _invariants,
            "perPrime": {"type": "object", "additionalProperties": _invariants},
            "exponents": _nat_list,
            "graded": _graded,
            "module": MODULE_SCHEMA,
        },
        "additionalProperties": False,
        "allOf": [
            {"if": {"properties": {"shape": {"const": "prime-power"}}, "required": ["shape"]},
             "then": {"required": ["exponents"]},
             "else": {"required": ["n"]}},
        ],
    },
    "count": {
        "type": "object", "required": ["u", "gammaPrime"],
        "properties": {"l": _pos, "d": {"type": "array", "items": _pos},
                       "gamma": _nat_table, "gammaPrime": _nat_table,
                       "n0": _nat, "u": _nat, "module": MODULE_SCHEMA},
        "additionalProperties": False,
    },
    "oracle-count": {
        "type": "object", "required": ["module"],
        "properties": {"module": MODULE_SCHEMA, "u": _nat, "gammaPrime": _nat_table,
                       "n": _nat, "exponents": _nat_list, "action": _action},
        "additionalProperties": False,
    },
    "t1-check": {
        "type": "object", "required": ["invariantFactors", "elements"],
        "properties": {"invariantFactors": {"type": "array", "items": _pos},
                       "elements": {"type": "array", "items": {"type": "array", "items": _int}}},
        "additionalProperties": False,
    },
}

JOB_SCHEMA = {
    "type": "object", "required": ["subcommand", "params"],
    "properties": {"subcommand": {"enum": list(SUBCOMMANDS)}, "params": {"type": "object"},
                   "seed": _int, "sizeBound": _pos},
    "additionalProperties": False,
}


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _validate(doc: Any, schema: dict, prefix: tuple = ()) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = errors[-1]
        raise InputError(e.message, _pointer(prefix + tuple(e.absolute_path)))


def normalize_job(doc: Any, subcommand: str | None = None, seed: int | None = None,
                  size_bound: int | None = None) -> dict:
    """Turn a bare params object or a full job document into a validated job."""
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object", "")
    if "params" in doc or "subcommand" in doc:
        job = dict(doc)
        if subcommand is not None:
            if job.setdefault("subcommand", subcommand) != subcommand:
                raise InputError(f"job is for {job['subcommand']!r}, invoked as {subcommand!r}", "/subcommand")
    else:
        job = {"subcommand": subcommand, "params": doc}
    if seed is not None:
        job["seed"] = seed
    if size_bound is not None:
        job["sizeBound"] = size_bound
    _validate(job, JOB_SCHEMA)
    _validate(job["params"], SCHEMAS[job["subcommand"]], ("params",))
    return job


# -- module construction -----------------------------------------------------------

def build_module(spec: dict) -> tuple[GModule, PmModule | None]:
    kind = spec["kind"]
    if kind == "matrix":
        l, c = prime_power(spec["m"])
        return GModule.from_matrix(spec["p"], spec["a"], l, c, spec["sigma"]), None
    if kind == "genus0":
        cover = PuncturedCoverSpec.make(spec["p"], spec["a"], spec["m"], spec["punctures"],
                                        spec.get("permutation") or {})
        pm = build_pm_genus0(cover)
    elif kind == "synthetic":
        pm = synthetic_module(spec["p"], spec["a"], spec["orbitSizes"], spec["m"])
    else:
        pm = artin_schreier_example(spec["p"], spec["m"])
    return pm.module, pm


def _with_modulus(spec: dict, m: int) -> dict:
    if spec["kind"] == "matrix":
        raise InputError("a matrix module has a fixed modulus; give perPrime invariants instead",
                         "/params/module/kind")
    return dict(spec, m=m)


def _module_json(M: GModule) -> dict:
    return {"p": M.p, "a": M.a, "l": M.l, "c": M.c, "modulus": M.modulus, "rank": M.rank,
            "sigma": [list(r) for r in M.sigma]}


# -- subcommands --------------------------------------------------------------------

def _factor(params: dict, seed: int) -> dict:
    p, b, l, c = params["p"], params["b"], params["l"], params.get("c", 1)
    fs = factor_cyclotomic(p, b, l, seed=seed)
    out = {"d": multiplicative_order(l, p, b), "r": len(fs),
           "factors": [list(f.coeffs) for f in fs]}
    if c > 1:
        cf = cyclo_factorization(p, b, l, c, seed=seed)
        out["modulus"] = l**c
        out["liftedFactors"] = [list(f.coeffs) for f in cf.factors_lifted[b - 1]]
    return out


def _build_pm(params: dict, seed: int) -> dict:
    M, pm = build_module(params["module"])
    out = {"module": _module_json(M),
           "sigmaOrderVerified": linalg.mat_pow(M.sigma, M.p**M.a, M.modulus) == linalg.identity(M.rank)}
    if pm is not None:
        out["basePoint"] = pm.base_point
        out["labels"] = list(pm.labels)
    subset = params.get("subset")
    if subset is not None:
        if pm is None:
            raise InputError("inclusions need a puncture model", "/params/subset")
        W, cert = pm_inclusion(pm, [str(s) for s in subset])
        out["inclusion"] = {"basis": [list(r) for r in W.basis], "logSize": W.log_size,
                            "certificate": {"images": [list(r) for r in cert.images],
                                            "verified": cert.verified}}
    return out


def _decompose(params: dict, seed: int) -> dict:
    M, _ = build_module(params["module"])
    dec = decompose(M)
    return {"module": _module_json(M), "decomposition": dec.to_json(),
            "logSize": dec.log_size()}


def _field_invariants(p: int, a: int, l: int, raw: dict, path: str) -> FieldInvariants:
    try:
        return FieldInvariants(p, a, l, raw["n0"], tuple(raw["nb"]))
    except ValueError as e:
        raise InputError(str(e), path) from e


def _graded_from_json(raw: dict, a: int) -> GradedDims:
    f = {}
    for key, row in raw["f"].items():
        try:
            b, j = (int(x) for x in key.split(","))
        except ValueError as e:
            raise InputError(f"bad component key {key!r}; expected 'b,j'", f"/params/graded/f/{key}") from e
        f[(b, j)] = tuple(row)
    c = len(raw["fPrime"]) - 1
    if c < 1 or any(len(r) != c + 1 for r in f.values()) or any(not 1 <= b <= a for b, _ in f):
        raise InputError("graded tables must all have length c + 1 and b in 1..a", "/params/graded")
    return GradedDims(tuple(raw["fPrime"]), f)


def _solvable(params: dict, seed: int) -> dict:
    shape = params.get("shape", "field")
    mod = params.get("module")
    if shape == "field":
        n = params["n"]
        if mod is not None:
            M, _ = build_module(mod)
            inv = invariants_of(M)
        else:
            for k in ("p", "a", "l", "invariants"):
                if k not in params:
                    raise InputError(f"'{k}' is required without a module", f"/params/{k}")
            inv = _field_invariants(params["p"], params["a"], params["l"], params["invariants"],
                                    "/params/invariants")
        report = solvable_field(n, inv)
        extra = {"invariants": inv.to_json()}
    elif shape == "squarefree":
        n = params["n"]
        if "m" not in params and mod is None:
            raise InputError("'m' is required", "/params/m")
        m = params.get("m", mod["m"] if mod else None)
        try:
            HShape.squarefree(m, n)
        except ValueError as e:
            raise InputError(str(e), "/params/m") from e
        primes = sorted(factorint(m))
        per_prime = {}
        if mod is not None:
            for l in primes:
                M, _ = build_module(_with_modulus(mod, l))
                per_prime[l] = invariants_of(M)
            p = mod["p"]
        else:
            raw = params.get("perPrime")
            if raw is None or "p" not in params or "a" not in params:
                raise InputError("give a module, or p, a and perPrime invariants", "/params")
            if sorted(int(k) for k in raw) != primes:
                raise InputError(f"perPrime must list exactly the primes {primes}", "/params/perPrime")
            p = params["p"]
            per_prime = {int(k): _field_invariants(p, params["a"], int(k), v, f"/params/perPrime/{k}")
                         for k, v in raw.items()}
        report = solvable_squarefree(n, per_prime, p)
        extra = {"invariants": {str(l): inv.to_json() for l, inv in sorted(per_prime.items())}}
    else:
        exps = params["exponents"]
        if mod is not None:
            M, _ = build_module(mod)
            graded, d = graded_dims(M), M.factorization.d
        else:
            for k in ("p", "a", "l", "graded"):
                if k not in params:
                    raise InputError(f"'{k}' is required without a module", f"/params/{k}")
            d = tuple(multiplicative_order(params["l"], params["p"], b) for b in range(1, params["a"] + 1))
            graded = _graded_from_json(params["graded"], params["a"])
        report = solvable_prime_power(exps, graded, d)
        extra = {"graded": graded.as_table()}
    out = report.to_json()
    out.update(extra)
    out["provenance"] = {"theorem": report.theorem, "witness": report.witness}
    return out


def _count(params: dict, seed: int) -> dict:
    mod = params.get("module")
    if mod is not None:
        M, _ = build_module(mod)
        if M.c != 1:
            raise InputError("counting needs a module over F_l (m prime)", "/params/module/m")
        res = count_for_module(M, params["u"], params["gammaPrime"])
    else:
        for k in ("l", "d", "gamma", "n0"):
            if k not in params:
                raise InputError(f"'{k}' is required without a module", f"/params/{k}")
        res = count_nsext(params["gamma"], params["gammaPrime"], params["n0"], params["u"],
                          params["l"], params["d"])
    out = res.to_json()
    out["provenance"] = {"theorem": "nsext-count", "witness": {"factors": out["factors"]}}
    return out


def _shape_for_oracle(params: dict, M: GModule) -> HShape:
    if "gammaPrime" in params or "u" in params:
        if M.c != 1:
            raise InputError("u/gammaPrime describe modules over F_l only", "/params")
        u, gp = params.get("u", 0), params.get("gammaPrime", [[0] * M.factorization.r(b)
                                                              for b in range(1, M.a + 1)])
        n = u + sum(g * M.factorization.d[b] for b, row in enumerate(gp) for g in row)
        return HShape.field_shape(M.l, n, ActionData.field(u, gp))
    action = None
    if "action" in params:
        raw = params["action"]
        action = ActionData.make({int(k): v for k, v in raw.get("trivial", {}).items()},
                                 {(c["b"], c["j"], c["i"]): c["multiplicity"] for c in raw.get("components", [])})
    if "exponents" in params:
        return HShape.prime_power(M.l, params["exponents"], action)
    if "n" in params:
        if M.c != 1:
            return HShape.prime_power(M.l, [params["n"]] + [0] * (M.c - 1), action)
        return HShape.field_shape(M.l, params["n"], action)
    if action is not None:
        exps = [0] * M.c
        for i, m in action.trivial:
            exps[i - 1] += m
        for (b, _, i), m in action.components:
            exps[i - 1] += m * M.factorization.d[b - 1]
        return HShape.prime_power(M.l, exps, action)
    raise InputError("give u/gammaPrime, n, exponents or action", "/params")


def _oracle_count(params: dict, seed: int, size_bound: int) -> dict:
    M, _ = build_module(params["module"])
    shape = _shape_for_oracle(params, M)
    inv = enumerate_g_submodules(M, size_bound)
    return {"count": str(count_isomorphic(inv, shape)), "inventorySize": str(len(inv))}


def _t1_check(params: dict, seed: int, size_bound: int) -> dict:
    ok = is_type_t1(params["elements"], params["invariantFactors"], size_bound=size_bound)
    return {"isTypeT1": ok}


def run(job: dict) -> dict:
    """Execute a validated job (see ``normalize_job``) and return the report."""
    sub = job["subcommand"]
    params = job["params"]
    seed = job.get("seed", DEFAULT_SEED)
    bound = job.get("sizeBound")
    log.info("running %s", sub)
    if sub == "factor":
        result = _factor(params, seed)
    elif sub == "build-pm":
        result = _build_pm(params, seed)
    elif sub == "decompose":
        result = _decompose(params, seed)
    elif sub == "solvable":
        result = _solvable(params, seed)
    elif sub == "count":
        result = _count(params, seed)
    elif sub == "oracle-count":
        result = _oracle_count(params, seed, bound or DEFAULT_SIZE_BOUND)
    elif sub == "t1-check":
        result = _t1_check(params, seed, bound or 2**16)
    else:
        raise InputError(f"unknown subcommand {sub!r}", "/subcommand")
    return {"input": job, **result}


def execute(doc: Any, subcommand: str | None = None, seed: int | None = None,
            size_bound: int | None = None) -> tuple[int, dict]:
    """Validate and run; never raises for user errors.  Returns (exit code, report)."""
    try:
        job = normalize_job(doc, subcommand, seed, size_bound)
        return EXIT_OK, run(job)
    except InputError as e:
        return EXIT_INVALID, _error("validation", str(e), e.path)
    except SizeBoundError as e:
        return EXIT_REFUSED, _error("size-bound", str(e))
    except InconsistencyError as e:
        return EXIT_INCONSISTENT, _error("inconsistency", str(e))
    except (ValueError, ModulusError, IndexError) as e:
        return EXIT_INVALID, _error("validation", str(e), "/params")


def _error(kind: str, message: str, path: str | None = None) -> dict:
    err = {"kind": kind, "message": message}
    if path is not None:
        err["path"] = path
    log.error("%s: %s%s", kind, message, f" at {path}" if path else "")
    return {"error": err}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="embedkit", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", metavar="FILE", help="JSON input (default: stdin)")
    parser.add_argument("--seed", type=int, help="seed for randomized polynomial splitting")
    parser.add_argument("--size-bound", type=int, help="largest module the oracle will enumerate")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(levelname)s: %(message)s")
    try:
        if args.input:
            with open(args.input) as fh:
                doc = json.load(fh)
        else:
            doc = json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as e:
        json.dump(_error("validation", f"cannot read input: {e}", ""), sys.stdout)
        sys.stdout.write("\n")
        return EXIT_INVALID
    code, report = execute(doc, args.subcommand, args.seed, args.size_bound)
    json.dump(report, sys.stdout, sort_keys=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
