"""Command line surface.

Commands: enumerate, table, twisted-table, verify, whittaker-check.
Lambda windows are JSON lists of {"unit": k, "exp_x2": int}, inline or in a
file.  Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 out of
desk range (oracle required above the configured threshold).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from heckewb.config import WorkbenchConfig

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_OUT_OF_RANGE = 3


def _parse_lambda(spec: str):
    """Inline JSON or a path to a JSON file."""
    text = spec
    if os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
    data = json.loads(text)
    lam = []
    for entry in data:
        lam.append((int(entry["unit"]), int(entry["exp_x2"])))
    if not lam:
        raise ValueError("empty lambda window")
    return tuple(sorted(lam))


def _config(args) -> WorkbenchConfig:
    q = Fraction(args.q)
    kwargs = dict(q=q, modulus=args.modulus, oracle_threshold=args.threshold)
    if args.cache:
        kwargs["cache_path"] = args.cache
    if getattr(args, "n", None):
        kwargs["n"] = args.n
    return WorkbenchConfig(**kwargs)


def _emit(payload, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        matrix = payload.get("matrix")
        if matrix is None:
            raise ValueError("csv output needs a matrix payload")
        for row in matrix:
            print(",".join(str(x) for x in row))


def cmd_enumerate(args) -> int:
    from heckewb.params import enumerate_enhanced, enumerate_multisegments

    try:
        lam = _parse_lambda(args.lam)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"bad lambda input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    cfg = _config(args)
    if args.twisted:
        params = enumerate_enhanced(lam, cfg.modulus)
        payload = [p.to_json() for p in params]
    else:
        params = enumerate_multisegments(lam, cfg.modulus)
        payload = [p.to_json() for p in params]
    _emit({"lambda": [{"unit": u, "exp_x2": e} for u, e in lam],
           "order": "closure", "params": payload}, "json")
    return EXIT_OK


def cmd_table(args) -> int:
    from heckewb.multiplicity import (
        OracleRequiredError,
        RecipeUnvalidatedError,
        decomposition_matrix,
        validate_recipe,
        _default_recipe,
        _standard_dim,
    )
    from heckewb.params import enumerate_multisegments

    try:
        lam = _parse_lambda(args.lam)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"bad lambda input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    cfg = _config(args)
    from heckewb.klpoly import KLContext
    from heckewb.multiplicity import KLRecipe

    recipe = KLRecipe(KLContext(cfg.cache_path))
    needs_recipe_gate = any(
        _standard_dim(m) > cfg.oracle_threshold
        for m in enumerate_multisegments(lam, cfg.modulus)
    )
    if needs_recipe_gate and recipe.validated_rank < 4:
        if args.validate:
            validate_recipe(
                q=cfg.q, max_n=4, max_window=4, modulus=cfg.modulus, recipe=recipe
            )
        else:
            print(
                "window exceeds the oracle threshold and the recipe is not "
                "validated in this session; rerun with --validate",
                file=sys.stderr,
            )
            return EXIT_OUT_OF_RANGE
    try:
        table = decomposition_matrix(
            lam,
            twisted=args.twisted,
            q=cfg.q,
            modulus=cfg.modulus,
            recipe=recipe,
            oracle_threshold=cfg.oracle_threshold,
        )
    except OracleRequiredError as exc:
        print(f"out of desk range: {exc}", file=sys.stderr)
        return EXIT_OUT_OF_RANGE
    except RecipeUnvalidatedError as exc:
        print(f"recipe gate: {exc}", file=sys.stderr)
        return EXIT_OUT_OF_RANGE
    finally:
        recipe.context.save()
    _emit(table.to_json(), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    failures = []
    checks = []
    scope = args.scope

    def record(name, fn):
        checks.append((name, fn))

    if scope in ("algebra", "all"):
        record("algebra relations n<=3", _verify_algebra)
    if scope in ("whittaker", "all"):
        record("whittaker laws n<=3", _verify_whittaker)
        record("normalization comparison n<=3", lambda: _verify_normalization(cfg))
    if scope in ("multiplicity", "all"):
        record(
            f"KL recipe vs oracle n<={args.max_n}",
            lambda: _verify_multiplicity(cfg, args.max_n),
        )
    for name, fn in checks:
        try:
            fn()
            print(f"PASS {name}")
        except Exception as exc:  # noqa: BLE001 - report, then fail
            print(f"FAIL {name}: {exc}")
            failures.append((name, str(exc)))
    if failures:
        print(json.dumps({"failures": [
            {"check": n, "error": e} for n, e in failures
        ]}))
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def _verify_algebra():
    from heckewb.hecke import HeckeElement as H, intertwiner, is_central
    from heckewb.scalars import Scalar
    from heckewb.weyl import all_perms, all_reduced_words

    for n in (2, 3):
        one = H.one(n)
        p = Scalar.p()
        for i in range(n - 1):
            T = H.T(i, n)
            assert ((T + one) * (T - one * p)).is_zero()
        for i in range(n - 2):
            a, b = H.T(i, n), H.T(i + 1, n)
            assert (a * b * a - b * a * b).is_zero()
        Tg = H.T_gamma(n)
        assert (Tg * Tg - one).is_zero()
        for w in all_perms(n):
            ref = None
            for word in all_reduced_words(w):
                el = one
                for i in word:
                    el = el * intertwiner(i, n)
                if ref is None:
                    ref = el
                else:
                    assert (el - ref).is_zero()
        sym = H.zero(n)
        for j in range(n):
            e = tuple(1 if t == j else 0 for t in range(n))
            sym = sym + H.theta(e) + H.theta(tuple(-x for x in e))
        assert is_central(sym)
        assert not is_central(H.theta(tuple(1 if t == 0 else 0 for t in range(n))))


def _verify_whittaker():
    from heckewb.whittaker import verify_transformation_laws

    for n in (2, 3):
        rep = verify_transformation_laws(n)
        if not rep["passed"]:
            raise AssertionError(f"n={n}: {rep['failures']}")


def _verify_normalization(cfg: WorkbenchConfig):
    from heckewb.params import gamma_fixed_multisegments
    from heckewb.whittaker import compare_normalizations

    for m in gamma_fixed_multisegments(3, cfg.modulus):
        verdict = compare_normalizations(m, cfg.q, cfg.modulus)
        if verdict["verdict"] != "EQUAL":
            raise AssertionError(f"DIFFER at {m}: {json.dumps(verdict)}")


def _verify_multiplicity(cfg: WorkbenchConfig, max_n: int):
    from heckewb.multiplicity import validate_recipe

    validate_recipe(q=cfg.q, max_n=max_n, max_window=4, modulus=cfg.modulus)


def cmd_whittaker_check(args) -> int:
    from heckewb.params import Multisegment
    from heckewb.whittaker import compare_normalizations

    cfg = _config(args)
    try:
        if os.path.exists(args.param):
            with open(args.param) as fh:
                m = Multisegment.from_json(json.load(fh))
        else:
            m = Multisegment.from_json(json.loads(args.param))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"bad parameter input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    verdict = compare_normalizations(m, cfg.q, cfg.modulus)
    _emit(verdict, "json")
    return EXIT_OK if verdict["verdict"] == "EQUAL" else EXIT_VERIFY_FAILED


def _add_common(p):
    p.add_argument("--q", default="3", help="rational specialization of v")
    p.add_argument("--modulus", "--N", type=int, default=2,
                   help="unit label modulus (even)")
    p.add_argument("--threshold", type=int, default=240,
                   help="max standard-module dimension for oracle runs")
    p.add_argument("--cache", default=None,
                   help="KL cache path (or WORKBENCH_CACHE env)")
    p.add_argument("--n", type=int, default=3)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="heckewb",
        description="Exact workbench for twisted affine Hecke algebras of type A",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list parameters over a window")
    p_enum.add_argument("--lambda", dest="lam", required=True,
                        help="window JSON (inline or file)")
    p_enum.add_argument("--twisted", action="store_true")
    _add_common(p_enum)
    p_enum.set_defaults(func=cmd_enumerate)

    for name, twisted in (("table", False), ("twisted-table", True)):
        p_tab = sub.add_parser(name, help="decomposition matrix over a window")
        p_tab.add_argument("--lambda", dest="lam", required=True)
        if not twisted:
            p_tab.add_argument("--twisted", action="store_true")
        p_tab.add_argument("--format", choices=("json", "csv"), default="json")
        p_tab.add_argument("--validate", action="store_true",
                           help="run the oracle validation gate if needed")
        _add_common(p_tab)
        if twisted:
            p_tab.set_defaults(func=cmd_table, twisted=True)
        else:
            p_tab.set_defaults(func=cmd_table)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("scope", choices=("algebra", "whittaker", "multiplicity", "all"))
    p_ver.add_argument("--max-n", type=int, default=4)
    _add_common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_wh = sub.add_parser("whittaker-check",
                          help="compare the two gamma normalizations")
    p_wh.add_argument("--param", required=True,
                      help="multisegment JSON (inline or file)")
    _add_common(p_wh)
    p_wh.set_defaults(func=cmd_whittaker_check)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
