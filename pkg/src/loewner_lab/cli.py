"""Command-line front end: ``loewner-lab {check,constants,hh,hunt,probe,paper}``.

Exit codes: 0 holds, 2 violated, 3 hypothesis failed but the inequality held,
4 input error, 5 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .constants import big_K, grid_oracle, small_k
from .errors import InputError, NumericFailure
from .explorer import CONDITIONS, GeneratorSpec, hunt_violations, probe_hypothesis_satisfiability
from .functions import from_spec, parse_function
from .hypotheses import operator_bounds, thm1_condition
from .inequalities import CHECKERS, canonical_checker_id
from .reports import InequalityReport
from .spectral import DEFAULT_REL_TOL, Interval, SymMatrix, loewner_compare, matrix_power, spectral_interval

EXIT_HOLDS, EXIT_VIOLATED, EXIT_HYPOTHESIS_FAILED, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4, 5
SEED_ENV = "LOEWNER_LAB_SEED"
FIXTURE_REL_TOL = 5e-3
PRINTED_CONCAVE_REVERSE = "f(<Ax,x>) <= k <f(A)x,x>"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    tolerance: float = DEFAULT_REL_TOL
    seed: int = 0
    output_format: str = "table"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError(f"--tolerance must be positive, got {self.tolerance}")
        if self.output_format not in ("json", "table"):
            raise InputError(f"--output-format must be json or table, got {self.output_format!r}")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "violated"
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def g6(x) -> str:
    return format(float(x), ".6g")


def _matrix_table(name: str, M: SymMatrix) -> list[str]:
    rows = [" ".join(f"{g6(x):>12}" for x in row) for row in np.asarray(M)]
    return [f"  {name}:"] + [f"    {r}" for r in rows]


def _emit(config: RunConfig, payload: dict, table_lines: list[str]):
    if config.output_format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(table_lines))


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------


def _load_input(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read --input {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"--input {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("input JSON must be an object")
    return data


def _matrix(data: dict, key: str) -> SymMatrix:
    if key not in data:
        raise InputError(f"missing field {key!r}")
    try:
        return SymMatrix(data[key])
    except InputError as exc:
        raise type(exc)(f"field {key!r}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"field {key!r} is not a numeric square matrix: {exc}") from exc


def _number(data: dict, key: str, default=None):
    if key not in data or data[key] is None:
        if default is None:
            raise InputError(f"missing field {key!r}")
        return default
    try:
        x = float(data[key])
    except (TypeError, ValueError) as exc:
        raise InputError(f"field {key!r} is not a number: {data[key]!r}") from exc
    if not math.isfinite(x):
        raise InputError(f"field {key!r} must be finite")
    return x


def _merge_args(data: dict, args) -> dict:
    """Command-line flags override fields from --input."""
    data = dict(data)
    for key in ("v", "r", "m", "M", "ell", "nodes"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    for key in ("A", "B"):
        val = getattr(args, key, None)
        if val is not None:
            try:
                data[key] = json.loads(val)
            except json.JSONDecodeError as exc:
                raise InputError(f"--{key} is not a JSON matrix: {exc}") from exc
    if getattr(args, "f", None):
        data["f"] = parse_function(args.f).to_spec()
    return data


def _function(data: dict):
    if "f" not in data:
        raise InputError("missing field 'f' (use --f family:params or an 'f' object in --input)")
    f = data["f"]
    return parse_function(f) if isinstance(f, str) else from_spec(f)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _report_exit(report: InequalityReport) -> int:
    if not report.holds:
        return EXIT_VIOLATED
    if report.hypothesis_held is False:
        return EXIT_HYPOTHESIS_FAILED
    return EXIT_HOLDS


def _report_table(report: InequalityReport, status: int) -> list[str]:
    v = report.verdict
    lines = [f"theorem: {report.theorem_id}"]
    if report.hypothesis is None:
        lines.append("hypothesis: not applicable")
    else:
        h = report.hypothesis
        lines.append(f"hypothesis: {h.condition_name} {'holds' if h.holds else 'FAILS'} (margin {g6(h.margin)})")
        for name, iv in h.intervals.items():
            lines.append(f"  {name} = [{g6(iv.lo)}, {g6(iv.hi)}]")
    lines.append(f"verdict: {v.relation.value} (rhs - lhs eigenvalues in [{g6(v.min_eig_of_difference)}, "
                 f"{g6(v.max_eig_of_difference)}], tol {g6(v.tolerance_used)})")
    for link in report.chain_links:
        lv = link.verdict
        lines.append(f"  link {link.label}: {lv.relation.value}, min eig {g6(lv.min_eig_of_difference)}")
    for key, val in report.constants.items():
        if isinstance(val, dict) and "value" in val:
            lines.append(f"  constant {key} = {g6(val['value'])} at t = {g6(val['argpoint'])}")
        elif isinstance(val, (int, float)):
            lines.append(f"  {key} = {g6(val)}")
    lines += _matrix_table("rhs - lhs", report.difference)
    if report.notes:
        lines.append(f"notes: {report.notes}")
    lines.append(f"status: {status} ({'holds' if report.holds else 'VIOLATED'})")
    return lines


def _inner_jensen(config, data, f):
    report = CHECKERS["inner_jensen"](
        f, _matrix(data, "A"), np.asarray(data.get("x", []), dtype=float),
        data.get("m"), data.get("M"), config.tolerance,
    )
    claimed = [c for c in report.checks if c.label != PRINTED_CONCAVE_REVERSE]
    status = EXIT_HOLDS if all(c.holds for c in claimed) else EXIT_VIOLATED
    lines = [f"inner Jensen for {report.function}: <Ax,x> = {g6(report.quadratic_form)}"]
    for c in report.checks:
        tag = " (printed orientation, diagnostic only)" if c.label == PRINTED_CONCAVE_REVERSE else ""
        lines.append(f"  {c.label}: {g6(c.lhs)} vs {g6(c.rhs)} -> {'holds' if c.holds else 'fails'}{tag}")
    lines.append(f"status: {status}")
    _emit(config, {**report.to_dict(), "status": status}, lines)
    return status


def cmd_check(config: RunConfig, theorem_id: str, data: dict) -> int:
    cid = canonical_checker_id(theorem_id)
    if cid not in CHECKERS:
        raise InputError(f"unknown --theorem {theorem_id!r}; known: {sorted(CHECKERS)}")
    tol = config.tolerance
    if cid == "power":
        if "r" not in data and "f" in data and _function(data).r is not None:
            data["r"] = _function(data).r
        report = CHECKERS[cid](_number(data, "r"), _matrix(data, "A"), _matrix(data, "B"), tol)
    else:
        f = _function(data)
        if cid == "inner_jensen":
            return _inner_jensen(config, data, f)
        if cid == "ell_sum":
            ops = data.get("operators")
            if not isinstance(ops, list) or not ops:
                raise InputError("missing field 'operators' (list of matrices)")
            mats = [_matrix({"operators[%d]" % i: X}, "operators[%d]" % i) for i, X in enumerate(ops)]
            report = CHECKERS[cid](f, mats, data.get("m"), data.get("M"), data.get("mode", "concave_lower"), tol)
        else:
            A, B = _matrix(data, "A"), _matrix(data, "B")
            if cid == "thm1":
                report = CHECKERS[cid](f, A, B, _number(data, "v", 0.5), rel_tol=tol)
            elif cid == "thm2":
                report = CHECKERS[cid](f, A, B, _number(data, "v"), rel_tol=tol)
            elif cid == "hh_chain":
                nodes = int(_number(data, "nodes", 16))
                report = CHECKERS[cid](f, A, B, nodes=nodes, rel_tol=tol)
            elif cid in ("reverse_subadditivity", "concave_lower", "K_k_subadditivity"):
                report = CHECKERS[cid](f, A, B, data.get("m"), data.get("M"), tol)
            else:
                report = CHECKERS[cid](f, A, B, tol)
    status = _report_exit(report)
    if config.output_format == "json":
        print(report.to_json(sort_keys=True))
    else:
        print("\n".join(_report_table(report, status)))
    return status


def cmd_constants(config: RunConfig, data: dict) -> int:
    f = _function(data)
    m, M = _number(data, "m"), _number(data, "M")
    K, k = big_K(m, M, f), small_k(m, M, f)
    dK, dk = K.value - grid_oracle("K", m, M, f), k.value - grid_oracle("k", m, M, f)
    payload = {"f": f.to_spec(), "K": K.to_dict(), "k": k.to_dict(), "oracle_delta": {"K": dK, "k": dk}}
    lines = [
        f"f = {f.name} on [{g6(m)}, {g6(M)}]",
        f"  K = {g6(K.value)} at t = {g6(K.argpoint)}  (grid-oracle delta {dK:.3g})",
        f"  k = {g6(k.value)} at t = {g6(k.argpoint)}  (grid-oracle delta {dk:.3g})",
    ]
    _emit(config, payload, lines)
    return EXIT_HOLDS


def cmd_hunt(config: RunConfig, args, data: dict) -> int:
    cid = canonical_checker_id(args.theorem)
    f = _function(data) if "f" in data else None
    params = {k: data[k] for k in ("v", "r", "m", "M", "mode") if data.get(k) is not None}
    if "ell" in data:
        params["ell"] = int(data["ell"])
    spec = GeneratorSpec(args.dim, Interval(args.lo, args.hi), config.seed, args.trials)
    result = hunt_violations(cid, f, spec, not args.unconstrained, params)
    status = EXIT_VIOLATED if result.violation_count else EXIT_HOLDS
    lines = [
        f"hunt {cid} f={from_spec(result.function).name if result.function else '-'} seed={config.seed} trials={result.trials} dim={args.dim}",
        f"  tested {result.tested}, hypothesis satisfied {result.satisfying_hypothesis_count}, "
        f"input errors {result.errors}",
        f"  violations {result.violation_count}, worst margin {g6(result.worst_margin)}, "
        f"worst relative margin {g6(result.worst_relative_margin)}",
        f"  violations with the hypothesis satisfied: {result.violations_under_hypothesis}",
    ]
    lines += [f"  trial {v.trial}: digest {v.digest} margin {g6(v.margin)}" for v in result.violations[:10]]
    lines += [f"  note: {n}" for n in result.notes]
    _emit(config, result.to_dict(), lines)
    return status


def cmd_probe(config: RunConfig, args) -> int:
    result = probe_hypothesis_satisfiability(args.condition, args.trials, config.seed, args.grid)
    lines = [
        f"probe {args.condition} seed={config.seed} samples={result.trials}",
        f"  satisfying tuples: {result.satisfying_hypothesis_count}",
    ]
    lines += [f"  witness: {', '.join(f'{k}={g6(v)}' for k, v in w.items())}" for w in result.witnesses]
    lines += [f"  note: {n}" for n in result.notes]
    _emit(config, result.to_dict(), lines)
    return EXIT_HOLDS


# ---------------------------------------------------------------------------
# built-in worked examples
# ---------------------------------------------------------------------------

EX_A, EX_B = [[3.0, 1.0], [1.0, 5.0]], [[10.0, -1.0], [-1.0, 9.0]]
CX_A, CX_B = [[1.0, 1.0], [1.0, 1.0]], [[3.0, 1.0], [1.0, 1.0]]
PRINTED = {
    6.0: [[985931.21, -476992.0], [-476992.0, 433279.0]],
    -2.0: [[0.0956, -0.0384], [-0.0384, 0.0229]],
    1.0 / 3.0: [[0.1519, -0.061], [-0.061, 0.0486]],
}


def _power_difference(A, B, r):
    """A^r + B^r - 2^(1-r)(A+B)^r."""
    return matrix_power(A, r) + matrix_power(B, r) - 2.0 ** (1.0 - r) * matrix_power(A + B, r)


def _entrywise_rel_error(got, want) -> float:
    got, want = np.asarray(got, dtype=float), np.asarray(want, dtype=float)
    return float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)))


def worked_example_fixtures(rel_tol: float = FIXTURE_REL_TOL) -> list[dict]:
    A, B = SymMatrix(EX_A), SymMatrix(EX_B)
    out = []
    for label, r, sign in (("separated pair, r=6", 6.0, 1.0), ("separated pair, r=-2", -2.0, 1.0), ("separated pair, r=1/3", 1.0 / 3.0, -1.0)):
        diff = sign * _power_difference(A, B, r)
        err = _entrywise_rel_error(diff, PRINTED[r])
        verdict = loewner_compare(diff, SymMatrix.identity(2, 0.0))
        psd_nonzero = verdict.relation.value == "GreaterOrEqual"
        out.append({
            "fixture": label, "computed": diff.to_list(), "expected": PRINTED[r],
            "max_rel_error": err, "psd_nonzero": psd_nonzero,
            "passed": bool(err <= rel_tol and psd_nonzero),
        })
    hyp = thm1_condition(operator_bounds(A), operator_bounds(B), 0.5)
    out.append({"fixture": "separated pair hypothesis", "margin": hyp.margin, "passed": bool(hyp.holds)})

    A, B = SymMatrix(CX_A), SymMatrix(CX_B)
    spectra = [spectral_interval(X) for X in (A, B, 0.5 * (A + B))]
    want = [(0.0, 2.0), (2 - math.sqrt(2), 2 + math.sqrt(2)), ((3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2)]
    spec_err = max(max(abs(s.lo - w[0]), abs(s.hi - w[1])) for s, w in zip(spectra, want))
    report = CHECKERS["power"](3.0, A, B)
    diff = report.difference.to_list()
    exact = diff == [[12.0, 2.0], [2.0, 0.0]]
    min_eig_err = abs(report.verdict.min_eig_of_difference - (6 - math.sqrt(40)))
    out.append({
        "fixture": "overlapping pair, r=3", "computed": diff, "expected": [[12.0, 2.0], [2.0, 0.0]],
        "spectra": [s.to_list() for s in spectra], "spectra_error": spec_err,
        "hypothesis_held": report.hypothesis_held, "min_eig": report.verdict.min_eig_of_difference,
        "exit_code": _report_exit(report),
        "passed": bool(
            spec_err <= 1e-10 and report.hypothesis_held is False and exact
            and min_eig_err <= 1e-9 and _report_exit(report) == EXIT_VIOLATED
        ),
    })
    return out


def cmd_worked_examples(config: RunConfig, tolerance: float | None) -> int:
    rows = worked_example_fixtures(FIXTURE_REL_TOL if tolerance is None else tolerance)
    lines = [f"{'fixture':<28} {'result':<6} detail"]
    for row in rows:
        if "max_rel_error" in row:
            detail = f"max rel error {row['max_rel_error']:.3g}"
        elif "margin" in row:
            detail = f"margin {g6(row['margin'])}"
        else:
            detail = f"min eig {g6(row['min_eig'])}, exit {row['exit_code']}"
        lines.append(f"{row['fixture']:<28} {'pass' if row['passed'] else 'FAIL':<6} {detail}")
    ok = all(r["passed"] for r in rows)
    lines.append(f"{sum(r['passed'] for r in rows)}/{len(rows)} fixtures pass")
    _emit(config, {"fixtures": rows, "all_passed": ok}, lines)
    return EXIT_HOLDS if ok else EXIT_VIOLATED


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", dest="input_path")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--output-format", choices=("json", "table"), default="table")

    fn = _Parser(add_help=False)
    fn.add_argument("--f", help="function spec, e.g. power:6, inverse_shift:1, affine:1,0, log")
    for flag in ("--v", "--r", "--m", "--M"):
        fn.add_argument(flag, type=float)
    fn.add_argument("--ell", type=int)
    fn.add_argument("--A", help="matrix as JSON, e.g. '[[3,1],[1,5]]'")
    fn.add_argument("--B", help="matrix as JSON")

    p = _Parser(prog="loewner-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common, fn], help="check one inequality instance")
    c.add_argument("--theorem", required=True, help=f"one of {sorted(CHECKERS)}")
    c.add_argument("--nodes", type=int)

    sub.add_parser("constants", parents=[common, fn], help="ratio constants K and k on [m, M]")

    h = sub.add_parser("hh", parents=[common, fn], help="Hermite-Hadamard chain for one pair")
    h.add_argument("--nodes", type=int)

    hu = sub.add_parser("hunt", parents=[common, fn], help="seeded counterexample hunt")
    hu.add_argument("--theorem", required=True)
    hu.add_argument("--trials", type=int, default=1000)
    hu.add_argument("--dim", type=int, default=2)
    hu.add_argument("--lo", type=float, default=1.0, help="spectrum interval lower end")
    hu.add_argument("--hi", type=float, default=3.0, help="spectrum interval upper end")
    hu.add_argument("--unconstrained", action="store_true", help="do not require the hypothesis")

    pr = sub.add_parser("probe", parents=[common], help="hypothesis satisfiability probe")
    pr.add_argument("--condition", required=True, choices=CONDITIONS)
    pr.add_argument("--trials", type=int, default=1000, help="number of sampled tuples")
    pr.add_argument("--grid", type=int, default=99)

    sub.add_parser("paper", parents=[common], help="reproduce the built-in worked examples")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        tol = DEFAULT_REL_TOL if args.tolerance is None else args.tolerance
        config = RunConfig(args.command, args.input_path, tol, seed, args.output_format)
        if args.command == "paper":
            return cmd_worked_examples(config, args.tolerance)
        if args.command == "probe":
            return cmd_probe(config, args)
        data = _merge_args(_load_input(config.input_path), args)
        if args.command == "check":
            return cmd_check(config, args.theorem, data)
        if args.command == "hh":
            return cmd_check(config, "hh_chain", data)
        if args.command == "constants":
            return cmd_constants(config, data)
        return cmd_hunt(config, args, data)
    except InputError as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericFailure as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
