"""Command-line front end: analyze | envelope | discriminant | compare | plot.

Flag parsing is hand-rolled: expression values routinely start with a minus
sign ("--A" "-cos t") and argparse refuses such values.  Output is
deterministic byte-for-byte: stable key order, floats at 17 significant
digits, LF line endings, no timestamps.

Exit codes: 0 creative/success, 2 usage error, 3 not creative,
4 inconclusive, 5 expression or domain error.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass

from . import __version__, analysis, svgplot
from .analysis import (
    CREATIVE,
    EPS_CRE,
    EPS_SING,
    EPS_STAR,
    FLAT_LABEL,
    INCONCLUSIVE,
    LHOPITAL_DEPTH,
    NOT_CREATIVE,
    QUOTIENT_COND,
    ROOT_WIDTH,
    CreativityReport,
    CreatorFunction,
    InvalidCreatorError,
    SingularPoint,
    UniquenessVerdict,
    assess_creativity,
    assess_uniqueness,
    build_creator,
    find_gauss_singular_points,
    grid_profile,
    parameter_grid,
)
from .discriminant import DiscriminantSet, compare_methods, sample_discriminant
from .envelope import EnvelopeCurve, sample_envelope, verify_envelope
from .expr import ExpressionDomainError, ParseError, parse_expression
from .family import (
    DegenerateFamilyError,
    LineFamily,
    OutOfDomainError,
    build_family_clairaut,
    build_family_general,
    build_family_hedgehog,
    build_family_normalized,
)

COMMANDS = ("analyze", "envelope", "discriminant", "compare", "plot")
DEFAULT_GRID_N = 1001
GRID_ENV_VAR = "ENVELOPE_GRID_N"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CREATIVE = 3
EXIT_INCONCLUSIVE = 4
EXIT_EXPR_ERROR = 5

_MODE_FLAGS = {
    "normalized": ("--theta", "--a"),
    "general": ("--A", "--B", "--C"),
    "clairaut": ("--g",),
    "hedgehog": ("--hedgehog",),
}
_EXPR_FLAGS = {flag for flags in _MODE_FLAGS.values() for flag in flags}
_VALUE_FLAGS = _EXPR_FLAGS | {"--domain", "--grid-n", "--user-b", "--output",
                              "--format", "--example"}

# Bundled manifest of worked examples: one command reproduces each.
WORKED_EXAMPLES = {
    1: {"name": "sine-tangent", "mode": "general",
        "exprs": {"A": "-cos t", "B": "1", "C": "t*cos t - sin t"},
        "domain": (-10.0, 10.0),
        "expected_verdict": "creative", "expected_uniqueness": "unique"},
    2: {"name": "still-family", "mode": "normalized",
        "exprs": {"theta": "0", "a": "0"}, "domain": (-1.0, 1.0),
        "expected_verdict": "creative", "expected_uniqueness": "non_unique"},
    3: {"name": "parallel-shift", "mode": "normalized",
        "exprs": {"theta": "0", "a": "t"}, "domain": (-1.0, 1.0),
        "expected_verdict": "not_creative", "expected_uniqueness": "non_unique"},
    4: {"name": "rotating-pencil", "mode": "normalized",
        "exprs": {"theta": "t", "a": "0"}, "domain": (-1.0, 1.0),
        "expected_verdict": "creative", "expected_uniqueness": "unique"},
    5: {"name": "quadratic-angle", "mode": "normalized",
        "exprs": {"theta": "t^2", "a": "0"}, "domain": (-1.0, 1.0),
        "expected_verdict": "creative", "expected_uniqueness": "unique"},
    6: {"name": "sine-evolute", "mode": "general",
        "exprs": {"A": "1", "B": "cos t", "C": "-t - cos t*sin t"},
        "domain": (-10.0, 10.0),
        "expected_verdict": "not_creative", "expected_uniqueness": "unique"},
    7: {"name": "clairaut-parabola", "mode": "clairaut",
        "exprs": {"g": "t^2"}, "domain": (-2.0, 2.0),
        "expected_verdict": "creative", "expected_uniqueness": "unique"},
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    mode: str
    expressions: dict[str, str]
    domain: tuple[float, float]
    grid_n: int
    user_b: str | None = None
    output: str | None = None
    format: str = "json"
    example: int | None = None


_USAGE = f"""usage: envlines COMMAND [flags]

commands: {', '.join(COMMANDS)}

input modes (exactly one):
  --theta EXPR --a EXPR      rotation angle and offset
  --A EXPR --B EXPR --C EXPR general equation A(t) X + B(t) Y + C(t) = 0
  --g EXPR                   Clairaut equation Y = X Y' + g(Y'): lines Y = t X + g(t)
  --hedgehog EXPR            support function a(t) with theta(t) = t

other flags:
  --domain LO:HI             parameter interval (default -10:10)
  --grid-n N                 grid size, >= 16 (default 1001; env {GRID_ENV_VAR})
  --user-b EXPR              creator override (validated against a' = b theta')
  --output PATH              write here instead of stdout
  --format FMT               json | csv | svg (per-command defaults apply)
  --example N                analyze a bundled worked example (1..{len(WORKED_EXAMPLES)})
"""


def _default_grid_n() -> int:
    raw = os.environ.get(GRID_ENV_VAR)
    if raw is None:
        return DEFAULT_GRID_N
    try:
        value = int(raw)
    except ValueError as err:
        raise UsageError(f"{GRID_ENV_VAR} must be an integer, got {raw!r}") from err
    if value < 16:
        raise UsageError(f"{GRID_ENV_VAR} must be >= 16, got {value}")
    return value


def _parse_domain(text: str) -> tuple[float, float]:
    lo_text, sep, hi_text = text.partition(":")
    if not sep:
        raise UsageError(f"malformed interval {text!r}, expected LO:HI")
    try:
        lo, hi = float(lo_text), float(hi_text)
    except ValueError as err:
        raise UsageError(f"malformed interval {text!r}: {err}") from err
    if not lo < hi:
        raise UsageError(f"degenerate interval {text!r}: need LO < HI")
    return lo, hi


def parse_cli(argv: list[str]) -> RunConfig:
    """Validate argv into a RunConfig; raises UsageError on any problem."""
    if not argv:
        raise UsageError("missing command")
    command = argv[0]
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")

    values: dict[str, str] = {}
    i = 1
    while i < len(argv):
        flag = argv[i]
        if flag not in _VALUE_FLAGS:
            raise UsageError(f"unknown flag {flag!r}")
        if flag in values:
            raise UsageError(f"duplicate flag {flag!r}")
        if i + 1 >= len(argv):
            raise UsageError(f"flag {flag!r} expects a value")
        values[flag] = argv[i + 1]
        i += 2

    example = None
    if "--example" in values:
        if command != "analyze":
            raise UsageError("--example is only valid with the analyze command")
        raw = values.pop("--example")
        try:
            example = int(raw)
        except ValueError as err:
            raise UsageError(f"--example expects an integer, got {raw!r}") from err
        if example not in WORKED_EXAMPLES:
            raise UsageError(f"--example must be in 1..{len(WORKED_EXAMPLES)}, got {example}")
        if any(flag in values for flag in _EXPR_FLAGS):
            raise UsageError("--example conflicts with explicit input-mode flags")

    modes_present = [mode for mode, flags in _MODE_FLAGS.items()
                     if any(flag in values for flag in flags)]
    if example is None:
        if len(modes_present) == 0:
            raise UsageError("no input mode given (use --theta/--a, --A/--B/--C, --g, or --hedgehog)")
        if len(modes_present) > 1:
            raise UsageError(f"conflicting input modes: {', '.join(sorted(modes_present))}")
        mode = modes_present[0]
        missing = [flag for flag in _MODE_FLAGS[mode] if flag not in values]
        if missing:
            raise UsageError(f"mode {mode!r} is missing required flag(s): {', '.join(missing)}")
        names = {"--theta": "theta", "--a": "a", "--A": "A", "--B": "B", "--C": "C",
                 "--g": "g", "--hedgehog": "a"}
        expressions = {names[flag]: values[flag] for flag in _MODE_FLAGS[mode]}
        domain = _parse_domain(values.get("--domain", "-10:10"))
    else:
        entry = WORKED_EXAMPLES[example]
        mode = entry["mode"]
        expressions = dict(entry["exprs"])
        domain = _parse_domain(values["--domain"]) if "--domain" in values else entry["domain"]

    if "--grid-n" in values:
        try:
            grid_n = int(values["--grid-n"])
        except ValueError as err:
            raise UsageError(f"--grid-n expects an integer, got {values['--grid-n']!r}") from err
    else:
        grid_n = _default_grid_n()
    if grid_n < 16:
        raise UsageError(f"--grid-n must be >= 16, got {grid_n}")

    default_format = {"analyze": "json", "envelope": "csv", "discriminant": "json",
                      "compare": "json", "plot": "svg"}[command]
    fmt = values.get("--format", default_format)
    allowed = {"analyze": ("json",), "envelope": ("csv", "json"),
               "discriminant": ("json", "csv"), "compare": ("json",),
               "plot": ("svg",)}[command]
    if fmt not in allowed:
        raise UsageError(f"format {fmt!r} not supported by {command} (allowed: {', '.join(allowed)})")

    return RunConfig(
        command=command,
        mode=mode,
        expressions=expressions,
        domain=domain,
        grid_n=grid_n,
        user_b=values.get("--user-b"),
        output=values.get("--output"),
        format=fmt,
        example=example,
    )


# -- deterministic serialization ------------------------------------------------

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    text = format(float(x), ".17g")
    return text


def _json_escape(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def to_json(value, indent: int = 0) -> str:
    """Minimal JSON writer with insertion-order keys and .17g floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [f"{inner}{_json_escape(str(k))}: {to_json(v, indent + 1)}"
                for k, v in value.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return "[" + ", ".join(
                _fmt_float(v) if isinstance(v, float) else str(v) for v in value
            ) + "]"
        rows = [f"{inner}{to_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, int):
        return str(value)
    return _json_escape(str(value))


# -- pipeline ---------------------------------------------------------------------

@dataclass
class PipelineResult:
    family: LineFamily
    singulars: tuple[SingularPoint, ...]
    creativity: CreativityReport
    uniqueness: UniquenessVerdict
    creator: CreatorFunction | None
    envelope: EnvelopeCurve | None
    verification: dict | None
    discriminant: DiscriminantSet
    comparison: dict | None


def _build_family(config: RunConfig) -> LineFamily:
    asts = {name: parse_expression(text) for name, text in config.expressions.items()}
    if config.mode == "normalized":
        return build_family_normalized(asts["theta"], asts["a"], config.domain)
    if config.mode == "general":
        return build_family_general(asts["A"], asts["B"], asts["C"], config.domain)
    if config.mode == "clairaut":
        return build_family_clairaut(asts["g"], config.domain)
    return build_family_hedgehog(asts["a"], config.domain)


def run_pipeline(config: RunConfig) -> PipelineResult:
    family = _build_family(config)
    n = config.grid_n
    report = assess_creativity(family, n)
    uniqueness = assess_uniqueness(family, n)
    singulars = find_gauss_singular_points(family, n)
    disc = sample_discriminant(family, n)

    creator = None
    curve = None
    verification = None
    comparison = None
    if report.verdict == CREATIVE:
        user_ast = parse_expression(config.user_b) if config.user_b else None
        creator = build_creator(family, report, user_ast)
        curve = sample_envelope(family, creator, n)
        # verification differentiates by finite differences; refine the grid so
        # the h^2 truncation error sits inside the tangency band
        fine = sample_envelope(family, creator, 4 * (n - 1) + 1)
        check = verify_envelope(fine, family)
        verification = {
            "n": 4 * (n - 1) + 1,
            "max_membership_residual": check.max_membership_residual,
            "max_tangency_residual": check.max_tangency_residual,
            "pass": check.passed,
        }
        cmp_report = compare_methods(family, creator, n)
        comparison = {
            "widespread_ok": cmp_report.widespread_ok,
            "failure_ts": list(cmp_report.failure_ts),
            "narrative": cmp_report.narrative,
        }
    return PipelineResult(family, singulars, report, uniqueness, creator,
                          curve, verification, disc, comparison)


def _singular_entry(p: SingularPoint) -> dict:
    return {
        "t": p.t,
        "theta_derivative_order": FLAT_LABEL if p.theta_derivative_order is None
        else p.theta_derivative_order,
        "a_prime_at": p.a_prime_at,
        "resolvable": p.resolvable,
        "b_limit": p.b_limit,
    }


def build_document(config: RunConfig, result: PipelineResult) -> dict:
    """The analysis document: everything the pipeline concluded, serializable."""
    family = result.family
    profile = grid_profile(family, config.grid_n)
    doc: dict = {
        "tool": {"name": "envlines", "version": __version__},
        "config": {
            "command": config.command,
            "mode": config.mode,
            "expressions": dict(config.expressions),
            "domain": [family.domain[0], family.domain[1]],
            "grid_n": config.grid_n,
            "user_b": config.user_b,
        },
        "tolerances": {
            "eps_sing": EPS_SING,
            "eps_cre": EPS_CRE,
            "eps_star": EPS_STAR,
            "quotient_condition": QUOTIENT_COND,
            "root_width": ROOT_WIDTH,
            "lhopital_depth": LHOPITAL_DEPTH,
            "scale_theta": profile["scale_theta"],
            "scale_a": profile["scale_a"],
            "delta_flat": profile["delta_flat"],
        },
    }
    if config.example is not None:
        entry = WORKED_EXAMPLES[config.example]
        doc["example"] = {
            "id": config.example,
            "name": entry["name"],
            "expected_verdict": entry["expected_verdict"],
            "expected_uniqueness": entry["expected_uniqueness"],
        }
    doc["gauss_singular_points"] = [_singular_entry(p) for p in result.singulars]
    doc["creativity"] = {
        "verdict": result.creativity.verdict,
        "witnesses": [_singular_entry(p) for p in result.creativity.witnesses],
        "notes": result.creativity.notes,
    }
    doc["uniqueness"] = {
        "verdict": result.uniqueness.verdict,
        "flat_intervals": [[lo, hi] for lo, hi in result.uniqueness.flat_intervals],
    }
    if result.creator is not None:
        ts = parameter_grid(family.domain, config.grid_n)
        doc["creator"] = {
            "kind": result.creator.kind,
            "expression": config.user_b,
            "flat_intervals": [
                {"lo": lo, "hi": hi, "fill": fill}
                for lo, hi, fill in result.creator.flat_intervals
            ],
            "samples": [[float(t), result.creator(float(t))] for t in ts],
        }
    else:
        doc["creator"] = None
    if result.envelope is not None:
        doc["envelope"] = {
            "samples": [[p.t, p.point[0], p.point[1]] for p in result.envelope.samples],
            "verification": result.verification,
        }
    else:
        doc["envelope"] = None
    disc = result.discriminant
    doc["discriminant"] = {
        "n": config.grid_n,
        "point_count": sum(1 for s in disc.slices if s.kind == "point"),
        "whole_line_count": sum(1 for s in disc.slices if s.kind == "whole_line"),
        "empty_count": sum(1 for s in disc.slices if s.kind == "empty"),
        "failure_ts": [s.t for s in disc.slices if s.kind != "point"],
        "polluted_lines": [
            {"t": t, "nu": [line.nu[0], line.nu[1]], "offset": line.offset}
            for t, line in disc.polluted_lines
        ],
    }
    doc["comparison"] = result.comparison
    return doc


def run_analyze(config: RunConfig) -> dict:
    return build_document(config, run_pipeline(config))


def run_export(config: RunConfig, result: PipelineResult) -> str:
    """CSV of envelope samples: t,x,y,b,theta_prime,a_prime (LF endings)."""
    assert result.creator is not None and result.envelope is not None
    rows = ["t,x,y,b,theta_prime,a_prime"]
    for p in result.envelope.samples:
        tp, ap = analysis._first_derivatives(result.family, p.t)
        rows.append(",".join(_fmt_float(v)
                             for v in (p.t, p.point[0], p.point[1], p.b_value, tp, ap)))
    return "\n".join(rows) + "\n"


def _envelope_json(config: RunConfig, result: PipelineResult) -> dict:
    assert result.envelope is not None
    rows = []
    for p in result.envelope.samples:
        tp, ap = analysis._first_derivatives(result.family, p.t)
        rows.append([p.t, p.point[0], p.point[1], p.b_value, tp, ap])
    return {
        "tool": {"name": "envlines", "version": __version__},
        "config": {"mode": config.mode, "expressions": dict(config.expressions),
                   "domain": [result.family.domain[0], result.family.domain[1]],
                   "grid_n": config.grid_n, "user_b": config.user_b},
        "columns": ["t", "x", "y", "b", "theta_prime", "a_prime"],
        "rows": rows,
    }


def _discriminant_csv(result: PipelineResult) -> str:
    rows = ["t,kind,x,y"]
    for sl in result.discriminant.slices:
        if sl.kind == "point":
            rows.append(f"{_fmt_float(sl.t)},point,{_fmt_float(sl.point[0])},{_fmt_float(sl.point[1])}")
        else:
            rows.append(f"{_fmt_float(sl.t)},{sl.kind},,")
    return "\n".join(rows) + "\n"


def _discriminant_json(config: RunConfig, result: PipelineResult) -> dict:
    disc = result.discriminant
    return {
        "tool": {"name": "envlines", "version": __version__},
        "config": {"mode": config.mode, "expressions": dict(config.expressions),
                   "domain": [result.family.domain[0], result.family.domain[1]],
                   "grid_n": config.grid_n},
        "slices": [
            {"t": sl.t, "kind": sl.kind,
             "point": None if sl.point is None else [sl.point[0], sl.point[1]],
             "line": None if sl.line is None else
             {"nu": [sl.line.nu[0], sl.line.nu[1]], "offset": sl.line.offset}}
            for sl in disc.slices
        ],
    }


def run_plot(config: RunConfig, result: PipelineResult) -> str:
    return svgplot.render_scene(
        result.family,
        result.creativity.verdict,
        result.envelope,
        result.discriminant,
        tuple(p.t for p in result.singulars),
    )


# -- entry point ---------------------------------------------------------------------

def _write(config: RunConfig, payload: str) -> None:
    if config.output is None:
        sys.stdout.write(payload)
    else:
        with open(config.output, "w", newline="") as handle:
            handle.write(payload)


def _verdict_code(verdict: str) -> int:
    return {CREATIVE: EXIT_OK, NOT_CREATIVE: EXIT_NOT_CREATIVE,
            INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    try:
        config = parse_cli(args)
    except UsageError as err:
        sys.stderr.write(f"error: {err}\n\n{_USAGE}")
        return EXIT_USAGE

    try:
        result = run_pipeline(config)
        if config.command == "analyze":
            _write(config, to_json(build_document(config, result)) + "\n")
            return _verdict_code(result.creativity.verdict)
        if config.command == "envelope":
            if result.creator is None:
                sys.stderr.write(
                    f"error: family is {result.creativity.verdict}; no envelope to export\n")
                return _verdict_code(result.creativity.verdict)
            payload = (run_export(config, result) if config.format == "csv"
                       else to_json(_envelope_json(config, result)) + "\n")
            _write(config, payload)
            return EXIT_OK
        if config.command == "discriminant":
            payload = (_discriminant_csv(result) if config.format == "csv"
                       else to_json(_discriminant_json(config, result)) + "\n")
            _write(config, payload)
            return EXIT_OK
        if config.command == "compare":
            if result.comparison is None:
                sys.stderr.write(
                    f"error: family is {result.creativity.verdict}; comparison needs a creator\n")
                return _verdict_code(result.creativity.verdict)
            doc = {
                "tool": {"name": "envlines", "version": __version__},
                "config": {"mode": config.mode, "expressions": dict(config.expressions),
                           "domain": [result.family.domain[0], result.family.domain[1]],
                           "grid_n": config.grid_n},
            }
            doc.update(result.comparison)
            _write(config, to_json(doc) + "\n")
            return EXIT_OK
        _write(config, run_plot(config, result))
        return EXIT_OK
    except (ParseError, ExpressionDomainError, DegenerateFamilyError,
            OutOfDomainError, InvalidCreatorError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_EXPR_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
