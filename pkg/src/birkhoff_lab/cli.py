"""Configuration ingestion, subcommand dispatch, and deterministic reports.

Exit codes: 0 success, 1 mathematical negative verdict with witness,
2 input error, 3 budget or search-horizon exhaustion.  Report payloads are
byte-deterministic (sorted keys, exact value tokens, no timestamps); run
metadata goes to a sidecar file next to the payload.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import gluing, livsic, meanpath, numtheory, orbits
from .core import (
    DEFAULT_ALPHA_SQUARE,
    FieldValue,
    Observable,
    PeriodicOrbit,
    Roof,
    Sft,
    parse_field_value,
    parse_word,
    validate_sft,
)
from .errors import (
    BudgetExceeded,
    ConfigError,
    InputError,
    IrrationalRatio,
    NotFound,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


# ---------------------------------------------------------------------------
# Config ingestion
# ---------------------------------------------------------------------------


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def build_system(doc: dict):
    """Validate a config document into (sft, observable, roof, alpha_square)."""
    for key in ("alphabet", "transitions", "window", "values"):
        if key not in doc:
            raise ConfigError(f"config misses required key {key!r}")
    alpha_square = int(doc.get("alpha_square", DEFAULT_ALPHA_SQUARE))
    mode = doc.get("mode", "exact")
    sft = validate_sft(int(doc["alphabet"]), doc["transitions"])
    window = int(doc["window"])

    table = {}
    for word_text, value in doc["values"].items():
        word = parse_word(word_text)
        if mode == "exact":
            table[word] = parse_field_value(str(value), alpha_square)
        else:
            table[word] = float(value)
    f = Observable.validated(sft, window, table, mode)

    roof = None
    if "roof" in doc:
        roof_table = {
            parse_word(k): parse_field_value(str(v), alpha_square)
            for k, v in doc["roof"].items()
        }
        roof = Roof.validated(sft, window, roof_table)
    return sft, f, roof, alpha_square


def export_config(doc: dict) -> bytes:
    return export_report(doc, "json")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def value_token(x) -> str:
    if isinstance(x, FieldValue):
        return x.to_token()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def export_report(payload, fmt: str) -> bytes:
    """Deterministic serialization: identical payloads give identical bytes."""
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True)
        return (text + "\n").encode("utf-8")
    if fmt == "csv":
        if not isinstance(payload, dict) or "csv_header" not in payload:
            raise ConfigError("csv format is only available for tabular reports")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(payload["csv_header"])
        for row in payload["csv_rows"]:
            writer.writerow(row)
        return buf.getvalue().encode("utf-8")
    raise ConfigError(f"unknown format {fmt!r}")


def _emit(payload, args) -> None:
    data = export_report(payload, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
        meta = {"argv": list(sys.argv[1:]), "written_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
        with open(args.output + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, sort_keys=True, indent=2)
            fh.write("\n")
    else:
        sys.stdout.write(data.decode("utf-8"))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_spectrum(args) -> int:
    sft, f, roof, _ = build_system(load_config(args.config))
    if roof is not None:
        entries = orbits.flow_spectrum(sft, f, roof, args.n_max, threads=args.threads)
        rows = [(e.orbit.period, e.orbit.word_str, value_token(e.flow_period),
                 value_token(e.integral)) for e in entries]
        payload = {
            "command": "spectrum",
            "kind": "flow",
            "period_bound": args.n_max,
            "entries": [
                {"period": r[0], "word": r[1], "flow_period": r[2], "integral": r[3]}
                for r in rows
            ],
            "csv_header": ["period", "word", "flow_period", "integral"],
            "csv_rows": rows,
        }
        _emit(payload, args)
        return EXIT_OK

    report = orbits.spectrum(sft, f, args.n_max, threads=args.threads)
    rows = [(e.orbit.period, e.orbit.word_str, value_token(e.sum),
             value_token(e.average)) for e in report.entries]
    payload = {
        "command": "spectrum",
        "kind": "map",
        "period_bound": report.period_bound,
        "mode": report.mode,
        "complete": report.verify_complete(),
        "entries": [
            {"period": r[0], "word": r[1], "sum": r[2], "average": r[3]}
            for r in rows
        ],
        "distinct_values": [value_token(v) for v in report.distinct_values],
        "growth": [[p, value_token(g)] for p, g in orbits.spectrum_growth(report)],
        "csv_header": ["period", "word", "sum", "average"],
        "csv_rows": rows,
    }
    _emit(payload, args)
    return EXIT_OK


def _cmd_classify(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    report = orbits.spectrum(sft, f, args.n_max, threads=args.threads)
    cls = orbits.classify_observable(report)
    payload = {
        "command": "classify",
        "kind": cls.kind,
        "n_max": cls.n_max,
        "definitive": cls.definitive,
    }
    if cls.kind == "dispersed":
        payload["positive_witness"] = cls.positive_witness.word_str
        payload["negative_witness"] = cls.negative_witness.word_str
    else:
        payload["sign"] = cls.sign
    if f.is_exact:
        verdict = orbits.arithmetic_test(report)
        payload["arithmetic"] = {
            "kind": verdict.kind,
            "definitive": verdict.definitive,
        }
        if verdict.c is not None:
            payload["arithmetic"]["c"] = value_token(verdict.c)
        if verdict.witness_pair is not None:
            payload["arithmetic"]["witnesses"] = [
                o.word_str for o in verdict.witness_pair
            ]
    _emit(payload, args)
    return EXIT_OK


def _cmd_density(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    report = orbits.spectrum(sft, f, args.n_max, threads=args.threads)
    probe = orbits.density_probe(report, Fraction(args.lo), Fraction(args.hi), args.bins)
    payload = {
        "command": "density",
        "lo": value_token(probe.lo),
        "hi": value_token(probe.hi),
        "n_max": probe.n_max,
        "bins": list(probe.bins),
        "largest_gap": {
            "left": value_token(probe.largest_gap[0]),
            "right": value_token(probe.largest_gap[1]),
            "width": value_token(probe.largest_gap[2]),
        },
    }
    _emit(payload, args)
    return EXIT_OK


def _cmd_avg(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    density = meanpath.average_spectrum_density(sft, f, args.n_max, args.bins)
    payload = {
        "command": "avg",
        "m": value_token(density.m),
        "M": value_token(density.M),
        "n_max": density.n_max,
        "degenerate": density.degenerate,
        "bins": list(density.bins),
        "largest_gap": {
            "left": value_token(density.largest_gap[0]),
            "right": value_token(density.largest_gap[1]),
            "width": value_token(density.largest_gap[2]),
        },
    }
    _emit(payload, args)
    return EXIT_OK


def _cmd_mean(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    low = meanpath.extremal_mean_cycle(sft, f, "min")
    high = meanpath.extremal_mean_cycle(sft, f, "max")
    payload = {
        "command": "mean",
        "m": value_token(low.value),
        "M": value_token(high.value),
        "min_witness": low.witness.word_str,
        "max_witness": high.witness.word_str,
    }
    _emit(payload, args)
    return EXIT_OK


def _cmd_livsic(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    if args.constant:
        verdict = livsic.cohomologous_to_constant(sft, f)
        if verdict.kind == "yes":
            payload = {
                "command": "livsic",
                "verdict": "cohomologous_to_constant",
                "c": value_token(verdict.c),
                "potential": {
                    "".join(map(str, k)): value_token(v)
                    for k, v in verdict.certificate.potential.items()
                },
            }
            _emit(payload, args)
            return EXIT_OK
        payload = {
            "command": "livsic",
            "verdict": "not_cohomologous_to_constant",
            "witnesses": [
                {"orbit": o.word_str, "average": value_token(a)}
                for o, a in verdict.witnesses
            ],
        }
        _emit(payload, args)
        return EXIT_NEGATIVE

    if args.dichotomy:
        verdict = livsic.boundedness_verdict(sft, f, args.n_max)
        if verdict.kind == "coboundary":
            payload = {
                "command": "livsic",
                "verdict": "coboundary",
                "growth": "identically zero",
            }
            _emit(payload, args)
            return EXIT_OK
        payload = {
            "command": "livsic",
            "verdict": "unbounded_evidence",
            "violating_cycle": verdict.violating_cycle.orbit.word_str,
            "violating_sum": value_token(verdict.violating_cycle.sum),
            "growth": [[p, value_token(g)] for p, g in verdict.growth],
        }
        _emit(payload, args)
        return EXIT_NEGATIVE

    result = livsic.solve_coboundary(sft, f)
    if isinstance(result, livsic.CoboundaryCertificate):
        payload = {
            "command": "livsic",
            "verdict": "coboundary",
            "verified": result.verified,
            "potential": {
                "".join(map(str, k)): value_token(v)
                for k, v in result.potential.items()
            },
        }
        _emit(payload, args)
        return EXIT_OK
    payload = {
        "command": "livsic",
        "verdict": "violating_cycle",
        "orbit": result.orbit.word_str,
        "sum": value_token(result.sum),
    }
    _emit(payload, args)
    return EXIT_NEGATIVE


def _cmd_glue(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    p = PeriodicOrbit.canonical(parse_word(args.p), sft)
    q = PeriodicOrbit.canonical(parse_word(args.q), sft)
    if not (p.admissible and q.admissible):
        raise InputError("glue requires admissible orbit words")
    rows = gluing.verify_gluing_estimate(
        sft, f, p, q, Fraction(args.beta), range(args.n_from, args.n_to + 1))
    table = [
        (r.n, r.m, value_token(r.sum), value_token(r.predicted),
         value_token(r.residual)) for r in rows
    ]
    payload = {
        "command": "glue",
        "p": p.word_str,
        "q": q.word_str,
        "beta": args.beta,
        "rows": [
            {"n": r.n, "m": r.m, "sum": value_token(r.sum),
             "predicted": value_token(r.predicted),
             "residual": value_token(r.residual),
             "stabilized": r.stabilized, "ok": r.ok}
            for r in rows
        ],
        "csv_header": ["n", "m", "sum", "predicted", "residual"],
        "csv_rows": table,
    }
    _emit(payload, args)
    return EXIT_OK if all(r.ok or not r.stabilized for r in rows) else EXIT_NEGATIVE


def _cmd_hit(args) -> int:
    sft, f, _, alpha_square = build_system(load_config(args.config))
    target = parse_field_value(args.target, alpha_square)
    result = gluing.hit_target(sft, f, target, Fraction(args.eps), horizon=args.horizon)
    payload = {
        "command": "hit",
        "target": value_token(target),
        "eps": args.eps,
        "orbit": result.orbit.word_str,
        "sum": value_token(result.sum),
        "deterministic_part": value_token(result.deterministic_part),
        "p": result.p.word_str,
        "q": result.q.word_str,
        "m": result.m,
        "n": result.n,
    }
    _emit(payload, args)
    return EXIT_OK


def _lemma_args(args) -> dict:
    text = args.json
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"lemma arguments are not valid JSON: {exc}") from exc


def _cmd_lemma_lattice_gap(args) -> int:
    doc = _lemma_args(args)
    d = int(doc.get("alpha_square", DEFAULT_ALPHA_SQUARE))
    a = parse_field_value(str(doc["a"]), d)
    b = parse_field_value(str(doc["b"]), d)
    try:
        gap = numtheory.lattice_gap(a, b)
    except IrrationalRatio:
        _emit({"command": "lemma-lattice-gap", "verdict": "irrational_ratio",
               "infimum": "0"}, args)
        return EXIT_NEGATIVE
    rel = numtheory.RationalRelation.from_pair(a, b)
    _emit({"command": "lemma-lattice-gap", "gap": value_token(gap),
           "l": rel.l, "k": rel.k}, args)
    return EXIT_OK


def _cmd_lemma_independence(args) -> int:
    doc = _lemma_args(args)
    d = int(doc.get("alpha_square", DEFAULT_ALPHA_SQUARE))
    seq = [parse_field_value(str(t), d) for t in doc["seq"]]
    b = parse_field_value(str(doc["b"]), d)
    verdict = numtheory.asymptotic_independence(seq, b)
    payload = {
        "command": "lemma-independence",
        "independent": verdict.independent,
        "n": verdict.n,
        "denominators": list(verdict.denominators),
        "gaps": [value_token(g) for g in verdict.gaps],
    }
    if not verdict.independent:
        payload["c"] = value_token(verdict.c)
        payload["s_list"] = list(verdict.s_list)
        payload["t"] = verdict.t
    _emit(payload, args)
    return EXIT_OK if verdict.independent else EXIT_NEGATIVE


def _cmd_lemma_find_beta(args) -> int:
    doc = _lemma_args(args)
    d = int(doc.get("alpha_square", DEFAULT_ALPHA_SQUARE))
    a = parse_field_value(str(doc["a"]), d)
    b = parse_field_value(str(doc["b"]), d)
    cs = [parse_field_value(str(t), d) for t in doc["c_list"]]
    beta = numtheory.find_beta(a, b, cs)
    _emit({"command": "lemma-find-beta", "beta": value_token(beta)}, args)
    return EXIT_OK


def _cmd_lemma_pigeonhole(args) -> int:
    doc = _lemma_args(args)
    index, density = numtheory.pigeonhole_density(
        [list(map(int, s)) for s in doc["sets"]], int(doc["n0"]), int(doc["N"]))
    _emit({"command": "lemma-pigeonhole", "index": index,
           "density": value_token(density)}, args)
    return EXIT_OK


def _cmd_lemma_equidist(args) -> int:
    doc = _lemma_args(args)
    d = int(doc.get("alpha_square", DEFAULT_ALPHA_SQUARE))
    slope = parse_field_value(str(doc["alpha_slope"]), d)
    theta = parse_field_value(str(doc.get("theta", "0")), d)
    witness = numtheory.equidist_witness(
        slope, theta, [int(x) for x in doc["set"]], Fraction(str(doc["gamma"])))
    frac_display = float((slope * witness + theta).frac())
    _emit({"command": "lemma-equidist", "witness": witness,
           "frac_display": frac_display}, args)
    return EXIT_OK


def _cmd_lemma_dispersion(args) -> int:
    doc = _lemma_args(args)
    d = int(doc.get("alpha_square", DEFAULT_ALPHA_SQUARE))
    witness = numtheory.dispersion_witness(
        parse_field_value(str(doc["a"]), d),
        parse_field_value(str(doc["b"]), d),
        parse_field_value(str(doc["c"]), d),
        Fraction(str(doc["beta"])),
        {int(k): int(v) for k, v in doc["G"].items()},
        [int(x) for x in doc["T"]],
        parse_field_value(str(doc["A"]), d),
        parse_field_value(str(doc["delta"]), d),
    )
    _emit({"command": "lemma-dispersion", "witness": witness}, args)
    return EXIT_OK


def _cmd_lemma_nonarith_beta(args) -> int:
    sft, f, _, _ = build_system(load_config(args.config))
    doc = _lemma_args(args)
    report = orbits.spectrum(sft, f, int(doc.get("n_max", 8)))
    shift = numtheory.find_nonarithmetic_beta(
        report, Fraction(str(doc["lo"])), Fraction(str(doc["hi"])))
    _emit({
        "command": "lemma-nonarith-beta",
        "beta": value_token(shift.beta),
        "orbit1": shift.orbit1.word_str,
        "orbit2": shift.orbit2.word_str,
        "u": value_token(shift.u),
        "v": value_token(shift.v),
    }, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def _default_threads() -> int:
    env = os.environ.get("BIRKHOFF_LAB_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="birkhoff-lab",
        description="Exact Birkhoff spectra over subshifts of finite type",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required,
                       help="JSON system description")
        p.add_argument("--output", default=None, help="write the report here")
        p.add_argument("--format", default="json", choices=["json", "csv"])
        p.add_argument("--threads", type=int, default=_default_threads())

    p = sub.add_parser("spectrum", help="enumerate sums up to a period bound")
    common(p)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)

    p = sub.add_parser("classify", help="dispersed/concentrated and arithmetic tests")
    common(p)
    p.add_argument("--n-max", dest="n_max", type=int, default=8)

    p = sub.add_parser("density", help="bin spectrum values over an interval")
    common(p)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    p.add_argument("--bins", type=int, required=True)

    p = sub.add_parser("avg", help="average-spectrum histogram over [m(f), M(f)]")
    common(p)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--bins", type=int, required=True)

    p = sub.add_parser("mean", help="exact extremal Birkhoff averages")
    common(p)

    p = sub.add_parser("livsic", help="coboundary decision with certificate or witness")
    common(p)
    p.add_argument("--constant", action="store_true",
                   help="test cohomology to a constant instead of to zero")
    p.add_argument("--dichotomy", action="store_true",
                   help="report the bounded-or-unbounded dichotomy evidence")
    p.add_argument("--n-max", dest="n_max", type=int, default=12)

    p = sub.add_parser("glue", help="verify the exact gluing estimate table")
    common(p)
    p.add_argument("--p", required=True, help="first orbit word")
    p.add_argument("--q", required=True, help="second orbit word")
    p.add_argument("--beta", required=True, help="rational block ratio, e.g. 1/2")
    p.add_argument("--n-from", dest="n_from", type=int, required=True)
    p.add_argument("--n-to", dest="n_to", type=int, required=True)

    p = sub.add_parser("hit", help="glue orbits to hit a target sum window")
    common(p)
    p.add_argument("--target", required=True, help="target value token")
    p.add_argument("--eps", required=True, help="rational half-width parameter")
    p.add_argument("--horizon", type=int, default=16)

    for name in ("lemma-lattice-gap", "lemma-independence", "lemma-find-beta",
                 "lemma-pigeonhole", "lemma-equidist", "lemma-dispersion"):
        p = sub.add_parser(name, help="number-theory procedure on JSON arguments")
        common(p, config_required=False)
        p.add_argument("--json", required=True,
                       help="inline JSON arguments, or @file")

    p = sub.add_parser("lemma-nonarith-beta",
                       help="find a shift making the spectrum non-arithmetic")
    common(p)
    p.add_argument("--json", required=True)

    return parser


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "classify": _cmd_classify,
    "density": _cmd_density,
    "avg": _cmd_avg,
    "mean": _cmd_mean,
    "livsic": _cmd_livsic,
    "glue": _cmd_glue,
    "hit": _cmd_hit,
    "lemma-lattice-gap": _cmd_lemma_lattice_gap,
    "lemma-independence": _cmd_lemma_independence,
    "lemma-find-beta": _cmd_lemma_find_beta,
    "lemma-pigeonhole": _cmd_lemma_pigeonhole,
    "lemma-equidist": _cmd_lemma_equidist,
    "lemma-dispersion": _cmd_lemma_dispersion,
    "lemma-nonarith-beta": _cmd_lemma_nonarith_beta,
}


def execute(argv) -> int:
    """Run one command; report artifacts and the exit-code discipline live here."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return _DISPATCH[args.command](args)
    except (ConfigError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IrrationalRatio as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, NotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"io failure: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(execute(sys.argv[1:]))


if __name__ == "__main__":
    main()
