"""Command-line front end: constants tables, check suites, envelope scans, search.

Every output embeds the tool version, the full configuration, and the
seed; re-running with an identical configuration reproduces identical
numeric content.  JSON is the canonical machine format and CSV is a
projection with `#` metadata comment lines.  Exit codes: 0 all checks
pass, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .constants import (
    bh_multilinear_constant,
    hypercontractive_bound,
    rho,
    s_k,
    scalar_bh_best,
    subexp_envelope,
)
from .polynomials import SymmetricForm, random_polynomial, serialize
from .spaces import AtomicFunctionSpace, LinearOperator, serialize_operator
from .verification import (
    check_blei,
    check_coeff_lemma,
    check_hilbert_lattice,
    check_hypercontractive,
    check_multilinear_gt,
    check_scalar_bh,
    check_vector_bh,
    kahane_empirical,
    lower_bound_search,
    report_to_json,
    reports_to_csv,
)

__all__ = ["RunConfig", "main"]

SUITES = (
    "blei",
    "scalar-bh",
    "hypercontractive",
    "coeff-lemma",
    "vector-bh",
    "multilinear-gt",
    "hilbert-lattice",
    "kahane",
)

_SUITE_TRIALS = {
    "blei": 1000,
    "scalar-bh": 200,
    "hypercontractive": 100,
    "coeff-lemma": 100,
    "vector-bh": 50,
    "multilinear-gt": 50,
    "hilbert-lattice": 50,
    "kahane": 100_000,
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: the command plus every knob, all explicit."""

    command: str
    suite: str | None
    seed: int
    trials: int
    samples: int
    budget: int
    grid: int | None
    eps: float
    m: str
    n: int
    r: float
    t: float
    k: int | None
    output_format: str
    output_path: str | None


def _config_dict(config: RunConfig) -> dict:
    return asdict(config)


def _metadata_lines(config: RunConfig) -> str:
    payload = json.dumps(_config_dict(config), sort_keys=True)
    return f"# version={__version__}\n# config={payload}\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _trial_seed(seed: int, index: int) -> int:
    # Disjoint per-trial streams for any base seed below the multiplier.
    return seed * 1_000_003 + index


def _parse_m_range(text: str) -> range:
    if ":" in text:
        lo_text, hi_text = text.split(":", 1)
        lo, hi = int(lo_text), int(hi_text)
        return range(lo, hi + 1)
    value = int(text)
    return range(value, value + 1)


def cmd_constants(config: RunConfig) -> int:
    """One row per m: the hypercontractive, best-split, and m-linear constants."""
    m_range = _parse_m_range(config.m)
    if m_range and m_range.start < 1:
        raise ValueError(f"need m >= 1, got {m_range.start}")
    rows = []
    for m in m_range:
        if m >= 2:
            k_star, best = scalar_bh_best(m)
            best_value = best.value
        else:
            k_star, best_value = None, 1.0
        split = config.k if config.k is not None else k_star
        rows.append(
            {
                "m": m,
                "hypercontractive": hypercontractive_bound(m),
                "scalar_bh_best": best_value,
                "k_star": k_star,
                "bh_multilinear": bh_multilinear_constant(m, config.t),
                "rho": rho(m, config.r, 2.0),
                "s_k": None if split is None else s_k(split, config.r),
            }
        )
    columns = ("m", "hypercontractive", "scalar_bh_best", "k_star",
               "bh_multilinear", "rho", "s_k")
    if config.output_format == "json":
        payload = {
            "version": __version__,
            "config": _config_dict(config),
            "rows": rows,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", config.output_path)
    else:
        lines = [_metadata_lines(config) + ",".join(columns)]
        for row in rows:
            lines.append(",".join("" if row[c] is None else repr(row[c]) if
                                  isinstance(row[c], float) else str(row[c])
                                  for c in columns))
        _emit("\n".join(lines) + "\n", config.output_path)
    return 0


def _random_operator(seed: int, source: AtomicFunctionSpace,
                     target: AtomicFunctionSpace) -> LinearOperator:
    rng = np.random.default_rng(seed)
    shape = (target.atoms, source.atoms)
    matrix = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / 2.0
    return LinearOperator(source, target, matrix)


def _suite_blei(config: RunConfig) -> list:
    shapes = [(m, n) for m in (2, 3, 4) for n in (2, 3)]
    pairs = ((1.0, 2.0), (4.0 / 3.0, 2.0), (2.0, 2.0), (1.5, 3.0))
    out = []
    for i in range(config.trials):
        m, n = shapes[i % len(shapes)]
        s, q = pairs[(i // len(shapes)) % len(pairs)]
        k = 1 + i % m
        rng = np.random.default_rng(_trial_seed(config.seed, i))
        a = rng.standard_normal((n,) * m) + 1j * rng.standard_normal((n,) * m)
        out.append((check_blei(a, k, s, q), {"tensor_shape": list(a.shape)}))
    return out


def _suite_scalar_bh(config: RunConfig) -> list:
    shapes = [(m, n) for m in (1, 2, 3, 4) for n in (2, 3, 5)]
    out = []
    for i in range(config.trials):
        m, n = shapes[i % len(shapes)]
        t = _trial_seed(config.seed, i)
        P = random_polynomial(n, m, 1, "steinhaus", t)
        k = scalar_bh_best(m)[0] if m >= 2 else None
        report = check_scalar_bh(P, k, grid_per_axis=config.grid)
        out.append((report, {"polynomial": json.loads(serialize(P))}))
    return out


def _suite_hypercontractive(config: RunConfig) -> list:
    shapes = [(m, n) for m in (1, 2, 3) for n in (1, 2, 3)]
    pairs = ((1.0, 2.0), (2.0, 4.0))
    out = []
    for i in range(config.trials):
        m, n = shapes[i % len(shapes)]
        p, q = pairs[i % len(pairs)]
        t = _trial_seed(config.seed, i)
        P = random_polynomial(n, m, 1, "gaussian", [t, 1])
        report = check_hypercontractive(P, p, q, config.samples, t)
        out.append((report, {"polynomial": json.loads(serialize(P))}))
    return out


def _suite_coeff_lemma(config: RunConfig) -> list:
    shapes = [(m, n) for m in (1, 2, 3) for n in (2, 3)]
    dims = (1, 2, 3)
    ps = (1.0, 2.0)
    out = []
    for i in range(config.trials):
        m, n = shapes[i % len(shapes)]
        d = dims[i % len(dims)]
        p = ps[(i // len(dims)) % len(ps)]
        t = _trial_seed(config.seed, i)
        rng = np.random.default_rng(t)
        X = AtomicFunctionSpace(0.5 + rng.random(d), 2.0)
        P = random_polynomial(n, m, d, "gaussian", [t, 1])
        report = check_coeff_lemma(P, X, p, 2.0, config.samples, t)
        out.append((report, {"polynomial": json.loads(serialize(P)),
                             "weights": list(X.weights)}))
    return out


def _suite_vector_bh(config: RunConfig) -> list:
    Y = AtomicFunctionSpace(np.ones(3), 1.0)
    X = AtomicFunctionSpace(np.ones(2), 2.0)
    ms = (2, 3)
    out = []
    for i in range(config.trials):
        m = ms[i % len(ms)]
        n = 2 + (i // 2) % 2
        k = 1 + (i // 4) % m
        t = _trial_seed(config.seed, i)
        v = _random_operator(t, Y, X)
        P = random_polynomial(n, m, 3, "gaussian", [t, 1])
        report = check_vector_bh(P, v, 1.0, k, seed=t, grid_per_axis=config.grid)
        out.append((report, {"polynomial": json.loads(serialize(P)),
                             "operator": json.loads(serialize_operator(v))}))
    return out


def _suite_multilinear_gt(config: RunConfig) -> list:
    Y = AtomicFunctionSpace(np.ones(3), 1.0)
    X = AtomicFunctionSpace(np.ones(2), 2.0)
    shapes = [(1, 2), (1, 3), (2, 2), (2, 3)]
    rs = (1.0, 1.5)
    out = []
    for i in range(config.trials):
        m, n = shapes[i % len(shapes)]
        r = rs[(i // len(shapes)) % len(rs)]
        t = _trial_seed(config.seed, i)
        K = math.comb(n + m - 1, m)
        rng = np.random.default_rng([t, 1])
        values = (rng.standard_normal((K, 3)) + 1j * rng.standard_normal((K, 3))) / 2.0
        T = SymmetricForm(n, m, 3, values)
        v = _random_operator(t, Y, X)
        report = check_multilinear_gt(T, v, r, seed=t)
        out.append((report, {"form_values_shape": [K, 3],
                             "operator": json.loads(serialize_operator(v))}))
    return out


def _suite_hilbert_lattice(config: RunConfig) -> list:
    Y = AtomicFunctionSpace(np.ones(3), 1.0)
    X = AtomicFunctionSpace(np.ones(2), 2.0)
    ms = (2, 3)
    rs = (1.0, 4.0 / 3.0)
    out = []
    for i in range(config.trials):
        m = ms[i % len(ms)]
        n = 2 + (i // 2) % 2
        k = 1 + (i // 4) % m
        r = rs[(i // 8) % len(rs)]
        t = _trial_seed(config.seed, i)
        v = _random_operator(t, Y, X)
        P = random_polynomial(n, m, 3, "gaussian", [t, 1])
        report = check_hilbert_lattice(P, v, r, k, seed=t, grid_per_axis=config.grid)
        out.append((report, {"polynomial": json.loads(serialize(P)),
                             "operator": json.loads(serialize_operator(v))}))
    return out


def _suite_kahane(config: RunConfig) -> list:
    out = []
    for i, d in enumerate((2, 4, 8)):
        space = AtomicFunctionSpace(np.ones(d), 2.0)
        basis = np.eye(d, dtype=np.complex128)
        t = _trial_seed(config.seed, i)
        report = kahane_empirical(space, basis, 1.0, config.trials, t)
        out.append((report, {"atoms": d}))
    return out


_SUITE_RUNNERS = {
    "blei": _suite_blei,
    "scalar-bh": _suite_scalar_bh,
    "hypercontractive": _suite_hypercontractive,
    "coeff-lemma": _suite_coeff_lemma,
    "vector-bh": _suite_vector_bh,
    "multilinear-gt": _suite_multilinear_gt,
    "hilbert-lattice": _suite_hilbert_lattice,
    "kahane": _suite_kahane,
}


def cmd_verify(config: RunConfig) -> int:
    """Run one suite; exit 0 iff every check passes."""
    results = _SUITE_RUNNERS[config.suite](config)
    reports = [report for report, _ in results]
    if config.output_format == "json":
        payload = {
            "version": __version__,
            "config": _config_dict(config),
            "reports": [json.loads(report_to_json(r)) for r in reports],
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", config.output_path)
    else:
        _emit(_metadata_lines(config) + reports_to_csv(reports), config.output_path)
    failures = [
        {"index": i, "report": json.loads(report_to_json(report)), "witness": witness}
        for i, (report, witness) in enumerate(results)
        if not report.passed
    ]
    if failures:
        stem = config.output_path if config.output_path else config.suite
        witness_path = f"{stem}.failures.json"
        payload = {
            "version": __version__,
            "config": _config_dict(config),
            "failures": failures,
        }
        Path(witness_path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        sys.stderr.write(
            f"{len(failures)} of {len(results)} checks failed; "
            f"witnesses in {witness_path}\n"
        )
        return 1
    return 0


def cmd_envelope(config: RunConfig) -> int:
    """Print kappa, m*, the tail flag, and the per-m ratio series."""
    m_max = int(config.m)
    report = subexp_envelope(config.eps, m_max)
    if config.output_format == "json":
        payload = {
            "version": __version__,
            "config": _config_dict(config),
            "kappa": report.kappa,
            "m_star": report.m_star,
            "tail_decreasing": report.tail_decreasing,
            "ratios": list(report.ratios),
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", config.output_path)
    else:
        lines = [
            _metadata_lines(config)
            + f"# kappa={report.kappa!r}\n"
            + f"# m_star={report.m_star}\n"
            + f"# tail_decreasing={report.tail_decreasing}\n"
            + "m,ratio"
        ]
        for i, ratio in enumerate(report.ratios):
            lines.append(f"{i + 2},{ratio!r}")
        _emit("\n".join(lines) + "\n", config.output_path)
    return 0


def cmd_search(config: RunConfig) -> int:
    """Search lower bound versus the proved constant, with a witness file."""
    m = int(config.m)
    best_ratio, witness = lower_bound_search(m, config.n, config.budget, config.seed)
    upper = 1.0 if m == 1 else scalar_bh_best(m)[1].value
    gap = upper - best_ratio
    if config.output_path:
        witness_path = f"{config.output_path}.witness.json"
    else:
        witness_path = f"search-witness-m{m}-n{config.n}.json"
    witness_payload = {
        "version": __version__,
        "config": _config_dict(config),
        "best_ratio": best_ratio,
        "polynomial": json.loads(serialize(witness)),
    }
    Path(witness_path).write_text(
        json.dumps(witness_payload, sort_keys=True, indent=2) + "\n"
    )
    if config.output_format == "json":
        payload = {
            "version": __version__,
            "config": _config_dict(config),
            "best_ratio": best_ratio,
            "upper": upper,
            "gap": gap,
            "witness_path": witness_path,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", config.output_path)
    else:
        _emit(
            _metadata_lines(config)
            + "best_ratio,upper,gap,witness_path\n"
            + f"{best_ratio!r},{upper!r},{gap!r},{witness_path}\n",
            config.output_path,
        )
    return 0


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"need a nonnegative integer, got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_nonnegative_int, default=0,
                        help="base seed; all randomness derives from it (default 0)")
    common.add_argument("--trials", type=int, default=None,
                        help="instance count (verify) or sign draws (kahane)")
    common.add_argument("--samples", type=int, default=20_000,
                        help="Monte Carlo samples per torus norm estimate")
    common.add_argument("--budget", type=int, default=8,
                        help="restart budget for search and ascent")
    common.add_argument("--grid", type=int, default=None,
                        help="per-axis phase grid override (default: auto)")
    common.add_argument("--eps", type=float, default=0.2,
                        help="envelope growth rate epsilon")
    common.add_argument("--m", default=None,
                        help="degree: single integer, or lo:hi range for constants")
    common.add_argument("--n", type=int, default=2, help="number of variables")
    common.add_argument("--r", type=float, default=1.0, help="summing index r in [1,2)")
    common.add_argument("--t", type=float, default=1.0, help="multilinear index t")
    common.add_argument("--k", type=int, default=None,
                        help="split size k (default: the best split)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        dest="output_format", help="output format (default csv)")
    common.add_argument("--out", default=None, dest="output_path",
                        help="output path (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="bhkit",
        description="Constants, checks, and searches for polynomial "
        "Bohnenblust-Hille-type inequalities.",
    )
    parser.add_argument("--version", action="version", version=f"bhkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common],
                   help="table of bound constants over a range of degrees")
    verify = sub.add_parser("verify", parents=[common],
                            help="run a randomized check suite")
    verify.add_argument("suite", choices=SUITES)
    sub.add_parser("envelope", parents=[common],
                   help="subexponential envelope scan")
    sub.add_parser("search", parents=[common],
                   help="lower-bound search against the proved constant")
    return parser


_M_DEFAULTS = {"constants": "1:8", "envelope": "500", "search": "2"}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    suite = getattr(args, "suite", None)
    m = args.m if args.m is not None else _M_DEFAULTS.get(args.command, "2")
    trials = args.trials
    if trials is None:
        trials = _SUITE_TRIALS[suite] if suite else 0
    config = RunConfig(
        command=args.command,
        suite=suite,
        seed=args.seed,
        trials=trials,
        samples=args.samples,
        budget=args.budget,
        grid=args.grid,
        eps=args.eps,
        m=str(m),
        n=args.n,
        r=args.r,
        t=args.t,
        k=args.k,
        output_format=args.output_format,
        output_path=args.output_path,
    )
    # Validate everything the CLI owns here so usage mistakes exit 2;
    # errors past this point are bugs and crash loudly.
    try:
        m_range = _parse_m_range(config.m)
    except ValueError:
        parser.error(f"bad --m value {config.m!r}: expected an integer or lo:hi")
    if config.command == "constants" and m_range and m_range.start < 1:
        parser.error(f"need m >= 1, got {m_range.start}")
    if config.command in ("envelope", "search") and len(m_range) != 1:
        parser.error(f"--m must be a single integer for {config.command}")
    if config.command == "envelope":
        if config.eps <= 0.0:
            parser.error(f"need --eps > 0, got {config.eps}")
        if m_range.start < 2:
            parser.error(f"need --m >= 2, got {m_range.start}")
    if config.command == "search":
        if m_range.start < 1 or config.n < 1:
            parser.error(f"need m >= 1 and n >= 1, got m={m_range.start}, n={config.n}")
        if config.budget < 1:
            parser.error(f"need --budget >= 1, got {config.budget}")
    if config.command == "verify" and config.trials < 1:
        parser.error(f"need --trials >= 1, got {config.trials}")
    if config.suite == "kahane" and config.trials < 2:
        parser.error(f"kahane needs --trials >= 2, got {config.trials}")
    handlers = {
        "constants": cmd_constants,
        "verify": cmd_verify,
        "envelope": cmd_envelope,
        "search": cmd_search,
    }
    return handlers[config.command](config)


if __name__ == "__main__":
    sys.exit(main())
