"""Command-line interface.

Subcommands: sample, test, lb, sweep, power.  Decisions map to the exit
code (0 accept, 1 reject) so the tool composes in shell pipelines;
usage and configuration problems exit 2, runtime failures exit 3.
Every randomized command takes --seed and defaults it to 0, never to
entropy: reruns are byte-identical unless the user opts into new seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    IerTestError,
    MatrixFormatError,
    RangeError,
    AsymmetryError,
    SampleSizeError,
    TooLargeToEnumerate,
)
from .frobenius import thm1_test, thm3_test
from .harness import (
    POWER_COLUMNS,
    SWEEP_COLUMNS,
    SweepConfig,
    TEST_IDS,
    power_curve,
    sweep,
)
from .io import (
    read_population,
    read_prob_matrix,
    write_population,
    write_rows_csv,
)
from .lower_bounds import (
    brute_force_chi_square,
    chi_square_thm2,
    chi_square_thm5_upper,
    critical_gamma_thm2,
    critical_gamma_thm5,
    risk_lower_bound_from_chi,
    thm2_alt_family,
    thm2_null_pair,
    thm5_alt_family,
)
from .model import sample_population
from .operator import thm4_test, thm6_test
from .permutation import permutation_test
from .rng import RngStream

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3

_USAGE_ERRORS = (
    ConfigError,
    MatrixFormatError,
    DomainError,
    DimensionError,
    RangeError,
    AsymmetryError,
    SampleSizeError,
    TooLargeToEnumerate,
    ValueError,
)

CLI_TESTS = ("thm1", "thm3", "thm4", "thm6", "perm-t1", "perm-t2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iertest",
        description="Two-sample tests for populations of random graphs "
        "on a common vertex set.",
    )
    parser.add_argument("--version", action="version", version=f"iertest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="sample a graph population from a model")
    p_sample.add_argument("--model", required=True, help="edge-probability matrix CSV")
    p_sample.add_argument("--m", type=int, required=True, help="number of graphs")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out", required=True, help="output population directory")

    p_test = sub.add_parser("test", help="run a two-sample test on two populations")
    p_test.add_argument("--test", required=True, choices=CLI_TESTS)
    p_test.add_argument("--pop-g", required=True, help="first population directory")
    p_test.add_argument("--pop-h", required=True, help="second population directory")
    p_test.add_argument(
        "--eta",
        type=float,
        required=True,
        help="risk budget (significance level alpha for perm-* tests)",
    )
    p_test.add_argument("--B", type=int, default=99, help="permutation replicates")
    p_test.add_argument("--seed", type=int, default=0)
    p_test.add_argument("--json", action="store_true", help="emit the full outcome as JSON")

    p_lb = sub.add_parser("lb", help="indistinguishability bounds for the hard families")
    p_lb.add_argument("--family", required=True, choices=("thm2", "thm5"))
    p_lb.add_argument("--n", type=int, required=True)
    p_lb.add_argument("--m", type=int, required=True)
    p_lb.add_argument("--p", type=float, required=True)
    p_lb.add_argument("--gamma", type=float, required=True)
    p_lb.add_argument("--eta", type=float, default=0.5)
    p_lb.add_argument(
        "--brute-force",
        action="store_true",
        help="also enumerate every outcome exactly (tiny instances only)",
    )

    for name, help_text in (
        ("sweep", "Monte Carlo rejection-rate sweep over a parameter grid"),
        ("power", "empirical power curve along a separation family"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if name == "sweep":
            p.add_argument("--start-cell", type=int, default=0, help="resume at this cell")

    return parser


def _cmd_sample(args) -> int:
    model = read_prob_matrix(args.model)
    if args.m < 1:
        raise ConfigError(f"--m must be >= 1, got {args.m}")
    pop = sample_population(model, args.m, RngStream(args.seed))
    write_population(pop, args.out, seed=args.seed)
    print(f"wrote {pop.m} graphs on {pop.n} vertices to {args.out}")
    return EXIT_ACCEPT


def _cmd_test(args) -> int:
    pop_g = read_population(args.pop_g)
    pop_h = read_population(args.pop_h)
    test_id = args.test
    try:
        if test_id == "thm1":
            outcome = thm1_test(pop_g, pop_h, args.eta)
        elif test_id == "thm3":
            outcome = thm3_test(pop_g, pop_h, args.eta)
        elif test_id == "thm4":
            outcome = thm4_test(pop_g, pop_h, args.eta)
        elif test_id == "thm6":
            outcome = thm6_test(pop_g, pop_h, args.eta)
        else:
            statistic = "t1" if test_id == "perm-t1" else "t2"
            outcome = permutation_test(
                pop_g, pop_h, statistic, args.eta, args.B, RngStream(args.seed)
            )
    except SampleSizeError as exc:
        raise SampleSizeError(
            f"{exc} The one-graph-per-population problem admits no valid test "
            "under the Frobenius separation at any useful scale; the "
            "operator-norm tests (thm4, thm6, perm-t2) support m = 1."
        ) from exc

    if outcome.failed:
        print("spectral computation did not converge; no decision", file=sys.stderr)
        print(json.dumps(outcome.to_dict(), sort_keys=True), file=sys.stderr)
        return EXIT_RUNTIME

    if args.json:
        print(json.dumps(outcome.to_dict(), indent=2, sort_keys=True))
    else:
        print(f"test: {outcome.test}")
        print(f"statistic: {outcome.statistic!r}")
        for name, value in outcome.thresholds.items():
            print(f"threshold {name}: {value!r}")
        for name, value in outcome.indicators.items():
            print(f"indicator {name}: {value}")
        print(f"decision: {'reject' if outcome.reject else 'accept'}")
    return EXIT_REJECT if outcome.reject else EXIT_ACCEPT


def _cmd_lb(args) -> int:
    n, m, p, gamma, eta = args.n, args.m, args.p, args.gamma, args.eta
    print(f"family: {args.family}  n={n} m={m} p={p!r} gamma={gamma!r}")
    if args.family == "thm2":
        chi = chi_square_thm2(n, m, p, gamma)
        print(f"chi_square (exact): {chi!r}")
        print(f"risk_lower_bound: {risk_lower_bound_from_chi(chi)!r}")
        print(f"critical_gamma (eta={eta!r}): {critical_gamma_thm2(n, m, p, eta)!r}")
    else:
        chi = chi_square_thm5_upper(n, m, p, gamma)
        print(f"chi_square (bound): {chi!r}")
        print(f"risk_lower_bound (from bound): {risk_lower_bound_from_chi(chi)!r}")
        print(f"critical_gamma (eta={eta!r}): {critical_gamma_thm5(n, m, p, eta)!r}")
    if args.brute_force:
        theta0 = thm2_null_pair(n, p)
        if gamma == 0.0:
            print("brute_force: 1.0 (gamma = 0 makes every alternative the null)")
        else:
            family = (
                thm2_alt_family(n, p, gamma)
                if args.family == "thm2"
                else thm5_alt_family(n, p, gamma)
            )
            exact = brute_force_chi_square(theta0, family, m)
            print(f"brute_force chi_square: {exact!r}")
    return EXIT_ACCEPT


def _load_json_config(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc


def _cmd_sweep(args) -> int:
    doc = _load_json_config(args.config)
    if args.seed is not None:
        doc["seed"] = args.seed
    config = SweepConfig.from_dict(doc)
    rows = sweep(config, threads=args.threads, start_cell=args.start_cell)
    write_rows_csv(rows, SWEEP_COLUMNS, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_ACCEPT


_POWER_REQUIRED = ("test", "family", "n", "m", "eta", "s_values", "trials")


def _cmd_power(args) -> int:
    doc = _load_json_config(args.config)
    if args.seed is not None:
        doc["seed"] = args.seed
    for key in _POWER_REQUIRED:
        if key not in doc:
            raise ConfigError(f"power config is missing required field {key!r}")
    unknown = set(doc) - set(_POWER_REQUIRED) - {"seed", "B", "family_args"}
    if unknown:
        raise ConfigError(f"power config has unknown fields: {sorted(unknown)}")
    test_id = str(doc["test"])
    if test_id not in TEST_IDS:
        raise ConfigError(f"unknown test id {test_id!r}; known: {TEST_IDS}")
    rows = power_curve(
        test_id=test_id,
        family=str(doc["family"]),
        s_values=[float(s) for s in doc["s_values"]],
        n=int(doc["n"]),
        m=int(doc["m"]),
        eta=float(doc["eta"]),
        trials=int(doc["trials"]),
        seed=int(doc.get("seed", 0)),
        B=int(doc.get("B", 99)),
        family_args=dict(doc.get("family_args", {})),
        threads=args.threads,
    )
    write_rows_csv(rows, POWER_COLUMNS, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_ACCEPT


_COMMANDS = {
    "sample": _cmd_sample,
    "test": _cmd_test,
    "lb": _cmd_lb,
    "sweep": _cmd_sweep,
    "power": _cmd_power,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, IerTestError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
