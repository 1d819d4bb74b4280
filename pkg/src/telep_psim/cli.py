"""telep_psim command-line helpers."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable, NoReturn

from .checks import CompositeCheck, check_names, default_checks
from .circuits.distributions import (
    pcliff_distribution,
    pcliff_prob,
    pcliff_support,
    telep_distribution,
    telep_prob,
)
from .circuits.falsifier import run_falsifier
from .circuits.models import CorrectionFn, CorrectionTable, PCliffInstance, TelepInstance
from .circuits.oracles import (
    ADVERSARIAL_STRATEGIES,
    CircuitTelepOracle,
    ConstantTelepOracle,
    PossibilisticOracle,
    SupportCheckedOracle,
    TableOracle,
    adversarial_oracle,
    honest_oracle,
)
from .circuits.statevector import pcliff_statevector_distribution, statevector_distribution
from .config import ToolkitConfig
from .errors import InvalidInputError, TelepPsimError
from .lightcone.analysis import analyze_lightcones
from .lightcone.block_circuit import BlockCircuit
from .reduction import (
    EmbeddingParams,
    algorithm_a,
    check_params_for_circuit,
    compute_q_correction,
    default_params,
    embed,
    params_for_circuit,
    verify_commuting_identity,
)
from .tomography import learn_stabilizer_run, learning_failure_bound
from .word_problems import (
    WordProblemInstance,
    learned_coset,
    parse_bits,
    solve_mod3,
    solve_parity,
    solve_word_problem,
)

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """One CLI invocation after flags are layered over the toolkit config."""

    command: str
    instance: str | None = None
    file: Path | None = None
    seed: int = 0
    budget: int = 64
    oracle: str = "honest"
    oracle_seed: int | None = None
    strategy: str = "hashed"
    correction: Path | None = None
    json_out: Path | None = None
    options: dict[str, Any] = field(default_factory=dict)
    toolkit: ToolkitConfig = field(default_factory=ToolkitConfig)

    @classmethod
    def from_args(cls, args: argparse.Namespace, toolkit: ToolkitConfig) -> RunConfig:
        common = {
            "command",
            "instance",
            "file",
            "seed",
            "budget",
            "oracle",
            "oracle_seed",
            "strategy",
            "correction",
            "json_out",
            "config",
            "log_level",
        }
        defaults = toolkit.run
        return cls(
            command=args.command,
            instance=args.instance,
            file=_optional_path(args.file),
            seed=defaults.seed if args.seed is None else args.seed,
            budget=defaults.budget if args.budget is None else args.budget,
            oracle=args.oracle or defaults.oracle,
            oracle_seed=args.oracle_seed,
            strategy=args.strategy or "hashed",
            correction=_optional_path(args.correction),
            json_out=_optional_path(args.json_out),
            options={key: value for key, value in vars(args).items() if key not in common},
            toolkit=toolkit,
        )


def _optional_path(value: str | Path | None) -> Path | None:
    return Path(value).expanduser().resolve() if value else None


def render_report(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_report(payload: dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(payload), encoding="utf-8")
    return path


def _read_json(path: Path) -> Any:
    if not path.exists():
        raise InvalidInputError(f"File not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"Invalid JSON in {path}: {exc}") from exc


def _load_payload(run_config: RunConfig) -> dict[str, Any]:
    if run_config.instance is not None:
        try:
            payload = json.loads(run_config.instance)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"Invalid --instance JSON: {exc}") from exc
    elif run_config.file is not None:
        payload = _read_json(run_config.file)
    else:
        raise InvalidInputError(f"{run_config.command} needs --instance or --file")
    if not isinstance(payload, dict):
        raise InvalidInputError("Instance JSON must be an object")
    return payload


def _load_correction(run_config: RunConfig) -> CorrectionFn | None:
    if run_config.correction is None:
        return None
    return CorrectionTable.from_dict(_read_json(run_config.correction))


def build_oracle(
    run_config: RunConfig, kind: str, correction: CorrectionFn | None = None
) -> PossibilisticOracle[Any, Any]:
    """Resolve ``--oracle`` into an oracle answering ``kind`` ("telep" or "pcliff") queries."""
    spec = run_config.oracle
    if spec.startswith("table:"):
        path = _optional_path(spec[len("table:"):])
        if path is None:
            raise InvalidInputError("--oracle table: needs a path")
        oracle: PossibilisticOracle[Any, Any] = TableOracle.load(path)
        if oracle.kind != kind:
            raise InvalidInputError(f"{spec} answers {oracle.kind} queries, need {kind}")
        return oracle
    if spec == "honest":
        return honest_oracle(kind, seed=run_config.oracle_seed, correction=correction)
    if spec == "adversarial":
        strategy_seed = run_config.seed if run_config.oracle_seed is None else run_config.oracle_seed
        return adversarial_oracle(
            kind,
            strategy_seed=strategy_seed,
            correction=correction,
            strategy=run_config.strategy,
        )
    if spec == "constant" and kind == "telep":
        return ConstantTelepOracle()
    raise InvalidInputError(f"Unknown oracle {spec!r} for {kind} queries")


def _nonzero(
    distribution: dict[Any, float], key: Callable[[Any], str], tol: float = 0.0
) -> dict[str, float]:
    return {key(item): prob for item, prob in distribution.items() if prob > tol}


def _simulate_telep_command(run_config: RunConfig) -> dict[str, Any]:
    inst = TelepInstance.from_dict(_load_payload(run_config))
    settings = run_config.toolkit.simulation
    oracle = SupportCheckedOracle(build_oracle(run_config, "telep"))
    answer = oracle(inst)
    report: dict[str, Any] = {
        "instance": inst.to_dict(),
        "oracle": oracle.inner.name,
        "answer": answer.key(),
        "probability": telep_prob(inst, answer),
    }
    if run_config.options.get("exhaustive"):
        exact = telep_distribution(inst)
        report["distribution"] = _nonzero(exact, lambda out: out.key())
        if run_config.options.get("statevector"):
            dense = statevector_distribution(inst, max_n=settings.statevector_max_n)
            report["statevector_max_deviation"] = max(abs(exact[o] - dense[o]) for o in exact)
    elif run_config.options.get("statevector"):
        dense = statevector_distribution(inst, max_n=settings.statevector_max_n)
        report["distribution"] = _nonzero(dense, lambda out: out.key(), settings.tolerance)
    return report


def _simulate_pcliff_command(run_config: RunConfig) -> dict[str, Any]:
    inst = PCliffInstance.from_dict(_load_payload(run_config))
    correction = _load_correction(run_config)
    oracle = SupportCheckedOracle(build_oracle(run_config, "pcliff", correction), correction)
    answer = oracle(inst)
    checked_q = oracle.correction
    report: dict[str, Any] = {
        "instance": inst.to_dict(),
        "oracle": oracle.inner.name,
        "answer": answer.name,
        "correction": checked_q(inst.cliffords).name,
        "probability": pcliff_prob(checked_q, inst, answer),
    }
    if run_config.options.get("exhaustive"):
        exact = pcliff_distribution(checked_q, inst)
        report["distribution"] = _nonzero(exact, lambda label: label.name)
        if run_config.options.get("statevector"):
            dense = pcliff_statevector_distribution(checked_q, inst)
            report["statevector_max_deviation"] = max(abs(exact[p] - dense[p]) for p in exact)
    return report


def _load_circuit(path: Path | None) -> BlockCircuit:
    if path is None:
        raise InvalidInputError("A circuit file is required")
    return BlockCircuit.from_dict(_read_json(path))


def _analyze_lightcone_command(run_config: RunConfig) -> dict[str, Any]:
    circuit = _load_circuit(run_config.file)
    windows = run_config.toolkit.lightcone
    report = analyze_lightcones(
        circuit,
        L=run_config.options.get("L"),
        divisor=windows.counting_window_divisor,
        signaling_factor=windows.signaling_factor,
    )
    payload: dict[str, Any] = {
        "circuit": {"n": circuit.n, "s": circuit.s, "k": circuit.k, "r": circuit.r},
        "lightcones": report.to_dict(include_sets=bool(run_config.options.get("sets"))),
        "meets_counting_bounds": report.meets_counting_bounds(),
    }
    if circuit.k == 5 and circuit.r == 2 and circuit.s == circuit.n:
        try:
            params = params_for_circuit(
                circuit,
                divisor=windows.reduction_window_divisor,
                signaling_factor=windows.signaling_factor,
            )
        except InvalidInputError as exc:
            payload["embedding_error"] = str(exc)
        else:
            payload["embedding"] = params.to_dict()
    return payload


def _reduce_command(run_config: RunConfig) -> dict[str, Any]:
    inst = PCliffInstance.from_dict(_load_payload(run_config))
    circuit_path = _optional_path(run_config.options.get("circuit"))
    windows = run_config.toolkit.lightcone
    params_text = run_config.options.get("params")
    circuit = _load_circuit(circuit_path) if circuit_path else None
    if params_text:
        try:
            params = EmbeddingParams.from_dict(json.loads(params_text))
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"Invalid --params JSON: {exc}") from exc
    elif circuit is not None:
        params = params_for_circuit(
            circuit,
            divisor=windows.reduction_window_divisor,
            signaling_factor=windows.signaling_factor,
        )
    else:
        params = default_params(inst.L)
    if params.L != inst.L:
        raise InvalidInputError(f"params have L={params.L}, instance has L={inst.L}")

    if circuit is not None:
        telep_oracle: PossibilisticOracle[Any, Any] = CircuitTelepOracle(circuit)
    else:
        telep_oracle = build_oracle(run_config, "telep")
    embedded = embed(inst, params)
    outcome = telep_oracle(embedded)
    answer = algorithm_a(params, outcome, inst.d)
    correction = compute_q_correction(params, outcome, inst.cliffords)
    report: dict[str, Any] = {
        "instance": inst.to_dict(),
        "params": params.to_dict(),
        "oracle": telep_oracle.name,
        "embedded": embedded.to_dict(),
        "telep_answer": outcome.key(),
        "answer": answer.name,
        "correction": correction.name,
        "valid": pcliff_support(lambda _: correction, inst, answer),
        "identity_holds": verify_commuting_identity(
            params, outcome, inst.cliffords, inst.d, tol=run_config.toolkit.simulation.tolerance
        ),
    }
    if circuit is not None:
        report["signaling_problems"] = check_params_for_circuit(
            circuit, params, windows.signaling_factor
        )
    return report


def _learn_stabilizers_command(run_config: RunConfig) -> dict[str, Any]:
    payload = _load_payload(run_config)
    if "cliffords" not in payload:
        raise InvalidInputError("learn-stabilizers needs 'cliffords'")
    inst = PCliffInstance.from_dict({"cliffords": payload["cliffords"], "d": 0})
    oracle = build_oracle(run_config, "pcliff", _load_correction(run_config))
    result = learn_stabilizer_run(
        oracle, inst.cliffords, budget=run_config.budget, rng=run_config.seed
    )
    report = result.to_dict()
    report.update(
        {
            "cliffords": [c.code for c in inst.cliffords],
            "oracle": oracle.name,
            "coset": list(learned_coset(*result.pair).images),
            "failure_bound": learning_failure_bound(run_config.budget),
        }
    )
    return report


def _bits_option(run_config: RunConfig) -> tuple[int, ...]:
    bits = run_config.options.get("bits")
    if bits is None:
        raise InvalidInputError(f"{run_config.command} needs --bits")
    return parse_bits(bits)


def _solve_parity_command(run_config: RunConfig) -> dict[str, Any]:
    bits = _bits_option(run_config)
    oracle = build_oracle(run_config, "pcliff", _load_correction(run_config))
    parity = solve_parity(oracle, bits, budget=run_config.budget, rng=run_config.seed)
    return {"bits": "".join(map(str, bits)), "oracle": oracle.name, "parity": parity}


def _solve_mod3_command(run_config: RunConfig) -> dict[str, Any]:
    bits = _bits_option(run_config)
    oracle = build_oracle(run_config, "pcliff", _load_correction(run_config))
    value = solve_mod3(oracle, bits, budget=run_config.budget, rng=run_config.seed)
    return {"bits": "".join(map(str, bits)), "oracle": oracle.name, "mod3": value}


def _word_problem_command(run_config: RunConfig) -> dict[str, Any]:
    wp = WordProblemInstance.from_dict(_load_payload(run_config))
    oracle = build_oracle(run_config, "pcliff", _load_correction(run_config))
    answer = solve_word_problem(oracle, wp, budget=run_config.budget, rng=run_config.seed)
    return {"instance": wp.to_dict(), "oracle": oracle.name, "answer": answer.value}


def _falsify_command(run_config: RunConfig) -> dict[str, Any]:
    settings = run_config.toolkit.falsify
    circuit_path = _optional_path(run_config.options.get("circuit"))
    if circuit_path is not None:
        candidate: PossibilisticOracle[Any, Any] = CircuitTelepOracle(_load_circuit(circuit_path))
    else:
        candidate = build_oracle(run_config, "telep")
    trials = run_config.options.get("trials")
    result = run_falsifier(
        candidate,
        settings.trials if trials is None else trials,
        seed=run_config.seed,
        n=run_config.options.get("n"),
        max_n=settings.max_n,
    )
    report = result.to_dict()
    report["candidate"] = candidate.name
    return report


def _verify_command(run_config: RunConfig) -> dict[str, Any]:
    toolkit = run_config.toolkit
    if run_config.options.get("quick"):
        toolkit = replace(toolkit, verify=toolkit.verify.quick())
    selected = run_config.options.get("only") or []
    unknown = sorted(set(selected) - set(check_names()))
    if unknown:
        raise InvalidInputError(f"Unknown checks: {', '.join(unknown)}")
    checks = [check for check in default_checks() if not selected or check.name in selected]
    result = CompositeCheck(checks).run(toolkit, run_config.seed)
    report = result.to_dict()
    report["checks"] = [check.name for check in checks]
    report["quick"] = bool(run_config.options.get("quick"))
    return report


COMMANDS: dict[str, Callable[[RunConfig], dict[str, Any]]] = {
    "simulate-telep": _simulate_telep_command,
    "simulate-pcliff": _simulate_pcliff_command,
    "analyze-lightcone": _analyze_lightcone_command,
    "reduce": _reduce_command,
    "learn-stabilizers": _learn_stabilizers_command,
    "solve-parity": _solve_parity_command,
    "solve-mod3": _solve_mod3_command,
    "word-problem": _word_problem_command,
    "falsify": _falsify_command,
    "verify": _verify_command,
}


def _failure(run_config: RunConfig, exc: TelepPsimError) -> tuple[int, dict[str, Any]]:
    logger.warning("%s failed: %s", run_config.command, exc)
    payload = exc.to_dict()
    payload.update({"command": run_config.command, "seed": run_config.seed})
    return exc.exit_code, payload


def run(run_config: RunConfig) -> tuple[int, dict[str, Any]]:
    """Execute one command; returns ``(exit_code, report)``.

    Errors from the library become an error report carrying their exit code.
    """
    handler = COMMANDS.get(run_config.command)
    if handler is None:
        error = InvalidInputError(f"Unknown command {run_config.command!r}")
        return error.exit_code, error.to_dict()
    try:
        report = handler(run_config)
    except TelepPsimError as exc:
        return _failure(run_config, exc)
    except (ValueError, TypeError, KeyError, OSError) as exc:
        # malformed payloads that slipped past the typed decoders
        return _failure(run_config, InvalidInputError(f"{type(exc).__name__}: {exc}"))
    report.update({"command": run_config.command, "seed": run_config.seed})
    if run_config.command in ("learn-stabilizers", "solve-parity", "solve-mod3", "word-problem"):
        report["budget"] = run_config.budget
    exit_code = 0
    if run_config.command == "verify" and not report["valid"]:
        exit_code = 1
    return exit_code, report


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--instance", help="Inline instance JSON.")
    parser.add_argument("--file", help="Instance (or circuit) JSON file.")
    parser.add_argument("--seed", type=int, help="Run seed (default from config, 0).")
    parser.add_argument("--budget", type=int, help="Learner draw budget (default 64).")
    parser.add_argument(
        "--oracle",
        help="honest | adversarial | constant | table:<path> (default from config).",
    )
    parser.add_argument(
        "--oracle-seed",
        type=int,
        help="Seed for honest sampling or the adversarial strategy.",
    )
    parser.add_argument(
        "--strategy", choices=ADVERSARIAL_STRATEGIES, help="Adversarial answer strategy."
    )
    parser.add_argument("--correction", help="Correction table JSON for CliffP(Q).")
    parser.add_argument("--json-out", help="Also write the report to this path.")
    parser.add_argument("--config", help="Config TOML path.")
    parser.add_argument("--log-level", help="Logging level (default from config).")


class ArgumentParser(argparse.ArgumentParser):
    """Reports bad flags as invalid input (exit 1) instead of exiting with 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise InvalidInputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="telep-psim")
    subparsers = parser.add_subparsers(dest="command")

    simulate_telep = subparsers.add_parser("simulate-telep", help="Query a Telep_n oracle.")
    simulate_telep.add_argument(
        "--exhaustive", action="store_true", help="Report the full outcome distribution."
    )
    simulate_telep.add_argument(
        "--statevector", action="store_true", help="Cross-check with dense simulation."
    )

    simulate_pcliff = subparsers.add_parser("simulate-pcliff", help="Query a CliffP(Q)_L oracle.")
    simulate_pcliff.add_argument("--exhaustive", action="store_true")
    simulate_pcliff.add_argument("--statevector", action="store_true")

    lightcone = subparsers.add_parser(
        "analyze-lightcone", help="Lightcones and embedding params of a block circuit."
    )
    lightcone.add_argument("--L", type=int, help="Window override.")
    lightcone.add_argument("--sets", action="store_true", help="Include the index sets.")

    reduce = subparsers.add_parser("reduce", help="Solve CliffP(Q)_L with one Telep query.")
    reduce.add_argument("--params", help='Embedding params JSON {"n","L","m","J"}.')
    reduce.add_argument("--circuit", help="Block circuit JSON used as the Telep oracle.")

    subparsers.add_parser("learn-stabilizers", help="Learn two stabilizers of the product.")

    for name, help_text in (
        ("solve-parity", "PARITY through stabilizer learning."),
        ("solve-mod3", "MOD_3 through stabilizer learning."),
    ):
        solver = subparsers.add_parser(name, help=help_text)
        solver.add_argument("--bits", help="Bit string, e.g. 0110.")

    subparsers.add_parser("word-problem", help="Decide a promise word problem.")

    falsify = subparsers.add_parser("falsify", help="Search for a wrong Telep answer.")
    falsify.add_argument("--trials", type=int, help="Trials (default from config).")
    falsify.add_argument("--n", type=int, help="Fix the instance length.")
    falsify.add_argument("--circuit", help="Block circuit JSON used as the candidate.")

    verify = subparsers.add_parser("verify", help="Run the property suite.")
    verify.add_argument("--quick", action="store_true", help="Shrink every trial count.")
    verify.add_argument(
        "--only",
        action="append",
        help="Check name to run (repeatable).",
    )

    for subparser in subparsers.choices.values():
        _add_common_arguments(subparser)
    return parser


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InvalidInputError as exc:
        print(render_report(exc.to_dict()), end="")
        return exc.exit_code
    if not getattr(args, "command", None):
        parser.print_help()
        return 1
    try:
        toolkit = ToolkitConfig.load(_optional_path(args.config))
    except TelepPsimError as exc:
        print(render_report(exc.to_dict()), end="")
        return exc.exit_code
    level = (args.log_level or toolkit.run.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    run_config = RunConfig.from_args(args, toolkit)
    exit_code, report = run(run_config)
    text = render_report(report)
    print(text, end="")
    if run_config.json_out is not None:
        write_report(report, run_config.json_out)
    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
