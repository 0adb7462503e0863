import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from config import get_run_config, get_settings, parse_config, serialize_config
from ddpg import Agent, load_checkpoint, save_checkpoint, train
from envs import BipedEnv, EnvironmentInterface, PointMassEnv
from exceptions import (
    BasePersistenceError,
    BaseSimulationError,
    BaseTrainingError,
    CheckpointError,
    ParameterError
)
from schemas import RunConfig
from services import (
    POLICY_NAMES,
    evaluate,
    make_policy,
    plate_indentation,
    read_trace,
    record_trace,
    summarize_trace,
    write_state_trace,
    write_trace
)

logger = logging.getLogger("terra_walker")

ENVIRONMENTS = ("biped", "point-mass")
METRICS_FILE = "metrics.csv"
CHECKPOINT_DIR = "checkpoint"
CONFIG_FILE = "config.cfg"


def build_env(name: str, config: RunConfig) -> EnvironmentInterface:
    if name == "biped":
        return BipedEnv.from_config(config)
    if name == "point-mass":
        return PointMassEnv(seed=config.env.seed)
    raise ParameterError(f"Unknown environment {name!r}.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terra-walker",
        description="Planar biped on deformable soil trained with DDPG.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    train_parser = commands.add_parser("train", help="train a DDPG agent")
    train_parser.add_argument("--config", help="run configuration file")
    train_parser.add_argument("--episodes", type=int, required=True)
    train_parser.add_argument("--seed", type=int)
    train_parser.add_argument("--out", help="output directory (defaults to [run] output_dir)")
    train_parser.add_argument("--env", choices=ENVIRONMENTS, default="biped")

    eval_parser = commands.add_parser("eval", help="evaluate a policy without exploration")
    eval_parser.add_argument("--checkpoint", help="checkpoint directory written by train")
    eval_parser.add_argument("--config", help="run configuration for checkpoint-free policies")
    eval_parser.add_argument("--episodes", type=int, default=1)
    eval_parser.add_argument("--seed", type=int)
    eval_parser.add_argument("--policy", choices=POLICY_NAMES, default="actor")

    replay_parser = commands.add_parser("replay", help="summarize a force trace")
    replay_parser.add_argument("--trace", required=True)

    plate_parser = commands.add_parser("plate-test", help="static plate indentation check")
    plate_parser.add_argument("--weight", type=float, required=True, help="plate weight (N)")
    plate_parser.add_argument("--side", type=float, required=True, help="plate side (m)")
    plate_parser.add_argument("--config", help="run configuration providing [soil]")
    plate_parser.add_argument("--spacing", type=float, default=0.01)
    plate_parser.add_argument("--dt", type=float, default=1e-3)
    plate_parser.add_argument("--duration", type=float, default=2.0)

    trace_parser = commands.add_parser("trace-forces", help="record one episode of foot forces")
    trace_parser.add_argument("--checkpoint", help="checkpoint directory written by train")
    trace_parser.add_argument("--config", help="run configuration for checkpoint-free policies")
    trace_parser.add_argument("--out", required=True, help="trace CSV path")
    trace_parser.add_argument("--seed", type=int)
    trace_parser.add_argument("--policy", choices=POLICY_NAMES, default="actor")
    trace_parser.add_argument("--max-steps", type=int)
    trace_parser.add_argument("--states", help="optional CSV of t,q0..q8,qd0..qd8 per control step")
    return parser


def _checkpoint_config(manifest, seed: Optional[int], settings) -> RunConfig:
    config = parse_config(manifest.run_config or "")
    seed = seed if seed is not None else settings.TERRA_SEED
    return config.with_seed(seed) if seed is not None else config


def _load_policy_setup(args, settings):
    """Agent (if any), environment name and run config for eval and trace-forces."""
    if args.checkpoint:
        agent, manifest = load_checkpoint(args.checkpoint)
        return agent, manifest.environment, _checkpoint_config(manifest, args.seed, settings)
    if args.policy == "actor":
        raise CheckpointError("--checkpoint is required for the actor policy.")
    return None, "biped", get_run_config(args.config, settings, args.seed)


def command_train(args, settings) -> int:
    config = get_run_config(args.config, settings, args.seed)
    out = Path(args.out or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config_text = serialize_config(config)
    (out / CONFIG_FILE).write_text(config_text, encoding="utf-8")

    env = build_env(args.env, config)
    agent = Agent(env.observation_size, env.action_size, config.ddpg)
    metrics = train(
        agent,
        env,
        args.episodes,
        checkpoint_dir=out / CHECKPOINT_DIR,
        run_config=config_text,
        progress=logging.getLogger().isEnabledFor(logging.INFO),
    )
    metrics.write_csv(out / METRICS_FILE)
    save_checkpoint(agent, out / CHECKPOINT_DIR, config_text, env.name)
    print(f"trained {len(metrics)} episodes; metrics in {out / METRICS_FILE}")
    return 0


def command_eval(args, settings) -> int:
    agent, env_name, config = _load_policy_setup(args, settings)
    env = build_env(env_name, config)
    policy = make_policy(args.policy, env, agent)
    result = evaluate(policy, env, args.episodes, seed=config.env.seed)
    print(f"mean return: {result.mean_return:.6f}")
    print(f"mean forward displacement: {result.mean_displacement:.6f} m")
    return 0


def command_replay(args, settings) -> int:
    for line in summarize_trace(read_trace(args.trace)).lines():
        print(line)
    return 0


def command_plate_test(args, settings) -> int:
    config = get_run_config(args.config, settings)
    result = plate_indentation(
        config.soil,
        args.weight,
        args.side,
        spacing=args.spacing,
        dt=args.dt,
        duration=args.duration,
    )
    print(f"analytic sinkage: {result.analytic_sinkage * 1000:.4f} mm")
    print(f"simulated sinkage: {result.simulated_sinkage * 1000:.4f} mm")
    print(f"relative error: {result.relative_error * 100:.3f} %")
    return 0


def command_trace_forces(args, settings) -> int:
    agent, env_name, config = _load_policy_setup(args, settings)
    if env_name != "biped":
        raise ParameterError("Force traces need a checkpoint trained on the biped environment.")
    env = BipedEnv.from_config(config)
    policy = make_policy(args.policy, env, agent)
    states = [] if args.states else None
    trace = record_trace(policy, env, seed=config.env.seed, max_steps=args.max_steps, states=states)
    path = write_trace(trace, args.out)
    print(f"wrote {len(trace)} rows to {path}")
    if states is not None:
        print(f"wrote {len(states)} states to {write_state_trace(states, args.states)}")
    return 0


COMMANDS = {
    "train": command_train,
    "eval": command_eval,
    "replay": command_replay,
    "plate-test": command_plate_test,
    "trace-forces": command_trace_forces,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv`` and run the selected subcommand.

    :return: 0 on success, 1 on a runtime failure, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as error:
        return int(error.code or 0)

    settings = get_settings()
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args, settings)
    except (BaseSimulationError, BaseTrainingError, BasePersistenceError, OSError) as error:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {error}", file=sys.stderr)
        return 1


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
