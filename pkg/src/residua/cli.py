"""Command-line surface: depth, verify, tree, and oracle subcommands.

Every command is reproducible: the seed, the full configuration, and the
tool version are embedded in emitted certificates, and identical invocations
produce byte-identical output.  Artifacts go to stdout (or --out);
diagnostics go to stderr.

Exit codes are a stable contract:
    0  success (verify: Pass)
    1  expression parse error
    2  verify: Fail
    3  verify: Inconclusive
    4  unregistered construction / no chain constructor
    5  non-materializable tree level
    6  oracle cap exceeded
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .catalog import UnregisteredConstructionError, build_group, chain_for, depth_interval
from .chains import ChainError, verify_prefix
from .dsl import DslParseError, parse_expr, print_expr
from .groups import GroupError
from .oracle import (
    OracleCapError,
    all_subgroups,
    core_up_to_index,
    depth_exact_finite,
    min_kappa,
)
from .ordinal import ALEPH0, CardinalBound, format_ordinal
from .trees import NonMaterializableError, coset_tree, emit, truncate

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3
EXIT_UNREGISTERED = 4
EXIT_NON_MATERIALIZABLE = 5
EXIT_CAP = 6


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    probes: int = 64
    levels: int = 4
    kappa: CardinalBound = ALEPH0
    format: str = "text"
    out: str | None = None
    word_len: int = 8
    limit_budget: int = 64
    block: int = 0
    chain: str = "auto"
    max_index: int = 2

    def to_jsonable(self) -> dict:
        return {
            "seed": self.seed,
            "probes": self.probes,
            "levels": self.levels,
            "kappa": self.kappa.to_jsonable(),
            "format": self.format,
            "word_len": self.word_len,
            "limit_budget": self.limit_budget,
            "block": self.block,
            "chain": self.chain,
            "max_index": self.max_index,
        }


def _default_seed() -> int:
    env = os.environ.get("RESIDUA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def _emit(text: str, config: RunConfig):
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_depth(expr_text: str, config: RunConfig) -> int:
    expr = parse_expr(expr_text)
    interval = depth_interval(expr)
    if config.format == "json":
        payload = {
            "version": __version__,
            "expression": print_expr(expr),
            "config": config.to_jsonable(),
            **interval.to_jsonable(),
        }
        _emit(_json_text(payload), config)
        return EXIT_OK
    lines = [f"[{format_ordinal(interval.lower)}, {format_ordinal(interval.upper)}]"]
    if interval.paper_claimed is not None:
        note = f" ({interval.claim_tag})" if interval.claim_tag else ""
        lines.append(f"paper_claimed: {format_ordinal(interval.paper_claimed)}{note}")
    for flag in interval.flags:
        lines.append(f"flag: {flag}")
    _emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_verify(expr_text: str, config: RunConfig) -> int:
    expr = parse_expr(expr_text)
    if config.chain != "auto":
        raise UnregisteredConstructionError(
            f"no chain constructor registered under selector {config.chain!r}"
        )
    chain = chain_for(expr)
    certificate = verify_prefix(
        chain,
        levels=config.levels,
        probes=config.probes,
        seed=config.seed,
        kappa=config.kappa,
        word_len=config.word_len,
        limit_budget=config.limit_budget,
    )
    payload = {
        "version": __version__,
        "expression": print_expr(expr),
        "chain": chain.name,
        "config": config.to_jsonable(),
        **certificate.to_jsonable(),
    }
    if config.format == "json":
        _emit(_json_text(payload), config)
    else:
        lines = [
            f"verdict: {certificate.verdict}",
            f"chain: {chain.name}",
            f"length: {format_ordinal(chain.length)}",
            f"kappa: {certificate.kappa}",
            f"seed: {certificate.seed}",
            f"probes: {certificate.probes_used}",
            "levels:",
        ]
        for row in certificate.levels:
            index = row["index"]
            index_text = "-" if index is None else str(index)
            descent = "ok" if row["descent"] else "VIOLATED"
            lines.append(f"  stage {row['stage']}: index {index_text}, descent {descent}")
        lines.append("separations:")
        for sep in certificate.separations:
            lines.append(f"  {sep['probe']}: {sep['first_excluding_stage']}")
        if certificate.failure is not None:
            lines.append(
                f"failure: {certificate.failure['reason']} at stage "
                f"{certificate.failure['stage']} (witness {certificate.failure['witness']})"
            )
        for flag in certificate.flags:
            lines.append(f"flag: {flag}")
        _emit("\n".join(lines) + "\n", config)
    if certificate.verdict == "fail":
        return EXIT_FAIL
    if certificate.verdict == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_tree(expr_text: str, config: RunConfig) -> int:
    expr = parse_expr(expr_text)
    chain = chain_for(expr)
    truncation = truncate(coset_tree(chain), config.levels, block=config.block)
    if config.format in ("dot", "json"):
        _emit(emit(truncation, config.format), config)
    else:
        sizes = [truncation.size(k) for k in range(truncation.depth + 1)]
        lines = [
            f"tree over {chain.group.tag} (block {config.block})",
            f"levels: {sizes}",
            f"fibres: {list(truncation.fibres)}",
        ]
        _emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_oracle(subcommand: str, expr_text: str, config: RunConfig) -> int:
    expr = parse_expr(expr_text)
    group = build_group(expr)
    if subcommand == "lattice":
        payload = all_subgroups(group).to_jsonable()
    elif subcommand == "core":
        core = core_up_to_index(group, config.max_index)
        lattice = all_subgroups(group)
        payload = {
            "group": group.tag,
            "max_index": config.max_index,
            "core_order": len(core),
            "core": [group.value_to_jsonable(v) for v in sorted_values(core)],
            "is_trivial": core == lattice.trivial,
        }
    elif subcommand == "min-kappa":
        payload = {"group": group.tag, "min_kappa": min_kappa(group)}
    elif subcommand == "depth":
        payload = {
            "group": group.tag,
            "depth": format_ordinal(depth_exact_finite(group)),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown oracle subcommand {subcommand!r}")
    payload = {"version": __version__, "expression": print_expr(expr), **payload}
    if config.format == "json":
        _emit(_json_text(payload), config)
    else:
        if subcommand == "min-kappa":
            _emit(f"{payload['min_kappa']}\n", config)
        elif subcommand == "depth":
            _emit(f"{payload['depth']}\n", config)
        else:
            _emit(_json_text(payload), config)
    return EXIT_OK


def sorted_values(values):
    from .groups import label_sort_key

    return sorted(values, key=label_sort_key)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="residua",
        description="ordinal-indexed residual chains: depth intervals, chain "
        "certificates, coset trees, and finite-group ground truth",
    )
    parser.add_argument("--version", action="version", version=f"residua {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats: tuple[str, ...]):
        p.add_argument("expr", help="group expression, e.g. 'wreath(C(2), Z)'")
        p.add_argument("--seed", type=int, default=None, help="probe RNG seed")
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--out", default=None, help="write the artifact to a file")

    p_depth = sub.add_parser("depth", help="depth interval for an expression")
    common(p_depth, ("text", "json"))

    p_verify = sub.add_parser("verify", help="verify the registered chain, emit a certificate")
    common(p_verify, ("text", "json"))
    p_verify.add_argument("--levels", type=int, default=4, help="steps checked past each limit stage")
    p_verify.add_argument("--probes", type=int, default=64)
    p_verify.add_argument("--kappa", default="aleph0", help="index bound: an integer or 'aleph0'")
    p_verify.add_argument("--chain", default="auto", help="chain selector (auto)")
    p_verify.add_argument("--word-len", type=int, default=8, dest="word_len")
    p_verify.add_argument("--limit-budget", type=int, default=64, dest="limit_budget")

    p_tree = sub.add_parser("tree", help="materialize and emit a coset tree truncation")
    common(p_tree, ("text", "dot", "json"))
    p_tree.add_argument("--levels", type=int, default=4)
    p_tree.add_argument("--block", type=int, default=0)

    p_oracle = sub.add_parser("oracle", help="brute-force finite-group ground truth")
    p_oracle_sub = p_oracle.add_subparsers(dest="oracle_command", required=True)
    for name in ("lattice", "core", "min-kappa", "depth"):
        p = p_oracle_sub.add_parser(name)
        common(p, ("text", "json"))
        if name == "core":
            p.add_argument("--max-index", type=int, default=2, dest="max_index")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        kappa = (
            CardinalBound.parse(args.kappa)
            if getattr(args, "kappa", None) is not None
            else ALEPH0
        )
        config = RunConfig(
            seed=seed,
            probes=getattr(args, "probes", 64),
            levels=getattr(args, "levels", 4),
            kappa=kappa,
            format=args.format,
            out=args.out,
            word_len=getattr(args, "word_len", 8),
            limit_budget=getattr(args, "limit_budget", 64),
            block=getattr(args, "block", 0),
            chain=getattr(args, "chain", "auto"),
            max_index=getattr(args, "max_index", 2),
        )
        if args.command == "depth":
            return cmd_depth(args.expr, config)
        if args.command == "verify":
            return cmd_verify(args.expr, config)
        if args.command == "tree":
            return cmd_tree(args.expr, config)
        if args.command == "oracle":
            return cmd_oracle(args.oracle_command, args.expr, config)
        parser.error(f"unknown command {args.command!r}")
    except DslParseError as exc:
        print(f"residua: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnregisteredConstructionError as exc:
        print(f"residua: {exc}", file=sys.stderr)
        return EXIT_UNREGISTERED
    except NonMaterializableError as exc:
        print(f"residua: {exc}", file=sys.stderr)
        return EXIT_NON_MATERIALIZABLE
    except OracleCapError as exc:
        print(f"residua: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ChainError as exc:
        print(f"residua: no usable chain: {exc}", file=sys.stderr)
        return EXIT_UNREGISTERED
    except GroupError as exc:
        print(f"residua: {exc}", file=sys.stderr)
        return EXIT_UNREGISTERED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
