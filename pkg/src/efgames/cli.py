"""Command line front end.

Exit codes: 0 success, 1 malformed input, 2 a resource cap was hit,
3 a precondition was violated.  ``--json`` swaps the human-readable
output for a JSON object on stdout.

File formats:

* property pair: {"width": 2, "S": ["00", "11"], "R": ["01"]}
* structure class: a JSON list of structures, each
  {"vocabulary": [["<", 2]], "universe": 3,
   "relations": {"<": [[0, 1], [0, 2], [1, 2]]}, "assignment": {"0": 1}}
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .errors import ContractError, InputError, ResourceCapError
from .fo import StructureClass, class_from_json, format_fo, fo_size
from .fobounds import (
    boolcomb_existential_sentence,
    boolcomb_instances,
    linorder_existential_sentence,
    linorder_instances,
    measure_M,
    measure_N,
)
from .fogame import (
    DEFAULT_CAP_CHOICE_FUNCTIONS,
    DEFAULT_CAP_CLASS_SIZE,
    DEFAULT_CAP_POSITIONS,
    FoGame,
    FoMode,
)
from .oracle import count_functions_up_to, min_size_table, oracle_minsize
from .propbounds import (
    density,
    density_lower_bound,
    parity_balanced,
    parity_dnf,
    parity_property,
)
from .propgame import (
    DEFAULT_CAP_EXACT_STRINGS,
    DEFAULT_CAP_STRINGS,
    DEFAULT_CAP_WIDTH,
    GameMode,
    PropGame,
    PropPosition,
)
from .props import StringProperty, format_formula, size


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        # usage mistakes are input errors (exit 1), not resource caps (exit 2)
        raise InputError(message)


# ---------------------------------------------------------------------------
# input helpers


def _load_json(path: str) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")


def _load_pair(path: str) -> tuple[StringProperty, StringProperty]:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: a pair file must be a JSON object")
    width = obj.get("width")
    if not isinstance(width, int) or isinstance(width, bool):
        raise InputError(f"{path}: 'width' must be an integer")
    sides = []
    for key in ("S", "R"):
        strings = obj.get(key)
        if not isinstance(strings, list) or not all(
            isinstance(s, str) for s in strings
        ):
            raise InputError(f"{path}: {key!r} must be a list of binary strings")
        sides.append(StringProperty.from_strings(width, strings))
    return sides[0], sides[1]


def _load_class(path: str) -> StructureClass:
    return class_from_json(_load_json(path))


# ---------------------------------------------------------------------------
# repro experiments


@dataclass(frozen=True)
class ReproReport:
    """One benchmark run: the certificate bound must never exceed the
    construction size, and an exact minimal size must sit between them."""

    experiment: str
    n: int
    certificate_bound: int
    construction_size: int
    exact_minsize: Optional[int]
    runtime_ms: int

    def __post_init__(self) -> None:
        if self.certificate_bound > self.construction_size:
            raise ContractError(
                f"certificate {self.certificate_bound} exceeds the construction "
                f"size {self.construction_size}"
            )
        if self.exact_minsize is not None and not (
            self.certificate_bound <= self.exact_minsize <= self.construction_size
        ):
            raise ContractError(
                f"exact size {self.exact_minsize} falls outside "
                f"[{self.certificate_bound}, {self.construction_size}]"
            )

    def text(self) -> str:
        exact = "not computed" if self.exact_minsize is None else str(self.exact_minsize)
        return (
            f"experiment: {self.experiment}\n"
            f"n: {self.n}\n"
            f"certificate bound: {self.certificate_bound}\n"
            f"construction size: {self.construction_size}\n"
            f"exact minimal size: {exact}\n"
            f"runtime: {self.runtime_ms} ms"
        )


def repro_parity(
    n: int,
    *,
    cap_strings: int = DEFAULT_CAP_STRINGS,
    cap_width: int = DEFAULT_CAP_WIDTH,
) -> ReproReport:
    """Certificate vs. construction vs. (when within caps) exact minimal
    size for even-parity against odd-parity of width n."""
    start = time.perf_counter()
    left, right = parity_property(n)
    certificate = density_lower_bound(left, right)
    construction = min(size(parity_dnf(n)), size(parity_balanced(n)))
    exact = None
    if n <= cap_width and (1 << n) <= cap_strings:
        game = PropGame(n, cap_strings=cap_strings, cap_width=cap_width)
        exact = game.minsize(left, right)
    elapsed = int((time.perf_counter() - start) * 1000)
    return ReproReport("parity", n, certificate, construction, exact, elapsed)


def repro_boolcomb(
    n: int,
    *,
    cap_positions: int = DEFAULT_CAP_POSITIONS,
    cap_choice_functions: int = DEFAULT_CAP_CHOICE_FUNCTIONS,
    cap_class_size: int = DEFAULT_CAP_CLASS_SIZE,
) -> ReproReport:
    """Combination family: measure certificate vs. the explicit sentence;
    the exact minimal size is searched only at n = 1, where the
    existential game is small."""
    start = time.perf_counter()
    left, right = boolcomb_instances(n)
    certificate = measure_M(left, right)
    construction = fo_size(boolcomb_existential_sentence(n))
    exact = None
    if n == 1:
        game = FoGame(
            cap_positions=cap_positions,
            cap_choice_functions=cap_choice_functions,
            cap_class_size=cap_class_size,
        )
        exact = game.minsize(left, right, FoMode.EXISTENTIAL, w_max=construction)
    elapsed = int((time.perf_counter() - start) * 1000)
    return ReproReport("boolcomb", n, certificate, construction, exact, elapsed)


def repro_linorder(
    n: int,
    *,
    cap_positions: int = DEFAULT_CAP_POSITIONS,
    cap_choice_functions: int = DEFAULT_CAP_CHOICE_FUNCTIONS,
    cap_class_size: int = DEFAULT_CAP_CLASS_SIZE,
) -> ReproReport:
    """Linear-order family: measure certificate vs. the chain sentence;
    the exact minimal size is searched for n <= 3."""
    start = time.perf_counter()
    left, right = linorder_instances(n)
    certificate = measure_N(left, right)
    construction = fo_size(linorder_existential_sentence(n))
    exact = None
    if n <= 3:
        game = FoGame(
            cap_positions=cap_positions,
            cap_choice_functions=cap_choice_functions,
            cap_class_size=cap_class_size,
        )
        exact = game.minsize(left, right, FoMode.EXISTENTIAL, w_max=construction)
    elapsed = int((time.perf_counter() - start) * 1000)
    return ReproReport("linorder", n, certificate, construction, exact, elapsed)


# ---------------------------------------------------------------------------
# handlers: each returns (text, payload)


def _cmd_prop_minsize(args) -> tuple[str, dict]:
    left, right = _load_pair(args.pair)
    game = PropGame(left.width, cap_strings=args.cap_strings, cap_width=args.cap_width)
    k = game.minsize(left, right)
    if k is None:
        return "inseparable", {"result": "inseparable"}
    return f"minimum separating size: {k}", {"result": "size", "size": k}


def _cmd_prop_winner(args) -> tuple[str, dict]:
    left, right = _load_pair(args.pair)
    game = PropGame(
        left.width,
        cap_exact_strings=args.cap_exact_strings,
        cap_strings=args.cap_strings,
        cap_width=args.cap_width,
    )
    who = game.winner(PropPosition(args.rank, left, right), GameMode(args.mode))
    return (
        f"player {who.value} wins at rank {args.rank} ({args.mode} mode)",
        {"winner": who.value, "rank": args.rank, "mode": args.mode},
    )


def _cmd_prop_synth(args) -> tuple[str, dict]:
    left, right = _load_pair(args.pair)
    game = PropGame(left.width, cap_strings=args.cap_strings, cap_width=args.cap_width)
    f = game.synthesize(left, right, args.rank)
    if f is None:
        return (
            f"no separating formula of size <= {args.rank}",
            {"formula": None, "rank": args.rank},
        )
    text = format_formula(f)
    return text, {"formula": text, "size": size(f)}


def _cmd_prop_density(args) -> tuple[str, dict]:
    left, right = _load_pair(args.pair)
    pair = density(left, right)
    bound = density_lower_bound(left, right)
    text = (
        f"boundary edges: {pair.edge_count}\n"
        f"left density: {pair.left}\n"
        f"right density: {pair.right}\n"
        f"size lower bound: {bound}"
    )
    return text, {
        "edges": pair.edge_count,
        "left_density": str(pair.left),
        "right_density": str(pair.right),
        "lower_bound": bound,
    }


def _cmd_prop_parity(args) -> tuple[str, dict]:
    f = parity_dnf(args.n) if args.form == "dnf" else parity_balanced(args.n)
    text = format_formula(f)
    return f"{text}\nsize: {size(f)}", {"formula": text, "size": size(f)}


def _cmd_oracle_table(args) -> tuple[str, dict]:
    table = min_size_table(args.n)
    counts: dict[int, int] = {}
    for s in table.values():
        counts[s] = counts.get(s, 0) + 1
    lines = [f"functions of {args.n} variables: {len(table)}"]
    for s in sorted(counts):
        lines.append(f"  minimal size {s}: {counts[s]}")
    return "\n".join(lines), {
        "functions": len(table),
        "counts": {str(s): c for s, c in sorted(counts.items())},
    }


def _cmd_oracle_minsize(args) -> tuple[str, dict]:
    left, right = _load_pair(args.pair)
    k = oracle_minsize(left, right)
    if k is None:
        return "inseparable", {"result": "inseparable"}
    return f"minimum separating size: {k}", {"result": "size", "size": k}


def _cmd_oracle_count(args) -> tuple[str, dict]:
    c = count_functions_up_to(args.m, args.n)
    bound = 2**args.m * (args.n + 2) ** (2 * args.m)
    return (
        f"functions of {args.n} variables with minimal size <= {args.m}: {c}\n"
        f"counting bound: {bound}",
        {"count": c, "bound": bound},
    )


def _fo_game(args) -> FoGame:
    return FoGame(
        cap_positions=args.cap_positions,
        cap_choice_functions=args.cap_choice_functions,
        cap_class_size=args.cap_class_size,
    )


def _cmd_fo_winner(args) -> tuple[str, dict]:
    left, right = _load_class(args.left), _load_class(args.right)
    who = _fo_game(args).winner(args.rank, left, right, FoMode(args.mode))
    return (
        f"player {who.value} wins at rank {args.rank} ({args.mode} mode)",
        {"winner": who.value, "rank": args.rank, "mode": args.mode},
    )


def _cmd_fo_minsize(args) -> tuple[str, dict]:
    left, right = _load_class(args.left), _load_class(args.right)
    k = _fo_game(args).minsize(left, right, FoMode(args.mode), args.wmax)
    if k is None:
        return (
            f"no separating formula of size <= {args.wmax}",
            {"result": "unknown", "searched_up_to": args.wmax},
        )
    return f"minimum separating size: {k}", {"result": "size", "size": k}


def _cmd_fo_synth(args) -> tuple[str, dict]:
    left, right = _load_class(args.left), _load_class(args.right)
    f = _fo_game(args).synthesize(left, right, args.rank, FoMode(args.mode))
    if f is None:
        return (
            f"no separating formula of size <= {args.rank}",
            {"formula": None, "rank": args.rank},
        )
    text = format_fo(f)
    return text, {"formula": text, "size": fo_size(f)}


def _cmd_fo_measure(args) -> tuple[str, dict]:
    if args.left is not None or args.right is not None:
        if args.left is None or args.right is None:
            raise InputError("measure needs both class files or --n")
        left, right = _load_class(args.left), _load_class(args.right)
    elif args.n is not None:
        maker = boolcomb_instances if args.family == "boolcomb" else linorder_instances
        left, right = maker(args.n)
    else:
        raise InputError("measure needs --n or two class files")
    if args.family == "boolcomb":
        name, value = "M", measure_M(left, right)
    else:
        name, value = "N", measure_N(left, right)
    return f"measure {name}: {value}", {"measure": name, "value": value}


def _cmd_repro(args) -> tuple[str, dict]:
    if args.experiment == "parity":
        report = repro_parity(
            args.n, cap_strings=args.cap_strings, cap_width=args.cap_width
        )
    else:
        runner = repro_boolcomb if args.experiment == "boolcomb" else repro_linorder
        report = runner(
            args.n,
            cap_positions=args.cap_positions,
            cap_choice_functions=args.cap_choice_functions,
            cap_class_size=args.cap_class_size,
        )
    return report.text(), asdict(report)


# ---------------------------------------------------------------------------
# parser


def _add_prop_caps(p: argparse.ArgumentParser, *, exact: bool = False) -> None:
    p.add_argument(
        "--cap-strings",
        type=int,
        default=DEFAULT_CAP_STRINGS,
        help="largest |S| + |R| the size table accepts (default %(default)s)",
    )
    p.add_argument(
        "--cap-width",
        type=int,
        default=DEFAULT_CAP_WIDTH,
        help="largest width the size table accepts (default %(default)s)",
    )
    if exact:
        p.add_argument(
            "--cap-exact-strings",
            type=int,
            default=DEFAULT_CAP_EXACT_STRINGS,
            help="largest |S| + |R| exact mode accepts (default %(default)s)",
        )


def _add_fo_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--cap-positions",
        type=int,
        default=DEFAULT_CAP_POSITIONS,
        help="largest number of game positions to visit (default %(default)s)",
    )
    p.add_argument(
        "--cap-choice-functions",
        type=int,
        default=DEFAULT_CAP_CHOICE_FUNCTIONS,
        help="largest choice-function family to enumerate (default %(default)s)",
    )
    p.add_argument(
        "--cap-class-size",
        type=int,
        default=DEFAULT_CAP_CLASS_SIZE,
        help="largest class a branching extension may reach (default %(default)s)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="efgames",
        description="Exact formula-size games over strings and finite structures.",
    )
    parser.add_argument("--json", action="store_true", help="emit JSON on stdout")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    prop = commands.add_parser("prop", help="string-property games")
    psub = prop.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = psub.add_parser("minsize", help="minimal separating formula size")
    p.add_argument("pair", help="pair file {width, S, R}")
    _add_prop_caps(p)
    p.set_defaults(handler=_cmd_prop_minsize)

    p = psub.add_parser("winner", help="who wins the separation game")
    p.add_argument("pair")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "reduced"], default="reduced")
    _add_prop_caps(p, exact=True)
    p.set_defaults(handler=_cmd_prop_winner)

    p = psub.add_parser("synth", help="synthesize a separating formula")
    p.add_argument("pair")
    p.add_argument("--rank", type=int, required=True)
    _add_prop_caps(p)
    p.set_defaults(handler=_cmd_prop_synth)

    p = psub.add_parser("density", help="boundary density certificate")
    p.add_argument("pair")
    p.set_defaults(handler=_cmd_prop_density)

    p = psub.add_parser("parity", help="explicit parity formulas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--form", choices=["dnf", "balanced"], default="balanced")
    p.set_defaults(handler=_cmd_prop_parity)

    oracle = commands.add_parser("oracle", help="brute-force baselines")
    osub = oracle.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = osub.add_parser("table", help="minimal-size census of all functions")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_oracle_table)

    p = osub.add_parser("minsize", help="minimal size via truth tables")
    p.add_argument("pair")
    p.set_defaults(handler=_cmd_oracle_minsize)

    p = osub.add_parser("count", help="how many functions have size <= m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_oracle_count)

    fo = commands.add_parser("fo", help="structure-class games")
    fsub = fo.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = fsub.add_parser("winner", help="who wins the class-separation game")
    p.add_argument("left", help="class file (JSON list of structures)")
    p.add_argument("right")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--mode", choices=["full", "existential"], default="full")
    _add_fo_caps(p)
    p.set_defaults(handler=_cmd_fo_winner)

    p = fsub.add_parser("minsize", help="minimal separating formula size")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--wmax", type=int, default=8)
    p.add_argument("--mode", choices=["full", "existential"], default="full")
    _add_fo_caps(p)
    p.set_defaults(handler=_cmd_fo_minsize)

    p = fsub.add_parser("synth", help="synthesize a separating formula")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--mode", choices=["full", "existential"], default="full")
    _add_fo_caps(p)
    p.set_defaults(handler=_cmd_fo_synth)

    p = fsub.add_parser("measure", help="counting measure of a family instance")
    p.add_argument("--family", choices=["boolcomb", "linorder"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("left", nargs="?")
    p.add_argument("right", nargs="?")
    p.set_defaults(handler=_cmd_fo_measure)

    repro = commands.add_parser("repro", help="benchmark experiments")
    rsub = repro.add_subparsers(dest="experiment", required=True, parser_class=_Parser)

    p = rsub.add_parser("parity", help="parity: density bound vs. construction")
    p.add_argument("--n", type=int, required=True)
    _add_prop_caps(p)
    p.set_defaults(handler=_cmd_repro)

    p = rsub.add_parser("boolcomb", help="combination family: M bound vs. sentence")
    p.add_argument("--n", type=int, required=True)
    _add_fo_caps(p)
    p.set_defaults(handler=_cmd_repro)

    p = rsub.add_parser("linorder", help="linear orders: N bound vs. sentence")
    p.add_argument("--n", type=int, required=True)
    _add_fo_caps(p)
    p.set_defaults(handler=_cmd_repro)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    # accept --json anywhere on the line, including after a subcommand
    words = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in words
    words = [w for w in words if w != "--json"]
    try:
        args = parser.parse_args(words)
        args.json = as_json
        text, payload = args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(payload, indent=2) if args.json else text)
    return 0


def main() -> None:
    raise SystemExit(run())
