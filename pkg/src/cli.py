"""Command-line front-end: ``python -m src <command>``.

Exit codes: 0 success, 1 bad input, 2 failed verification, 3 invariant breach.
"""

import argparse
import sys
from typing import Callable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from src import __version__
from src.config import config
from src.core.adic import AdicPrefix, add_fib, add_int, classify_add_fib, delta_int
from src.core.fibzeck import admissible_words, decode, digit_sum, encode, fib
from src.core.golden import ONE
from src.core.logging import logger
from src.exceptions import InvariantBreachError, VerificationError, ZeckendorfError
from src.models import (
    AddResponse,
    CheckModel,
    DecodeResponse,
    DeltaResponse,
    EmpiricalResponse,
    EncodeResponse,
    MixingReport,
    MuMassResponse,
    MuMomentResponse,
    VerifyResponse,
    blocks_model,
    distribution_model,
    golden,
    mixing_row,
    tower_model,
)
from src.services.blocks import block_process, decompose
from src.services.measure import (
    DigitSampler,
    extend_until_safe,
    order_total_mass,
    renewal_holds,
    sample_prefix,
)
from src.services.mixing import (
    check_block_preconditions,
    density_inequality_holds,
    empirical_density,
    estimate_alpha_blocks,
    estimate_alpha_coordinates,
    estimate_phi_coordinates,
    exact_phi_coordinates,
    phi_coordinate_bound,
    sample_block_process,
)
from src.services.mudist import (
    distribution_checks,
    fibonacci_niz_profile,
    get_distribution,
    mass_window,
    moment,
    mu_mass,
    tower_dump,
    verify_fib_identity,
)
from src.utils.rendering import (
    MIXING_CSV_HEADER,
    MU_CSV_HEADER,
    format_float,
    mixing_csv_rows,
    mixing_plain,
    mu_csv_rows,
    mu_plain,
    render,
)

# forty one-one blocks: ones at positions 2, 6, ..., 158
DEFAULT_BLOCK_R = sum(fib(2 + 4 * i) for i in range(40))


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _golden_plain(value) -> str:
    if value.b == 0 and value.a.denominator == 1:
        return str(value)
    return f"{value} (approx {format_float(value.to_float())})"


# -- commands ------------------------------------------------------------------------


def cmd_encode(args: argparse.Namespace) -> str:
    word = encode(args.n)
    model = EncodeResponse(n=args.n, word=str(word), digit_sum=digit_sum(word))
    return render(args.format, model, ("n", "word", "digit_sum"),
                  [(model.n, model.word, model.digit_sum)], model.word)


def cmd_decode(args: argparse.Namespace) -> str:
    model = DecodeResponse(word=args.word, n=decode(args.word))
    return render(args.format, model, ("word", "n"), [(model.word, model.n)], str(model.n))


def cmd_add(args: argparse.Namespace) -> str:
    x = AdicPrefix.from_int(args.n, args.r)
    cases: List[str] = []
    for q in encode(args.r).ones():
        cases.append(classify_add_fib(x, q).value)
        x = add_fib(x, q)
    model = AddResponse(n=args.n, r=args.r, word=str(x.word.canonical()), value=x.value, cases=cases)
    return render(args.format, model, ("n", "r", "word", "value", "cases"),
                  [(model.n, model.r, model.word, model.value, " ".join(cases))],
                  f"{model.word} ({model.value})")


def cmd_delta(args: argparse.Namespace) -> str:
    model = DeltaResponse(n=args.n, r=args.r, delta=delta_int(args.n, args.r))
    return render(args.format, model, ("n", "r", "delta"), [(model.n, model.r, model.delta)], str(model.delta))


def cmd_mu(args: argparse.Namespace) -> str:
    dist = get_distribution(args.r, fibonacci_shortcut=args.shortcut)
    if args.verify:
        checks = [CheckModel(name=c.name, passed=c.passed, detail=c.detail) for c in distribution_checks(dist)]
        model = VerifyResponse(passed=all(c.passed for c in checks), checks=checks)
        text = render(args.format, model, ("check", "passed", "detail"),
                      [(c.name, c.passed, c.detail) for c in checks],
                      "\n".join(f"{'ok  ' if c.passed else 'FAIL'} {c.name} {c.detail}" for c in checks))
        if not model.passed:
            print(text)
            failed = [c.name for c in checks if not c.passed]
            raise VerificationError(", ".join(failed), f"mu^({args.r})")
        return text
    if args.d is not None:
        mass_window(dist, args.d, args.d)
        mass = mu_mass(dist, args.d)
        model = MuMassResponse(r=args.r, d=args.d, mass=golden(mass))
        return render(args.format, model, MU_CSV_HEADER,
                      [(args.d, model.mass.a, model.mass.b, model.mass.approx)], _golden_plain(mass))
    if args.moment is not None:
        value = moment(dist, args.moment)
        model = MuMomentResponse(r=args.r, p=args.moment, moment=golden(value))
        return render(args.format, model, ("p", "moment_a", "moment_b", "moment_float"),
                      [(args.moment, model.moment.a, model.moment.b, model.moment.approx)],
                      _golden_plain(value))
    lo, hi = args.range if args.range else (None, None)
    model = distribution_model(dist, lo, hi)
    return render(args.format, model, MU_CSV_HEADER, mu_csv_rows(model), mu_plain(model))


def cmd_mu_empirical(args: argparse.Namespace) -> str:
    density = empirical_density(args.r, args.d, args.N, threads=args.threads)
    model = EmpiricalResponse(r=args.r, d=args.d, N=args.N, density=density)
    return render(args.format, model, ("r", "d", "N", "density"),
                  [(args.r, args.d, args.N, density)], str(float(format_float(density))))


def cmd_towers(args: argparse.Namespace) -> str:
    dump = tower_dump(args.k, args.r)
    model = tower_model(dump)
    rows = []
    lines = [f"order {dump.k}: large tower {len(dump.large)} levels, small tower {len(dump.small)} levels"]
    for name, levels in (("large", model.large), ("small", model.small)):
        for lv in levels:
            rows.append((name, lv.index, lv.integer, lv.word, lv.mass.approx, lv.parent_tower,
                         lv.parent_index, lv.in_niz, lv.niz_order, lv.delta))
            note = f"  NIZ_{lv.niz_order} delta={lv.delta}" if lv.niz_order is not None else ""
            lines.append(f"{name:5} {lv.index:>5}  {lv.word}{note}")
    header = ("tower", "index", "integer", "word", "mass_float", "parent_tower",
              "parent_index", "in_niz", "niz_order", "delta")
    return render(args.format, model, header, rows, "\n".join(lines))


def cmd_blocks(args: argparse.Namespace) -> str:
    model = blocks_model(decompose(args.r))
    rows = [(b.index, b.start, b.length, b.partial_sum, " ".join(map(str, b.adm))) for b in model.blocks]
    return render(args.format, model, ("index", "start", "length", "partial_sum", "adm"), rows,
                  f"{model.rendered}  (rho={model.rho})")


def cmd_mixing(args: argparse.Namespace) -> str:
    seed = config.DEFAULT_SEED if args.seed is None else args.seed
    if args.kind == "blocks":
        r = DEFAULT_BLOCK_R if args.r is None else args.r
        ks = [args.k] if args.k is not None else list(range(1, 13))
        check_block_preconditions(r, args.p, args.samples)
        samples = sample_block_process(r, args.samples, seed, args.threads)
        estimates = [estimate_alpha_blocks(r, k, args.p, args.samples, seed, samples=samples) for k in ks]
    else:
        ks = [args.k] if args.k is not None else list(range(1, 11))
        estimator = estimate_phi_coordinates if args.kind == "coords" else estimate_alpha_coordinates
        estimates = [estimator(k, args.p, args.samples, seed, args.threads) for k in ks]
    rows = [mixing_row(e) for e in estimates]
    return render(args.format, MixingReport(rows=rows), MIXING_CSV_HEADER, mixing_csv_rows(rows), mixing_plain(rows))


# -- verify-all ---------------------------------------------------------------------


def _check_round_trip() -> Tuple[bool, str]:
    bad = [n for n in range(10_000) if decode(encode(n)) != n]
    return not bad, f"first failure {bad[0]}" if bad else "n < 10^4"


def _check_carry_oracle() -> Tuple[bool, str]:
    for n in range(150):
        for r in range(150):
            if add_int(AdicPrefix.from_int(n, r), r).value != n + r:
                return False, f"n={n} r={r}"
    return True, "n, r < 150"


def _check_distributions() -> Tuple[bool, str]:
    for r in range(1, 61):
        failed = [c.name for c in distribution_checks(get_distribution(r)) if not c.passed]
        if failed:
            return False, f"r={r}: {', '.join(failed)}"
    return True, "r in [1, 60]"


def _check_fib_identity() -> Tuple[bool, str]:
    bad = [ell for ell in range(3, 13) if not verify_fib_identity(ell)]
    return not bad, f"l={bad}" if bad else "l in [3, 12]"


def _check_niz_profile() -> Tuple[bool, str]:
    for ell in range(3, 13):
        prof = fibonacci_niz_profile(ell)
        if set(prof.order_l) != {1} or set(prof.order_l2) != {0}:
            return False, f"l={ell}"
        if prof.order_l1 != {0: fib(ell - 1), 1: fib(ell - 2)}:
            return False, f"l={ell}: {dict(prof.order_l1)}"
    return True, "l in [3, 12]"


def _check_density_inequality() -> Tuple[bool, str]:
    bad = [r for r in (1, 4, 7, 12) if not density_inequality_holds(r, 10_000)]
    return not bad, f"r={bad}" if bad else "N = 10^4"


def _check_measure() -> Tuple[bool, str]:
    if any(order_total_mass(k) != ONE for k in range(1, 13)):
        return False, "total mass"
    for length in range(1, 5):
        for prefix in admissible_words(length):
            for c in admissible_words(3):
                if not renewal_holds(prefix, c):
                    return False, f"renewal {prefix} / {c}"
    return True, "orders <= 12, renewal <= 4"


def _check_exact_phi() -> Tuple[bool, str]:
    for k in range(1, 6):
        if exact_phi_coordinates(k, 2) > phi_coordinate_bound(k):
            return False, f"k={k}"
    return True, "k in [1, 5], p = 2"


def _check_telescoping() -> Tuple[bool, str]:
    sampler = DigitSampler(config.DEFAULT_SEED)
    for r in (4, 12, 33, 1000, DEFAULT_BLOCK_R):
        dec = decompose(r)
        for _ in range(50):
            x = extend_until_safe(sampler, sample_prefix(sampler, len(encode(r)) + 4), r)
            y = add_int(x, r)
            if sum(block_process(x, dec)) != y.ones - x.ones:
                return False, f"r={r} x={x}"
    return True, "50 samples each"


VERIFY_CHECKS: Sequence[Tuple[str, Callable[[], Tuple[bool, str]]]] = (
    ("round_trip", _check_round_trip),
    ("carry_oracle", _check_carry_oracle),
    ("distribution_checks", _check_distributions),
    ("fibonacci_identity", _check_fib_identity),
    ("niz_profile", _check_niz_profile),
    ("density_inequality", _check_density_inequality),
    ("measure", _check_measure),
    ("exact_phi_bound", _check_exact_phi),
    ("block_telescoping", _check_telescoping),
)


def cmd_verify_all(args: argparse.Namespace) -> str:
    checks: List[CheckModel] = []
    for name, fn in tqdm(VERIFY_CHECKS, desc="verify-all", disable=not config.progress_enabled()):
        passed, detail = fn()
        logger.info(f"verify-all {name}: {'ok' if passed else 'FAILED'} ({detail})")
        checks.append(CheckModel(name=name, passed=passed, detail=detail))
    model = VerifyResponse(passed=all(c.passed for c in checks), checks=checks)
    text = render(args.format, model, ("check", "passed", "detail"),
                  [(c.name, c.passed, c.detail) for c in checks],
                  "\n".join(f"{'ok  ' if c.passed else 'FAIL'} {c.name} {c.detail}" for c in checks))
    if not model.passed:
        print(text)
        raise VerificationError(", ".join(c.name for c in checks if not c.passed))
    return text


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zecklab", description="Zeckendorf numeration, odometer and digit-sum distributions.")
    parser.add_argument("--version", action="version", version=f"zecklab {__version__}")
    parser.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default ZECKLAB_THREADS)")
    parser.add_argument("--seed", type=int, default=None, help="base seed (default ZECKLAB_SEED)")
    # the same options after the subcommand; SUPPRESS keeps values given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common], help="Zeckendorf word of n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="integer of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("add", parents=[common], help="n + r through the carry engine")
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.set_defaults(func=cmd_add)

    p = sub.add_parser("delta", parents=[common], help="s(n + r) - s(n)")
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("mu", parents=[common], help="exact distribution of Delta^(r)")
    p.add_argument("r", type=int)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--d", type=int, default=None, help="single mass mu(d)")
    group.add_argument("--range", type=int, nargs=2, metavar=("A", "B"), default=None)
    group.add_argument("--moment", type=int, default=None, metavar="P")
    group.add_argument("--verify", action="store_true")
    p.add_argument("--shortcut", action="store_true", help="Fibonacci shortcut when r = F_l")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("mu-empirical", parents=[common], help="density of {n < N : Delta^(r)(n) = d}")
    p.add_argument("r", type=int)
    p.add_argument("d", type=int)
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_mu_empirical)

    p = sub.add_parser("towers", parents=[common], help="both towers of order k")
    p.add_argument("k", type=int)
    p.add_argument("--r", type=int, default=None, help="annotate NIZ levels for r")
    p.set_defaults(func=cmd_towers)

    p = sub.add_parser("blocks", parents=[common], help="block decomposition of r")
    p.add_argument("r", type=int)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("mixing", parents=[common], help="mixing estimates")
    p.add_argument("kind", choices=("coords", "blocks", "alpha-coords"))
    p.add_argument("--k", type=int, default=None, help="gap (default: a range)")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--r", type=int, default=None, help="integer driving the block process")
    p.add_argument("--samples", type=int, default=20_000)
    p.set_defaults(func=cmd_mixing)

    p = sub.add_parser("verify-all", parents=[common], help="acceptance checks at reduced sizes")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        print(args.func(args))
        return 0
    except VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InvariantBreachError as e:
        logger.error(f"Invariant breach: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ZeckendorfError, OverflowError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
