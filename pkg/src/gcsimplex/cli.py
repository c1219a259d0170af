"""Command-line interface.

Exit codes: 0 success, 1 I/O or parse error, 2 validation or domain error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import descriptors as dsc
from .errors import CatalogError, DomainError, ModelError
from .oracle import ensemble_for_weights, purity
from .scan import atomic_write, scan_csv, scan_rows
from .simplex import (
    SimplexPoint,
    classify,
    mean_particle_number,
    weights_from_omega_n,
    weights_from_reference,
)
from .species_io import load_catalog, to_domain
from .verification import run_suite, synthetic_domains

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _num(v: float) -> str:
    """Six decimals with trailing zeros dropped."""
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _load_records(args):
    try:
        return load_catalog(args.domain, args.format)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.domain}: {exc.strerror or exc}") from None
    except CatalogError as exc:
        raise CliError(EXIT_IO, f"{args.domain}: {exc}") from None


def _domain(args):
    if not args.domain or args.label is None:
        raise CliError(EXIT_INVALID, "--domain and --label are required")
    for record in _load_records(args):
        if record.label == args.label:
            return to_domain(record)
    raise CliError(EXIT_INVALID, f"label {args.label!r} not found in {args.domain}")


def _coordinates(args, q: int):
    """Return (weights, point, nu, nu0) from exactly one coordinate pair."""
    by_ratio = args.x is not None or args.omega_n is not None
    by_charge = args.nu is not None or args.nu0 is not None
    if by_ratio == by_charge:
        raise CliError(EXIT_INVALID, "give exactly one of --x/--omega-n or --nu/--nu0")
    if by_ratio:
        if args.x is None or args.omega_n is None:
            raise CliError(EXIT_INVALID, "--x and --omega-n must be given together")
        w = weights_from_omega_n(args.x, args.omega_n)
        nu = args.x * q
        nu0 = q * (1.0 - args.omega_n) if args.x >= 0 else -q * (1.0 - args.omega_n)
        return w, SimplexPoint(args.x, args.omega_n), nu, nu0
    if args.nu is None or args.nu0 is None:
        raise CliError(EXIT_INVALID, "--nu and --nu0 must be given together")
    w = weights_from_reference(args.nu, args.nu0, q)
    return w, SimplexPoint(args.nu / q, w.w_zero), args.nu, args.nu0


def _q(args) -> int:
    if args.domain:
        return _domain(args).q
    return args.q


def cmd_weights(args, out):
    w, p, _, _ = _coordinates(args, _q(args))
    print(f"{w.w_minus:.6f} {w.w_zero:.6f} {w.w_plus:.6f} {classify(p)}", file=out)


def cmd_classify(args, out):
    if args.x is None or args.omega_n is None:
        raise CliError(EXIT_INVALID, "--x and --omega-n are required")
    print(classify(SimplexPoint(args.x, args.omega_n)), file=out)


def cmd_state(args, out):
    domain = _domain(args)
    w, p, _, _ = _coordinates(args, domain.q)
    for m, weight in zip(domain.sectors, w.as_tuple()):
        print(f"sector {m} {weight:.6f}", file=out)
    print(f"region {classify(p)}", file=out)
    print(f"mean_particle_number {mean_particle_number(domain, w):.6f}", file=out)
    print(f"purity {purity(ensemble_for_weights(domain, w)[0]):.6f}", file=out)


def cmd_energy(args, out):
    domain = _domain(args)
    w, _, nu, nu0 = _coordinates(args, domain.q)
    print(f"energy {dsc.energy(domain, w):.6f}", file=out)
    print(f"edge_energy {dsc.edge_energy(domain, nu0):.6f}", file=out)
    print(f"delta_h {dsc.delta_h(domain, nu, nu0):.6f}", file=out)
    if args.nu0_prime is not None:
        print(f"delta_u {dsc.delta_u(domain, nu, nu0, args.nu0_prime):.6f}", file=out)


def cmd_descriptors(args, out):
    domain = _domain(args)
    d = dsc.descriptor_set(domain, warn=False)
    print(f"I_q={_num(d.i_q)} A_q={_num(d.a_q)} mu0={_num(d.mu0)} "
          f"eta0={_num(d.eta0)} Ebar={_num(d.e_bar)}", file=out)
    if d.convexity_warning:
        print(f"warning: {domain.label}: |A^q| >= I^q (ConvexityWarning)", file=sys.stderr)


def cmd_scan(args, out):
    domain = _domain(args)
    if args.grid < 2:
        raise CliError(EXIT_INVALID, "--grid must be >= 2")
    if not args.output:
        raise CliError(EXIT_INVALID, "--output is required")
    data = scan_csv(scan_rows(domain, args.grid, args.workers))
    try:
        atomic_write(args.output, data)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.output}: {exc.strerror or exc}") from None
    print(f"wrote {(args.grid + 1) ** 2} rows to {args.output}", file=out)


def cmd_verify(args, out):
    import numpy as np

    domains = []
    if args.domain:
        try:
            domains = [to_domain(r) for r in _load_records(args)]
        except DomainError as exc:
            raise CliError(EXIT_IO, f"{args.domain}: {exc}") from None
    count = args.synthetic if args.synthetic is not None else (0 if domains else 100)
    domains += synthetic_domains(count, np.random.default_rng(args.seed))
    if not domains:
        raise CliError(EXIT_INVALID, "no domains to verify (give --domain or --synthetic > 0)")
    start = time.perf_counter()
    results = run_suite(domains, args.seed)
    print(f"seed={args.seed} domains={len(domains)} synthetic={count}", file=out)
    for r in results:
        print(r.line(), file=out)
    failed = [r.name for r in results if not r.passed]
    print(f"summary: {len(results) - len(failed)}/{len(results)} passed", file=out)
    # timing is diagnostic only and kept off the report stream
    print(f"elapsed {time.perf_counter() - start:.1f}s", file=sys.stderr)
    if failed:
        raise CliError(EXIT_VERIFY, "failed: " + ", ".join(failed))


COMMANDS = {
    "weights": (cmd_weights, "weights and region of a simplex point"),
    "state": (cmd_state, "sector decomposition of the mixed state"),
    "energy": (cmd_energy, "ensemble energy, delta_h and optional delta_u"),
    "descriptors": (cmd_descriptors, "I^q, A^q, mu0, eta0 and mean ionic energy"),
    "classify": (cmd_classify, "region label of a simplex point"),
    "scan": (cmd_scan, "write a simplex scan as CSV"),
    "verify": (cmd_verify, "run the invariant suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", help="species catalog (.json or .csv)")
    common.add_argument("--label", help="species label inside the catalog")
    common.add_argument("--format", choices=("csv", "json"), help="catalog format (default: by extension)")
    common.add_argument("--output", help="output path")
    common.add_argument("--grid", type=int, default=200)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--synthetic", type=int)
    common.add_argument("--q", type=int, default=1, help="maximal transfer when no domain is given")
    common.add_argument("--x", type=float, help="charge ratio nu/q")
    common.add_argument("--omega-n", type=float, help="neutral weight")
    common.add_argument("--nu", type=float, help="charge fraction (electrons)")
    common.add_argument("--nu0", type=float, help="edge charge fraction (electrons)")
    common.add_argument("--nu0-prime", type=float, help="second edge fraction for delta_u")

    parser = argparse.ArgumentParser(prog="gcsimplex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command][0](args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
