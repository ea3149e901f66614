"""Command-line entry point: `spectrakit <subcommand> ...`.

Results go to stdout as JSON with sorted keys (CSV for `scan --out`).
Exit codes: 0 success, 2 domain error, 3 resource cap, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import characters, entanglement, partitions, schurweyl, spectra
from .config import RunConfig
from .errors import DomainError, ResourceError
from .qstate import DensityMatrix, von_neumann_entropy, entropy_of

EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(Fraction(x.strip())) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")


def _plain(obj):
    """Make numpy scalars, tuples and partitions JSON friendly."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) + 0.0  # folds -0.0
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True)


def _emit(obj, out=None):
    text = dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_state(path: str) -> DensityMatrix:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read state file {path}: {exc}")
    return DensityMatrix.from_json(data)


# -- subcommands -------------------------------------------------------------


def cmd_dims(args, cfg):
    lam = partitions.as_partition(args.lam)
    result = {
        "lambda": list(lam),
        "d": args.d,
        "f": partitions.dim_symmetric(lam),
        "t": partitions.dim_unitary(lam, args.d),
    }
    if args.tableaux:
        result["standard"] = [t.to_json() for t in partitions.enumerate_standard_tableaux(lam, cfg.caps["standard_tableaux"])]
        result["semistandard"] = [
            t.to_json() for t in partitions.enumerate_semistandard_tableaux(lam, args.d, cfg.caps["semistandard"])
        ]
    _emit(result)


def cmd_kron(args, cfg):
    print(characters.kronecker(args.mu, args.nu, args.lam, cap=cfg.caps["kronecker"]))


def cmd_lr(args, cfg):
    print(characters.littlewood_richardson(args.mu, args.nu, args.lam))


def _two_j(x: float) -> int:
    twice = round(2 * x)
    if abs(2 * x - twice) > 1e-9 or twice < 0:
        raise DomainError(f"spin {x} is not a nonnegative half-integer")
    return int(twice)


def cmd_cg(args, cfg):
    js = characters.clebsch_gordan_su2(_two_j(args.j1), _two_j(args.j2))
    _emit({"j1": args.j1, "j2": args.j2, "j": [j / 2 for j in js]})


def cmd_classical_h(args, cfg):
    h = characters.classical_h(args.mu, args.nu)
    _emit([{"lambda": list(lam), "h": n} for lam, n in sorted(h.items(), reverse=True)])


def cmd_scan(args, cfg):
    cells = spectra.kron_scan(args.lam, cap=cfg.caps["character_table"])
    if args.out:
        Path(args.out).write_text(spectra.scan_csv(cells))
    else:
        sys.stdout.write(spectra.scan_csv(cells))


def cmd_bravyi(args, cfg):
    if args.vertex:
        rho = spectra.bravyi_vertex_state(args.vertex, args.rab)
        triple = spectra.local_spectra(rho)
        report = spectra.bravyi_check(triple)
        if args.out:
            Path(args.out).write_text(dumps(rho.to_json()) + "\n")
        _emit({"vertex": args.vertex, "a": report.a, "b": report.b, "admissible": report.admissible, "slacks": report.slacks})
        return
    if args.a is None or args.b is None:
        raise UsageError("bravyi needs --a and --b, or --vertex")
    report = spectra.bravyi_inequalities(args.a, args.b, args.rab)
    _emit({"a": report.a, "b": report.b, "admissible": report.admissible, "slacks": report.slacks})


def cmd_estimate(args, cfg):
    spec = args.spec
    rho = DensityMatrix(np.diag(np.asarray(spec, dtype=complex)))
    dist = schurweyl.estimate_spectrum(rho, args.k, cap=cfg.caps["character_table"])
    frames = dist.to_json()
    if args.out:
        Path(args.out).write_text(dumps(frames) + "\n")
    result = {"k": args.k, "spectrum": list(dist.spectrum), "total": dist.total(), "argmax": list(dist.argmax())}
    if args.eps is not None:
        result["eps"] = args.eps
        result["mass_within_eps"] = dist.mass_within(args.eps)
    if not args.out:
        result["frames"] = frames
    _emit(result)


def cmd_measures(args, cfg):
    rho = _load_state(args.state)
    if len(rho.dims) != 2:
        raise DomainError(f"expected a bipartite state, got dims {list(rho.dims)}")
    result = {
        "dims": list(rho.dims),
        "entropy": von_neumann_entropy(rho),
        "entropy_A": entropy_of(rho, [0]),
        "entropy_B": entropy_of(rho, [1]),
        "log_negativity": entanglement.log_negativity(rho),
        "trivial_extension": entanglement.trivial_extension_value(rho),
    }
    if tuple(rho.dims) == (2, 2):
        c = entanglement.concurrence(rho)
        result["concurrence"] = c
        result["eof"] = entanglement.eof_from_concurrence(c)
    _emit(result)


def cmd_squashed(args, cfg):
    rho = _load_state(args.state)
    report = entanglement.squashed_upper_bound(rho, env_dim=args.env_dim, seed=cfg.seed, restarts=args.restarts)
    _emit(report.to_json())


def cmd_uncertainty(args, cfg):
    rng = np.random.default_rng(cfg.seed)
    slacks = []
    for _ in range(args.samples):
        env = int(rng.integers(1, args.d + 1))
        channel = entanglement.random_channel(args.d, args.d, env, rng)
        slacks.append(entanglement.channel_uncertainty_check(channel, args.d, args.hadamard).slack)
    ident = entanglement.channel_uncertainty_check(entanglement.ExtensionChannel.identity(args.d), args.d, args.hadamard)
    _emit(
        {
            "d": args.d,
            "samples": args.samples,
            "min_slack": min(slacks) if slacks else None,
            "all_hold": all(s >= -cfg.tolerance for s in slacks),
            "identity": {"chi0": ident.chi0, "chi1": ident.chi1, "mutual": ident.mutual},
        }
    )


def cmd_horn(args, cfg):
    result = spectra.horn_oracle(args.mu, args.nu, args.lam, args.p, restarts=args.restarts, seed=cfg.seed)
    _emit({"residual": result.residual, "spectrum": result.spectrum(), "p": args.p})


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spectrakit", description=__doc__.splitlines()[0])
    parser.add_argument("--tolerance", type=float, default=1e-8, help="numerical tolerance for verdicts")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text, seeded=False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func, seeded=seeded)
        if seeded:
            p.add_argument("--seed", type=int, required=True)
        return p

    p = add("dims", cmd_dims, "f^lambda and t_lambda(d)")
    p.add_argument("--lam", type=_ints, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tableaux", action="store_true", help="also list the tableaux")

    for name, func, text in (("kron", cmd_kron, "Kronecker coefficient"), ("lr", cmd_lr, "Littlewood-Richardson coefficient")):
        p = add(name, func, text)
        p.add_argument("--mu", type=_ints, required=True)
        p.add_argument("--nu", type=_ints, required=True)
        p.add_argument("--lam", type=_ints, required=True)

    p = add("cg", cmd_cg, "SU(2) Clebsch-Gordan series")
    p.add_argument("--j1", type=_number, required=True)
    p.add_argument("--j2", type=_number, required=True)

    p = add("classical-h", cmd_classical_h, "classical analogue coefficients h")
    p.add_argument("--mu", type=_ints, required=True)
    p.add_argument("--nu", type=_ints, required=True)

    p = add("scan", cmd_scan, "Kronecker lattice scan against two-qubit admissibility")
    p.add_argument("--lam", type=_ints, required=True)
    p.add_argument("--out")

    p = add("bravyi", cmd_bravyi, "two-qubit spectral inequalities and vertex states")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--rab", type=_floats, required=True)
    p.add_argument("--vertex", choices=["A", "B", "C", "D"])
    p.add_argument("--out", help="write the vertex state as JSON")

    p = add("estimate", cmd_estimate, "Young-frame measurement distribution")
    p.add_argument("--spec", type=_floats, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--out")

    p = add("measures", cmd_measures, "entanglement measures of a bipartite state")
    p.add_argument("--state", required=True)

    p = add("squashed", cmd_squashed, "squashed entanglement upper bound", seeded=True)
    p.add_argument("--state", required=True)
    p.add_argument("--env-dim", type=int)
    p.add_argument("--restarts", type=int, default=32)

    p = add("uncertainty", cmd_uncertainty, "channel uncertainty relation on random channels", seeded=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--hadamard", action="store_true")

    p = add("horn", cmd_horn, "Horn problem search", seeded=True)
    p.add_argument("--mu", type=_floats, required=True)
    p.add_argument("--nu", type=_floats, required=True)
    p.add_argument("--lam", type=_floats, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--restarts", type=int, default=64)
    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        cfg = RunConfig(seed=getattr(args, "seed", None), tolerance=args.tolerance, output=getattr(args, "out", None))
        args.func(args, cfg)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return EXIT_OK


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
