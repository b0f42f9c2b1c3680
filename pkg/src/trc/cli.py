"""Command-line front end.

Subcommands:

* ``certify matmul|tensor``: run the certification pipeline, emit a
  certificate JSON.
* ``table``: CSV of lower bound formulas per n, with reference bounds.
* ``flatten matmul|tensor``: dump a flattening matrix with its index books.
* ``verify``: check a decomposition against a tensor.
* ``sweep``: randomized soundness sweep.

Exit codes: 0 success, 1 usage error, 2 certification incomplete or
verification failure, 3 I/O error.  All runs are deterministic given
--seed; without it a seed is drawn from OS entropy and echoed on stderr.
The environment variable TRC_DEFAULT_PRIME overrides the default prime.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

from ._version import VERSION
from .certify import (
    _draw_subspace,
    certify_matmul,
    certify_tensor,
    reference_bounds,
    simple_rank_lb,
    theorem_rank_lb,
)
from .errors import (
    InvalidArguments,
    NotFullRank,
    SweepViolation,
    TrcError,
)
from .field import DEFAULT_PRIME, DEFAULT_PRIMES, Rng, check_modulus
from .flattening import build_koszul, build_reduced_matmul
from .oracle import load_known, registry_names, soundness_sweep
from .tensor import Decomposition, Tensor3, verify_decomposition

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCOMPLETE = 2
EXIT_IO = 3


class _IOFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; we reserve 2 for
    incomplete certifications, so remap usage errors to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_prime() -> int:
    raw = os.environ.get("TRC_DEFAULT_PRIME")
    if raw is None:
        return DEFAULT_PRIME
    try:
        q = int(raw)
    except ValueError:
        raise InvalidArguments(f"TRC_DEFAULT_PRIME={raw!r} is not an integer")
    check_modulus(q)
    return q


def _default_primes() -> tuple:
    if os.environ.get("TRC_DEFAULT_PRIME") is not None:
        return (_default_prime(),)
    return DEFAULT_PRIMES


def _parse_primes(text: str | None) -> tuple | None:
    if text is None:
        return None
    try:
        primes = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise InvalidArguments(f"bad --primes value {text!r}")
    if not primes:
        raise InvalidArguments("--primes needs at least one prime")
    for q in primes:
        check_modulus(q)
    return primes


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(63)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise _IOFailure(f"cannot read {path}: {exc}")


def _emit(payload, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path is None:
        print(text)
        return
    try:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise _IOFailure(f"cannot write {out_path}: {exc}")


def _emit_text(text: str, out_path: str | None) -> None:
    if out_path is None:
        print(text, end="")
        return
    try:
        with open(out_path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out_path}: {exc}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_certify(args) -> int:
    seed = _resolve_seed(args)
    primes = _parse_primes(args.primes) or _default_primes()
    sample_prime = _default_prime()
    if args.target == "matmul":
        m = args.m if args.m is not None else args.n
        try:
            cert = certify_matmul(
                args.n,
                m,
                args.p,
                seed,
                primes=primes,
                retries=args.retries,
                sample_prime=sample_prime,
                exact=args.exact,
            )
        except NotFullRank as exc:
            print(f"incomplete: {exc}", file=sys.stderr)
            _emit(exc.certificate.to_json(), args.out)
            return EXIT_INCOMPLETE
        _emit(cert.to_json(), args.out)
        return EXIT_OK
    tensor = Tensor3.from_json(_read_json(args.infile))
    cert = certify_tensor(
        tensor,
        args.p,
        seed,
        primes=primes,
        retries=args.retries,
        sample_prime=sample_prime,
        exact=args.exact,
    )
    _emit(cert.to_json(), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    if args.n_max < 2:
        raise InvalidArguments("--n-max must be at least 2")
    if args.p_max < 1:
        raise InvalidArguments("--p-max must be at least 1")
    header = ["n", "m"]
    header += [f"theorem_p{p}" for p in range(1, args.p_max + 1)]
    header += ["simple_best", "blaser", "lo_borderrank", "winner"]
    lines = [",".join(header)]
    for n in range(2, args.n_max + 1):
        m = args.m if args.m is not None else n
        refs = reference_bounds(n, m)
        row = [str(n), str(m)]
        values = {}
        for p in range(1, args.p_max + 1):
            if p <= n - 1:
                values[p] = theorem_rank_lb(n, m, p)
                row.append(str(values[p]))
            else:
                row.append("")
        simple_best = max(
            simple_rank_lb(n, m, p) for p in range(1, min(n - 1, args.p_max) + 1)
        )
        row.append(str(simple_best))
        row.append(str(refs["blaser"]))
        row.append(str(refs["lo_borderrank"]))
        winner = max(sorted(values), key=lambda p: (values[p], -p))
        row.append(f"p{winner}")
        lines.append(",".join(row))
    _emit_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_flatten(args) -> int:
    if args.target == "matmul":
        seed = _resolve_seed(args)
        if args.p < 1 or args.p > args.n - 1:
            raise InvalidArguments(f"need 1 <= p <= n-1, got p={args.p}, n={args.n}")
        q0 = _default_prime()
        rng = Rng(seed)
        w = _draw_subspace(2 * args.p + 1, args.n * args.n, q0, rng)
        flat = build_reduced_matmul(args.n, w, args.p)
    else:
        tensor = Tensor3.from_json(_read_json(args.infile))
        flat = build_koszul(tensor, args.p)
    matrix_json = flat.matrix.to_json()
    books = flat.books_json()
    if args.out is None:
        _emit({"matrix": matrix_json, "books": books}, None)
        return EXIT_OK
    _emit(matrix_json, args.out)
    root, ext = os.path.splitext(args.out)
    _emit(books, f"{root}.books{ext or '.json'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    tensor = Tensor3.from_json(_read_json(args.tensor))
    if args.decomp in registry_names() and not os.path.exists(args.decomp):
        decomp = load_known(args.decomp).decomposition
    else:
        decomp = Decomposition.from_json(_read_json(args.decomp))
    if verify_decomposition(tensor, decomp):
        print(f"VALID ({len(decomp.terms)} terms)")
        return EXIT_OK
    print("INVALID", file=sys.stderr)
    return EXIT_INCOMPLETE


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    dims = tuple(int(x) for x in args.dims.split(","))
    if len(dims) != 3:
        raise InvalidArguments(f"--dims wants three integers, got {args.dims!r}")
    try:
        report = soundness_sweep(
            dims=dims,
            p=args.p,
            r_max=args.rmax,
            trials=args.trials,
            seed=seed,
            q=_default_prime(),
        )
    except SweepViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        _emit(exc.repro, args.out)
        return EXIT_INCOMPLETE
    _emit(report.to_json(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"trc {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_nm: bool):
        if with_nm:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--m", type=int)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--seed", type=int)

    cert = sub.add_parser("certify", help="certify a lower bound")
    cert_sub = cert.add_subparsers(dest="target", required=True)
    cm = cert_sub.add_parser("matmul", help="n x n by n x m matrix multiplication")
    add_common(cm, with_nm=True)
    ct = cert_sub.add_parser("tensor", help="arbitrary order-3 tensor from JSON")
    ct.add_argument("--in", dest="infile", required=True)
    add_common(ct, with_nm=False)
    for p_ in (cm, ct):
        p_.add_argument("--primes", help="comma-separated rank-check primes")
        p_.add_argument("--retries", type=int, default=3)
        p_.add_argument("--exact", action="store_true", help="exact rational rank")
        p_.add_argument("--out")
        p_.set_defaults(func=cmd_certify)

    table = sub.add_parser("table", help="bound table as CSV")
    table.add_argument("--n-max", type=int, required=True)
    table.add_argument("--m", type=int, help="fixed m (default: m = n)")
    table.add_argument("--p-max", type=int, default=2)
    table.add_argument("--out")
    table.set_defaults(func=cmd_table)

    flat = sub.add_parser("flatten", help="dump a flattening matrix")
    flat_sub = flat.add_subparsers(dest="target", required=True)
    fm = flat_sub.add_parser("matmul", help="reduced flattening of a random subspace")
    add_common(fm, with_nm=True)
    ft = flat_sub.add_parser("tensor", help="full flattening of a JSON tensor")
    ft.add_argument("--in", dest="infile", required=True)
    add_common(ft, with_nm=False)
    for p_ in (fm, ft):
        p_.add_argument("--out")
        p_.set_defaults(func=cmd_flatten)

    ver = sub.add_parser("verify", help="check a decomposition against a tensor")
    ver.add_argument("--tensor", required=True)
    ver.add_argument(
        "--decomp", required=True, help="decomposition JSON path or registry name"
    )
    ver.set_defaults(func=cmd_verify)

    sweep = sub.add_parser("sweep", help="randomized soundness sweep")
    sweep.add_argument("--p", type=int, default=1)
    sweep.add_argument("--rmax", type=int, default=5)
    sweep.add_argument("--trials", type=int, default=100)
    sweep.add_argument("--dims", default="5,4,4")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--out")
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvalidArguments as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TrcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
