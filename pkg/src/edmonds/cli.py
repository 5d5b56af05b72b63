"""Command-line entry point: ``edmonds <command> [options]``.

Every command writes one JSON document to stdout (and to ``--json-out``
when given).  Output is a function of instance, seed and version, except
for the ``timing`` block.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 field or
resource error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time


from . import __version__
from .errors import (
    DegreeCapExceeded,
    EdmondsError,
    FieldTooSmallError,
    InstanceTooLargeError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidWitnessError,
    UnsupportedCharacteristicError,
)
from .io import (
    dump_json,
    encode_matrix,
    encode_subspace,
    load_instance,
    ncrk_result_from_dict,
    ncrk_result_to_dict,
    read_json,
    result_header,
)
from .linalg import rank
from .mspace import commutative_rank_estimate
from .ncrank import degree_bounds, ncrk_main
from .oracle import oracle_report
from .wong import second_wong

log = logging.getLogger("edmonds")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class VerificationFailed(Exception):
    pass


def _estimate_dict(F, est):
    return {
        "rank": est.rank,
        "trials": est.trials,
        "sample_size": est.sample_size,
        "failure_bound": float(est.failure_bound),
        "stable": est.stable,
        "coeffs": encode_matrix(F, est.coeffs) if est.coeffs is not None else [],
    }


def cmd_rank(args):
    inst = load_instance(args.instance, args.field_override)
    space = inst.space
    est = commutative_rank_estimate(space, args.trials, seed=args.seed, sample_size=args.sample_size)
    doc = result_header("rank", space, args.seed, inst.name)
    doc["rank_estimate"] = est.rank
    doc["confidence"] = _estimate_dict(space.field, est)
    return doc


def cmd_ncrank(args):
    inst = load_instance(args.instance, args.field_override)
    space = inst.space
    doc = result_header("ncrank", space, args.seed, inst.name)
    est = commutative_rank_estimate(space, args.trials, seed=args.seed, sample_size=args.sample_size)
    doc["rank_estimate"] = est.rank
    doc["confidence"] = _estimate_dict(space.field, est)
    try:
        res = ncrk_main(space, seed=args.seed, trials=args.trials, sample_size=args.sample_size,
                        cap_dim=args.cap_dim, deterministic=args.deterministic)
    except DegreeCapExceeded as exc:
        if exc.partial is not None:
            doc["partial"] = ncrk_result_to_dict(space, exc.partial)
        doc["error"] = str(exc)
        _emit(args, doc)
        raise
    doc.update(ncrk_result_to_dict(space, res))
    return doc


def _parse_pivot(space, text):
    F = space.field
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",") if p.strip()]
    # a lone value is a basis index, also when m == 1
    if len(parts) == 1:
        try:
            idx = int(parts[0])
        except ValueError:
            raise InvalidInputError(f"pivot index {parts[0]!r} is not an integer") from None
        if not 0 <= idx < space.m:
            raise InvalidInputError(f"pivot index {idx} out of range 0..{space.m - 1}")
        return space.basis[idx]
    if len(parts) != space.m:
        raise InvalidInputError(f"pivot needs one index or {space.m} coefficients")
    try:
        return space.element(F.array(parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad pivot coefficient ({exc})") from None


def cmd_wong(args):
    inst = load_instance(args.instance, args.field_override)
    space = inst.space
    F = space.field
    A = _parse_pivot(space, args.pivot_matrix)
    if A is None:
        est = commutative_rank_estimate(space, args.trials, seed=args.seed, sample_size=args.sample_size)
        A = space.element(est.coeffs) if space.m else F.zeros((space.n, space.n))
    res = second_wong(A, space)
    doc = result_header("wong", space, args.seed, inst.name)
    doc["pivot"] = encode_matrix(F, A)
    doc["pivot_rank"] = rank(F, A)
    doc["stage_dims"] = res.dims()
    doc["stages"] = [encode_subspace(F, W) for W in res.stages]
    doc["contained_in_image"] = res.contained_in_image
    doc["first_escape"] = res.first_escape
    if res.contained_in_image:
        U = res.witness
        W = space.apply(U)
        doc["witness"] = {"U": encode_subspace(F, U), "W": encode_subspace(F, W), "c": U.dim - W.dim}
    else:
        doc["chain_length"] = len(res.chain)
    return doc


def cmd_verify(args):
    inst = load_instance(args.instance, args.field_override)
    space = inst.space
    doc = read_json(args.result)
    try:
        res = ncrk_result_from_dict(space, doc)
    except InvalidWitnessError as exc:
        raise VerificationFailed(f"witness rejected: {exc}") from None
    ok = res.verify(space)
    out = result_header("verify", space, doc.get("seed"), inst.name)
    out["verified"] = bool(ok)
    out["ncrk"] = res.ncrk
    if not ok:
        _emit(args, out)
        raise VerificationFailed("witness or rank certificate does not check out")
    return out


def cmd_bounds(args):
    b = degree_bounds(args.n, args.m)
    doc = result_header("bounds", None, args.seed)
    doc["bounds"] = b.as_dict()
    return doc


def cmd_oracle(args):
    inst = load_instance(args.instance, args.field_override)
    space = inst.space
    rep = oracle_report(space, q=args.q, d_cap=args.d_cap, trials=args.trials, seed=args.seed)
    doc = result_header("oracle", space, args.seed, inst.name)
    doc["oracle"] = rep.as_dict()
    return doc


# ---------------------------------------------------------------------------


def _common(parser, suppress: bool):
    """Flags accepted both before and after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    parser.add_argument("--json-out", default=d(None), metavar="PATH", help="also write the JSON result here")
    parser.add_argument("--deterministic", action="store_true", default=d(False),
                        help="grid specialization instead of random points (slow)")
    parser.add_argument("--sample-size", type=int, default=d(None), metavar="K",
                        help="size of the random sample set")
    parser.add_argument("--cap-dim", type=int, default=d(2000), metavar="ROWS",
                        help="largest blow-up dimension allowed (default 2000)")
    parser.add_argument("--field-override", default=d(None), metavar="FIELD",
                        help="read the instance over another field, e.g. Fp:7 or Q")
    parser.add_argument("--trials", type=int, default=d(16), help="random trials (default 16)")
    parser.add_argument("-v", "--verbose", action="count", default=d(0))


def build_parser():
    p = argparse.ArgumentParser(prog="edmonds", description="Commutative and non-commutative rank of matrix spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, instance=True):
        sp = sub.add_parser(name, help=help_text)
        _common(sp, suppress=True)
        if instance:
            sp.add_argument("instance", help="instance JSON file")
        sp.set_defaults(func=func)
        return sp

    add("rank", cmd_rank, "randomized commutative rank")
    add("ncrank", cmd_ncrank, "non-commutative rank with certificates")
    sp = add("wong", cmd_wong, "second Wong sequence of a pivot matrix")
    sp.add_argument("--pivot-matrix", metavar="INDEX|C1,C2,...",
                    help="basis index or comma-separated coefficients (default: best random member)")
    sp = add("verify", cmd_verify, "re-check a result file against its instance")
    sp.add_argument("result", help="result JSON produced by ncrank")
    sp = add("bounds", cmd_bounds, "degree bounds for n x n matrix tuples", instance=False)
    sp.add_argument("n", type=int)
    sp.add_argument("m", type=int, nargs="?", default=1)
    sp = add("oracle", cmd_oracle, "brute-force sandwich bounds")
    sp.add_argument("--q", type=int, default=2, help="enumerate subspaces of F_q^n (default 2)")
    sp.add_argument("--d-cap", type=int, default=3, help="largest blow-up degree searched (default 3)")
    return p


def _emit(args, doc):
    doc.setdefault("timing", {})["seconds"] = round(time.perf_counter() - args._t0, 6)
    text = dump_json(doc)
    sys.stdout.write(text)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    args._emitted = True


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    args._t0 = time.perf_counter()
    args._emitted = False
    try:
        doc = args.func(args)
    except VerificationFailed as exc:
        print(f"edmonds: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (FieldTooSmallError, InstanceTooLargeError, DegreeCapExceeded,
            UnsupportedCharacteristicError) as exc:
        print(f"edmonds: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InternalConsistencyError as exc:
        print(f"edmonds: internal error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (EdmondsError, ValueError) as exc:
        print(f"edmonds: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"edmonds: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, doc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
