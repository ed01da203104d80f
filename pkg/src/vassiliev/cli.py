"""Command line front end.

Subcommands:

  dims     quotient dimension table (TSV on stdout)
  axioms   structural identity report (JSON on stdout)
  eval     evaluate an invariant on a knot code (exact rational on stdout)
  certify  nontriviality certificates (JSON on stdout)

Every run writes a RunManifest next to the cache so a rerun with the same
command and configuration can be checked for byte-identical output.  All
numbers are exact rationals, never decimals.  Exit codes: 0 success, 1 a
check failed, 2 usage error, 3 resource cap exceeded.

The cache directory defaults to .vassiliev-cache in the working directory
and can be moved with the VASSILIEV_CACHE_DIR environment variable.
Quotient dimensions are cached content-addressed by (space, degree,
one-term flag, artifact version); writes go through a temporary file and
an atomic rename.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction

from .caps import DEGREE_CAP, DOUBLE_POINT_CAP, SKEIN_CROSSING_CAP, \
    ResourceCapExceeded
from .diagrams import enumerate_diagrams
from .hopf import check_axioms
from .invariants import (CertificationError, InvariantSpec, certify_nontrivial,
                         conway, vassiliev_eval)
from .knots import SingularKnotDiagram
from .quotients import build_quotient

VERSION = "1.0"

_SPACES = {"a": "A", "a0": "A0", "aw": "Aw", "al": "Al", "ab0": "Ab0"}


def cache_dir():
    return os.environ.get("VASSILIEV_CACHE_DIR",
                          os.path.join(os.getcwd(), ".vassiliev-cache"))


def _atomic_write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path))
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _digest(obj):
    return hashlib.sha256(
        json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _cached(key, compute):
    """Content-addressed cache: key describes the computation, the file
    holds its JSON result."""
    path = os.path.join(cache_dir(), "obj", _digest(key) + ".json")
    if os.path.exists(path):
        with open(path) as f:
            return json.load(f)
    value = compute()
    _atomic_write(path, json.dumps(value, sort_keys=True))
    return value


def write_manifest(command, params, output_text):
    manifest = {
        "command": command,
        "parameters": params,
        "caps": {"degree": DEGREE_CAP, "double_points": DOUBLE_POINT_CAP,
                 "skein_crossings": SKEIN_CROSSING_CAP},
        "version": VERSION,
        "output_sha256": hashlib.sha256(output_text.encode()).hexdigest(),
    }
    text = json.dumps(manifest, sort_keys=True, indent=1)
    path = os.path.join(cache_dir(), "manifests",
                        _digest(manifest) + ".json")
    _atomic_write(path, text)
    return manifest


def _emit(out, command, params, text):
    out.write(text)
    write_manifest(command, params, text)
    return 0


def quotient_dim(space, n, one_term):
    key = {"kind": "quotient-dim", "space": space, "n": n,
           "one_term": one_term, "version": VERSION}
    return _cached(key, lambda: build_quotient(n, space, one_term).dim)


def cmd_dims(args, out):
    space = _SPACES[args.flavor]
    lines = ["degree\tdim"]
    for n in range(args.max_degree + 1):
        lines.append("%d\t%d" % (n, quotient_dim(space, n, args.with_1t)))
    text = "\n".join(lines) + "\n"
    return _emit(out, "dims", {"flavor": args.flavor,
                               "max_degree": args.max_degree,
                               "with_1t": args.with_1t}, text)


def cmd_axioms(args, out):
    report = check_axioms(max_degree=args.max_degree)
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    _emit(out, "axioms", {"max_degree": args.max_degree}, text)
    return 0 if all(v for k, v in report.items() if isinstance(v, bool)) else 1


def _parse_invariant(name):
    if name == "v2":
        return InvariantSpec.v2_spec()
    if name == "conway":
        return None  # whole polynomial, handled separately
    if name.startswith("c") and name[1:].isdigit():
        return InvariantSpec.conway_coefficient(int(name[1:]))
    if name.startswith("v2^") and name[3:].isdigit():
        return InvariantSpec.v2_power(int(name[3:]))
    raise ValueError("unknown invariant %r (try v2, conway, c<m>, v2^<k>)"
                     % name)


def _load_knot(arg):
    if os.path.exists(arg):
        with open(arg) as f:
            arg = f.read().strip()
    if arg.lstrip().startswith("{"):
        return SingularKnotDiagram.from_json(arg)
    return SingularKnotDiagram.parse(arg)


def _rational(q):
    q = Fraction(q)
    return str(q)


def cmd_eval(args, out):
    knot = _load_knot(args.knot)
    if args.invariant == "conway":
        if knot.degree:
            raise ValueError("the conway command needs a nonsingular knot; "
                             "use c<m> coefficients on singular ones")
        text = repr(conway(knot)) + "\n"
    else:
        spec = _parse_invariant(args.invariant)
        text = _rational(vassiliev_eval(spec, knot)) + "\n"
    return _emit(out, "eval", {"invariant": args.invariant,
                               "knot": knot.to_gauss_code()}, text)


def _pattern_of(word, n):
    if word is None:
        return ["crossed"] * n
    names = {"x": "crossed", "p": "parallel"}
    try:
        return [names[ch] for ch in word]
    except KeyError:
        raise ValueError("pattern must be a word in x (crossed) and "
                         "p (parallel), got %r" % word)


def cmd_certify(args, out):
    if args.family == "v2power":
        certs = [certify_nontrivial("v2power", n=args.n)]
    elif args.family == "yasuhara":
        diagrams = enumerate_diagrams(args.n, "ordered")
        if args.diagram is not None:
            diagrams = [diagrams[args.diagram]]
        certs = [certify_nontrivial("yasuhara", diagram=d,
                                    pattern=_pattern_of(args.pattern, args.n))
                 for d in diagrams]
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.family)
    text = json.dumps(certs, sort_keys=True, indent=1) + "\n"
    _emit(out, "certify", {"family": args.family, "n": args.n,
                           "pattern": args.pattern,
                           "diagram": args.diagram}, text)
    return 0 if all(c["nontrivial"] for c in certs) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vassiliev",
        description="chord diagram algebras and Vassiliev invariants, "
                    "in exact arithmetic")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="quotient dimension table")
    p.add_argument("--flavor", choices=sorted(_SPACES), required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--with-1t", action="store_true",
                   help="also impose the one-term relation")
    p.set_defaults(run=cmd_dims)

    p = sub.add_parser("axioms", help="structural identity report")
    p.add_argument("--max-degree", type=int, default=3)
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("eval", help="evaluate an invariant on a knot")
    p.add_argument("--invariant", required=True)
    p.add_argument("--knot", required=True,
                   help="extended Gauss code, or a file holding one")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("certify", help="nontriviality certificates")
    p.add_argument("--family", choices=["v2power", "yasuhara"],
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", default=None,
                   help="perturbation pattern, a word in x/p (yasuhara)")
    p.add_argument("--diagram", type=int, default=None,
                   help="index of a single degree-n diagram (yasuhara)")
    p.set_defaults(run=cmd_certify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 2
    try:
        return args.run(args, out)
    except ResourceCapExceeded as e:
        print("resource cap exceeded: %s" % e, file=sys.stderr)
        return 3
    except CertificationError as e:
        print("certification failed: %s" % e, file=sys.stderr)
        return 1
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
