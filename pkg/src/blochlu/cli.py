"""Command-line interface: ``blochlu <command> ...``.

Exit codes for ``compare``: 0 equivalent, 1 inequivalent, 2 inconclusive.
Every command exits with 3 on input or validation errors and 4 on usage
errors.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bloch import extract_tensors
from .decide import DecideConfig, decide_equivalence
from .errors import BlochLUError
from .invariants import compute_invariants, genericity
from .io import (
    dumps,
    lu_to_dict,
    read_local_unitary,
    read_state,
    state_to_dict,
    tensors_to_dict,
    write_local_unitary,
    write_state,
)
from .qstate import apply_local_unitary, random_density, random_local_unitary
from .selftest import run_selftest
from .words import enumerate_words, families_by_label

EXIT_ERROR = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _default_seed():
    env = os.environ.get("BLOCHLU_SEED")
    return int(env) if env not in (None, "") else None


def _emit(doc, out=None):
    text = dumps(doc) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _genericity_doc(rep):
    return {
        "generic": rep.generic,
        "rank_tol": rep.rank_tol,
        "families": {lab: {"dimension": fr.dimension, "rank": fr.rank,
                           "singular_values": list(fr.singular_values)}
                     for lab, fr in rep.families.items()},
    }


def cmd_extract(args):
    t = extract_tensors(read_state(args.state, atol=args.atol))
    _emit(tensors_to_dict(t), args.output)
    return 0


def cmd_invariants(args):
    t = extract_tensors(read_state(args.state, atol=args.atol))
    inv = compute_invariants(t, args.scheme, args.extended)
    doc = {
        "tool": "blochlu",
        "version": __version__,
        "scheme": inv.scheme,
        "n_qubits": t.n_qubits,
        "tolerances": {"atol": args.atol, "rank_tol": args.rank_tol},
        "entries": [[lab, float(v)] for lab, v in inv],
    }
    if 2 <= t.n_qubits <= 4:
        doc["genericity"] = _genericity_doc(genericity(t, args.rank_tol))
    _emit(doc, args.output)
    return 0


def cmd_compare(args):
    a, b = read_state(args.a, atol=args.atol), read_state(args.b, atol=args.atol)
    cfg = DecideConfig(rtol=args.rtol, atol=args.atol, verify_tol=args.verify_tol,
                       rank_tol=args.rank_tol, extended=args.extended)
    d = decide_equivalence(a, b, cfg)
    doc = {"verdict": str(d.verdict), "branch": d.branch}
    if d.separating is not None:
        s = d.separating
        doc["separating"] = {"label": s.label, "value": s.value, "value_prime": s.value_prime, "gap": s.gap}
    if d.residual is not None:
        doc["residual"] = d.residual
    doc["certified_by_invariants_only"] = d.certified_by_invariants_only
    if d.notes:
        doc["notes"] = d.notes
    if args.witness and d.witness is not None:
        doc["witness"] = lu_to_dict(d.witness)["factors"]
    if d.genericity[0] is not None:
        doc["genericity"] = [_genericity_doc(g) for g in d.genericity]
    _emit(doc)
    return d.exit_code


def cmd_apply(args):
    state = read_state(args.state, atol=args.atol)
    if args.unitary:
        lu, extra = read_local_unitary(args.unitary), {"source": str(args.unitary)}
    else:
        seed = args.seed if args.seed is not None else _default_seed()
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % 2**63)
        lu, extra = random_local_unitary(state.n_qubits, np.random.default_rng(seed)), {"seed": seed}
    new = apply_local_unitary(state, lu)
    out = Path(args.output)
    lu_path = Path(args.lu_output) if args.lu_output else out.with_name(out.stem + ".lu.json")
    write_state(out, new)
    write_local_unitary(lu_path, lu, **extra)
    _emit({"state": str(out), "local_unitary": str(lu_path), **extra})
    return 0


def cmd_random(args):
    seed = args.seed if args.seed is not None else _default_seed()
    state = random_density(args.qubits, args.rank, np.random.default_rng(seed))
    _emit(state_to_dict(state), args.output)
    return 0


def cmd_words(args):
    if args.target:
        target = tuple(int(c) for c in args.target)
        fam = enumerate_words(args.qubits, target, args.degree_cap)
    else:
        fams = families_by_label(args.qubits)
        aliases = {"O1": "O1|23", "O2": "O2|31", "O3": "O3|12"} if args.qubits == 3 else {}
        label = aliases.get(args.family, args.family)
        if label not in fams:
            raise BlochLUError(f"unknown family {args.family!r}; known: {', '.join(fams)}")
        fam = fams[label]
    print(f"# {fam.label}: {len(fam.words)} words in R^{fam.dimension_bound}")
    for w in fam.words:
        print(w)
    return 0


def cmd_selftest(args):
    seed = args.seed if args.seed is not None else _default_seed()
    results = run_selftest(args.trials, 0 if seed is None else seed)
    if not results:
        print("no trials run")
        return 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name:<16} trials={r.trials} failures={r.failures} worst={r.worst:.3e}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="blochlu", description="Local-unitary invariants of multi-qubit states")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tol(sp):
        sp.add_argument("--atol", type=float, default=1e-10, help="absolute tolerance (default 1e-10)")

    sp = sub.add_parser("extract", help="dump all Bloch correlation tensors")
    sp.add_argument("state")
    sp.add_argument("-o", "--output")
    tol(sp)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("invariants", help="print an invariant vector with genericity")
    sp.add_argument("state")
    sp.add_argument("--scheme", default="auto", choices=["auto", "12", "90", "gram"])
    sp.add_argument("--extended", action="store_true", help="add symmetric completions (three qubits)")
    sp.add_argument("--rank-tol", type=float, default=1e-10)
    sp.add_argument("-o", "--output")
    tol(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("compare", help="decide LU equivalence of two states")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--rtol", type=float, default=1e-8)
    sp.add_argument("--verify-tol", type=float, default=1e-7)
    sp.add_argument("--rank-tol", type=float, default=1e-10)
    sp.add_argument("--extended", action="store_true")
    sp.add_argument("--witness", action="store_true", help="print SU(2) factors of the witness")
    tol(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("apply", help="apply a local unitary and save it next to the result")
    sp.add_argument("state")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--seed", type=int)
    g.add_argument("--unitary", help="local-unitary JSON file")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--lu-output", help="default: <output stem>.lu.json")
    tol(sp)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("random", help="sample a random density matrix")
    sp.add_argument("--qubits", type=int, required=True)
    sp.add_argument("--rank", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("words", help="list the words of an orbit family")
    sp.add_argument("--qubits", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", help="e.g. O1, O2 (2 qubits), O1|23, O23|1 (3 qubits), O1|234 (4 qubits)")
    g.add_argument("--target", help="target qubit sequence, e.g. 31")
    sp.add_argument("--degree-cap", type=int)
    sp.set_defaults(func=cmd_words)

    sp = sub.add_parser("selftest", help="run the randomized property suites")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BlochLUError, OSError, KeyError, TypeError) as exc:
        print(f"blochlu {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
