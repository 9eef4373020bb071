"""Command-line front end.

Exit codes: 0 decided or passed, 1 input error, 2 refuted or not equivalent,
3 unknown or certified only to a depth.  Reports are sorted-key JSON on
standard output and are byte-identical across runs unless ``--timing`` is given.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import serialize as S
from .basismaps import IDENTITY
from .dynamics import (
    Conjugate,
    DepthCertified,
    Endomorphism,
    Equal,
    NotConjugate,
    NotEqual,
    Unknown,
    decide_endo_conjugate,
    decide_endo_equal,
    intertwiner_check,
)
from .equivalence import (
    NotEquivalent,
    QuasifreeWitness,
    Refuted,
    ScalarVerified,
    decide_bh_quasifree,
    scalar_free_check,
    verify_quasifree,
)
from .hilbert_modules import basis_to_unitary, check_orthonormal, check_unitary_matrix, fd_to_k0, ibn, unit_order
from .scalars import format_matrix
from .symbolic import evaluate
from .words import SparseVector
from .wold import multiplicity, wold

OK, INPUT_ERROR, REFUTED, UNKNOWN = 0, 1, 2, 3

VERIFY_DEPTH = 4
REFUTE_DEPTH = 3


class InputError(Exception):
    pass


def _rep_pair(args):
    return S.load_representation(args.omega), S.load_representation(args.tau)


def _pair_inputs(omega, tau) -> dict:
    return {"omega": S.representation_to_json(omega), "tau": S.representation_to_json(tau)}


def _write_witness(path, q, omega, tau):
    Path(path).write_text(S.dumps(S.witness_to_json(q, omega, tau)) + "\n")


# -- subcommands ---------------------------------------------------------------------


def cmd_mult(args):
    return str(multiplicity(S.load_representation(args.rep))), OK


def cmd_wold(args):
    rep = S.load_representation(args.rep)
    return {"input": S.representation_to_json(rep), **wold(rep).to_json()}, OK


def cmd_equiv(args):
    omega, tau = _rep_pair(args)
    doc = {"mode": args.mode, "inputs": _pair_inputs(omega, tau), "depth": args.depth}
    if args.mode == "bh-quasifree":
        res = decide_bh_quasifree(omega, tau)
        if isinstance(res, NotEquivalent):
            doc.update(decision="NotEquivalent", multiplicity={"omega": res.mult_omega, "tau": res.mult_tau})
            return doc, REFUTED
        mult = multiplicity(omega)
        report = verify_quasifree(omega, tau, res.witness, args.depth)
        doc.update(
            decision="Equivalent",
            multiplicity={"omega": mult, "tau": mult},
            witness=S.witness_to_json(res.witness, omega, tau),
            verification=S.report_to_json(report, omega.layout),
        )
        if args.emit_witness:
            _write_witness(args.emit_witness, res.witness, omega, tau)
        return doc, OK
    res = scalar_free_check(omega, tau, args.depth)
    if isinstance(res, Refuted):
        doc.update(
            decision="Refuted",
            counterexample=S.counterexample_to_json(res.counterexample, omega.layout),
            candidate=None if res.candidate is None else format_matrix(res.candidate),
        )
        return doc, REFUTED
    q = QuasifreeWitness(IDENTITY, res.witness)
    doc.update(
        decision="ScalarVerified" if isinstance(res, ScalarVerified) else "Inconclusive",
        witness=S.witness_to_json(q, omega, tau),
        verification=S.report_to_json(res.report, omega.layout),
    )
    if args.emit_witness:
        _write_witness(args.emit_witness, q, omega, tau)
    return doc, OK if isinstance(res, ScalarVerified) else UNKNOWN


def cmd_verify(args):
    omega, tau = _rep_pair(args)
    q = S.parse_file(args.witness, S.witness_from_json, omega, tau)
    report = verify_quasifree(omega, tau, q, args.depth)
    doc = {
        "inputs": {**_pair_inputs(omega, tau), "witness": S.witness_to_json(q, omega, tau)},
        "flavor": q.U.flavor,
        "verification": S.report_to_json(report, omega.layout),
    }
    return doc, OK if report.passed else REFUTED


def cmd_endo_equal(args):
    omega, tau = _rep_pair(args)
    res = decide_endo_equal(omega, tau, args.depth)
    doc = {"inputs": _pair_inputs(omega, tau), "depth": args.depth, "decision": type(res).__name__}
    if isinstance(res, (Equal, DepthCertified)):
        doc["witness"] = format_matrix(res.witness.scalar_matrix())
        return doc, OK if isinstance(res, Equal) else UNKNOWN
    assert isinstance(res, NotEqual)
    doc["reason"] = res.reason
    if res.operator is not None:
        lay = omega.layout
        doc["operator"] = S.sparse_operator_to_json(res.operator, lay)
        doc["alpha_image"] = S.sparse_operator_to_json(res.alpha_image)
        doc["beta_image"] = S.sparse_operator_to_json(res.beta_image)
    return doc, REFUTED


def cmd_endo_conjugate(args):
    omega, tau = _rep_pair(args)
    q = None
    if args.witness:
        q = S.parse_file(args.witness, S.witness_from_json, omega, tau)
    res = decide_endo_conjugate(omega, tau, q, args.depth)
    doc = {"inputs": _pair_inputs(omega, tau), "depth": args.depth, "decision": type(res).__name__}
    if isinstance(res, (Conjugate, DepthCertified)):
        doc["witness"] = S.witness_to_json(res.witness, omega, tau)
        if args.emit_witness:
            _write_witness(args.emit_witness, res.witness, omega, tau)
        return doc, OK if isinstance(res, Conjugate) else UNKNOWN
    doc["reason"] = res.reason
    if isinstance(res, NotConjugate):
        return doc, REFUTED
    assert isinstance(res, Unknown)
    if res.report is not None:
        doc["verification"] = S.report_to_json(res.report, omega.layout)
    return doc, UNKNOWN


def cmd_intertwiner(args):
    rep = S.load_representation(args.rep)
    labels = S.RepLabels({"rep": rep})
    x = S.parse_file(args.expr, S.expr_file_from_json, labels)
    report = intertwiner_check(x, Endomorphism(rep), args.depth)
    doc = {
        "inputs": {"rep": S.representation_to_json(rep), "expr": S.expr_file_to_json(x, labels, ("rep",))},
        "verification": S.report_to_json(report, rep.layout),
    }
    return doc, OK if report.passed else REFUTED


def cmd_algebra_eval(args):
    x = S.parse_file(args.element, S.algebra_element_from_json)
    rep = S.load_representation(args.rep)
    if x.n != rep.n:
        raise InputError("rank mismatch")
    if args.vector:
        vec = S.parse_file(args.vector, S.name_vector_from_json)
        for b in vec.keys():
            if not rep.layout.is_canonical(b):
                raise InputError(f"{b} is not a canonical basis name")
        results = [{"input": S.name_vector_to_json(vec), "output": S.name_vector_to_json(evaluate(x, rep, vec))}]
    else:
        results = [
            {
                "input": S.name_vector_to_json(SparseVector.basis(b)),
                "output": S.name_vector_to_json(evaluate(x, rep, SparseVector.basis(b))),
            }
            for b in rep.layout.names(args.depth)
        ]
    doc = {
        "inputs": {"element": S.algebra_element_to_json(x), "rep": S.representation_to_json(rep)},
        "results": results,
    }
    return doc, OK


def cmd_module(args):
    A, F = S.parse_file(args.file, S.module_basis_from_json)
    doc = {"inputs": S.module_basis_to_json(A, F)}
    ortho = check_orthonormal(F)
    if args.action == "check-basis":
        generating = False
        if ortho and F and len(F) == F[0].n:
            try:
                basis_to_unitary(F)
                generating = True
            except ValueError:
                generating = False
        doc.update(orthonormal=ortho, generating=generating)
        return doc, OK if ortho and generating else REFUTED
    try:
        U = basis_to_unitary(F)
    except ValueError as e:
        doc.update(error=str(e))
        return doc, REFUTED
    doc.update(unitary=S.module_matrix_to_json(U), unitary_check=check_unitary_matrix(U))
    return doc, OK


def cmd_ibn(args):
    if args.k0:
        k = S.parse_file(args.k0, S.k0_from_json)
    else:
        k = fd_to_k0(S.parse_file(args.fd, S.fd_algebra_from_json))
    return {"k0": S.k0_to_json(k), "unit_order": S.order_to_json(unit_order(k)), "ibn": ibn(k)}, OK


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    p = argparse.ArgumentParser(prog="toeplitzkit", description="Exact tools for Toeplitz algebra representations.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.set_defaults(fn=fn)
        return s

    s = add("mult", cmd_mult, "print the multiplicity")
    s.add_argument("rep")
    s = add("wold", cmd_wold, "Wold splitting report")
    s.add_argument("rep")

    s = add("equiv", cmd_equiv, "decide or certify an equivalence")
    s.add_argument("--mode", choices=("bh-quasifree", "scalar-free"), required=True)
    s.add_argument("omega")
    s.add_argument("tau")
    s.add_argument("--depth", type=int, default=VERIFY_DEPTH)
    s.add_argument("--emit-witness")

    s = add("verify", cmd_verify, "verify a witness file")
    s.add_argument("omega")
    s.add_argument("tau")
    s.add_argument("witness")
    s.add_argument("--depth", type=int, default=VERIFY_DEPTH)

    s = add("endo-equal", cmd_endo_equal, "decide equality of induced endomorphisms")
    s.add_argument("omega")
    s.add_argument("tau")
    s.add_argument("--depth", type=int, default=REFUTE_DEPTH)

    s = add("endo-conjugate", cmd_endo_conjugate, "decide conjugacy of induced endomorphisms")
    s.add_argument("omega")
    s.add_argument("tau")
    s.add_argument("--witness")
    s.add_argument("--depth", type=int, default=VERIFY_DEPTH)
    s.add_argument("--emit-witness")

    s = add("intertwiner", cmd_intertwiner, "check X a = alpha(a) X")
    s.add_argument("expr")
    s.add_argument("rep")
    s.add_argument("--depth", type=int, default=REFUTE_DEPTH)

    s = add("algebra-eval", cmd_algebra_eval, "evaluate an algebra element in a representation")
    s.add_argument("element")
    s.add_argument("rep")
    s.add_argument("--vector")
    s.add_argument("--depth", type=int, default=1)

    s = add("module", cmd_module, "Hilbert module basis tools")
    s.add_argument("action", choices=("check-basis", "to-unitary"))
    s.add_argument("file")

    s = add("ibn", cmd_ibn, "invariant basis number test")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--k0")
    g.add_argument("--fd")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    if getattr(args, "depth", 0) < 0:
        print(json.dumps({"error": "depth must be nonnegative"}), file=sys.stderr)
        return INPUT_ERROR
    start = time.perf_counter()
    try:
        doc, code = args.fn(args)
    except (S.ParseError, InputError, ValueError, OSError) as e:
        print(json.dumps({"error": str(e)}, ensure_ascii=False), file=sys.stderr)
        return INPUT_ERROR
    if isinstance(doc, str):
        print(doc)
        return code
    doc = S.versioned({"command": args.command, **doc})
    if args.timing:
        doc["timing_seconds"] = round(time.perf_counter() - start, 6)
    print(S.dumps(doc))
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
