"""JSON forms of every value the command line reads or writes.

Each ``*_to_json`` has a ``*_from_json`` inverse with ``from(to(x)) == x``.
Parse failures raise :class:`ParseError` naming the offending field.  Top-level
documents carry ``format_version``; it may be omitted on input.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from .basismaps import (
    IDENTITY,
    BasisDirectSum,
    BasisMap,
    BasisProduct,
    BasisUnitary,
    Relabel,
    Segment,
)
from .equivalence import Counterexample, FreeWitness, QuasifreeWitness, VerificationReport
from .hilbert_modules import INFINITE, FDAlgebra, K0Data, ModuleMatrix, ModuleVector
from .layout import BasisName, Layout
from .operators import (
    BasisU,
    Const,
    DirectSum,
    Gen,
    GenAdj,
    OperatorExpr,
    Prod,
    Sum,
)
from .representation import Block, Representation
from .scalars import Matrix, Scalar, format_matrix, is_unitary, parse_matrix
from .symbolic import AlgebraElement
from .words import SparseVector

FORMAT_VERSION = 1


class ParseError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
        self.message = message


def _join(outer: str, inner: str) -> str:
    if outer and inner:
        return outer + ("" if inner.startswith("[") else ".") + inner
    return outer or inner


def _at(field: str, fn, *args):
    """Run ``fn`` and re-raise plain errors as :class:`ParseError` at ``field``."""
    try:
        return fn(*args)
    except ParseError as e:
        raise ParseError(_join(field, e.field), e.message) from None
    except (ValueError, TypeError, KeyError, AttributeError, IndexError) as e:
        msg = f"missing field {e}" if isinstance(e, KeyError) else str(e)
        raise ParseError(field, msg) from None


def _require(doc: Any, kind: type, what: str):
    if not isinstance(doc, kind):
        raise ParseError("", f"{what} must be a JSON {kind.__name__}")
    return doc


def check_version(doc: dict):
    v = doc.get("format_version", FORMAT_VERSION)
    if v != FORMAT_VERSION:
        raise ParseError("format_version", f"unsupported version {v!r}")


def versioned(doc: dict) -> dict:
    return {"format_version": FORMAT_VERSION, **doc}


def load_json(path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}", e.msg) from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


# -- scalars, words, names ---------------------------------------------------------


def scalar_to_json(z: Scalar) -> str:
    return str(z)


def scalar_from_json(x) -> Scalar:
    if isinstance(x, bool):
        raise ParseError("", "booleans are not scalars")
    if isinstance(x, int):
        return Scalar.coerce(x)
    if isinstance(x, str):
        try:
            return Scalar.parse(x)
        except ValueError as e:
            raise ParseError("", str(e)) from None
    raise ParseError("", f"unsupported scalar {x!r}")


def word_from_json(x) -> tuple:
    _require(x, list, "word")
    if any(isinstance(c, bool) or not isinstance(c, int) for c in x):
        raise ParseError("", "word letters must be integers")
    return tuple(x)


def name_to_json(b: BasisName) -> dict:
    return {"block": b.block, "k": b.k, "word": list(b.word)}


def name_from_json(doc) -> BasisName:
    _require(doc, dict, "basis name")
    return BasisName(int(doc["block"]), int(doc.get("k", 0)), word_from_json(doc.get("word", [])))


def rank_vector_to_json(vec: SparseVector, layout: Optional[Layout] = None) -> list:
    out = []
    for r, c in sorted(vec.items()):
        item = {"rank": r, "coef": str(c)}
        if layout is not None:
            item["name"] = str(layout.unrank(r))
        out.append(item)
    return out


def name_vector_to_json(vec: SparseVector) -> list:
    return [{**name_to_json(b), "coef": str(c)} for b, c in vec.sorted_items()]


def name_vector_from_json(doc) -> SparseVector:
    _require(doc, list, "vector")
    return SparseVector(
        (_at(f"[{i}]", name_from_json, t), _at(f"[{i}].coef", scalar_from_json, t.get("coef", "1")))
        for i, t in enumerate(doc)
    )


# -- representations -------------------------------------------------------------------


def block_to_json(b: Block) -> dict:
    out: dict = {"kind": b.kind}
    if b.kind == "cycle":
        out["word"] = list(b.word)
    if b.twist is not None:
        out["twist"] = format_matrix(b.twist)
    return out


def block_from_json(doc) -> Block:
    _require(doc, dict, "block")
    kind = doc.get("kind")
    if kind not in ("fock", "cycle"):
        raise ParseError("kind", f"unknown block kind {kind!r}")
    word = _at("word", word_from_json, doc["word"]) if kind == "cycle" else ()
    if kind == "cycle" and "word" not in doc:
        raise ParseError("word", "cycle blocks need a word")
    if kind == "fock" and doc.get("word"):
        raise ParseError("word", "Fock blocks carry no word")
    twist = _at("twist", parse_matrix, doc["twist"]) if doc.get("twist") is not None else None
    return _at("", Block, kind, word, twist)


def representation_to_json(rep: Representation) -> dict:
    out: dict = {"n": rep.n, "blocks": [block_to_json(b) for b in rep.blocks]}
    if rep.twist is not None:
        out["twist"] = format_matrix(rep.twist)
    if rep.conj:
        out["conj"] = {"phases": {str(r): str(z) for r, z in rep.conj}}
    return out


def representation_from_json(doc) -> Representation:
    _require(doc, dict, "representation")
    check_version(doc)
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError("n", "must be a positive integer")
    blocks = _require(doc.get("blocks"), list, "blocks")
    parsed = tuple(_at(f"blocks[{i}]", block_from_json, b) for i, b in enumerate(blocks))
    for i, b in enumerate(parsed):
        if b.kind == "cycle":
            _at(f"blocks[{i}].word", _check_letters, b.word, n)
        if b.twist is not None:
            _at(f"blocks[{i}].twist", _check_square, b.twist, n)
    twist = _at("twist", parse_matrix, doc["twist"]) if doc.get("twist") is not None else None
    if twist is not None:
        _at("twist", _check_square, twist, n)
    conj = ()
    if doc.get("conj") is not None:
        phases = _require(doc["conj"], dict, "conj").get("phases", {})
        _require(phases, dict, "conj.phases")
        conj = tuple(
            (_at(f"conj.phases.{k}", _rank_key, k), _at(f"conj.phases.{k}", scalar_from_json, z))
            for k, z in phases.items()
        )
    return _at("", Representation, n, parsed, twist, conj)


def _rank_key(k: str) -> int:
    if not k.isdigit():
        raise ValueError(f"rank key {k!r} must be a nonnegative integer")
    return int(k)


def _check_letters(word, n):
    if not word:
        raise ValueError("cycle word must be nonempty")
    for c in word:
        if not 1 <= c <= n:
            raise ValueError(f"letter {c} out of range 1..{n}")


def _check_square(m: Matrix, n: int):
    if len(m) != n or any(len(r) != n for r in m):
        raise ValueError(f"twist must be {n}x{n}")
    if not is_unitary(m):
        raise ValueError("not unitary")


def parse_file(path, parse, *args):
    """Load JSON from ``path`` and run ``parse`` on it; errors name the file."""
    try:
        return _at("", parse, load_json(path), *args)
    except ParseError as e:
        raise ParseError(str(path), str(e)) from None


def load_representation(path) -> Representation:
    return parse_file(path, representation_from_json)


# -- algebra elements ------------------------------------------------------------------


def algebra_element_to_json(x: AlgebraElement) -> dict:
    return {
        "n": x.n,
        "terms": [
            {"alpha": list(a), "beta": list(b), "coef": str(c)} for (a, b), c in x.sorted_terms()
        ],
    }


def algebra_element_from_json(doc) -> AlgebraElement:
    _require(doc, dict, "algebra element")
    check_version(doc)
    terms = _require(doc.get("terms", []), list, "terms")
    items = [
        (
            (
                _at(f"terms[{i}].alpha", word_from_json, t.get("alpha", [])),
                _at(f"terms[{i}].beta", word_from_json, t.get("beta", [])),
            ),
            _at(f"terms[{i}].coef", scalar_from_json, t.get("coef", "1")),
        )
        for i, t in enumerate(terms)
    ]
    return _at("", AlgebraElement, doc.get("n"), items)


# -- layouts and basis unitaries ---------------------------------------------------------


def layout_to_json(lay: Layout) -> dict:
    return {"n": lay.n, "shapes": [None if s is None else list(s) for s in lay.shapes]}


def layout_from_json(doc) -> Layout:
    _require(doc, dict, "layout")
    shapes = tuple(None if s is None else word_from_json(s) for s in doc["shapes"])
    return Layout(int(doc["n"]), shapes)


def basis_unitary_to_json(W: BasisUnitary) -> dict:
    if isinstance(W, BasisProduct):
        if not W.factors:
            return {"kind": "identity"}
        return {"kind": "product", "factors": [basis_unitary_to_json(f) for f in W.factors]}
    if isinstance(W, BasisMap):
        return {
            "kind": "map",
            "source": layout_to_json(W.source),
            "target": layout_to_json(W.target),
            "segments": [
                {"source": list(s.source_blocks), "target": list(s.target_blocks), "part": s.part}
                for s in W.segments
            ],
            "phases": {str(r): str(z) for r, z in W.phases},
        }
    if isinstance(W, Relabel):
        return {"kind": "relabel", "source": layout_to_json(W.source), "perm": list(W.perm)}
    if isinstance(W, BasisDirectSum):
        return {
            "kind": "direct_sum",
            "source": layout_to_json(W.source),
            "target": layout_to_json(W.target),
            "parts": [
                {"source": layout_to_json(a), "target": layout_to_json(b), "W": basis_unitary_to_json(w)}
                for a, b, w in W.parts
            ],
        }
    raise TypeError(f"cannot serialize {type(W).__name__}")


def basis_unitary_from_json(doc, source: Optional[Layout] = None, target: Optional[Layout] = None) -> BasisUnitary:
    """``source``/``target`` fill in a bare ``{"phases": ...}`` map (tau's layout to omega's)."""
    _require(doc, dict, "basis unitary")
    kind = doc.get("kind", "map")
    if kind == "identity":
        return IDENTITY
    if kind == "product":
        return BasisProduct(
            tuple(
                _at(f"factors[{i}]", basis_unitary_from_json, f)
                for i, f in enumerate(doc["factors"])
            )
        )
    if kind == "relabel":
        return Relabel(_at("source", layout_from_json, doc["source"]), tuple(doc["perm"]))
    if kind == "direct_sum":
        parts = tuple(
            (
                _at(f"parts[{i}].source", layout_from_json, p["source"]),
                _at(f"parts[{i}].target", layout_from_json, p["target"]),
                _at(f"parts[{i}].W", basis_unitary_from_json, p["W"]),
            )
            for i, p in enumerate(doc["parts"])
        )
        return BasisDirectSum(
            _at("source", layout_from_json, doc["source"]),
            _at("target", layout_from_json, doc["target"]),
            parts,
        )
    if kind != "map":
        raise ParseError("kind", f"unknown basis unitary kind {kind!r}")
    src = _at("source", layout_from_json, doc["source"]) if "source" in doc else source
    tgt = _at("target", layout_from_json, doc["target"]) if "target" in doc else target
    if src is None or tgt is None:
        raise ParseError("", "basis map needs source and target layouts")
    segs = tuple(
        Segment(tuple(s["source"]), tuple(s["target"]), s.get("part", "all"))
        for s in doc.get("segments", [])
    )
    phases = tuple(
        (_at(f"phases.{k}", _rank_key, k), _at(f"phases.{k}", scalar_from_json, z))
        for k, z in _require(doc.get("phases", {}), dict, "phases").items()
    )
    return BasisMap(src, tgt, segs, phases)


# -- operator expressions ------------------------------------------------------------------


class RepLabels:
    """Bidirectional naming of the representations referenced by expressions."""

    def __init__(self, named: Optional[dict] = None):
        self.by_label: dict = dict(named or {})

    def label(self, rep: Representation) -> str:
        for k, v in self.by_label.items():
            if v == rep:
                return k
        k = f"rep{len(self.by_label)}"
        while k in self.by_label:
            k += "_"
        self.by_label[k] = rep
        return k

    def rep(self, label: str) -> Representation:
        if label not in self.by_label:
            raise ParseError("rep", f"unknown representation label {label!r}")
        return self.by_label[label]

    def extras(self, fixed: tuple) -> dict:
        return {
            k: representation_to_json(v) for k, v in self.by_label.items() if k not in fixed
        }


def expr_to_json(x: OperatorExpr, labels: RepLabels) -> dict:
    if isinstance(x, Gen):
        return {"gen": {"rep": labels.label(x.rep), "i": x.i}}
    if isinstance(x, GenAdj):
        return {"genAdj": {"rep": labels.label(x.rep), "i": x.i}}
    if isinstance(x, Const):
        return {"scalar": str(x.c)}
    if isinstance(x, BasisU):
        return {"basisU": {"W": basis_unitary_to_json(x.W), "dagger": x.dagger}}
    if isinstance(x, Sum):
        return {"sum": [expr_to_json(t, labels) for t in x.terms]}
    if isinstance(x, Prod):
        return {"prod": [expr_to_json(f, labels) for f in x.factors]}
    if isinstance(x, DirectSum):
        return {
            "directSum": {
                "source": layout_to_json(x.source),
                "target": layout_to_json(x.target),
                "parts": [
                    {"source": layout_to_json(a), "target": layout_to_json(b), "x": expr_to_json(e, labels)}
                    for a, b, e in x.parts
                ],
            }
        }
    raise TypeError(f"cannot serialize {type(x).__name__}")


def expr_from_json(doc, labels: RepLabels) -> OperatorExpr:
    if isinstance(doc, (str, int)) and not isinstance(doc, bool):
        return Const(scalar_from_json(doc))
    _require(doc, dict, "operator expression")
    if len(doc) != 1:
        raise ParseError("", "operator expression must have exactly one key")
    (key, body), = doc.items()
    if key in ("gen", "genAdj"):
        rep = labels.rep(body["rep"])
        i = body["i"]
        if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= rep.n:
            raise ParseError(f"{key}.i", f"letter {i!r} out of range 1..{rep.n}")
        return (Gen if key == "gen" else GenAdj)(rep, i)
    if key == "scalar":
        return Const(_at("scalar", scalar_from_json, body))
    if key == "basisU":
        return BasisU(_at("basisU.W", basis_unitary_from_json, body["W"]), bool(body.get("dagger", False)))
    if key == "sum":
        return Sum(tuple(_at(f"sum[{i}]", expr_from_json, t, labels) for i, t in enumerate(body)))
    if key == "prod":
        return Prod(tuple(_at(f"prod[{i}]", expr_from_json, t, labels) for i, t in enumerate(body)))
    if key == "directSum":
        parts = tuple(
            (
                layout_from_json(p["source"]),
                layout_from_json(p["target"]),
                _at(f"directSum.parts[{i}].x", expr_from_json, p["x"], labels),
            )
            for i, p in enumerate(body["parts"])
        )
        return DirectSum(layout_from_json(body["source"]), layout_from_json(body["target"]), parts)
    raise ParseError("", f"unknown operator node {key!r}")


# -- witnesses ------------------------------------------------------------------------


WITNESS_LABELS = ("omega", "tau")


def free_witness_to_json(U: FreeWitness, labels: RepLabels) -> dict:
    m = U.scalar_matrix()
    if m is not None:
        return {"flavor": "scalar", "entries": format_matrix(m)}
    return {
        "flavor": "bounded",
        "entries": [[expr_to_json(x, labels) for x in row] for row in U.entries],
    }


def free_witness_from_json(doc, labels: RepLabels) -> FreeWitness:
    _require(doc, dict, "U")
    flavor = doc.get("flavor", "bounded")
    rows = _require(doc.get("entries"), list, "entries")
    if flavor == "scalar":
        return FreeWitness.from_matrix(_at("entries", parse_matrix, rows))
    if flavor != "bounded":
        raise ParseError("flavor", f"unknown flavor {flavor!r}")
    entries = tuple(
        tuple(_at(f"entries[{j}][{k}]", expr_from_json, x, labels) for k, x in enumerate(row))
        for j, row in enumerate(rows)
    )
    return _at("", FreeWitness, len(entries), entries)


def witness_to_json(q: QuasifreeWitness, omega: Representation, tau: Representation) -> dict:
    """Quasifree witness; representations other than the pair are embedded under ``reps``."""
    labels = RepLabels({"omega": omega, "tau": tau})
    body = {
        "W": basis_unitary_to_json(q.W),
        "U": free_witness_to_json(q.U, labels),
    }
    extras = labels.extras(WITNESS_LABELS)
    if extras:
        body["reps"] = extras
    return versioned(body)


def witness_from_json(doc, omega: Representation, tau: Representation) -> QuasifreeWitness:
    _require(doc, dict, "witness")
    check_version(doc)
    named = {"omega": omega, "tau": tau}
    for k, r in _require(doc.get("reps", {}), dict, "reps").items():
        if k in named:
            raise ParseError(f"reps.{k}", "label is reserved")
        named[k] = _at(f"reps.{k}", representation_from_json, r)
    labels = RepLabels(named)
    W = (
        _at("W", basis_unitary_from_json, doc["W"], tau.layout, omega.layout)
        if doc.get("W") is not None
        else IDENTITY
    )
    U = _at("U", free_witness_from_json, doc["U"], labels)
    return QuasifreeWitness(W, U)


def expr_file_from_json(doc, labels: RepLabels) -> OperatorExpr:
    """``{"expr": ..., "reps": {...}}``; ``labels`` supplies the externally given reps."""
    _require(doc, dict, "operator file")
    check_version(doc)
    for k, r in _require(doc.get("reps", {}), dict, "reps").items():
        if k not in labels.by_label:
            labels.by_label[k] = _at(f"reps.{k}", representation_from_json, r)
    return _at("expr", expr_from_json, doc["expr"], labels)


def expr_file_to_json(x: OperatorExpr, labels: RepLabels, fixed: tuple = ()) -> dict:
    body = {"expr": expr_to_json(x, labels)}
    extras = labels.extras(fixed)
    if extras:
        body["reps"] = extras
    return versioned(body)


# -- reports ---------------------------------------------------------------------------


def _side_to_json(v, layout: Optional[Layout]):
    if isinstance(v, SparseVector):
        return rank_vector_to_json(v, layout)
    if isinstance(v, tuple):
        return format_matrix(v)
    return v


def counterexample_to_json(c: Counterexample, layout: Optional[Layout] = None) -> dict:
    return {
        "identity": c.identity,
        "rank": c.rank,
        "basis": c.basis,
        "lhs": _side_to_json(c.lhs, layout),
        "rhs": _side_to_json(c.rhs, layout),
    }


def report_to_json(rep: VerificationReport, layout: Optional[Layout] = None) -> dict:
    return {
        "verified_depth": rep.verified_depth,
        "passed": rep.passed,
        "checks": [
            {"identity": c.identity, "basis_count": c.basis_count, "pass": c.passed}
            for c in rep.checks
        ],
        "counterexample": None
        if rep.counterexample is None
        else counterexample_to_json(rep.counterexample, layout),
    }


def sparse_operator_to_json(a, layout: Optional[Layout] = None) -> list:
    out = []
    for (k, b), c in a.sorted_items():
        item = {"ket": k, "bra": b, "coef": str(c)}
        if layout is not None:
            item["ket_name"] = str(layout.unrank(k))
            item["bra_name"] = str(layout.unrank(b))
        out.append(item)
    return out


# -- module kit --------------------------------------------------------------------------


def fd_algebra_to_json(A: FDAlgebra) -> dict:
    return {"blocks": list(A.block_sizes)}


def fd_algebra_from_json(doc) -> FDAlgebra:
    _require(doc, dict, "algebra")
    check_version(doc)
    blocks = _require(doc.get("blocks"), list, "blocks")
    return _at("blocks", FDAlgebra, tuple(blocks))


def k0_to_json(k: K0Data) -> dict:
    return {"free_rank": k.free_rank, "torsion": list(k.torsion_orders), "unit": list(k.unit_class)}


def k0_from_json(doc) -> K0Data:
    _require(doc, dict, "K0 data")
    check_version(doc)
    return _at(
        "",
        K0Data,
        doc.get("free_rank", 0),
        tuple(_require(doc.get("torsion", []), list, "torsion")),
        tuple(_require(doc.get("unit", []), list, "unit")),
    )


def order_to_json(order) -> Any:
    return "infinite" if order == INFINITE else order


def fd_element_to_json(a: tuple) -> list:
    return [format_matrix(b) for b in a]


def fd_element_from_json(doc, A: FDAlgebra) -> tuple:
    _require(doc, list, "algebra element")
    return A.element(tuple(parse_matrix(b) for b in doc))


def module_vector_to_json(x: ModuleVector) -> list:
    return [fd_element_to_json(c) for c in x.coords]


def module_vector_from_json(doc, A: FDAlgebra) -> ModuleVector:
    _require(doc, list, "module vector")
    return ModuleVector(A, tuple(_at(f"[{i}]", fd_element_from_json, c, A) for i, c in enumerate(doc)))


def module_matrix_to_json(V: ModuleMatrix) -> list:
    return [[fd_element_to_json(x) for x in row] for row in V.entries]


def module_matrix_from_json(doc, A: FDAlgebra) -> ModuleMatrix:
    _require(doc, list, "module matrix")
    return ModuleMatrix(
        A,
        tuple(
            tuple(_at(f"[{j}][{i}]", fd_element_from_json, x, A) for i, x in enumerate(row))
            for j, row in enumerate(doc)
        ),
    )


def module_basis_from_json(doc) -> tuple:
    """``{"algebra": {...}, "basis": [vector, ...]}``."""
    _require(doc, dict, "module basis file")
    check_version(doc)
    A = _at("algebra", fd_algebra_from_json, doc["algebra"])
    basis = _require(doc.get("basis"), list, "basis")
    return A, [_at(f"basis[{i}]", module_vector_from_json, v, A) for i, v in enumerate(basis)]


def module_basis_to_json(A: FDAlgebra, F) -> dict:
    return versioned({"algebra": fd_algebra_to_json(A), "basis": [module_vector_to_json(f) for f in F]})
