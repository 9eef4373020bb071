"""Acceptance gate: ten criteria, each an exact check.

Every test prints ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` and
records the same line for the end-of-run summary.  Randomness is seeded.
"""
import json
import random
import subprocess
import sys
from pathlib import Path

import conftest
from helpers import PHASES, random_element, random_name_vector, random_rep, random_unitary
from toeplitzkit import serialize as S
from toeplitzkit.basismaps import IDENTITY, phase_map
from toeplitzkit.cli import main
from toeplitzkit.dynamics import (
    Endomorphism,
    Equal,
    NotEqual,
    SparseOperator,
    decide_endo_equal,
    laca_gamma_check,
)
from toeplitzkit.equivalence import (
    Equivalent,
    FreeWitness,
    NotEquivalent,
    QuasifreeWitness,
    compose_free_witness,
    compose_quasifree_witness,
    decide_bh_quasifree,
    direct_sum_witness,
    essential_free_witness,
    invert_free_witness,
    invert_quasifree_witness,
    verify_free,
    verify_quasifree,
)
from toeplitzkit.hilbert_modules import (
    INFINITE,
    FDAlgebra,
    K0Data,
    ModuleMatrix,
    ModuleVector,
    apply_matrix,
    basis_expand,
    basis_to_unitary,
    check_unitary_matrix,
    fd_to_k0,
    ibn,
    module_inner,
    standard_basis,
    unit_order,
)
from toeplitzkit.layout import BasisName
from toeplitzkit.representation import cycle, direct_sum, fock
from toeplitzkit.scalars import mat_inverse
from toeplitzkit.symbolic import evaluate, nf_mul
from toeplitzkit.wold import defect_basis, multiplicity

FIX = Path(__file__).parent / "fixtures"


def record(n, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}"
    print(line)
    conftest.ACCEPTANCE_LINES[n] = line
    assert ok, line


# 1 ---------------------------------------------------------------------------------


def test_criterion_1_relations_oracle():
    rng = random.Random(101)
    checked = failures = 0
    for _ in range(200):
        n = rng.choice((1, 2, 3))
        a, b = random_element(rng, n), random_element(rng, n)
        rep = random_rep(rng, n)
        ab = nf_mul(a, b)
        for _ in range(5):
            x = random_name_vector(rng, rep)
            checked += 1
            if evaluate(ab, rep, x) != evaluate(a, rep, evaluate(b, rep, x)):
                failures += 1
    record(1, failures == 0, f"relations oracle, {checked - failures}/{checked} products match sequential evaluation")


# 2 ---------------------------------------------------------------------------------


def test_criterion_2_fock_multiplicity():
    bad = []
    for n in (1, 2, 3):
        for k in range(1, 6):
            rep = fock(n, k)
            if multiplicity(rep) != k:
                bad.append(("mult", n, k))
            vacua = [BasisName(b, 0, ()) for b in range(k)]
            for d in range(5):
                if defect_basis(rep, d) != vacua:
                    bad.append(("defect", n, k, d))
        for a in range(1, 5):
            for b in range(1, 5):
                if isinstance(decide_bh_quasifree(fock(n, a), fock(n, b)), Equivalent) != (a == b):
                    bad.append(("decide", n, a, b))
    record(2, not bad, f"Fock multiples: multiplicity, defect scan and a = b criterion ({len(bad)} mismatches)")


# 3 ---------------------------------------------------------------------------------


def test_criterion_3_essential_witness():
    corpus = [cycle(2, (1,)), cycle(2, (2,)), cycle(2, (1, 2)), direct_sum(cycle(2, (1,)), cycle(2, (2,)))]
    results = []
    for omega in corpus:
        for tau in corpus:
            report = verify_free(omega, tau, essential_free_witness(omega, tau), 4)
            results.append(report.passed and len(report.checks) == 3 and all(c.passed for c in report.checks))
    record(3, all(results), f"essential witness verifies to depth 4 on {sum(results)}/{len(results)} ordered pairs")


# 4 ---------------------------------------------------------------------------------


def _structured_pairs(rng, equal, count):
    out = []
    while len(out) < count:
        n = rng.choice((1, 2, 2, 3))
        f = rng.randint(0, 2)
        g = f if equal else rng.choice([x for x in range(4) if x != f])
        omega = random_rep(rng, n, fock_blocks=f, cycles=rng.randint(0 if f else 1, 2))
        tau = random_rep(rng, n, fock_blocks=g, cycles=rng.randint(0 if g else 1, 2))
        if omega.layout.size() == tau.layout.size():
            out.append((omega, tau))
    return out


def test_criterion_4_decision_procedure():
    rng = random.Random(404)
    equal = _structured_pairs(rng, True, 24)
    unequal = _structured_pairs(rng, False, 12)
    ok_eq = 0
    verified = []
    for omega, tau in equal:
        res = decide_bh_quasifree(omega, tau)
        if isinstance(res, Equivalent) and verify_quasifree(omega, tau, res.witness, 4).passed:
            ok_eq += 1
            verified.append((omega, tau))
    ok_ne = sum(isinstance(decide_bh_quasifree(o, t), NotEquivalent) for o, t in unequal)
    # every verified witness, and any random witness that happens to verify, joins equal multiplicities
    invariant_ok = all(multiplicity(o) == multiplicity(t) for o, t in verified)
    for omega, tau in unequal:
        q = QuasifreeWitness(IDENTITY, FreeWitness.from_matrix(random_unitary(rng, omega.n)))
        if verify_quasifree(omega, tau, q, 2).passed:
            invariant_ok = False
    ok = ok_eq == len(equal) and ok_ne == len(unequal) and invariant_ok
    record(
        4,
        ok,
        f"equal multiplicity {ok_eq}/{len(equal)} Equivalent and verified, "
        f"unequal {ok_ne}/{len(unequal)} NotEquivalent, multiplicity invariant {'holds' if invariant_ok else 'violated'}",
    )


# 5 ---------------------------------------------------------------------------------


def _law_instance(rng, kind):
    n = rng.randint(1, 2)
    if kind == "free":
        tau = random_rep(rng, n)
        m1, m2 = random_unitary(rng, n), random_unitary(rng, n)
        omega, kappa = tau.twisted(m1), tau.twisted(m2)
        U = FreeWitness.from_matrix(m1)
        V = invert_free_witness(FreeWitness.from_matrix(m2))
        checks = [
            verify_free(omega, tau, U, 3).passed,
            verify_free(tau, kappa, V, 3).passed,
            verify_free(tau, omega, invert_free_witness(U), 3).passed,
            verify_free(omega, kappa, compose_free_witness(U, V), 3).passed,
        ]
        return all(checks)
    f = rng.randint(0, 1)
    reps = []
    while len(reps) < 3:
        r = random_rep(rng, n, fock_blocks=f, cycles=rng.randint(0 if f else 1, 1))
        if not reps or r.layout.size() == reps[0].layout.size():
            reps.append(r)
    omega, tau, kappa = reps
    q1, q2 = decide_bh_quasifree(omega, tau).witness, decide_bh_quasifree(tau, kappa).witness
    if kind == "quasifree":
        return all(
            (
                verify_quasifree(omega, tau, q1, 3).passed,
                verify_quasifree(tau, omega, invert_quasifree_witness(q1), 3).passed,
                verify_quasifree(omega, kappa, compose_quasifree_witness(q1, q2), 3).passed,
            )
        )
    # direct sums of a decided witness with a twist witness
    base = random_rep(rng, n, fock_blocks=rng.randint(0, 1), cycles=1)
    m = random_unitary(rng, n)
    q3 = QuasifreeWitness(IDENTITY, FreeWitness.from_matrix(m))
    q = direct_sum_witness(q1, q3, (omega, base.twisted(m)), (tau, base))
    return verify_quasifree(direct_sum(omega, base.twisted(m)), direct_sum(tau, base), q, 3).passed


def test_criterion_5_relation_laws():
    rng = random.Random(505)
    kinds = ["free"] * 20 + ["quasifree"] * 18 + ["direct_sum"] * 12
    results = [_law_instance(rng, k) for k in kinds]
    record(5, all(results), f"inversion, composition and direct sums re-verify on {sum(results)}/{len(results)} instances")


# 6 ---------------------------------------------------------------------------------


def _rank_one_agreement(omega, tau, depth):
    count = len(omega.layout.names(depth))
    a_, b_ = Endomorphism(omega), Endomorphism(tau)
    return all(
        a_(SparseOperator.rank_one(r, s)) == b_(SparseOperator.rank_one(r, s))
        for r in range(count)
        for s in range(count)
    )


def test_criterion_6_endomorphism_equality():
    rng = random.Random(606)
    ok_equal = 0
    for _ in range(10):
        n = rng.randint(1, 2)
        tau = random_rep(rng, n, cycles=rng.randint(0, 1), fock_blocks=rng.randint(1, 2))
        omega = tau.twisted(random_unitary(rng, n))
        res = decide_endo_equal(omega, tau, 3)
        if isinstance(res, Equal) and _rank_one_agreement(omega, tau, 3):
            ok_equal += 1
    mismatched = [
        (fock(2), fock(2, 2)),
        (fock(1), fock(1, 3)),
        (fock(3, 2), fock(3)),
        (direct_sum(fock(2), cycle(2, (1,))), direct_sum(fock(2, 2), cycle(2, (1,)))),
        (cycle(2, (1,)), cycle(2, (2,))),
        (cycle(2, (1, 2)), direct_sum(cycle(2, (1,)), cycle(2, (2,)))),
        (cycle(2, (1, 1, 2)), cycle(2, (1, 2, 2))),
        (cycle(3, (1,)), cycle(3, (3,))),
        (direct_sum(fock(2), cycle(2, (1,))), direct_sum(fock(2), cycle(2, (2,)))),
        (cycle(2, (1,)), direct_sum(cycle(2, (1,)), cycle(2, (1,)))),
    ]
    ok_not = 0
    for omega, tau in mismatched:
        res = decide_endo_equal(omega, tau, 3)
        if not isinstance(res, NotEqual):
            continue
        a = res.operator
        if a is not None and Endomorphism(omega)(a) != Endomorphism(tau)(a):
            ok_not += 1
    ok = ok_equal == 10 and ok_not == len(mismatched)
    record(6, ok, f"twist pairs Equal with rank-one agreement {ok_equal}/10, mismatched pairs refuted {ok_not}/{len(mismatched)}")


# 7 ---------------------------------------------------------------------------------


def test_criterion_7_gamma_recovery():
    rng = random.Random(707)
    agree = passes = 0
    for t in range(20):
        n = rng.randint(1, 3)
        tau = random_rep(rng, n)
        m = random_unitary(rng, n)
        top = min(6, tau.layout.size() or 6)
        W = phase_map(tau.layout, {r: rng.choice(PHASES) for r in rng.sample(range(top), min(2, top))})
        omega = tau.twisted(m)
        if t % 2:
            # conjugate by W so the pair matches; odd instances should pass
            omega = omega.conjugated({r: z for r, z in W.phases})
        a = laca_gamma_check(omega, tau, W, m, 3)
        b = verify_quasifree(omega, tau, QuasifreeWitness(W, FreeWitness.from_matrix(m)), 3)
        passes += a.passed
        if a.passed == b.passed and a.counterexample == b.counterexample:
            agree += 1
    record(7, agree == 20, f"gamma_U check agrees with quasifree verification on {agree}/20 instances ({passes} passing)")


# 8 ---------------------------------------------------------------------------------


def _element(rng, A):
    return A.element(
        tuple(tuple(tuple(PHASES[rng.randrange(3)] * rng.randint(-1, 1) for _ in range(k)) for _ in range(k)) for k in A.block_sizes)
    )


def _module_unitary(rng, A, n):
    return ModuleMatrix.from_block_matrices(A, [random_unitary(rng, n * k) for k in A.block_sizes])


def test_criterion_8_module_kit():
    rng = random.Random(808)
    algebras = (FDAlgebra((1,)), FDAlgebra((1, 1)), FDAlgebra((2,)))
    equiv_ok = total = 0
    for A in algebras:
        for n in (1, 2, 3):
            for trial in range(6):
                if trial % 2:
                    U = _module_unitary(rng, A, n)
                else:
                    U = ModuleMatrix(A, tuple(tuple(_element(rng, A) for _ in range(n)) for _ in range(n)))
                F = [apply_matrix(U, e) for e in standard_basis(A, n)]
                preserving = all(
                    module_inner(F[i], F[j]) == (A.one() if i == j else A.zero()) for i in range(n) for j in range(n)
                )
                try:
                    for m in U.to_block_matrices():
                        mat_inverse(m)
                    invertible = True
                except ValueError:
                    invertible = False
                total += 1
                equiv_ok += check_unitary_matrix(U) == (preserving and invertible)
    round_trips = expand_ok = 0
    for t in range(50):
        A = algebras[t % 3]
        n = 1 + t % 3
        V = _module_unitary(rng, A, n)
        F = [apply_matrix(V, e) for e in standard_basis(A, n)]
        round_trips += basis_to_unitary(F) == V
        x = ModuleVector(A, tuple(_element(rng, A) for _ in range(n)))
        coeffs = basis_expand(x, F)
        acc = F[0].right(coeffs[0])
        for f, c in zip(F[1:], coeffs[1:]):
            acc = acc + f.right(c)
        expand_ok += acc == x
    ok = equiv_ok == total and round_trips == 50 and expand_ok == 50
    record(8, ok, f"unitary criterion {equiv_ok}/{total}, basis round trips {round_trips}/50, expansions {expand_ok}/50")


# 9 ---------------------------------------------------------------------------------


def test_criterion_9_ibn():
    rng = random.Random(909)
    fd = [FDAlgebra(tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))) for _ in range(20)]
    fd += [FDAlgebra((1,)), FDAlgebra((2, 3))]
    fd_ok = all(ibn(fd_to_k0(A)) and unit_order(fd_to_k0(A)) == INFINITE for A in fd)
    zero = K0Data(0, (), ())
    zero_ok = not ibn(zero) and unit_order(zero) == 1
    cuntz_ok = True
    for n in range(2, 7):
        # Z/(n-1) with [1] = 1; Z/1 is the zero group
        k = K0Data(0, (n - 1,), (1,)) if n > 2 else K0Data(0, (), ())
        cuntz_ok &= not ibn(k) and unit_order(k) == n - 1
    ok = fd_ok and zero_ok and cuntz_ok
    record(9, ok, f"IBN: {len(fd)} finite-dimensional algebras {fd_ok}, zero group {zero_ok}, Cuntz pattern n=2..6 {cuntz_ok}")


# 10 --------------------------------------------------------------------------------

CLI_SUITE = [
    ["mult", "fock"],
    ["wold", "fock_cycle1"],
    ["equiv", "--mode", "bh-quasifree", "fock", "fock2"],
    ["equiv", "--mode", "bh-quasifree", "fock_cycle1", "fock_cycle2"],
    ["equiv", "--mode", "bh-quasifree", "cycle12", "cycle1_cycle2"],
    ["equiv", "--mode", "scalar-free", "fock_twist", "fock"],
    ["equiv", "--mode", "scalar-free", "cycle1", "cycle2", "--depth", "2"],
    ["verify", "cycle1", "cycle2", "witness_essential"],
    ["verify", "fock_phase", "fock", "witness_phase"],
    ["endo-equal", "fock_twist", "fock"],
    ["endo-equal", "fock", "fock2"],
    ["endo-conjugate", "fock2", "fock2_twist_conj"],
    ["endo-conjugate", "cycle1", "cycle2"],
    ["intertwiner", "expr_gen_span", "fock", "--depth", "2"],
    ["algebra-eval", "defect_p2", "fock", "--vector", "vector_mixed"],
    ["module", "check-basis", "module_swap_basis"],
    ["module", "to-unitary", "module_bad_basis"],
    ["ibn", "--k0", "k0_cuntz3"],
    ["ibn", "--fd", "fd_m2_m3"],
    ["mult", "bad_twist"],
]


def _resolve(argv):
    return [str(FIX / f"{a}.json") if (FIX / f"{a}.json").exists() else a for a in argv]


def _run_suite(capsys):
    out = []
    for argv in CLI_SUITE:
        code = main(_resolve(argv))
        o, e = capsys.readouterr()
        out.append((code, o, e))
    return out


def _fixture_round_trips():
    ok = total = 0
    reps = {}
    for p in sorted(FIX.glob("*.json")):
        doc = S.load_json(p)
        total += 1
        try:
            if p.stem.startswith("bad_"):
                try:
                    S.representation_from_json(doc)
                except S.ParseError:
                    ok += 1
                continue
            if p.stem.startswith("k0_"):
                x = S.k0_from_json(doc)
                ok += S.k0_from_json(S.k0_to_json(x)) == x
            elif p.stem.startswith("fd_"):
                x = S.fd_algebra_from_json(doc)
                ok += S.fd_algebra_from_json(S.fd_algebra_to_json(x)) == x
            elif p.stem.startswith("module_"):
                x = S.module_basis_from_json(doc)
                ok += S.module_basis_from_json(S.module_basis_to_json(*x)) == x
            elif p.stem.startswith("vector_"):
                x = S.name_vector_from_json(doc)
                ok += S.name_vector_from_json(S.name_vector_to_json(x)) == x
            elif p.stem.startswith("defect_"):
                x = S.algebra_element_from_json(doc)
                ok += S.algebra_element_from_json(S.algebra_element_to_json(x)) == x
            elif p.stem.startswith("expr_"):
                labels = S.RepLabels({"rep": fock(2)})
                x = S.expr_file_from_json(doc, labels)
                ok += S.expr_file_from_json(S.expr_file_to_json(x, labels, ("rep",)), labels) == x
            elif p.stem.startswith("witness_"):
                total -= 1  # checked below against their representation pairs
            else:
                x = S.representation_from_json(doc)
                reps[p.stem] = x
                ok += S.representation_from_json(json.loads(S.dumps(S.representation_to_json(x)))) == x
        except S.ParseError:
            pass
    pairs = {
        "witness_swap": ("fock_twist", "fock"),
        "witness_identity": ("fock2", "fock2"),
        "witness_phase": ("fock_phase", "fock"),
        "witness_essential": ("cycle1", "cycle2"),
    }
    for w, (o, t) in pairs.items():
        total += 1
        q = S.witness_from_json(S.load_json(FIX / f"{w}.json"), reps[o], reps[t])
        doc = S.witness_to_json(q, reps[o], reps[t])
        back = S.witness_from_json(json.loads(S.dumps(doc)), reps[o], reps[t])
        ok += S.witness_to_json(back, reps[o], reps[t]) == doc
    return ok, total


def test_criterion_10_determinism_and_round_trip(capsys):
    first = _run_suite(capsys)
    second = _run_suite(capsys)
    # a fresh interpreter must agree byte for byte as well
    argv = _resolve(CLI_SUITE[4])
    proc = subprocess.run([sys.executable, "-m", "toeplitzkit", *argv], capture_output=True, text=True, check=False)
    fresh = (proc.returncode, proc.stdout) == (first[4][0], first[4][1])
    identical = first == second and fresh
    codes = [c for c, _, _ in first]
    expected = [0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 3, 0, 0, 0, 2, 0, 0, 1]
    ok_rt, total_rt = _fixture_round_trips()
    ok = identical and codes == expected and ok_rt == total_rt
    record(
        10,
        ok,
        f"{len(CLI_SUITE)} CLI runs byte-identical {identical}, exit codes as expected {codes == expected}, "
        f"fixture round trips {ok_rt}/{total_rt}",
    )
