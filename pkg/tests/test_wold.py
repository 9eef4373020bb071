import random

from hypothesis import given
from hypothesis import strategies as st

from helpers import random_rep, random_unitary, reps
from toeplitzkit.layout import BasisName
from toeplitzkit.representation import cycle, direct_sum, fock
from toeplitzkit.wold import defect_basis, is_essential, multiplicity, wold
from toeplitzkit.words import SparseVector

SWAP = ((0, 1), (1, 0))


def test_defect_examples():
    assert defect_basis(fock(2), 3) == [BasisName(0, 0, ())]
    assert defect_basis(cycle(2, (1, 2)), 3) == []
    assert defect_basis(fock(2, 2).twisted(SWAP), 2) == [BasisName(0, 0, ()), BasisName(1, 0, ())]


def test_multiplicity_examples():
    assert multiplicity(fock(1)) == multiplicity(fock(3)) == 1
    assert multiplicity(fock(2, 3)) == 3
    assert multiplicity(cycle(2, (1, 2), (2,))) == 0
    assert is_essential(cycle(2, (1,)))


def test_wold_examples():
    r = wold(direct_sum(fock(2), cycle(2, (1,))))
    assert (r.multiplicity, r.shift_block_indices, r.essential_block_indices) == (1, (0,), (1,))
    r = wold(fock(2, 2))
    assert r.multiplicity == 2 and r.essential_block_indices == ()
    r = wold(cycle(2, (1, 2)))
    assert r.multiplicity == 0 and r.defect_names == ()


@given(reps(), st.integers(0, 4))
def test_defect_scan_matches_block_count(rep, depth):
    found = defect_basis(rep, depth)
    assert len(found) == multiplicity(rep)
    assert all(b.depth == 0 for b in found)


@given(reps(twist=False, conj=False), st.integers(0, 2**32 - 1))
def test_twist_and_phase_leave_defect_alone(rep, seed):
    rng = random.Random(seed)
    changed = rep.twisted(random_unitary(rng, rep.n)).conjugated({0: -1, 2: 1})
    assert defect_basis(changed, 2) == defect_basis(rep, 2)


@given(reps())
def test_reconstruction_is_intertwined_by_correspondence(rep):
    r = wold(rep)
    recon, corr = r.reconstruction, r.correspondence
    assert recon.num_fock == r.multiplicity
    assert defect_basis(direct_sum_essential(recon), 2) == []
    for b in rep.layout.names(3):
        x = SparseVector.basis(rep.layout.rank(b))
        for i in range(1, rep.n + 1):
            assert corr.apply(rep.gen_on_ranks(i, x)) == recon.gen_on_ranks(i, corr.apply(x))


def direct_sum_essential(rep):
    """The essential summand of a reconstruction, or a stand-in cycle if there is none."""
    from toeplitzkit.representation import Representation

    blocks = tuple(b for b in rep.blocks if b.kind == "cycle")
    return Representation(rep.n, blocks or cycle(rep.n, (1,)).blocks, rep.twist)


def test_random_corpus_multiplicity_matches_scan_to_depth_five():
    rng = random.Random(11)
    for _ in range(6):
        rep = random_rep(rng, 2)
        assert len(defect_basis(rep, 5)) == multiplicity(rep)
