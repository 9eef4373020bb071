import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import PHASES, random_rep, reps
from toeplitzkit.basismaps import (
    IDENTITY,
    BasisDirectSum,
    BasisMap,
    Relabel,
    Segment,
    block_permutation,
    compose,
    phase_map,
    rank_identity,
    wold_matching,
)
from toeplitzkit.layout import BasisName, Layout
from toeplitzkit.representation import cycle, direct_sum, fock
from toeplitzkit.words import SparseVector

seeds = st.integers(0, 2**32 - 1)


def images(W, count):
    return [W.image(r) for r in range(count)]


def test_rank_identity_is_identity():
    lay = fock(2, 2).layout
    W = rank_identity(lay, lay)
    assert W.is_identity()
    assert all(W.image(r) == (r, 1) for r in range(20))


def test_phase_map_example():
    lay = fock(2).layout
    W = phase_map(lay, {0: -1, 3: PHASES[1]})
    assert W.image(0)[1] == -1 and W.image(3)[1] == PHASES[1] and W.image(1)[1] == 1
    with pytest.raises(ValueError, match="not unimodular"):
        phase_map(lay, {0: 2})


def test_block_permutation_moves_vacua():
    lay = direct_sum(cycle(2, (1,)), fock(2)).layout
    W = block_permutation(lay, (1, 0))
    assert W.target.shapes == (None, (1,))
    r, _ = W.image(lay.rank(BasisName(1, 0, ())))
    assert W.target.unrank(r) == BasisName(0, 0, ())


def test_mismatched_segments_rejected():
    with pytest.raises(ValueError, match="no bijection"):
        BasisMap(fock(1).layout, cycle(1, (1,)).layout)
    lay = fock(2, 2).layout
    with pytest.raises(ValueError, match="partition"):
        BasisMap(lay, lay, (Segment((0,), (0,), "all"),))


def test_relabel_example():
    lay = fock(2).layout
    R = Relabel(lay, (2, 1))
    r, _ = R.image(lay.rank(BasisName(0, 0, (1, 1, 2))))
    assert lay.unrank(r) == BasisName(0, 0, (2, 2, 1))
    assert Relabel(cycle(2, (1, 2)).layout, (2, 1)).target.shapes == ((2, 1),)


@given(seeds)
def test_wold_matching_is_a_bijection_with_inverse(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    f = rng.randint(0, 2)
    a = random_rep(rng, n, fock_blocks=f, twist=False, conj=False)
    b = random_rep(rng, n, fock_blocks=f, twist=False, conj=False)
    if a.layout.size() != b.layout.size():
        return
    W = wold_matching(a.layout, b.layout)
    count = min(40, a.layout.size() or 40)
    seen = set()
    for r in range(count):
        t, z = W.image(r)
        assert z == 1 and t not in seen
        seen.add(t)
        assert W.adjoint().image(t) == (r, 1)
    for v in a.layout.vacua():
        t, _ = W.image(a.layout.rank(v))
        assert b.layout.unrank(t).depth == 0 and b.layout.shapes[b.layout.unrank(t).block] is None


@given(reps(), seeds)
def test_adjoint_inverts_phase_maps_and_products(rep, seed):
    rng = random.Random(seed)
    lay = rep.layout
    top = min(12, lay.size() or 12)
    W = compose(phase_map(lay, {r: rng.choice(PHASES) for r in range(top)}), Relabel(lay, tuple(range(1, rep.n + 1))))
    for r in range(top):
        x = SparseVector.basis(r).scale(3)
        assert W.adjoint().apply(W.apply(x)) == x
        assert W.apply(W.adjoint().apply(x)) == x


def test_direct_sum_of_identities_is_identity():
    a, b = fock(2).layout, cycle(2, (2,)).layout
    D = BasisDirectSum(a.concat(b), a.concat(b), ((a, a, IDENTITY), (b, b, IDENTITY)))
    assert D.is_identity()
    assert all(D.image(r) == (r, 1) for r in range(30))
    with pytest.raises(ValueError):
        BasisDirectSum(b.concat(a), a.concat(b), ((a, a, IDENTITY), (b, b, IDENTITY)))


def test_layout_helpers_used_by_maps():
    lay = Layout(2, (None, (1, 2)))
    assert lay.fock_blocks() == (0,) and lay.cycle_blocks() == (1,)
