import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_word, reps
from toeplitzkit.layout import BasisName, Layout


def brute_names(layout, depth):
    """Every canonical name up to ``depth``, filtered from all words and sorted."""
    out = []
    for b, shape in enumerate(layout.shapes):
        ks = [0] if shape is None else range(len(shape))
        for k in ks:
            for d in range(depth + 1):
                for w in itertools.product(range(1, layout.n + 1), repeat=d):
                    if shape is not None and w and w[-1] == shape[(k - 1) % len(shape)]:
                        continue
                    out.append(BasisName(b, k, w))
    return sorted(out, key=lambda x: (len(x.word), x.block, x.k, x.word))


LAYOUTS = [
    Layout(2, (None,)),
    Layout(2, ((1, 2),)),
    Layout(2, ((1,),)),
    Layout(3, (None, (1, 3), None)),
    Layout(1, ((1,), None)),
    Layout(2, ((2,), (1,), None, (1, 1, 2))),
]


@pytest.mark.parametrize("layout", LAYOUTS)
def test_enumeration_matches_brute_force(layout):
    depth = 3
    names = brute_names(layout, depth)
    assert layout.names(depth) == names
    for r, b in enumerate(names):
        assert layout.rank(b) == r
        assert layout.unrank(r) == b
        assert layout.is_canonical(b)


def test_enumeration_examples():
    assert Layout(2, (None,)).names(1) == [BasisName(0, 0, ()), BasisName(0, 0, (1,)), BasisName(0, 0, (2,))]
    assert Layout(2, ((1, 2),)).names(0) == [BasisName(0, 0, ()), BasisName(0, 1, ())]
    assert Layout(2, ((1,),)).names(1) == [BasisName(0, 0, ()), BasisName(0, 0, (2,))]
    assert not Layout(2, ((1,),)).is_canonical(BasisName(0, 0, (1,)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 4))
def test_level_counts(seed, n, depth):
    rng = random.Random(seed)
    shapes = tuple(None if rng.random() < 0.4 else random_word(rng, n, 1, 3) for _ in range(rng.randint(1, 3)))
    lay = Layout(n, shapes)
    for b, s in enumerate(shapes):
        level = [x for x in lay.names(depth) if x.block == b and x.depth == depth]
        if s is None:
            expected = n**depth
        else:
            expected = len(s) if depth == 0 else len(s) * (n - 1) * n ** (depth - 1)
        assert len(level) == expected


@given(reps(), st.integers(0, 200))
def test_rank_unrank_bijection(rep, r):
    lay = rep.layout
    size = lay.size()
    if size is not None and r >= size:
        with pytest.raises(IndexError):
            lay.unrank(r)
        return
    assert lay.rank(lay.unrank(r)) == r


def test_finite_layout_size():
    assert Layout(1, ((1,), (1, 1))).size() == 3
    assert Layout(1, (None,)).size() is None


def test_non_canonical_rejected():
    lay = Layout(2, ((1, 2),))
    with pytest.raises(ValueError):
        lay.rank(BasisName(0, 1, (1,)))
    with pytest.raises(ValueError):
        lay.rank(BasisName(0, 2, ()))
