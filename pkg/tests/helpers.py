"""Random exact objects shared by the tests.

Everything is driven by an explicit ``random.Random`` or by hypothesis, so
runs are reproducible.
"""
import random

from hypothesis import strategies as st

from toeplitzkit.layout import BasisName
from toeplitzkit.representation import Block, Representation, cycle_block, fock_block
from toeplitzkit.scalars import I, ONE, Scalar, cayley, mat_mul, permutation_matrix
from toeplitzkit.symbolic import AlgebraElement
from toeplitzkit.words import SparseVector

PHASES = (ONE, I, -ONE, -I, Scalar("3/5+4/5i"), Scalar("-5/13+12/13i"))


def gaussian(rng, bound=2):
    return Scalar(rng.randint(-bound, bound), rng.randint(-bound, bound))


def random_skew(rng, n, bound=1):
    s = [[None] * n for _ in range(n)]
    for i in range(n):
        s[i][i] = Scalar(0, rng.randint(-bound, bound))
        for j in range(i + 1, n):
            z = gaussian(rng, bound)
            s[i][j] = z
            s[j][i] = -z.conjugate()
    return tuple(tuple(r) for r in s)


def random_unitary(rng, n, kind=None):
    """Monomial unitary (permutation with phases) or a Cayley transform."""
    kind = kind or rng.choice(("monomial", "cayley"))
    if kind == "cayley":
        return cayley(random_skew(rng, n))
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    p = permutation_matrix(perm)
    d = tuple(tuple(rng.choice(PHASES) if i == j else Scalar(0) for j in range(n)) for i in range(n))
    return mat_mul(p, d)


def random_word(rng, n, lo=0, hi=3):
    return tuple(rng.randint(1, n) for _ in range(rng.randint(lo, hi)))


def random_primitive_word(rng, n, hi=3):
    while True:
        w = random_word(rng, n, 1, hi)
        if all(w != w[k:] + w[:k] for k in range(1, len(w))):
            return w


def random_rep(rng, n, fock_blocks=None, cycles=None, twist=None, conj=None, block_twists=False):
    f = rng.randint(0, 2) if fock_blocks is None else fock_blocks
    c = rng.randint(0 if f else 1, 2) if cycles is None else cycles
    blocks = [fock_block() for _ in range(f)] + [cycle_block(random_word(rng, n, 1, 3)) for _ in range(c)]
    rng.shuffle(blocks)
    if block_twists:
        blocks = [Block(b.kind, b.word, random_unitary(rng, n) if rng.random() < 0.5 else None) for b in blocks]
    tw = (random_unitary(rng, n) if rng.random() < 0.5 else None) if twist is None else (twist or None)
    rep = Representation(n, tuple(blocks), tw)
    use_conj = rng.random() < 0.5 if conj is None else conj
    if use_conj:
        size = rep.layout.size()
        top = 12 if size is None else size
        ranks = rng.sample(range(top), min(3, top))
        rep = rep.conjugated({r: rng.choice(PHASES[1:]) for r in ranks})
    return rep


def random_name_vector(rng, rep, depth=3, terms=3):
    names = rep.layout.names(depth)
    return SparseVector((rng.choice(names), gaussian(rng)) for _ in range(terms))


def random_element(rng, n, terms=4, length=3):
    items = []
    for _ in range(rng.randint(1, terms)):
        items.append(((random_word(rng, n, 0, length), random_word(rng, n, 0, length)), gaussian(rng)))
    return AlgebraElement(n, items)


# -- hypothesis strategies -------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small_n = st.integers(min_value=1, max_value=3)


@st.composite
def reps(draw, n=None, **kw):
    rng = random.Random(draw(seeds))
    return random_rep(rng, draw(small_n) if n is None else n, **kw)


def words(n):
    return st.lists(st.integers(1, n), max_size=4).map(tuple)


gaussian_scalars = st.builds(Scalar, st.integers(-3, 3), st.integers(-3, 3))


def name(block, k, word):
    return BasisName(block, k, tuple(word))
