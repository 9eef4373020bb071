"""Defect projection, multiplicity and the Wold-type splitting.

The defect scan evaluates ``p_n = I - sum v_i v_i^*`` on basis vectors and
never looks at block kinds; :func:`multiplicity` reads the block structure.
Tests hold the two against each other.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .basismaps import BasisMap, Segment
from .layout import BasisName
from .representation import Representation
from .symbolic import defect_element, evaluate
from .words import SparseVector


def defect_basis(rep: Representation, depth: int) -> list:
    """Names ``b`` of depth <= ``depth`` with ``rep(p_n) e_b = e_b``.

    In this class the defect operator is a 0/1 diagonal; any other outcome
    means the generator actions are broken and raises ``AssertionError``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    p = defect_element(rep.n)
    found = []
    for name in rep.layout.names(depth):
        e = SparseVector.basis(name)
        img = evaluate(p, rep, e)
        if img == e:
            found.append(name)
        elif img:
            raise AssertionError(f"defect operator is not diagonal at {name}: {img!r}")
    return found


def multiplicity(rep: Representation) -> int:
    return rep.num_fock


def is_essential(rep: Representation) -> bool:
    return multiplicity(rep) == 0


@dataclass(frozen=True)
class WoldReport:
    multiplicity: int
    shift_block_indices: tuple
    essential_block_indices: tuple
    defect_names: tuple
    reconstruction: Representation
    correspondence: BasisMap  # original basis -> reconstruction basis

    def to_json(self) -> dict:
        from .serialize import representation_to_json

        return {
            "multiplicity": self.multiplicity,
            "shift_block_indices": list(self.shift_block_indices),
            "essential_block_indices": list(self.essential_block_indices),
            "defect_names": [str(b) for b in self.defect_names],
            "reconstruction": representation_to_json(self.reconstruction),
        }


def wold(rep: Representation) -> WoldReport:
    """Split into essential (cycle) blocks followed by the Fock blocks.

    The reconstruction keeps each block's twist and moves the phase data
    along with the block reordering; ``correspondence`` is the block
    permutation that intertwines the two.
    """
    essential = tuple(b for b, blk in enumerate(rep.blocks) if blk.kind == "cycle")
    shift = tuple(b for b, blk in enumerate(rep.blocks) if blk.kind == "fock")
    order = essential + shift
    blocks = tuple(rep.blocks[b] for b in order)
    recon = Representation(rep.n, blocks, rep.twist)
    segs = tuple(Segment((b,), (t,), "all") for t, b in enumerate(order))
    corr = BasisMap(rep.layout, recon.layout, segs)
    if rep.conj:
        recon = replace(recon, conj=tuple((corr.image(r)[0], z) for r, z in rep.conj))
    return WoldReport(
        multiplicity=len(shift),
        shift_block_indices=shift,
        essential_block_indices=essential,
        defect_names=tuple(defect_basis(rep, 0)),
        reconstruction=recon,
        correspondence=corr,
    )


def defect_vacua(rep: Representation) -> list:
    return [BasisName(b, 0, ()) for b in rep.layout.fock_blocks()]
