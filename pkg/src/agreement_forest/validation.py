"""Input coercion for the public entry points."""
from __future__ import annotations

from os import PathLike
from pathlib import Path

from .tree import PhyloTree, parse_newick


def check_tree(x, name: str = "tree") -> PhyloTree:
    """Accept a PhyloTree, a Newick string, or a path to a Newick file."""
    if isinstance(x, PhyloTree):
        return x
    if isinstance(x, PathLike):
        x = Path(x).read_text()
    if isinstance(x, str):
        return parse_newick(x.strip())
    raise TypeError(f"{name} must be a PhyloTree or Newick string, got {type(x).__name__}")


def check_tree_pair(t1, t2) -> tuple[PhyloTree, PhyloTree]:
    t1 = check_tree(t1, "t1")
    t2 = check_tree(t2, "t2")
    if t1.leaves != t2.leaves:
        only1 = sorted(t1.leaves - t2.leaves)
        only2 = sorted(t2.leaves - t1.leaves)
        raise ValueError(f"trees have different leaf sets (only in t1: {only1}, only in t2: {only2})")
    return t1, t2
