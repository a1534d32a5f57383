"""Agreement forests and acyclic agreement forests of rooted multifurcating trees."""
from .approx import approximate_maf
from .dfvs import (
    FvsSolution,
    WeightedDigraph,
    is_fvs,
    is_proper,
    minimalize,
    properize,
    solve_dfvs_exact,
    solve_dfvs_greedy,
)
from .estimators import InfeasibleError, MaximumAcyclicAgreementForest, MaximumAgreementForest
from .forest import Certificate, Forest, cut, is_agreement_forest, is_forest_for
from .fpt import SearchStats, solve_maf_exact
from .generate import random_pair, random_tree, rspr_move
from .maaf import (
    approximate_maaf,
    build_dfvs_instance,
    inheritance_graph,
    is_acyclic_agreement_forest,
    label_trees,
    maximalize,
    minimally_refine,
    remove_fvs,
)
from .oracle import brute_dfvs, brute_maaf, brute_maf
from .tree import (
    NewickError,
    PhyloTree,
    common_refinement,
    embed,
    is_refinement,
    parse_newick,
    restrict,
    write_newick,
)

__version__ = "0.1.0"
