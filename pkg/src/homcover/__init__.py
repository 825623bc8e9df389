"""Homotopy covers of graphs: walk and morphism homotopy, cover checks,
folded universal covers, deck groups and cover enumeration."""
from .graph import Diamond, Graph, GraphError, diamonds, is_stiff, load_graph, save_graph, to_dot
from .walks import Walk, WalkError, concat, prune_normal_form, reverse
from .morphism import Morphism, MorphismError, homotopic, load_morphism, pleat, save_morphism
from .covering import CoverError, check_cover, lift_homotopy, lift_walk
from .universal import FoldedCover, build_folded_cover, homotopic_rel_endpoints
from .deck import deck_group, enumerate_covers, identify_group, quotient, subgroups
from .isomorphism import are_isomorphic, find_isomorphism

__version__ = "0.1.0"
