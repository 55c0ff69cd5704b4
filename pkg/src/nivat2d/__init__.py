"""Exact pattern-complexity tools for two-dimensional configurations."""
from .geometry import (ConvexLatticeSet, DirectedLine, Edge, Point, boundary_edges, convex_hull,
                       is_enveloped, line_lattice_count, rectangle, remove_vertex)
from .configuration import (Alphabet, Configuration, Pattern, Periodic, Substitution, Window, WordLift,
                            apply_unimodular, evaluate, generate_substitution, orbit, restrict, translate)
from .complexity import (complexity, complexity_profile, count, discrepancy, rect_complexity, words)
from .extension import (GeneratingSetResult, LemmaViolation, NotFound, chain_discrepancy, discrepancy_step,
                        extension_fan, find_generating_set, is_generated, verify_edge_bound)

__version__ = "0.1.0"
