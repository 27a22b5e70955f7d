"""groupoidkit: executable cylinder/bisection calculus on graph groupoids.

Modules
-------
graphs      finite directed multigraphs, parsing, adjacency data
boundary    boundary-path space, cylinder sets, clopen algebra, fullness
groupoid    arrow atoms and compact open bisections of the graph groupoid
indexsets   exact subsets of N and index pair families for stabilization
bgr         bisection covers, the staged unitary, corner conjugation
stab        graph stabilization, the explicit groupoid isomorphism, moves
intmat      exact integer matrices, Smith normal form, Bowen-Franks data
oracle      brute-force reference semantics used to cross-check everything
cli         the command-line surface
"""

__version__ = "0.1.0"

from .graphs import DirectedGraph, VertexClass, builtin_graph, parse_graph
from .boundary import (
    BoundaryPrefix,
    ClopenSet,
    CylinderAtom,
    IndexedClopenSet,
    Path,
    enumerate_boundary,
    is_full,
    shift,
)
from .intmat import (
    IntegerMatrix,
    SmithDecomposition,
    bowen_franks,
    certify_distinct,
    det,
    smith_normal_form,
)
from .indexsets import IndexSet

__all__ = [
    "DirectedGraph",
    "VertexClass",
    "builtin_graph",
    "parse_graph",
    "BoundaryPrefix",
    "ClopenSet",
    "CylinderAtom",
    "IndexedClopenSet",
    "Path",
    "enumerate_boundary",
    "is_full",
    "shift",
    "IntegerMatrix",
    "SmithDecomposition",
    "bowen_franks",
    "certify_distinct",
    "det",
    "smith_normal_form",
    "IndexSet",
    "__version__",
]
