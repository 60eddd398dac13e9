# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Finite multigraphs, edge configurations and their cluster structure.

An edge configuration is an :py:class:`int` rank in ``[0, 2^|E|)``: edge ``i`` is open iff bit ``i`` is set.
Loops and parallel edges are allowed, contraction creates both.

Text format::

    # comment lines and blank lines are ignored
    vertices 3
    0 1
    1 2
    2 2
"""
import itertools
import pathlib
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import attrs
import cachetools
import networkx as nx

from py_fuzzy_potts.common import const, error, logger, preprocess

_LOGGER = logger.get(__name__)
_COMPONENT_CACHE_SIZE: int = 1 << 17

Edge = Tuple[int, int]
Partition = Tuple[Tuple[int, ...], ...]
"""Blocks sorted internally and ordered by their minimum vertex."""


def _edges_converter(value: Sequence[Sequence[int]]) -> Tuple[Edge, ...]:
    return tuple((int(edge[0]), int(edge[1])) for edge in value)


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class Graph:
    """Vertices are ``0..vertex_count-1``; the order of ``edges`` defines the configuration encoding."""

    vertex_count: int = attrs.field()
    edges: Tuple[Edge, ...] = attrs.field(converter=_edges_converter, factory=tuple)

    @vertex_count.validator
    def _vertex_count_validator(self, attribute: attrs.Attribute, value: int) -> None:
        preprocess.integer(value, attribute.name, lower_bound=0)

    @edges.validator
    def _edges_validator(self, attribute: attrs.Attribute, value: Tuple[Edge, ...]) -> None:
        for ndx, (endpoint_a, endpoint_b) in enumerate(value):
            if not (0 <= endpoint_a < self.vertex_count and 0 <= endpoint_b < self.vertex_count):
                raise ValueError(
                    f"Argument '{attribute.name}' has edge {ndx}={(endpoint_a, endpoint_b)} "
                    f"outside of vertex range [0, {self.vertex_count})"
                )

    @property
    def edge_count(self) -> int:
        """``|E|``"""
        return len(self.edges)

    @property
    def config_count(self) -> int:
        """``2^|E|``"""
        return 1 << len(self.edges)

    def is_loop(self, edge: int) -> bool:
        """Both endpoints coincide."""
        endpoint_a, endpoint_b = self.edges[self.check_edge(edge)]
        return endpoint_a == endpoint_b

    def is_incident(self, edge: int, vertex: int) -> bool:
        """``vertex`` is an endpoint of ``edge``."""
        return vertex in self.edges[self.check_edge(edge)]

    def check_edge(self, edge: int) -> int:
        """Validates an edge index."""
        if not self.edges:
            raise ValueError(f"Graph has no edges, cannot use edge index '{edge}'")
        return preprocess.integer(edge, "edge", lower_bound=0, upper_bound=len(self.edges) - 1)  # type: ignore

    def check_vertex(self, vertex: int) -> int:
        """Validates a vertex index."""
        return preprocess.integer(vertex, "vertex", lower_bound=0, upper_bound=self.vertex_count - 1)  # type: ignore

    def check_config(self, config: int) -> int:
        """Validates a configuration rank."""
        return preprocess.integer(config, "config", lower_bound=0, upper_bound=self.config_count - 1)  # type: ignore

    def open_edges(self, config: int) -> Tuple[int, ...]:
        """Indices of the open edges of ``config``."""
        return tuple(ndx for ndx in range(len(self.edges)) if config >> ndx & 1)


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class Figure1:
    """``x`` and ``y`` joined by the edge ``e`` and by ``m`` paths of length two."""

    graph: Graph = attrs.field(validator=attrs.validators.instance_of(Graph))
    m: int = attrs.field()
    x: int = attrs.field(default=0)
    y: int = attrs.field(default=1)
    e: int = attrs.field(default=0)


class _UnionFind:
    """Union by rank with path compression."""

    def __init__(self, size: int):
        self._parent = list(range(size))
        self._rank = [0] * size

    def find(self, value: int) -> int:
        root = value
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[value] != root:
            self._parent[value], value = root, self._parent[value]
        return root

    def union(self, value_a: int, value_b: int) -> bool:
        root_a, root_b = self.find(value_a), self.find(value_b)
        if root_a == root_b:
            return False
        if self._rank[root_a] < self._rank[root_b]:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a
        if self._rank[root_a] == self._rank[root_b]:
            self._rank[root_a] += 1
        return True


@cachetools.cached(cachetools.LRUCache(maxsize=_COMPONENT_CACHE_SIZE))
def _partition_and_cycles(graph: Graph, config: int) -> Tuple[Partition, bool]:
    union_find = _UnionFind(graph.vertex_count)
    has_cycle = False
    for ndx, (endpoint_a, endpoint_b) in enumerate(graph.edges):
        if config >> ndx & 1:
            if not union_find.union(endpoint_a, endpoint_b):
                has_cycle = True
    blocks: Dict[int, List[int]] = {}
    for vertex in range(graph.vertex_count):
        blocks.setdefault(union_find.find(vertex), []).append(vertex)
    partition = tuple(sorted((tuple(block) for block in blocks.values()), key=lambda block: block[0]))
    return partition, has_cycle


def component_partition(graph: Graph, config: int) -> Partition:
    """
    Clusters of ``config``: connected components of the open subgraph, isolated vertices included.

    Args:
        graph: the multigraph.
        config: configuration rank.

    Returns:
        Blocks in canonical order.
    """
    return _partition_and_cycles(graph, graph.check_config(config))[0]


def component_count(graph: Graph, config: int) -> int:
    """``k(config)``; loops never change it."""
    return len(component_partition(graph, config))


def is_forest(graph: Graph, config: int) -> bool:
    """The open edge set is acyclic (an open loop is a cycle)."""
    return not _partition_and_cycles(graph, graph.check_config(config))[1]


def is_connected(graph: Graph, config: int) -> bool:
    """Single cluster."""
    return component_count(graph, config) == 1


def component_of(graph: Graph, config: int, vertex: int) -> Tuple[int, ...]:
    """Vertex set of the cluster containing ``vertex``."""
    graph.check_vertex(vertex)
    return next(block for block in component_partition(graph, config) if vertex in block)


def delete_edge(graph: Graph, edge: int) -> Graph:
    """``G - e``, survivors keep their relative order."""
    graph.check_edge(edge)
    return Graph(vertex_count=graph.vertex_count, edges=graph.edges[:edge] + graph.edges[edge + 1 :])


def contract_edge(graph: Graph, edge: int) -> Tuple[Graph, Tuple[int, ...]]:
    """
    ``G / e``: endpoints merged into the lower index, ``e`` removed, parallel edges kept and
    edges between the merged endpoints turned into loops.

    Contracting a loop merges nothing: the result is ``G - e`` with the identity map.

    Args:
        graph: the multigraph.
        edge: index of ``e``.

    Returns:
        The minor and the map ``old vertex -> new vertex``.
    """
    if graph.is_loop(edge):
        return delete_edge(graph, edge), tuple(range(graph.vertex_count))
    keep, drop = sorted(graph.edges[edge])
    vertex_map = tuple(keep if vertex == drop else vertex - (vertex > drop) for vertex in range(graph.vertex_count))
    edges = [
        (vertex_map[endpoint_a], vertex_map[endpoint_b])
        for ndx, (endpoint_a, endpoint_b) in enumerate(graph.edges)
        if ndx != edge
    ]
    return Graph(vertex_count=graph.vertex_count - 1, edges=edges), vertex_map


def drop_bit(config: int, edge: int) -> int:
    """Restriction of a configuration to the edges that survive the removal of ``edge``."""
    low = config & ((1 << edge) - 1)
    return low | (config >> (edge + 1)) << edge


def insert_bit(config: int, edge: int, value: int) -> int:
    """Inverse of :py:func:`drop_bit` given the state ``value`` of ``edge``."""
    low = config & ((1 << edge) - 1)
    return low | (value & 1) << edge | (config >> edge) << (edge + 1)


def edge_restriction(config: int, surviving_edges: Sequence[int]) -> int:
    """
    Re-indexes ``config`` onto a minor whose edge ``i`` is the old edge ``surviving_edges[i]``.
    """
    return sum(1 << new for new, old in enumerate(surviving_edges) if config >> old & 1)


def figure1_graph(m: int) -> Figure1:
    """
    Vertices ``x=0``, ``y=1`` and ``u_i = i + 1``; edge 0 is ``e = {x, y}`` followed by
    ``{x, u_i}, {u_i, y}`` for each ``i``. ``2m + 1`` edges.
    """
    preprocess.integer(m, "m", lower_bound=1)
    edges: List[Edge] = [(0, 1)]
    for ndx in range(1, m + 1):
        edges.extend([(0, ndx + 1), (ndx + 1, 1)])
    return Figure1(graph=Graph(vertex_count=m + 2, edges=edges), m=m)


def complete_graph(size: int) -> Graph:
    """``K_size``, edges in lexicographic order."""
    preprocess.integer(size, "size", lower_bound=1)
    return Graph(vertex_count=size, edges=list(itertools.combinations(range(size), 2)))


def path_graph(size: int) -> Graph:
    """``P_size`` on ``size`` vertices."""
    preprocess.integer(size, "size", lower_bound=1)
    return Graph(vertex_count=size, edges=[(ndx, ndx + 1) for ndx in range(size - 1)])


def cycle_graph(size: int) -> Graph:
    """``C_size``; size 1 is a loop and size 2 a pair of parallel edges."""
    preprocess.integer(size, "size", lower_bound=1)
    return Graph(vertex_count=size, edges=[(ndx, (ndx + 1) % size) for ndx in range(size)])


def star_graph(size: int) -> Graph:
    """Center 0 joined to ``size - 1`` leaves."""
    preprocess.integer(size, "size", lower_bound=1)
    return Graph(vertex_count=size, edges=[(0, ndx) for ndx in range(1, size)])


FAMILIES: Dict[str, str] = {
    "figure1": "x, y joined by e and by m paths of length two (size = m)",
    "complete": "complete graph on size vertices",
    "path": "path on size vertices",
    "cycle": "cycle on size vertices",
    "star": "star on size vertices",
}


def family(name: str, size: int) -> Graph:
    """Built-in graph families by name, see :py:data:`FAMILIES`."""
    name = preprocess.string(name, "name").lower()  # type: ignore
    builders = {
        "figure1": lambda value: figure1_graph(value).graph,
        "complete": complete_graph,
        "path": path_graph,
        "cycle": cycle_graph,
        "star": star_graph,
    }
    if name not in builders:
        raise ValueError(f"Unknown graph family '{name}'. Known: {sorted(builders)}")
    return builders[name](size)  # type: ignore


def enumerate_connected_graphs(
    max_vertices: int, max_edges: int, *, min_vertices: Optional[int] = None
) -> List[Graph]:
    """
    Connected simple graphs with ``min_vertices..max_vertices`` vertices and at most ``max_edges``
    edges, one per isomorphism class.

    The canonical form of a graph is the lexicographically smallest sorted edge list over all
    vertex relabellings, which is also the edge order of the returned graph. Output is ordered by
    vertex count, edge count and canonical form.

    Args:
        max_vertices: largest vertex count.
        max_edges: largest edge count.
        min_vertices: smallest vertex count, defaults to ``max_vertices``.

    Returns:
        Deterministically ordered list.
    """
    preprocess.integer(max_vertices, "max_vertices", lower_bound=1)
    preprocess.integer(max_edges, "max_edges", lower_bound=0)
    min_vertices = preprocess.integer(
        min_vertices, "min_vertices", lower_bound=1, upper_bound=max_vertices, is_none_valid=True
    )
    if min_vertices is None:
        min_vertices = max_vertices
    result: List[Graph] = []
    for size in range(min_vertices, max_vertices + 1):
        canonical: Dict[Tuple[Edge, ...], None] = {}
        candidates = list(itertools.combinations(range(size), 2))
        for edge_total in range(min(max_edges, len(candidates)) + 1):
            for edges in itertools.combinations(candidates, edge_total):
                if _is_connected_simple(size, edges):
                    canonical.setdefault(_canonical_form(size, edges), None)
        ordered = sorted(canonical, key=lambda edges: (len(edges), edges))
        result.extend(Graph(vertex_count=size, edges=edges) for edges in ordered)
    _LOGGER.debug(
        "Enumerated %d connected graphs (vertices %d..%d, edges <= %d)",
        len(result),
        min_vertices,
        max_vertices,
        max_edges,
    )
    return result


def _is_connected_simple(size: int, edges: Sequence[Edge]) -> bool:
    value = nx.Graph()
    value.add_nodes_from(range(size))
    value.add_edges_from(edges)
    return nx.is_connected(value)


def _canonical_form(size: int, edges: Sequence[Edge]) -> Tuple[Edge, ...]:
    best: Optional[Tuple[Edge, ...]] = None
    for perm in itertools.permutations(range(size)):
        relabelled = tuple(
            sorted(tuple(sorted((perm[endpoint_a], perm[endpoint_b]))) for endpoint_a, endpoint_b in edges)
        )
        if best is None or relabelled < best:
            best = relabelled  # type: ignore
    return best  # type: ignore


def to_networkx(graph: Graph) -> nx.MultiGraph:
    """Export with edge keys equal to the edge indices."""
    result = nx.MultiGraph()
    result.add_nodes_from(range(graph.vertex_count))
    for ndx, (endpoint_a, endpoint_b) in enumerate(graph.edges):
        result.add_edge(endpoint_a, endpoint_b, key=ndx)
    return result


def parse_graph(text: str) -> Graph:
    """
    Parses the text format described in the module documentation.

    Raises:
        error.GraphParseError: with the 1-based line number of the offending line.
    """
    preprocess.validate_type(text, "text", str)
    vertex_count: Optional[int] = None
    edges: List[Edge] = []
    last_line = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        last_line = line_number
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if vertex_count is None:
            header = const.GRAPH_HEADER_REGEX.match(line)
            if not header:
                raise error.GraphParseError(line_number, raw, "expected 'vertices N'")
            vertex_count = int(header.group(1))
            continue
        match = const.GRAPH_EDGE_REGEX.match(line)
        if not match:
            raise error.GraphParseError(line_number, raw, "expected an edge 'u v'")
        endpoint_a, endpoint_b = (int(val) for val in match.groups())
        if endpoint_a >= vertex_count or endpoint_b >= vertex_count:
            raise error.GraphParseError(line_number, raw, f"endpoint outside of [0, {vertex_count})")
        edges.append((endpoint_a, endpoint_b))
    if vertex_count is None:
        raise error.GraphParseError(last_line + 1, "", "missing 'vertices N' header")
    return Graph(vertex_count=vertex_count, edges=edges)


def load_graph(path: pathlib.Path) -> Graph:
    """Reads :py:func:`parse_graph` input from a file."""
    path = preprocess.path(path, "path", exists=True, is_file=True, can_read=True)
    with open(path, encoding=const.ENCODING_UTF8) as in_file:
        return parse_graph(in_file.read())


def dump_graph(graph: Graph) -> str:
    """Inverse of :py:func:`parse_graph`."""
    lines = [f"vertices {graph.vertex_count}"]
    lines.extend(f"{endpoint_a} {endpoint_b}" for endpoint_a, endpoint_b in graph.edges)
    return "\n".join(lines) + "\n"


def iter_configs(graph: Graph) -> Iterator[int]:
    """All configuration ranks in increasing order."""
    return iter(range(graph.config_count))
