"""Undirected, unweighted graphs and node partitions.

Graphs are loaded from simple edge lists or a GML subset and stored with
dense 0-based node ids. Original node labels are kept in a label map so
results can be reported in the input's own vocabulary.
"""

from __future__ import annotations

import numpy as np


class ParseError(ValueError):
    """Malformed input file (bad line, missing field)."""


class ValidationError(ValueError):
    """Structurally invalid input (self-loop, dangling edge, bad cover)."""


class Graph:
    """Immutable undirected, unweighted graph.

    Nodes are dense integers 0..n-1. ``labels[i]`` is the original label of
    node i; ``adjacency[i]`` is a sorted numpy array of neighbors.
    """

    def __init__(self, node_count, edges, labels=None):
        if node_count < 1:
            raise ValidationError("graph must have at least one node")
        seen = set()
        adj = [[] for _ in range(node_count)]
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop on node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValidationError(f"edge ({u},{v}) outside node range")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.node_count = node_count
        self.edges = np.array(sorted(seen), dtype=np.int64).reshape(-1, 2)
        self.edge_count = len(seen)
        self.adjacency = [np.array(sorted(a), dtype=np.int64) for a in adj]
        self.degrees = np.array([len(a) for a in self.adjacency], dtype=np.int64)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(node_count)]
        if len(self.labels) != node_count:
            raise ValidationError("label map size does not match node count")
        self.label_to_id = {lab: i for i, lab in enumerate(self.labels)}

    def neighbors(self, u):
        return self.adjacency[u]

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"


class Partition:
    """Assignment of every node to exactly one community.

    Community ids are dense 0..k-1. The canonical signature lists communities
    sorted by (smallest member, size), each as a sorted node tuple, and is
    invariant under community relabeling.
    """

    def __init__(self, assignment):
        assignment = np.asarray(assignment, dtype=np.int64)
        if assignment.ndim != 1 or assignment.size == 0:
            raise ValidationError("assignment must be a nonempty 1-D array")
        ids = np.unique(assignment)
        if ids[0] != 0 or ids[-1] != len(ids) - 1:
            # renumber to dense ids, keeping first-seen order
            remap = {}
            dense = np.empty_like(assignment)
            for i, c in enumerate(assignment):
                dense[i] = remap.setdefault(int(c), len(remap))
            assignment = dense
        self.assignment = assignment
        self.community_count = int(assignment.max()) + 1
        self._communities = None
        self._signature = None

    @property
    def communities(self):
        if self._communities is None:
            order = np.argsort(self.assignment, kind="stable")
            bounds = np.searchsorted(self.assignment[order], np.arange(self.community_count + 1))
            self._communities = [order[bounds[c]:bounds[c + 1]] for c in range(self.community_count)]
        return self._communities

    @property
    def signature(self):
        if self._signature is None:
            comms = [tuple(int(x) for x in c) for c in self.communities]
            comms.sort(key=lambda c: (c[0], len(c)))
            self._signature = tuple(comms)
        return self._signature

    def __len__(self):
        return len(self.assignment)

    def __repr__(self):
        return f"Partition(n={len(self.assignment)}, k={self.community_count})"


def load_edge_list(text):
    """Parse a whitespace-separated edge list into a Graph.

    Blank lines and lines starting with '#' are skipped. Node labels may be
    arbitrary strings and are remapped to dense ids in first-seen order.
    Duplicate and reversed-duplicate edges collapse to one edge.
    """
    labels = []
    ids = {}

    def node_id(label):
        if label not in ids:
            ids[label] = len(labels)
            labels.append(label)
        return ids[label]

    edges = []
    for lineno, line in enumerate(_lines(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two node labels, got {len(parts)}")
        u, v = node_id(parts[0]), node_id(parts[1])
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop on '{parts[0]}'")
        edges.append((u, v))
    if not labels:
        raise ValidationError("empty graph: no edges found")
    return Graph(len(labels), edges, labels)


def load_gml(text):
    """Parse a GML subset into (Graph, optional ground-truth Partition).

    Recognized structure: ``graph [ node [ id N label "x" value V ] ...
    edge [ source A target B ] ... ]``. Any other attributes are ignored.
    A node ``value`` field, when present on every node, is captured as the
    ground-truth community label.
    """
    tokens = _tokenize_gml(text)
    nodes = []       # (gml_id, label, value)
    edges_raw = []   # (source, target)
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in ("node", "edge") and i + 1 < len(tokens) and tokens[i + 1] == "[":
            fields, i = _parse_gml_block(tokens, i + 2)
            if tok == "node":
                if "id" not in fields:
                    raise ParseError("node block missing id")
                nodes.append((fields["id"], fields.get("label"), fields.get("value")))
            else:
                if "source" not in fields or "target" not in fields:
                    raise ParseError("edge block missing source/target")
                edges_raw.append((fields["source"], fields["target"]))
        else:
            i += 1
    if not nodes:
        raise ValidationError("empty graph: no nodes found")

    id_map = {}
    labels = []
    values = []
    for gml_id, label, value in nodes:
        if gml_id in id_map:
            raise ParseError(f"duplicate node id {gml_id}")
        id_map[gml_id] = len(labels)
        labels.append(str(label) if label is not None else str(gml_id))
        values.append(value)
    edges = []
    for s, t in edges_raw:
        if s not in id_map or t not in id_map:
            raise ValidationError(f"edge ({s},{t}) references unknown node")
        u, v = id_map[s], id_map[t]
        if u == v:
            raise ValidationError(f"self-loop on node id {s}")
        edges.append((u, v))
    graph = Graph(len(labels), edges, labels)

    ground_truth = None
    if all(v is not None for v in values):
        comm = {}
        assignment = [comm.setdefault(v, len(comm)) for v in values]
        ground_truth = Partition(np.array(assignment))
    return graph, ground_truth


def load_labels(text, graph):
    """Parse a ``node_label community_label`` file into a Partition.

    Every node of ``graph`` must appear exactly once; labels are matched
    against the graph's original label map.
    """
    assignment = np.full(graph.node_count, -1, dtype=np.int64)
    comm = {}
    for lineno, line in enumerate(_lines(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'node community', got {len(parts)} fields")
        node_label, comm_label = parts
        if node_label not in graph.label_to_id:
            raise ValidationError(f"line {lineno}: unknown node '{node_label}'")
        node = graph.label_to_id[node_label]
        if assignment[node] != -1:
            raise ValidationError(f"line {lineno}: duplicate node '{node_label}'")
        assignment[node] = comm.setdefault(comm_label, len(comm))
    missing = np.nonzero(assignment == -1)[0]
    if missing.size:
        raise ValidationError(f"missing labels for {missing.size} nodes, e.g. '{graph.labels[missing[0]]}'")
    return Partition(assignment)


def _lines(text):
    if hasattr(text, "read"):
        text = text.read()
    return text.splitlines()


def _tokenize_gml(text):
    if hasattr(text, "read"):
        text = text.read()
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string in GML input")
            tokens.append(text[i + 1:j])
            i = j + 1
        elif c in "[]":
            tokens.append(c)
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "[]":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _parse_gml_block(tokens, i):
    """Read key/value pairs until the matching ']', skipping nested blocks."""
    fields = {}
    while i < len(tokens):
        tok = tokens[i]
        if tok == "]":
            return fields, i + 1
        if i + 1 < len(tokens) and tokens[i + 1] == "[":
            _, i = _parse_gml_block(tokens, i + 2)  # nested block, ignored
            continue
        if i + 1 >= len(tokens):
            raise ParseError(f"dangling key '{tok}' in GML block")
        value = tokens[i + 1]
        try:
            value = int(value)
        except ValueError:
            try:
                value = float(value)
            except ValueError:
                pass
        if tok not in fields:
            fields[tok] = value
        i += 2
    raise ParseError("unterminated GML block")
