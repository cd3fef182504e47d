"""Finite Kripke structures and teams, plus the binary-tree frame builder.

The text format is line oriented:

    world <id>
    edge <id> <id>
    label <id> <prop> [<prop> ...]
    # comment

Teams are plain frozensets of world ids.
"""

from __future__ import annotations

__all__ = [
    "KripkeStructure", "Team", "ModelFormatError",
    "parse_structure", "render_structure", "successors",
    "build_full_binary_tree",
]

Team = frozenset


class ModelFormatError(ValueError):
    pass


class KripkeStructure:
    """Worlds, an accessibility relation and a proposition labeling.

    Immutable after construction; worlds keep a stable order so output
    derived from a structure is deterministic.
    """

    def __init__(self, worlds, edges, labels):
        self.worlds: tuple[str, ...] = tuple(worlds)
        world_set = set(self.worlds)
        if len(world_set) != len(self.worlds):
            raise ModelFormatError("duplicate world id")
        self.edges: frozenset[tuple[str, str]] = frozenset(edges)
        for a, b in self.edges:
            if a not in world_set or b not in world_set:
                raise ModelFormatError(f"edge ({a}, {b}) references an unknown world")
        self.labels: dict[str, frozenset[str]] = {w: frozenset() for w in self.worlds}
        for w, props in dict(labels).items():
            if w not in world_set:
                raise ModelFormatError(f"label references unknown world {w!r}")
            self.labels[w] = frozenset(props)
        by_source: dict[str, list[str]] = {w: [] for w in self.worlds}
        for a, b in sorted(self.edges):
            by_source[a].append(b)
        self._succ = {w: tuple(ts) for w, ts in by_source.items()}

    def successors_of(self, world: str) -> tuple[str, ...]:
        return self._succ[world]

    def has_label(self, world: str, prop: str) -> bool:
        return prop in self.labels[world]

    def __eq__(self, other):
        if not isinstance(other, KripkeStructure):
            return NotImplemented
        return (set(self.worlds) == set(other.worlds)
                and self.edges == other.edges
                and self.labels == other.labels)

    def __repr__(self):
        return (f"KripkeStructure({len(self.worlds)} worlds, "
                f"{len(self.edges)} edges)")


def parse_structure(text: str) -> KripkeStructure:
    """Parse the line-oriented model format."""
    worlds: list[str] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []
    labels: dict[str, set[str]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, rest = parts[0], parts[1:]
        if kind == "world":
            if len(rest) != 1:
                raise ModelFormatError(f"line {lineno}: world takes exactly one id")
            if rest[0] in seen:
                raise ModelFormatError(f"line {lineno}: duplicate world {rest[0]!r}")
            seen.add(rest[0])
            worlds.append(rest[0])
        elif kind == "edge":
            if len(rest) != 2:
                raise ModelFormatError(f"line {lineno}: edge takes two world ids")
            for w in rest:
                if w not in seen:
                    raise ModelFormatError(f"line {lineno}: unknown world {w!r}")
            edges.append((rest[0], rest[1]))
        elif kind == "label":
            if len(rest) < 2:
                raise ModelFormatError(f"line {lineno}: label takes a world and propositions")
            if rest[0] not in seen:
                raise ModelFormatError(f"line {lineno}: unknown world {rest[0]!r}")
            labels.setdefault(rest[0], set()).update(rest[1:])
        else:
            raise ModelFormatError(f"line {lineno}: unknown directive {kind!r}")

    return KripkeStructure(worlds, edges, labels)


def render_structure(structure: KripkeStructure) -> str:
    """Serialize back to the text format (sorted, deterministic)."""
    lines = [f"world {w}" for w in sorted(structure.worlds)]
    lines += [f"edge {a} {b}" for a, b in sorted(structure.edges)]
    for w in sorted(structure.worlds):
        props = sorted(structure.labels[w])
        if props:
            lines.append("label %s %s" % (w, " ".join(props)))
    return "\n".join(lines) + "\n"


def successors(structure: KripkeStructure, team: frozenset) -> frozenset:
    """The image of the team under the accessibility relation."""
    out: set[str] = set()
    for w in team:
        out.update(structure.successors_of(w))
    return frozenset(out)


def build_full_binary_tree(n: int, clause_literals=()) -> KripkeStructure:
    """Complete binary tree of depth n realizing all labelings of p1..pn.

    The two edges below a depth-(i-1) node decide the value of p_i; the leaf
    reached by bit string b carries exactly the propositions p_i with
    b[i-1] == '1'.  For each clause (a triple of nonzero literals over
    p1..pn, negative for negated), the proposition f_j is labeled on exactly
    the leaves where all three of clause j's literals are false.
    """
    if n < 1:
        raise ValueError("tree depth must be positive")
    clauses = [tuple(c) for c in clause_literals]
    for c in clauses:
        for lit in c:
            if lit == 0 or abs(lit) > n:
                raise ValueError(f"literal {lit} out of range for {n} variables")

    worlds = ["r"]
    edges = []
    labels: dict[str, set[str]] = {}
    frontier = ["r"]
    for _ in range(n):
        nxt = []
        for node in frontier:
            for bit in "01":
                child = node + bit
                worlds.append(child)
                edges.append((node, child))
                nxt.append(child)
        frontier = nxt

    for leaf in frontier:
        bits = leaf[1:]
        assignment = {i + 1: bits[i] == "1" for i in range(n)}
        props = {f"p{i}" for i in range(1, n + 1) if assignment[i]}
        for j, clause in enumerate(clauses, start=1):
            if all(not _lit_true(lit, assignment) for lit in clause):
                props.add(f"f{j}")
        labels[leaf] = props

    return KripkeStructure(worlds, edges, labels)


def _lit_true(lit: int, assignment: dict[int, bool]) -> bool:
    value = assignment[abs(lit)]
    return value if lit > 0 else not value


def random_structures(max_worlds: int, props, rng, count: int):
    """Sample `count` random structures with up to max_worlds worlds."""
    props = list(props)
    out = []
    for _ in range(count):
        k = rng.randint(1, max_worlds)
        ids = [f"w{i}" for i in range(k)]
        edges = [(a, b) for a in ids for b in ids if rng.random() < 0.45]
        labels = {w: {p for p in props if rng.random() < 0.5} for w in ids}
        out.append(KripkeStructure(ids, edges, labels))
    return out
