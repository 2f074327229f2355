"""Structural data model for 2D frames: nodes, elements, supports, loads.

Every node carries three degrees of freedom ordered (u, w, theta), so node
``i`` owns global DOFs ``3*i``, ``3*i + 1`` and ``3*i + 2``. Node ids must
be the contiguous range ``0 .. n_nodes - 1`` so that this mapping is a
bijection onto ``[0, n_dof)``.

Units are SI throughout: coordinates in m, moduli in Pa, areas in m^2,
second moments in m^4, forces in N, moments in N*m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

COMPONENTS = ("u", "w", "theta")

KIND_BEAM = "beam"
KIND_PIN = "pin-ended"


class ModelError(ValueError):
    """Base class for structural model validation failures."""


class DuplicateNode(ModelError):
    """Two nodes share the same id."""


class DanglingElement(ModelError):
    """An element references a node id that does not exist."""


class Disconnected(ModelError):
    """The element connectivity graph does not span all nodes."""


class UnconstrainedStructure(ModelError):
    """No translational DOF is fixed anywhere; the model is a mechanism."""


class UnknownNode(ModelError):
    """A node id lookup failed."""


@dataclass(frozen=True)
class Node:
    """A mesh node with its reference (undeformed) coordinates."""

    id: int
    x0: float
    y0: float


@dataclass(frozen=True)
class ElementProps:
    """Material and section data of one element.

    ``kind`` is either ``"beam"`` (moment-carrying at both ends) or
    ``"pin-ended"`` (moment-free at both ends, axial force only).
    """

    e_modulus: float
    area: float
    inertia: float
    kind: str = KIND_BEAM

    def __post_init__(self):
        if self.e_modulus <= 0 or self.area <= 0 or self.inertia <= 0:
            raise ModelError(
                f"element properties must be positive, got E={self.e_modulus}, "
                f"A={self.area}, I={self.inertia}")
        if self.kind not in (KIND_BEAM, KIND_PIN):
            raise ModelError(f"unknown element kind {self.kind!r}")


@dataclass(frozen=True)
class Element:
    """A two-node element with its reference length and orientation."""

    node_i: int
    node_j: int
    props: ElementProps
    l0: float
    beta0: float


@dataclass(frozen=True)
class SupportSet:
    """Per-node fixities: node id -> (u fixed, w fixed, theta fixed)."""

    constrained: Mapping[int, tuple[bool, bool, bool]]

    def constrained_dofs(self) -> list[int]:
        """Sorted global DOF indices that are fixed to zero."""
        dofs = []
        for node_id in sorted(self.constrained):
            for k, fixed in enumerate(self.constrained[node_id]):
                if fixed:
                    dofs.append(3 * node_id + k)
        return dofs

    def mask(self, n_dof: int) -> np.ndarray:
        """Boolean array of length n_dof, True at constrained DOFs."""
        out = np.zeros(n_dof, dtype=bool)
        for d in self.constrained_dofs():
            out[d] = True
        return out


@dataclass(frozen=True)
class Structure:
    """Immutable meshed structure; safe to share across concurrent solves."""

    nodes: tuple[Node, ...]
    elements: tuple[Element, ...]
    supports: SupportSet
    n_dof: int

    def dof_index(self, node_id: int, component: str) -> int:
        """Global DOF index of (node, component), component in {u, w, theta}."""
        if not 0 <= node_id < len(self.nodes):
            raise UnknownNode(f"node {node_id} not in structure")
        try:
            offset = COMPONENTS.index(component)
        except ValueError:
            raise UnknownNode(f"unknown DOF component {component!r}") from None
        return 3 * node_id + offset

    @cached_property
    def coords(self) -> np.ndarray:
        """(n_nodes, 2) reference coordinates, read-only."""
        arr = np.array([(n.x0, n.y0) for n in self.nodes], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def element_dofs(self) -> np.ndarray:
        """(n_elements, 6) global DOF indices per element, read-only."""
        arr = np.array(
            [[3 * e.node_i, 3 * e.node_i + 1, 3 * e.node_i + 2,
              3 * e.node_j, 3 * e.node_j + 1, 3 * e.node_j + 2]
             for e in self.elements],
            dtype=np.intp).reshape(len(self.elements), 6)
        arr.setflags(write=False)
        return arr

    @cached_property
    def constrained_mask(self) -> np.ndarray:
        arr = self.supports.mask(self.n_dof)
        arr.setflags(write=False)
        return arr


@dataclass(frozen=True)
class LoadCase:
    """Total externally applied global nodal force vector."""

    f_total: np.ndarray


def build_structure(
    nodes: Iterable[Node | tuple],
    element_specs: Iterable[tuple[int, int, ElementProps]],
    supports: SupportSet | Mapping[int, tuple[bool, bool, bool]],
) -> Structure:
    """Validate inputs and assemble an immutable Structure.

    Nodes may be given as Node instances or (id, x, y) tuples; elements as
    (node_i, node_j, props) with reference length and orientation computed
    from the node coordinates. Raises DuplicateNode, DanglingElement,
    Disconnected or UnconstrainedStructure on malformed input.
    """
    node_list = [n if isinstance(n, Node) else Node(*n) for n in nodes]
    seen: set[int] = set()
    for n in node_list:
        if n.id in seen:
            raise DuplicateNode(f"node id {n.id} appears more than once")
        seen.add(n.id)
        if not (math.isfinite(n.x0) and math.isfinite(n.y0)):
            raise ModelError(f"node {n.id} has non-finite coordinates")
    n_nodes = len(node_list)
    if seen != set(range(n_nodes)):
        raise ModelError(
            "node ids must be the contiguous range 0..n-1 so DOF indexing "
            "is a bijection")
    node_list.sort(key=lambda n: n.id)

    elements = []
    for i, j, props in element_specs:
        if i == j:
            raise ModelError(f"element connects node {i} to itself")
        for end in (i, j):
            if not 0 <= end < n_nodes:
                raise DanglingElement(
                    f"element ({i}, {j}) references missing node {end}")
        ni, nj = node_list[i], node_list[j]
        dx = nj.x0 - ni.x0
        dy = nj.y0 - ni.y0
        l0 = math.hypot(dx, dy)
        if l0 <= 0.0:
            raise ModelError(f"element ({i}, {j}) has zero reference length")
        elements.append(Element(i, j, props, l0, math.atan2(dy, dx)))

    if not isinstance(supports, SupportSet):
        supports = SupportSet({k: tuple(bool(b) for b in v)
                               for k, v in supports.items()})
    for node_id in supports.constrained:
        if not 0 <= node_id < n_nodes:
            raise UnknownNode(f"support references missing node {node_id}")
    if not any(fix[0] or fix[1] for fix in supports.constrained.values()):
        raise UnconstrainedStructure(
            "no translational DOF is constrained; structure is a mechanism")

    _check_connected(n_nodes, elements)

    return Structure(tuple(node_list), tuple(elements), supports, 3 * n_nodes)


def _check_connected(n_nodes: int, elements: Sequence[Element]) -> None:
    if n_nodes == 0:
        raise ModelError("structure has no nodes")
    adjacency: list[list[int]] = [[] for _ in range(n_nodes)]
    for e in elements:
        adjacency[e.node_i].append(e.node_j)
        adjacency[e.node_j].append(e.node_i)
    seen = {0}
    stack = [0]
    while stack:
        for nb in adjacency[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != n_nodes:
        missing = sorted(set(range(n_nodes)) - seen)
        raise Disconnected(f"nodes {missing} are not connected to node 0")


def load_case(
    structure: Structure,
    nodal_forces: Mapping[int, Sequence[float]],
) -> LoadCase:
    """Build a LoadCase from {node id: (fx, fy, moment)}.

    Loads on constrained DOFs are rejected rather than silently dropped,
    so modelling mistakes surface early.
    """
    f = np.zeros(structure.n_dof)
    for node_id, comps in nodal_forces.items():
        if not 0 <= node_id < len(structure.nodes):
            raise UnknownNode(f"load references missing node {node_id}")
        comps = tuple(comps)
        if len(comps) != 3:
            raise ModelError(
                f"load at node {node_id} must give (fx, fy, moment)")
        for k, value in enumerate(comps):
            f[3 * node_id + k] += float(value)
    return make_load_case(structure, f)


def make_load_case(structure: Structure, f_total: np.ndarray) -> LoadCase:
    """Wrap a full global force vector as a LoadCase, validating it."""
    f = np.asarray(f_total, dtype=float).copy()
    if f.shape != (structure.n_dof,):
        raise ModelError(
            f"force vector has shape {f.shape}, expected ({structure.n_dof},)")
    if not np.all(np.isfinite(f)):
        raise ModelError("force vector has non-finite entries")
    bad = np.flatnonzero(structure.constrained_mask & (f != 0.0))
    if bad.size:
        raise ModelError(
            f"load applied at constrained DOF(s) {bad.tolist()}; fix the "
            "support or move the load")
    f.setflags(write=False)
    return LoadCase(f)


def structure_to_dict(structure: Structure) -> dict:
    """JSON-ready document: nodes, elements, supports (SI units)."""
    return {
        "nodes": [{"id": n.id, "x": n.x0, "y": n.y0} for n in structure.nodes],
        "elements": [
            {"i": e.node_i, "j": e.node_j, "E": e.props.e_modulus,
             "A": e.props.area, "I": e.props.inertia, "kind": e.props.kind}
            for e in structure.elements
        ],
        "supports": [
            {"node": node_id, "u": fix[0], "w": fix[1], "theta": fix[2]}
            for node_id, fix in sorted(structure.supports.constrained.items())
        ],
    }


def structure_from_dict(data: Mapping) -> Structure:
    """Inverse of structure_to_dict; runs full build validation."""
    try:
        nodes = [Node(int(n["id"]), float(n["x"]), float(n["y"]))
                 for n in data["nodes"]]
        specs = [
            (int(e["i"]), int(e["j"]),
             ElementProps(float(e["E"]), float(e["A"]), float(e["I"]),
                          str(e.get("kind", KIND_BEAM))))
            for e in data["elements"]
        ]
        supports = {
            int(s["node"]): (bool(s["u"]), bool(s["w"]), bool(s["theta"]))
            for s in data["supports"]
        }
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed structure document: {exc}") from exc
    return build_structure(nodes, specs, supports)
