from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List

from soil.grid import NodeIndex, TerrainGrid

NEIGHBOUR_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class ContactPatch:
    """A 4-connected group of penetrating nodes and its Bekker width estimate b = 2A/L."""

    node_indices: FrozenSet[NodeIndex]
    area_A: float
    perimeter_L: float
    width_b: float


def _component(start: NodeIndex, unvisited: set) -> List[NodeIndex]:
    component = [start]
    queue = deque([start])
    unvisited.discard(start)
    while queue:
        i, j = queue.popleft()
        for di, dj in NEIGHBOUR_OFFSETS:
            neighbour = (i + di, j + dj)
            if neighbour in unvisited:
                unvisited.discard(neighbour)
                component.append(neighbour)
                queue.append(neighbour)
    return component


def detect_patches(grid: TerrainGrid, contact_nodes: Iterable[NodeIndex]) -> List[ContactPatch]:
    """
    Split contact nodes into 4-connected patches.

    Each node owns an h x h cell; the patch area counts h**2 per node and the perimeter counts
    every cell edge not shared with another contact node. Patches come out ordered by their
    smallest node index.
    """
    members = set(contact_nodes)
    unvisited = set(members)
    h = grid.spacing
    patches = []

    for start in sorted(members):
        if start not in unvisited:
            continue
        component = _component(start, unvisited)
        exposed = sum(
            1
            for i, j in component
            for di, dj in NEIGHBOUR_OFFSETS
            if (i + di, j + dj) not in members
        )
        area = len(component) * h * h
        perimeter = exposed * h
        patches.append(ContactPatch(
            node_indices=frozenset(component),
            area_A=area,
            perimeter_L=perimeter,
            width_b=2.0 * area / perimeter,
        ))

    return patches
