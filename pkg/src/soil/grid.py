import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from exceptions import ParameterError

NodeIndex = Tuple[int, int]
GRID_COLUMNS = ["i", "j", "plastic_sinkage", "shear_j"]


@dataclass
class NodeState:
    """Memory of one touched soil node."""

    plastic_sinkage: float = 0.0
    shear_j: float = 0.0
    in_contact: bool = False


@dataclass
class TerrainGrid:
    """
    Sparse height field of soil nodes.

    Only nodes that have been pressed are stored; an absent node has zero plastic sinkage
    and zero shear memory. Node (i, j) sits at ``origin + (i, j) * spacing``.
    """

    spacing: float
    origin: np.ndarray
    rest_height: float
    extent: Tuple[float, float]
    nodes: Dict[NodeIndex, NodeState] = field(default_factory=dict)

    def index_of(self, x: float, y: float) -> NodeIndex:
        """Nearest node; exact ties go to the lower index."""
        return (
            math.ceil((x - self.origin[0]) / self.spacing - 0.5),
            math.ceil((y - self.origin[1]) / self.spacing - 0.5),
        )

    def indices_of(self, xy: np.ndarray) -> np.ndarray:
        """Vectorized ``index_of`` for an (N, 2) array of world points."""
        return np.ceil((xy - self.origin) / self.spacing - 0.5).astype(np.int64)

    def node_position(self, i: int, j: int) -> Tuple[float, float]:
        return (
            float(self.origin[0] + i * self.spacing),
            float(self.origin[1] + j * self.spacing),
        )

    def in_extent(self, i: int, j: int) -> bool:
        x, y = self.node_position(i, j)
        return (
            abs(x - self.origin[0]) <= self.extent[0] / 2
            and abs(y - self.origin[1]) <= self.extent[1] / 2
        )


def new_grid(
        extent_x: float,
        extent_y: float,
        spacing: float,
        rest_height: float = 0.0,
        origin: Tuple[float, float] = (0.0, 0.0)
) -> TerrainGrid:
    """
    Create an untouched terrain.

    :param extent_x: Size of the soil bed along x (m), centred on the origin.
    :param extent_y: Size of the soil bed along y (m), centred on the origin.
    :param spacing: Node spacing h (m).
    :param rest_height: Height of the undisturbed surface (m).
    :param origin: World (x, y) of node (0, 0).
    :return: An empty TerrainGrid.
    """
    for name, value in (("extent_x", extent_x), ("extent_y", extent_y), ("spacing", spacing)):
        if not math.isfinite(value) or value <= 0:
            raise ParameterError(f"{name} must be positive, got {value}.")
    if not math.isfinite(rest_height):
        raise ParameterError("rest_height must be finite.")

    return TerrainGrid(
        spacing=float(spacing),
        origin=np.array(origin, dtype=float),
        rest_height=float(rest_height),
        extent=(float(extent_x), float(extent_y)),
    )


def height_at(grid: TerrainGrid, x: float, y: float) -> float:
    node = grid.nodes.get(grid.index_of(x, y))
    if node is None:
        return grid.rest_height
    return grid.rest_height - node.plastic_sinkage


def dump_grid(grid: TerrainGrid) -> pd.DataFrame:
    """Stored nodes as rows ``i,j,plastic_sinkage,shear_j`` sorted by index."""
    rows = [
        (i, j, node.plastic_sinkage, node.shear_j)
        for (i, j), node in sorted(grid.nodes.items())
    ]
    frame = pd.DataFrame(rows, columns=GRID_COLUMNS)
    return frame.astype({"i": "int64", "j": "int64", "plastic_sinkage": "float64", "shear_j": "float64"})


def write_grid_csv(grid: TerrainGrid, path) -> Path:
    path = Path(path)
    dump_grid(grid).to_csv(path, index=False)
    return path
