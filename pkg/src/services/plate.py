import logging
from dataclasses import dataclass

import numpy as np

from exceptions import ParameterError
from schemas import BodyId, SoilParams
from soil import ContactSample, new_grid, step_contact

logger = logging.getLogger(__name__)

GRAVITY = 9.81


@dataclass(frozen=True)
class PlateIndentationResult:
    analytic_sinkage: float
    simulated_sinkage: float
    steps: int

    @property
    def relative_error(self) -> float:
        return abs(self.simulated_sinkage - self.analytic_sinkage) / self.analytic_sinkage


def analytic_plate_sinkage(params: SoilParams, weight: float, side: float) -> float:
    """Equilibrium depth of a square plate: W / A = (k_c / b + k_phi) * y**n with b = 2A/L = side / 2."""
    area = side * side
    width = side / 2.0
    return (weight / (area * (params.k_c / width + params.k_phi))) ** (1.0 / params.n)


def plate_indentation(
        params: SoilParams,
        weight: float,
        side: float,
        spacing: float = 0.01,
        dt: float = 1e-3,
        duration: float = 2.0,
        gravity: float = GRAVITY
) -> PlateIndentationResult:
    """
    Press a rigid square plate of weight ``weight`` into fresh soil and let it settle.

    The plate is one sample per node it covers, starts at rest on the undisturbed surface and
    moves vertically under its weight and the soil reaction, integrated with semi-implicit Euler.

    :param params: Soil parameters.
    :param weight: Plate weight W (N).
    :param side: Plate side length (m); rounded to a whole number of grid cells.
    :param spacing: Grid spacing (m).
    :param dt: Time step (s).
    :param duration: Simulated time (s).
    :param gravity: Gravitational acceleration used to derive the plate mass.
    :return: Analytic and simulated equilibrium sinkage.
    """
    if weight <= 0 or side <= 0:
        raise ParameterError("Plate weight and side must be positive.")
    cells = int(round(side / spacing))
    if cells < 1:
        raise ParameterError(f"Plate side {side} m is smaller than one grid cell.")

    grid = new_grid(side * 2, side * 2, spacing)
    node_xy = np.array([(i * spacing, j * spacing) for i in range(cells) for j in range(cells)])
    mass = weight / gravity
    z, vz = grid.rest_height, 0.0
    steps = int(round(duration / dt))

    for _ in range(steps):
        samples = [
            ContactSample(
                world_pos=np.array([x, y, z]),
                velocity=np.array([0.0, 0.0, vz]),
                owner=BodyId.TORSO,
            )
            for x, y in node_xy
        ]
        forces, grid = step_contact(grid, samples, dt, params)
        vz += dt * (forces[:, 2].sum() - weight) / mass
        z += dt * vz

    analytic = analytic_plate_sinkage(params, weight, cells * spacing)
    simulated = grid.rest_height - z
    logger.info("plate settled at %.6f m (analytic %.6f m)", simulated, analytic)
    return PlateIndentationResult(analytic_sinkage=analytic, simulated_sinkage=simulated, steps=steps)
