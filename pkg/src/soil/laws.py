"""Pointwise soil force laws: Bekker-Wong pressure, Mohr-Coulomb limit, Janosi-Hanamoto shear."""
import math

from exceptions import ParameterError
from schemas import SoilParams
from soil.grid import NodeState


def bekker_pressure(p: SoilParams, b: float, y: float) -> float:
    """Pressure (k_c / b + k_phi) * y**n of a patch of width ``b`` sunk by ``y``."""
    if not b > 0:
        raise ParameterError(f"Patch width must be positive, got {b}.")
    if not y >= 0:
        raise ParameterError(f"Sinkage must be non-negative, got {y}.")
    return (p.k_c / b + p.k_phi) * y ** p.n


def node_pressure(p: SoilParams, node: NodeState, y_total: float, v_n: float, b: float) -> float:
    """
    Nodal normal pressure with plastic memory.

    On the loading curve (``y_total`` at or past the node's plastic sinkage) the Bekker pressure
    applies; below it the soil unloads and reloads along a line of slope ``elastic_k`` that
    meets the loading curve at the plastic sinkage. ``v_n`` is positive in compression and adds
    ``damping_R * v_n``. The result never goes below zero.
    """
    if not y_total >= 0:
        raise ParameterError(f"Penetration must be non-negative, got {y_total}.")

    if y_total >= node.plastic_sinkage:
        sigma = bekker_pressure(p, b, y_total)
    else:
        peak = bekker_pressure(p, b, node.plastic_sinkage)
        sigma = max(0.0, peak - p.elastic_k * (node.plastic_sinkage - y_total))
    return max(0.0, sigma + p.damping_R * v_n)


def shear_limit(sigma_normal: float, p: SoilParams) -> float:
    if not sigma_normal >= 0:
        raise ParameterError(f"Normal stress must be non-negative, got {sigma_normal}.")
    return sigma_normal * math.tan(p.friction_angle) + p.cohesion_c


def janosi_shear(tau_max: float, shear_j: float, K: float) -> float:
    """Mobilized shear tau_max * (1 - exp(-j / K)) after slip ``shear_j``."""
    if not K > 0:
        raise ParameterError(f"Shear modulus K must be positive, got {K}.")
    if not tau_max >= 0:
        raise ParameterError(f"Shear limit must be non-negative, got {tau_max}.")
    if not shear_j >= 0:
        raise ParameterError(f"Shear displacement must be non-negative, got {shear_j}.")
    return tau_max * -math.expm1(-shear_j / K)
