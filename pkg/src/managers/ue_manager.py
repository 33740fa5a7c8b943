"""
UE Manager - Random UE drops and their scattering profiles
"""
from dataclasses import dataclass

import numpy as np

from channel.correlation import ScatteringProfile, path_loss


@dataclass(frozen=True)
class UePlacement:
    """One UE position with the scattering profile it induces"""

    distance: float
    profile: ScatteringProfile

    @property
    def azimuth(self):
        return self.profile.mean_azimuth

    @property
    def elevation(self):
        return self.profile.mean_elevation


def nominal_elevation(distance, bs_height):
    """Elevation seen from a BS mounted bs_height above the UE plane (negative, looking down)"""
    return -float(np.arctan(bs_height / distance))


def drop_ues(k, rng, simulation, bs_height, spread_elevation_deg=None):
    """
    Drop k UEs uniformly in distance and azimuth

    Args:
        k (int): Number of UEs
        rng (numpy.random.Generator): Placement stream
        simulation (SimulationConfig): Distance/azimuth ranges and angular spreads
        bs_height (float): BS height above the UE plane in meters
        spread_elevation_deg (float, optional): Override of the elevation spread

    Returns:
        list: UePlacement per UE
    """
    distances = rng.uniform(simulation.d_min, simulation.d_max, size=k)
    azimuths = np.deg2rad(rng.uniform(simulation.azimuth_min_deg, simulation.azimuth_max_deg, size=k))
    spread_elevation = simulation.spread_elevation_deg if spread_elevation_deg is None else spread_elevation_deg

    placements = []
    for distance, azimuth in zip(distances, azimuths):
        profile = ScatteringProfile(
            mean_azimuth=float(azimuth),
            mean_elevation=nominal_elevation(distance, bs_height),
            spread_azimuth=float(np.deg2rad(simulation.spread_azimuth_deg)),
            spread_elevation=float(np.deg2rad(spread_elevation)),
            gain_beta=path_loss(distance),
        )
        placements.append(UePlacement(float(distance), profile))
    return placements


class UeManager:
    """Draws reproducible UE drops from the scenario's placement law"""

    def __init__(self, simulation, bsHeight, rngManager):
        """
        Initialize the UE manager

        Args:
            simulation (SimulationConfig): Placement law and spreads
            bsHeight (float): BS height above the UE plane in meters
            rngManager (RngManager): Source of the per-drop streams
        """
        self.simulation = simulation
        self.bsHeight = bsHeight
        self.rngManager = rngManager

    def drop(self, dropIndex, k, spreadElevationDeg=None):
        """
        UEs of one drop; the same index always gives the same placements

        Args:
            dropIndex (int): Drop number
            k (int): Number of UEs
            spreadElevationDeg (float, optional): Override of the elevation spread

        Returns:
            list: UePlacement per UE
        """
        rng = self.rngManager.stream("drop", dropIndex)
        return drop_ues(k, rng, self.simulation, self.bsHeight, spreadElevationDeg)

    def position(self, positionIndex, spreadElevationDeg=None):
        """
        One UE position of an NMSE sweep; indices are shared by every array size and estimator

        Args:
            positionIndex (int): Position number
            spreadElevationDeg (float, optional): Override of the elevation spread

        Returns:
            UePlacement: Placement of the single UE
        """
        rng = self.rngManager.stream("positions", positionIndex)
        return drop_ues(1, rng, self.simulation, self.bsHeight, spreadElevationDeg)[0]
