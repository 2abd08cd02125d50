"""Trajectories of dual reactor experiments and their CSV serialization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import ReactionNetwork


@dataclass(frozen=True)
class Trajectory:
    """Concentrations on a time grid for one initial condition.

    ``initial_species`` is the primed substance; ``label`` is a display tag
    such as ``"from A"``.  When the trajectory came from a network simulation,
    ``network`` keeps a reference so downstream reports can resolve species
    names and equilibria.
    """

    times: np.ndarray
    concentrations: np.ndarray
    initial_species: int
    label: str
    network: ReactionNetwork | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        c = np.asarray(self.concentrations, dtype=float)
        if c.shape[0] != t.shape[0]:
            raise ValueError("times and concentration rows disagree")
        if np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "concentrations", c)

    @property
    def n(self) -> int:
        return self.concentrations.shape[1]

    def species(self, index: int) -> np.ndarray:
        """Concentration series of one species."""
        return self.concentrations[:, index]


@dataclass(frozen=True)
class DualExperiment:
    """The paired runs primed with pure ``species_a`` and pure ``species_b``."""

    from_a: Trajectory
    from_b: Trajectory
    species_a: int
    species_b: int
    conserved_total: float | None = None

    def __post_init__(self):
        if not np.array_equal(self.from_a.times, self.from_b.times):
            raise ValueError("dual trajectories must share the time grid")

    @property
    def times(self) -> np.ndarray:
        return self.from_a.times

    @property
    def network(self) -> ReactionNetwork | None:
        return self.from_a.network


def linear_grid(t_max: float, points: int) -> np.ndarray:
    if points < 2 or t_max <= 0:
        raise ValueError("need t_max > 0 and at least 2 points")
    return np.linspace(0.0, t_max, points)


def geometric_grid(t_max: float, points: int, t_min: float | None = None) -> np.ndarray:
    """``{0}`` followed by ``points`` geometrically spaced times up to ``t_max``.

    The default span is ``[t_max/2000, t_max]``, wide enough to show both the
    fast transient and the equilibrium plateau on a log axis.
    """
    if points < 2 or t_max <= 0:
        raise ValueError("need t_max > 0 and at least 2 points")
    if t_min is None:
        t_min = t_max / 2000.0
    if not 0 < t_min < t_max:
        raise ValueError("need 0 < t_min < t_max")
    return np.concatenate(([0.0], np.geomspace(t_min, t_max, points)))


def write_trajectory_csv(path, traj: Trajectory, names=None) -> None:
    """CSV with header ``t,<species names...>`` at full double precision."""
    if names is None:
        names = traj.network.names if traj.network else [f"c{i}" for i in range(traj.n)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t," + ",".join(names) + "\n")
        for t, row in zip(traj.times, traj.concentrations):
            fh.write(f"{t:.17g}," + ",".join(f"{x:.17g}" for x in row) + "\n")
