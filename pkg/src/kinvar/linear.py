"""First-order kinetics: rate matrix, matrix-exponential trajectories,
dual experiments, and equilibrium compositions.

The generator ``M`` satisfies ``dC/dt = M C`` with ``M[i, j]`` (i != j) the
total rate constant of the conversion j -> i and columns summing to zero.
Trajectories are evaluated exactly in time as ``exp(M t) c0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MultipleEquilibriaError, NetworkValidationError
from .network import ORDER_FIRST, ReactionNetwork, validate_network
from .trajectory import DualExperiment, Trajectory

# eigendecomposition is rejected in favor of scaling-and-squaring when the
# reconstruction residual exceeds this (relative to ||M||)
_EIG_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class RateMatrix:
    """Generator of a first-order network."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("rate matrix must be square")
        off = m - np.diag(np.diag(m))
        if np.any(off < 0):
            raise ValueError("negative off-diagonal rate")
        colsums = m.sum(axis=0)
        if np.any(np.abs(colsums) > 1e-9 * max(1.0, np.abs(m).max())):
            raise ValueError("columns of a rate matrix must sum to zero")
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def build_rate_matrix(net: ReactionNetwork) -> RateMatrix:
    """Assemble ``M`` from an all-first-order network; parallel edges are summed."""
    kind = net.order_kind or validate_network(net).order_kind
    if kind != ORDER_FIRST:
        raise NetworkValidationError("build_rate_matrix requires an all-first-order network")
    m = np.zeros((net.n, net.n))
    for rxn in net.reactions:
        u = rxn.reactants[0][0]
        v = rxn.products[0][0]
        m[v, u] += rxn.k_forward
        m[u, u] -= rxn.k_forward
        if rxn.reversible:
            m[u, v] += rxn.k_backward
            m[v, v] -= rxn.k_backward
    return RateMatrix(m)


def _propagators(M: RateMatrix, times: np.ndarray, c0: np.ndarray) -> np.ndarray:
    """Rows ``exp(M t) c0`` for each grid time.

    Diagonalization when the spectrum is well conditioned, otherwise
    scaling-and-squaring (`scipy.linalg.expm`) per grid point; the latter also
    covers defective spectra (e.g. equal-rate irreversible chains).
    """
    m = M.entries
    lam, V = np.linalg.eig(m)
    residual = np.linalg.norm(m @ V - V * lam)
    scale = max(1.0, np.linalg.norm(m))
    # a defective spectrum still satisfies the eigen-equation column by
    # column; what breaks is inverting V, so check its conditioning too
    sv = np.linalg.svd(V, compute_uv=False)
    use_eig = residual <= _EIG_RESIDUAL_TOL * scale and sv[-1] > 1e-6 * sv[0]
    if use_eig:
        try:
            w = np.linalg.solve(V, c0.astype(complex))
        except np.linalg.LinAlgError:
            use_eig = False
    if use_eig:
        out = (V @ (np.exp(np.outer(times, lam)) * w).T).T
        return np.ascontiguousarray(out.real)

    from scipy.linalg import expm

    out = np.empty((len(times), M.n))
    for k, t in enumerate(times):
        out[k] = expm(m * t) @ c0
    return out


def simulate_linear(
    M: RateMatrix,
    c0: np.ndarray,
    times: np.ndarray,
    label: str = "",
    network: ReactionNetwork | None = None,
) -> Trajectory:
    """Trajectory ``exp(M t) c0`` on a strictly increasing grid starting at 0."""
    c0 = np.asarray(c0, dtype=float)
    times = np.asarray(times, dtype=float)
    if c0.shape != (M.n,):
        raise ValueError(f"initial state has shape {c0.shape}, expected ({M.n},)")
    if times[0] != 0.0:
        raise ValueError("time grid must start at 0")
    conc = _propagators(M, times, c0)
    conc[0] = c0  # exp(0) = I, exactly
    init = int(np.argmax(c0))
    return Trajectory(times, conc, init, label, network)


def dual_experiment(
    net: ReactionNetwork, a: int, b: int, times: np.ndarray
) -> DualExperiment:
    """Unit-priming runs from species ``a`` and from species ``b`` on one grid."""
    if a == b:
        raise ValueError("dual experiment needs two distinct species")
    M = build_rate_matrix(net)
    names = net.names
    ea = np.zeros(net.n)
    ea[a] = 1.0
    eb = np.zeros(net.n)
    eb[b] = 1.0
    from_a = simulate_linear(M, ea, times, f"from {names[a]}", net)
    from_b = simulate_linear(M, eb, times, f"from {names[b]}", net)
    return DualExperiment(from_a, from_b, a, b, conserved_total=1.0)


def equilibrium_composition(M: RateMatrix) -> np.ndarray:
    """Normalized kernel vector of ``M`` (sums to 1).

    Raises :class:`MultipleEquilibriaError` when the kernel dimension exceeds
    one, which happens exactly for disconnected networks.
    """
    _, s, Vt = np.linalg.svd(M.entries)
    tol = max(1.0, s.max()) * 1e-12
    null_dim = int(np.sum(s <= tol)) + (M.n - len(s))
    if null_dim != 1:
        raise MultipleEquilibriaError(
            f"kernel dimension {null_dim}: network has multiple equilibria"
        )
    v = Vt[-1]
    if v.sum() < 0:
        v = -v
    return v / v.sum()


def default_time_grid(M: RateMatrix, points: int = 400) -> np.ndarray:
    """``{0}`` plus a geometric grid from ``1e-3 tau`` to ``10 tau``.

    ``tau`` is the slowest nonzero relaxation time ``1/|lambda_min|``; the
    span resolves the fast transient and the approach to equilibrium.
    """
    lam = np.linalg.eigvals(M.entries)
    mags = np.abs(lam)
    nonzero = mags[mags > 1e-12 * max(1.0, mags.max())]
    if len(nonzero) == 0:
        raise ValueError("rate matrix has no nonzero eigenvalue")
    tau = 1.0 / nonzero.min()
    return np.concatenate(([0.0], np.geomspace(1e-3 * tau, 10.0 * tau, points)))
