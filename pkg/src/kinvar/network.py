"""Reaction networks with mass-action rate laws.

A network is a list of named species plus elementary reactions, each with a
forward and (possibly zero) backward rate constant.  Irreversible reactions
are ordinary reactions with ``k_backward == 0``.  The module also provides
the thermodynamic consistency machinery: cycle (Wegscheider) conditions on
the reversible subgraph, a deterministic rebalancing procedure, and positive
conservation vectors of the stoichiometry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BalanceError, ConfigError, ConservationError, NetworkValidationError

ORDER_FIRST = "all-first-order"
ORDER_GENERAL = "general-mass-action"


@dataclass(frozen=True)
class Species:
    """A chemical species; ``index`` is its position in concentration vectors."""

    index: int
    name: str


@dataclass(frozen=True)
class Reaction:
    """One elementary reaction.

    ``reactants`` and ``products`` are tuples of ``(species_index, coefficient)``
    with integer coefficients >= 1.  ``k_backward == 0`` marks an irreversible
    reaction.
    """

    reactants: tuple[tuple[int, int], ...]
    products: tuple[tuple[int, int], ...]
    k_forward: float
    k_backward: float = 0.0

    @property
    def reversible(self) -> bool:
        return self.k_backward > 0.0

    @property
    def first_order(self) -> bool:
        """Single reactant and single product, both with coefficient 1."""
        return (
            len(self.reactants) == 1
            and len(self.products) == 1
            and self.reactants[0][1] == 1
            and self.products[0][1] == 1
        )


@dataclass(frozen=True)
class ReactionNetwork:
    """Validated, immutable reaction network.

    Build instances through :func:`validate_network` (or the convenience
    constructors below), which sets ``order_kind``.
    """

    species: tuple[Species, ...]
    reactions: tuple[Reaction, ...]
    order_kind: str | None = None

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.species)

    def index_of(self, name: str) -> int:
        for s in self.species:
            if s.name == name:
                return s.index
        raise KeyError(f"unknown species {name!r}")


@dataclass(frozen=True)
class CycleCondition:
    """One basis cycle of the reversible subgraph.

    ``edges`` lists the traversed directed steps ``(u, v)``; ``forward_product``
    multiplies the rate constants along the traversal, ``backward_product``
    against it.
    """

    edges: tuple[tuple[int, int], ...]
    forward_product: float
    backward_product: float

    @property
    def mismatch(self) -> float:
        hi = max(self.forward_product, self.backward_product)
        if hi == 0.0:
            return 0.0
        return abs(self.forward_product - self.backward_product) / hi


@dataclass(frozen=True)
class CycleConditionReport:
    cycles: tuple[CycleCondition, ...]
    tol: float

    @property
    def max_mismatch(self) -> float:
        return max((c.mismatch for c in self.cycles), default=0.0)

    @property
    def satisfied(self) -> bool:
        return self.max_mismatch <= self.tol


def validate_network(net: ReactionNetwork) -> ReactionNetwork:
    """Check structural invariants and return the network with ``order_kind`` set.

    Raises :class:`NetworkValidationError` on duplicate species names, invalid
    indices, nonpositive forward rates, empty reactant/product lists, or a
    species appearing on both sides of one reaction.
    """
    names = [s.name for s in net.species]
    for i, s in enumerate(net.species):
        if s.index != i:
            raise NetworkValidationError(f"species index {s.index} at position {i}")
        if not s.name:
            raise NetworkValidationError("empty species name")
    if len(set(names)) != len(names):
        raise NetworkValidationError("duplicate species name")

    n = len(net.species)
    for r, rxn in enumerate(net.reactions):
        if not rxn.reactants or not rxn.products:
            raise NetworkValidationError(f"reaction {r}: empty reactant or product list")
        for idx, coeff in rxn.reactants + rxn.products:
            if not 0 <= idx < n:
                raise NetworkValidationError(f"reaction {r}: invalid species index {idx}")
            if coeff < 1:
                raise NetworkValidationError(f"reaction {r}: coefficient {coeff} < 1")
        reac_set = {i for i, _ in rxn.reactants}
        prod_set = {i for i, _ in rxn.products}
        if reac_set & prod_set:
            raise NetworkValidationError(f"reaction {r}: species on both sides")
        if len(reac_set) != len(rxn.reactants) or len(prod_set) != len(rxn.products):
            raise NetworkValidationError(f"reaction {r}: repeated species in one side")
        if not rxn.k_forward > 0.0:
            raise NetworkValidationError(f"reaction {r}: nonpositive forward rate")
        if rxn.k_backward < 0.0:
            raise NetworkValidationError(f"reaction {r}: negative backward rate")

    kind = ORDER_FIRST if all(rxn.first_order for rxn in net.reactions) else ORDER_GENERAL
    return replace(net, order_kind=kind)


def make_network(names: list[str], reactions: list[Reaction]) -> ReactionNetwork:
    """Build and validate a network from species names and reactions."""
    species = tuple(Species(i, nm) for i, nm in enumerate(names))
    return validate_network(ReactionNetwork(species, tuple(reactions)))


def first_order_network(
    names: list[str], edges: list[tuple[str, str, float, float]]
) -> ReactionNetwork:
    """Build a network of unimolecular conversions.

    ``edges`` holds ``(reactant_name, product_name, k_forward, k_backward)``
    entries; ``k_backward = 0`` makes the step irreversible.
    """
    index = {nm: i for i, nm in enumerate(names)}
    rxns = [
        Reaction(((index[u], 1),), ((index[v], 1),), kf, kb) for u, v, kf, kb in edges
    ]
    return make_network(names, rxns)


def butene_cycle() -> ReactionNetwork:
    """Butene isomerization cycle (classic literature rate constants).

    cis-2-butene = 1-butene = trans-2-butene = cis-2-butene.  The literature
    constants satisfy the cycle condition only to about 1e-3; see
    :func:`balance_network`.
    """
    return first_order_network(
        ["cis-2-butene", "1-butene", "trans-2-butene"],
        [
            ("cis-2-butene", "1-butene", 4.623, 10.344),
            ("1-butene", "trans-2-butene", 3.724, 1.000),
            ("trans-2-butene", "cis-2-butene", 3.371, 5.616),
        ],
    )


def mass_action_rhs(net: ReactionNetwork, c: np.ndarray) -> np.ndarray:
    """Time derivative of concentrations under the mass-action law.

    Each reaction contributes ``rate = kf * prod(c_i^nu_i) - kb * prod(c_j^nu_j)``,
    removed from reactants and added to products with stoichiometric multiplicity.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (net.n,):
        raise ValueError(f"concentration vector has shape {c.shape}, expected ({net.n},)")
    out = np.zeros(net.n)
    for rxn in net.reactions:
        fwd = rxn.k_forward
        for i, nu in rxn.reactants:
            fwd *= c[i] ** nu
        bwd = rxn.k_backward
        for j, nu in rxn.products:
            bwd *= c[j] ** nu
        rate = fwd - bwd
        for i, nu in rxn.reactants:
            out[i] -= nu * rate
        for j, nu in rxn.products:
            out[j] += nu * rate
    return out


# ---------------------------------------------------------------------------
# cycle conditions


def _require_first_order(net: ReactionNetwork, what: str) -> None:
    kind = net.order_kind or validate_network(net).order_kind
    if kind != ORDER_FIRST:
        raise NetworkValidationError(f"{what} requires an all-first-order network")


def _edge_endpoints(rxn: Reaction) -> tuple[int, int]:
    return rxn.reactants[0][0], rxn.products[0][0]


def _cycle_basis(
    net: ReactionNetwork, reaction_ids: list[int]
) -> list[list[tuple[int, int, int, bool]]]:
    """Cycle basis of the undirected multigraph formed by ``reaction_ids``.

    A depth-first spanning forest is grown over sorted adjacency; every
    non-tree edge closes one basis cycle.  Each cycle is a traversal
    ``(u, v, reaction_id, along_forward)`` where ``along_forward`` is True when
    the step follows the reaction's reactant-to-product direction.
    """
    adj: dict[int, list[tuple[int, int, bool]]] = {}
    for rid in reaction_ids:
        u, v = _edge_endpoints(net.reactions[rid])
        adj.setdefault(u, []).append((v, rid, True))
        adj.setdefault(v, []).append((u, rid, False))
    for lst in adj.values():
        lst.sort()

    parent: dict[int, tuple[int, int, bool]] = {}  # child -> (parent, rid, along_forward)
    depth: dict[int, int] = {}
    visited: set[int] = set()
    tree_edges: set[int] = set()
    cycles: list[list[tuple[int, int, int, bool]]] = []

    for root in sorted(adj):
        if root in visited:
            continue
        visited.add(root)
        depth[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, rid, fwd in adj.get(u, ()):
                if rid in tree_edges:
                    continue
                if v not in visited:
                    visited.add(v)
                    parent[v] = (u, rid, fwd)
                    depth[v] = depth[u] + 1
                    tree_edges.add(rid)
                    stack.append(v)

    for rid in reaction_ids:
        if rid in tree_edges:
            continue
        u, v = _edge_endpoints(net.reactions[rid])
        # close the cycle: u -> v over this edge, then v back to u along the tree
        steps = [(u, v, rid, True)]
        path_u, path_v = [], []
        a, b = u, v
        while depth[a] > depth[b]:
            p, prid, pfwd = parent[a]
            path_u.append((p, a, prid, pfwd))  # will be reversed below
            a = p
        while depth[b] > depth[a]:
            p, prid, pfwd = parent[b]
            path_v.append((b, p, prid, not pfwd))
            b = p
        while a != b:
            p, prid, pfwd = parent[a]
            path_u.append((p, a, prid, pfwd))
            a = p
            p, prid, pfwd = parent[b]
            path_v.append((b, p, prid, not pfwd))
            b = p
        steps.extend(path_v)
        steps.extend(reversed(path_u))
        cycles.append(steps)
    return cycles


def _cycle_products(net: ReactionNetwork, steps) -> tuple[float, float]:
    fwd = bwd = 1.0
    for _, _, rid, along in steps:
        rxn = net.reactions[rid]
        if along:
            fwd *= rxn.k_forward
            bwd *= rxn.k_backward
        else:
            fwd *= rxn.k_backward
            bwd *= rxn.k_forward
    return fwd, bwd


def check_cycle_conditions(net: ReactionNetwork, tol: float = 1e-9) -> CycleConditionReport:
    """Wegscheider cycle conditions on the reversible subgraph.

    For every basis cycle the product of forward rate constants is compared
    with the product of backward ones; ``satisfied`` holds when the largest
    relative mismatch is within ``tol``.
    """
    _require_first_order(net, "check_cycle_conditions")
    rev_ids = [r for r, rxn in enumerate(net.reactions) if rxn.reversible]
    cycles = []
    for steps in _cycle_basis(net, rev_ids):
        fwd, bwd = _cycle_products(net, steps)
        cycles.append(CycleCondition(tuple((u, v) for u, v, _, _ in steps), fwd, bwd))
    return CycleConditionReport(tuple(cycles), tol)


def balance_network(net: ReactionNetwork, max_sweeps: int = 10_000) -> ReactionNetwork:
    """Minimally rescale backward rate constants so every cycle condition holds.

    Per basis cycle, every backward constant in the cycle is multiplied by
    ``(prod k_fwd / prod k_bwd) ** (1/len)``, which balances that cycle exactly.
    "Backward" is relative to the cycle traversal: ``k_backward`` for steps
    taken along the reaction direction, ``k_forward`` for steps against it.
    Cycles sharing edges perturb each other, so the rule is swept cyclically
    until the worst mismatch stops improving (a projection iteration with
    geometric convergence).  Deterministic.

    Raises :class:`BalanceError` when some cycle of the full reaction graph
    contains an irreversible step (its backward product is pinned at zero).
    """
    _require_first_order(net, "balance_network")
    for steps in _cycle_basis(net, list(range(len(net.reactions)))):
        if any(not net.reactions[rid].reversible for _, _, rid, _ in steps):
            raise BalanceError("cycle contains an irreversible step; cannot balance")

    rev_ids = [r for r, rxn in enumerate(net.reactions) if rxn.reversible]
    cycles = _cycle_basis(net, rev_ids)
    if not cycles:
        return net

    kf = [rxn.k_forward for rxn in net.reactions]
    kb = [rxn.k_backward for rxn in net.reactions]
    prev_worst = math.inf
    for _ in range(max_sweeps):
        worst = 0.0
        for steps in cycles:
            fwd = bwd = 1.0
            for _, _, rid, along in steps:
                fwd *= kf[rid] if along else kb[rid]
                bwd *= kb[rid] if along else kf[rid]
            ratio = fwd / bwd
            worst = max(worst, abs(ratio - 1.0))
            factor = ratio ** (1.0 / len(steps))
            for _, _, rid, along in steps:
                if along:
                    kb[rid] *= factor
                else:
                    kf[rid] *= factor
        if worst < 1e-15 or (worst < 1e-12 and worst >= 0.9 * prev_worst):
            break  # converged, or stalled at the roundoff floor
        prev_worst = worst

    rxns = [
        replace(rxn, k_forward=kf[r], k_backward=kb[r]) if rxn.reversible else rxn
        for r, rxn in enumerate(net.reactions)
    ]
    return validate_network(replace(net, reactions=tuple(rxns)))


# ---------------------------------------------------------------------------
# stoichiometry


def stoichiometric_matrix(net: ReactionNetwork) -> np.ndarray:
    """Net stoichiometric matrix, species x reactions."""
    N = np.zeros((net.n, len(net.reactions)))
    for r, rxn in enumerate(net.reactions):
        for i, nu in rxn.reactants:
            N[i, r] -= nu
        for j, nu in rxn.products:
            N[j, r] += nu
    return N


def conservation_vector(net: ReactionNetwork) -> np.ndarray:
    """Strictly positive weights ``w`` with ``w . C(t)`` constant on trajectories.

    Solves a small linear program for a positive left null vector of the
    stoichiometric matrix, normalized so the smallest weight is 1.  Raises
    :class:`ConservationError` when none exists.
    """
    from scipy.optimize import linprog

    N = stoichiometric_matrix(net)
    res = linprog(
        c=np.ones(net.n),
        A_eq=N.T,
        b_eq=np.zeros(N.shape[1]),
        bounds=[(1.0, None)] * net.n,
        method="highs",
    )
    if not res.success:
        raise ConservationError("no positive conservation vector found")
    w = np.asarray(res.x, dtype=float)
    return w / w.min()


# ---------------------------------------------------------------------------
# JSON network files

_NETWORK_KEYS = {"species", "reactions"}
_REACTION_KEYS = {"reactants", "products", "k_forward", "k_backward"}


def network_from_dict(data: dict) -> ReactionNetwork:
    """Parse the documented network schema; unknown fields are rejected."""
    if not isinstance(data, dict):
        raise ConfigError("network definition must be a JSON object")
    unknown = set(data) - _NETWORK_KEYS
    if unknown:
        raise ConfigError(f"unknown network fields: {sorted(unknown)}")
    try:
        names = list(data["species"])
        raw_rxns = data["reactions"]
    except KeyError as exc:
        raise ConfigError(f"network definition missing field {exc}") from None
    if not all(isinstance(nm, str) for nm in names):
        raise ConfigError("species must be a list of names")
    index = {nm: i for i, nm in enumerate(names)}

    def side(entries, what: str) -> tuple[tuple[int, int], ...]:
        out = []
        for e in entries:
            if not (isinstance(e, (list, tuple)) and len(e) == 2):
                raise ConfigError(f"{what} entries must be [name, coefficient] pairs")
            nm, coeff = e
            if nm not in index:
                raise ConfigError(f"unknown species {nm!r} in {what}")
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise ConfigError(f"coefficient for {nm!r} must be an integer")
            out.append((index[nm], coeff))
        return tuple(out)

    rxns = []
    for k, raw in enumerate(raw_rxns):
        if not isinstance(raw, dict):
            raise ConfigError(f"reaction {k} must be an object")
        unknown = set(raw) - _REACTION_KEYS
        if unknown:
            raise ConfigError(f"reaction {k}: unknown fields {sorted(unknown)}")
        try:
            rxns.append(
                Reaction(
                    reactants=side(raw["reactants"], "reactants"),
                    products=side(raw["products"], "products"),
                    k_forward=float(raw["k_forward"]),
                    k_backward=float(raw.get("k_backward", 0.0)),
                )
            )
        except KeyError as exc:
            raise ConfigError(f"reaction {k} missing field {exc}") from None
    try:
        return make_network(names, rxns)
    except NetworkValidationError as exc:
        raise ConfigError(str(exc)) from exc


def network_to_dict(net: ReactionNetwork) -> dict:
    names = net.names
    return {
        "species": list(names),
        "reactions": [
            {
                "reactants": [[names[i], nu] for i, nu in rxn.reactants],
                "products": [[names[j], nu] for j, nu in rxn.products],
                "k_forward": rxn.k_forward,
                "k_backward": rxn.k_backward,
            }
            for rxn in net.reactions
        ],
    }


def load_network(path) -> ReactionNetwork:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return network_from_dict(data)


def save_network(net: ReactionNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(network_to_dict(net), fh, indent=2, sort_keys=True)
        fh.write("\n")
