"""Cascades on ordered trees and the social graphs that generate them.

A communication structure is an ordered tree.  Every non-terminal agent,
together with her immediate successors, forms one chatroom: the agent sends
(or withholds) the message there, and the successors react.  A receiver who
is herself non-terminal then faces her own sending decision, gated by the
disapprovals she just witnessed in the chatroom where she received the
message, her own reaction included.  The root's decision is gated by nobody.

Play therefore cascades top-down, and :func:`solve_global` resolves it room
by room: solve the local reaction game, count disapprovals, evaluate each
receiver's sending rule, recurse into the rooms that actually open.  The
result records which agents the message reached, all realized actions, and
equilibrium diagnostics (no equilibrium in some room, or multiple).

Trees may also be derived from an undirected acquaintance graph by choosing
a root and peeling breadth-first layers.  For that to be well defined the
graph must consist of cliques glued at single agents: every circle of
acquaintances is fully introduced (no open circles), and two circles never
share more than one member (no overlapping circles).  :func:`validate_graph`
checks exactly that and reports concrete witnesses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .belief import EPS, EvidenceRelation
from .chatroom import (
    ChatroomEquilibrium,
    ChatroomGame,
    Multiplicity,
    ReceiverSpec,
    TypeSet,
    solve_chatroom,
)
from .errors import InvalidGraph, InvariantViolation, RangeViolation
from .receiver import ReceiverAction, SecondOrderBelief
from .sender import SenderAction, decide_send

Agent = Hashable


def natural_key(agent: Agent) -> tuple[int, int, str]:
    """Sort key putting numeric ids in numeric order, then the rest."""
    s = str(agent)
    if s.isdigit():
        return (0, int(s), "")
    return (1, 0, s)


# ---------------------------------------------------------------------------
# ordered trees and chatroom skeletons


@dataclass(frozen=True)
class OrderedTree:
    """Rooted tree with an explicit order on every child list."""

    root: Agent
    children: Mapping[Agent, tuple[Agent, ...]]
    parent: Mapping[Agent, Agent]
    agents: tuple[Agent, ...]  # breadth-first order

    @classmethod
    def from_edges(cls, root: Agent, edges: Iterable[tuple[Agent, Agent]]) -> "OrderedTree":
        """Build from (parent, child) pairs; child order follows edge order."""
        children: dict[Agent, list[Agent]] = {root: []}
        parent: dict[Agent, Agent] = {}
        for p, c in edges:
            if p == c:
                raise InvalidGraph(f"self-edge at {p!r}")
            if c == root:
                raise InvalidGraph(f"root {root!r} cannot have a parent")
            if c in parent:
                raise InvalidGraph(f"agent {c!r} has two parents: {parent[c]!r} and {p!r}")
            parent[c] = p
            children.setdefault(p, []).append(c)
            children.setdefault(c, [])
        order: list[Agent] = []
        queue: deque[Agent] = deque([root])
        seen = {root}
        while queue:
            node = queue.popleft()
            order.append(node)
            for child in children[node]:
                seen.add(child)
                queue.append(child)
        if len(order) != len(children):
            stranded = sorted((a for a in children if a not in seen), key=natural_key)
            raise InvalidGraph(f"agents not reachable from the root: {stranded!r}")
        return cls(
            root=root,
            children={a: tuple(children[a]) for a in order},
            parent=parent,
            agents=tuple(order),
        )

    def children_of(self, agent: Agent) -> tuple[Agent, ...]:
        return self.children[agent]

    def parent_of(self, agent: Agent) -> Agent | None:
        return self.parent.get(agent)

    def is_terminal(self, agent: Agent) -> bool:
        return not self.children[agent]

    @property
    def non_terminals(self) -> tuple[Agent, ...]:
        return tuple(a for a in self.agents if self.children[a])

    def edges(self) -> tuple[tuple[Agent, Agent], ...]:
        return tuple((a, c) for a in self.agents for c in self.children[a])


@dataclass(frozen=True)
class Chatroom:
    """Skeleton of one room: the sending agent and her audience in order."""

    sender: Agent
    receivers: tuple[Agent, ...]

    @property
    def members(self) -> tuple[Agent, ...]:
        return (self.sender,) + self.receivers


def chatrooms_of(tree: OrderedTree) -> tuple[Chatroom, ...]:
    """One chatroom per non-terminal agent, in breadth-first order."""
    return tuple(
        Chatroom(sender=a, receivers=tree.children_of(a)) for a in tree.non_terminals
    )


# ---------------------------------------------------------------------------
# per-agent data and the global cascade


@dataclass(frozen=True)
class AgentProfile:
    """Everything one agent brings to the cascade.

    ``receiver_belief`` ranges over the agent's peers in her receiving room,
    ordered sender-first then the remaining receivers in room order.
    ``sender_belief`` ranges over her own children in tree order.  Either may
    be omitted when the agent never plays that role.
    """

    type_set: TypeSet
    lam: float
    ell: int = 1
    receiver_belief: SecondOrderBelief | None = None
    sender_belief: SecondOrderBelief | None = None

    def __post_init__(self) -> None:
        if self.lam < 0.0:
            raise RangeViolation(f"sensitivity must be nonnegative, got {self.lam!r}")
        if not isinstance(self.ell, int) or self.ell < 0:
            raise RangeViolation(f"disapproval threshold must be an int >= 0, got {self.ell!r}")


def build_chatroom_game(
    tree: OrderedTree,
    profiles: Mapping[Agent, AgentProfile],
    room: Chatroom,
) -> ChatroomGame:
    """Assemble the local game for one chatroom from agent profiles."""
    specs = []
    for agent in room.receivers:
        prof = profiles[agent]
        if prof.receiver_belief is None:
            raise InvariantViolation(f"agent {agent!r} is a receiver but has no receiver belief")
        specs.append(
            ReceiverSpec(
                agent=agent,
                type_set=prof.type_set,
                lam=prof.lam,
                belief=prof.receiver_belief,
            )
        )
    return ChatroomGame(
        sender=room.sender,
        sender_types=profiles[room.sender].type_set,
        receivers=tuple(specs),
    )


def dirac_truth_profiles(
    tree: OrderedTree,
    attrs: Mapping[Agent, AgentProfile],
) -> dict[Agent, AgentProfile]:
    """Fill in beliefs assuming everyone knows everyone's true type.

    Requires singleton type sets; every belief becomes a point mass on the
    peers' actual credences.  Existing beliefs in ``attrs`` are ignored.
    """
    for agent in tree.agents:
        if agent not in attrs:
            raise InvariantViolation(f"no profile for agent {agent!r}")
        if not attrs[agent].type_set.is_singleton:
            raise InvariantViolation(
                f"agent {agent!r}: known-type beliefs need singleton type sets"
            )
    value = {a: attrs[a].type_set.value for a in tree.agents}
    out: dict[Agent, AgentProfile] = {}
    for agent in tree.agents:
        base = attrs[agent]
        receiver_belief = None
        parent = tree.parent_of(agent)
        if parent is not None:
            peers = [parent] + [s for s in tree.children_of(parent) if s != agent]
            receiver_belief = SecondOrderBelief.dirac([value[p] for p in peers])
        sender_belief = None
        kids = tree.children_of(agent)
        if kids:
            sender_belief = SecondOrderBelief.dirac([value[c] for c in kids])
        out[agent] = AgentProfile(
            type_set=base.type_set,
            lam=base.lam,
            ell=base.ell,
            receiver_belief=receiver_belief,
            sender_belief=sender_belief,
        )
    return out


@dataclass(frozen=True)
class CascadeResult:
    """Realized cascade under the canonical selection rule.

    ``reach`` holds every agent the message arrived at (root included).
    Agents outside ``reach`` have no realized actions and are absent from
    the action maps.  ``exists`` is False when play walked into a room with
    no equilibrium; ``failing_room`` then names its sender.  ``unique`` is
    True when the cascade exists and every solved room was a singleton.
    """

    receiver_actions: Mapping[Agent, ReceiverAction]
    sender_actions: Mapping[Agent, SenderAction]
    reach: frozenset[Agent]
    exists: bool
    unique: bool
    multiple_rooms: tuple[Agent, ...] = ()
    failing_room: Agent | None = None
    room_equilibria: Mapping[Agent, ChatroomEquilibrium] = field(default_factory=dict)

    @property
    def reach_count(self) -> int:
        return len(self.reach)

    def reaction_of(self, agent: Agent) -> ReceiverAction | None:
        return self.receiver_actions.get(agent)

    def send_of(self, agent: Agent) -> SenderAction | None:
        return self.sender_actions.get(agent)


def _check_profiles(tree: OrderedTree, profiles: Mapping[Agent, AgentProfile]) -> None:
    for agent in tree.agents:
        if agent not in profiles:
            raise InvariantViolation(f"no profile for agent {agent!r}")
        prof = profiles[agent]
        kids = tree.children_of(agent)
        if kids:
            if prof.sender_belief is None:
                raise InvariantViolation(f"agent {agent!r} can send but has no sender belief")
            if prof.sender_belief.dim != len(kids):
                raise InvariantViolation(
                    f"agent {agent!r}: sender belief covers {prof.sender_belief.dim} "
                    f"receivers, has {len(kids)} successors"
                )


def solve_global(
    tree: OrderedTree,
    profiles: Mapping[Agent, AgentProfile],
    mu: EvidenceRelation,
    tol: float = EPS,
) -> CascadeResult:
    """Resolve the whole cascade top-down.

    Every receiver chooses an action serving all her types (the canonical
    selection among them when several do), senders apply the gated
    positive-gain rule, and the message spreads until every open room is
    resolved.  Returns diagnostics instead of raising when some reached room
    has no equilibrium.
    """
    _check_profiles(tree, profiles)
    rooms = {room.sender: room for room in chatrooms_of(tree)}

    receiver_actions: dict[Agent, ReceiverAction] = {}
    sender_actions: dict[Agent, SenderAction] = {}
    room_eqs: dict[Agent, ChatroomEquilibrium] = {}
    reach: set[Agent] = {tree.root}
    multiple: list[Agent] = []
    failing: Agent | None = None

    queue: deque[Chatroom] = deque()
    if tree.root in rooms:
        prof = profiles[tree.root]
        # nobody gates the root: threshold 1 against zero disapprovals
        decision = decide_send(prof.type_set, prof.sender_belief, mu, 1, 0, tol)
        sender_actions[tree.root] = decision
        if decision is SenderAction.SEND:
            queue.append(rooms[tree.root])

    while queue and failing is None:
        room = queue.popleft()
        eq = solve_chatroom(build_chatroom_game(tree, profiles, room), tol)
        room_eqs[room.sender] = eq
        if eq.multiplicity is Multiplicity.NONE:
            failing = room.sender
            break
        if eq.multiplicity is Multiplicity.MULTIPLE:
            multiple.append(room.sender)
        assert eq.actions is not None
        for agent in room.receivers:
            receiver_actions[agent] = eq.actions[agent]
            reach.add(agent)
        disapprovals = sum(
            1 for agent in room.receivers
            if eq.actions[agent] is ReceiverAction.DISAPPROVE
        )
        for agent in room.receivers:
            if agent in rooms:
                prof = profiles[agent]
                decision = decide_send(
                    prof.type_set, prof.sender_belief, mu, prof.ell, disapprovals, tol
                )
                sender_actions[agent] = decision
                if decision is SenderAction.SEND:
                    queue.append(rooms[agent])

    exists = failing is None
    return CascadeResult(
        receiver_actions=receiver_actions,
        sender_actions=sender_actions,
        reach=frozenset(reach),
        exists=exists,
        unique=exists and not multiple,
        multiple_rooms=tuple(multiple),
        failing_room=failing,
        room_equilibria=room_eqs,
    )


# ---------------------------------------------------------------------------
# undirected acquaintance graphs


@dataclass(frozen=True)
class SocialGraph:
    """Undirected graph over agents; may be structurally invalid until
    checked by :func:`validate_graph`."""

    nodes: tuple[Agent, ...]
    adjacency: Mapping[Agent, tuple[Agent, ...]]
    loops: tuple[Agent, ...] = ()

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[Agent, Agent]],
        nodes: Sequence[Agent] = (),
    ) -> "SocialGraph":
        order: list[Agent] = []
        seen: set[Agent] = set()

        def note(agent: Agent) -> None:
            if agent not in seen:
                seen.add(agent)
                order.append(agent)

        for agent in nodes:
            note(agent)
        adjacency: dict[Agent, list[Agent]] = {}
        loops: list[Agent] = []
        pairs: set[tuple[Agent, Agent]] = set()
        for a, b in edges:
            note(a)
            note(b)
            if a == b:
                if a not in loops:
                    loops.append(a)
                continue
            key = tuple(sorted((a, b), key=natural_key))
            if key in pairs:
                continue
            pairs.add(key)  # type: ignore[arg-type]
            adjacency.setdefault(a, []).append(b)
            adjacency.setdefault(b, []).append(a)
        return cls(
            nodes=tuple(order),
            adjacency={a: tuple(adjacency.get(a, ())) for a in order},
            loops=tuple(loops),
        )

    def neighbors(self, agent: Agent) -> tuple[Agent, ...]:
        return self.adjacency[agent]

    def adjacent(self, a: Agent, b: Agent) -> bool:
        return b in self.adjacency[a]

    def edges(self) -> tuple[tuple[Agent, Agent], ...]:
        out = set()
        for a in self.nodes:
            for b in self.adjacency[a]:
                out.add(tuple(sorted((a, b), key=natural_key)))
        return tuple(sorted(out, key=lambda e: (natural_key(e[0]), natural_key(e[1]))))


@dataclass(frozen=True)
class GraphViolation:
    """One structural defect with a concrete witness tuple."""

    kind: str  # "self-loop" | "disconnected" | "overlapping-circles" | "open-circle"
    witness: tuple[Agent, ...]


@dataclass(frozen=True)
class GraphReport:
    violations: tuple[GraphViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _connected_avoiding(g: SocialGraph, start: Agent, goal: Agent, banned: Agent) -> bool:
    # path existence in the graph with one agent removed
    if start == banned or goal == banned:
        return False
    queue = deque([start])
    seen = {start, banned}
    while queue:
        node = queue.popleft()
        if node == goal:
            return True
        for nxt in g.adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def validate_graph(g: SocialGraph) -> GraphReport:
    """Structural check for tree-generating acquaintance graphs.

    Valid graphs are connected, loop-free, and consist of cliques overlapping
    in at most one agent.  Violations come with witnesses:

    - ``self-loop``: ``(i,)`` an agent acquainted with herself.
    - ``disconnected``: ``(a, b)`` two agents with no connecting path.
    - ``overlapping-circles``: ``(i, j, j', k)`` where ``i`` and ``k`` are
      strangers sharing the two distinct mutual acquaintances ``j, j'``.
    - ``open-circle``: ``(i, j, j')`` where ``j, j'`` are acquaintances of
      ``i`` who are strangers to each other yet linked by a path that avoids
      ``i`` (so they sit in one circle around ``i`` without being
      introduced).
    """
    violations: list[GraphViolation] = []
    for agent in g.loops:
        violations.append(GraphViolation(kind="self-loop", witness=(agent,)))

    nodes = sorted(g.nodes, key=natural_key)
    if nodes:
        start = nodes[0]
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nxt in g.adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for node in nodes:
            if node not in seen:
                violations.append(GraphViolation(kind="disconnected", witness=(start, node)))
                break

    # strangers with two shared acquaintances
    for idx, i in enumerate(nodes):
        for k in nodes[idx + 1 :]:
            if g.adjacent(i, k):
                continue
            common = sorted(
                (set(g.adjacency[i]) & set(g.adjacency[k])) - {i, k}, key=natural_key
            )
            if len(common) >= 2:
                violations.append(
                    GraphViolation(kind="overlapping-circles", witness=(i, common[0], common[1], k))
                )

    # unintroduced members of one circle
    for i in nodes:
        nbrs = sorted(g.adjacency[i], key=natural_key)
        for x, j in enumerate(nbrs):
            for jp in nbrs[x + 1 :]:
                if g.adjacent(j, jp):
                    continue
                if _connected_avoiding(g, j, jp, i):
                    violations.append(GraphViolation(kind="open-circle", witness=(i, j, jp)))

    return GraphReport(violations=tuple(violations))


def root_tree(g: SocialGraph, root: Agent, validate: bool = True) -> OrderedTree:
    """Orient a valid acquaintance graph away from ``root`` breadth-first.

    Each agent's parent is her unique acquaintance one layer closer to the
    root; children are emitted in natural id order.
    """
    if root not in g.nodes:
        raise InvalidGraph(f"unknown root {root!r}")
    if validate:
        report = validate_graph(g)
        if not report.ok:
            first = report.violations[0]
            raise InvalidGraph(
                f"graph cannot generate a tree: {first.kind} witness {first.witness!r}"
            )
    depth = {root: 0}
    order = deque([root])
    edges: list[tuple[Agent, Agent]] = []
    while order:
        node = order.popleft()
        for nxt in sorted(g.adjacency[node], key=natural_key):
            if nxt not in depth:
                depth[nxt] = depth[node] + 1
                edges.append((node, nxt))
                order.append(nxt)
            elif depth[nxt] == depth[node] - 1 and (nxt, node) not in edges:
                # a second parent candidate would mean overlapping circles
                raise InvalidGraph(f"ambiguous parent for {node!r}")
    return OrderedTree.from_edges(root, edges)


def undirected_closure(tree: OrderedTree) -> SocialGraph:
    """Acquaintance graph generated by the tree's chatrooms: each room
    becomes a clique."""
    edges: list[tuple[Agent, Agent]] = []
    for room in chatrooms_of(tree):
        members = room.members
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                edges.append((members[i], members[j]))
    return SocialGraph.from_edges(edges, nodes=tree.agents)


def reach_by_root(
    graph: SocialGraph,
    attrs: Mapping[Agent, AgentProfile],
    mu: EvidenceRelation,
    tol: float = EPS,
) -> dict[Agent, CascadeResult]:
    """Re-root the graph at every agent and resolve each cascade.

    Beliefs are rebuilt per rooting with :func:`dirac_truth_profiles`, so the
    agents' type sets must be singletons.  Returns results keyed by root in
    natural id order.
    """
    report = validate_graph(graph)
    if not report.ok:
        first = report.violations[0]
        raise InvalidGraph(f"graph cannot generate trees: {first.kind} witness {first.witness!r}")
    out: dict[Agent, CascadeResult] = {}
    for root in sorted(graph.nodes, key=natural_key):
        tree = root_tree(graph, root, validate=False)
        profiles = dirac_truth_profiles(tree, attrs)
        out[root] = solve_global(tree, profiles, mu, tol)
    return out
