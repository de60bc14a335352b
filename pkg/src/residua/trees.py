"""Rooted coset trees for chains, and both directions of the correspondence.

A chain whose materialized stages carry transversals induces a rooted tree:
the level-k vertices inside one block are the coherent tuples of cosets of
the first k stages, encoded as mixed-radix digit strings over the stage
transversals (digit i picks the coset representative at stage i).  Parent
maps drop the last digit.  Group elements act by left translation, computed
by re-extracting digits; stabilizers of a root-to-leaf thread recover a
chain, conjugate to the original when the thread is not the identity one.

Limit levels are never enumerated: a truncation materializes finitely many
levels of one block, hanging off the identity thread at the block's base.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

from .chains import ChainSchema, finite_chain
from .groups import Element, Group, GroupError, random_words
from .ordinal import OMEGA, Ordinal, format_ordinal

__all__ = [
    "TreeError",
    "NonMaterializableError",
    "AlphaTreeSchema",
    "TreeTruncation",
    "TreeAutomorphism",
    "SimplicityReport",
    "coset_tree",
    "truncate",
    "restriction_map",
    "act",
    "verify_simple",
    "stabilizer_chain",
    "emit",
    "parse_truncation",
]

MATERIALIZATION_CAP = 200_000


class TreeError(GroupError):
    """Invalid tree construction or usage."""


class NonMaterializableError(TreeError):
    """A requested level cannot be materialized (no certified finite fibre)."""


@dataclass(frozen=True)
class AlphaTreeSchema:
    """Lazily defined coset tree of a chain: depth, fibre bound, and rules.

    A vertex at stage w*b + n is a coherent tuple of cosets of the first n
    stages of block b, encoded as digits into the stage transversals; the
    edge rule drops the last digit.
    """

    chain: ChainSchema

    @property
    def depth(self) -> Ordinal:
        return self.chain.length

    @property
    def kappa(self):
        return self.chain.kappa

    @property
    def root(self) -> tuple:
        return ()

    def vertex_rule(self, i) -> tuple[int, ...]:
        """Digit space of the level-i vertices: the fibre size at each stage."""
        from .chains import _split_stage_ordinal

        if isinstance(i, int):
            b, n = 0, i
        else:
            b, n = _split_stage_ordinal(i)
        sizes = []
        for k in range(1, n + 1):
            stage = self.chain.stage_at(b, k)
            idx = stage.index_in_parent
            if idx is None or not idx.is_finite:
                raise NonMaterializableError(
                    f"stage {format_ordinal(OMEGA * b + k)} has no certified finite fibre"
                )
            sizes.append(idx.value)
        return tuple(sizes)

    def edge_rule(self, digits: tuple[int, ...]) -> tuple[int, ...]:
        """Parent of a digit-encoded vertex."""
        if not digits:
            raise TreeError("the root has no parent")
        return digits[:-1]


@dataclass(frozen=True)
class TreeTruncation:
    """Explicit levels 0..d of one block's subtree.

    ``levels[k]`` is (size, parents) with parents[i] the index of vertex i's
    parent one level up; vertices are mixed-radix digit strings, siblings
    consecutive.  ``transversals`` and ``chain`` power the group action and
    are absent on truncations parsed back from JSON.
    """

    block: int
    levels: tuple[tuple[int, tuple[int, ...]], ...]
    fibres: tuple[int, ...]
    provenance: str
    chain: Optional[ChainSchema] = None
    transversals: Optional[tuple[tuple[Element, ...], ...]] = None

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def size(self, level: int) -> int:
        return self.levels[level][0]

    def parent(self, level: int, idx: int) -> int:
        return self.levels[level][1][idx]

    def base_ordinal(self) -> Ordinal:
        return OMEGA * self.block

    def digits(self, level: int, idx: int) -> tuple[int, ...]:
        out = []
        for k in range(level, 0, -1):
            out.append(idx % self.fibres[k - 1])
            idx //= self.fibres[k - 1]
        return tuple(reversed(out))

    def index_of_digits(self, digits: tuple[int, ...]) -> int:
        idx = 0
        for k, d in enumerate(digits):
            idx = idx * self.fibres[k] + d
        return idx

    def representative(self, level: int, idx: int) -> Element:
        """A group element whose coset thread is this vertex."""
        if self.transversals is None or self.chain is None:
            raise TreeError("truncation has no chain backing")
        e = self.chain.group.identity()
        for k, d in enumerate(self.digits(level, idx)):
            e = e * self.transversals[k][d]
        return e

    def digits_of_element(self, e: Element, depth: Optional[int] = None) -> tuple[int, ...]:
        """Digit string of the coset thread of a group element."""
        if self.transversals is None or self.chain is None:
            raise TreeError("truncation has no chain backing")
        depth = self.depth if depth is None else depth
        digits = []
        residue = e
        for k in range(1, depth + 1):
            stage = self.chain.stage_at(self.block, k)
            for d, rep in enumerate(self.transversals[k - 1]):
                shifted = rep.inverse() * residue
                if stage.contains(shifted):
                    digits.append(d)
                    residue = shifted
                    break
            else:
                raise TreeError(
                    f"transversal at level {k} does not cover the element"
                )
        return tuple(digits)

    def thread_of(self, e: Element) -> tuple[int, ...]:
        """Vertex indices of the element's coset thread, root to deepest."""
        digits = self.digits_of_element(e)
        return tuple(
            self.index_of_digits(digits[:k]) for k in range(self.depth + 1)
        )


@dataclass(frozen=True)
class TreeAutomorphism:
    """Per-level bijection tables commuting with the parent maps."""

    tables: tuple[tuple[int, ...], ...]

    def apply(self, level: int, idx: int) -> int:
        return self.tables[level][idx]

    def compose(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        return TreeAutomorphism(
            tuple(
                tuple(mine[theirs[i]] for i in range(len(mine)))
                for mine, theirs in zip(self.tables, other.tables)
            )
        )

    def is_identity(self) -> bool:
        return all(t == tuple(range(len(t))) for t in self.tables)


def coset_tree(chain: ChainSchema) -> AlphaTreeSchema:
    """The rooted tree whose level-j vertices are coherent coset tuples."""
    return AlphaTreeSchema(chain=chain)


def truncate(tree: AlphaTreeSchema, d: int, block: int = 0) -> TreeTruncation:
    """Materialize the first d finite steps of one block.

    Levels are vertices below the identity thread's vertex at the block's
    base; each step needs a certified finite index with a transversal,
    otherwise the level is not materializable.
    """
    chain = tree.chain
    if d < 0:
        raise TreeError("negative depth")
    if block < 0 or block > chain.num_blocks:
        raise NonMaterializableError(f"block {block} outside the chain")
    if block == chain.num_blocks and d > len(chain.tail):
        raise NonMaterializableError(
            f"{d} levels requested but the final segment has {len(chain.tail)} steps"
        )
    fibres = []
    transversals = []
    total = 1
    for k in range(1, d + 1):
        stage = chain.stage_at(block, k)
        idx = stage.index_in_parent
        if idx is None or not idx.is_finite or stage.transversal is None:
            raise NonMaterializableError(
                f"stage {format_ordinal(OMEGA * block + k)} has no certified finite fibre"
            )
        if not chain.kappa.admits(idx.value):
            raise TreeError(
                f"fibre {idx.value} at level {k} is not below kappa {chain.kappa}"
            )
        fibres.append(idx.value)
        transversals.append(stage.transversal)
        total *= idx.value
        if total > MATERIALIZATION_CAP:
            raise NonMaterializableError("materialization exceeds the vertex cap")
    levels = [(1, ())]
    size = 1
    for k in range(1, d + 1):
        parents = tuple(i // fibres[k - 1] for i in range(size * fibres[k - 1]))
        size *= fibres[k - 1]
        levels.append((size, parents))
    provenance = f"coset_tree({chain.name or chain.group.tag}; block={block})"
    return TreeTruncation(
        block=block,
        levels=tuple(levels),
        fibres=tuple(fibres),
        provenance=provenance,
        chain=chain,
        transversals=tuple(transversals),
    )


def _local_level(tr: TreeTruncation, i) -> int:
    """Translate an ordinal (or int offset) into a materialized local level."""
    if isinstance(i, int):
        local = i
    else:
        base = tr.base_ordinal()
        if i < base:
            raise TreeError(f"level {format_ordinal(i)} below this truncation's base")
        rest = None
        for exp, coeff in i.terms:
            if exp.is_zero:
                rest = coeff
        offset = 0 if rest is None else rest
        blocks = 0
        for exp, coeff in i.terms:
            if exp == Ordinal.from_int(1):
                blocks = coeff
        if blocks != tr.block:
            raise TreeError(f"level {format_ordinal(i)} is not in block {tr.block}")
        local = offset
    if not 0 <= local <= tr.depth:
        raise TreeError(f"level {local} not materialized (depth {tr.depth})")
    return local


def restriction_map(tr: TreeTruncation, i, j) -> Callable[[int], int]:
    """The map from level-j vertices down to level-i vertices (i <= j)."""
    li, lj = _local_level(tr, i), _local_level(tr, j)
    if li > lj:
        raise TreeError("restriction maps go from deeper levels to shallower ones")
    divisor = 1
    for k in range(li, lj):
        divisor *= tr.fibres[k]
    return lambda idx: idx // divisor


def act(g: Element, tr: TreeTruncation) -> TreeAutomorphism:
    """Left translation of a group element on the materialized levels."""
    if tr.chain is None:
        raise TreeError("truncation has no chain backing")
    if g.group.tag != tr.chain.group.tag:
        raise TreeError(
            f"element of {g.group.tag} cannot act on a tree over {tr.chain.group.tag}"
        )
    if tr.block > 0 and not tr.chain.stage_at(tr.block, 0).contains(g):
        raise TreeError("element does not stabilize this block's base vertex")
    tables = [(0,)]
    for level in range(1, tr.depth + 1):
        table = []
        for idx in range(tr.size(level)):
            moved = g * tr.representative(level, idx)
            table.append(tr.index_of_digits(tr.digits_of_element(moved, level)))
        tables.append(tuple(table))
    auto = TreeAutomorphism(tables=tuple(tables))
    for level in range(1, tr.depth + 1):
        for idx in range(tr.size(level)):
            assert tr.parent(level, auto.apply(level, idx)) == auto.apply(
                level - 1, tr.parent(level, idx)
            ), "automorphism does not commute with the parent maps"
    return auto


@dataclass(frozen=True)
class SimplicityReport:
    """Outcome of the fixed-point-freeness check on the deepest level.

    Exhaustive mode (finite chains, fully materialized) yields a verdict;
    probe mode only ever reports evidence: the level at which each probe
    moved the identity thread, violations, or unresolved probes.
    """

    mode: str  # "exhaustive" | "probe"
    verdict: str  # "simple" | "violation" | "no-violation-found"
    violations: tuple[dict, ...] = ()
    moved: tuple[dict, ...] = ()
    unresolved: tuple[str, ...] = ()

    def to_jsonable(self) -> dict:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "violations": list(self.violations),
            "moved": list(self.moved),
            "unresolved": list(self.unresolved),
        }


def _probe_id(e: Element) -> str:
    return json.dumps(e.to_jsonable(), sort_keys=True, separators=(",", ":"))


def verify_simple(chain: ChainSchema, tr: Optional[TreeTruncation] = None,
                  probes: int = 32, seed: int = 0, budget: int = 12) -> SimplicityReport:
    """Check that nontrivial elements move every deepest-level vertex.

    For finite chains over finite groups this is exhaustive over all elements
    and all deepest vertices, and the verdict is definitive: fixed-point
    freeness there holds exactly when the chain terminates at the trivial
    subgroup.  Otherwise each probe is walked down the stages (``budget``
    steps per block) until a stage excludes it, i.e. until it moves the
    identity thread's vertex at that level; probes the budget cannot settle
    stay unresolved and no simplicity verdict is issued.
    """
    group = chain.group
    exhaustive = (
        chain.num_blocks == 0
        and group.order is not None
        and tr is not None
        and tr.depth == len(chain.tail)
    )
    if exhaustive:
        violations = []
        deepest = tr.depth
        for e in group.elements():
            if e.is_identity():
                continue
            auto = act(e, tr)
            for idx in range(tr.size(deepest)):
                if auto.apply(deepest, idx) == idx:
                    violations.append(
                        {
                            "element": _probe_id(e),
                            "level": deepest,
                            "vertex": idx,
                        }
                    )
        return SimplicityReport(
            mode="exhaustive",
            verdict="simple" if not violations else "violation",
            violations=tuple(violations),
        )

    probe_elements = random_words(group, probes, seed)
    moved = []
    unresolved = []
    violations = []
    q, r = chain.num_blocks, len(chain.tail)
    for p in probe_elements:
        found = None
        for b in range(q + 1):
            steps = budget if b < q else r
            for n in range(steps + 1):
                if not chain.stage_at(b, n).contains(p):
                    found = OMEGA * b + n
                    break
            if found is not None:
                break
        if found is None:
            # the probe survives every checked stage; at the final stage this
            # witnesses a fixed deepest vertex on the identity thread
            final = chain.stage_at(q, r)
            if final.contains(p):
                violations.append(
                    {
                        "element": _probe_id(p),
                        "level": format_ordinal(chain.length),
                        "vertex": "identity thread",
                    }
                )
            else:
                unresolved.append(_probe_id(p))
        else:
            moved.append(
                {"probe": _probe_id(p), "moved_at_level": format_ordinal(found)}
            )
    moved.sort(key=lambda m: (m["probe"], m["moved_at_level"]))
    return SimplicityReport(
        mode="probe",
        verdict="violation" if violations else "no-violation-found",
        violations=tuple(violations),
        moved=tuple(moved),
        unresolved=tuple(sorted(unresolved)),
    )


def stabilizer_chain(tr: TreeTruncation, thread: tuple[int, ...]) -> ChainSchema:
    """Recover the chain of vertex stabilizers along a root-to-deepest thread.

    The acting group must be finite; each stage is computed exhaustively.
    The identity thread returns the original stages; any other thread gives
    the conjugate chain by the deepest representative.
    """
    if tr.chain is None:
        raise TreeError("truncation has no chain backing")
    group = tr.chain.group
    if group.order is None:
        raise TreeError("stabilizer chains need a finite acting group")
    if len(thread) != tr.depth + 1 or thread[0] != 0:
        raise TreeError("thread must run from the root to the deepest level")
    for k in range(1, len(thread)):
        if tr.parent(k, thread[k]) != thread[k - 1]:
            raise TreeError("incoherent thread: parent links broken")
    stages = []
    for k in range(1, tr.depth + 1):
        rep = tr.representative(k, thread[k])
        rep_inv = rep.inverse()
        stage = tr.chain.stage_at(tr.block, k)
        members = {
            e.value
            for e in group.elements()
            if stage.contains(rep_inv * e * rep)
        }
        stages.append(members)
    return finite_chain(
        group,
        stages,
        kappa=tr.chain.kappa,
        name=f"stabilizers along {list(thread)} of {tr.provenance}",
    )


def emit(tr: TreeTruncation, format: str) -> str:
    """Render a truncation: "dot" for graphviz, "json" for the level schema."""
    if format == "dot":
        lines = ["digraph tree {"]
        for level in range(tr.depth + 1):
            for idx in range(tr.size(level)):
                lines.append(f'  "L{level}_{idx}" [label="{level}:{idx}"];')
        for level in range(1, tr.depth + 1):
            for idx in range(tr.size(level)):
                lines.append(f'  "L{level - 1}_{tr.parent(level, idx)}" -> "L{level}_{idx}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if format == "json":
        payload = {
            "depth": tr.depth,
            "levels": [
                {"size": size, "parents": list(parents)}
                for size, parents in tr.levels
            ],
            "provenance": tr.provenance,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise TreeError(f"unknown format {format!r}")


def parse_truncation(text: str) -> TreeTruncation:
    """Inverse of the JSON emission; the result has no chain backing."""
    data = json.loads(text)
    levels = []
    fibres = []
    prev_size = None
    for k, lv in enumerate(data["levels"]):
        size, parents = int(lv["size"]), tuple(int(p) for p in lv["parents"])
        if k == 0:
            if size != 1 or parents:
                raise TreeError("level 0 must be a single root")
        else:
            if len(parents) != size:
                raise TreeError(f"level {k} parent table has the wrong length")
            if any(not 0 <= p < prev_size for p in parents):
                raise TreeError(f"level {k} parent out of range")
            if size % prev_size:
                raise TreeError(f"level {k} size is not a fibre multiple")
            fibres.append(size // prev_size)
        levels.append((size, parents))
        prev_size = size
    if int(data["depth"]) != len(levels) - 1:
        raise TreeError("depth field disagrees with the level list")
    return TreeTruncation(
        block=0,
        levels=tuple(levels),
        fibres=tuple(fibres),
        provenance=str(data.get("provenance", "")),
    )
