"""Ordinal-indexed descending subgroup chains.

A chain schema over a group assigns a subgroup descriptor to every ordinal
stage i <= length, where length has the shape w*q + r.  Stages inside block
b (ordinals w*b + n) come from a per-block rule; stage w*b for b >= 1 is a
limit stage whose membership test is the closed form the constructor knows,
and verification cross-checks it against the lazy intersection of the
previous block's stages on probe elements, within a budget.  Exceeding the
budget downgrades the verdict to inconclusive, never to a wrong answer.

Verification emits certificates: per-stage descent and index reports
(indices are certified by transversals when available, otherwise only
probe-counted and reported unverified), per-probe separation stages, and a
single Pass/Fail/Inconclusive verdict.  A Fail always carries a concrete
witness element and stage.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .groups import (
    Element,
    ExtensionHandle,
    FinitePoints,
    FinSupportPowerGroup,
    Group,
    GroupError,
    PointSet,
    WreathProductGroup,
    commutator_subgroup,
    finite_support_power,
    label_sort_key,
    random_words,
    wreath_product,
)
from .ordinal import (
    ALEPH0,
    OMEGA,
    ZERO,
    CardinalBound,
    DepthClass,
    Ordinal,
    classify,
    format_ordinal,
    left_subtract,
    ordinal_to_jsonable,
)

__all__ = [
    "ChainError",
    "StepIndex",
    "SubgroupDescriptor",
    "ChainSchema",
    "ChainCertificate",
    "DepthInterval",
    "chain_at",
    "limit_membership",
    "verify_prefix",
    "concat_extension",
    "compress_successor_tail",
    "power_chain",
    "diagonal_power_chain",
    "tower_chain",
    "core_sandwich",
    "finite_chain",
    "promote_to_omega",
    "integers_chain",
    "dihedral_chain",
    "single_step_chain",
]


class ChainError(GroupError):
    """Invalid chain construction or stage access."""


@dataclass(frozen=True)
class StepIndex:
    """Index of a stage in its parent: a known integer, infinite, or unverified."""

    kind: str  # "finite" | "infinite" | "unverified"
    value: Optional[int] = None

    @staticmethod
    def finite(n: int) -> "StepIndex":
        return StepIndex("finite", int(n))

    @staticmethod
    def infinite() -> "StepIndex":
        return StepIndex("infinite")

    @staticmethod
    def unverified() -> "StepIndex":
        return StepIndex("unverified")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def to_jsonable(self):
        return self.value if self.kind == "finite" else self.kind


@dataclass(frozen=True)
class SubgroupDescriptor:
    """One chain stage: a membership test plus index evidence.

    ``transversal`` lists coset representatives of this stage inside its
    parent stage; when present the index is certified exactly, otherwise the
    verifier can only count cosets among probes and reports it unverified.
    """

    owner: Group
    membership: Callable[[Element], bool]
    index_in_parent: Optional[StepIndex] = None
    transversal: Optional[tuple[Element, ...]] = None
    label: str = ""

    def contains(self, e: Element) -> bool:
        return self.membership(e)


def _full_stage(group: Group) -> SubgroupDescriptor:
    return SubgroupDescriptor(
        owner=group,
        membership=lambda e: True,
        index_in_parent=None,
        transversal=None,
        label="full group",
    )


@dataclass(frozen=True)
class ChainSchema:
    """A descending chain of length w*num_blocks + len(tail).

    ``block_rule(b, n)`` yields the stage at ordinal w*b + n for b below
    num_blocks; ``final_limit`` is the stage at w*num_blocks when there is at
    least one block; ``tail`` holds the finitely many stages after that.
    """

    group: Group
    kappa: CardinalBound
    num_blocks: int
    block_rule: Optional[Callable[[int, int], SubgroupDescriptor]] = None
    final_limit: Optional[SubgroupDescriptor] = None
    tail: tuple[SubgroupDescriptor, ...] = ()
    name: str = ""
    flags: tuple[str, ...] = ()
    _stage_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.num_blocks < 0:
            raise ChainError("negative block count")
        if self.num_blocks > 0 and self.block_rule is None:
            raise ChainError("chains with blocks need a block rule")
        if self.num_blocks > 0 and self.final_limit is None:
            raise ChainError("chains with blocks need the stage at their last limit")

    @property
    def length(self) -> Ordinal:
        return OMEGA * self.num_blocks + len(self.tail)

    def stage_at(self, b: int, n: int) -> SubgroupDescriptor:
        """Stage at ordinal w*b + n."""
        key = (b, n)
        if key in self._stage_cache:
            return self._stage_cache[key]
        if b < 0 or n < 0:
            raise ChainError("negative stage address")
        if b < self.num_blocks:
            stage = self.block_rule(b, n)
        elif b == self.num_blocks:
            if n == 0:
                stage = self.final_limit if self.num_blocks else _full_stage(self.group)
            elif n <= len(self.tail):
                stage = self.tail[n - 1]
            else:
                raise ChainError(
                    f"stage {format_ordinal(OMEGA * b + n)} beyond chain length "
                    f"{format_ordinal(self.length)}"
                )
        else:
            raise ChainError(
                f"stage {format_ordinal(OMEGA * b + n)} beyond chain length "
                f"{format_ordinal(self.length)}"
            )
        self._stage_cache[key] = stage
        return stage


def _split_stage_ordinal(i: Ordinal) -> tuple[int, int]:
    b = n = 0
    for exp, coeff in i.terms:
        if exp == ZERO:
            n = coeff
        elif exp.is_finite and exp.to_int() == 1:
            b = coeff
        else:
            raise ChainError(
                f"chain stages have shape w*q + r; {format_ordinal(i)} does not"
            )
    return b, n


def chain_at(chain: ChainSchema, i) -> SubgroupDescriptor:
    """The stage descriptor at ordinal i <= length.

    At limit ordinals this is the closed-form stage the constructor declared;
    ``limit_membership`` evaluates the underlying intersection lazily per
    element, and verification cross-checks the two on probes.
    """
    if isinstance(i, int):
        i = Ordinal.from_int(i)
    if i > chain.length:
        raise ChainError(
            f"stage {format_ordinal(i)} beyond chain length {format_ordinal(chain.length)}"
        )
    b, n = _split_stage_ordinal(i)
    return chain.stage_at(b, n)


def limit_membership(chain: ChainSchema, i, element: Element,
                     budget: int = 64) -> Optional[bool]:
    """Lazy intersection membership at the limit ordinal i = w*b.

    Evaluates the canonical cofinal sequence (the previous block's stages)
    up to ``budget`` steps: False once some stage excludes the element, True
    only if the declared limit stage also accepts it, None when the budget
    runs out undecided.
    """
    if isinstance(i, int):
        i = Ordinal.from_int(i)
    b, n = _split_stage_ordinal(i)
    if n != 0 or b == 0:
        raise ChainError(f"{format_ordinal(i)} is not a limit stage of this chain")
    for k in range(budget + 1):
        if not chain.stage_at(b - 1, k).contains(element):
            return False
    if chain.stage_at(b, 0).contains(element):
        return True
    return None


# --- built-in chains ---------------------------------------------------------


def integers_chain(p: int = 2) -> ChainSchema:
    """The p-adic chain over the integers: stage n holds multiples of p^n."""
    from .groups import make_integers

    if p < 2:
        raise ChainError("need p >= 2")
    z = make_integers()

    def rule(b: int, n: int) -> SubgroupDescriptor:
        modulus = p ** n
        if n == 0:
            return _full_stage(z)
        reps = tuple(Element(z, j * p ** (n - 1)) for j in range(p))
        return SubgroupDescriptor(
            owner=z,
            membership=lambda e, m=modulus: e.value % m == 0,
            index_in_parent=StepIndex.finite(p),
            transversal=reps,
            label=f"multiples of {modulus}",
        )

    final = SubgroupDescriptor(
        owner=z,
        membership=lambda e: e.value == 0,
        index_in_parent=None,
        transversal=None,
        label="zero",
    )
    return ChainSchema(
        group=z, kappa=ALEPH0, num_blocks=1, block_rule=rule, final_limit=final,
        name=f"{p}-adic",
    )


def dihedral_chain(p: int = 2) -> ChainSchema:
    """Translations by growing powers of p inside the infinite dihedral group."""
    from .groups import make_infinite_dihedral

    if p < 2:
        raise ChainError("need p >= 2")
    d = make_infinite_dihedral()

    def rule(b: int, n: int) -> SubgroupDescriptor:
        if n == 0:
            return _full_stage(d)
        if n == 1:
            return SubgroupDescriptor(
                owner=d,
                membership=lambda e: e.value[1] == 0,
                index_in_parent=StepIndex.finite(2),
                transversal=(Element(d, (0, 0)), Element(d, (0, 1))),
                label="translations",
            )
        modulus = p ** (n - 1)
        reps = tuple(Element(d, (j * p ** (n - 2), 0)) for j in range(p))
        return SubgroupDescriptor(
            owner=d,
            membership=lambda e, m=modulus: e.value[1] == 0 and e.value[0] % m == 0,
            index_in_parent=StepIndex.finite(p),
            transversal=reps,
            label=f"translations by multiples of {modulus}",
        )

    final = SubgroupDescriptor(
        owner=d,
        membership=lambda e: e.value == (0, 0),
        label="identity",
    )
    return ChainSchema(
        group=d, kappa=ALEPH0, num_blocks=1, block_rule=rule, final_limit=final,
        name=f"dihedral {p}-adic",
    )


def finite_chain(group: Group, subgroups, kappa: CardinalBound = ALEPH0,
                 name: str = "") -> ChainSchema:
    """A finite chain from explicit element sets (after the full group).

    Transversals are materialized by greedy left-coset decomposition, so all
    indices are certified.  The last set need not be trivial; verification
    will fail such a chain, which is exactly what negative tests want.
    """
    if group.order is None:
        raise ChainError("finite chains need a finite group")
    sets = [frozenset(group.validate_value(v) for v in s) for s in subgroups]
    prev = frozenset(group.element_values())
    stages = []
    for k, s in enumerate(sets, start=1):
        if not s <= prev:
            raise ChainError(f"stage {k} is not contained in stage {k - 1}")
        if len(prev) % len(s):
            raise ChainError(f"stage {k} size does not divide its parent")
        reps = []
        covered = set()
        ident = group.identity_value()
        ordered = sorted(prev, key=label_sort_key)
        if ident in prev:
            ordered = [ident] + [v for v in ordered if v != ident]
        for v in ordered:
            if v not in covered:
                reps.append(v)
                covered |= {group.mul_values(v, h) for h in s}
        stages.append(
            SubgroupDescriptor(
                owner=group,
                membership=lambda e, ss=s: e.value in ss,
                index_in_parent=StepIndex.finite(len(reps)),
                transversal=tuple(Element(group, v) for v in reps),
                label=f"order {len(s)}",
            )
        )
        prev = s
    return ChainSchema(
        group=group, kappa=kappa, num_blocks=0, tail=tuple(stages),
        name=name or f"finite chain over {group.tag}",
    )


def single_step_chain(group: Group, kappa: CardinalBound = ALEPH0) -> ChainSchema:
    """The one-step chain: full group, then the trivial subgroup."""
    if group.order is None:
        raise ChainError("single-step chains need a finite group")
    return finite_chain(group, [{group.identity_value()}], kappa=kappa,
                        name=f"one step over {group.tag}")


def promote_to_omega(chain: ChainSchema) -> ChainSchema:
    """Pad a finite chain to length w by repeating its last stage.

    Repetition steps have index 1, which the index condition allows.
    """
    if chain.num_blocks != 0:
        raise ChainError("only finite chains are promoted")
    r = len(chain.tail)
    last = chain.stage_at(0, r)
    identity = chain.group.identity()

    def rule(b: int, n: int) -> SubgroupDescriptor:
        if n <= r:
            return chain.stage_at(0, n)
        return SubgroupDescriptor(
            owner=chain.group,
            membership=last.membership,
            index_in_parent=StepIndex.finite(1),
            transversal=(identity,),
            label=(last.label or "last stage") + " (repeated)",
        )

    final = SubgroupDescriptor(
        owner=chain.group,
        membership=last.membership,
        label=(last.label or "last stage") + " (limit)",
    )
    return ChainSchema(
        group=chain.group, kappa=chain.kappa, num_blocks=1, block_rule=rule,
        final_limit=final, name=f"omega-padded {chain.name}", flags=chain.flags,
    )


# --- combinators -------------------------------------------------------------


def _pullback_stage(ext: ExtensionHandle, stage: SubgroupDescriptor) -> SubgroupDescriptor:
    reps = None
    if stage.transversal is not None and ext.section is not None:
        reps = tuple(ext.section(r) for r in stage.transversal)
    return SubgroupDescriptor(
        owner=ext.total,
        membership=lambda e: stage.membership(ext.projection(e)),
        index_in_parent=stage.index_in_parent,
        transversal=reps,
        label=f"pullback of {stage.label}" if stage.label else "pullback",
    )


def _embed_kernel_stage(ext: ExtensionHandle, stage: SubgroupDescriptor) -> SubgroupDescriptor:
    reps = None
    if stage.transversal is not None and ext.kernel_embed is not None:
        reps = tuple(ext.kernel_embed(r) for r in stage.transversal)

    def member(e: Element) -> bool:
        if not ext.kernel_contains(e):
            return False
        return stage.membership(ext.kernel_retract(e))

    return SubgroupDescriptor(
        owner=ext.total,
        membership=member,
        index_in_parent=stage.index_in_parent,
        transversal=reps,
        label=f"kernel copy of {stage.label}" if stage.label else "kernel copy",
    )


def concat_extension(ext: ExtensionHandle, chain_q: ChainSchema,
                     chain_n: ChainSchema) -> ChainSchema:
    """Chain over the total group of a short exact sequence.

    Stages up to the quotient chain's length pull back through the
    projection; later stages are the kernel chain's stages embedded.  The
    stage at exactly the quotient length is the pullback of the quotient's
    trivial stage, i.e. the kernel membership test.  The length is the
    ordinal sum and the bound is the larger of the two.
    """
    if chain_q.group.tag != ext.quotient.tag:
        raise ChainError("quotient chain is over the wrong group")
    if ext.kernel_group is None or ext.kernel_retract is None or ext.kernel_embed is None:
        raise ChainError("extension lacks a kernel bundle")
    if chain_n.group.tag != ext.kernel_group.tag:
        raise ChainError("kernel chain is over the wrong group")
    if chain_q.length == ZERO and ext.total.tag == chain_n.group.tag:
        return chain_n
    l1 = chain_q.length
    total_len = l1 + chain_n.length
    q_blocks, r = _split_stage_ordinal(total_len)

    def dispatch(i: Ordinal) -> SubgroupDescriptor:
        if i <= l1:
            return _pullback_stage(ext, chain_at(chain_q, i))
        return _embed_kernel_stage(ext, chain_at(chain_n, left_subtract(l1, i)))

    def rule(b: int, n: int) -> SubgroupDescriptor:
        return dispatch(OMEGA * b + n)

    return ChainSchema(
        group=ext.total,
        kappa=max(chain_q.kappa, chain_n.kappa),
        num_blocks=q_blocks,
        block_rule=rule if q_blocks else None,
        final_limit=dispatch(OMEGA * q_blocks) if q_blocks else None,
        tail=tuple(dispatch(OMEGA * q_blocks + j) for j in range(1, r + 1)),
        name=f"{chain_q.name} then {chain_n.name}",
        flags=chain_q.flags + chain_n.flags,
    )


def compress_successor_tail(chain: ChainSchema) -> ChainSchema:
    """Collapse a tail of n >= 2 finite steps into one jump.

    The new final step keeps the old final stage and carries the product of
    the old tail indices; its transversal is the ordered products of the old
    tail transversals when all of them are present.
    """
    r = len(chain.tail)
    if r < 2:
        raise ChainError("nothing to compress: tail has fewer than 2 steps")
    product = 1
    for stage in chain.tail:
        idx = stage.index_in_parent
        if idx is None or not idx.is_finite:
            raise ChainError("tail contains a non-finite or unverified index")
        product *= idx.value
    reps = None
    if all(s.transversal is not None for s in chain.tail):
        combos = itertools.product(*[s.transversal for s in chain.tail])
        out = []
        for combo in combos:
            e = combo[0]
            for x in combo[1:]:
                e = e * x
            out.append(e)
        reps = tuple(out)
    last = chain.tail[-1]
    merged = SubgroupDescriptor(
        owner=chain.group,
        membership=last.membership,
        index_in_parent=StepIndex.finite(product),
        transversal=reps,
        label=(last.label or "final stage") + " (compressed)",
    )
    return ChainSchema(
        group=chain.group, kappa=chain.kappa, num_blocks=chain.num_blocks,
        block_rule=chain.block_rule, final_limit=chain.final_limit,
        tail=(merged,), name=f"compressed {chain.name}", flags=chain.flags,
    )


def power_chain(base_chain: ChainSchema, points: PointSet) -> ChainSchema:
    """Chain over the finite-support power of the base, same w*q length.

    Within block b, the stage at w*b + n constrains the value at the i-th
    enumerated point to the base stage w*b + (n - i) for i < n, and every
    supported value to the base stage w*b.  Base chains with a nonzero
    finite tail are rejected: the block construction needs limit-terminated
    input, and padding a finite chain to length w first is the caller's
    explicit, sound choice.
    """
    if base_chain.num_blocks < 1 or base_chain.tail:
        raise ChainError(
            "power chains need a base of length w*q; promote finite chains first "
            "and re-shape successor-tailed ones"
        )
    if points.size is not None:
        raise ChainError("power chains need a countable point enumeration")
    base = base_chain.group
    grp = finite_support_power(base, points)
    q = base_chain.num_blocks

    def member_at(b: int, n: int, e: Element) -> bool:
        value = e.value
        if b > 0:
            support_stage = base_chain.stage_at(b, 0)
            for _, v in value:
                if not support_stage.contains(Element(base, v)):
                    return False
        for i in range(n):
            x = points.label(i)
            v = grp.value_at(value, x)
            if not base_chain.stage_at(b, n - i).contains(Element(base, v)):
                return False
        return True

    def rule(b: int, n: int) -> SubgroupDescriptor:
        index: Optional[StepIndex] = None
        reps = None
        if n >= 1:
            sizes = []
            per_coordinate = []
            certified = True
            for i in range(n):
                stage = base_chain.stage_at(b, n - i)
                idx = stage.index_in_parent
                if idx is None or not idx.is_finite:
                    certified = False
                    break
                sizes.append(idx.value)
                per_coordinate.append((points.label(i), stage.transversal))
            if certified:
                total = 1
                for s in sizes:
                    total *= s
                index = StepIndex.finite(total)
                if all(t is not None for _, t in per_coordinate):
                    reps = []
                    pools = [
                        [(x, rep.value) for rep in t] for x, t in per_coordinate
                    ]
                    for combo in itertools.product(*pools):
                        mapping = {x: v for x, v in combo}
                        reps.append(Element(grp, grp.validate_value(mapping.items())))
                    reps = tuple(reps)
            else:
                index = StepIndex.unverified()
        return SubgroupDescriptor(
            owner=grp,
            membership=lambda e, bb=b, nn=n: member_at(bb, nn, e),
            index_in_parent=index,
            transversal=reps,
            label=f"coordinatewise block {b} step {n}",
        )

    base_final = base_chain.stage_at(q, 0)

    def final_member(e: Element) -> bool:
        return all(base_final.contains(Element(base, v)) for _, v in e.value)

    final = SubgroupDescriptor(
        owner=grp, membership=final_member, label="supportwise final stage",
    )
    return ChainSchema(
        group=grp, kappa=ALEPH0, num_blocks=q, block_rule=rule, final_limit=final,
        name=f"power of {base_chain.name}", flags=base_chain.flags,
    )


def diagonal_power_chain(base_chain: ChainSchema, points: FinitePoints) -> ChainSchema:
    """Same-length chain over a finite power: every coordinate in the base stage."""
    if not isinstance(points, FinitePoints):
        raise ChainError("diagonal power chains need finite points")
    base = base_chain.group
    grp = finite_support_power(base, points)
    m = points.size

    def lift(stage: SubgroupDescriptor) -> SubgroupDescriptor:
        index: Optional[StepIndex] = None
        reps = None
        idx = stage.index_in_parent
        if idx is not None:
            if idx.is_finite:
                index = StepIndex.finite(idx.value ** m)
                if stage.transversal is not None:
                    pools = [
                        [(points.label(i), rep.value) for rep in stage.transversal]
                        for i in range(m)
                    ]
                    reps = tuple(
                        Element(grp, grp.validate_value({x: v for x, v in combo}.items()))
                        for combo in itertools.product(*pools)
                    )
            else:
                index = StepIndex(idx.kind)

        def member(e: Element) -> bool:
            return all(stage.contains(Element(base, v)) for _, v in e.value)

        return SubgroupDescriptor(
            owner=grp, membership=member, index_in_parent=index, transversal=reps,
            label=f"diagonal of {stage.label}" if stage.label else "diagonal",
        )

    def rule(b: int, n: int) -> SubgroupDescriptor:
        return lift(base_chain.stage_at(b, n))

    q = base_chain.num_blocks
    return ChainSchema(
        group=grp,
        kappa=ALEPH0,
        num_blocks=q,
        block_rule=rule if q else None,
        final_limit=lift(base_chain.stage_at(q, 0)) if q else None,
        tail=tuple(lift(s) for s in base_chain.tail),
        name=f"diagonal power of {base_chain.name}",
        flags=base_chain.flags,
    )


def tower_chain(g: Group, g_chain: ChainSchema, n: int) -> ChainSchema:
    """Chain over the n-th iterated wreath tower of g, of length w*n.

    Level by level: the chain over the next tower group concatenates the
    pullback of the base chain through the top projection with the power
    chain over the previous level, adding one w block each time.  The result
    is an upper bound on depth; exactness is a claim that additionally needs
    the base's finite-abelianization hypothesis, which is echoed in flags.
    """
    if n < 1:
        raise ChainError("tower height must be >= 1")
    if g_chain.group.tag != g.tag:
        raise ChainError("chain is over the wrong group")
    if g.order is not None:
        raise ChainError("tower bases must be infinite")
    if not g.is_residually_finite_claimed:
        raise ChainError("tower bases must carry the residually-finite claim")
    if g_chain.num_blocks != 1 or g_chain.tail:
        raise ChainError("tower bases need a chain of length exactly w")
    g.enumerate_element(0)  # must be enumerable
    flags = (
        "upper bound from the tower construction",
        f"exact-depth claim hypotheses: residually finite claimed={g.is_residually_finite_claimed}, "
        f"finite abelianization claimed={g.has_finite_abelianization_claimed}",
    )
    chain = g_chain
    group = g
    for _ in range(2, n + 1):
        w = wreath_product(group, g)
        kernel_chain = power_chain(chain, w.points)
        chain = concat_extension(w.extension(), g_chain, kernel_chain)
        group = w
    return ChainSchema(
        group=chain.group, kappa=chain.kappa, num_blocks=chain.num_blocks,
        block_rule=chain.block_rule, final_limit=chain.final_limit,
        tail=chain.tail, name=f"tower({g.tag}, {n})", flags=flags,
    )


def core_sandwich(wreath: WreathProductGroup) -> tuple[SubgroupDescriptor, SubgroupDescriptor]:
    """Membership tests bracketing the intersection of finite-index subgroups.

    Lower: finite-support functions into the derived subgroup of the base,
    with trivial top part.  Upper: the kernel of the projection to the top.
    The top group must be infinite and carry the residually-finite claim;
    the derived-subgroup test needs a finite base.
    """
    if not isinstance(wreath, WreathProductGroup):
        raise ChainError("core bounds are defined for wreath products")
    if wreath.top.order is not None or not wreath.top.is_residually_finite_claimed:
        raise ChainError("top group must be infinite and claimed residually finite")
    if wreath.base.order is None:
        raise ChainError("lower bound needs a finite base for its derived subgroup")
    derived = commutator_subgroup(wreath.base)

    def lower(e: Element) -> bool:
        f, g = e.value
        if g != wreath.top.identity_value():
            return False
        return all(derived.contains_parent_element(Element(wreath.base, v)) for _, v in f)

    def upper(e: Element) -> bool:
        return e.value[1] == wreath.top.identity_value()

    lower_desc = SubgroupDescriptor(
        owner=wreath, membership=lower, index_in_parent=StepIndex.infinite(),
        label="derived-valued functions, trivial top",
    )
    upper_desc = SubgroupDescriptor(
        owner=wreath, membership=upper, index_in_parent=StepIndex.infinite(),
        label="kernel of the top projection",
    )
    return lower_desc, upper_desc


# --- verification ------------------------------------------------------------


@dataclass(frozen=True)
class ChainCertificate:
    verdict: str  # "pass" | "fail" | "inconclusive"
    kappa: CardinalBound
    length: Ordinal
    levels: tuple[dict, ...]
    separations: tuple[dict, ...]
    seed: int
    probes_used: int
    levels_checked: int
    flags: tuple[str, ...]
    failure: Optional[dict] = None

    def to_jsonable(self) -> dict:
        out = {
            "verdict": self.verdict,
            "kappa": self.kappa.to_jsonable(),
            "length": ordinal_to_jsonable(self.length),
            "levels": list(self.levels),
            "separations": list(self.separations),
            "seed": self.seed,
            "probes": self.probes_used,
            "flags": list(self.flags),
        }
        if self.failure is not None:
            out["failure"] = self.failure
        return out


def _probe_id(e: Element) -> str:
    return json.dumps(e.to_jsonable(), sort_keys=True, separators=(",", ":"))


def verify_prefix(chain: ChainSchema, levels: int, probes: int, seed: int,
                  kappa: Optional[CardinalBound] = None, word_len: int = 8,
                  limit_budget: int = 64) -> ChainCertificate:
    """Probe-based verification of a chain prefix.

    Checks ``levels`` finite steps past each limit stage: the full stage 0,
    descent between consecutive stages, step indices strictly below kappa
    (certified by transversals where present, otherwise probe-counted and
    left unverified), coherence of each declared limit stage against the
    lazy intersection of the previous block, triviality of the final stage
    on probes, and the first excluding stage of every probe.  Failures are
    verdicts with witnesses, never exceptions.
    """
    if levels < 1:
        raise ChainError("need at least one level")
    kappa = kappa if kappa is not None else chain.kappa
    probe_elements = random_words(chain.group, probes, seed, max_len=word_len)
    identity = chain.group.identity()

    q, r = chain.num_blocks, len(chain.tail)
    rows: list[tuple[Ordinal, int, int, SubgroupDescriptor]] = []
    for b in range(q):
        for n in range(levels + 1):
            rows.append((OMEGA * b + n, b, n, chain.stage_at(b, n)))
    for n in range(r + 1):
        rows.append((OMEGA * q + n, q, n, chain.stage_at(q, n)))

    failures: list[dict] = []
    flags: list[str] = list(chain.flags)
    unresolved: list[tuple[int, Ordinal]] = []

    def fail(reason: str, stage: Ordinal, witness: Optional[Element]):
        failures.append(
            {
                "reason": reason,
                "stage": format_ordinal(stage),
                "witness": None if witness is None else _probe_id(witness),
            }
        )

    # identity sanity and stage-0 fullness
    for ordinal_i, b, n, stage in rows:
        if not stage.contains(identity):
            fail("stage rejects the identity", ordinal_i, identity)
    mem = [[stage.contains(p) for (_, _, _, stage) in rows] for p in probe_elements]
    for pi, p in enumerate(probe_elements):
        if not mem[pi][0]:
            fail("stage 0 is not the full group", ZERO, p)

    # limit coherence: declared limit stage vs lazy intersection of block b-1
    witness_stage: dict[tuple[int, int], Ordinal] = {}
    limit_rows = [
        (k, b) for k, (o, b, n, _) in enumerate(rows) if n == 0 and b >= 1
    ]
    for k, b in limit_rows:
        for pi, p in enumerate(probe_elements):
            claimed = mem[pi][k]
            found = None
            for step in range(limit_budget + 1):
                if not chain.stage_at(b - 1, step).contains(p):
                    found = step
                    break
            if found is not None:
                if claimed:
                    fail(
                        "limit stage accepts an element excluded below it",
                        OMEGA * (b - 1) + found,
                        p,
                    )
                else:
                    witness_stage[(pi, b)] = OMEGA * (b - 1) + found
            elif not claimed:
                unresolved.append((pi, rows[k][0]))

    # index verification per successor row
    level_reports: list[dict] = []
    index_unverified = False
    for k, (ordinal_i, b, n, stage) in enumerate(rows):
        descent_ok = True
        if k > 0 and rows[k - 1][1] == b and rows[k - 1][2] == n - 1:
            for pi, p in enumerate(probe_elements):
                if mem[pi][k] and not mem[pi][k - 1]:
                    fail("descent violated", ordinal_i, p)
                    descent_ok = False
        index_value = None
        if n >= 1:
            parent = rows[k - 1][3]
            claimed = stage.index_in_parent
            if claimed is not None and claimed.kind == "infinite":
                fail("step index is infinite", ordinal_i, None)
                index_value = "infinite"
            elif stage.transversal is not None:
                reps = stage.transversal
                valid = True
                if not any(stage.contains(rep) for rep in reps):
                    # the subgroup's own coset must be represented
                    fail("transversal misses the identity coset", ordinal_i, None)
                    valid = False
                for rep in reps:
                    if not parent.contains(rep):
                        fail("transversal leaves the parent stage", ordinal_i, rep)
                        valid = False
                        break
                if valid:
                    for i in range(len(reps)):
                        for j in range(i + 1, len(reps)):
                            if stage.contains(reps[i].inverse() * reps[j]):
                                fail("transversal representatives share a coset",
                                     ordinal_i, reps[j])
                                valid = False
                                break
                        if not valid:
                            break
                if valid:
                    for pi, p in enumerate(probe_elements):
                        if mem[pi][k - 1] and not any(
                            stage.contains(rep.inverse() * p) for rep in reps
                        ):
                            fail("transversal does not cover a parent probe",
                                 ordinal_i, p)
                            valid = False
                            break
                if valid:
                    index_value = len(reps)
                    if claimed is not None and claimed.is_finite and claimed.value != len(reps):
                        fail("declared index disagrees with its transversal",
                             ordinal_i, None)
                    if not kappa.admits(len(reps)):
                        fail(f"index {len(reps)} is not below kappa {kappa}",
                             ordinal_i, None)
            else:
                # probe-counted lower bound only
                in_parent = [p for pi, p in enumerate(probe_elements) if mem[pi][k - 1]]
                classes: list[Element] = []
                for p in in_parent:
                    if not any(stage.contains(c.inverse() * p) for c in classes):
                        classes.append(p)
                lower = len(classes) if classes else 1
                if not kappa.admits(lower):
                    fail(
                        f"at least {lower} cosets found, not below kappa {kappa}",
                        ordinal_i,
                        classes[-1] if classes else None,
                    )
                    index_value = lower
                else:
                    index_value = "unverified"
                    index_unverified = True
        level_reports.append(
            {
                "stage": format_ordinal(ordinal_i),
                "index": index_value,
                "descent": descent_ok,
            }
        )

    # final stage accepts only the identity among probes
    final_row = len(rows) - 1
    final_ordinal = rows[final_row][0]
    for pi, p in enumerate(probe_elements):
        if mem[pi][final_row]:
            fail("final stage accepts a non-identity probe", final_ordinal, p)

    # separations: the first stage known to exclude each probe
    separations: list[dict] = []
    for pi, p in enumerate(probe_elements):
        first: Optional[Ordinal] = None
        for k, (ordinal_i, b, n, _) in enumerate(rows):
            if n == 0 and b >= 1 and (pi, b) in witness_stage:
                if not mem[pi][k]:
                    first = witness_stage[(pi, b)]
                    break
            if not mem[pi][k]:
                first = ordinal_i
                break
        separations.append(
            {
                "probe": _probe_id(p),
                "first_excluding_stage": format_ordinal(first)
                if first is not None
                else "unresolved",
            }
        )
    separations.sort(key=lambda s: (s["probe"], s["first_excluding_stage"]))

    for pi, ordinal_i in unresolved:
        flags.append(
            f"limit {format_ordinal(ordinal_i)} rejection of probe "
            f"{_probe_id(probe_elements[pi])} unresolved within budget {limit_budget}"
        )
    if index_unverified:
        flags.append("some step indices could not be certified by a transversal")

    if failures:
        verdict = "fail"
    elif unresolved or index_unverified or any(
        s["first_excluding_stage"] == "unresolved" for s in separations
    ):
        verdict = "inconclusive"
    else:
        verdict = "pass"

    return ChainCertificate(
        verdict=verdict,
        kappa=kappa,
        length=chain.length,
        levels=tuple(level_reports),
        separations=tuple(separations),
        seed=seed,
        probes_used=len(probe_elements),
        levels_checked=levels,
        flags=tuple(flags),
        failure=failures[0] if failures else None,
    )


# --- depth intervals ---------------------------------------------------------


@dataclass(frozen=True)
class DepthInterval:
    """A bracketing of a group's depth: registered lower bound, constructed
    chain upper bound, and an optional externally claimed exact value."""

    lower: Ordinal
    upper: Ordinal
    paper_claimed: Optional[Ordinal] = None
    claim_tag: str = ""
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        for value in (self.lower, self.upper, self.paper_claimed):
            if value is not None and classify(value) is DepthClass.INVALID:
                raise ChainError(f"{format_ordinal(value)} is not a valid depth shape")
        if self.lower > self.upper:
            raise ChainError("lower depth bound exceeds the upper bound")

    @property
    def claim_discrepancy(self) -> bool:
        if self.paper_claimed is None:
            return False
        return not (self.lower <= self.paper_claimed <= self.upper)

    def to_jsonable(self) -> dict:
        out = {
            "lower": ordinal_to_jsonable(self.lower),
            "upper": ordinal_to_jsonable(self.upper),
            "lower_text": format_ordinal(self.lower),
            "upper_text": format_ordinal(self.upper),
            "flags": list(self.flags),
        }
        if self.paper_claimed is not None:
            out["claimed"] = ordinal_to_jsonable(self.paper_claimed)
            out["claimed_text"] = format_ordinal(self.paper_claimed)
            out["claim_tag"] = self.claim_tag
            out["claim_discrepancy"] = self.claim_discrepancy
        return out
