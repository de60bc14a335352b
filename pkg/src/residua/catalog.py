"""From group expressions to groups, chains, and depth intervals.

Every expression shape the language can denote gets a registered group
builder and (except unresolved extension references) a chain constructor:

- finite groups get a minimax-index chain from the subgroup lattice oracle
  when they fit under its cap, and the one-step chain otherwise;
- the integers and the infinite dihedral group get their 2-adic chains;
- products concatenate factor chains through the projection onto the first
  factor;
- powers lift the base chain coordinatewise (countable points need the
  base padded to length w first; finite points lift diagonally);
- wreath products concatenate the top chain's pullback with the kernel
  power chain;
- towers iterate that construction, one w block per level.

Named extension references resolve against programmatic registrations only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import dsl
from .chains import (
    ChainError,
    ChainSchema,
    DepthInterval,
    concat_extension,
    diagonal_power_chain,
    dihedral_chain,
    finite_chain,
    integers_chain,
    power_chain,
    promote_to_omega,
    single_step_chain,
    tower_chain,
)
from .groups import (
    CountablePoints,
    DirectProductGroup,
    Element,
    FinitePoints,
    Group,
    GroupError,
    extension_from_quotient,
    make_cyclic,
    make_infinite_dihedral,
    make_integers,
    make_perm,
    perm_from_cycles,
    wreath_product,
)
from .oracle import ORACLE_CAP, minimax_chain
from .ordinal import OMEGA, ONE, ZERO, Ordinal, add, multiply

__all__ = [
    "UnregisteredConstructionError",
    "build_group",
    "chain_for",
    "depth_interval",
    "register_extension",
    "registered_extensions",
]


class UnregisteredConstructionError(GroupError):
    """The expression uses a construction nothing is registered for."""


@dataclass(frozen=True)
class _ExtensionEntry:
    group_factory: Callable[[], Group]
    chain_factory: Optional[Callable[[], ChainSchema]]


_EXTENSIONS: dict[str, _ExtensionEntry] = {}


def register_extension(name: str, group_factory: Callable[[], Group],
                       chain_factory: Optional[Callable[[], ChainSchema]] = None):
    """Register a named group (and optionally a chain) for ExtensionRef use."""
    _EXTENSIONS[name] = _ExtensionEntry(group_factory, chain_factory)


def registered_extensions() -> tuple[str, ...]:
    return tuple(sorted(_EXTENSIONS))


def _natural_points() -> CountablePoints:
    return CountablePoints(
        lambda i: i, "N", membership=lambda p: isinstance(p, int) and p >= 0
    )


def build_group(expr: dsl.GroupExpr) -> Group:
    if isinstance(expr, dsl.Trivial):
        return make_cyclic(1)
    if isinstance(expr, dsl.Cyclic):
        return make_cyclic(expr.n)
    if isinstance(expr, dsl.Perm):
        images = [perm_from_cycles(expr.degree, gen) for gen in expr.generators]
        return make_perm(expr.degree, images)
    if isinstance(expr, dsl.Int):
        return make_integers()
    if isinstance(expr, dsl.Dinf):
        return make_infinite_dihedral()
    if isinstance(expr, dsl.Product):
        if len(expr.items) == 1:
            return build_group(expr.items[0])
        return DirectProductGroup([build_group(i) for i in expr.items])
    if isinstance(expr, dsl.FinSupportPower):
        from .groups import finite_support_power

        base = build_group(expr.base)
        points = _natural_points() if expr.points == "N" else FinitePoints(range(expr.points))
        return finite_support_power(base, points)
    if isinstance(expr, dsl.Wreath):
        return wreath_product(build_group(expr.base), build_group(expr.top))
    if isinstance(expr, dsl.Tower):
        g = build_group(expr.base)
        current = g
        for _ in range(2, expr.n + 1):
            current = wreath_product(current, g)
        return current
    if isinstance(expr, dsl.ExtensionRef):
        entry = _EXTENSIONS.get(expr.name)
        if entry is None:
            raise UnregisteredConstructionError(
                f"no construction registered under {expr.name!r}"
            )
        return entry.group_factory()
    raise UnregisteredConstructionError(f"unknown expression {expr!r}")


def _finite_group_chain(group: Group) -> ChainSchema:
    if group.order is not None and group.order <= ORACLE_CAP:
        sets = minimax_chain(group)[1:]
        return finite_chain(group, sets, name=f"minimax chain over {group.tag}")
    return single_step_chain(group)


def _omega_shaped(chain: ChainSchema) -> ChainSchema:
    return promote_to_omega(chain) if chain.num_blocks == 0 else chain


def chain_for(expr: dsl.GroupExpr) -> ChainSchema:
    """The registered chain construction for an expression shape."""
    if isinstance(expr, dsl.Trivial):
        return finite_chain(make_cyclic(1), [], name="trivial")
    if isinstance(expr, (dsl.Cyclic, dsl.Perm)):
        return _finite_group_chain(build_group(expr))
    if isinstance(expr, dsl.Int):
        return integers_chain(2)
    if isinstance(expr, dsl.Dinf):
        return dihedral_chain(2)
    if isinstance(expr, dsl.Product):
        return _product_chain(expr.items)
    if isinstance(expr, dsl.FinSupportPower):
        base_chain = chain_for(expr.base)
        if expr.points == "N":
            return power_chain(_omega_shaped(base_chain), _natural_points())
        return diagonal_power_chain(base_chain, FinitePoints(range(expr.points)))
    if isinstance(expr, dsl.Wreath):
        w = wreath_product(build_group(expr.base), build_group(expr.top))
        top_chain = chain_for(expr.top)
        base_chain = chain_for(expr.base)
        if w.top.order is None:
            kernel_chain = power_chain(_omega_shaped(base_chain), w.points)
        else:
            kernel_chain = diagonal_power_chain(base_chain, w.points)
        return concat_extension(w.extension(), top_chain, kernel_chain)
    if isinstance(expr, dsl.Tower):
        g = build_group(expr.base)
        return tower_chain(g, chain_for(expr.base), expr.n)
    if isinstance(expr, dsl.ExtensionRef):
        entry = _EXTENSIONS.get(expr.name)
        if entry is None or entry.chain_factory is None:
            raise UnregisteredConstructionError(
                f"no chain constructor registered under {expr.name!r}"
            )
        return entry.chain_factory()
    raise UnregisteredConstructionError(f"unknown expression {expr!r}")


def _product_chain(items: tuple) -> ChainSchema:
    if len(items) == 1:
        return chain_for(items[0])
    factors = [build_group(i) for i in items]
    total = DirectProductGroup(factors)
    head = factors[0]
    rest_exprs = items[1:]
    if len(rest_exprs) == 1:
        rest_group = factors[1]
        embed = lambda k: Element(total, (head.identity_value(), k.value))
        retract = lambda e: Element(rest_group, e.value[1])
    else:
        rest_group = DirectProductGroup(factors[1:])
        embed = lambda k: Element(total, (head.identity_value(),) + k.value)
        retract = lambda e: Element(rest_group, e.value[1:])
    identities = tuple(f.identity_value() for f in factors[1:])
    ext = extension_from_quotient(
        total=total,
        projection=lambda e: Element(head, e.value[0]),
        quotient=head,
        section=lambda q: Element(total, (q.value,) + identities),
        kernel_group=rest_group,
        kernel_embed=embed,
        kernel_retract=retract,
    )
    return concat_extension(ext, chain_for(items[0]), _product_chain(rest_exprs))


def _tower_claim(expr: dsl.Tower) -> tuple[Optional[Ordinal], str, tuple[str, ...]]:
    base = build_group(expr.base)
    hypotheses_met = (
        base.order is None
        and base.is_residually_finite_claimed
        and base.has_finite_abelianization_claimed
    )
    if hypotheses_met:
        return (
            multiply(OMEGA, expr.n),
            "iterated wreath tower: exact depth claimed",
            (),
        )
    return (
        None,
        "",
        (
            "exact-depth claim withheld: the tower base does not carry the "
            "residual-finiteness and finite-abelianization hypotheses",
        ),
    )


def _valid_depth_bound(length: Ordinal) -> Ordinal:
    """Collapse a chain length to the depth bound it certifies.

    A chain of length limit + n with n >= 2 compresses its finite tail into
    a single jump, so it certifies depth at most limit + 1; reported depths
    then always have a valid shape (0, 1, limit, or limit + 1).
    """
    if length == ZERO:
        return length
    from .ordinal import decompose_successor

    limit_part, tail = decompose_successor(length)
    return add(limit_part, min(tail, 1))


def depth_interval(expr: dsl.GroupExpr) -> DepthInterval:
    """Bracket the depth of the group an expression denotes.

    The upper bound is the compressed length of the registered chain; the
    lower bound is the registered fact for the group (0 trivial, 1
    nontrivial finite, w infinite).  Externally claimed exact values are
    attached for towers and for wreaths of towers by nontrivial finite
    groups; when such a claim falls outside the bracket the interval flags
    the discrepancy instead of resolving it.
    """
    group = build_group(expr)
    chain = chain_for(expr)
    upper = _valid_depth_bound(chain.length)
    if group.order == 1:
        lower = ZERO
    elif group.order is not None:
        lower = ONE
    else:
        lower = OMEGA
    claimed: Optional[Ordinal] = None
    claim_tag = ""
    flags: tuple[str, ...] = ()
    if isinstance(expr, dsl.Tower):
        claimed, claim_tag, flags = _tower_claim(expr)
    elif isinstance(expr, dsl.Wreath) and isinstance(expr.base, dsl.Tower):
        top = build_group(expr.top)
        if top.order is not None and top.order > 1:
            tower_claim, _, tower_flags = _tower_claim(expr.base)
            if tower_claim is not None:
                claimed = add(tower_claim, 1)
                claim_tag = "tower wreath a nontrivial finite group: claimed one past the tower depth"
            flags = tower_flags
    interval = DepthInterval(
        lower=lower, upper=upper, paper_claimed=claimed, claim_tag=claim_tag, flags=flags,
    )
    if interval.claim_discrepancy:
        interval = DepthInterval(
            lower=lower,
            upper=upper,
            paper_claimed=claimed,
            claim_tag=claim_tag,
            flags=flags
            + (
                "claimed exact depth lies outside the constructed bracket: the "
                "concatenated chain gives a tighter upper bound; discrepancy "
                "reported, not adjudicated",
            ),
        )
    return interval
