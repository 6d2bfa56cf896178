"""
Finite wreath products G_n = G^n x| S_n acting on X^n, enumerated by brute force.

Everything here is exact enumeration at desk scale and serves as an independent
oracle for the orbifold generating series. Conjugacy classes are found by
explicit conjugation, never by the type classification they are used to test.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional, Sequence

from pydantic import BaseModel, Field, PrivateAttr, field_validator, model_validator
from sympy.utilities.iterables import partitions

from .config import settings
from .exceptions import ContractError, GuardExceededError, ShapeMismatchError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x: Hashable) -> Hashable:
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x: Hashable, y: Hashable) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        del self.rank[y]

    def __len__(self) -> int:
        return len(self.rank)


def count_orbits(gens: Iterable[Any], space: Sequence[Hashable], act: Callable[[Any, Hashable], Hashable]) -> int:
    """Number of orbits of the group generated by ``gens`` on ``space``."""
    uf = UnionFind(space)
    for g in gens:
        for x in space:
            uf.union(x, act(g, x))
    return len(uf)


# ---------------------------------------------------------------------------
# finite group actions
# ---------------------------------------------------------------------------

class GroupElement(BaseModel):
    label: str = Field(..., min_length=1)
    perm: list[int] = Field(..., description="Images of the points 1..x_size")


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


class FiniteGroupAction(BaseModel):
    """A finite group given as permutations of the points {1..x_size}.

    Permutations are 1-based in JSON and 0-based internally. The action must be
    faithful (distinct elements act differently) and closed under composition.
    """
    x_size: int = Field(..., ge=1)
    elements: list[GroupElement] = Field(..., min_length=1)

    _perms: list[tuple[int, ...]] = PrivateAttr(default_factory=list)
    _table: list[list[int]] = PrivateAttr(default_factory=list)
    _inverse: list[int] = PrivateAttr(default_factory=list)
    _identity: int = PrivateAttr(default=0)
    _classes: list[list[int]] = PrivateAttr(default_factory=list)
    _class_of: list[int] = PrivateAttr(default_factory=list)

    @field_validator("elements")
    @classmethod
    def validate_labels(cls, v: list[GroupElement]) -> list[GroupElement]:
        labels = [e.label for e in v]
        if len(set(labels)) != len(labels):
            raise ValueError("group element labels must be unique")
        return v

    @model_validator(mode="after")
    def validate_group(self) -> "FiniteGroupAction":
        perms = []
        for e in self.elements:
            if sorted(e.perm) != list(range(1, self.x_size + 1)):
                raise ValueError(f"{e.label}: {e.perm} is not a permutation of 1..{self.x_size}")
            perms.append(tuple(x - 1 for x in e.perm))
        index = {p: i for i, p in enumerate(perms)}
        if len(index) != len(perms):
            raise ValueError("the action is not faithful: two elements have the same permutation")
        if tuple(range(self.x_size)) not in index:
            raise ValueError("the identity permutation is missing")
        for p, q in itertools.product(perms, repeat=2):
            if _compose(p, q) not in index:
                raise ValueError("the elements are not closed under composition")
        self._build_tables()
        return self

    def _build_tables(self) -> None:
        self._perms = [tuple(x - 1 for x in e.perm) for e in self.elements]
        index = {p: i for i, p in enumerate(self._perms)}
        self._identity = index[tuple(range(self.x_size))]
        self._table = [[index[_compose(p, q)] for q in self._perms] for p in self._perms]
        self._inverse = [row.index(self._identity) for row in self._table]
        self._class_of = [-1] * len(self._perms)
        self._classes = []
        # identity class first, the rest in element order
        for g in [self._identity] + [i for i in range(len(self._perms)) if i != self._identity]:
            if self._class_of[g] >= 0:
                continue
            members = sorted({self.multiply(self.multiply(x, g), self._inverse[x]) for x in range(self.order)})
            for h in members:
                self._class_of[h] = len(self._classes)
            self._classes.append(members)

    @property
    def order(self) -> int:
        return len(self._perms)

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.elements]

    @property
    def conjugacy_classes(self) -> list[list[int]]:
        """Conjugacy classes of G as element indices; the identity class comes first."""
        return [list(c) for c in self._classes]

    def multiply(self, g: int, h: int) -> int:
        return self._table[g][h]

    def inverse(self, g: int) -> int:
        return self._inverse[g]

    def class_of(self, g: int) -> int:
        return self._class_of[g]

    def apply(self, g: int, x: int) -> int:
        return self._perms[g][x]

    def centralizer(self, g: int) -> list[int]:
        return [z for z in range(self.order) if self._table[z][g] == self._table[g][z]]

    def fixed_points(self, g: int) -> list[int]:
        return [x for x in range(self.x_size) if self._perms[g][x] == x]

    def orbit_count(self) -> int:
        """|X/G|."""
        return count_orbits(range(self.order), range(self.x_size), self.apply)

    def to_json(self) -> dict[str, Any]:
        return self.model_dump()


def _action(x_size: int, perms: dict[str, Sequence[int]]) -> FiniteGroupAction:
    return FiniteGroupAction(
        x_size=x_size,
        elements=[GroupElement(label=label, perm=[x + 1 for x in p]) for label, p in perms.items()],
    )


def trivial_action(x_size: int = 1) -> FiniteGroupAction:
    return _action(x_size, {"e": range(x_size)})


def cyclic_action(m: int, fixed: int = 0) -> FiniteGroupAction:
    """Z/m rotating m points, with ``fixed`` extra points left alone."""
    rest = list(range(m, m + fixed))
    return _action(m + fixed, {
        ("e" if k == 0 else f"r{k}"): [(x + k) % m for x in range(m)] + rest for k in range(m)
    })


def symmetric_action(k: int) -> FiniteGroupAction:
    """S_k permuting k points."""
    return _action(k, {"".join(str(x + 1) for x in p): p for p in itertools.permutations(range(k))})


SAMPLE_ACTIONS: dict[str, Callable[[], FiniteGroupAction]] = {
    "trivial": trivial_action,
    "z2": lambda: cyclic_action(2),
    "z3": lambda: cyclic_action(3),
    "s3": lambda: symmetric_action(3),
}


def sample_action(name: str) -> FiniteGroupAction:
    """One of the sample actions: trivial on a point, Z/2 and Z/3 by rotation, S3 on three points."""
    try:
        return SAMPLE_ACTIONS[name]()
    except KeyError:
        raise ContractError(f"unknown sample group {name!r}; expected one of {sorted(SAMPLE_ACTIONS)}") from None


# ---------------------------------------------------------------------------
# wreath elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class WreathElement:
    """(g, s) in G_n: g holds group-element indices, s the images of 0..n-1."""
    g: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self):
        if len(self.g) != len(self.s):
            raise ShapeMismatchError(f"g has {len(self.g)} entries but s permutes {len(self.s)} points")
        if sorted(self.s) != list(range(len(self.s))):
            raise ContractError(f"{self.s} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.s)

    def describe(self, action: FiniteGroupAction) -> dict[str, Any]:
        labels = action.labels
        return {"g": [labels[x] for x in self.g], "s": [x + 1 for x in self.s]}


def _inverse_perm(s: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(s)
    for i, x in enumerate(s):
        inv[x] = i
    return tuple(inv)


def wreath_identity(n: int, action: FiniteGroupAction) -> WreathElement:
    return WreathElement((action.identity,) * n, tuple(range(n)))


def wreath_multiply(a: WreathElement, b: WreathElement, action: FiniteGroupAction) -> WreathElement:
    """(g, s)(h, t) = (g . s(h), s t) with s(h)_i = h_{s^-1(i)}."""
    if a.n != b.n:
        raise ShapeMismatchError(f"cannot multiply elements of G_{a.n} and G_{b.n}")
    s_inv = _inverse_perm(a.s)
    g = tuple(action.multiply(a.g[i], b.g[s_inv[i]]) for i in range(a.n))
    return WreathElement(g, _compose(a.s, b.s))


def wreath_inverse(a: WreathElement, action: FiniteGroupAction) -> WreathElement:
    """(g, s)^-1 = (s^-1(g^-1), s^-1)."""
    return WreathElement(tuple(action.inverse(a.g[a.s[i]]) for i in range(a.n)), _inverse_perm(a.s))


def wreath_act(a: WreathElement, x: Sequence[int], action: FiniteGroupAction) -> tuple[int, ...]:
    """((g_1..g_n), s)(x_1..x_n) = (g_1 x_{s^-1(1)}, ..., g_n x_{s^-1(n)})."""
    if len(x) != a.n:
        raise ShapeMismatchError(f"point of X^{len(x)} given to an element of G_{a.n}")
    s_inv = _inverse_perm(a.s)
    return tuple(action.apply(a.g[i], x[s_inv[i]]) for i in range(a.n))


def _check_guard(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise GuardExceededError(f"{what} has {value} elements, above the limit {limit}")


def wreath_group_order(n: int, action: FiniteGroupAction) -> int:
    return action.order ** n * math.factorial(n)


def wreath_group_elements(n: int, action: FiniteGroupAction, limit: Optional[int] = None) -> Iterator[WreathElement]:
    """All (g, s) in G_n.

    Raises:
        GuardExceededError: If |G|^n n! exceeds ``limit`` (WREATH_GROUP_LIMIT by default).
    """
    _check_guard(wreath_group_order(n, action), limit or settings.WREATH_GROUP_LIMIT, f"G_{n}")
    for s in itertools.permutations(range(n)):
        for g in itertools.product(range(action.order), repeat=n):
            yield WreathElement(g, s)


def wreath_generators(n: int, action: FiniteGroupAction) -> list[WreathElement]:
    """G in the first slot, a transposition and an n-cycle: together they generate G_n."""
    ident = tuple(range(n))
    gens = []
    if n == 0:
        return gens
    for h in range(action.order):
        if h != action.identity:
            gens.append(WreathElement((h,) + (action.identity,) * (n - 1), ident))
    e = (action.identity,) * n
    if n >= 2:
        gens.append(WreathElement(e, (1, 0) + ident[2:]))
    if n >= 3:
        gens.append(WreathElement(e, tuple((i + 1) % n for i in range(n))))
    return gens


# ---------------------------------------------------------------------------
# types and conjugacy classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WreathType:
    """Partition-valued function on the conjugacy classes of G.

    ``parts[c]`` holds the cycle lengths whose cycle-product lies in class c,
    in non-increasing order.
    """
    parts: tuple[tuple[int, ...], ...]

    @property
    def norm(self) -> int:
        return sum(sum(p) for p in self.parts)

    def describe(self, action: FiniteGroupAction) -> dict[str, list[int]]:
        labels = action.labels
        return {labels[cls[0]]: list(p) for cls, p in zip(action.conjugacy_classes, self.parts) if p}


def cycle_products(a: WreathElement, action: FiniteGroupAction) -> list[tuple[int, int]]:
    """(cycle length, cycle-product g_{i_r} ... g_{i_1}) for each cycle i_1 -> s(i_1) -> ... of s."""
    seen = [False] * a.n
    out = []
    for start in range(a.n):
        if seen[start]:
            continue
        product, length, i = action.identity, 0, start
        while not seen[i]:
            seen[i] = True
            product = action.multiply(a.g[i], product)
            length += 1
            i = a.s[i]
        out.append((length, product))
    return out


def element_type(a: WreathElement, action: FiniteGroupAction) -> WreathType:
    parts: list[list[int]] = [[] for _ in action.conjugacy_classes]
    for length, product in cycle_products(a, action):
        parts[action.class_of(product)].append(length)
    return WreathType(tuple(tuple(sorted(p, reverse=True)) for p in parts))


@dataclass(frozen=True)
class WreathClass:
    representative: WreathElement
    size: int
    type: WreathType
    members: frozenset[WreathElement]


def wreath_conjugacy_classes(n: int, action: FiniteGroupAction, limit: Optional[int] = None) -> list[WreathClass]:
    """Conjugacy classes of G_n by closing each element under conjugation by generators.

    Raises:
        GuardExceededError: If |G|^n n! exceeds the group guard.
    """
    elements = list(wreath_group_elements(n, action, limit))
    gens = wreath_generators(n, action)
    conjugators = [(x, wreath_inverse(x, action)) for x in gens]
    unseen = set(elements)
    classes = []
    for start in elements:
        if start not in unseen:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for x, x_inv in conjugators:
                b = wreath_multiply(wreath_multiply(x, a, action), x_inv, action)
                if b not in orbit:
                    orbit.add(b)
                    queue.append(b)
        unseen -= orbit
        rep = min(orbit)
        classes.append(WreathClass(rep, len(orbit), element_type(rep, action), frozenset(orbit)))
    logger.debug(f"G_{n} of order {len(elements)} has {len(classes)} conjugacy classes")
    return sorted(classes, key=lambda c: c.representative)


def enumerate_wreath_types(k: int, n: int) -> list[WreathType]:
    """All partition-valued functions on k classes with total size n."""
    if k < 1:
        raise ContractError("a group has at least one conjugacy class")
    types = []
    # stars and bars: split n into k non-negative sizes
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        cuts = (-1,) + bars + (n + k - 1,)
        sizes = [cuts[i + 1] - cuts[i] - 1 for i in range(k)]
        choices = []
        for size in sizes:
            if size == 0:
                choices.append([()])
                continue
            choices.append([
                tuple(sorted((r for r, mult in p.items() for _ in range(mult)), reverse=True))
                for p in partitions(size)
            ])
        types.extend(WreathType(tuple(combo)) for combo in itertools.product(*choices))
    return types


def count_wreath_types(k: int, n: int) -> int:
    return len(enumerate_wreath_types(k, n))


# ---------------------------------------------------------------------------
# orbifold Euler characteristic of (X^n, G_n)
# ---------------------------------------------------------------------------

def _wreath_space(n: int, action: FiniteGroupAction, limit: Optional[int] = None) -> list[tuple[int, ...]]:
    _check_guard(action.x_size ** n, limit or settings.WREATH_SPACE_LIMIT, f"X^{n}")
    return list(itertools.product(range(action.x_size), repeat=n))


def wreath_oracle_euler(action: FiniteGroupAction, n: int, group_limit: Optional[int] = None,
                        space_limit: Optional[int] = None) -> int:
    """chi(X^n, G_n) = sum over classes [a] of the number of Z(a)-orbits on (X^n)^a.

    Raises:
        GuardExceededError: If G_n or X^n is above its guard.
    """
    if n == 0:
        return 1
    space = _wreath_space(n, action, space_limit)
    classes = wreath_conjugacy_classes(n, action, group_limit)
    elements = [a for c in classes for a in c.members]
    act = lambda z, x: wreath_act(z, x, action)
    total = 0
    for c in classes:
        a = c.representative
        fixed = [x for x in space if act(a, x) == x]
        if not fixed:
            continue
        centralizer = [z for z in elements if wreath_multiply(z, a, action) == wreath_multiply(a, z, action)]
        total += count_orbits(centralizer, fixed, act)
    logger.info(f"chi(X^{n}, G_{n}) = {total} over {len(classes)} classes")
    return total


def wreath_orbit_count(action: FiniteGroupAction, n: int, space_limit: Optional[int] = None) -> int:
    """|X^n / G_n| by brute force."""
    if n == 0:
        return 1
    space = _wreath_space(n, action, space_limit)
    return count_orbits(wreath_generators(n, action), space, lambda z, x: wreath_act(z, x, action))


def symmetric_orbit_count(k: int, n: int, space_limit: Optional[int] = None) -> int:
    """|Y^n / S_n| for a k-point set Y, by brute force."""
    return wreath_orbit_count(trivial_action(k), n, space_limit)
